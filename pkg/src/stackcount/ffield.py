"""Finite fields F_{p^k} and dense linear algebra over them.

Elements are integers ``0 <= a < p**k``; the base-p digits of ``a`` are the
coefficients of a polynomial in ``x`` reduced modulo a fixed irreducible
``modulus``.  The prime subfield is ``{0, ..., p-1}``, so an integer ``n``
read as a field element is simply ``n % p``.

Small fields carry addition/multiplication tables; all matrix routines and the
enumeration kernels work from those tables.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels as K

__all__ = [
    "FieldSpec",
    "field_make",
    "is_prime",
    "mat_mul",
    "mat_rank",
    "mat_rref",
    "mat_nullspace",
    "mat_is_nilpotent",
    "mat_is_invertible",
    "identity",
    "DEFAULT_MAX_ORDER",
    "TABLE_MAX_ORDER",
]

DEFAULT_MAX_ORDER = 2**20
TABLE_MAX_ORDER = 2**10


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _digits(a: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # m monic, ascending
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [x % p for x in a[:dm]] + [0] * max(0, dm - len(a))


def _is_irreducible(m: list[int], p: int) -> bool:
    """True if monic ``m`` (ascending) is irreducible over F_p, by trial division."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            f = list(tail) + [1]
            if not any(_poly_mod(m, f, p)):
                return False
    return True


@lru_cache(maxsize=None)
def _least_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for enc in range(p**k):
        m = _digits(enc, p, k) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise RuntimeError(f"no irreducible polynomial of degree {k} over F_{p}")


class FieldSpec:
    """The field F_{p^k} with a deterministic modulus.

    The modulus is the monic irreducible of degree ``k`` whose coefficient
    vector, read as a base-p integer, is smallest.
    """

    def __init__(self, p: int, k: int = 1, max_order: int = DEFAULT_MAX_ORDER):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if p**k > max_order:
            raise ValueError(f"field of order {p**k} exceeds the bound {max_order}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = _least_irreducible(p, k)
        self._tables = None

    def __repr__(self):
        return f"FieldSpec(F_{self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    # --- scalar arithmetic ------------------------------------------------

    def _mul_slow(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = _digits(a, p, k), _digits(b, p, k)
        prod_ = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod_[i + j] += x * y
        red = _poly_mod(prod_, list(self.modulus), p)
        return sum(c * p**i for i, c in enumerate(red))

    def _add_slow(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        return sum(((x + y) % p) * p**i
                   for i, (x, y) in enumerate(zip(_digits(a, p, k), _digits(b, p, k))))

    def _neg_slow(self, a: int) -> int:
        p, k = self.p, self.k
        return sum(((-x) % p) * p**i for i, x in enumerate(_digits(a, p, k)))

    @property
    def tables(self):
        """(add, mul, neg, inv) lookup tables as int64 arrays."""
        if self._tables is None:
            if self.q > TABLE_MAX_ORDER:
                raise ValueError(f"no lookup tables for fields above {TABLE_MAX_ORDER}")
            self._tables = self._build_tables()
        return self._tables

    def _build_tables(self):
        q, p = self.q, self.p
        elems = np.arange(q, dtype=np.int64)
        if self.k == 1:
            add = (elems[:, None] + elems[None, :]) % p
            mul = (elems[:, None] * elems[None, :]) % p
            neg = (-elems) % p
        else:
            digits = np.array([_digits(a, p, self.k) for a in range(q)], dtype=np.int64)
            weights = p ** np.arange(self.k, dtype=np.int64)
            sums = (digits[:, None, :] + digits[None, :, :]) % p
            add = sums @ weights
            neg = ((-digits) % p) @ weights
            # multiplication via discrete logs of a generator
            gen = self._find_generator()
            exp = np.zeros(q - 1, dtype=np.int64)
            log = np.zeros(q, dtype=np.int64)
            x = 1
            for i in range(q - 1):
                exp[i] = x
                log[x] = i
                x = self._mul_slow(x, gen)
            mul = np.zeros((q, q), dtype=np.int64)
            nz = elems[1:]
            mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        for t in (add, mul, neg, inv):
            t.setflags(write=False)
        return (np.ascontiguousarray(add), np.ascontiguousarray(mul),
                np.ascontiguousarray(neg), inv)

    def _find_generator(self) -> int:
        q = self.q
        n = q - 1
        primes = [f for f in range(2, n + 1) if n % f == 0 and is_prime(f)]
        for g in range(2, q):
            if all(self._pow_slow(g, n // f) != 1 for f in primes):
                return g
        return 1

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    def add(self, a: int, b: int) -> int:
        if self.q <= TABLE_MAX_ORDER:
            return int(self.tables[0][a, b])
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        if self.q <= TABLE_MAX_ORDER:
            return int(self.tables[2][a])
        return self._neg_slow(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.q <= TABLE_MAX_ORDER:
            return int(self.tables[1][a, b])
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.q <= TABLE_MAX_ORDER:
            return int(self.tables[3][a])
        return self._pow_slow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def elements(self) -> range:
        return range(self.q)

    def gl_order(self, n: int) -> int:
        """#GL_n(F_q)."""
        out = 1
        for i in range(n):
            out *= self.q**n - self.q**i
        return out


def field_make(p: int, k: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    return FieldSpec(p, k, max_order)


def field_of_order(q: int) -> FieldSpec:
    """The field with ``q`` elements (``q`` a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return FieldSpec(p, k)
    raise ValueError(f"{q} is not a prime power")


__all__.append("field_of_order")


# --- matrices ------------------------------------------------------------------
# Matrices are 2-d int64 arrays of field elements.


def _as_mat(m) -> np.ndarray:
    return np.ascontiguousarray(np.array(m, dtype=np.int64).reshape(np.shape(m)))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(F: FieldSpec, a, b) -> np.ndarray:
    add, mul, _, _ = F.tables
    return K.matmul(_as_mat(a), _as_mat(b), add, mul)


def mat_rref(F: FieldSpec, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    add, mul, neg, inv = F.tables
    a = _as_mat(m).copy()
    if a.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    piv = np.zeros(max(a.shape[1], 1), dtype=np.int64)
    r = K.rref(a, a.shape[0], a.shape[1], add, mul, neg, inv, piv)
    return a, [int(c) for c in piv[:r]]


def mat_rank(F: FieldSpec, m) -> int:
    a = _as_mat(m)
    if a.size == 0:
        return 0
    return len(mat_rref(F, a)[1])


def mat_nullspace(F: FieldSpec, m) -> np.ndarray:
    """Basis of ``{v : m v = 0}`` as the rows of the returned array."""
    a = _as_mat(m)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = mat_rref(F, a)
    add, mul, neg, inv = F.tables
    out = np.zeros((cols, cols), dtype=np.int64)
    pv = np.array(piv + [0], dtype=np.int64)
    k = K.nullspace_from_rref(r, len(piv), cols, pv, neg, out)
    return out[:k].copy()


def _check_square(m: np.ndarray):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")


def mat_is_nilpotent(F: FieldSpec, m, size: int | None = None) -> bool:
    a = _as_mat(m)
    _check_square(a)
    add, mul, _, _ = F.tables
    return K.is_nilpotent(a, a.shape[0], add, mul)


def mat_is_invertible(F: FieldSpec, m) -> bool:
    a = _as_mat(m)
    _check_square(a)
    return mat_rank(F, a) == a.shape[0]
