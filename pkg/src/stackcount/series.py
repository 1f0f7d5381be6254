"""Truncated multivariate power series with plethystic operations.

Coefficients may be ``int``/``Fraction`` (on which Adams operations act
trivially), :class:`~stackcount.exact.QRatFun` or
:class:`~stackcount.volume.Volume`.  A series is truncated at a total degree
``bound`` and optionally at per-variable ``caps``; binary operations use the
smaller truncation of the two operands.

Volume coefficients lose validity under Adams operations.  A coefficient
whose validity reaches zero is kept as an empty volume, poisons everything it
touches, and is reported through :attr:`MSeries.dropped`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .exact import QPoly, QRatFun
from .volume import Volume

__all__ = [
    "MSeries",
    "adams",
    "series_arith",
    "series_psi",
    "pleth_exp",
    "pleth_log",
    "pleth_pow",
    "pow_product_form",
    "moebius",
    "divisors",
    "coeff_to_json",
    "coeff_from_json",
]


def adams(c, n: int):
    """psi_n on a coefficient."""
    if n == 1 or isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, Volume):
        return c.adams(n, strict=False)
    return c.adams(n)


def _is_exact_zero(c) -> bool:
    if isinstance(c, Volume):
        return False
    return c == 0


@lru_cache(maxsize=None)
def moebius(n: int) -> int:
    """Classical Moebius function."""
    if n < 1:
        raise ValueError("moebius is defined for positive integers")
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    return [r for r in range(1, n + 1) if n % r == 0]


def _min_caps(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return tuple(min(x, y) for x, y in zip(a, b))


class MSeries:
    """Truncated power series in ``nvars`` variables."""

    __slots__ = ("nvars", "bound", "caps", "coeffs")

    def __init__(self, nvars: int, bound: int, coeffs: Optional[Mapping] = None,
                 caps: Optional[Sequence[int]] = None):
        if nvars < 0 or bound < 0:
            raise ValueError("nvars and bound must be nonnegative")
        self.nvars = nvars
        self.bound = bound
        self.caps = tuple(caps) if caps is not None else None
        if self.caps is not None and len(self.caps) != nvars:
            raise ValueError("caps length must equal nvars")
        self.coeffs: dict[tuple, object] = {}
        for e, c in (coeffs or {}).items():
            e = self._norm_exp(e)
            if self.fits(e) and not _is_exact_zero(c):
                self.coeffs[e] = c

    def _norm_exp(self, e) -> tuple:
        if isinstance(e, int):
            e = (e,)
        e = tuple(int(x) for x in e)
        if len(e) != self.nvars or any(x < 0 for x in e):
            raise ValueError(f"bad exponent {e} for {self.nvars} variables")
        return e

    def fits(self, e: tuple) -> bool:
        if sum(e) > self.bound:
            return False
        if self.caps is not None:
            return all(x <= c for x, c in zip(e, self.caps))
        return True

    # --- constructors -----------------------------------------------------

    @classmethod
    def _like(cls, nvars, bound, caps, coeffs) -> "MSeries":
        s = object.__new__(cls)
        s.nvars, s.bound, s.caps = nvars, bound, caps
        s.coeffs = coeffs
        return s

    @classmethod
    def one(cls, nvars: int, bound: int, caps=None) -> "MSeries":
        return cls(nvars, bound, {(0,) * nvars: 1}, caps)

    @classmethod
    def zero(cls, nvars: int, bound: int, caps=None) -> "MSeries":
        return cls(nvars, bound, {}, caps)

    @classmethod
    def monomial(cls, nvars: int, bound: int, exp, coeff=1, caps=None) -> "MSeries":
        return cls(nvars, bound, {exp: coeff}, caps)

    @classmethod
    def univariate(cls, coeffs: Sequence, bound: Optional[int] = None) -> "MSeries":
        """Series ``sum c_i t^i`` from a coefficient list."""
        if bound is None:
            bound = max(len(coeffs) - 1, 0)
        return cls(1, bound, {(i,): c for i, c in enumerate(coeffs)})

    # --- access -------------------------------------------------------------

    @property
    def zero_exp(self) -> tuple:
        return (0,) * self.nvars

    def __getitem__(self, e):
        return self.coeffs.get(self._norm_exp(e), 0)

    def constant_term(self):
        return self.coeffs.get(self.zero_exp, 0)

    @property
    def dropped(self) -> frozenset:
        """Exponents whose numeric coefficient ran out of validity."""
        return frozenset(
            e for e, c in self.coeffs.items() if isinstance(c, Volume) and len(c) == 0
        )

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def truncate(self, bound: Optional[int] = None, caps=None) -> "MSeries":
        bound = self.bound if bound is None else min(bound, self.bound)
        caps = _min_caps(self.caps, tuple(caps) if caps is not None else None)
        return MSeries(self.nvars, bound, self.coeffs, caps)

    def map_coeffs(self, fn: Callable) -> "MSeries":
        return MSeries(self.nvars, self.bound, {e: fn(c) for e, c in self.coeffs.items()},
                       self.caps)

    def __eq__(self, other):
        if not isinstance(other, MSeries):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        bound = min(self.bound, other.bound)
        caps = _min_caps(self.caps, other.caps)
        a = self.truncate(bound, caps).coeffs
        b = other.truncate(bound, caps).coeffs
        return a == b

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return f"MSeries(0; bound={self.bound})"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                (f"t{i + 1}" if self.nvars > 1 else "t") + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e) if k
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return "MSeries(" + " + ".join(parts) + f"; bound={self.bound})"

    # --- arithmetic --------------------------------------------------------------

    def _check(self, other: "MSeries"):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if not isinstance(other, MSeries):
            return self + MSeries.monomial(self.nvars, self.bound, self.zero_exp, other, self.caps)
        self._check(other)
        bound = min(self.bound, other.bound)
        caps = _min_caps(self.caps, other.caps)
        out = MSeries(self.nvars, bound, self.coeffs, caps).coeffs
        for e, c in other.coeffs.items():
            if e in out:
                v = out[e] + c
                if _is_exact_zero(v):
                    del out[e]
                else:
                    out[e] = v
            elif sum(e) <= bound and (caps is None or all(x <= k for x, k in zip(e, caps))):
                out[e] = c
        return MSeries._like(self.nvars, bound, caps, out)

    __radd__ = __add__

    def __neg__(self):
        return MSeries._like(self.nvars, self.bound, self.caps,
                             {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, MSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MSeries":
        if _is_exact_zero(c):
            return MSeries.zero(self.nvars, self.bound, self.caps)
        out = {}
        for e, v in self.coeffs.items():
            w = v * c
            if not _is_exact_zero(w):
                out[e] = w
        return MSeries._like(self.nvars, self.bound, self.caps, out)

    def __mul__(self, other):
        if not isinstance(other, MSeries):
            return self.scale(other)
        self._check(other)
        bound = min(self.bound, other.bound)
        caps = _min_caps(self.caps, other.caps)
        out: dict = {}
        b_items = list(other.coeffs.items())
        for e1, c1 in self.coeffs.items():
            s1 = sum(e1)
            if s1 > bound:
                continue
            for e2, c2 in b_items:
                if s1 + sum(e2) > bound:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                if caps is not None and any(x > k for x, k in zip(e, caps)):
                    continue
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        out = {e: c for e, c in out.items() if not _is_exact_zero(c)}
        return MSeries._like(self.nvars, bound, caps, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, int):
            c = Fraction(c)
        if isinstance(c, Fraction):
            return self.scale(1 / c)
        return self.scale(1 / c)

    def psi(self, n: int) -> "MSeries":
        if n < 1:
            raise ValueError("Adams index must be positive")
        if n == 1:
            return self
        out = {}
        for e, c in self.coeffs.items():
            en = tuple(x * n for x in e)
            if self.fits(en):
                out[en] = adams(c, n)
        return MSeries._like(self.nvars, self.bound, self.caps, out)

    def substitute_monomial(self, d: Sequence[int], nvars: Optional[int] = None,
                            bound: Optional[int] = None) -> "MSeries":
        """Univariate ``f(t)`` -> ``f(t^d)`` in ``len(d)`` variables."""
        if self.nvars != 1:
            raise ValueError("monomial substitution needs a univariate series")
        d = tuple(d)
        nv = len(d) if nvars is None else nvars
        bd = self.bound * max(sum(d), 1) if bound is None else bound
        out = {tuple(k * x for x in d): c for (k,), c in self.coeffs.items()}
        return MSeries(nv, bd, out)


# --- series-level exp / log ---------------------------------------------------


def _nilpotency_order(a: MSeries) -> int:
    return a.bound


def _series_exp(a: MSeries) -> MSeries:
    """exp(a) for a with zero constant term."""
    result = MSeries.one(a.nvars, a.bound, a.caps)
    term = MSeries.one(a.nvars, a.bound, a.caps)
    for k in range(1, _nilpotency_order(a) + 1):
        term = (term * a) / k
        if not term.coeffs:
            break
        result = result + term
    return result


def _series_log1p(a: MSeries) -> MSeries:
    """log(1 + a) for a with zero constant term."""
    result = MSeries.zero(a.nvars, a.bound, a.caps)
    power = MSeries.one(a.nvars, a.bound, a.caps)
    for k in range(1, _nilpotency_order(a) + 1):
        power = power * a
        if not power.coeffs:
            break
        result = result + (power / k if k % 2 else -(power / k))
    return result


def _require_constant(a: MSeries, value: int, what: str):
    c = a.constant_term()
    if isinstance(c, Volume):
        ok = len(c) > 0 and all(x == value for x in c.entries)
    else:
        ok = c == value
    if not ok:
        raise ValueError(f"{what} requires constant term {value}, got {c}")


def series_arith(a: MSeries, b: MSeries, op: str) -> MSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def series_psi(a: MSeries, n: int) -> MSeries:
    return a.psi(n)


def _adams_sum(a: MSeries, weight: Callable[[int], Fraction]) -> MSeries:
    out = MSeries.zero(a.nvars, a.bound, a.caps)
    for n in range(1, a.bound + 1):
        w = weight(n)
        if w == 0:
            continue
        p = a.psi(n)
        if not p.coeffs:
            continue
        out = out + p.scale(w)
    return out


def pleth_exp(a: MSeries) -> MSeries:
    """``Exp(a) = exp(sum_n psi_n(a)/n)``."""
    _require_constant(a, 0, "Exp")
    a = MSeries._like(a.nvars, a.bound, a.caps,
                      {e: c for e, c in a.coeffs.items() if any(e)})
    return _series_exp(_adams_sum(a, lambda n: Fraction(1, n)))


def pleth_log(a: MSeries) -> MSeries:
    """Inverse of :func:`pleth_exp`: ``sum_n mu(n)/n psi_n(log a)``."""
    _require_constant(a, 1, "Log")
    rest = MSeries._like(a.nvars, a.bound, a.caps,
                         {e: c for e, c in a.coeffs.items() if any(e)})
    return _adams_sum(_series_log1p(rest), lambda n: Fraction(moebius(n), n))


def pleth_pow(a: MSeries, b) -> MSeries:
    """Power structure ``Pow(a, b) = Exp(b * Log(a))``."""
    return pleth_exp(pleth_log(a).scale(b))


def pow_product_form(a: MSeries, b_parts: Mapping[int, object]) -> MSeries:
    """``prod_r psi_r(a)^{b_r}`` with ``x^c = exp(c log x)``.

    Equals ``Pow(a, b)`` whenever ``psi_n(b) = sum_{r|n} r b_r``.
    """
    _require_constant(a, 1, "Pow")
    result = MSeries.one(a.nvars, a.bound, a.caps)
    one = MSeries.one(a.nvars, a.bound, a.caps)
    for r in range(1, a.bound + 1):
        br = b_parts.get(r, 0)
        if _is_exact_zero(br):
            continue
        ar = a.psi(r)
        log_ar = _series_log1p(ar - one)
        if not log_ar.coeffs:
            continue
        result = result * _series_exp(log_ar.scale(br))
    return result


# --- JSON -------------------------------------------------------------------


def coeff_to_json(c):
    if isinstance(c, Volume):
        return c.to_json()
    if isinstance(c, QRatFun):
        return c.to_json()
    if isinstance(c, QPoly):
        return QRatFun(c).to_json()
    return QRatFun.const(Fraction(c)).to_json()


def coeff_from_json(data):
    if "base_q" in data:
        return Volume.from_json(data)
    return QRatFun.from_json(data)


def series_to_json(s: MSeries) -> dict:
    out = {
        "vars": s.nvars,
        "bound": s.bound,
        "terms": [{"exp": list(e), "coeff": coeff_to_json(c)} for e, c in s.items()],
    }
    if s.caps is not None:
        out["caps"] = list(s.caps)
    return out


def series_from_json(data: dict) -> MSeries:
    return MSeries(
        int(data["vars"]),
        int(data["bound"]),
        {tuple(t["exp"]): coeff_from_json(t["coeff"]) for t in data["terms"]},
        data.get("caps"),
    )


__all__ += ["series_to_json", "series_from_json"]
