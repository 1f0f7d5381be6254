"""Counting typed elements and commuting pairs in ``End(P_d)`` over F_q.

``count_commuting`` uses the centralizer method: for each ``x`` of the outer
type it counts the elements of the required type in the centralizer of ``x``.
The outer loop runs over conjugacy-class representatives of the diagonal
blocks (weighted by class size) times every radical part; the inner count
projects the centralizer to the semisimple quotient, counts there and
multiplies by ``q`` to the dimension of the kernel.
"""

from __future__ import annotations

import os
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from . import _kernels as K
from .ffield import FieldSpec, mat_nullspace
from .quiver import EndAlgebra, Quiver, ZType, end_basis

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "ORACLE_BUDGET",
    "default_budget",
    "algebra",
    "count_type_in_subspace",
    "count_commuting",
    "count_aut",
    "naive_count_commuting",
    "conjugacy_classes",
]

DEFAULT_BUDGET = 2**34
ORACLE_BUDGET = 2**26
_INT64_SAFE = 2**62


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} iterations, budget is {budget}")


def default_budget() -> int:
    env = os.environ.get("STACKCOUNT_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


@lru_cache(maxsize=256)
def algebra(quiver: Quiver, dvec: tuple[int, ...]) -> EndAlgebra:
    """Cached :func:`end_basis`."""
    return end_basis(quiver, tuple(dvec))


def _block_arrays(alg: EndAlgebra):
    return (np.array(alg.block_sizes, dtype=np.int64),
            np.array(alg.block_offsets, dtype=np.int64))


def _closed_counts(alg: EndAlgebra, F: FieldSpec):
    q = F.q
    nil = np.array([q ** (d * d - d) for d in alg.block_sizes], dtype=np.int64)
    unit = np.array([F.gl_order(d) for d in alg.block_sizes], dtype=np.int64)
    return nil, unit


def count_type_in_subspace(alg: EndAlgebra, basis, z, F: FieldSpec,
                           budget: int | None = None, strategy: str = "auto") -> int:
    """Number of type-``z`` elements in the span of ``basis`` (rows of coordinates).

    ``strategy`` is ``"fiber"`` (project to the diagonal blocks and scale by
    the kernel), ``"full"`` (enumerate the span and test ambient matrices),
    ``"both"`` (run both and compare) or ``"auto"``.
    """
    z = ZType.parse(z)
    budget = default_budget() if budget is None else budget
    tables = F.tables
    basis = np.ascontiguousarray(np.array(basis, dtype=np.int64).reshape(-1, alg.dim))
    # an independent basis
    piv = np.zeros(alg.dim + 1, dtype=np.int64)
    b = basis.copy()
    k = K.rref(b, b.shape[0], alg.dim, *tables, piv) if b.shape[0] else 0
    b = b[:k]
    if z is ZType.ANY:
        return F.q**k
    R = alg.semisimple_dim
    results = {}
    if strategy in ("auto", "fiber", "both"):
        img = np.zeros((max(k, 1), R + 1), dtype=np.int64)
        img[:k, :R] = b[:, :R]
        piv2 = np.zeros(R + 1, dtype=np.int64)
        r2 = K.rref(img, k, R, *tables, piv2) if k else 0
        if F.q**r2 > budget:
            if strategy != "auto":
                raise BudgetExceeded(F.q**r2, budget, "fiber count")
        else:
            bs, bo = _block_arrays(alg)
            nilc, unitc = _closed_counts(alg, F)
            cnt = K.count_type_grouped(img, r2, R, bs, bo, z.code, F.p, F.k, *tables, nilc, unitc)
            results["fiber"] = int(cnt) * F.q ** (k - r2)
    if strategy in ("full", "both") or (strategy == "auto" and "fiber" not in results):
        if F.q**k > budget:
            raise BudgetExceeded(F.q**k, budget, "subspace enumeration")
        m = alg.ambient_size
        amb = np.zeros((k, m, m), dtype=np.int64)
        for i in range(k):
            amb[i] = alg.ambient_matrix(F, b[i])
        if k == 0:
            ok = z is ZType.NILPOTENT or m == 0
            results["full"] = 1 if ok else 0
        else:
            results["full"] = int(K.subspace_type_count_direct(amb, F.p, F.k, z.code, *tables))
    if strategy == "both" and results["fiber"] != results["full"]:
        raise AssertionError(f"fiber count {results['fiber']} != full count {results['full']}")
    return results.get("fiber", results.get("full"))


# --- conjugacy classes of M_d(F_q) -------------------------------------------


def _poly_mul(F: FieldSpec, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def _monic(F: FieldSpec, deg: int):
    """Monic polynomials of degree ``deg`` (ascending coefficient lists)."""
    for tail in product(range(F.q), repeat=deg):
        yield list(tail) + [1]


def _invariant_factor_lists(F: FieldSpec, d: int):
    """Sequences f_1 | f_2 | ... | f_r of monic polynomials with total degree d."""

    def rec(prev, remaining):
        if remaining == 0:
            yield []
            return
        lo = 1 if prev is None else len(prev) - 1
        for e in range(lo, remaining + 1):
            if prev is None:
                cands = _monic(F, e)
            else:
                cands = (_poly_mul(F, prev, g) for g in _monic(F, e - (len(prev) - 1)))
            for h in cands:
                for rest in rec(h, remaining - e):
                    yield [h] + rest

    yield from rec(None, d)


def _companion(F: FieldSpec, f) -> np.ndarray:
    n = len(f) - 1
    c = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        c[i, i - 1] = 1
    for i in range(n):
        c[i, n - 1] = F.neg(f[i])
    return c


def _centralizer_basis(F: FieldSpec, w: np.ndarray) -> np.ndarray:
    d = w.shape[0]
    ad = np.zeros((d * d, d * d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                # (w y)[i, j] += w[i, k] y[k, j];  (y w)[i, j] += y[i, k] w[k, j]
                if w[i, k]:
                    ad[i * d + j, k * d + j] = F.add(ad[i * d + j, k * d + j], w[i, k])
                if w[k, j]:
                    ad[i * d + j, i * d + k] = F.sub(ad[i * d + j, i * d + k], w[k, j])
    return mat_nullspace(F, ad)


@lru_cache(maxsize=64)
def conjugacy_classes(F: FieldSpec, d: int, budget: int = 2**24) -> tuple:
    """``((rep, class size), ...)`` for GL_d-conjugacy on M_d(F_q).

    Representatives are rational canonical forms; class sizes are
    ``#GL_d / #units of the centralizer``.  The sizes are checked to sum to
    ``q^(d^2)``.
    """
    q = F.q
    gl = F.gl_order(d)
    out = []
    tables = F.tables
    for factors in _invariant_factor_lists(F, d):
        w = np.zeros((d, d), dtype=np.int64)
        off = 0
        for f in factors:
            n = len(f) - 1
            w[off:off + n, off:off + n] = _companion(F, f)
            off += n
        if len(factors) == d:
            units = gl  # scalar matrix
        else:
            cb = _centralizer_basis(F, w)
            if q ** cb.shape[0] > budget:
                raise BudgetExceeded(q ** cb.shape[0], budget, "centralizer unit count")
            units = int(K.subspace_type_count_direct(cb.reshape(-1, d, d).copy(), F.p, F.k,
                                                     K.INVERTIBLE, *tables))
        out.append((tuple(int(v) for v in w.ravel()), gl // units))
    if sum(s for _, s in out) != q ** (d * d):
        raise AssertionError(f"class sizes of M_{d}(F_{q}) do not sum to q^{d * d}")
    return tuple(out)


def _block_type_ok(F: FieldSpec, flat, d: int, z: ZType) -> bool:
    if z is ZType.ANY:
        return True
    a = np.array(flat, dtype=np.int64).reshape(d, d)
    add, mul, neg, inv = F.tables
    if z is ZType.NILPOTENT:
        return bool(K.is_nilpotent(a, d, add, mul))
    return K.rank_inplace(a.copy(), d, d, add, mul, neg, inv) == d


def _block_choices(F: FieldSpec, d: int, z: ZType, levi: bool):
    """(flat block, weight) pairs covering the type-z part of M_d(F_q)."""
    if d == 0:
        return [((), 1)]
    if levi:
        try:
            return [(r, s) for r, s in conjugacy_classes(F, d) if _block_type_ok(F, r, d, z)]
        except BudgetExceeded:
            pass
    return [(tuple(v), 1) for v in product(range(F.q), repeat=d * d)
            if _block_type_ok(F, v, d, z)]


def _type_size_hint(z: ZType) -> int:
    return {ZType.NILPOTENT: 0, ZType.INVERTIBLE: 1, ZType.ANY: 2}[z]


def count_commuting(quiver: Quiver, dvec: Sequence[int], s1, s2, F: FieldSpec,
                    budget: int | None = None, levi: bool = True) -> int:
    """``#{(x, y) in A^s1 x A^s2 : xy = yx}`` for ``A = End(P_d)`` over F."""
    s1, s2 = ZType.parse(s1), ZType.parse(s2)
    budget = default_budget() if budget is None else budget
    dvec = tuple(int(v) for v in dvec)
    if len(dvec) != quiver.nvertices:
        raise ValueError(f"dimension vector {dvec} does not match {quiver.nvertices} vertices")
    alg = algebra(quiver, dvec)
    if alg.dim == 0:
        return 1
    # the sum is symmetric; put the smaller type outside
    if _type_size_hint(s2) < _type_size_hint(s1):
        s1, s2 = s2, s1
    q, p, kd = F.q, F.p, F.k
    D, R = alg.dim, alg.semisimple_dim
    nrad = D - R
    choices = [_block_choices(F, d, s1, levi) for d in alg.block_sizes]
    nreps = 1
    for c in choices:
        nreps *= len(c)
    needed = nreps * q**nrad
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    if nreps == 0:
        return 0
    bases = np.zeros((nreps, D), dtype=np.int64)
    weights = np.zeros(nreps, dtype=np.int64)
    for idx, combo in enumerate(product(*choices)):
        w = 1
        for off, (flat, s) in zip(alg.block_offsets, combo):
            bases[idx, off:off + len(flat)] = flat
            w *= s
        weights[idx] = w
    tables = F.tables
    unit_rad = np.zeros((nrad, D), dtype=np.int64)
    for j in range(nrad):
        unit_rad[j, R + j] = 1
    rad = K.expand_rows(unit_rad, nrad, p, kd, tables[1]) if nrad else np.zeros((0, D), dtype=np.int64)
    ta, tc, tb, tv = alg.commutator_tensor
    tv = tv % p
    bs, bo = _block_arrays(alg)
    nilc, unitc = _closed_counts(alg, F)
    total = 0
    # r2 (R - r2) <= R^2 / 4 free entries in a reduced basis
    use_cache = q ** (R * R // 4) * 2**R < _INT64_SAFE and s2 is not ZType.ANY
    cache = K.new_cache()
    nrad_iter = q**nrad
    inner_max = q**R
    for rep in range(nreps):
        w = int(weights[rep])
        step = max(1, _INT64_SAFE // max(1, w * inner_max))
        if w * inner_max >= _INT64_SAFE:
            raise OverflowError("class weight too large for 64-bit accumulation")
        lo = 0
        while lo < nrad_iter:
            hi = min(nrad_iter, lo + step)
            acc = np.zeros(D + 1, dtype=np.int64)
            K.centralizer_counts(bases, weights, rep, rep + 1, rad, lo, hi, D, R,
                                 ta, tc, tb, tv, bs, bo, s2.code, p, kd, *tables,
                                 nilc, unitc, cache, use_cache, acc)
            total += sum(int(a) * q**e for e, a in enumerate(acc))
            lo = hi
    return total


def count_aut(quiver: Quiver, dvec: Sequence[int], F: FieldSpec) -> int:
    """``#Aut(P_d) = prod_i #GL_{d_i}(F_q) * q^(dim rad)``."""
    alg = algebra(quiver, tuple(dvec))
    out = F.q**alg.radical_dim
    for d in alg.block_sizes:
        out *= F.gl_order(d)
    return out


def naive_count_commuting(quiver: Quiver, dvec: Sequence[int], s1, s2, F: FieldSpec,
                          budget: int = ORACLE_BUDGET) -> int:
    """Brute force over all pairs of elements with direct matrix type tests."""
    s1, s2 = ZType.parse(s1), ZType.parse(s2)
    alg = algebra(quiver, tuple(dvec))
    D = alg.dim
    if D == 0:
        return 1
    if F.q ** (2 * D) > budget:
        raise BudgetExceeded(F.q ** (2 * D), budget, "naive pair enumeration")
    tables = F.tables
    amb = np.ascontiguousarray(alg.ambient)
    mats = K.span_elements(amb, F.p, F.k, tables[0], tables[1])
    nil, unit = K.matrix_types(mats, *tables)

    def sel(z):
        if z is ZType.NILPOTENT:
            return np.nonzero(nil)[0].astype(np.int64)
        if z is ZType.INVERTIBLE:
            return np.nonzero(unit)[0].astype(np.int64)
        return np.arange(mats.shape[0], dtype=np.int64)

    return int(K.naive_commuting_pairs(mats, sel(s1), sel(s2), tables[0], tables[1]))
