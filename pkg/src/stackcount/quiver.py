"""Quivers, projective representations and their endomorphism algebras.

For a dimension vector ``d`` the representation ``P_d = (+)_i P(i)^{d_i}``
has, at vertex ``j``, the basis of triples ``(i, c, w)``: copy ``c`` of
``P(i)`` and a path ``w`` from ``i`` to ``j``.  Its endomorphism algebra
``A_d`` has the path basis ``E[(i,c) -> (j,c'), p]`` sending the top of copy
``(i, c)`` to the path ``p`` (from ``j`` to ``i``) in copy ``(j, c')``.
These elements are 0/1 matrices with disjoint supports, so they stay a basis
over every field.

Coordinates are ordered with the diagonal blocks first: for each vertex
``i``, the ``d_i x d_i`` matrix units along trivial paths.  Projecting onto
those first ``R = sum d_i^2`` coordinates is the quotient map
``A_d -> A_d / rad = prod_i M_{d_i}``; the remaining coordinates span the
radical.  For the linear quiver ``1 -> 2 -> ... -> n`` and ``d = (1,...,1)``
the algebra is the upper-triangular matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .exact import Q, QRatFun
from .ffield import FieldSpec

__all__ = [
    "Quiver",
    "QuiverParseError",
    "CyclicQuiverError",
    "parse_quiver",
    "ProjectiveRep",
    "EndAlgebra",
    "end_basis",
    "path_count",
    "ZType",
    "ElementType",
    "classify",
    "parse_dvec",
]


class QuiverParseError(ValueError):
    pass


class CyclicQuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    """Quiver on vertices ``0..nvertices-1``; arrows are (source, target)."""

    nvertices: int
    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        for s, t in self.arrows:
            if not (0 <= s < self.nvertices and 0 <= t < self.nvertices):
                raise QuiverParseError(f"arrow {s + 1}->{t + 1} outside 1..{self.nvertices}")

    @classmethod
    def linear(cls, n: int) -> "Quiver":
        """``1 -> 2 -> ... -> n``."""
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def kronecker(cls) -> "Quiver":
        return cls(2, ((0, 1), (0, 1)))

    @classmethod
    def trivial(cls) -> "Quiver":
        return cls(1, ())

    @property
    def is_acyclic(self) -> bool:
        indeg = [0] * self.nvertices
        for _, t in self.arrows:
            indeg[t] += 1
        ready = [v for v in range(self.nvertices) if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        return seen == self.nvertices

    def paths(self, i: int, j: int) -> list[tuple[int, ...]]:
        """All paths from ``i`` to ``j`` as tuples of arrow indices (acyclic only)."""
        if not self.is_acyclic:
            raise CyclicQuiverError("path enumeration needs an acyclic quiver")
        return self._paths_from(i)[j]

    @cached_property
    def _all_paths(self):
        return [self._enumerate_from(i) for i in range(self.nvertices)]

    def _paths_from(self, i):
        return self._all_paths[i]

    def _enumerate_from(self, i):
        out = {v: [] for v in range(self.nvertices)}
        stack = [(i, ())]
        while stack:
            v, p = stack.pop()
            out[v].append(p)
            for a, (s, t) in enumerate(self.arrows):
                if s == v:
                    stack.append((t, p + (a,)))
        for v in out:
            out[v].sort(key=lambda p: (len(p), p))
        return out

    def to_text(self) -> str:
        lines = [f"vertices {self.nvertices}"]
        lines += [f"{s + 1} {t + 1}" for s, t in self.arrows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"vertices": self.nvertices, "arrows": [[s + 1, t + 1] for s, t in self.arrows]}


def parse_quiver(text: str) -> Quiver:
    """Parse the ``vertices N`` / ``u v`` text format (1-based, ``#`` comments)."""
    n = None
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "vertices":
                raise QuiverParseError(f"line {lineno}: expected 'vertices N', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise QuiverParseError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n < 0:
                raise QuiverParseError(f"line {lineno}: negative vertex count")
            continue
        if len(parts) != 2:
            raise QuiverParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise QuiverParseError(f"line {lineno}: non-integer vertex in {raw!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise QuiverParseError(f"line {lineno}: vertex out of range 1..{n} in {raw!r}")
        arrows.append((u - 1, v - 1))
    if n is None:
        raise QuiverParseError("missing 'vertices N' header")
    return Quiver(n, tuple(arrows))


def parse_dvec(text: str) -> tuple[int, ...]:
    try:
        d = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"bad dimension vector {text!r}") from None
    if any(x < 0 for x in d):
        raise ValueError(f"negative entry in dimension vector {text!r}")
    return d


def path_count(quiver: Quiver, i: int, j: int) -> int:
    """Number of paths from ``i`` to ``j``."""
    return len(quiver.paths(i, j))


class ZType(enum.Enum):
    """Element types: nilpotent, invertible, arbitrary."""

    NILPOTENT = "0"
    INVERTIBLE = "*"
    ANY = "a"

    @classmethod
    def parse(cls, s) -> "ZType":
        if isinstance(s, ZType):
            return s
        for z in cls:
            if z.value == str(s):
                return z
        raise ValueError(f"unknown type {s!r}; expected one of 0, *, a")

    @property
    def volume(self) -> QRatFun:
        """Number of points of Z: 1, q-1, q."""
        return {"0": QRatFun.const(1), "*": Q - 1, "a": Q}[self.value]

    @property
    def code(self) -> int:
        return {"0": K.NILPOTENT, "*": K.INVERTIBLE, "a": K.ANY}[self.value]

    def __str__(self):
        return self.value


@dataclass
class ProjectiveRep:
    quiver: Quiver
    dvec: tuple[int, ...]
    vertex_basis: list  # per vertex j: list of (i, c, path)
    structure_maps: list  # per arrow: 0/1 int matrix dims[t] x dims[s]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.vertex_basis)


def projective_rep(quiver: Quiver, dvec: Sequence[int]) -> ProjectiveRep:
    dvec = tuple(int(x) for x in dvec)
    if len(dvec) != quiver.nvertices:
        raise ValueError(f"dimension vector {dvec} has wrong length for {quiver.nvertices} vertices")
    if not quiver.is_acyclic:
        raise CyclicQuiverError("projective representations need an acyclic quiver")
    n = quiver.nvertices
    vb = [[] for _ in range(n)]
    for i in range(n):
        for c in range(dvec[i]):
            for j in range(n):
                for p in quiver.paths(i, j):
                    vb[j].append((i, c, p))
    index = [{b: k for k, b in enumerate(vb[j])} for j in range(n)]
    maps = []
    for a, (s, t) in enumerate(quiver.arrows):
        m = np.zeros((len(vb[t]), len(vb[s])), dtype=np.int64)
        for k, (i, c, p) in enumerate(vb[s]):
            m[index[t][(i, c, p + (a,))], k] = 1
        maps.append(m)
    return ProjectiveRep(quiver, dvec, vb, maps)


__all__.append("projective_rep")


def _rank_rational(rows: list[list[int]], ncols: int) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


@dataclass
class EndAlgebra:
    """``End(P_d)`` in the path basis with diagonal-block coordinates first."""

    rep: ProjectiveRep
    labels: list  # (i, c, j, c2, path)
    ambient: np.ndarray  # D x m x m, 0/1
    products: dict  # (a, b) -> c with e_a e_b = e_c
    block_sizes: tuple[int, ...]
    block_offsets: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def quiver(self) -> Quiver:
        return self.rep.quiver

    @property
    def dvec(self) -> tuple[int, ...]:
        return self.rep.dvec

    @property
    def semisimple_dim(self) -> int:
        return sum(d * d for d in self.block_sizes)

    @property
    def radical_dim(self) -> int:
        return self.dim - self.semisimple_dim

    @property
    def ambient_size(self) -> int:
        return sum(self.rep.dims)

    @cached_property
    def identity_coords(self) -> np.ndarray:
        x = np.zeros(self.dim, dtype=np.int64)
        for i, d in enumerate(self.block_sizes):
            for c in range(d):
                x[self.block_offsets[i] + c * d + c] = 1
        return x

    def diag_blocks(self) -> list[np.ndarray]:
        """Coordinate indices realizing the projection onto each M_{d_i}."""
        return [
            np.arange(off, off + d * d, dtype=np.int64).reshape(d, d)
            for off, d in zip(self.block_offsets, self.block_sizes)
        ]

    @cached_property
    def commutator_tensor(self) -> tuple[np.ndarray, ...]:
        """Sparse (a, c, b, value) with ad_x[c, b] = sum_a x_a * value."""
        acc: dict = {}
        for (a, b), c in self.products.items():
            acc[(a, c, b)] = acc.get((a, c, b), 0) + 1
            acc[(b, c, a)] = acc.get((b, c, a), 0) - 1
        items = [(k, v) for k, v in sorted(acc.items()) if v != 0]
        ta = np.array([k[0] for k, _ in items], dtype=np.int64)
        tc = np.array([k[1] for k, _ in items], dtype=np.int64)
        tb = np.array([k[2] for k, _ in items], dtype=np.int64)
        tv = np.array([v for _, v in items], dtype=np.int64)
        return ta, tc, tb, tv

    def ambient_matrix(self, F: FieldSpec, x: Sequence[int]) -> np.ndarray:
        add, mul, _, _ = F.tables
        m = self.ambient_size
        out = np.zeros((m, m), dtype=np.int64)
        for a, xa in enumerate(x):
            if xa:
                sup = self.ambient[a] != 0
                out[sup] = add[out[sup], xa]
        return out

    def multiply(self, F: FieldSpec, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        add, mul, _, _ = F.tables
        out = np.zeros(self.dim, dtype=np.int64)
        for (a, b), c in self.products.items():
            if x[a] and y[b]:
                out[c] = add[out[c], mul[x[a], y[b]]]
        return out

    def project(self, x: Sequence[int]) -> list[np.ndarray]:
        """Image in ``prod_i M_{d_i}``."""
        x = np.asarray(x, dtype=np.int64)
        return [x[idx] for idx in self.diag_blocks()]


def end_basis(quiver: Quiver, dvec: Sequence[int]) -> EndAlgebra:
    """Build ``End(P_d)`` and check it against the exact intertwiner nullspace."""
    if not quiver.is_acyclic:
        raise CyclicQuiverError("End(P_d) is built only for acyclic quivers")
    rep = projective_rep(quiver, dvec)
    d = rep.dvec
    n = quiver.nvertices
    labels = []
    for i in range(n):
        for c2 in range(d[i]):
            for c in range(d[i]):
                labels.append((i, c, i, c2, ()))
    sizes = tuple(d)
    offsets = tuple(int(x) for x in np.cumsum((0,) + tuple(x * x for x in d))[:-1])
    for i in range(n):
        for c in range(d[i]):
            for j in range(n):
                for c2 in range(d[j]):
                    for p in quiver.paths(j, i):
                        if p == () and i == j:
                            continue
                        labels.append((i, c, j, c2, p))
    index = {lab: k for k, lab in enumerate(labels)}

    dims = rep.dims
    starts = np.cumsum((0,) + dims)[:-1]
    vindex = [{b: k for k, b in enumerate(rep.vertex_basis[j])} for j in range(n)]
    m = sum(dims)
    D = len(labels)
    amb = np.zeros((D, m, m), dtype=np.int64)
    for k, (i, c, j, c2, p) in enumerate(labels):
        for v in range(n):
            for w in quiver.paths(i, v):
                src = starts[v] + vindex[v][(i, c, w)]
                dst = starts[v] + vindex[v][(j, c2, p + w)]
                amb[k, dst, src] = 1

    products = {}
    for a, (i, c, j, c2, p) in enumerate(labels):
        for b, (k, e, l, e2, r) in enumerate(labels):
            if (l, e2) == (i, c):
                products[(a, b)] = index[(k, e, j, c2, p + r)]

    alg = EndAlgebra(rep, labels, amb, products, sizes, offsets)
    _check_against_nullspace(alg)
    return alg


def _check_against_nullspace(alg: EndAlgebra) -> None:
    """The path basis must span the intertwiner space computed over Q."""
    rep = alg.rep
    dims = rep.dims
    n = rep.quiver.nvertices
    offs = np.cumsum((0,) + tuple(x * x for x in dims))
    nunk = int(offs[-1])
    rows = []
    for a, (s, t) in enumerate(rep.quiver.arrows):
        S = rep.structure_maps[a]
        # (phi_t S - S phi_s)[r, c] = 0
        for r in range(dims[t]):
            for c in range(dims[s]):
                row = [0] * nunk
                for k in range(dims[t]):
                    if S[k, c]:
                        row[offs[t] + r * dims[t] + k] += int(S[k, c])
                for k in range(dims[s]):
                    if S[r, k]:
                        row[offs[s] + k * dims[s] + c] -= int(S[r, k])
                if any(row):
                    rows.append(row)
    nullity = nunk - (_rank_rational(rows, nunk) if rows else 0)
    if nullity != alg.dim:
        raise AssertionError(f"path basis has {alg.dim} elements, intertwiners {nullity}")
    h = [[len(rep.quiver.paths(j, i)) for j in range(n)] for i in range(n)]
    d = rep.dvec
    expected = sum(d[i] * d[j] * h[i][j] for i in range(n) for j in range(n))
    if expected != alg.dim:
        raise AssertionError(f"dimension {alg.dim} differs from sum d_i d_j h_ij = {expected}")
    starts = np.cumsum((0,) + dims)
    for k in range(alg.dim):
        M = alg.ambient[k]
        for a, (s, t) in enumerate(rep.quiver.arrows):
            S = rep.structure_maps[a]
            phi_s = M[starts[s]:starts[s + 1], starts[s]:starts[s + 1]]
            phi_t = M[starts[t]:starts[t + 1], starts[t]:starts[t + 1]]
            if not np.array_equal(phi_t @ S, S @ phi_s):
                raise AssertionError(f"basis element {alg.labels[k]} is not an intertwiner")


@dataclass(frozen=True)
class ElementType:
    is_nilpotent: bool
    is_invertible: bool

    def has(self, z: ZType) -> bool:
        if z is ZType.NILPOTENT:
            return self.is_nilpotent
        if z is ZType.INVERTIBLE:
            return self.is_invertible
        return True


def classify(alg: EndAlgebra, x: Sequence[int], F: FieldSpec,
             method: str = "projection") -> ElementType:
    """Nilpotent / invertible status of ``x``.

    ``"projection"`` tests the diagonal blocks (valid since the radical is
    nilpotent); ``"direct"`` tests the ambient matrix; ``"both"`` runs both and
    raises if they disagree.
    """
    add, mul, neg, inv = F.tables
    if method in ("projection", "both"):
        blocks = alg.project(x)
        nil = all(K.is_nilpotent(np.ascontiguousarray(b), b.shape[0], add, mul) for b in blocks)
        unit = all(
            K.rank_inplace(np.ascontiguousarray(b).copy(), b.shape[0], b.shape[0], add, mul, neg, inv)
            == b.shape[0]
            for b in blocks
        )
        proj = ElementType(bool(nil), bool(unit))
        if method == "projection":
            return proj
    M = alg.ambient_matrix(F, x)
    m = M.shape[0]
    direct = ElementType(
        bool(K.is_nilpotent(M, m, add, mul)),
        bool(K.rank_inplace(M.copy(), m, m, add, mul, neg, inv) == m),
    )
    if method == "both" and direct != proj:
        raise AssertionError(f"projection {proj} and direct {direct} tests disagree for {list(x)}")
    return direct
