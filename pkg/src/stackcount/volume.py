"""The volume ring: counting sequences ``(c(F_{q^n}))_{n>=1}``, truncated.

A :class:`Volume` stores the first ``len`` entries of a counting sequence over
a fixed base field of size ``base_q``.  Arithmetic is entrywise and the
result is valid only as far as both operands are; the Adams operation
``psi_m`` reindexes ``(a_m, a_2m, ...)`` and shortens the validity to
``len // m``.  Plain rationals and :class:`~stackcount.exact.QRatFun` values
act as constant / polynomial-count sequences of unbounded validity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import QPoly, QRatFun, as_ratfun, parse_rational

__all__ = [
    "Volume",
    "ValidityError",
    "NotPolynomialCount",
    "vol_arith",
    "vol_adams",
    "from_polynomial",
    "detect_polynomial_count",
    "fit_polynomial_count",
    "interpolate",
    "is_prime_power",
]


class ValidityError(ValueError):
    """An Adams operation or lookup ran past the stored entries."""


class NotPolynomialCount(ValueError):
    """Samples are not explained by a polynomial of the given degree."""

    def __init__(self, sample, predicted, degree):
        self.sample = sample
        self.predicted = predicted
        self.degree = degree
        super().__init__(
            f"degree-{degree} fit predicts {predicted} at q={sample[0]} but sample is {sample[1]}"
        )


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


class Volume:
    """Truncated counting sequence over ``F_{base_q}``."""

    __slots__ = ("base_q", "entries")

    def __init__(self, base_q: int, entries: Sequence):
        if not is_prime_power(base_q):
            raise ValueError(f"base field size {base_q} is not a prime power")
        self.base_q = base_q
        self.entries: tuple[Fraction, ...] = tuple(Fraction(e) for e in entries)

    @property
    def len(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, n: int) -> Fraction:
        """Entry at ``F_{q^n}`` (1-based, like the counting sequence)."""
        if not 1 <= n <= len(self.entries):
            raise ValidityError(f"entry {n} outside validity {len(self.entries)}")
        return self.entries[n - 1]

    def __eq__(self, other):
        if isinstance(other, Volume):
            return self.base_q == other.base_q and self.entries == other.entries
        return NotImplemented

    def __hash__(self):
        return hash((self.base_q, self.entries))

    def __repr__(self):
        vals = ", ".join(str(e) for e in self.entries)
        return f"Volume(q={self.base_q}; {vals})"

    def _lift(self, other):
        """Bring ``other`` into this ring; returns None if not possible."""
        if isinstance(other, Volume):
            if other.base_q != self.base_q:
                raise ValueError(
                    f"base-field mismatch: {self.base_q} vs {other.base_q}"
                )
            return other.entries
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return (c,) * len(self.entries)
        if isinstance(other, (QRatFun, QPoly)):
            f = as_ratfun(other)
            return tuple(f(self.base_q**n) for n in range(1, len(self.entries) + 1))
        return None

    def _zip(self, other, fn):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return Volume(self.base_q, [fn(x, y) for x, y in zip(self.entries, b)])

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._zip(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._zip(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        for n, y in enumerate(b[: len(self.entries)], start=1):
            if y == 0:
                raise ZeroDivisionError(f"division by zero entry at n={n}")
        return Volume(self.base_q, [x / y for x, y in zip(self.entries, b)])

    def __rtruediv__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return Volume(self.base_q, b) / self

    def __neg__(self):
        return Volume(self.base_q, [-x for x in self.entries])

    def __pow__(self, k: int):
        return Volume(self.base_q, [x**k for x in self.entries])

    def adams(self, m: int, strict: bool = True) -> "Volume":
        """psi_m: ``(a_m, a_2m, ...)``.  Non-strict mode may return an empty volume."""
        if m < 1:
            raise ValueError("Adams index must be positive")
        out = self.entries[m - 1 :: m]
        if strict and not out:
            raise ValidityError(f"psi_{m} exhausts validity {len(self.entries)}")
        return Volume(self.base_q, out)

    def truncate(self, length: int) -> "Volume":
        return Volume(self.base_q, self.entries[:length])

    def to_json(self) -> dict:
        return {
            "base_q": self.base_q,
            "entries": [
                str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
                for e in self.entries
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Volume":
        return cls(int(data["base_q"]), [parse_rational(e) for e in data["entries"]])


def vol_arith(a: Volume, b: Volume, op: str) -> Volume:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def vol_adams(a: Volume, m: int) -> Volume:
    return a.adams(m, strict=True)


def from_polynomial(f, base_q: int, length: int) -> Volume:
    """``[f] = (f(base_q^n))_{n=1..length}``."""
    f = as_ratfun(f)
    return Volume(base_q, [f(base_q**n) for n in range(1, length + 1)])


def interpolate(points: Sequence[tuple]) -> QPoly:
    """Exact Lagrange interpolation through ``(x, y)`` pairs (Newton form)."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(xs)
    if len(set(xs)) != n:
        raise ValueError("interpolation nodes must be distinct")
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = QPoly([coef[-1]]) if n else QPoly()
    for i in range(n - 2, -1, -1):
        poly = poly * QPoly([-xs[i], 1]) + coef[i]
    return poly


def detect_polynomial_count(samples: Sequence[tuple], degree_bound: int) -> QPoly:
    """Fit a degree <= ``degree_bound`` polynomial and check it on spare samples.

    ``samples`` are ``(field size, value)`` pairs.  The first
    ``degree_bound + 1`` are interpolated; every remaining one must agree or
    :class:`NotPolynomialCount` is raised naming the first violated sample.
    """
    samples = [(int(x), Fraction(y)) for x, y in samples]
    if len(samples) < degree_bound + 2:
        raise ValueError(
            f"need at least {degree_bound + 2} samples for degree bound {degree_bound}, "
            f"got {len(samples)}"
        )
    if len({x for x, _ in samples}) != len(samples):
        raise ValueError("sample field sizes must be pairwise distinct")
    poly = interpolate(samples[: degree_bound + 1])
    for x, y in samples[degree_bound + 1 :]:
        pred = poly(Fraction(x))
        if pred != y:
            raise NotPolynomialCount((x, y), pred, degree_bound)
    return poly


@dataclass
class FitCertificate:
    fitted: list = field(default_factory=list)
    verified: list = field(default_factory=list)
    degree_bound: Optional[int] = None
    adaptive: bool = False
    verified_ok: bool = False

    def to_json(self) -> dict:
        return {
            "fitted_fields": self.fitted,
            "verified_fields": self.verified,
            "degree_bound": self.degree_bound,
            "adaptive_degree": self.adaptive,
            "verified": self.verified_ok,
        }


def fit_polynomial_count(samples: Sequence[tuple], degree_bound: Optional[int] = None):
    """Fit a polynomial with a certificate.

    With an explicit ``degree_bound`` this is :func:`detect_polynomial_count`.
    Without one, the smallest degree that passes the spare-sample check is
    used; if no degree below ``len(samples) - 1`` passes, the samples are
    interpolated exactly and the certificate is marked unverified.
    Returns ``(poly, certificate)``.
    """
    samples = [(int(x), Fraction(y)) for x, y in samples]
    xs = [x for x, _ in samples]
    if degree_bound is not None:
        poly = detect_polynomial_count(samples, degree_bound)
        cert = FitCertificate(xs[: degree_bound + 1], xs[degree_bound + 1 :], degree_bound,
                              False, True)
        return poly, cert
    if not samples:
        raise ValueError("no samples")
    for deg in range(len(samples) - 1):
        try:
            poly = detect_polynomial_count(samples, deg)
        except NotPolynomialCount:
            continue
        return poly, FitCertificate(xs[: deg + 1], xs[deg + 1 :], deg, True, True)
    poly = interpolate(samples)
    return poly, FitCertificate(xs, [], len(samples) - 1, True, False)
