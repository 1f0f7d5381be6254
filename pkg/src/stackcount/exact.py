"""Exact arithmetic in Q[q] and Q(q).

Rationals are plain :class:`fractions.Fraction`.  Polynomials in the
Lefschetz symbol ``q`` are :class:`QPoly`; rational functions are
:class:`QRatFun`, always stored reduced with a monic denominator so that
equality is structural.

The Adams operation on both is the substitution ``q -> q**n``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

__all__ = [
    "QPoly",
    "QRatFun",
    "Q",
    "ratfun_arith",
    "adams_substitute",
    "q_pochhammer",
    "inv_q_factorial",
    "evaluate_at",
    "as_ratfun",
    "parse_rational",
]

Number = Union[int, Fraction]


def parse_rational(s) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s))


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class QPoly:
    """Univariate polynomial over Q in ascending degree order."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "QPoly":
        # coeffs already Fractions and trimmed
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "QPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == QPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("QPoly", self.coeffs))
        return self._hash

    def __neg__(self):
        return QPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return QPoly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, QPoly):
            c = Fraction(other)
            if c == 0:
                return QPoly()
            return QPoly._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = QPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = 1 / other.lead
        if len(rem) - 1 < db:
            return QPoly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv_lead
            quo[k] = c
            if c:
                for j in range(db + 1):
                    rem[k + j] -= c * bc[j]
        return QPoly(quo), QPoly(rem[:db])

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        inv = 1 / self.lead
        return QPoly._raw(tuple(c * inv for c in self.coeffs))

    def gcd(self, other: "QPoly") -> "QPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def adams(self, n: int) -> "QPoly":
        if n == 1 or len(self.coeffs) <= 1:
            return self
        out = [Fraction(0)] * ((len(self.coeffs) - 1) * n + 1)
        for i, c in enumerate(self.coeffs):
            out[i * n] = c
        return QPoly._raw(tuple(out))

    def to_json(self) -> list[str]:
        return [_fmt_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "QPoly":
        return cls(parse_rational(c) for c in data)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = _fmt_rational(a)
            else:
                mono = "q" if i == 1 else f"q^{i}"
                body = mono if a == 1 else f"{_fmt_rational(a)}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"QPoly({self})"


_ONE = QPoly([1])


class QRatFun:
    """Rational function ``num/den`` in q with monic, coprime denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if not isinstance(num, QPoly):
            num = QPoly([num])
        if not isinstance(den, QPoly):
            den = QPoly([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, _ONE
        else:
            g = num.gcd(den)
            if not g.is_one():
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.lead
            if lead != 1:
                inv = 1 / lead
                num, den = num * inv, den * inv
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _reduced(cls, num: QPoly, den: QPoly) -> "QRatFun":
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def q(cls) -> "QRatFun":
        return cls._reduced(QPoly([0, 1]), _ONE)

    @classmethod
    def const(cls, c: Number) -> "QRatFun":
        return cls._reduced(QPoly([c]), _ONE)

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, QRatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, QPoly):
            return self.den.is_one() and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num == QPoly([other])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __neg__(self):
        return QRatFun._reduced(-self.num, self.den)

    def __add__(self, other):
        other = as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den.is_one():
                return QRatFun._reduced(self.num + other.num, _ONE)
            return QRatFun(self.num + other.num, self.den)
        return QRatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return as_ratfun(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QRatFun()
            return QRatFun._reduced(self.num * other, self.den)
        other = as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return QRatFun._reduced(self.num * other.num, _ONE)
        return QRatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of rational function by zero")
            return QRatFun._reduced(self.num * (1 / Fraction(other)), self.den)
        other = as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division of rational function by zero")
        return QRatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return as_ratfun(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return QRatFun(self.den, self.num) ** (-n)
        return QRatFun._reduced(self.num**n, self.den**n)

    def adams(self, n: int) -> "QRatFun":
        if n < 1:
            raise ValueError("Adams index must be positive")
        if n == 1:
            return self
        # q -> q^n keeps coprimality and monicity
        return QRatFun._reduced(self.num.adams(n), self.den.adams(n))

    def __call__(self, value):
        d = self.den(value)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at q={value}")
        n = self.num(value)
        return Fraction(n) / Fraction(d)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "QRatFun":
        return cls(QPoly.from_json(data["num"]), QPoly.from_json(data.get("den", ["1"])))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.coeffs) > 1 and sum(1 for c in self.num.coeffs if c) > 1:
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self):
        return f"QRatFun({self})"


def as_ratfun(x) -> QRatFun:
    if isinstance(x, QRatFun):
        return x
    if isinstance(x, QPoly):
        return QRatFun._reduced(x, _ONE)
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return QRatFun._reduced(QPoly([Fraction(x)]), _ONE)
    return NotImplemented


Q = QRatFun.q()


def ratfun_arith(a: QRatFun, b: QRatFun, op: str) -> QRatFun:
    a, b = as_ratfun(a), as_ratfun(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def adams_substitute(f, n: int) -> QRatFun:
    """Apply psi_n, i.e. substitute q -> q**n."""
    return as_ratfun(f).adams(n)


def q_pochhammer(base, n: int, step=None) -> QRatFun:
    """``(base; step)_n = prod_{i<n} (1 - base*step^i)``; ``step`` defaults to q.

    ``q_pochhammer(q, n)`` is ``(q)_n = prod_{i=1..n} (1 - q^i)``.  For the
    inverted symbol ``prod_{i=1..n} (1 - q^-i)`` pass ``step=1/q`` too, or use
    :func:`inv_q_factorial`.
    """
    if n < 0:
        raise ValueError("q-Pochhammer length must be nonnegative")
    base = as_ratfun(base)
    step = Q if step is None else as_ratfun(step)
    out = QRatFun.const(1)
    term = base
    for _ in range(n):
        out = out * (1 - term)
        term = term * step
    return out


def inv_q_factorial(n: int) -> QRatFun:
    """``(q^-1)_n = prod_{i=1..n} (1 - q^-i)``."""
    qi = 1 / Q
    return q_pochhammer(qi, n, step=qi)


def evaluate_at(f, value) -> Fraction:
    """Exact value of ``f`` at ``q = value``; raises ZeroDivisionError at a pole."""
    return as_ratfun(f)(Fraction(value))
