"""Negative-order polylogarithms as exact rational functions.

Li_{-n} is realized through the recurrence Li_{-n} = (z d/dz) Li_{-n+1}
starting from Li_0(z) = z/(1-z); the Eulerian closed form is only used as
a test oracle.  The module also provides the exact Laurent expansion of
Li_{-n}(e^mu) around mu = 0 consumed by the residue engine.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

from .errors import MalformedSeriesError, PoleError
from .exact import RATIONAL, LaurentBlock, TruncatedSeries, bernoulli

__all__ = [
    "Polynomial",
    "RationalFunction",
    "NegPolylog",
    "li_neg",
    "li_neg_rational",
    "li_neg_at_exp",
]


class Polynomial:
    """Dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, convert: bool = True):
        if convert:
            coeffs = [Fraction(c) for c in coeffs]
        else:
            coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        self.coeffs = tuple(coeffs)

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial([0])

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial([1])

    @staticmethod
    def x() -> "Polynomial":
        return Polynomial([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        if self.is_zero():
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out, convert=False)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], convert=False)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return Polynomial(out, convert=False)

    def scale(self, s: Fraction) -> "Polynomial":
        s = Fraction(s)
        return Polynomial([s * c for c in self.coeffs], convert=False)

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(), self
        quot = [Fraction(0)] * (dq + 1)
        inv_lead = 1 / other.leading()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot, convert=False), Polynomial(rem, convert=False)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.scale(1 / a.leading())

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial.zero()
        return Polynomial(
            [k * c for k, c in enumerate(self.coeffs) if k > 0], convert=False
        )

    def __call__(self, z):
        """Horner evaluation; works for Fraction and mpmath scalars alike."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * z + c
        return acc

    def eval_block(self, base: LaurentBlock) -> LaurentBlock:
        """Evaluate on a Laurent/Taylor block with nonnegative offset."""
        if base.offset < 0:
            raise MalformedSeriesError("polynomial of a pole is not a block")
        field = base.field
        acc = LaurentBlock(0, [field.zero()] * len(base.coeffs), field, convert=False)
        for c in reversed(self.coeffs):
            acc = acc * base + LaurentBlock(
                0, [field.convert(c)] + [field.zero()] * (len(base.coeffs) - 1),
                field, convert=False,
            )
        return acc

    def shift(self, p: Fraction, window: int) -> LaurentBlock:
        """Taylor coefficients of self(p + t) through order ``window``."""
        base = LaurentBlock(0, [Fraction(p), 1] + [0] * (window - 1))
        return self.eval_block(base)


class RationalFunction:
    """Quotient of polynomials, reduced, with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        lead = den.leading()
        if lead != 1:
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        self.num = num
        self.den = den

    @staticmethod
    def from_fraction(c: Fraction) -> "RationalFunction":
        return RationalFunction(Polynomial([c]), Polynomial.one(), reduce=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def scale(self, s: Fraction) -> "RationalFunction":
        return RationalFunction(self.num.scale(s), self.den, reduce=False)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def z_d_dz(self) -> "RationalFunction":
        return RationalFunction(Polynomial.x(), Polynomial.one(), reduce=False) * self.derivative()

    def scale_argument(self, c: Fraction) -> "RationalFunction":
        """self(c*z) as a rational function of z."""
        c = Fraction(c)
        num = Polynomial([a * c**k for k, a in enumerate(self.num.coeffs)], convert=False)
        den = Polynomial([a * c**k for k, a in enumerate(self.den.coeffs)], convert=False)
        return RationalFunction(num, den)

    def __call__(self, z):
        den = self.den(z)
        if den == 0:
            raise PoleError(f"evaluation at pole z={z}")
        return self.num(z) / den

    def vanishing_order(self, p: Fraction, poly: Polynomial) -> int:
        order = 0
        q = poly
        point = Polynomial([-Fraction(p), 1], convert=False)
        while not q.is_zero():
            quot, rem = q.divmod(point)
            if not rem.is_zero():
                break
            order += 1
            q = quot
        return order

    def pole_order(self, p: Fraction) -> int:
        """Order of the pole at z = p (0 if regular)."""
        dord = self.vanishing_order(p, self.den)
        if dord == 0:
            return 0
        nord = self.vanishing_order(p, self.num)
        return max(0, dord - nord)

    def laurent_at(self, p: Fraction, window: int) -> LaurentBlock:
        """Exact Laurent expansion in t = z - p with ``window`` coefficients."""
        extra = self.vanishing_order(p, self.den)
        w = window + extra
        num_block = self.num.shift(p, w)
        den_block = self.den.shift(p, w)
        return num_block / den_block

    def residue_at(self, p: Fraction) -> Fraction:
        return self.laurent_at(p, self.pole_order(p) + 2).residue()


# ---------------------------------------------------------------------------
# Negative polylogarithms
# ---------------------------------------------------------------------------


class NegPolylog:
    """Li_{-n} together with its rational-function realization."""

    __slots__ = ("order", "realization")

    def __init__(self, order: int, realization: RationalFunction):
        self.order = order
        self.realization = realization

    def __call__(self, z):
        return self.realization(z)

    def __repr__(self) -> str:
        return f"NegPolylog(order={self.order})"


_li_cache: dict[int, NegPolylog] = {}
_li_lock = threading.Lock()


def li_neg_rational(n: int) -> NegPolylog:
    """Rational realization of Li_{-n}; cached.

    Built from Li_0(z) = z/(1-z) by n applications of z d/dz, keeping the
    structured denominator (1-z)^{n+1}.
    """
    if n < 0:
        raise ValueError("order must be >= 0 (Li_{-n})")
    with _li_lock:
        top = max(_li_cache) if _li_cache else -1
        for m in range(top + 1, n + 1):
            if m == 0:
                num = Polynomial([0, 1])
            else:
                prev = _li_cache[m - 1].realization.num
                # z * (N'(z)(1-z) + m N(z)) over (1-z)^{m+1}
                dn = prev.derivative()
                one_minus = Polynomial([1, -1])
                num = Polynomial.x() * (dn * one_minus + prev.scale(m))
            den = Polynomial([1, -1]) ** (m + 1)
            _li_cache[m] = NegPolylog(m, RationalFunction(num, den))
        return _li_cache[n]


def li_neg(n: int, z: Fraction) -> Fraction:
    """Exact value of Li_{-n}(z) for rational z != 1."""
    z = Fraction(z)
    if z == 1:
        raise PoleError("Li_{-n} has its pole at z = 1")
    if z == 0:
        return Fraction(0)
    return li_neg_rational(n)(z)


def li_neg_at_exp(n: int, T: int) -> LaurentBlock:
    """Laurent expansion of Li_{-n}(e^mu) around mu = 0 (n >= 1).

    n!/(-mu)^{n+1} - sum_{k=0}^{T} B_{k+n+1} mu^k / (k! (k+n+1)); the pole
    order is n+1 and the Bernoulli tail supplies the regular window.
    """
    if n < 1:
        raise ValueError("expansion requires n >= 1")
    if T < 0:
        raise ValueError("truncation must be >= 0")
    principal = [Fraction(factorial(n) * (-1) ** (n + 1))] + [Fraction(0)] * n
    regular = [
        -bernoulli(k + n + 1) / (factorial(k) * (k + n + 1)) for k in range(T + 1)
    ]
    return LaurentBlock(-(n + 1), principal + regular, RATIONAL, convert=False)
