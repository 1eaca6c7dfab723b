"""Exact arithmetic substrate.

Arbitrary-size rationals (``fractions.Fraction``), Bernoulli numbers,
truncated power/Laurent series over a pluggable coefficient field, and
multivariate monomials in named Kahler variables.

All values are immutable after construction and safe for concurrent
reads; the Bernoulli cache is internally synchronized.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

import mpmath

from .errors import MalformedSeriesError

__all__ = [
    "Rational",
    "parse_rational",
    "format_rational",
    "bernoulli",
    "RationalField",
    "ComplexBallField",
    "RATIONAL",
    "TruncatedSeries",
    "LaurentBlock",
    "Monomial",
    "s_series",
    "s_inverse_series",
]

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse the ``"p/q"`` (or ``"p"``) text encoding used in all I/O."""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    """Inverse of :func:`parse_rational`; integers print without ``/1``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """B_m with the convention B_1 = -1/2.

    Computed once from the defining recurrence
    ``sum_{k=0}^{n} C(n+1, k) B_k = 0`` and cached.
    """
    if m < 0:
        raise ValueError("Bernoulli index must be >= 0")
    if m >= len(_bernoulli_cache):
        with _bernoulli_lock:
            while len(_bernoulli_cache) <= m:
                n = len(_bernoulli_cache)
                acc = sum(
                    Fraction(comb(n + 1, k)) * _bernoulli_cache[k] for k in range(n)
                )
                _bernoulli_cache.append(-acc / (n + 1))
    return _bernoulli_cache[m]


# ---------------------------------------------------------------------------
# Coefficient fields
# ---------------------------------------------------------------------------


class RationalField:
    """Exact rational coefficients."""

    tag = "rational"
    exact = True

    def convert(self, x) -> Fraction:
        return Fraction(x)

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("rational")


class ComplexBallField:
    """Fixed-precision complex coefficients (mpmath, gmpy-backed).

    Precision is tracked by explicit tolerance checks rather than rigorous
    ball enclosures; callers are expected to run inside
    ``mpmath.mp.workprec`` at ``precision_bits`` plus guard bits, which is
    what the numeric-recursion engine does.
    """

    exact = False

    def __init__(self, precision_bits: int = 256):
        if precision_bits < 16:
            raise ValueError("precision must be at least 16 bits")
        self.precision_bits = precision_bits
        self.tag = f"complex-ball({precision_bits})"

    def convert(self, x):
        if isinstance(x, Fraction):
            return mpmath.mpc(mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator))
        return mpmath.mpc(x)

    def zero(self):
        return mpmath.mpc(0)

    def one(self):
        return mpmath.mpc(1)

    def is_zero(self, x) -> bool:
        return x == 0

    @property
    def eps(self):
        return mpmath.mpf(2) ** (-self.precision_bits)

    def __repr__(self) -> str:
        return f"ComplexBallField({self.precision_bits})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ComplexBallField)
            and other.precision_bits == self.precision_bits
        )

    def __hash__(self) -> int:
        return hash(self.tag)


RATIONAL = RationalField()


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """Formal power series known through order ``truncation`` inclusive.

    Arithmetic never reads beyond the truncation; binary operations on
    mismatched truncations use the minimum.
    """

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence, field=RATIONAL, convert: bool = True):
        if convert:
            self.coeffs = tuple(field.convert(c) for c in coeffs)
        else:
            self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise MalformedSeriesError("series needs at least the constant term")
        self.field = field

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, truncation: int, field=RATIONAL) -> "TruncatedSeries":
        z = field.zero()
        return cls([z] * (truncation + 1), field, convert=False)

    @classmethod
    def one(cls, truncation: int, field=RATIONAL) -> "TruncatedSeries":
        z, o = field.zero(), field.one()
        return cls([o] + [z] * truncation, field, convert=False)

    @classmethod
    def identity(cls, truncation: int, field=RATIONAL) -> "TruncatedSeries":
        if truncation < 1:
            raise MalformedSeriesError("identity needs truncation >= 1")
        z, o = field.zero(), field.one()
        return cls([z, o] + [z] * (truncation - 1), field, convert=False)

    # -- basics ------------------------------------------------------------

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int):
        if not 0 <= k <= self.truncation:
            raise MalformedSeriesError(f"coefficient {k} beyond truncation")
        return self.coeffs[k]

    def truncate(self, T: int) -> "TruncatedSeries":
        if T >= self.truncation:
            return self
        return TruncatedSeries(self.coeffs[: T + 1], self.field, convert=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r}, T={self.truncation})"

    def _common(self, other: "TruncatedSeries") -> int:
        return min(self.truncation, other.truncation)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        T = self._common(other)
        return TruncatedSeries(
            [a + b for a, b in zip(self.coeffs[: T + 1], other.coeffs[: T + 1])],
            self.field,
            convert=False,
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        T = self._common(other)
        return TruncatedSeries(
            [a - b for a, b in zip(self.coeffs[: T + 1], other.coeffs[: T + 1])],
            self.field,
            convert=False,
        )

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self.coeffs], self.field, convert=False)

    def scale(self, s) -> "TruncatedSeries":
        s = self.field.convert(s)
        return TruncatedSeries([s * c for c in self.coeffs], self.field, convert=False)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        T = self._common(other)
        a, b = self.coeffs, other.coeffs
        out = [self.field.zero()] * (T + 1)
        for i in range(T + 1):
            ai = a[i]
            if self.field.is_zero(ai):
                continue
            for j in range(T + 1 - i):
                bj = b[j]
                if not self.field.is_zero(bj):
                    out[i + j] += ai * bj
        return TruncatedSeries(out, self.field, convert=False)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        if self.field.is_zero(self.coeffs[0]):
            raise MalformedSeriesError("inverse needs a nonzero constant term")
        T = self.truncation
        inv0 = self.field.one() / self.coeffs[0]
        out = [self.field.zero()] * (T + 1)
        out[0] = inv0
        for m in range(1, T + 1):
            acc = self.field.zero()
            for k in range(1, m + 1):
                ck = self.coeffs[k]
                if not self.field.is_zero(ck):
                    acc += ck * out[m - k]
            out[m] = -acc * inv0
        return TruncatedSeries(out, self.field, convert=False)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries.one(self.truncation, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus ----------------------------------------------------------

    def differentiate(self) -> "TruncatedSeries":
        T = self.truncation
        if T == 0:
            return TruncatedSeries.zero(0, self.field)
        out = [self.coeffs[k] * k for k in range(1, T + 1)]
        return TruncatedSeries(out, self.field, convert=False)

    def integrate(self) -> "TruncatedSeries":
        """Termwise primitive with zero constant term; truncation grows by 1."""
        out = [self.field.zero()]
        for k, c in enumerate(self.coeffs):
            out.append(c / self.field.convert(k + 1))
        return TruncatedSeries(out, self.field, convert=False)

    # -- composition -------------------------------------------------------

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(t)); the inner series must have zero constant term."""
        if not inner.field.is_zero(inner.coeffs[0]):
            raise MalformedSeriesError("compose needs inner constant term 0")
        T = min(self.truncation, inner.truncation)
        acc = TruncatedSeries.zero(T, self.field)
        inner = inner.truncate(T)
        for c in reversed(self.coeffs[: T + 1]):
            acc = acc * inner
            acc = TruncatedSeries(
                (acc.coeffs[0] + c,) + acc.coeffs[1:], self.field, convert=False
            )
        return acc

    def reversion(self) -> "TruncatedSeries":
        """Compositional inverse r with self(r) = t + O(t^{T+1}).

        Needs zero constant term and invertible linear coefficient.
        """
        if not self.field.is_zero(self.coeffs[0]):
            raise MalformedSeriesError("reversion needs constant term 0")
        if self.truncation < 1 or self.field.is_zero(self.coeffs[1]):
            raise MalformedSeriesError("reversion needs an invertible linear term")
        T = self.truncation
        field = self.field
        r = TruncatedSeries(
            [field.zero(), field.one() / self.coeffs[1]], field, convert=False
        )
        order = 1
        # Newton with doubling windows: the cost is dominated by the final pass
        while order < T:
            order = min(2 * order + 1, T)
            w = self.truncate(order)
            rp = TruncatedSeries(
                r.coeffs + (field.zero(),) * (order - r.truncation),
                field,
                convert=False,
            )
            ident = TruncatedSeries.identity(order, field)
            deriv = TruncatedSeries(
                [k * w.coeffs[k] for k in range(1, order + 1)] + [field.zero()],
                field,
                convert=False,
            )
            err = w.compose(rp) - ident
            r = rp - err * deriv.compose(rp).inverse()
        return r

    # -- exp / log ---------------------------------------------------------

    def exp(self) -> "TruncatedSeries":
        """Formal exponential; requires zero constant term."""
        if not self.field.is_zero(self.coeffs[0]):
            raise MalformedSeriesError("exp needs constant term 0")
        T = self.truncation
        field = self.field
        expo = [field.one() / field.convert(factorial(k)) for k in range(T + 1)]
        return TruncatedSeries(expo, field, convert=False).compose(self)

    def log(self) -> "TruncatedSeries":
        """Formal logarithm; requires unit constant term."""
        if self.coeffs[0] != self.field.one():
            raise MalformedSeriesError("log needs constant term 1")
        T = self.truncation
        field = self.field
        logc = [field.zero()] + [
            field.convert(Fraction((-1) ** (k + 1), k)) for k in range(1, T + 1)
        ]
        shifted = self - TruncatedSeries.one(T, field)
        return TruncatedSeries(logc, field, convert=False).compose(shifted)


# ---------------------------------------------------------------------------
# Laurent blocks
# ---------------------------------------------------------------------------


class LaurentBlock:
    """Laurent expansion with finite principal part.

    Stored as ``offset`` (lowest represented exponent) plus a coefficient
    window; exponents run ``offset .. offset + len(coeffs) - 1``.  Exact
    leading zeros are stripped so the pole order reflects the leading
    nonzero coefficient (inexact fields strip literal zeros only).
    """

    __slots__ = ("offset", "coeffs", "field")

    def __init__(self, offset: int, coeffs: Sequence, field=RATIONAL, convert=True):
        if convert:
            coeffs = [field.convert(c) for c in coeffs]
        else:
            coeffs = list(coeffs)
        while coeffs and offset < 0 and field.is_zero(coeffs[0]):
            coeffs.pop(0)
            offset += 1
        if not coeffs:
            coeffs = [field.zero()]
            offset = 0
        self.offset = offset
        self.coeffs = tuple(coeffs)
        self.field = field

    @classmethod
    def from_series(cls, series: TruncatedSeries) -> "LaurentBlock":
        return cls(0, series.coeffs, series.field, convert=False)

    # -- spec-facing views -------------------------------------------------

    @property
    def pole_order(self) -> int:
        return max(0, -self.offset)

    @property
    def principal_coefficients(self) -> tuple:
        """Coefficients of t^-pole_order .. t^-1."""
        n = self.pole_order
        return self.coeffs[:n]

    @property
    def regular_part(self) -> TruncatedSeries:
        n = self.pole_order
        tail = self.coeffs[n:]
        if not tail:
            tail = (self.field.zero(),)
        return TruncatedSeries(tail, self.field, convert=False)

    @property
    def top(self) -> int:
        """One past the highest represented exponent."""
        return self.offset + len(self.coeffs)

    def coefficient(self, k: int):
        i = k - self.offset
        if i < 0:
            return self.field.zero()
        if i >= len(self.coeffs):
            raise MalformedSeriesError(f"coefficient {k} beyond window")
        return self.coeffs[i]

    def residue(self):
        """Coefficient of t^-1."""
        i = -1 - self.offset
        if i >= len(self.coeffs):
            raise MalformedSeriesError("window does not reach t^-1")
        return self.coeffs[i] if i >= 0 else self.field.zero()

    def __repr__(self) -> str:
        return f"LaurentBlock(offset={self.offset}, coeffs={list(self.coeffs)!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentBlock)
            and self.field == other.field
            and self.offset == other.offset
            and self.coeffs == other.coeffs
        )

    # -- arithmetic; windows shrink honestly --------------------------------

    def __add__(self, other: "LaurentBlock") -> "LaurentBlock":
        off = min(self.offset, other.offset)
        top = min(self.top, other.top)
        if top <= off:
            raise MalformedSeriesError("windows do not overlap")
        out = [self.field.zero()] * (top - off)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                k = src.offset + i
                if k < top:
                    out[k - off] += c
        return LaurentBlock(off, out, self.field, convert=False)

    def __sub__(self, other: "LaurentBlock") -> "LaurentBlock":
        return self + LaurentBlock(
            other.offset, [-c for c in other.coeffs], other.field, convert=False
        )

    def __neg__(self) -> "LaurentBlock":
        return LaurentBlock(
            self.offset, [-c for c in self.coeffs], self.field, convert=False
        )

    def scale(self, s) -> "LaurentBlock":
        s = self.field.convert(s)
        return LaurentBlock(
            self.offset, [s * c for c in self.coeffs], self.field, convert=False
        )

    def __mul__(self, other: "LaurentBlock") -> "LaurentBlock":
        la, lb = len(self.coeffs), len(other.coeffs)
        L = min(la, lb)
        out = [self.field.zero()] * L
        for i, ai in enumerate(self.coeffs):
            if self.field.is_zero(ai):
                continue
            jmax = min(lb, L - i)
            for j in range(jmax):
                bj = other.coeffs[j]
                if not self.field.is_zero(bj):
                    out[i + j] += ai * bj
        return LaurentBlock(self.offset + other.offset, out, self.field, convert=False)

    def inverse(self) -> "LaurentBlock":
        v = 0
        while v < len(self.coeffs) and self.field.is_zero(self.coeffs[v]):
            v += 1
        if v == len(self.coeffs):
            raise MalformedSeriesError("cannot invert the zero block")
        unit = TruncatedSeries(self.coeffs[v:], self.field, convert=False)
        inv = unit.inverse()
        return LaurentBlock(-(self.offset + v), inv.coeffs, self.field, convert=False)

    def __truediv__(self, other: "LaurentBlock") -> "LaurentBlock":
        return self * other.inverse()


# ---------------------------------------------------------------------------
# Monomials in Kahler variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Exponent vector over named variables; no zero exponents stored.

    Comparison is exponent-vector equality; the canonical variable order
    for normalization is the sorted variable name.
    """

    exps: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def from_dict(d: dict[str, int]) -> "Monomial":
        return Monomial(tuple(sorted((k, int(v)) for k, v in d.items() if v != 0)))

    @staticmethod
    def variable(name: str, power: int = 1) -> "Monomial":
        return Monomial.from_dict({name: power})

    @staticmethod
    def one() -> "Monomial":
        return Monomial(())

    def as_dict(self) -> dict[str, int]:
        return dict(self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = self.as_dict()
        for k, v in other.exps:
            d[k] = d.get(k, 0) + v
        return Monomial.from_dict(d)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def inverse(self) -> "Monomial":
        return Monomial(tuple((k, -v) for k, v in self.exps))

    def __pow__(self, n: int) -> "Monomial":
        return Monomial(tuple((k, v * n) for k, v in self.exps)) if n else Monomial()

    def is_one(self) -> bool:
        return not self.exps

    def degree(self) -> int:
        """Total absolute degree, used for series truncation."""
        return sum(abs(v) for _, v in self.exps)

    def normalized(self) -> tuple["Monomial", bool]:
        """Canonical ratio orientation: first nonzero exponent positive.

        Returns (monomial, flipped).  Safe to fold because the odd
        negative-order polylogs entering every table satisfy
        Li(z) = Li(1/z).
        """
        if not self.exps:
            return self, False
        if self.exps[0][1] < 0:
            return self.inverse(), True
        return self, False

    def sort_key(self) -> tuple:
        return (self.degree(), self.exps)

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for name, e in self.exps:
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    @staticmethod
    def parse(text: str) -> "Monomial":
        text = text.strip()
        if text in ("1", ""):
            return Monomial()
        d: dict[str, int] = {}
        for factor in text.split("*"):
            factor = factor.strip()
            if "^" in factor:
                name, _, e = factor.partition("^")
                d[name.strip()] = d.get(name.strip(), 0) + int(e)
            else:
                d[factor] = d.get(factor, 0) + 1
        return Monomial.from_dict(d)


# ---------------------------------------------------------------------------
# The sinh-quotient series
# ---------------------------------------------------------------------------


def s_series(T: int, field=RATIONAL) -> TruncatedSeries:
    """S(t) = (e^{t/2} - e^{-t/2})/t = sum_k t^{2k} / (4^k (2k+1)!)."""
    coeffs = [field.zero()] * (T + 1)
    for k in range(0, T // 2 + 1):
        coeffs[2 * k] = field.convert(Fraction(1, 4**k * factorial(2 * k + 1)))
    return TruncatedSeries(coeffs, field, convert=False)


def s_inverse_series(T: int, field=RATIONAL) -> TruncatedSeries:
    """The series of 1/S to order ``T``; odd coefficients vanish."""
    if T < 0:
        raise ValueError("truncation must be >= 0")
    return s_series(T, field).inverse()
