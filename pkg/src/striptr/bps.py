"""Downstream physics outputs.

Gopakumar-Vafa signs and 5D BPS index tables are read off the closed
free-energy formula: every polylog channel carries a g-independent sign,
-1 within the alpha list or within the beta list (beta_0 included with
the empty Kahler monomial), +1 for alpha-beta cross pairs.  The partition
function is the product

    Z = prod_n prod_cross (1 - ratio q^n)^n
        / [ prod_same-type (1 - ratio q^n)^{n/2} ],

whose diagonal channels collapse to the MacMahon-type factor
(1-q^n)^{-n chi / 2} with chi = 1 + r + s.  The coefficient crosscheck
ties the product form to the free-energy formula channel by channel,
exactly, in rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import AmbiguityError, GeometryError, MalformedSeriesError
from .exact import Monomial, bernoulli, s_inverse_series
from .free_energy import fg_closed_constant_term
from .strip import StripGeometry, require_valid

__all__ = [
    "ChargeClass",
    "OmegaTable",
    "QSeries",
    "gv_signs",
    "omega_table",
    "z_product_log_series",
    "CrosscheckRecord",
    "CrosscheckResult",
    "coefficient_crosscheck",
    "DTReading",
    "dt_read",
]


@dataclass(frozen=True)
class ChargeClass:
    """One BPS charge tower: D0 tower, or a D2/anti-D2 bound-state tower.

    ``d0_shift_sign`` records the "-kD0" notation of the bound states;
    the pure D0 tower uses "+".
    """

    kind: str  # "D0-tower" | "D2-bound" | "D2bar-bound"
    curve_class: Monomial
    d0_shift_sign: str

    def sort_key(self) -> tuple:
        rank = {"D0-tower": 0, "D2-bound": 1, "D2bar-bound": 2}
        return (self.curve_class.sort_key(), rank[self.kind])


_KIND_ORDER = ("D0-tower", "D2-bound", "D2bar-bound")


@dataclass(frozen=True)
class OmegaTable:
    entries: tuple[tuple[ChargeClass, int], ...]

    def as_dict(self) -> dict[ChargeClass, int]:
        return dict(self.entries)

    def lines(self) -> list[tuple[str, str, int]]:
        """Ordered (charge-kind, monomial, omega) records."""
        recs = sorted(self.entries, key=lambda e: e[0].sort_key())
        return [(c.kind, str(c.curve_class), o) for c, o in recs]

    def omega_d0(self) -> int:
        for c, o in self.entries:
            if c.kind == "D0-tower":
                return o
        raise KeyError("table has no D0 tower")


def _labelled_parameters(geom: StripGeometry):
    if geom.alpha_labels is None and geom.r > 0:
        raise GeometryError("gv_signs requires a Kahler label for every alpha")
    if geom.beta_labels is None and geom.s > 0:
        raise GeometryError("gv_signs requires a Kahler label for every beta")
    alphas = [("alpha", i + 1, geom.label("alpha", i + 1)) for i in range(geom.r)]
    betas = [("beta", j, geom.label("beta", j)) for j in range(geom.s + 1)]
    labels = [m for _, _, m in alphas + betas]
    if len({m for m in labels}) != len(labels):
        raise AmbiguityError("Kahler labels are not injective on the parameters")
    return alphas, betas


def gv_signs(geom: StripGeometry) -> dict[Monomial, int]:
    """Normalized ratio monomial -> GV sign, from the free-energy channels."""
    require_valid(geom)
    alphas, betas = _labelled_parameters(geom)
    out: dict[Monomial, int] = {}

    def put(ratio: Monomial, sign: int, what: str):
        key, _ = ratio.normalized()
        if key in out:
            raise AmbiguityError(
                f"distinct parameter pairs share the ratio monomial {key} ({what})"
            )
        out[key] = sign

    for group in (alphas, betas):
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                put(group[a][2] / group[b][2], -1, "same-type pair")
    for _, _, ma in alphas:
        for _, _, mb in betas:
            put(ma / mb, +1, "cross pair")
    return out


def omega_table(geom: StripGeometry) -> OmegaTable:
    """The 5D BPS index table; one entry per charge tower."""
    signs = gv_signs(geom)
    entries: list[tuple[ChargeClass, int]] = [
        (ChargeClass("D0-tower", Monomial.one(), "+"), -geom.chi)
    ]
    for ratio in sorted(signs, key=lambda m: m.sort_key()):
        sign = signs[ratio]
        entries.append((ChargeClass("D2-bound", ratio, "-"), sign))
        entries.append((ChargeClass("D2bar-bound", ratio, "-"), sign))
    return OmegaTable(tuple(entries))


# ---------------------------------------------------------------------------
# Truncated q-series with Laurent-monomial coefficients
# ---------------------------------------------------------------------------


class QSeries:
    """Series in q whose coefficients are Laurent polynomials in monomials.

    Both truncations are explicit: powers of q run 0..q_truncation, and
    any monomial of total absolute degree beyond degree_truncation is
    dropped on every operation.
    """

    __slots__ = ("coeffs", "q_truncation", "degree_truncation")

    def __init__(self, coeffs, q_truncation: int, degree_truncation: int):
        self.q_truncation = q_truncation
        self.degree_truncation = degree_truncation
        clean: dict[int, dict[Monomial, Fraction]] = {}
        for qpow, poly in coeffs.items():
            if not 0 <= qpow <= q_truncation:
                continue
            row = {
                m: Fraction(c)
                for m, c in poly.items()
                if c != 0 and m.degree() <= degree_truncation
            }
            if row:
                clean[qpow] = row
        self.coeffs = clean

    @classmethod
    def zero(cls, q_truncation: int, degree_truncation: int) -> "QSeries":
        return cls({}, q_truncation, degree_truncation)

    @classmethod
    def one(cls, q_truncation: int, degree_truncation: int) -> "QSeries":
        return cls({0: {Monomial.one(): Fraction(1)}}, q_truncation, degree_truncation)

    def coefficient(self, qpow: int, mono: Monomial) -> Fraction:
        return self.coeffs.get(qpow, {}).get(mono, Fraction(0))

    def _common(self, other: "QSeries") -> tuple[int, int]:
        return (
            min(self.q_truncation, other.q_truncation),
            min(self.degree_truncation, other.degree_truncation),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QSeries)
            and self.coeffs == other.coeffs
            and self.q_truncation == other.q_truncation
            and self.degree_truncation == other.degree_truncation
        )

    def __add__(self, other: "QSeries") -> "QSeries":
        N, D = self._common(other)
        out: dict[int, dict[Monomial, Fraction]] = {}
        for src in (self, other):
            for qpow, row in src.coeffs.items():
                dst = out.setdefault(qpow, {})
                for m, c in row.items():
                    dst[m] = dst.get(m, Fraction(0)) + c
        return QSeries(out, N, D)

    def __neg__(self) -> "QSeries":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, c: Fraction) -> "QSeries":
        c = Fraction(c)
        out = {
            q: {m: c * v for m, v in row.items()} for q, row in self.coeffs.items()
        }
        return QSeries(out, self.q_truncation, self.degree_truncation)

    def __mul__(self, other: "QSeries") -> "QSeries":
        N, D = self._common(other)
        out: dict[int, dict[Monomial, Fraction]] = {}
        for q1, row1 in self.coeffs.items():
            for q2, row2 in other.coeffs.items():
                if q1 + q2 > N:
                    continue
                dst = out.setdefault(q1 + q2, {})
                for m1, c1 in row1.items():
                    for m2, c2 in row2.items():
                        m = m1 * m2
                        if m.degree() > D:
                            continue
                        dst[m] = dst.get(m, Fraction(0)) + c1 * c2
        return QSeries(out, N, D)

    def exp(self) -> "QSeries":
        """exp of a series with no q^0 part (finitely many terms matter)."""
        if 0 in self.coeffs:
            raise MalformedSeriesError("exp needs a vanishing q^0 coefficient")
        result = QSeries.one(self.q_truncation, self.degree_truncation)
        power = QSeries.one(self.q_truncation, self.degree_truncation)
        for k in range(1, self.q_truncation + 1):
            power = power * self
            if not power.coeffs:
                break
            result = result + power.scale(Fraction(1, factorial(k)))
        return result

    def log(self) -> "QSeries":
        """log of a series with q^0 coefficient equal to 1."""
        head = self.coeffs.get(0, {})
        if head != {Monomial.one(): Fraction(1)}:
            raise MalformedSeriesError("log needs q^0 coefficient exactly 1")
        rest = self - QSeries.one(self.q_truncation, self.degree_truncation)
        result = QSeries.zero(self.q_truncation, self.degree_truncation)
        power = QSeries.one(self.q_truncation, self.degree_truncation)
        for k in range(1, self.q_truncation + 1):
            power = power * rest
            if not power.coeffs:
                break
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        return result

    def records(self) -> list[tuple[int, str, Fraction]]:
        out = []
        for qpow in sorted(self.coeffs):
            row = self.coeffs[qpow]
            for m in sorted(row, key=lambda m: m.sort_key()):
                out.append((qpow, str(m), row[m]))
        return out


def _channels(geom: StripGeometry):
    """Ordered factor channels of the product form, labels attached.

    Yields (ratio monomial, weight) with weight n per q^n-level for cross
    channels and -n/2 per ordered same-type pair (diagonal included).
    """
    alphas, betas = _labelled_parameters(geom)
    for _, _, ma in alphas:
        for _, _, mb in betas:
            yield ma / mb, Fraction(1)
    for group in (alphas, betas):
        for _, _, m1 in group:
            for _, _, m2 in group:
                yield m1 / m2, Fraction(-1, 2)


def z_product_log_series(geom: StripGeometry, q_order: int, degree: int) -> QSeries:
    """log Z expanded to order q^q_order and monomial degree ``degree``."""
    if q_order < 1 or degree < 1:
        raise ValueError("truncations must be >= 1")
    require_valid(geom)
    out: dict[int, dict[Monomial, Fraction]] = {}
    for ratio, weight in _channels(geom):
        for n in range(1, q_order + 1):
            for m in range(1, q_order // n + 1):
                mono = ratio**m
                if mono.degree() > degree:
                    continue
                qpow = n * m
                # weight * n * log-factor: log(1 - r q^n) = -sum r^m q^{nm}/m
                c = -weight * Fraction(n, m)
                dst = out.setdefault(qpow, {})
                dst[mono] = dst.get(mono, Fraction(0)) + c
    return QSeries(out, q_order, degree)


# ---------------------------------------------------------------------------
# The product / free-energy bridge
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrosscheckRecord:
    channel: str
    sign: int
    product_side: Fraction
    free_energy_side: Fraction

    @property
    def ok(self) -> bool:
        return self.product_side == self.free_energy_side


@dataclass(frozen=True)
class CrosscheckResult:
    ok: bool
    records: tuple[CrosscheckRecord, ...]

    def first_failure(self):
        for rec in self.records:
            if not rec.ok:
                return rec
        return None


def coefficient_crosscheck(geom: StripGeometry, d: int, g: int) -> CrosscheckResult:
    """Exact per-channel bridge between the product form and F_g.

    Product side: the hbar^{2g-2} coefficient of the degree-d channel
    term of log Z after the resummation sum_n n q^{dn} = 1/(4 sinh^2(d
    hbar/2)), with 1/(4 sinh^2(x/2)) = 1/x^2 - sum_g B_{2g} x^{2g-2} /
    (2g (2g-2)!) computed from the series inversion of S (Bernoulli-free).
    Free-energy side: sign * B_{2g} d^{2g-3} / (2g (2g-2)!), the Li-series
    coefficient of the closed formula.  The diagonal channel compares the
    MacMahon chi/2 exponent against the constant-map term instead (no d
    dependence).
    """
    if d < 1 or g < 2:
        raise ValueError("need d >= 1 and g >= 2")
    require_valid(geom)
    c2g = (s_inverse_series(2 * g) ** 2).coefficient(2 * g)
    base_f = bernoulli(2 * g) * Fraction(d) ** (2 * g - 3) / Fraction(
        2 * g * factorial(2 * g - 2)
    )
    records: list[CrosscheckRecord] = []

    def channel_name(kind_a, idx_a, kind_b, idx_b):
        return f"{kind_a}{idx_a}/{kind_b}{idx_b}"

    params = [("alpha", i + 1) for i in range(geom.r)] + [
        ("beta", j) for j in range(geom.s + 1)
    ]
    for x in range(len(params)):
        for y in range(x + 1, len(params)):
            (ka, ia), (kb, ib) = params[x], params[y]
            if ka == kb:
                # two half-weight orientations fold onto one channel
                sign = -1
                product = c2g * Fraction(d) ** (2 * g - 3)
            else:
                sign = +1
                product = -c2g * Fraction(d) ** (2 * g - 3)
            records.append(
                CrosscheckRecord(
                    channel_name(ka, ia, kb, ib), sign, product, sign * base_f
                )
            )
    # diagonal MacMahon channel: chi/2 exponent against the constant-map term
    zeta_reg = -bernoulli(2 * g - 2) / Fraction(2 * g - 2)
    diag_product = Fraction(geom.chi, 2) * c2g * zeta_reg
    records.append(
        CrosscheckRecord(
            "diagonal", -1, diag_product, fg_closed_constant_term(g, geom.chi)
        )
    )
    result = CrosscheckResult(all(r.ok for r in records), tuple(records))
    return result


# ---------------------------------------------------------------------------
# DT reading
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DTReading:
    """Formal DT coefficients read from Z restricted to [Q_i] >= 0.

    The chamber question is a convergence statement about the Kahler
    parameters that this expansion does not resolve; coefficients are
    reported as raw formal data.
    """

    coefficients: tuple[tuple[Monomial, int, Fraction], ...]
    caveat: str

    def as_dict(self) -> dict[tuple[Monomial, int], Fraction]:
        return {(m, n): c for m, n, c in self.coefficients}


def dt_read(geom: StripGeometry, q_order: int, degree: int) -> DTReading:
    """Exponentiate log Z and read coefficients at nonnegative exponents."""
    z = z_product_log_series(geom, q_order, degree).exp()
    out = []
    for qpow in sorted(z.coeffs):
        row = z.coeffs[qpow]
        for mono in sorted(row, key=lambda m: m.sort_key()):
            if any(e < 0 for _, e in mono.exps):
                continue
            out.append((mono, qpow, row[mono]))
    return DTReading(
        tuple(out),
        "chamber-dependent formal data: the DT chamber is fixed by convergence "
        "conditions on the Kahler parameters, which this expansion does not resolve",
    )
