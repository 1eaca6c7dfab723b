"""Genus-g free energies of the strip curve by two exact routes.

Route one is the closed formula

    F_g = -(1+r+s)/2 * B_{2g} B_{2g-2} / (2g (2-2g) (2g-2)!)
          - sum_{pairs within alphas}  B_{2g} Li_{3-2g}(ratio) / (2g (2g-2)!)
          - sum_{pairs within betas}   B_{2g} Li_{3-2g}(ratio) / (2g (2g-2)!)
          + sum_{alpha-beta cross}     B_{2g} Li_{3-2g}(ratio) / (2g (2g-2)!),

where ratio orientation is immaterial (Li at odd negative order is
inversion-symmetric).  Route two evaluates, per residue point
p in {1/beta_j} | {1/alpha_i}, the exact local residue of

    (y(q) - y(p)) ( int^q wdual_{g,1}
                    - (1/2) sum_{g1+g2=g} wdual_{g1,1} wdual_{g2,1} / (dx dy) ) dx

entirely in rational Laurent arithmetic: y(q) - y(p) is the branch-free
series log(1 + t/p).  The two routes must agree exactly; they are mutual
oracles.  The individually testable residue identities backing route two
live here as standalone operations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DegenerateGeometryError, GeometryError, PoleError
from .exact import LaurentBlock, RATIONAL, TruncatedSeries, bernoulli, s_inverse_series
from .polylog import Polynomial, RationalFunction, li_neg, li_neg_at_exp, li_neg_rational
from .strip import StripGeometry, dx_dz, require_valid, residue_point_labels

__all__ = [
    "FreeEnergyValue",
    "fg_closed",
    "fg_closed_constant_term",
    "fg_residue",
    "residue_at_point_aggregate",
    "residue_lemma_linear",
    "residue_lemma_log_at_one",
    "residue_quadratic_diag",
    "residue_quadratic_mixed",
]


@dataclass(frozen=True)
class FreeEnergyValue:
    genus: int
    value: Fraction
    route: str  # "closed-form" | "residue" | "tr-numeric"


def _li_prefactor(g: int) -> Fraction:
    return bernoulli(2 * g) / Fraction(2 * g * factorial(2 * g - 2))


def fg_closed_constant_term(g: int, chi: int) -> Fraction:
    """The constant-map term with Euler characteristic ``chi`` = 1+r+s."""
    return (
        -Fraction(chi, 2)
        * bernoulli(2 * g)
        * bernoulli(2 * g - 2)
        / Fraction(2 * g * (2 - 2 * g) * factorial(2 * g - 2))
    )


def fg_closed(g: int, geom: StripGeometry) -> Fraction:
    """Closed-form F_g for g >= 2."""
    if g < 2:
        raise GeometryError("closed form applies to g >= 2 (F_0, F_1 out of scope)")
    require_valid(geom)
    pref = _li_prefactor(g)
    order = 2 * g - 3
    value = fg_closed_constant_term(g, geom.chi)
    alphas = geom.alphas
    betas = geom.betas_full
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            value -= pref * li_neg(order, alphas[i] / alphas[j])
    for i in range(len(betas)):
        for j in range(i + 1, len(betas)):
            value -= pref * li_neg(order, betas[i] / betas[j])
    for a in alphas:
        for b in betas:
            value += pref * li_neg(order, a / b)
    return value


# ---------------------------------------------------------------------------
# Residue route
# ---------------------------------------------------------------------------


def _li_block(order: int, c: Fraction, p: Fraction, window: int) -> LaurentBlock:
    """Laurent expansion of Li_{-order}(c q) at q = p."""
    rf = li_neg_rational(order).realization.scale_argument(c)
    return rf.laurent_at(p, window)


def _combination_block(order: int, geom: StripGeometry, p: Fraction, window: int) -> LaurentBlock:
    """sum_i Li_{-order}(alpha_i q) - sum_j Li_{-order}(beta_j q) at q = p."""
    total = LaurentBlock(0, [Fraction(0)] * (window + 1), RATIONAL, convert=False)
    for a in geom.alphas:
        total = total + _li_block(order, a, p, window)
    for b in geom.betas_full:
        total = total - _li_block(order, b, p, window)
    return total


def _log_ratio_block(p: Fraction, window: int) -> LaurentBlock:
    """log(q/p) = log(1 + t/p) as a rational series in t = q - p."""
    coeffs = [Fraction(0)]
    for k in range(1, window + 1):
        coeffs.append(Fraction((-1) ** (k + 1), k) / Fraction(p) ** k)
    return LaurentBlock(0, coeffs, RATIONAL, convert=False)


def _inv_q_block(p: Fraction, window: int) -> LaurentBlock:
    rf = RationalFunction(Polynomial.one(), Polynomial.x(), reduce=False)
    return rf.laurent_at(p, window)


def residue_at_point_aggregate(
    g: int, geom: StripGeometry, p_label: tuple[str, int]
) -> Fraction:
    """Full residue at one point 1/beta_j or 1/alpha_i, by local expansion.

    Matches the closed per-point value
    (1/2) [hbar^{2g}] S^{-2} ( B_{2g-2}
        - (2g-2) sum_{same-type, other} Li_{3-2g}(ratio)
        + (2g-2) sum_{cross} Li_{3-2g}(ratio) ),
    which the tests assemble independently.
    """
    if g < 2:
        raise GeometryError("residues of the free-energy integrand need g >= 2")
    require_valid(geom)
    kind, idx = p_label
    p = 1 / geom.parameter(kind, idx)
    window = 2 * g + 8
    sinv = s_inverse_series(2 * g)
    log_block = _log_ratio_block(p, window)
    xprime = dx_dz(geom).laurent_at(p, window)
    primitive = _combination_block(2 * g - 2, geom, p, window).scale(
        sinv.coefficient(2 * g)
    )
    integrand = primitive * xprime
    if g >= 2:
        quad = LaurentBlock(0, [Fraction(0)] * (window + 1), RATIONAL, convert=False)
        lower: dict[int, LaurentBlock] = {}
        for g1 in range(1, g):
            if g1 not in lower:
                lower[g1] = _combination_block(2 * g1 - 1, geom, p, window)
            g2 = g - g1
            if g2 not in lower:
                lower[g2] = _combination_block(2 * g2 - 1, geom, p, window)
            coeff = sinv.coefficient(2 * g1) * sinv.coefficient(2 * g2)
            quad = quad + (lower[g1] * lower[g2]).scale(coeff)
        integrand = integrand - (quad * _inv_q_block(p, window)).scale(Fraction(1, 2))
    return (log_block * integrand).residue()


def fg_residue(g: int, geom: StripGeometry) -> Fraction:
    """F_g by summing exact local residues over all log-vital points."""
    if g < 2:
        raise GeometryError("residue route applies to g >= 2")
    require_valid(geom)
    labels = residue_point_labels(geom)
    points = [1 / geom.parameter(kind, idx) for kind, idx in labels]
    if len(set(points)) != len(points):
        raise DegenerateGeometryError("two residue points coincide")
    total = Fraction(0)
    for label in labels:
        total += residue_at_point_aggregate(g, geom, label)
    return total / (2 - 2 * g)


# ---------------------------------------------------------------------------
# The residue lemmas, one operation each
# ---------------------------------------------------------------------------


def residue_lemma_linear(a: Fraction, g: int) -> Fraction:
    """Res_{q->1} log(q) dq (aq-1)^{-1} Li_{2-2g}(q), exactly.

    Equals (2g-2) Li_{3-2g}(a) / a for a outside {0, 1}.
    """
    a = Fraction(a)
    if a == 1:
        raise PoleError(
            "a = 1 collapses the linear factor onto the Li pole; "
            "use residue_lemma_log_at_one"
        )
    if a == 0 or g < 2:
        raise ValueError("need a != 0 and g >= 2")
    window = 2 * g + 6
    log_block = _log_ratio_block(Fraction(1), window)
    linear = RationalFunction(Polynomial.one(), Polynomial([-1, a])).laurent_at(
        Fraction(1), window
    )
    li_block = li_neg_rational(2 * g - 2).realization.laurent_at(Fraction(1), window)
    return (log_block * linear * li_block).residue()


def residue_lemma_log_at_one(g: int) -> Fraction:
    """Res_{q->1} log(q) dq (q-1)^{-1} Li_{2-2g}(q) = -B_{2g-2}."""
    if g < 2:
        raise ValueError("need g >= 2")
    window = 2 * g + 6
    log_block = _log_ratio_block(Fraction(1), window)
    pole = LaurentBlock(-1, [Fraction(1)] + [Fraction(0)] * window)
    li_block = li_neg_rational(2 * g - 2).realization.laurent_at(Fraction(1), window)
    return (log_block * pole * li_block).residue()


def residue_quadratic_diag(g1: int, g2: int) -> Fraction:
    """mu-residue of mu dmu Li_{1-2g1}(e^mu) Li_{1-2g2}(e^mu) = -B_{2g1+2g2-2}."""
    if g1 < 1 or g2 < 1:
        raise ValueError("need g1, g2 >= 1")
    T = 2 * (g1 + g2) + 4
    block = li_neg_at_exp(2 * g1 - 1, T) * li_neg_at_exp(2 * g2 - 1, T)
    return block.coefficient(-2)


def _exp_series_block(T: int) -> LaurentBlock:
    return LaurentBlock(
        0, [Fraction(1, factorial(k)) for k in range(T + 1)], RATIONAL, convert=False
    )


def residue_quadratic_mixed(a: Fraction, g1: int, g2: int) -> Fraction:
    """mu-residue with one diagonal and one shifted polylog block.

    Res_{mu->0} mu dmu Li_{1-2g1}(e^mu) Li_{1-2g2}(a e^mu)
    = (2g1-1) Li_{3-2g1-2g2}(a) for a outside {0, 1}; the shifted factor
    is expanded as an exact rational mu-series (no log a branch enters).
    """
    a = Fraction(a)
    if a in (0, 1):
        raise ValueError("need a outside {0, 1}")
    if g1 < 1 or g2 < 1:
        raise ValueError("need g1, g2 >= 1")
    T = 2 * (g1 + g2) + 4
    diag = li_neg_at_exp(2 * g1 - 1, T)
    rf = li_neg_rational(2 * g2 - 1).realization.scale_argument(a)
    emu = _exp_series_block(T)
    shifted = rf.num.eval_block(emu) / rf.den.eval_block(emu)
    return (diag * shifted).coefficient(-2)
