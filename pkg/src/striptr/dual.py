"""Dual-side correlators of the strip curve.

y = log z is unramified, so the swapped recursion collapses: the only
nonzero dual correlators are the n = 1 family

    omega_dual_{g,1} = s_{2g} ( sum_i Li_{1-2g}(alpha_i z)
                              - sum_{j=0}^{s} Li_{1-2g}(beta_j z) ) dz/z,

with s_{2g} the hbar^{2g} coefficient of 1/S(hbar).  The framing term of
x is linear in y and dies under the double y-derivative, so the family is
framing-independent.  The dual free energy vanishes because its residue
sum ranges over the empty ramification set of y.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError
from .exact import s_inverse_series
from .polylog import Polynomial, RationalFunction, li_neg_rational
from .strip import StripGeometry, require_valid

__all__ = [
    "DualCorrelator",
    "li_combination",
    "omega_dual",
    "omega_dual_primitive",
    "dual_free_energy",
    "y_ramification_points",
]


@dataclass(frozen=True)
class DualCorrelator:
    """One dual correlator: prefactor s_{2g} kept apart from the one-form.

    ``one_form`` is the coefficient of dz without the prefactor; the full
    correlator is ``prefactor * one_form * dz``.  Poles sit only at
    {1, 1/alpha_i, 1/beta_j} and the Li combination vanishes at z = 0.
    """

    genus: int
    one_form: RationalFunction
    prefactor: Fraction

    def full_one_form(self) -> RationalFunction:
        return self.one_form.scale(self.prefactor)

    def li_combination(self) -> RationalFunction:
        """z times the one-form: the bare polylog combination."""
        z = RationalFunction(Polynomial.x(), Polynomial.one(), reduce=False)
        return self.one_form * z


def s_coefficient(g: int) -> Fraction:
    """[hbar^{2g}] 1/S(hbar)."""
    return s_inverse_series(2 * g).coefficient(2 * g)


def li_combination(order: int, geom: StripGeometry) -> RationalFunction:
    """sum_i Li_{-order}(alpha_i z) - sum_{j>=0} Li_{-order}(beta_j z)."""
    li = li_neg_rational(order)
    total = RationalFunction(Polynomial.zero(), Polynomial.one(), reduce=False)
    for a in geom.alphas:
        total = total + li.realization.scale_argument(a)
    for b in geom.betas_full:
        total = total - li.realization.scale_argument(b)
    return total


def omega_dual(g: int, geom: StripGeometry) -> DualCorrelator:
    """The dual correlator for g >= 1 (n = 1; all other n vanish)."""
    if g < 1:
        raise GeometryError(
            "g = 0 is unsupported: the disk term x dy enters the free energy "
            "implicitly and has no rational realization"
        )
    require_valid(geom)
    comb = li_combination(2 * g - 1, geom)
    z = RationalFunction(Polynomial.x(), Polynomial.one(), reduce=False)
    return DualCorrelator(genus=g, one_form=comb / z, prefactor=s_coefficient(g))


def omega_dual_primitive(g: int, geom: StripGeometry) -> RationalFunction:
    """s_{2g} (sum_i Li_{2-2g}(alpha_i z) - sum_j Li_{2-2g}(beta_j z)).

    Exact primitive of the dual correlator along dz/z, using
    int Li_m(c z) dz/z = Li_{m+1}(c z); vanishes at z = 0.
    """
    if g < 1:
        raise GeometryError("primitive defined for g >= 1")
    require_valid(geom)
    return li_combination(2 * g - 2, geom).scale(s_coefficient(g))


def y_ramification_points(geom: StripGeometry) -> list:
    """Zeros of dy = dz/z: none on the curve (and none at infinity)."""
    dy = RationalFunction(Polynomial.one(), Polynomial.x(), reduce=False)
    if dy.num.degree < 1:
        return []
    raise AssertionError("dy = dz/z acquired zeros; unreachable")


def dual_free_energy(g: int, geom: StripGeometry) -> Fraction:
    """The dual free energy: the empty residue sum over Ram(y), i.e. 0."""
    if g < 2:
        raise GeometryError("free energies are defined for g >= 2 here")
    require_valid(geom)
    total = Fraction(0)
    for _point in y_ramification_points(geom):
        raise AssertionError("unreachable: y is unramified on the strip curve")
    return total / (2 - 2 * g) if total else Fraction(0)
