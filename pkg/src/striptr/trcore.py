"""Direct numeric Eynard-Orantin recursion on the strip curve.

Third, independent route to F_g.  Everything happens in local Laurent
windows at the ramification points of x, in fixed-precision complex
arithmetic (default 256 bits plus guard bits):

* each correlator with 2g+n-2 > 0 is stored as a principal-part tensor
  over the basis 1/(z - p_i)^k (k >= 2), which is exact for the rational
  parametrization: poles sit only at ramification points and every
  variable decays at infinity;
* the recursion reduces to scalar contractions against cached residue
  pairings, so the expensive series products are shared across (g, n);
* evaluations at the deck image sigma(q) carry the Jacobian sigma'(q),
  which is what makes the q-forms well defined.

Residue-freeness is structural here: the kernel term t^0 - sigma(t)^0
vanishes, so no first-order pole is ever produced.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional

import mpmath

from .errors import BudgetError, GeometryError, PoleError, PrecisionError
from .exact import ComplexBallField, LaurentBlock, TruncatedSeries
from .strip import StripGeometry, dx_dz, log_vital_points, ramification_points, require_valid

__all__ = [
    "GUARD_BITS",
    "DEFAULT_CHI_BUDGET",
    "DEFAULT_GENUS_BUDGET",
    "default_truncation",
    "bergman",
    "DeckSeries",
    "LocalFrame",
    "Correlator",
    "TREngine",
    "deck",
    "omega",
    "tr_free_energy",
    "sample_points",
]

GUARD_BITS = 64
DEFAULT_CHI_BUDGET = 4
DEFAULT_GENUS_BUDGET = 3

mp = mpmath.mp


def default_truncation(g: int, n: int) -> int:
    """Default local-series window for the (g, n) correlator."""
    return 4 * (3 * g + n) + 8


def _to_mpc(x) -> mpmath.mpc:
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator))
    return mpmath.mpc(x)


def bergman(z1, z2):
    """The genus-0 Bergman kernel coefficient 1/(z1 - z2)^2.

    The strip mirror curve is rationally parametrized, so there are no
    A-cycles and the normalization clause is vacuous.
    """
    z1, z2 = _to_mpc(z1), _to_mpc(z2)
    d = z1 - z2
    if d == 0:
        raise PoleError("Bergman kernel evaluated on the diagonal")
    return 1 / d**2


@dataclass(frozen=True)
class DeckSeries:
    """Local deck transformation sigma(t) = -t + a2 t^2 + ... at p_i."""

    base_index: int
    series: TruncatedSeries
    involution_defect: float
    x_invariance_defect: float


class LocalFrame:
    """All local series data attached to one ramification point."""

    def __init__(self, engine: "TREngine", index: int, center):
        self.index = index
        self.center = center
        self.truncation = engine.truncation
        self.precision_bits = engine.precision_bits
        f = engine.field
        L = engine.truncation
        rf = engine._dx
        base = LaurentBlock(
            0, [f.convert(center), f.one()] + [f.zero()] * (L - 1), f, convert=False
        )
        num_b = rf.num.eval_block(base)
        den_b = rf.den.eval_block(base)
        xp = num_b / den_b
        if xp.offset != 0:
            raise PrecisionError("unexpected pole of dx at a ramification point")
        scale = max(abs(c) for c in xp.coeffs)
        if abs(xp.coeffs[0]) > scale * mpmath.mpf(2) ** (-self.precision_bits // 2):
            raise PrecisionError(
                f"|x'(p_{index})| too large after polish; center not a root"
            )
        coeffs = list(xp.coeffs)
        coeffs[0] = f.zero()
        self.xp = LaurentBlock(0, coeffs, f, convert=False)
        # u(t) = x(p+t) - x(p); starts at t^2 for a simple point
        u = [f.zero(), f.zero()]
        for k, c in enumerate(coeffs[1:], start=1):
            u.append(c / f.convert(k + 1))
        self.u = LaurentBlock(0, u[: L + 1], f, convert=False)
        self.deck = self._solve_deck(f, L)
        self.sigma = LaurentBlock(0, self.deck.series.coeffs, f, convert=False)
        sp = [
            f.convert(k + 1) * self.deck.series.coeffs[k + 1] for k in range(L)
        ] + [f.zero()]
        self.sigma_prime = LaurentBlock(0, sp, f, convert=False)
        inv_p = f.one() / f.convert(center)
        log_t = _log1p_series(L, f).compose(
            TruncatedSeries.identity(L, f).scale(inv_p)
        )
        log_s = _log1p_series(L, f).compose(self.deck.series.scale(inv_p))
        self.dy_diff = LaurentBlock(0, (log_t - log_s).coeffs, f, convert=False)
        self.dinv = (self.dy_diff * self.xp).inverse()
        # Phi = log(p) u(t) + int_0^t log(1 + tau/p) x'(p+tau) dtau
        logp = mpmath.log(center)
        core = LaurentBlock(0, log_t.coeffs, f, convert=False) * self.xp
        phi = [f.zero()] * (L + 1)
        for k, c in enumerate(core.coeffs[:L]):
            phi[k + 1] = c / f.convert(k + 1)
        for k, c in enumerate(self.u.coeffs):
            phi[k] = phi[k] + f.convert(logp) * c
        self.phi = LaurentBlock(0, phi, f, convert=False)
        self._field = f
        self._sig_pows: dict[int, LaurentBlock] = {1: self.sigma}
        self._kernels: dict[int, LaurentBlock] = {}
        self._E: dict[tuple, LaurentBlock] = {}
        self._Es: dict[tuple, LaurentBlock] = {}
        self._P: dict[tuple, LaurentBlock] = {}
        self._D: dict[tuple, dict[int, mpmath.mpc]] = {}
        self._engine = engine
        diag = self.sigma_prime * (
            (LaurentBlock(0, TruncatedSeries.identity(L, f).coeffs, f, convert=False)
             - self.sigma)
            ** 2
        ).inverse()
        self._bergman_diag = diag

    def _solve_deck(self, f, L) -> DeckSeries:
        ucs = self.u.coeffs
        v = TruncatedSeries(ucs[2:] if len(ucs) > 2 else [f.one()], f, convert=False)
        v0 = v.coeffs[0]
        if abs(v0) == 0:
            raise PrecisionError("x'' vanishes at the center; not a simple point")
        unit = v.scale(f.one() / v0)
        sqrt_unit = unit.log().scale(f.convert(Fraction(1, 2))).exp()
        sqrt_v = sqrt_unit.scale(f.convert(mpmath.sqrt(v0)))
        w = TruncatedSeries(
            [f.zero()] + list(sqrt_v.coeffs[:L]), f, convert=False
        )
        winv = w.reversion()
        sigma = winv.compose(w.scale(f.convert(-1)))
        invol = sigma.compose(sigma) - TruncatedSeries.identity(sigma.truncation, f)
        inv_defect = max(abs(c) for c in invol.coeffs)
        u_series = TruncatedSeries(ucs, f, convert=False)
        xdef = u_series.compose(sigma.truncate(u_series.truncation)) - u_series
        scale = max(1, max(abs(c) for c in ucs))
        x_defect = max(abs(c) for c in xdef.coeffs) / scale
        tol = mpmath.mpf(2) ** (-self.precision_bits // 2)
        if inv_defect > tol or x_defect > tol:
            raise PrecisionError(
                f"deck solve at p_{self.index} missed tolerance: "
                f"involution {mpmath.nstr(inv_defect, 5)}, "
                f"x-invariance {mpmath.nstr(x_defect, 5)}"
            )
        return DeckSeries(self.index, sigma, float(inv_defect), float(x_defect))

    # -- cached series -----------------------------------------------------

    def sig_pow(self, j: int) -> LaurentBlock:
        if j == 0:
            f = self._field
            return LaurentBlock(
                0, [f.one()] + [f.zero()] * self.truncation, f, convert=False
            )
        if j not in self._sig_pows:
            self._sig_pows[j] = self.sig_pow(j - 1) * self.sigma
        return self._sig_pows[j]

    def kernel(self, j: int) -> LaurentBlock:
        """k_j(t) = (1/2)(t^j - sigma^j) / (dy_diff x'), Laurent."""
        if j not in self._kernels:
            f = self._field
            L = self.truncation
            tj = LaurentBlock(
                j, [f.one()] + [f.zero()] * L, f, convert=False
            )
            diff = tj - self.sig_pow(j)
            self._kernels[j] = (diff * self.dinv).scale(f.convert(Fraction(1, 2)))
        return self._kernels[j]

    def q_series(self, key) -> LaurentBlock:
        """Expansion at q = p_i + t of a q-side factor."""
        if key in self._E:
            return self._E[key]
        f = self._field
        L = self.truncation
        if key[0] == "b":
            _, i2, k = key
            if i2 == self.index:
                out = LaurentBlock(-k, [f.one()] + [f.zero()] * L, f, convert=False)
            else:
                d = self.center - self._engine.points[i2]
                base = LaurentBlock(
                    0, [f.convert(d), f.one()] + [f.zero()] * (L - 1), f, convert=False
                )
                out = (base**k).inverse()
        elif key[0] == "T":
            j = key[1]
            out = LaurentBlock(
                j, [f.convert(j + 1)] + [f.zero()] * L, f, convert=False
            )
        else:
            raise KeyError(key)
        self._E[key] = out
        return out

    def s_series(self, key) -> LaurentBlock:
        """Expansion at sigma(q), Jacobian sigma'(t) included."""
        if key in self._Es:
            return self._Es[key]
        f = self._field
        if key[0] == "b":
            _, i2, k = key
            if i2 == self.index:
                core = self.sig_pow(k).inverse()
            else:
                d = self.center - self._engine.points[i2]
                base = LaurentBlock(
                    0,
                    [f.convert(d), f.zero()] + [f.zero()] * (self.truncation - 1),
                    f,
                    convert=False,
                ) + self.sigma
                core = (base**k).inverse()
            out = core * self.sigma_prime
        elif key[0] == "S":
            j = key[1]
            out = self.sig_pow(j).scale(f.convert(j + 1)) * self.sigma_prime
        else:
            raise KeyError(key)
        self._Es[key] = out
        return out

    def pair_block(self, qkey, skey) -> LaurentBlock:
        key = (qkey, skey)
        if key not in self._P:
            if qkey == "BD":
                self._P[key] = self._bergman_diag
            else:
                self._P[key] = self.q_series(qkey) * self.s_series(skey)
        return self._P[key]

    def pair_residues(self, qkey, skey) -> dict[int, mpmath.mpc]:
        """j -> Res_t [ k_j(t) * pair_block(t) ], the scalar pairings."""
        key = (qkey, skey)
        if key in self._D:
            return self._D[key]
        block = self.pair_block(qkey, skey)
        out: dict[int, mpmath.mpc] = {}
        max_j = -block.offset + 1
        for j in range(1, max_j + 1):
            kj = self.kernel(j)
            val = _residue_of_product(kj, block)
            if val != 0:
                out[j] = val
        self._D[key] = out
        return out

    def kernel_numerator_series(self, z) -> LaurentBlock:
        """(1/2) int_{sigma(q)}^{q} B(z, .) expanded in t; starts at t^1."""
        f = self._field
        z = _to_mpc(z)
        L = self.truncation
        total = LaurentBlock(0, [f.zero()] * (L + 1), f, convert=False)
        inv = 1 / (z - self.center)
        for j in range(1, L):
            tj = LaurentBlock(j, [f.one()] + [f.zero()] * L, f, convert=False)
            diff = (tj - self.sig_pow(j)).scale(f.convert(inv ** (j + 1) / 2))
            total = total + diff
        return total


def _pair_block_offset(frame: LocalFrame, key) -> int:
    """Offset of a factor series without forcing series construction."""
    if key[0] == "b":
        _, i2, k = key
        return -k if i2 == frame.index else 0
    return key[1]


def _log1p_series(T: int, f) -> TruncatedSeries:
    coeffs = [f.zero()] + [
        f.convert(Fraction((-1) ** (k + 1), k)) for k in range(1, T + 1)
    ]
    return TruncatedSeries(coeffs, f, convert=False)


def _residue_of_product(a: LaurentBlock, b: LaurentBlock) -> mpmath.mpc:
    """[t^-1] (a*b) as a dot product; windows must reach t^-1."""
    total = mpmath.mpc(0)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        k = -1 - (a.offset + i) - b.offset
        if 0 <= k < len(b.coeffs):
            cb = b.coeffs[k]
            if cb != 0:
                total += ca * cb
    return total


# ---------------------------------------------------------------------------
# Correlators
# ---------------------------------------------------------------------------


@dataclass
class Correlator:
    """A TR multidifferential as a symmetric principal-part tensor.

    ``tensor`` maps ordered tuples of (ramification index, pole order)
    basis keys to coefficients; every slot permutation is stored, so any
    slot can be bound during recursion or evaluation.
    """

    genus: int
    points: int
    tensor: dict[tuple, mpmath.mpc]
    engine: "TREngine"
    symmetry_defect: float = 0.0

    def evaluate(self, zs) -> mpmath.mpc:
        """Coefficient of prod dz_m at numeric sample points."""
        if len(zs) != self.points:
            raise ValueError("wrong number of points")
        with mp.workprec(self.engine.working_bits):
            zs = [_to_mpc(z) for z in zs]
            total = mpmath.mpc(0)
            centers = self.engine.points
            for key, cf in self.tensor.items():
                term = cf
                for (i, k), z in zip(key, zs):
                    term = term / (z - centers[i]) ** k
                total += term
            return total

    def max_pole_order(self) -> int:
        return max((k for key in self.tensor for (_, k) in key), default=0)

    def residue_weight(self, index: int) -> mpmath.mpf:
        """Sum of |coefficients| on first-order poles; structurally 0."""
        tot = mpmath.mpf(0)
        for key, cf in self.tensor.items():
            if key[-1] == (index, 1):
                tot += abs(cf)
        return tot

    def local_expansion(self, center_index: int, spectators=()) -> LaurentBlock:
        """Expansion in the last variable around p_i, spectators numeric."""
        if len(spectators) != self.points - 1:
            raise ValueError("need numeric values for all but the last slot")
        eng = self.engine
        with mp.workprec(eng.working_bits):
            f = eng.field
            frame = eng.frames[center_index]
            spectators = [_to_mpc(z) for z in spectators]
            total = LaurentBlock(
                0, [f.zero()] * (eng.truncation + 1), f, convert=False
            )
            for key, cf in self.tensor.items():
                w = cf
                for (i, k), z in zip(key[:-1], spectators):
                    w = w / (z - eng.points[i]) ** k
                total = total + frame.q_series(("b",) + key[-1]).scale(w)
            return total

    def contour_residue(self, center_index: int, spectators=(), samples: int = 32):
        """Trapezoid contour check of Res_{q->p_i}; independent of storage."""
        eng = self.engine
        with mp.workprec(eng.working_bits):
            p = eng.points[center_index]
            rho = eng.contour_radius(center_index)
            total = mpmath.mpc(0)
            for m in range(samples):
                theta = 2 * mpmath.pi * m / samples
                rot = mpmath.exp(mpmath.mpc(0, 1) * theta)
                q = p + rho * rot
                total += self.evaluate(list(spectators) + [q]) * rho * rot
            return total / samples


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------


class TREngine:
    """Shared state for one geometry at one precision/truncation."""

    def __init__(
        self,
        geom: StripGeometry,
        precision_bits: int = 256,
        genus_budget: int = DEFAULT_GENUS_BUDGET,
        chi_budget: Optional[int] = None,
        truncation: Optional[int] = None,
        seed: int = 0,
    ):
        require_valid(geom)
        if log_vital_points(geom, "x-function"):
            raise GeometryError(
                "x has log-vital points; plain TR would not apply"
            )
        self.geom = geom
        self.precision_bits = precision_bits
        self.working_bits = precision_bits + GUARD_BITS
        self.genus_budget = genus_budget
        self.chi_budget = (
            chi_budget if chi_budget is not None else max(DEFAULT_CHI_BUDGET, 2 * genus_budget - 1)
        )
        self.truncation = (
            truncation if truncation is not None else default_truncation(genus_budget, 1)
        )
        self.seed = seed
        self.field = ComplexBallField(precision_bits)
        self._dx = dx_dz(geom)
        with mp.workprec(self.working_bits):
            self.points = ramification_points(geom, self.working_bits)
            self.frames = [self._build_frame(i, p) for i, p in enumerate(self.points)]
        self._memo: dict[tuple[int, int], Correlator] = {}
        self._drop_tol = mpmath.mpf(2) ** (-(precision_bits + GUARD_BITS // 2))

    def _build_frame(self, index: int, center) -> LocalFrame:
        return LocalFrame(self, index, center)

    def contour_radius(self, index: int):
        p = self.points[index]
        dists = [abs(p - q) for i, q in enumerate(self.points) if i != index]
        dists += [abs(p)]
        for _, _, v in self.geom.all_parameters():
            dists.append(abs(p - _to_mpc(1 / v)))
        return min(dists) / 3

    # -- recursion ---------------------------------------------------------

    def omega(self, g: int, n: int) -> Correlator:
        """The (g, n) correlator; memoized, recursion in the last slot."""
        if g < 0 or n < 1:
            raise ValueError("need g >= 0 and n >= 1")
        if 2 * g + n - 2 <= 0:
            raise ValueError(
                "omega_{0,1} and omega_{0,2} are initial data, not"
                " ramification-pole correlators; see bergman()"
            )
        if 2 * g + n - 2 > self.chi_budget:
            raise BudgetError(
                f"2g+n-2 = {2*g+n-2} exceeds the configured budget {self.chi_budget}"
            )
        if (g, n) in self._memo:
            return self._memo[(g, n)]
        with mp.workprec(self.working_bits):
            raw = self._recurse(g, n)
            tensor, defect = self._symmetrize(raw, n)
        corr = Correlator(g, n, tensor, self, float(defect))
        self._memo[(g, n)] = corr
        return corr

    def _recurse(self, g: int, n: int) -> dict[tuple, mpmath.mpc]:
        n_spec = n - 1
        result: dict[tuple, mpmath.mpc] = {}
        for i, frame in enumerate(self.frames):
            # (A) omega_{g-1, n_spec+2}(I, q, sigma q)
            if g >= 1:
                ga, na = g - 1, n_spec + 2
                if (ga, na) == (0, 2):
                    self._emit(result, i, frame, (), "BD", None, mpmath.mpc(1))
                else:
                    lower = self.omega(ga, na).tensor
                    grouped: dict[tuple, dict[tuple, mpmath.mpc]] = {}
                    for key, cf in lower.items():
                        pair = (("b",) + key[-2], ("b",) + key[-1])
                        grouped.setdefault(pair, {})
                        S = key[:-2]
                        grouped[pair][S] = grouped[pair].get(S, mpmath.mpc(0)) + cf
                    for (qk, sk), smap in grouped.items():
                        for S, cf in smap.items():
                            self._emit(result, i, frame, S, qk, sk, cf)
            # (B) stable splittings
            positions = tuple(range(n_spec))
            for g1 in range(0, g + 1):
                g2 = g - g1
                for size in range(0, n_spec + 1):
                    for I1 in combinations(positions, size):
                        I2 = tuple(x for x in positions if x not in I1)
                        if (g1, len(I1)) == (0, 0) or (g2, len(I2)) == (0, 0):
                            continue
                        items1 = self._factor_items(i, frame, g1, I1, "q")
                        items2 = self._factor_items(i, frame, g2, I2, "s")
                        if items1 is None or items2 is None:
                            continue
                        for S1, qk, c1 in items1:
                            off1 = _pair_block_offset(frame, qk)
                            for S2, sk, c2 in items2:
                                off2 = _pair_block_offset(frame, sk)
                                # only k_1 reaches t^-1 against a regular
                                # product; anything above order zero is inert
                                if off1 + off2 > 0:
                                    continue
                                S = [None] * n_spec
                                for pos, b in zip(I1, S1):
                                    S[pos] = b
                                for pos, b in zip(I2, S2):
                                    S[pos] = b
                                self._emit(
                                    result, i, frame, tuple(S), qk, sk, c1 * c2
                                )
        return result

    def _factor_items(self, i, frame, g1, I1, side):
        """Items (spectator-keys, series-key, coefficient) for one factor."""
        n1 = len(I1) + 1
        if (g1, n1) == (0, 1):
            return None
        if (g1, n1) == (0, 2):
            # omega_{0,2}(z_a, .) bound at q or sigma(q)
            max_pole = self._max_partner_pole(g1, n1, i)
            out = []
            for j in range(0, max_pole):
                bkey = (i, j + 2)
                skey = ("T", j) if side == "q" else ("S", j)
                out.append(((bkey,), skey, mpmath.mpc(1)))
            return out
        lower = self.omega(g1, n1).tensor
        tag = "b"
        out = []
        grouped: dict[tuple, dict[tuple, mpmath.mpc]] = {}
        for key, cf in lower.items():
            b = (tag,) + key[-1]
            grouped.setdefault(b, {})
            S = key[:-1]
            grouped[b][S] = grouped[b].get(S, mpmath.mpc(0)) + cf
        for b, smap in grouped.items():
            for S, cf in smap.items():
                out.append((S, b, cf))
        return out

    def _max_partner_pole(self, g1, n1, i) -> int:
        """Upper bound for useful Bergman expansion orders at center i.

        The partner factor contributes poles of order at most its maximal
        stored pole order (or 2 for the diagonal block); beyond that the
        kernel pairing vanishes identically.
        """
        # the largest pole order any correlator in this run can carry
        return 6 * self.genus_budget + 2 * 4 - 4 + 2

    def _emit(self, result, i, frame, S, qkey, skey, coeff):
        if qkey == "BD":
            pairings = frame.pair_residues("BD", None)
        else:
            pairings = frame.pair_residues(qkey, skey)
        for j, val in pairings.items():
            contrib = coeff * val
            key = S + ((i, j + 1),)
            result[key] = result.get(key, mpmath.mpc(0)) + contrib

    def _symmetrize(self, raw: dict, n: int):
        if n == 1:
            scale = max((abs(c) for c in raw.values()), default=mpmath.mpf(1))
            tensor = {
                k: v for k, v in raw.items() if abs(v) > scale * self._drop_tol
            }
            return tensor, mpmath.mpf(0)
        orbits: dict[tuple, list] = {}
        for key, cf in raw.items():
            orbits.setdefault(tuple(sorted(key)), []).append((key, cf))
        scale = max((abs(c) for c in raw.values()), default=mpmath.mpf(1))
        tensor: dict[tuple, mpmath.mpc] = {}
        defect = mpmath.mpf(0)
        for sorted_key, entries in orbits.items():
            perms = set(permutations(sorted_key))
            total = mpmath.mpc(0)
            seen = {}
            for key, cf in entries:
                seen[key] = seen.get(key, mpmath.mpc(0)) + cf
            for key in perms:
                total += seen.get(key, mpmath.mpc(0))
            mean = total / len(perms)
            for key, cf in seen.items():
                defect = max(defect, abs(cf - mean))
            if abs(mean) <= scale * self._drop_tol:
                continue
            for key in perms:
                tensor[key] = mean
        return tensor, defect / scale

    # -- free energy -------------------------------------------------------

    def free_energy(self, g: int, phi_constant=0, y_branch_shift: int = 0):
        """F_g = (2-2g)^{-1} sum_i Res_{q->p_i} omega_{g,1} Phi.

        ``phi_constant`` shifts the primitive by a constant and
        ``y_branch_shift`` by 2 pi i k (x(q)-x(p)); neither may change the
        result (residue-freeness resp. evenness of x at the fixed point).
        """
        if g < 2:
            raise GeometryError("free energies need g >= 2")
        if g > self.genus_budget:
            raise BudgetError(
                f"g = {g} exceeds the engine genus budget {self.genus_budget}"
            )
        corr = self.omega(g, 1)
        with mp.workprec(self.working_bits):
            f = self.field
            total = mpmath.mpc(0)
            for i, frame in enumerate(self.frames):
                block = None
                for (key,), cf in corr.tensor.items():
                    if key[0] != i:
                        continue
                    piece = LaurentBlock(
                        -key[1],
                        [f.convert(cf)] + [f.zero()] * self.truncation,
                        f,
                        convert=False,
                    )
                    block = piece if block is None else block + piece
                if block is None:
                    continue
                phi = frame.phi
                if phi_constant:
                    c = f.convert(phi_constant)
                    phi = phi + LaurentBlock(
                        0, [c] + [f.zero()] * self.truncation, f, convert=False
                    )
                if y_branch_shift:
                    shift = f.convert(2 * mpmath.pi * mpmath.mpc(0, 1) * y_branch_shift)
                    phi = phi + frame.u.scale(shift)
                total += (block * phi).residue()
            return total / (2 - 2 * g)


# ---------------------------------------------------------------------------
# Convenience wrappers
# ---------------------------------------------------------------------------


def deck(engine: TREngine, index: int) -> DeckSeries:
    return engine.frames[index].deck


def omega(g: int, n: int, geom: StripGeometry, **kwargs) -> Correlator:
    """One-shot correlator; prefer TREngine when computing several."""
    engine = TREngine(geom, **kwargs)
    return engine.omega(g, n)


def tr_free_energy(
    g: int,
    geom: StripGeometry,
    precision_bits: int = 256,
    truncation: Optional[int] = None,
    genus_budget: Optional[int] = None,
    engine: Optional[TREngine] = None,
):
    """F_g by direct numeric recursion at the requested precision."""
    if engine is None:
        budget = genus_budget if genus_budget is not None else max(DEFAULT_GENUS_BUDGET, g)
        engine = TREngine(
            geom,
            precision_bits=precision_bits,
            genus_budget=budget,
            truncation=truncation,
        )
    return engine.free_energy(g)


def sample_points(geom: StripGeometry, count: int, seed: int = 0, precision_bits: int = 64):
    """Deterministic low-discrepancy sample points avoiding all poles.

    Van der Corput sequences in bases 2 and 3 fill a box; points within
    0.3 of z = 0, a parameter reciprocal, or a ramification point are
    rejected.  ``seed`` offsets the sequence, keeping runs reproducible.
    """

    def vdc(n: int, base: int) -> float:
        x, denom = 0.0, 1.0
        while n:
            n, rem = divmod(n, base)
            denom *= base
            x += rem / denom
        return x

    with mp.workprec(precision_bits + 32):
        avoid = [mpmath.mpc(0)]
        avoid += [_to_mpc(1 / v) for _, _, v in geom.all_parameters()]
        avoid += list(ramification_points(geom, precision_bits))
        out = []
        idx = 1 + max(0, seed)
        while len(out) < count:
            re = -3 + 6 * vdc(idx, 2)
            im = -3 + 6 * vdc(idx, 3)
            idx += 1
            z = mpmath.mpc(re, im)
            if all(abs(z - a) > 0.3 for a in avoid):
                out.append(z)
        return out
