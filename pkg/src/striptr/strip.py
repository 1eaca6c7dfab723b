"""Strip-geometry spectral curves.

The curve family is parametrized by rationals alpha_1..alpha_r and
beta_1..beta_s (beta_0 = 1 is always implicitly prepended) plus an
integer framing f with f not in {-1, s-r}:

    x(z) = log( prod_j (1 - beta_j z) / prod_i (1 - alpha_i z) ) - (1+f) log(-z)
    y(z) = log(z)

x is multivalued; only dx, exp(x) and local series of x-differences are
exposed, which removes every branch ambiguity downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .errors import ConfigError, DegenerateGeometryError, GeometryError, PoleError, PrecisionError
from .exact import Monomial, parse_rational
from .polylog import Polynomial, RationalFunction

__all__ = [
    "StripGeometry",
    "CurvePoint",
    "ValidationIssue",
    "ValidationReport",
    "validate",
    "require_valid",
    "dx_dz",
    "implicit_identity_check",
    "ramification_points",
    "log_vital_points",
    "residue_point_labels",
    "geometry_from_config",
]


@dataclass(frozen=True)
class StripGeometry:
    """Curve data: alpha list, beta list (without beta_0), framing.

    ``alpha_labels`` / ``beta_labels`` optionally attach a Kahler monomial
    to each parameter; beta_0 always carries the empty monomial.
    """

    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    framing: int
    alpha_labels: Optional[tuple[Monomial, ...]] = None
    beta_labels: Optional[tuple[Monomial, ...]] = None
    kahler_variables: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(Fraction(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(Fraction(b) for b in self.betas))
        if self.alpha_labels is not None and len(self.alpha_labels) != len(self.alphas):
            raise GeometryError("alpha_labels must match alphas in length")
        if self.beta_labels is not None and len(self.beta_labels) != len(self.betas):
            raise GeometryError("beta_labels must match betas in length")

    @property
    def r(self) -> int:
        return len(self.alphas)

    @property
    def s(self) -> int:
        return len(self.betas)

    @property
    def chi(self) -> int:
        """Euler characteristic 1 + r + s of the toric Calabi-Yau."""
        return 1 + self.r + self.s

    @property
    def betas_full(self) -> tuple[Fraction, ...]:
        """(beta_0, beta_1, ..., beta_s) with beta_0 = 1."""
        return (Fraction(1),) + self.betas

    @property
    def has_labels(self) -> bool:
        return self.alpha_labels is not None or self.beta_labels is not None

    def label(self, kind: str, index: int) -> Monomial:
        """Kahler monomial of alpha_i (i>=1) or beta_j (j>=0)."""
        if kind == "alpha":
            if self.alpha_labels is None:
                raise GeometryError("geometry carries no Kahler labels for alphas")
            return self.alpha_labels[index - 1]
        if kind == "beta":
            if index == 0:
                return Monomial.one()
            if self.beta_labels is None:
                raise GeometryError("geometry carries no Kahler labels for betas")
            return self.beta_labels[index - 1]
        raise ValueError(f"unknown parameter kind {kind!r}")

    def parameter(self, kind: str, index: int) -> Fraction:
        if kind == "alpha":
            return self.alphas[index - 1]
        if kind == "beta":
            return self.betas_full[index]
        raise ValueError(f"unknown parameter kind {kind!r}")

    def all_parameters(self) -> list[tuple[str, int, Fraction]]:
        out = [("beta", 0, Fraction(1))]
        out += [("beta", j + 1, b) for j, b in enumerate(self.betas)]
        out += [("alpha", i + 1, a) for i, a in enumerate(self.alphas)]
        return out


@dataclass(frozen=True)
class CurvePoint:
    """A point in the global coordinate z, with its exclusion set."""

    z: Fraction

    def admissible(self, geom: StripGeometry) -> bool:
        z = Fraction(self.z)
        if z == 0:
            return False
        return all(z * p != 1 for _, _, p in geom.all_parameters())


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[ValidationIssue, ...]

    def messages(self) -> list[str]:
        return [i.message for i in self.issues]


def validate(geom: StripGeometry, precision_bits: int = 128) -> ValidationReport:
    """Check the standing assumptions, including simple x-ramification.

    Every violated condition is reported individually; the numeric root
    check runs only when the algebraic conditions already hold.
    """
    issues: list[ValidationIssue] = []
    params = geom.all_parameters()
    for kind, idx, val in params:
        if val == 0:
            issues.append(
                ValidationIssue("zero-parameter", f"{kind}_{idx} = 0 is not allowed")
            )
    for a in range(len(params)):
        for b in range(a + 1, len(params)):
            ka, ia, va = params[a]
            kb, ib, vb = params[b]
            if va == vb:
                issues.append(
                    ValidationIssue(
                        "parameter-collision",
                        f"{kb}_{ib} = {ka}_{ia} = {va} (parameters must be pairwise distinct)",
                    )
                )
    if geom.framing == -1:
        issues.append(ValidationIssue("forbidden-framing", "framing f = -1 is excluded"))
    if geom.framing == geom.s - geom.r:
        issues.append(
            ValidationIssue(
                "forbidden-framing",
                f"framing f = s - r = {geom.s - geom.r} is excluded",
            )
        )
    if issues:
        return ValidationReport(False, tuple(issues))
    try:
        pts = ramification_points(geom, precision_bits)
    except DegenerateGeometryError as exc:
        issues.append(ValidationIssue("degenerate-ramification", str(exc)))
    except PrecisionError as exc:
        issues.append(ValidationIssue("root-precision", str(exc)))
    else:
        tol = mpmath.mpf(2) ** (-precision_bits // 4)
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if abs(pts[a] - pts[b]) <= tol:
                    issues.append(
                        ValidationIssue(
                            "degenerate-ramification",
                            f"ramification points {a} and {b} closer than tolerance",
                        )
                    )
    return ValidationReport(not issues, tuple(issues))


def require_valid(geom: StripGeometry) -> None:
    report = validate(geom)
    if not report.ok:
        raise GeometryError("; ".join(report.messages()))


def dx_dz(geom: StripGeometry) -> RationalFunction:
    """x'(z) as a single reduced rational function.

    x'(z) = sum_{j=0}^{s} -beta_j/(1 - beta_j z)
          + sum_{i=1}^{r} alpha_i/(1 - alpha_i z) - (1+f)/z
    """
    total = RationalFunction(Polynomial.zero(), Polynomial.one(), reduce=False)
    for b in geom.betas_full:
        total = total + RationalFunction(Polynomial([-b]), Polynomial([1, -b]))
    for a in geom.alphas:
        total = total + RationalFunction(Polynomial([a]), Polynomial([1, -a]))
    total = total + RationalFunction(
        Polynomial([Fraction(-1 - geom.framing)]), Polynomial.x()
    )
    return total


def implicit_identity_check(geom: StripGeometry, z: Fraction) -> Fraction:
    """Evaluate A(e^x, e^y) on the parametrization; exactly 0.

    Uses e^{x(z)} = prod_j (1 - beta_j z) / (prod_i (1 - alpha_i z) (-z)^{1+f})
    and e^y = z, both exact rationals.
    """
    z = Fraction(z)
    if not CurvePoint(z).admissible(geom):
        raise PoleError(f"z = {z} lies in the exclusion set of the parametrization")
    num = Fraction(1)
    for b in geom.betas_full:
        num *= 1 - b * z
    den = Fraction(1)
    for a in geom.alphas:
        den *= 1 - a * z
    exp_x = num / (den * (-z) ** (1 + geom.framing))
    exp_y = z
    first = (1 - exp_y)
    for b in geom.betas:
        first *= 1 - b * exp_y
    second = Fraction(-1) ** geom.framing * exp_x * exp_y ** (1 + geom.framing)
    for a in geom.alphas:
        second *= 1 - a * exp_y
    return first + second


def _to_mpc(x: Fraction) -> mpmath.mpc:
    x = Fraction(x)
    return mpmath.mpc(mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator))


def _poly_eval_mpc(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + _to_mpc(c)
    return acc


def ramification_points(geom: StripGeometry, precision_bits: int = 256):
    """All zeros of dx, Newton-polished to the requested precision.

    Companion-matrix estimates seed the polish; roots come back sorted by
    (real part, imaginary part).  Simplicity is certified through |x''|
    above tolerance 2^(-precision/4).
    """
    rf = dx_dz(geom)
    num = rf.num
    if num.degree < 1:
        raise DegenerateGeometryError("dx has no zeros; the curve is unramified")
    with mpmath.mp.workprec(precision_bits + 64):
        seeds = np.roots([float(c) for c in reversed(num.coeffs)])
        dnum = num.derivative()
        tol_step = mpmath.mpf(2) ** (-(precision_bits + 32))
        roots = []
        for seed in seeds:
            z = mpmath.mpc(seed.real, seed.imag)
            converged = False
            for _ in range(200):
                fz = _poly_eval_mpc(num.coeffs, z)
                dz = _poly_eval_mpc(dnum.coeffs, z)
                if dz == 0:
                    break
                step = fz / dz
                z = z - step
                if abs(step) < tol_step * max(1, abs(z)):
                    converged = True
                    break
            if not converged:
                raise PrecisionError(
                    f"Newton polish did not converge from seed {seed!r}"
                )
            roots.append(z)
        roots.sort(key=lambda w: (w.real, w.imag))
        tol = mpmath.mpf(2) ** (-precision_bits // 4)
        # exclude z=0 and dx poles (cannot occur for a reduced dx; defensive)
        exclusions = [mpmath.mpc(0)] + [
            _to_mpc(1 / v) for _, _, v in geom.all_parameters()
        ]
        roots = [z for z in roots if all(abs(z - e) > tol for e in exclusions)]
        xpp = rf.derivative()
        for z in roots:
            d = _poly_eval_mpc(xpp.num.coeffs, z) / _poly_eval_mpc(xpp.den.coeffs, z)
            if abs(d) <= tol:
                raise DegenerateGeometryError(
                    f"ramification point {mpmath.nstr(z, 8)} is not simple (|x''| <= tol)"
                )
        for a in range(len(roots)):
            for b in range(a + 1, len(roots)):
                if abs(roots[a] - roots[b]) <= tol:
                    raise DegenerateGeometryError(
                        "two ramification points coincide within tolerance"
                    )
        return roots


def log_vital_points(geom: StripGeometry, side: str) -> list[Fraction]:
    """Logarithmic poles of one curve function not shared by the other's
    differential.

    side="x-function": empty for admissible framings (z = 0 and infinity
    are also poles of dx exactly when f is outside {-1, s-r}).
    side="y-function": {1} | {1/alpha_i} | {1/beta_j}.
    """
    if side == "x-function":
        if geom.framing in (-1, geom.s - geom.r):
            raise GeometryError("framing violates f not in {-1, s-r}")
        return []
    if side == "y-function":
        pts = [1 / v for _, _, v in geom.all_parameters()]
        return sorted(set(pts))
    raise ValueError("side must be 'x-function' or 'y-function'")


def residue_point_labels(geom: StripGeometry) -> list[tuple[str, int]]:
    """Deterministic labels for the residue points {1/beta_j} | {1/alpha_i}."""
    labels = [("beta", j) for j in range(geom.s + 1)]
    labels += [("alpha", i) for i in range(1, geom.r + 1)]
    return labels


# ---------------------------------------------------------------------------
# Config ingestion (consumed by the CLI)
# ---------------------------------------------------------------------------


def _parse_parameter(entry: str, values: dict[str, Fraction]) -> tuple[Fraction, Optional[Monomial]]:
    entry = str(entry).strip()
    try:
        return parse_rational(entry), None
    except ValueError:
        pass
    mono = Monomial.parse(entry)
    val = Fraction(1)
    for name, e in mono.exps:
        if name not in values:
            raise ConfigError(
                f"parameter {entry!r} uses variable {name!r} without a kahler_values entry"
            )
        val *= values[name] ** e
    return val, mono


def geometry_from_config(config: dict) -> StripGeometry:
    """Build a StripGeometry from the documented config mapping.

    Keys: ``alphas``, ``betas`` (lists of rational strings or monomial
    strings), ``framing`` (integer), ``kahler_variables`` (list of names),
    ``kahler_values`` (rational string per variable, required whenever a
    parameter is given as a monomial).
    """
    if not isinstance(config, dict):
        raise ConfigError("geometry config must be a mapping")
    unknown = set(config) - {
        "alphas",
        "betas",
        "framing",
        "kahler_variables",
        "kahler_values",
    }
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    values: dict[str, Fraction] = {}
    for name, text in dict(config.get("kahler_values", {})).items():
        try:
            values[str(name)] = parse_rational(str(text))
        except ValueError as exc:
            raise ConfigError(f"bad kahler value for {name!r}: {text!r}") from exc
    variables = tuple(str(v) for v in config.get("kahler_variables", ()))
    for name in values:
        if variables and name not in variables:
            raise ConfigError(f"kahler value given for undeclared variable {name!r}")

    def parse_list(key: str):
        vals, labels, any_label = [], [], False
        for entry in config.get(key, []):
            try:
                v, m = _parse_parameter(entry, values)
            except ConfigError:
                raise
            except Exception as exc:
                raise ConfigError(f"cannot parse {key} entry {entry!r}") from exc
            vals.append(v)
            labels.append(m if m is not None else Monomial.one())
            any_label = any_label or m is not None
        return vals, (labels if any_label else None)

    alphas, alpha_labels = parse_list("alphas")
    betas, beta_labels = parse_list("betas")
    try:
        framing = int(config.get("framing", 0))
    except (TypeError, ValueError) as exc:
        raise ConfigError("framing must be an integer") from exc
    return StripGeometry(
        alphas=tuple(alphas),
        betas=tuple(betas),
        framing=framing,
        alpha_labels=tuple(alpha_labels) if alpha_labels else None,
        beta_labels=tuple(beta_labels) if beta_labels else None,
        kahler_variables=variables,
    )
