"""Radially symmetric fields and functions on the unit ball of R^N

A profile is given by radii 1 = r_0 > r_1 > ... > r_J and one
polynomial in ρ per ring: value j lives on (r_j, r_{j-1}) for j ≤ J and
value J + 1 on the core ball (0, r_J). The field is A(x) = a(|x|)x/|x|,
the function u(x) = u(|x|).

Surface and volume measures are reported in units of the area σ_N of
the unit sphere, so the sphere of radius r weighs r^{N-1}. In these
units Div A pushes forward to the derivative of B(ρ) = ρ^{N-1}a(ρ), and
every pairing reduces to a one-dimensional pairing on (0, 1).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import sympy

from .bv import LambdaSelector, PiecewiseBV, derivative
from .errors import NotSummableError
from .fields import DMField1D
from .measures import BorelSet1D, Measure1D, evaluate, total_variation
from .pairing import pairing_by_definition, representative_times
from .polynomials import (
    Coeffs,
    PiecewisePoly,
    normalize_coeffs,
    poly_add,
    poly_derivative,
    poly_eval,
    poly_mul,
)
from .rationals import Number, format_fraction, to_fraction
from .theorems import EXACT, CheckReport, residual_report

_J = sympy.Symbol("j", integer=True, positive=True)

RULES = ("inv_sq", "alt_sign", "const", "geometric", "index")


@dataclass(frozen=True)
class Rule:
    """A closed-form sequence in the index j."""

    name: str
    parameter: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.name not in RULES:
            raise ValueError(
                f"unknown rule {self.name!r}, expected one of {RULES}"
            )
        needs_parameter = self.name in ("const", "geometric")
        if needs_parameter and self.parameter is None:
            raise ValueError(f"rule {self.name!r} needs a parameter")
        if not needs_parameter and self.parameter is not None:
            raise ValueError(f"rule {self.name!r} takes no parameter")
        if self.parameter is not None:
            object.__setattr__(self, "parameter", to_fraction(self.parameter))

    @classmethod
    def parse(cls, text: str) -> "Rule":
        """``"inv_sq"``, ``"const 3/2"``, ``"geometric 1/2"``, ..."""
        name, *rest = text.split()
        if len(rest) > 1:
            raise ValueError(f"malformed rule {text!r}")
        return cls(name, to_fraction(rest[0]) if rest else None)

    def __call__(self, j: int) -> Fraction:
        if self.name == "inv_sq":
            return Fraction(1, (j + 1) ** 2)
        if self.name == "alt_sign":
            return Fraction((-1) ** j)
        if self.name == "const":
            return self.parameter
        if self.name == "geometric":
            return self.parameter**j
        return Fraction(j)

    def expression(self) -> sympy.Expr:
        if self.name == "inv_sq":
            return 1 / (_J + 1) ** 2
        if self.name == "alt_sign":
            return sympy.Integer(-1) ** _J
        if self.name == "const":
            return sympy.Rational(str(self.parameter))
        if self.name == "geometric":
            return sympy.Rational(str(self.parameter)) ** _J
        return _J

    def __str__(self) -> str:
        if self.parameter is None:
            return self.name
        return f"{self.name} {format_fraction(self.parameter)}"


def series_limit(rule: Rule, weight: Optional[sympy.Expr] = None) -> float:
    """Σ_{j≥1} weight(j)·rule(j) in closed form, as a float (inf if the
    series diverges)."""
    term = rule.expression() * (weight if weight is not None else 1)
    total = sympy.summation(term, (_J, 1, sympy.oo))
    if total.has(sympy.oo, sympy.zoo) or not total.is_finite:
        return math.inf
    return float(total)


@dataclass(frozen=True)
class RadialProfile:
    dimension: int
    radii: Tuple[Fraction, ...]
    values: Tuple[Coeffs, ...]

    def __post_init__(self) -> None:
        radii = tuple(to_fraction(r) for r in self.radii)
        values = tuple(normalize_coeffs(v) for v in self.values)
        if self.dimension < 2:
            raise ValueError(
                f"dimension must be at least 2, got {self.dimension}"
            )
        if not radii or radii[0] != 1:
            raise ValueError("radii must start at r_0 = 1")
        for outer, inner in zip(radii, radii[1:]):
            if not outer > inner > 0:
                raise ValueError("radii must decrease strictly to above 0")
        if len(values) != len(radii):
            raise ValueError(
                f"{len(radii)} radii need {len(radii)} ring values, "
                f"got {len(values)}"
            )
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_rules(
        cls,
        dimension: int,
        radius_rule: Rule,
        value_rule: Rule,
        depth: Optional[int],
    ) -> "RadialProfile":
        """Truncate the rules at J = ``depth``.

        Raises:
            NotSummableError: If no finite depth is given
        """
        if depth is None:
            raise NotSummableError(
                "the profile needs a finite truncation depth J; use the "
                "summability diagnostics for J → ∞"
            )
        if depth < 1:
            raise ValueError(
                f"truncation depth must be positive, got {depth}"
            )
        radii = tuple(radius_rule(j) for j in range(depth + 1))
        values = tuple((value_rule(j),) for j in range(1, depth + 2))
        return cls(dimension, radii, values)

    @property
    def depth(self) -> int:
        """J, the number of spheres."""
        return len(self.radii) - 1

    def ring(self, j: int) -> Tuple[Fraction, Fraction]:
        """(inner, outer) radius of ring j; ring J + 1 is the core."""
        inner = self.radii[j] if j <= self.depth else Fraction(0)
        return inner, self.radii[j - 1]

    def value(self, j: int) -> Coeffs:
        return self.values[j - 1]

    def sides(self, j: int) -> Tuple[Fraction, Fraction]:
        """(inner, outer) one-sided values at the sphere of radius r_j."""
        r = self.radii[j]
        return poly_eval(self.value(j + 1), r), poly_eval(self.value(j), r)

    def sup_norm(self) -> Fraction:
        return self.to_interval().sup_abs()

    def to_interval(self, weighted: bool = False) -> PiecewisePoly:
        """The profile in ρ on (0, 1), times ρ^{N-1} when ``weighted``."""
        weight = _weight(self.dimension)
        pieces = []
        for j in range(self.depth + 1, 0, -1):
            inner, outer = self.ring(j)
            coeffs = self.value(j)
            if weighted:
                coeffs = poly_mul(weight, coeffs)
            pieces.append((inner, outer, coeffs))
        return PiecewisePoly.from_pieces(pieces)


def radial_to_interval(
    A: RadialProfile, u: RadialProfile
) -> Tuple[DMField1D, PiecewiseBV]:
    """The one-dimensional pair (B, u) with B = ρ^{N-1}a on (0, 1).

    Raises:
        ValueError: If the two profiles live in different dimensions
    """
    if A.dimension != u.dimension:
        raise ValueError(
            f"field in dimension {A.dimension}, function in {u.dimension}"
        )
    return (
        DMField1D(PiecewiseBV(A.to_interval(weighted=True))),
        PiecewiseBV(u.to_interval()),
    )


def _weight(dimension: int) -> Coeffs:
    return (Fraction(0),) * (dimension - 1) + (Fraction(1),)


@dataclass(frozen=True)
class RadialDivergence:
    """Div A in σ_N units: a density in ρ and sphere atoms."""

    density: PiecewisePoly
    spheres: Tuple[Tuple[Fraction, Fraction], ...]
    variation: Fraction
    bound: Optional[Fraction]

    def as_measure(self) -> Measure1D:
        return Measure1D(self.density, self.spheres)


def radial_divergence(A: RadialProfile) -> RadialDivergence:
    """Ring by ring: ρ^{N-1}(a' + (N-1)a/ρ) dρ and sphere weights
    (a_outer − a_inner)r_j^{N-1}.

    For piecewise-constant a the total variation is also bounded by
    ‖a‖_∞ + Σ |a_{j+1} − a_j| r_j^{N-1}.
    """
    n = A.dimension
    weight = _weight(n)
    lower_weight = (Fraction(0),) * (n - 2) + (Fraction(n - 1),)
    pieces = []
    for j in range(A.depth + 1, 0, -1):
        inner, outer = A.ring(j)
        a = A.value(j)
        density = poly_add(
            poly_mul(weight, poly_derivative(a)), poly_mul(lower_weight, a)
        )
        pieces.append((inner, outer, density))
    spheres = []
    jumps = Fraction(0)
    for j in range(1, A.depth + 1):
        inside, outside = A.sides(j)
        surface = A.radii[j] ** (n - 1)
        spheres.append((A.radii[j], (outside - inside) * surface))
        jumps += abs(outside - inside) * surface
    density = PiecewisePoly.from_pieces(pieces)
    variation = total_variation(Measure1D(density, tuple(spheres)))
    constant = all(len(v) <= 1 for v in A.values)
    bound = A.sup_norm() + jumps if constant else None
    return RadialDivergence(
        density, tuple(spheres), variation.total_mass(), bound
    )


def verify_radial_divergence(A: RadialProfile) -> CheckReport:
    """Ring formula = derivative of the reduced field, within the bound."""
    divergence = radial_divergence(A)
    reduced = derivative(PiecewiseBV(A.to_interval(weighted=True)))
    residuals = [total_variation(divergence.as_measure() - reduced).total_mass()]
    if divergence.bound is not None:
        residuals.append(
            max(Fraction(0), divergence.variation - divergence.bound)
        )
    return residual_report(
        "radial_divergence",
        residuals,
        EXACT,
        {
            "variation": format_fraction(divergence.variation),
            "bound": None
            if divergence.bound is None
            else format_fraction(divergence.bound),
            "spheres": len(divergence.spheres),
        },
    )


# summability

@dataclass(frozen=True)
class PartialSums:
    """Truncated sums at J, exact below the exact-sum limit."""

    depth: int
    radii: Any
    weighted_radii: Any
    lower_trace: Any
    trace_jump: Any
    upper_trace_jump: Any
    bounded: Any
    bounded_limit: Any
    exact: bool

    def as_row(self) -> Dict[str, str]:
        def show(value: Any) -> str:
            if isinstance(value, Fraction):
                return format_fraction(value)
            return repr(value)

        return {
            "J": str(self.depth),
            "sum_r": show(self.radii),
            "sum_j_r": show(self.weighted_radii),
            "lower_trace": show(self.lower_trace),
            "trace_jump": show(self.trace_jump),
            "upper_trace_jump": show(self.upper_trace_jump),
            "bounded": show(self.bounded),
            "bounded_limit": show(self.bounded_limit),
        }


def summability_diagnostics(
    A: RadialProfile,
    u: RadialProfile,
    exact_limit: int = 2000,
) -> List[PartialSums]:
    """Partial sums for J = 1, ..., depth.

    Columns: Σ r_j, Σ j r_j, Σ u^-|Tr^e|r_j^{N-1}, then
    Σ u^-|Tr^i − Tr^e|r_j^{N-1} and Σ u^+|Tr^i − Tr^e|r_j^{N-1}, the
    bounded Σ (u^+ − u^-)|Tr^i − Tr^e|r_j^{N-1} and its limit 2‖A‖_∞|D^j u|.
    """
    if A.radii != u.radii or A.dimension != u.dimension:
        raise ValueError("field and function must share radii and dimension")
    n = A.dimension
    norm = A.sup_norm()
    rows = []
    totals = [Fraction(0)] * 7
    for j in range(1, A.depth + 1):
        r = A.radii[j]
        surface = r ** (n - 1)
        a_in, a_out = A.sides(j)
        u_in, u_out = u.sides(j)
        low, high = min(u_in, u_out), max(u_in, u_out)
        terms = (
            r,
            j * r,
            low * abs(a_out) * surface,
            low * abs(a_in - a_out) * surface,
            high * abs(a_in - a_out) * surface,
            (high - low) * abs(a_in - a_out) * surface,
            2 * norm * (high - low) * surface,
        )
        if j <= exact_limit:
            totals = [t + s for t, s in zip(totals, terms)]
        else:
            totals = [float(t) + float(s) for t, s in zip(totals, terms)]
        rows.append(PartialSums(j, *totals, exact=j <= exact_limit))
    return rows


@dataclass(frozen=True)
class UnboundednessCertificate:
    """Σ_{j≤J} j·r_j exceeds ``threshold`` at J = ``depth``."""

    threshold: Fraction
    depth: Optional[int]
    partial_sum: Any
    exact: bool

    @property
    def found(self) -> bool:
        return self.depth is not None


def unboundedness_certificate(
    radius_rule: Rule,
    threshold: Number,
    max_depth: int = 100_000,
    exact_limit: int = 2000,
) -> UnboundednessCertificate:
    """Smallest J ≤ ``max_depth`` with Σ_{j=1}^J j·r_j > threshold.

    Exact rational sums up to ``exact_limit``; beyond it the partial sum
    is recomputed with math.fsum once the running float sum crosses.
    """
    logger = logging.getLogger("lampair")
    threshold = to_fraction(threshold)
    total = Fraction(0)
    for j in range(1, min(max_depth, exact_limit) + 1):
        total += j * radius_rule(j)
        if total > threshold:
            return UnboundednessCertificate(threshold, j, total, True)
    running = float(total)
    for j in range(exact_limit + 1, max_depth + 1):
        running += j * float(radius_rule(j))
        if running > threshold:
            confirmed = math.fsum(
                k * float(radius_rule(k)) for k in range(1, j + 1)
            )
            if confirmed > threshold:
                return UnboundednessCertificate(
                    threshold, j, confirmed, False
                )
    logger.warning(
        f"Partial sums stay below {threshold} up to J = {max_depth}"
    )
    return UnboundednessCertificate(threshold, None, running, False)


def verify_summability(
    A: RadialProfile,
    u: RadialProfile,
    radius_rule: Rule,
    threshold: Number,
    max_depth: int = 100_000,
    exact_limit: int = 2000,
) -> CheckReport:
    """Σ j r_j unbounded, Σ r_j below its closed-form limit, and the
    bounded control at every J."""
    rows = summability_diagnostics(A, u, exact_limit)
    limit = series_limit(radius_rule)
    certificate = unboundedness_certificate(
        radius_rule, threshold, max_depth, exact_limit
    )
    residuals = []
    increasing = True
    for before, after in zip(rows, rows[1:]):
        if not after.weighted_radii > before.weighted_radii:
            increasing = False
    for row in rows:
        excess = row.bounded - row.bounded_limit
        residuals.append(max(Fraction(0), Fraction(excess)))
        if not float(row.radii) < limit:
            residuals.append(Fraction(1))
    report = residual_report(
        "summability",
        residuals,
        EXACT,
        {
            "radius_rule": str(radius_rule),
            "closed_form_limit": repr(limit),
            "threshold": format_fraction(certificate.threshold),
            "crossing_depth": certificate.depth,
            "crossing_sum": repr(float(certificate.partial_sum)),
            "crossing_exact": certificate.exact,
            "weighted_sums_increase": increasing,
        },
    )
    report.passed = report.passed and certificate.found and increasing
    report.series = [row.as_row() for row in rows]
    return report


# pairing and Gauss-Green

@dataclass(frozen=True)
class RadialPairing:
    density: PiecewisePoly
    spheres: Tuple[Tuple[Fraction, Fraction], ...]

    def as_measure(self) -> Measure1D:
        return Measure1D(self.density, self.spheres)


def sphere_traces(
    A: RadialProfile, u: RadialProfile, j: int
) -> Tuple[Fraction, Fraction, int]:
    """(Tr^+, Tr^-) of A on the sphere r_j and the direction of ν.

    ν points to the side carrying u^+: inward (−1) when the inner value
    is the larger one. Traces include the surface factor r_j^{N-1}.
    """
    surface = A.radii[j] ** (A.dimension - 1)
    a_in, a_out = A.sides(j)
    u_in, u_out = u.sides(j)
    if u_in >= u_out:
        return -a_in * surface, -a_out * surface, -1
    return a_out * surface, a_in * surface, 1


def radial_pairing(
    A: RadialProfile, u: RadialProfile, lam: LambdaSelector
) -> RadialPairing:
    """Sphere atoms [(1−λ)Tr^+ + λTr^-](u^+ − u^-) and the density
    ρ^{N-1}a u' in σ_N units. ``lam`` is indexed by radius."""
    if A.radii != u.radii or A.dimension != u.dimension:
        raise ValueError("field and function must share radii and dimension")
    spheres = []
    for j in range(1, A.depth + 1):
        plus, minus, _ = sphere_traces(A, u, j)
        u_in, u_out = u.sides(j)
        weight = lam(A.radii[j])
        spheres.append(
            (
                A.radii[j],
                ((1 - weight) * plus + weight * minus) * abs(u_in - u_out),
            )
        )
    density = A.to_interval(weighted=True) * u.to_interval().derivative()
    return RadialPairing(density, tuple(spheres))


def verify_radial_pairing(
    A: RadialProfile, u: RadialProfile, lam: LambdaSelector
) -> CheckReport:
    """Jump formula on spheres = definition route on the reduction, and
    |pairing| ≤ ‖A‖_∞|Du| sphere by sphere."""
    result = radial_pairing(A, u, lam)
    field, function = radial_to_interval(A, u)
    reduced = pairing_by_definition(field, function, lam).measure
    residuals = [total_variation(result.as_measure() - reduced).total_mass()]
    norm = A.sup_norm()
    for (r, weight), j in zip(result.spheres, range(1, A.depth + 1)):
        u_in, u_out = u.sides(j)
        allowed = norm * abs(u_in - u_out) * r ** (A.dimension - 1)
        residuals.append(max(Fraction(0), abs(weight) - allowed))
    return residual_report(
        "radial_pairing",
        residuals,
        EXACT,
        {
            "spheres": [
                [format_fraction(r), format_fraction(w)]
                for r, w in result.spheres
            ]
        },
    )


def radial_gauss_green(
    A: RadialProfile,
    u: RadialProfile,
    lam: LambdaSelector,
    radius: Number,
) -> CheckReport:
    """Both Gauss-Green formulas on the ball B_ρ, ρ ∈ (0, 1).

    ∂*B_ρ carries the inward normal, so −Tr^+·u^i = a(ρ^-)u(ρ^-)ρ^{N-1}
    and −Tr^-·u^e = a(ρ^+)u(ρ^+)ρ^{N-1}. When ρ is a jump radius the two
    formulas differ by the sphere terms.
    """
    rho = to_fraction(radius)
    if not 0 < rho < 1:
        raise ValueError(f"ball radius {rho} outside (0, 1)")
    field, function = radial_to_interval(A, u)
    total = representative_times(
        function, lam, field.divergence
    ) + pairing_by_definition(field, function, lam).measure
    interior = evaluate(total, BorelSet1D.interval(0, rho))
    closure = evaluate(
        total, BorelSet1D(intervals=((Fraction(0), rho),), points=(rho,))
    )
    a, v = A.to_interval(), u.to_interval()
    surface = rho ** (A.dimension - 1)
    inner_flux = a.left_limit(rho) * v.left_limit(rho) * surface
    outer_flux = a.right_limit(rho) * v.right_limit(rho) * surface
    return residual_report(
        "radial_gauss_green",
        [interior - inner_flux, closure - outer_flux],
        EXACT,
        {
            "radius": format_fraction(rho),
            "on_sphere": rho in A.radii,
            "interior": [format_fraction(interior), format_fraction(inner_flux)],
            "closure": [format_fraction(closure), format_fraction(outer_flux)],
        },
    )
