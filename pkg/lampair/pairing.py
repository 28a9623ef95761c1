"""λ-pairings between a DM field and a BV function

Two independent constructions are provided. The definition route forms
Div(uA) − u^λ Div A; the decomposition route assembles A·u' L¹, the
Cantor part Ã D^c u and the jump atoms
[(1 − λ)Tr^+ + λTr^-](u^+ − u^-), with J_u oriented so that u^i = u^+.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .bv import (
    PRECISE,
    LambdaSelector,
    PiecewiseBV,
    approximate_limits,
    integrate,
    integrate_product,
    representative,
)
from .cantor import CantorComponent
from .errors import CantorInteractionError, UndefinedDensityError
from .fields import (
    DMField1D,
    divergence_parts,
    normal_trace,
    product_field,
)
from .measures import Measure1D, lattice_max, lattice_min, to_text
from .polynomials import PiecewisePoly
from .rationals import Number, format_fraction, sign, to_fraction

DEFINITION = "definition"
DECOMPOSITION = "decomposition"


@dataclass(frozen=True)
class ThetaTable:
    """θ_λ(A, Du, ·): the density of the pairing with respect to |Du|.

    ``density`` is meaningful only on ``charged`` intervals, where u'
    does not vanish; ``cantor`` holds ±A on each staircase support.
    """

    density: PiecewisePoly
    charged: Tuple[Tuple[Fraction, Fraction], ...]
    atoms: Tuple[Tuple[Fraction, Fraction], ...]
    cantor: Tuple[Tuple[Fraction, Fraction, PiecewisePoly], ...]

    def at(self, x: Number) -> Fraction:
        """θ at x.

        Raises:
            UndefinedDensityError: If |Du| does not charge x or its
                neighbourhood
        """
        x = to_fraction(x)
        for point, value in self.atoms:
            if point == x:
                return value
        for a, b, value in self.cantor:
            if CantorComponent(a, b, 1).contains(x):
                return value.value(x)
        for a, b in self.charged:
            if a < x < b:
                return self.density.value(x)
        raise UndefinedDensityError(x)

    def sup_abs(self) -> Fraction:
        values = [abs(v) for _, v in self.atoms]
        values += [v.sup_abs() for _, _, v in self.cantor]
        values += [
            self.density.restrict_to(a, b).sup_abs() for a, b in self.charged
        ]
        return max(values, default=Fraction(0))


@dataclass(frozen=True)
class PairingResult:
    measure: Measure1D
    route: str
    theta: Optional[ThetaTable] = None

    @property
    def absolutely_continuous(self) -> Measure1D:
        return self.measure.with_parts(atoms=(), cantor=())

    @property
    def cantor(self) -> Measure1D:
        lower, upper = self.measure.domain
        return self.measure.with_parts(
            ac=PiecewisePoly.zero(lower, upper), atoms=()
        )

    @property
    def jump(self) -> Measure1D:
        lower, upper = self.measure.domain
        return self.measure.with_parts(
            ac=PiecewisePoly.zero(lower, upper), cantor=()
        )

    @property
    def diffuse(self) -> Measure1D:
        return self.absolutely_continuous + self.cantor

    def to_text(self) -> str:
        lines = [f"route: {self.route}", to_text(self.measure)]
        if self.theta is not None:
            atoms = ", ".join(
                f"({format_fraction(x)},{format_fraction(v)})"
                for x, v in self.theta.atoms
            )
            lines.append(f"theta atoms: [{atoms}]")
        return "\n".join(lines)


def representative_times(
    u: PiecewiseBV, lam: LambdaSelector, mu: Measure1D
) -> Measure1D:
    """u^λ·μ.

    Raises:
        CantorInteractionError: If a staircase of u meets the density
            of μ, or u is not constant on a Cantor support of μ
    """
    for c in u.staircases:
        if not mu.ac.masked([c.support]).is_zero():
            raise CantorInteractionError(
                f"staircase on {c.support} meets an absolutely continuous "
                "divergence"
            )
    components = []
    for c in mu.cantor:
        k = u.constant_on(c.lower, c.upper)
        if k is None:
            raise CantorInteractionError(
                f"function varies on the Cantor support {c.support}"
            )
        components.append(c.scaled(k))
    return Measure1D(
        u.plain * mu.ac,
        tuple((x, representative(u, lam, x) * w) for x, w in mu.atoms),
        tuple(components),
    )


def _buried_jumps(A: DMField1D, c: CantorComponent) -> List[Fraction]:
    """Jumps of A at Cantor points of c that no piece of c ends at."""
    return [
        x for x in A.profile.jump_points
        if c.contains(x) and not c.is_piece_end(x)
    ]


def staircase_pairing(
    A: DMField1D, c: CantorComponent
) -> Tuple[CantorComponent, ...]:
    """Ã D^c T for the staircase T of mass c: c weighted by A.

    Raises:
        CantorInteractionError: If a staircase of A overlaps the support,
            or A jumps at a Cantor point that no piece ends at
    """
    for s in A.profile.staircases:
        if s.lower < c.upper and c.lower < s.upper:
            raise CantorInteractionError(
                f"staircases of u and A overlap on {c.support}"
            )
    buried = _buried_jumps(A, c)
    if buried:
        raise CantorInteractionError(
            f"D^c u on {c.support} meets a jump of the field at {buried[0]}"
        )
    return tuple(c.weighted_by(A.profile.plain))


def _staircase_components(
    A: DMField1D, u: PiecewiseBV
) -> Tuple[CantorComponent, ...]:
    return tuple(
        piece for c in u.staircases for piece in staircase_pairing(A, c)
    )


def pairing_by_definition(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector = PRECISE
) -> PairingResult:
    """Div(uA) − u^λ Div A.

    A staircase T of u is continuous and constant off its support, so
    Div(TA) − T Div A = Ã DT; the rest of u goes through the product
    field.
    """
    plain = PiecewiseBV(u.smooth)
    measure = product_field(plain, A).divergence - representative_times(
        plain, lam, A.divergence
    )
    staircases = Measure1D(
        PiecewisePoly.zero(*A.domain), (), _staircase_components(A, u)
    )
    return PairingResult(measure + staircases, DEFINITION)


def _ac_density(A: DMField1D, u: PiecewiseBV) -> PiecewisePoly:
    slope = u.smooth.derivative()
    for c in A.profile.staircases:
        if not slope.masked([c.support]).is_zero():
            raise CantorInteractionError(
                f"field staircase on {c.support} meets a non-constant "
                "function"
            )
    return A.profile.plain * slope


def jump_weight(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector, x: Fraction
) -> Fraction:
    """[(1 − λ)Tr^+ + λTr^-](u^+ − u^-) at a jump of u."""
    limits = approximate_limits(u, x)
    trace = normal_trace(A, x, limits.normal)
    weight = lam(x)
    return ((1 - weight) * trace.plus + weight * trace.minus) * limits.jump


def pairing_by_decomposition(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector = PRECISE
) -> PairingResult:
    """A·u' L¹ + Ã D^c u + jump atoms.

    Raises:
        CantorInteractionError: If D^c u meets a staircase or a jump of A
    """
    measure = Measure1D(
        _ac_density(A, u),
        tuple((x, jump_weight(A, u, lam, x)) for x in u.jump_points),
        _staircase_components(A, u),
    )
    return PairingResult(measure, DECOMPOSITION, theta_density(A, u, lam))


def pairing(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector = PRECISE
) -> Measure1D:
    """⟨(A, Du)⟩_λ."""
    return pairing_by_decomposition(A, u, lam).measure


def standard_pairing(A: DMField1D, u: PiecewiseBV) -> Measure1D:
    """The λ ≡ 1/2 pairing, built on the precise representative."""
    return pairing(A, u, PRECISE)


def gpairing_action(
    A: DMField1D,
    u: PiecewiseBV,
    lam: LambdaSelector,
    phi: PiecewisePoly,
) -> Fraction:
    """−∫ u^λ φ dDiv A − ∫ u A φ' dx + [u A φ] over ∂Ω for a continuous
    test function φ. The boundary flux vanishes when φ has compact support.

    Exact except on Cantor parts of Div A where u φ breaks inside a
    self-similar piece.
    """
    if not phi.is_continuous():
        raise ValueError("test functions must be continuous")
    mu = A.divergence
    for c in mu.cantor:
        if any(
            s.lower < c.upper and c.lower < s.upper for s in u.staircases
        ):
            raise CantorInteractionError(
                f"staircases of u and A overlap on {c.support}"
            )
    weighted = sum(
        (representative(u, lam, x) * w * phi.value(x) for x, w in mu.atoms),
        Fraction(0),
    )
    weighted += integrate(u, mu.ac * phi)
    weighted += sum(
        (c.integrate_piecewise(u.plain * phi) for c in mu.cantor),
        Fraction(0),
    )
    flux = integrate_product(u, A.profile, phi.derivative())
    boundary = (
        u.left_limit(u.upper) * A.profile.left_limit(u.upper)
        * phi.value(u.upper, -1)
        - u.right_limit(u.lower) * A.profile.right_limit(u.lower)
        * phi.value(u.lower)
    )
    return boundary - weighted - flux


def decomposition_action(
    A: DMField1D,
    u: PiecewiseBV,
    lam: LambdaSelector,
    phi: PiecewisePoly,
) -> Fraction:
    """⟨pairing, φ⟩ from the three parts, without forming the measure."""
    total = integrate(A.profile, u.smooth.derivative() * phi)
    total += sum(
        (jump_weight(A, u, lam, x) * phi.value(x) for x in u.jump_points),
        Fraction(0),
    )
    for c in u.staircases:
        if any(
            s.lower < c.upper and c.lower < s.upper
            for s in A.profile.staircases
        ):
            raise CantorInteractionError(
                f"staircases of u and A overlap on {c.support}"
            )
        if _buried_jumps(A, c):
            raise CantorInteractionError(
                f"D^c u on {c.support} meets a jump of the field"
            )
        total += c.integrate_piecewise(A.profile.plain * phi)
    return total


def resto_identity(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector
) -> Measure1D:
    """⟨(A, Du)⟩_λ − ⟨(A, Du)⟩_{1/2} − (1/2 − λ)(u^+ − u^-)Div A⌐J_u.

    Vanishes identically.
    """
    mu = A.divergence
    correction = Measure1D(
        PiecewisePoly.zero(*A.domain),
        tuple(
            (
                x,
                (Fraction(1, 2) - lam(x))
                * approximate_limits(u, x).jump
                * mu.atom_weight(x),
            )
            for x in u.jump_points
        ),
    )
    return pairing(A, u, lam) - standard_pairing(A, u) - correction


def nonlinearity_defect(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector
) -> Measure1D:
    """⟨(A, Du)⟩_λ + ⟨(A, D(−u))⟩_λ."""
    return pairing(A, u, lam) + pairing(A, -u, lam)


def theta_density(
    A: DMField1D, u: PiecewiseBV, lam: LambdaSelector = PRECISE
) -> ThetaTable:
    """θ_λ(A, Du, ·) piecewise: A sgn(u') on charged pieces, the atom
    ratio pairing({x})/|Du|({x}) at jumps, Ã sgn(mass) on staircases."""
    _ac_density(A, u)
    slope = u.smooth.derivative()
    charged = []
    sign_pieces = []
    for lo, hi, coeffs, s in slope.signed_pieces():
        sign_pieces.append((lo, hi, (s,) if s else ()))
        if s:
            charged.append((lo, hi))
    signs = PiecewisePoly.from_pieces(sign_pieces)
    atoms = []
    for x in u.jump_points:
        limits = approximate_limits(u, x)
        atoms.append((x, jump_weight(A, u, lam, x) / limits.jump))
    cantor = []
    for c in u.staircases:
        staircase_pairing(A, c)
        cantor.append(
            (
                c.lower,
                c.upper,
                A.profile.plain.restrict_to(c.lower, c.upper).scale(
                    sign(c.mass)
                ),
            )
        )
    return ThetaTable(
        A.profile.plain * signs, tuple(charged), tuple(atoms), tuple(cantor)
    )


# extremal selections

def extremal_pairings(
    A: DMField1D, u: PiecewiseBV
) -> Tuple[Measure1D, Measure1D]:
    """Closed forms attained by Λ_lsc and Λ_usc:

    lsc: −u^+(Div A)^+ + u^-(Div A)^- + Div(uA)
    usc: −u^-(Div A)^+ + u^+(Div A)^- + Div(uA)
    """
    plus, minus = divergence_parts(A)
    upper = LambdaSelector.constant(1)
    lower = LambdaSelector.constant(0)
    plain = PiecewiseBV(u.smooth)
    flux = product_field(plain, A).divergence + Measure1D(
        PiecewisePoly.zero(*A.domain), (), _staircase_components(A, u)
    )
    lsc = (
        flux
        - representative_times(plain, upper, plus)
        + representative_times(plain, lower, minus)
    )
    usc = (
        flux
        - representative_times(plain, lower, plus)
        + representative_times(plain, upper, minus)
    )
    return lsc, usc


def lattice_extremes(
    A: DMField1D, u: PiecewiseBV
) -> Tuple[Measure1D, Measure1D]:
    """(P_0 ∧ P_1, P_0 ∨ P_1) for the λ ≡ 0 and λ ≡ 1 pairings."""
    first = pairing(A, u, LambdaSelector.constant(0))
    second = pairing(A, u, LambdaSelector.constant(1))
    return lattice_min(first, second), lattice_max(first, second)


def extremal_jump_parts(
    A: DMField1D, u: PiecewiseBV
) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """(x, min{Tr^+, Tr^-}(u^+ − u^-), max{Tr^+, Tr^-}(u^+ − u^-))."""
    out = []
    for x in u.jump_points:
        limits = approximate_limits(u, x)
        trace = normal_trace(A, x, limits.normal)
        low = min(trace.plus, trace.minus) * limits.jump
        high = max(trace.plus, trace.minus) * limits.jump
        out.append((x, low, high))
    return out
