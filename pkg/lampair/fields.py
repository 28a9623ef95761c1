"""Bounded divergence-measure fields on an interval

In one dimension a field is a scalar BV profile A and Div A = DA. The
normal trace on a point x oriented by ν ∈ {+1, -1} is read from the
one-sided limits of A: Tr^- is taken on the side ν points away from,
Tr^+ on the side it points to, both multiplied by ν.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import sympy

from .bv import (
    LambdaSelector,
    PiecewiseBV,
    derivative,
    multiply,
    sup_norm,
    variation,
)
from .errors import SupportOverflowError
from .measures import BorelSet1D, Measure1D, restrict
from .polynomials import (
    PiecewisePoly,
    from_sympy_expr,
    to_sympy_expr,
)
from .rationals import Number, sign, to_fraction

LSC = "lsc"
USC = "usc"
BOTH = "both"
NEITHER = "neither"


@dataclass(frozen=True)
class DMField1D:
    profile: PiecewiseBV

    @classmethod
    def from_pieces(cls, pieces) -> "DMField1D":
        return cls(PiecewiseBV.from_pieces(pieces))

    @classmethod
    def indicator(
        cls, lower: Number, upper: Number, a: Number, b: Number
    ) -> "DMField1D":
        return cls(PiecewiseBV.indicator(lower, upper, a, b))

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.profile.domain

    @property
    def sup_norm(self) -> Fraction:
        return sup_norm(self.profile)

    @property
    def divergence(self) -> Measure1D:
        return derivative(self.profile)

    @property
    def jump_set(self) -> Tuple[Fraction, ...]:
        """Θ_A; every point set is H^0-rectifiable, so Θ^u_A is empty."""
        return self.divergence.atom_set

    def divergence_variation(self) -> Fraction:
        return variation(self.profile)

    def is_continuous(self) -> bool:
        return self.profile.is_continuous()


@dataclass(frozen=True)
class OrientedPointSet:
    points: Tuple[Tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        points = tuple(
            sorted((to_fraction(x), int(nu)) for x, nu in self.points)
        )
        locations = [x for x, _ in points]
        if len(set(locations)) != len(locations):
            raise ValueError("oriented points must be distinct")
        if any(nu not in (1, -1) for _, nu in points):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "points", points)

    @classmethod
    def positive(cls, points: Iterable[Number]) -> "OrientedPointSet":
        return cls(tuple((x, 1) for x in points))

    def flipped(self) -> "OrientedPointSet":
        return OrientedPointSet(tuple((x, -nu) for x, nu in self.points))


@dataclass(frozen=True)
class NormalTrace:
    point: Fraction
    normal: int
    minus: Fraction
    plus: Fraction

    @property
    def star(self) -> Fraction:
        """Tr^* = (Tr^+ + Tr^-)/2."""
        return (self.plus + self.minus) / 2

    @property
    def difference(self) -> Fraction:
        return self.plus - self.minus


def normal_trace(A: DMField1D, x: Number, nu: int = 1) -> NormalTrace:
    x = to_fraction(x)
    lower, upper = A.domain
    if not lower < x < upper:
        raise ValueError(f"{x} outside ({lower}, {upper})")
    left, right = A.profile.left_limit(x), A.profile.right_limit(x)
    if nu > 0:
        return NormalTrace(x, 1, left, right)
    return NormalTrace(x, -1, -right, -left)


def normal_traces(
    A: DMField1D, sigma: OrientedPointSet
) -> List[NormalTrace]:
    """(Tr^-, Tr^+, Tr^*) at every point of an oriented point set."""
    return [normal_trace(A, x, nu) for x, nu in sigma.points]


@dataclass(frozen=True)
class SignSets:
    positive: BorelSet1D
    negative: BorelSet1D
    jump_set: Tuple[Fraction, ...]


def classify(A: DMField1D) -> SignSets:
    """Ω^+_A, Ω^-_A and Θ_A from the polar density of Div A.

    An atom decides the sign at its point and a Cantor component on its
    Cantor set; the density decides everywhere else. Points where the
    density vanishes belong to neither sign set, and the two sets are
    disjoint.
    """
    mu = A.divergence
    parts: Dict[int, Dict[str, list]] = {
        s: {"intervals": [], "points": [], "cantor_sets": [], "holes": [],
            "punctures": []}
        for s in (1, -1)
    }
    for lo, hi, _coeffs, s in mu.ac.signed_pieces():
        if s:
            parts[s]["intervals"].append((lo, hi))
    for x, w in mu.atoms:
        parts[sign(w)]["points"].append(x)
        parts[-sign(w)]["punctures"].append(x)
    for c in mu.cantor:
        parts[sign(c.mass)]["cantor_sets"].append(c.support)
        parts[-sign(c.mass)]["holes"].append(c.support)
    positive, negative = (
        BorelSet1D(**{name: tuple(v) for name, v in parts[s].items()})
        for s in (1, -1)
    )
    return SignSets(positive, negative, mu.atom_set)


def divergence_parts(A: DMField1D) -> Tuple[Measure1D, Measure1D]:
    """((Div A)^+, (Div A)^-) as restrictions to Ω^±_A."""
    signs = classify(A)
    mu = A.divergence
    return restrict(mu, signs.positive), -restrict(mu, signs.negative)


def selector_class(lam: LambdaSelector, A: DMField1D) -> str:
    """Membership of λ in Λ_lsc, Λ_usc, both or neither."""
    atoms = A.divergence.atoms
    if not atoms:
        return BOTH
    lsc = all(lam(x) == (1 if w > 0 else 0) for x, w in atoms)
    usc = all(lam(x) == (0 if w > 0 else 1) for x, w in atoms)
    if lsc:
        return LSC
    if usc:
        return USC
    return NEITHER


def lsc_selector(
    A: DMField1D, default: Number = Fraction(1, 2)
) -> LambdaSelector:
    """A member of Λ_lsc: 1 on positive atoms, 0 on negative ones."""
    return LambdaSelector(
        to_fraction(default),
        tuple((x, 1 if w > 0 else 0) for x, w in A.divergence.atoms),
    )


def usc_selector(
    A: DMField1D, default: Number = Fraction(1, 2)
) -> LambdaSelector:
    """A member of Λ_usc: 0 on positive atoms, 1 on negative ones."""
    return LambdaSelector(
        to_fraction(default),
        tuple((x, 0 if w > 0 else 1) for x, w in A.divergence.atoms),
    )


def product_field(u: PiecewiseBV, A: DMField1D) -> DMField1D:
    """The field uA; bounded u keeps it in DM^∞."""
    return DMField1D(multiply(u, A.profile))


def product_traces(
    u: PiecewiseBV, A: DMField1D, sigma: OrientedPointSet
) -> List[NormalTrace]:
    """Traces of uA from those of A: Tr^+(uA) = u^i Tr^+(A) and
    Tr^-(uA) = u^e Tr^-(A), with the i-side the one ν points to."""
    out = []
    for trace in normal_traces(A, sigma):
        x, nu = trace.point, trace.normal
        inner = u.right_limit(x) if nu > 0 else u.left_limit(x)
        outer = u.left_limit(x) if nu > 0 else u.right_limit(x)
        out.append(
            NormalTrace(x, nu, outer * trace.minus, inner * trace.plus)
        )
    return out


# mollification

_X, _Y = sympy.symbols("x y")


def mollifier_limit(A: DMField1D) -> Optional[Fraction]:
    """Largest admissible ε: distance of the features to ∂Ω."""
    lower, upper = A.domain
    features = [
        x for x in A.profile.feature_points() if lower < x < upper
    ]
    if not features:
        return None
    return min(min(x - lower, upper - x) for x in features)


def bump(epsilon: Number) -> sympy.Expr:
    """(15/16ε)(1 − (y/ε)²)² on [−ε, ε], unit mass."""
    eps = sympy.Rational(str(to_fraction(epsilon)))
    return sympy.Rational(15, 16) / eps * (1 - (_Y / eps) ** 2) ** 2


def mollify(A: DMField1D, epsilon: Number) -> DMField1D:
    """A_ε = A * η_ε with the end pieces of A extended polynomially.

    Raises:
        ValueError: If ε is not positive
        SupportOverflowError: If ε reaches the distance from a feature
            of A to the boundary
    """
    logger = logging.getLogger("lampair")
    eps = to_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"mollifier radius must be positive, got {eps}")
    limit = mollifier_limit(A)
    if limit is not None and eps >= limit:
        raise SupportOverflowError(eps, limit)
    A.profile.require_no_staircases("mollification")

    lower, upper = A.domain
    pieces = list(A.profile.smooth.pieces())
    cuts = {lower, upper}
    for b in A.profile.smooth.interior_breakpoints:
        cuts.update((b - eps, b + eps))
    cuts = sorted(c for c in cuts if lower <= c <= upper)

    kernel = bump(eps)
    eps_s = sympy.Rational(str(eps))
    result = []
    for s, t in zip(cuts, cuts[1:]):
        middle = (s + t) / 2
        expr = sympy.Integer(0)
        for index, (lo, hi, coeffs) in enumerate(pieces):
            if not coeffs:
                continue
            # y ranges over {x - hi < y < x - lo} ∩ (-ε, ε)
            start, stop = -eps_s, eps_s
            if index < len(pieces) - 1 and middle - hi > -eps:
                start = _X - sympy.Rational(str(hi))
            if index > 0 and middle - lo < eps:
                stop = _X - sympy.Rational(str(lo))
            if index < len(pieces) - 1 and middle - hi >= eps:
                continue
            if index > 0 and middle - lo <= -eps:
                continue
            integrand = to_sympy_expr(coeffs, _X - _Y) * kernel
            expr += sympy.integrate(integrand, (_Y, start, stop))
        result.append((s, t, from_sympy_expr(expr, _X)))
    logger.debug(f"Mollified field at epsilon {eps} on {len(result)} pieces")
    return DMField1D(PiecewiseBV(PiecewisePoly.from_pieces(result)))
