"""BV functions on an interval: representatives, derivatives, truncations

A PiecewiseBV is a piecewise polynomial plus finitely many Cantor
staircases added cumulatively. Jumps are read off the one-sided limits
of the polynomial part at its breakpoints; staircases are continuous.
Each staircase support must be free of breakpoints and carry a constant
polynomial part, and distinct supports may only touch at endpoints.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .cantor import CantorComponent, normalize_components
from .errors import (
    CantorInteractionError,
    DegreeUnsupportedError,
    NonLipschitzError,
    ScenarioParseError,
    UnsupportedConstructError,
)
from .measures import (
    BorelSet1D,
    Measure1D,
    cantor_from_text,
    parse_nested,
    total_variation,
)
from .polynomials import (
    PiecewisePoly,
    exact_crossings,
    poly_compose,
    poly_derivative,
    poly_eval,
    poly_roots,
    step_function,
)
from .rationals import Number, format_fraction, sign, to_fraction


@dataclass(frozen=True)
class ApproximateLimits:
    """Approximate limits at a point with the u^i = u^+ orientation."""

    lower: Fraction
    upper: Fraction
    left: Fraction
    right: Fraction

    @property
    def precise(self) -> Optional[Fraction]:
        """ũ(x) when x is an approximate continuity point."""
        return self.lower if self.lower == self.upper else None

    @property
    def normal(self) -> int:
        """ν_u: +1 at upward jumps, -1 at downward jumps, 0 elsewhere."""
        return sign(self.right - self.left)

    @property
    def jump(self) -> Fraction:
        return self.upper - self.lower


@dataclass(frozen=True)
class PiecewiseBV:
    smooth: PiecewisePoly
    staircases: Tuple[CantorComponent, ...] = field(default=())

    def __post_init__(self) -> None:
        smooth = self.smooth.normalized()
        staircases = normalize_components(self.staircases)
        for c in staircases:
            if c.lower < smooth.lower or c.upper > smooth.upper:
                raise ValueError(f"staircase {c.support} outside domain")
            if c.is_weighted:
                raise UnsupportedConstructError(
                    f"weighted staircase on {c.support}"
                )
            if any(c.lower < x < c.upper for x in smooth.breakpoints):
                raise UnsupportedConstructError(
                    f"breakpoint inside staircase support {c.support}"
                )
            if len(smooth.piece_at(c.lower)[2]) > 1:
                raise UnsupportedConstructError(
                    f"non-constant polynomial under staircase {c.support}"
                )
        for left, right in zip(staircases, staircases[1:]):
            if right.lower < left.upper:
                raise UnsupportedConstructError(
                    f"overlapping staircases {left.support} and "
                    f"{right.support}"
                )
        object.__setattr__(self, "smooth", smooth)
        object.__setattr__(self, "staircases", staircases)

    # constructors

    @classmethod
    def constant(
        cls, lower: Number, upper: Number, value: Number = 0
    ) -> "PiecewiseBV":
        return cls(PiecewisePoly.constant(lower, upper, value))

    @classmethod
    def from_pieces(
        cls, pieces: Iterable[Tuple[Number, Number, Iterable[Number]]]
    ) -> "PiecewiseBV":
        return cls(PiecewisePoly.from_pieces(list(pieces)))

    @classmethod
    def indicator(
        cls,
        lower: Number,
        upper: Number,
        a: Number,
        b: Number,
        value: Number = 1,
    ) -> "PiecewiseBV":
        """value·χ_(a, b) on (lower, upper)."""
        lower, upper = to_fraction(lower), to_fraction(upper)
        a, b = to_fraction(a), to_fraction(b)
        if not lower <= a < b <= upper:
            raise ValueError(f"({a}, {b}) not inside ({lower}, {upper})")
        points = sorted({lower, a, b, upper})
        pieces = [
            (lo, hi, (value,) if a <= lo and hi <= b else ())
            for lo, hi in zip(points, points[1:])
        ]
        return cls.from_pieces(pieces)

    @classmethod
    def cantor_staircase(
        cls,
        lower: Number,
        upper: Number,
        a: Number,
        b: Number,
        mass: Number = 1,
        depth: int = 20,
    ) -> "PiecewiseBV":
        """The Cantor–Vitali function rising by ``mass`` across [a, b]."""
        return cls(
            PiecewisePoly.zero(lower, upper),
            (CantorComponent(a, b, mass, depth),),
        )

    # structure

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.smooth.domain

    @property
    def lower(self) -> Fraction:
        return self.smooth.lower

    @property
    def upper(self) -> Fraction:
        return self.smooth.upper

    @property
    def plain(self) -> PiecewisePoly:
        """u minus the staircases restricted to their own supports.

        u = plain + Σ local staircases, where a local staircase rises
        from 0 to its mass over its support and vanishes elsewhere.
        """
        result = self.smooth
        for c in self.staircases:
            result = result + step_function(
                self.lower, self.upper, c.upper, c.mass
            )
        return result.normalized()

    def has_staircases(self) -> bool:
        return bool(self.staircases)

    def require_no_staircases(self, operation: str) -> None:
        if self.staircases:
            raise UnsupportedConstructError(
                f"{operation} of a function with a Cantor staircase"
            )

    def staircase_value(self, x: Fraction) -> Fraction:
        return sum((c.staircase(x) for c in self.staircases), Fraction(0))

    def value(self, x: Number, side: int = 1) -> Fraction:
        x = to_fraction(x)
        return self.smooth.value(x, side) + self.staircase_value(x)

    def left_limit(self, x: Number) -> Fraction:
        return self.value(x, -1)

    def right_limit(self, x: Number) -> Fraction:
        return self.value(x, 1)

    @property
    def jump_points(self) -> Tuple[Fraction, ...]:
        """J_u (= S_u): interior breakpoints with distinct one-sided limits."""
        return tuple(
            x
            for x in self.smooth.interior_breakpoints
            if self.smooth.left_limit(x) != self.smooth.right_limit(x)
        )

    def jumps(self) -> List[Tuple[Fraction, Fraction, Fraction]]:
        """Jump table ``(x, left, right)``."""
        return [
            (x, self.left_limit(x), self.right_limit(x))
            for x in self.jump_points
        ]

    def feature_points(self) -> Tuple[Fraction, ...]:
        points = set(self.smooth.breakpoints)
        for c in self.staircases:
            points.update(c.support)
        return tuple(sorted(points))

    def is_continuous(self) -> bool:
        return not self.jump_points

    def constant_on(self, a: Fraction, b: Fraction) -> Optional[Fraction]:
        """The value of u on (a, b) if u is constant there, else None."""
        if any(c.lower < b and a < c.upper for c in self.staircases):
            return None
        values = set()
        for lo, hi, coeffs in self.smooth.pieces():
            if lo < b and a < hi:
                if len(coeffs) > 1:
                    return None
                values.add(coeffs[0] if coeffs else Fraction(0))
        if len(values) != 1:
            return None
        return values.pop() + self.staircase_value((a + b) / 2)

    # arithmetic

    def __add__(self, other: "PiecewiseBV") -> "PiecewiseBV":
        return PiecewiseBV(
            self.smooth + other.smooth, self.staircases + other.staircases
        )

    def __neg__(self) -> "PiecewiseBV":
        return self.scale(-1)

    def __sub__(self, other: "PiecewiseBV") -> "PiecewiseBV":
        return self + (-other)

    def scale(self, k: Number) -> "PiecewiseBV":
        k = to_fraction(k)
        return PiecewiseBV(
            self.smooth.scale(k), tuple(c.scaled(k) for c in self.staircases)
        )

    def __mul__(self, other: "PiecewiseBV") -> "PiecewiseBV":
        return multiply(self, other)

    def __str__(self) -> str:
        return to_text(self)


def multiply(u: PiecewiseBV, v: PiecewiseBV) -> PiecewiseBV:
    """Pointwise product.

    Raises:
        CantorInteractionError: If a staircase of one factor meets a
            non-constant stretch of the other
    """
    product = u.plain * v.plain
    staircases: List[CantorComponent] = []
    for mine, theirs in ((u, v), (v, u)):
        for c in mine.staircases:
            k = theirs.constant_on(c.lower, c.upper)
            if k is None:
                raise CantorInteractionError(
                    f"staircase on {c.support} meets a non-constant factor"
                )
            staircases.append(c.scaled(k))
    smooth = product
    for c in staircases:
        smooth = smooth - step_function(u.lower, u.upper, c.upper, c.mass)
    return PiecewiseBV(smooth, tuple(staircases))


def approximate_limits(u: PiecewiseBV, x: Number) -> ApproximateLimits:
    """u^-, u^+ and the one-sided traces at x ∈ Ω."""
    x = to_fraction(x)
    if not u.lower < x < u.upper:
        raise ValueError(f"{x} outside ({u.lower}, {u.upper})")
    left, right = u.left_limit(x), u.right_limit(x)
    return ApproximateLimits(min(left, right), max(left, right), left, right)


@dataclass(frozen=True)
class LambdaSelector:
    """A Borel map λ: Ω → [0, 1], constant off finitely many points."""

    default: Fraction = Fraction(1, 2)
    overrides: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self) -> None:
        default = to_fraction(self.default)
        overrides: Dict[Fraction, Fraction] = {}
        for x, value in self.overrides:
            overrides[to_fraction(x)] = to_fraction(value)
        for value in (default, *overrides.values()):
            if not 0 <= value <= 1:
                raise ValueError(f"selector value {value} outside [0, 1]")
        object.__setattr__(self, "default", default)
        object.__setattr__(
            self, "overrides", tuple(sorted(overrides.items()))
        )

    @classmethod
    def constant(cls, value: Number) -> "LambdaSelector":
        return cls(to_fraction(value))

    @classmethod
    def from_mapping(
        cls, default: Number, overrides: Dict[Number, Number]
    ) -> "LambdaSelector":
        return cls(to_fraction(default), tuple(overrides.items()))

    def __call__(self, x: Number) -> Fraction:
        x = to_fraction(x)
        for point, value in self.overrides:
            if point == x:
                return value
        return self.default

    def is_constant(self) -> bool:
        return all(v == self.default for _, v in self.overrides)

    def describe(self) -> str:
        parts = [f"default {format_fraction(self.default)}"]
        parts += [
            f"λ({format_fraction(x)}) = {format_fraction(v)}"
            for x, v in self.overrides
        ]
        return ", ".join(parts)


PRECISE = LambdaSelector()


def representative(u: PiecewiseBV, lam: LambdaSelector, x: Number) -> Fraction:
    """u^λ(x) = (1 − λ(x))u^-(x) + λ(x)u^+(x)."""
    x = to_fraction(x)
    if x in (u.lower, u.upper):
        return u.value(x, 1 if x == u.lower else -1)
    limits = approximate_limits(u, x)
    if limits.precise is not None:
        return limits.precise
    weight = lam(x)
    return (1 - weight) * limits.lower + weight * limits.upper


def lambda_representative(
    u: PiecewiseBV, lam: LambdaSelector
) -> Callable[[Number], Fraction]:
    """The pointwise-defined u^λ; λ ≡ 1/2 gives the precise u*."""

    def evaluate(x: Number) -> Fraction:
        return representative(u, lam, x)

    return evaluate


def derivative(u: PiecewiseBV) -> Measure1D:
    """Du = u'·L¹ + Σ (right − left)δ_x + D^c u."""
    return Measure1D(
        u.smooth.derivative(),
        tuple((x, right - left) for x, left, right in u.jumps()),
        u.staircases,
    )


def variation(u: PiecewiseBV) -> Fraction:
    """|Du|(Ω)."""
    return total_variation(derivative(u)).total_mass()


def sup_norm(u: PiecewiseBV) -> Fraction:
    """‖u‖_∞ (padded at irrational critical points)."""
    plain = u.plain
    best = plain.sup_abs()
    for c in u.staircases:
        start = plain.value((c.lower + c.upper) / 2)
        best = max(best, abs(start + c.mass))
    return best


def l1_distance(u: PiecewiseBV, v: PiecewiseBV) -> Fraction:
    """∫|u − v| dx for functions without staircases."""
    u.require_no_staircases("L1 distance")
    v.require_no_staircases("L1 distance")
    return (u.smooth - v.smooth).abs().integral()


def integrate(u: PiecewiseBV, g: PiecewisePoly) -> Fraction:
    """∫ u·g dx, exact through Cantor moments where g is polynomial on
    each staircase support."""
    total = (u.plain * g).integral()
    for c in u.staircases:
        # ∫ S g over the support = mass·G(b) − ∫ G dμ_c
        primitive = g.restrict_to(c.lower, c.upper).primitive()
        total += c.mass * primitive.value(c.upper, -1)
        total -= c.integrate_piecewise(primitive)
    return total


def integrate_product(
    u: PiecewiseBV, v: PiecewiseBV, g: PiecewisePoly
) -> Fraction:
    """∫ u·v·g dx.

    Raises:
        CantorInteractionError: If staircases of u and v overlap
    """
    for a in u.staircases:
        for b in v.staircases:
            if a.lower < b.upper and b.lower < a.upper:
                raise CantorInteractionError(
                    f"staircases on {a.support} and {b.support} overlap"
                )
    total = (u.plain * v.plain * g).integral()
    for c in u.staircases:
        total += integrate(
            PiecewiseBV(PiecewisePoly.zero(u.lower, u.upper), (c,))
            - PiecewiseBV(step_function(u.lower, u.upper, c.upper, c.mass)),
            v.plain * g,
        )
    for c in v.staircases:
        total += integrate(
            PiecewiseBV(PiecewisePoly.zero(v.lower, v.upper), (c,))
            - PiecewiseBV(step_function(v.lower, v.upper, c.upper, c.mass)),
            u.plain * g,
        )
    return total


# truncation and composition

def truncate(u: PiecewiseBV, k: Number) -> PiecewiseBV:
    """T_k(u) = max{min{u, k}, −k}.

    Raises:
        ValueError: If k is not positive
        DegreeUnsupportedError: If u crosses ±k at an irrational point
    """
    k = to_fraction(k)
    if k <= 0:
        raise ValueError(f"truncation level must be positive, got {k}")
    if u.staircases:
        if sup_norm(u) <= k:
            return u
        u.require_no_staircases("truncation")
    pieces = []
    for lo, hi, coeffs in u.smooth.pieces():
        cuts = sorted(
            set(exact_crossings(coeffs, k, lo, hi))
            | set(exact_crossings(coeffs, -k, lo, hi))
        )
        points = [lo, *cuts, hi]
        for a, b in zip(points, points[1:]):
            middle = poly_eval(coeffs, (a + b) / 2)
            if middle > k:
                pieces.append((a, b, (k,)))
            elif middle < -k:
                pieces.append((a, b, (-k,)))
            else:
                pieces.append((a, b, coeffs))
    return PiecewiseBV.from_pieces(pieces)


def truncation_map(k: Number, bound: Number) -> PiecewisePoly:
    """T_k as a piecewise polynomial on [−bound, bound]."""
    k, bound = to_fraction(k), to_fraction(bound)
    if bound <= k:
        return PiecewisePoly.polynomial(-bound, bound, (0, 1))
    return PiecewisePoly.from_pieces(
        [(-bound, -k, (-k,)), (-k, k, (0, 1)), (k, bound, (k,))]
    )


def compose(h: PiecewisePoly, u: PiecewiseBV) -> PiecewiseBV:
    """h∘u for a continuous piecewise polynomial h.

    Raises:
        NonLipschitzError: If h is discontinuous or misses part of the
            range of u
        DegreeUnsupportedError: If u crosses a breakpoint of h at an
            irrational point
    """
    if not h.is_continuous():
        raise NonLipschitzError("scalar map must be continuous")
    u.require_no_staircases("composition")
    low, high = u.smooth.value_range()
    if low < h.lower or high > h.upper:
        raise NonLipschitzError(
            f"range [{low}, {high}] of u exceeds map domain {h.domain}"
        )
    pieces = []
    for lo, hi, coeffs in u.smooth.pieces():
        cuts = set()
        for level in h.interior_breakpoints:
            cuts.update(exact_crossings(coeffs, level, lo, hi))
        points = [lo, *sorted(cuts), hi]
        for a, b in zip(points, points[1:]):
            middle = poly_eval(coeffs, (a + b) / 2)
            pieces.append((a, b, poly_compose(h.piece_at(middle)[2], coeffs)))
    return PiecewiseBV.from_pieces(pieces)


def is_nondecreasing(h: PiecewisePoly) -> bool:
    """Whether a continuous piecewise polynomial never decreases."""
    for lo, hi, coeffs in h.pieces():
        slope = poly_derivative(coeffs)
        if not slope:
            continue
        points = [lo, *poly_roots(slope, lo, hi), hi]
        for a, b in zip(points, points[1:]):
            if poly_eval(slope, (a + b) / 2) < 0:
                return False
    return True


# level sets

@dataclass(frozen=True)
class LevelSet:
    """A finite union of open intervals with its reduced boundary in Ω."""

    domain: Tuple[Fraction, Fraction]
    intervals: Tuple[Tuple[Fraction, Fraction], ...]

    @property
    def boundary(self) -> Tuple[Tuple[Fraction, int], ...]:
        """∂*E inside Ω with the interior normal: +1 at left ends."""
        lower, upper = self.domain
        points = []
        for a, b in self.intervals:
            if a != lower:
                points.append((a, 1))
            if b != upper:
                points.append((b, -1))
        return tuple(points)

    @property
    def perimeter(self) -> int:
        return len(self.boundary)

    def as_borel(self) -> BorelSet1D:
        return BorelSet1D(intervals=self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def indicator(self) -> PiecewiseBV:
        lower, upper = self.domain
        points = sorted({lower, upper, *(p for ab in self.intervals for p in ab)})
        pieces = [
            (
                lo,
                hi,
                (1,) if any(a <= lo and hi <= b for a, b in self.intervals)
                else (),
            )
            for lo, hi in zip(points, points[1:])
        ]
        return PiecewiseBV.from_pieces(pieces)


def level_set(u: PiecewiseBV, t: Number) -> LevelSet:
    """{u > t} up to a null set, with its measure-theoretic interior.

    Raises:
        DegreeUnsupportedError: If u crosses t at an irrational point
    """
    t = to_fraction(t)
    u.require_no_staircases("level set")
    inside: List[List[Fraction]] = []
    for lo, hi, coeffs in u.smooth.pieces():
        points = [lo, *exact_crossings(coeffs, t, lo, hi), hi]
        for a, b in zip(points, points[1:]):
            if poly_eval(coeffs, (a + b) / 2) > t:
                if inside and inside[-1][1] == a:
                    inside[-1][1] = b
                else:
                    inside.append([a, b])
    return LevelSet(u.domain, tuple((a, b) for a, b in inside))


def critical_values(u: PiecewiseBV) -> List[Fraction]:
    """One-sided values at breakpoints and values at interior extrema.

    Between consecutive critical values the perimeter of {u > t} is
    constant.

    Raises:
        DegreeUnsupportedError: If an extremum is irrational
    """
    u.require_no_staircases("level-set slicing")
    values = set()
    for lo, hi, coeffs in u.smooth.pieces():
        values.add(poly_eval(coeffs, lo))
        values.add(poly_eval(coeffs, hi))
        slope = poly_derivative(coeffs)
        if not slope:
            continue
        for x in poly_roots(slope, lo, hi):
            if poly_eval(slope, x) != 0:
                raise DegreeUnsupportedError(
                    f"irrational extremum near {float(x)}"
                )
            values.add(poly_eval(coeffs, x))
    return sorted(values)


def coarea_variation(u: PiecewiseBV) -> Fraction:
    """∫ P({u > t}, Ω) dt over the real line, exact."""
    values = critical_values(u)
    return sum(
        (
            level_set(u, (s + t) / 2).perimeter * (t - s)
            for s, t in zip(values, values[1:])
        ),
        Fraction(0),
    )


# canonical text form

def to_text(u: PiecewiseBV) -> str:
    pieces = ", ".join(
        f"({format_fraction(a)},{format_fraction(b)},"
        f"[{','.join(format_fraction(c) for c in coeffs)}])"
        for a, b, coeffs in u.smooth.pieces()
    )
    jumps = ", ".join(
        f"({format_fraction(x)},{format_fraction(l)},{format_fraction(r)})"
        for x, l, r in u.jumps()
    )
    cantor = ", ".join(
        f"({format_fraction(c.lower)},{format_fraction(c.upper)},"
        f"{format_fraction(c.mass)},{c.depth})"
        for c in u.staircases
    )
    return f"pieces: [{pieces}]; jumps: [{jumps}]; cantor: [{cantor}]"


def from_text(text: str) -> PiecewiseBV:
    """Inverse of :func:`to_text`; the jump table is checked, not used."""
    sections = {}
    for part in re.split(r";\s*(?=[a-z]+:)", text.strip()):
        name, _, body = part.partition(":")
        sections[name.strip()] = parse_nested(body)
    try:
        u = PiecewiseBV(
            PiecewisePoly.from_pieces(
                [(a, b, c) for a, b, c in sections["pieces"]]
            ),
            tuple(cantor_from_text(entry) for entry in sections["cantor"]),
        )
        listed = [tuple(j) for j in sections["jumps"]]
    except KeyError as e:
        raise ScenarioParseError(f"missing section {e}") from None
    if listed != [tuple(j) for j in u.jumps()]:
        raise ValueError("jump table does not match the pieces")
    return u
