"""Signed Radon measures on a bounded open interval

A Measure1D is the sum of an absolutely continuous part with a
piecewise-polynomial density, finitely many atoms and finitely many
affine Cantor components. Values are kept in a canonical form (merged
pieces, sorted atoms, Cantor components refined to common self-similar
pieces), so ``==`` is equality of measures.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .cantor import (
    CantorComponent,
    in_cantor_set,
    is_cantor_subset,
    normalize_components,
)
from .errors import NotInSupportError, ScenarioParseError
from .polynomials import (
    ROOT_TOLERANCE,
    PiecewisePoly,
    interpolate_at,
    sign_near,
)
from .rationals import Number, format_fraction, sign, to_fraction

Interval = Tuple[Fraction, Fraction]
Atom = Tuple[Fraction, Fraction]

# halvings of the first radius in a density sequence
DENSITY_STEPS = 8


@dataclass(frozen=True)
class BorelSet1D:
    """Finite union of open intervals, points and affine Cantor sets.

    ``holes`` are Cantor sets cut out of the intervals and ``punctures``
    points cut out of both the intervals and the Cantor sets; ``points``
    are added back last. A point is in the set when it is listed in
    ``points``, or when it is not punctured and lies in an interval
    outside every hole or in one of ``cantor_sets``.
    """

    intervals: Tuple[Interval, ...] = ()
    points: Tuple[Fraction, ...] = ()
    cantor_sets: Tuple[Interval, ...] = ()
    holes: Tuple[Interval, ...] = ()
    punctures: Tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        raw = sorted(
            (to_fraction(a), to_fraction(b)) for a, b in self.intervals
        )
        points = {to_fraction(p) for p in self.points}
        merged: List[List[Fraction]] = []
        for a, b in raw:
            if not a < b:
                raise ValueError(f"empty interval ({a}, {b})")
            if merged and (
                a < merged[-1][1] or (a == merged[-1][1] and a in points)
            ):
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))
        object.__setattr__(self, "cantor_sets", _supports(self.cantor_sets))
        object.__setattr__(self, "holes", _supports(self.holes))
        object.__setattr__(
            self,
            "punctures",
            tuple(sorted({to_fraction(p) for p in self.punctures} - points)),
        )
        object.__setattr__(
            self,
            "points",
            tuple(sorted(p for p in points if not self._covered(p))),
        )

    @classmethod
    def interval(cls, a: Number, b: Number) -> "BorelSet1D":
        return cls(intervals=((a, b),))

    @classmethod
    def closed_interval(cls, a: Number, b: Number) -> "BorelSet1D":
        return cls(intervals=((a, b),), points=(a, b))

    @classmethod
    def point(cls, x: Number) -> "BorelSet1D":
        return cls(points=(x,))

    def union(self, other: "BorelSet1D") -> "BorelSet1D":
        if self.holes or self.punctures or other.holes or other.punctures:
            raise ValueError("union of sets with holes or punctures")
        return BorelSet1D(
            self.intervals + other.intervals,
            self.points + other.points,
            self.cantor_sets + other.cantor_sets,
        )

    def is_empty(self) -> bool:
        return not (self.intervals or self.points or self.cantor_sets)

    def _covered(self, x: Fraction) -> bool:
        if x in self.punctures:
            return False
        if any(a < x < b for a, b in self.intervals) and not any(
            _in_cantor(h, x) for h in self.holes
        ):
            return True
        return any(_in_cantor(k, x) for k in self.cantor_sets)

    def contains(self, x: Number) -> bool:
        x = to_fraction(x)
        return x in self.points or self._covered(x)

    def check_inside(self, lower: Fraction, upper: Fraction) -> None:
        for a, b in self.intervals + self.cantor_sets:
            if a < lower or b > upper:
                raise ValueError(f"({a}, {b}) not inside ({lower}, {upper})")
        for p in self.points:
            if not lower < p < upper:
                raise ValueError(f"{p} not inside ({lower}, {upper})")


def _supports(pairs: Iterable[Tuple[Number, Number]]) -> Tuple[Interval, ...]:
    return tuple(sorted({(to_fraction(a), to_fraction(b)) for a, b in pairs}))


def _in_cantor(support: Interval, x: Fraction) -> bool:
    a, b = support
    return a <= x <= b and in_cantor_set((x - a) / (b - a))


def _normalize_atoms(atoms: Iterable[Tuple[Number, Number]]) -> Tuple[Atom, ...]:
    weights: Dict[Fraction, Fraction] = {}
    for x, w in atoms:
        x = to_fraction(x)
        weights[x] = weights.get(x, Fraction(0)) + to_fraction(w)
    return tuple(sorted((x, w) for x, w in weights.items() if w != 0))


@dataclass(frozen=True)
class Measure1D:
    """μ = density·L¹ + Σ w·δ_x + Σ Cantor components on (lower, upper)."""

    ac: PiecewisePoly
    atoms: Tuple[Atom, ...] = ()
    cantor: Tuple[CantorComponent, ...] = field(default=())

    def __post_init__(self) -> None:
        ac = self.ac.normalized()
        atoms = _normalize_atoms(self.atoms)
        for x, _ in atoms:
            if not ac.lower < x < ac.upper:
                raise ValueError(f"atom at {x} outside {ac.domain}")
        cantor = normalize_components(self.cantor)
        for c in cantor:
            if c.lower < ac.lower or c.upper > ac.upper:
                raise ValueError(f"Cantor support {c.support} outside domain")
        object.__setattr__(self, "ac", ac)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "cantor", cantor)

    @classmethod
    def zero(cls, lower: Number, upper: Number) -> "Measure1D":
        return cls(PiecewisePoly.zero(lower, upper))

    @classmethod
    def dirac(
        cls, lower: Number, upper: Number, x: Number, weight: Number = 1
    ) -> "Measure1D":
        return cls(PiecewisePoly.zero(lower, upper), ((x, weight),))

    @classmethod
    def from_density(cls, density: PiecewisePoly) -> "Measure1D":
        return cls(density)

    @property
    def domain(self) -> Interval:
        return self.ac.domain

    @property
    def atom_set(self) -> Tuple[Fraction, ...]:
        """The jump set Θ_μ: points of positive H^0-density."""
        return tuple(x for x, _ in self.atoms)

    def atom_weight(self, x: Number) -> Fraction:
        x = to_fraction(x)
        for y, w in self.atoms:
            if y == x:
                return w
        return Fraction(0)

    def is_zero(self) -> bool:
        return self.ac.is_zero() and not self.atoms and not self.cantor

    def with_parts(
        self,
        ac: Optional[PiecewisePoly] = None,
        atoms: Optional[Iterable[Atom]] = None,
        cantor: Optional[Iterable[CantorComponent]] = None,
    ) -> "Measure1D":
        return Measure1D(
            self.ac if ac is None else ac,
            tuple(self.atoms if atoms is None else atoms),
            tuple(self.cantor if cantor is None else cantor),
        )

    def __add__(self, other: "Measure1D") -> "Measure1D":
        return Measure1D(
            self.ac + other.ac,
            self.atoms + other.atoms,
            self.cantor + other.cantor,
        )

    def __neg__(self) -> "Measure1D":
        return self.scale(-1)

    def __sub__(self, other: "Measure1D") -> "Measure1D":
        return self + (-other)

    def scale(self, k: Number) -> "Measure1D":
        k = to_fraction(k)
        return Measure1D(
            self.ac.scale(k),
            tuple((x, w * k) for x, w in self.atoms),
            tuple(c.scaled(k) for c in self.cantor),
        )

    def __call__(self, E: BorelSet1D) -> Fraction:
        return evaluate(self, E)

    def total_mass(self) -> Fraction:
        """μ(Ω)."""
        lower, upper = self.domain
        return evaluate(self, BorelSet1D.interval(lower, upper))

    def variation(self) -> Fraction:
        """|μ|(Ω)."""
        return total_variation(self).total_mass()

    def __str__(self) -> str:
        return to_text(self)


def total_variation(
    mu: Measure1D, tolerance: Fraction = ROOT_TOLERANCE
) -> Measure1D:
    """|μ|: absolute density, absolute atom weights, absolute masses."""
    return Measure1D(
        mu.ac.abs(tolerance),
        tuple((x, abs(w)) for x, w in mu.atoms),
        tuple(c.scaled(sign(c.mass)) for c in mu.cantor),
    )


def positive_part(
    mu: Measure1D, tolerance: Fraction = ROOT_TOLERANCE
) -> Measure1D:
    return Measure1D(
        mu.ac.positive_part(tolerance),
        tuple((x, w) for x, w in mu.atoms if w > 0),
        tuple(c for c in mu.cantor if c.mass > 0),
    )


def jordan(
    mu: Measure1D, tolerance: Fraction = ROOT_TOLERANCE
) -> Tuple[Measure1D, Measure1D]:
    """(μ^+, μ^-) with μ = μ^+ − μ^- and |μ| = μ^+ + μ^-."""
    plus = positive_part(mu, tolerance)
    return plus, plus - mu


def lattice_min(mu1: Measure1D, mu2: Measure1D) -> Measure1D:
    """μ1 ∧ μ2 = μ1 − (μ1 − μ2)^+."""
    return mu1 - positive_part(mu1 - mu2)


def lattice_max(mu1: Measure1D, mu2: Measure1D) -> Measure1D:
    """μ1 ∨ μ2 = μ2 + (μ1 − μ2)^+."""
    return mu2 + positive_part(mu1 - mu2)


def polar_density(mu: Measure1D, x: Number) -> int:
    """ψ(x) in μ = ψ|μ| at a point of supp|μ|.

    Raises:
        NotInSupportError: If x carries no atom, no Cantor mass and the
            density vanishes identically on both sides
    """
    x = to_fraction(x)
    weight = mu.atom_weight(x)
    if weight:
        return sign(weight)
    for component in mu.cantor:
        if component.contains(x):
            return sign(component.mass)
    lower, upper = mu.domain
    if not lower < x < upper:
        raise NotInSupportError(x)
    value = mu.ac.right_limit(x)
    if value == 0:
        value = mu.ac.left_limit(x)
    if value:
        return sign(value)
    for side in (1, -1):
        s = sign_near(mu.ac.piece_at(x, side)[2], x, side)
        if s:
            return s
    raise NotInSupportError(x)


def _open_share(c: CantorComponent, E: BorelSet1D) -> List[CantorComponent]:
    """Signed pieces adding up to c restricted to E.intervals ∖ E.holes."""
    if any(is_cantor_subset(h, c.support) for h in E.holes):
        return []
    share = c.restricted_to(E.intervals)
    for h in E.holes:
        if is_cantor_subset(c.support, h):
            share.extend(
                p.scaled(-1) for p in c.piece(*h).restricted_to(E.intervals)
            )
    return share


def _cantor_share(c: CantorComponent, E: BorelSet1D) -> List[CantorComponent]:
    """Signed pieces adding up to c⌐E; punctures are c-null."""
    if any(is_cantor_subset(k, c.support) for k in E.cantor_sets):
        return [c]
    share = _open_share(c, E)
    for k in E.cantor_sets:
        if is_cantor_subset(c.support, k):
            piece = c.piece(*k)
            share.append(piece)
            share.extend(p.scaled(-1) for p in _open_share(piece, E))
    return share


def _open_mass(c: CantorComponent, E: BorelSet1D) -> Fraction:
    if any(is_cantor_subset(h, c.support) for h in E.holes):
        return Fraction(0)
    total = sum(
        (c.mass_between(a, b) for a, b in E.intervals), Fraction(0)
    )
    for h in E.holes:
        if is_cantor_subset(c.support, h):
            piece = c.piece(*h)
            total -= sum(
                (piece.mass_between(a, b) for a, b in E.intervals),
                Fraction(0),
            )
    return total


def _cantor_mass(c: CantorComponent, E: BorelSet1D) -> Fraction:
    """c(E), exact through the partial moments."""
    if any(is_cantor_subset(k, c.support) for k in E.cantor_sets):
        return c.total
    total = _open_mass(c, E)
    for k in E.cantor_sets:
        if is_cantor_subset(c.support, k):
            piece = c.piece(*k)
            total += piece.total - _open_mass(piece, E)
    return total


def restrict(mu: Measure1D, E: BorelSet1D) -> Measure1D:
    """μ⌐E."""
    lower, upper = mu.domain
    E.check_inside(lower, upper)
    return Measure1D(
        mu.ac.masked(E.intervals),
        tuple((x, w) for x, w in mu.atoms if E.contains(x)),
        tuple(p for c in mu.cantor for p in _cantor_share(c, E)),
    )


def evaluate(mu: Measure1D, E: BorelSet1D) -> Fraction:
    """μ(E), exact (Cantor masses through the exact Cantor function)."""
    lower, upper = mu.domain
    E.check_inside(lower, upper)
    total = sum(
        (mu.ac.integral(a, b) for a, b in E.intervals), Fraction(0)
    )
    total += sum((w for x, w in mu.atoms if E.contains(x)), Fraction(0))
    total += sum((_cantor_mass(c, E) for c in mu.cantor), Fraction(0))
    return total


def act(mu: Measure1D, phi: PiecewisePoly) -> Fraction:
    """⟨μ, φ⟩ for a continuous piecewise polynomial φ.

    Exact on the density and the atoms; on Cantor parts exact wherever φ
    is a single polynomial over a self-similar piece.

    Raises:
        ValueError: If φ is discontinuous or lives on another interval
    """
    if phi.domain != mu.domain:
        raise ValueError(f"test function domain {phi.domain} != {mu.domain}")
    if not phi.is_continuous():
        raise ValueError("test functions must be continuous")
    total = (mu.ac * phi).integral()
    total += sum((w * phi.value(x) for x, w in mu.atoms), Fraction(0))
    total += sum(
        (c.integrate_piecewise(phi) for c in mu.cantor), Fraction(0)
    )
    return total


def lebesgue_decompose(
    mu: Measure1D,
) -> Tuple[Measure1D, Measure1D, Measure1D]:
    """(μ^a, μ^j, μ^c)."""
    lower, upper = mu.domain
    zero = PiecewisePoly.zero(lower, upper)
    return (
        Measure1D(mu.ac),
        Measure1D(zero, mu.atoms),
        Measure1D(zero, (), mu.cantor),
    )


def ball_mass(mu: Measure1D, x: Number, r: Number) -> Fraction:
    """μ((x − r, x + r)) clipped to the domain."""
    x, r = to_fraction(x), to_fraction(r)
    lower, upper = mu.domain
    return evaluate(
        mu, BorelSet1D.interval(max(lower, x - r), min(upper, x + r))
    )


def feature_points(mu: Measure1D) -> Tuple[Fraction, ...]:
    """Breakpoints, atoms and Cantor support ends, sorted."""
    points = set(mu.ac.breakpoints) | set(mu.atom_set)
    for c in mu.cantor:
        points.update(c.support)
    return tuple(sorted(points))


def density_sequence(
    mu: Measure1D, x: Number, steps: int = DENSITY_STEPS
) -> List[Tuple[Fraction, Fraction]]:
    """(r, |μ|(B_r(x))) for r = r0, r0/2, ..., r0/2^steps.

    r0 is half the distance from x to the boundary and to the nearest
    other feature point of |μ|.
    """
    x = to_fraction(x)
    lower, upper = mu.domain
    if not lower < x < upper:
        raise ValueError(f"{x} outside {mu.domain}")
    variation = total_variation(mu)
    distances = [x - lower, upper - x] + [
        abs(p - x) for p in feature_points(variation) if p != x
    ]
    r0 = min(distances) / 2
    return [
        (r0 / 2**k, ball_mass(variation, x, r0 / 2**k))
        for k in range(steps + 1)
    ]


def density_at_atom(mu: Measure1D, x: Number) -> Fraction:
    """lim_{r→0} |μ|(B_r(x)), extrapolated from exact ball masses.

    Inside the first radius the ball mass is |μ|({x}) plus a polynomial
    in r without constant term plus the Cantor mass of the ball, which
    vanishes with r. The Cantor mass is subtracted and the remainder is
    extrapolated to r = 0 through enough radii to be exact.
    """
    x = to_fraction(x)
    variation = total_variation(mu)
    degree = variation.ac.max_degree + 1
    sequence = density_sequence(mu, x, steps=max(degree, 0))
    radii = [r for r, _ in sequence]
    values = [
        mass - sum(
            (c.mass_between(x - r, x + r) for c in variation.cantor),
            Fraction(0),
        )
        for r, mass in sequence
    ]
    return interpolate_at(radii, values, Fraction(0))


# canonical text form

def _cantor_text(c: CantorComponent) -> str:
    weight = ",".join(format_fraction(w) for w in c.weight)
    return (
        f"({format_fraction(c.lower)},{format_fraction(c.upper)},"
        f"{format_fraction(c.mass)},{c.depth},[{weight}])"
    )


def to_text(mu: Measure1D) -> str:
    ac = ", ".join(
        f"({format_fraction(a)},{format_fraction(b)},"
        f"[{','.join(format_fraction(c) for c in coeffs)}])"
        for a, b, coeffs in mu.ac.pieces()
    )
    atoms = ", ".join(
        f"({format_fraction(x)},{format_fraction(w)})" for x, w in mu.atoms
    )
    cantor = ", ".join(_cantor_text(c) for c in mu.cantor)
    return f"ac: [{ac}]; atoms: [{atoms}]; cantor: [{cantor}]"


_TOKEN = re.compile(r"\s*(-?\d+(?:/\d+)?|[\[\](),])")


def _tokenize(text: str) -> List[str]:
    tokens = []
    position = 0
    text = text.strip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if not match:
            raise ScenarioParseError(
                f"unexpected text {text[position:]!r}", f"offset {position}"
            )
        tokens.append(match.group(1))
        position = match.end()
    return tokens


def parse_nested(text: str) -> list:
    """Parse a bracketed list of tuples/lists of rationals.

    Raises:
        ScenarioParseError: On unbalanced brackets, truncated input or
            trailing text
    """
    tokens = _tokenize(text)
    position = 0

    def next_token() -> str:
        nonlocal position
        if position >= len(tokens):
            raise ScenarioParseError("unexpected end of input", text.strip())
        token = tokens[position]
        position += 1
        return token

    def parse_value() -> Any:
        token = next_token()
        if token in "[(":
            closing = "]" if token == "[" else ")"
            items = []
            while True:
                if position >= len(tokens):
                    raise ScenarioParseError(
                        f"missing {closing!r}", text.strip()
                    )
                if tokens[position] == closing:
                    next_token()
                    return items
                items.append(parse_value())
                if position < len(tokens) and tokens[position] == ",":
                    next_token()
        if token in "]),":
            raise ScenarioParseError(f"unexpected {token!r}", text.strip())
        return to_fraction(token)

    value = parse_value()
    if position != len(tokens):
        raise ScenarioParseError("trailing text after value", text.strip())
    return value


def cantor_from_text(
    entry: Any, depth: Optional[int] = None
) -> CantorComponent:
    """A component from ``(a,b,m)``, ``(a,b,m,depth)`` or
    ``(a,b,m,depth,[weight])``; an explicit ``depth`` wins."""
    if not isinstance(entry, list) or not 3 <= len(entry) <= 5:
        raise ScenarioParseError(f"bad Cantor entry {entry!r}")
    a, b, mass = entry[:3]
    options: Dict[str, Any] = {}
    if len(entry) >= 4:
        if entry[3].denominator != 1:
            raise ScenarioParseError(f"Cantor depth {entry[3]} not integral")
        options["depth"] = int(entry[3])
    if len(entry) == 5:
        options["weight"] = tuple(entry[4])
    if depth is not None:
        options["depth"] = depth
    return CantorComponent(a, b, mass, **options)


def from_text(text: str, depth: Optional[int] = None) -> Measure1D:
    """Inverse of :func:`to_text`; ``depth`` overrides the stored caps."""
    sections = {}
    for part in text.split(";"):
        name, _, body = part.partition(":")
        sections[name.strip()] = parse_nested(body)
    try:
        pieces = sections["ac"]
        atoms = sections["atoms"]
        cantor = sections["cantor"]
    except KeyError as e:
        raise ScenarioParseError(f"missing section {e}") from None
    density = PiecewisePoly.from_pieces([(a, b, c) for a, b, c in pieces])
    return Measure1D(
        density,
        tuple((x, w) for x, w in atoms),
        tuple(cantor_from_text(entry, depth) for entry in cantor),
    )
