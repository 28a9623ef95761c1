"""Middle-thirds Cantor measures mapped affinely onto an interval

The Cantor function has an exact rational value at every rational point
(the ternary expansion is eventually periodic), and so does every
partial polynomial moment of the Cantor measure. A component may carry a
polynomial weight, which is how A·D^c u is represented when the field A
slopes across a staircase. Restriction to an interval and integration
of functions that break inside the support go through the self-similar
subdivision, stopping at ``depth``.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .polynomials import (
    Coeffs,
    PiecewisePoly,
    normalize_coeffs,
    poly_add,
    poly_affine,
    poly_eval,
    poly_mul,
    poly_roots,
    poly_scale,
)
from .rationals import Number, sign, to_fraction

DEFAULT_DEPTH = 20

Support = Tuple[Fraction, Fraction]
Matrix = List[List[Fraction]]

logger = logging.getLogger("lampair")


def cantor_function(t: Number) -> Fraction:
    """Exact value of the Cantor–Vitali function at a rational point."""
    t = to_fraction(t)
    if t <= 0:
        return Fraction(0)
    if t >= 1:
        return Fraction(1)
    value = Fraction(0)
    scale = Fraction(1, 2)
    seen: Dict[Fraction, Tuple[Fraction, Fraction]] = {}
    x = t
    while True:
        if x in seen:
            # periodic tail: geometric series over the period
            start_value, start_scale = seen[x]
            ratio = scale / start_scale
            return start_value + (value - start_value) / (1 - ratio)
        seen[x] = (value, scale)
        x3 = 3 * x
        digit = int(x3)
        x = x3 - digit
        if digit == 1:
            return value + scale
        if digit == 2:
            value += scale
        scale /= 2


def in_cantor_set(t: Number) -> bool:
    """Whether a rational point of [0, 1] lies in the middle-thirds set."""
    t = to_fraction(t)
    if t < 0 or t > 1:
        return False
    if t in (0, 1):
        return True
    seen = set()
    x = t
    while x not in seen:
        seen.add(x)
        x3 = 3 * x
        digit = int(x3)
        x = x3 - digit
        if digit == 1:
            # ...1000 = ...0222 is an endpoint of a removed gap
            return x == 0
    return True


@lru_cache(maxsize=None)
def cantor_moment(n: int) -> Fraction:
    """Exact ∫ t^n dC(t) for the Cantor probability measure on [0, 1]."""
    if n == 0:
        return Fraction(1)
    total = sum(
        comb(n, k) * 2 ** (n - k) * cantor_moment(k) for k in range(n)
    )
    return Fraction(total, 2 * (3**n - 1))


def _identity(size: int) -> Matrix:
    return [
        [Fraction(int(i == j)) for j in range(size)] for i in range(size)
    ]


def _mat_mul(p: Matrix, q: Matrix) -> Matrix:
    size = len(p)
    return [
        [sum((p[i][k] * q[k][j] for k in range(size)), Fraction(0))
         for j in range(size)]
        for i in range(size)
    ]


def _mat_vec(p: Matrix, v: Sequence[Fraction]) -> List[Fraction]:
    return [
        sum((row[k] * v[k] for k in range(len(v))), Fraction(0))
        for row in p
    ]


def partial_moments(t: Number, n: int) -> Tuple[Fraction, ...]:
    """Exact ∫_[0, t] s^k dC(s) for k = 0..n.

    Each ternary digit of t maps the moment vector at 3t − digit
    affinely onto the one at t; the eventually periodic expansion closes
    the recursion with one triangular solve.
    """
    t = to_fraction(t)
    size = n + 1
    if t <= 0:
        return (Fraction(0),) * size
    if t >= 1:
        return tuple(cantor_moment(k) for k in range(size))

    first_half = [cantor_moment(k) / (2 * 3**k) for k in range(size)]
    left = [
        [Fraction(int(i == j), 2 * 3**i) for j in range(size)]
        for i in range(size)
    ]
    right = [
        [
            Fraction(comb(i, j) * 2 ** (i - j), 2 * 3**i) if j <= i
            else Fraction(0)
            for j in range(size)
        ]
        for i in range(size)
    ]

    # moments(t) = offset + linear · moments(x) for the current point x
    offset = [Fraction(0)] * size
    linear = _identity(size)
    seen: Dict[Fraction, Tuple[List[Fraction], Matrix]] = {}
    x = t
    while True:
        if x == 0:
            return tuple(offset)
        if x in seen:
            start_offset, start_linear = seen[x]
            system = [
                [start_linear[i][j] - linear[i][j] for j in range(size)]
                for i in range(size)
            ]
            rhs = [offset[i] - start_offset[i] for i in range(size)]
            # lower triangular with non-zero diagonal
            solution: List[Fraction] = []
            for i in range(size):
                known = sum(
                    (system[i][j] * solution[j] for j in range(i)),
                    Fraction(0),
                )
                solution.append((rhs[i] - known) / system[i][i])
            tail = _mat_vec(start_linear, solution)
            return tuple(start_offset[i] + tail[i] for i in range(size))
        seen[x] = (list(offset), [list(row) for row in linear])
        x3 = 3 * x
        digit = int(x3)
        x = x3 - digit
        if digit == 1:
            tail = _mat_vec(linear, first_half)
            return tuple(offset[i] + tail[i] for i in range(size))
        if digit == 2:
            shift = _mat_vec(linear, first_half)
            offset = [offset[i] + shift[i] for i in range(size)]
            linear = _mat_mul(linear, right)
        else:
            linear = _mat_mul(linear, left)


def _level(ratio: Fraction) -> Optional[int]:
    """k with ratio = 3^k, or None."""
    if ratio.denominator != 1 or ratio.numerator < 1:
        return None
    level = 0
    power = 1
    while power < ratio.numerator:
        power *= 3
        level += 1
    return level if power == ratio.numerator else None


def is_cantor_subset(outer: Support, inner: Support) -> bool:
    """Whether the Cantor set on ``inner`` is a self-similar piece of
    the Cantor set on ``outer``."""
    a, b = outer
    c, d = inner
    if c < a or d > b:
        return False
    level = _level((b - a) / (d - c))
    if level is None:
        return False
    offset = (c - a) / (d - c)
    if offset.denominator != 1:
        return False
    index = offset.numerator
    for _ in range(level):
        index, digit = divmod(index, 3)
        if digit == 1:
            return False
    return index == 0


@dataclass(frozen=True)
class CantorComponent:
    """The measure ``mass · weight(x) · C`` where C is the Cantor
    probability measure on [lower, upper].

    ``weight`` is a polynomial, 1 for a plain component; canonical
    components have weight 1 at the support midpoint. ``depth`` caps
    self-similar subdivision in restriction and quadrature; it is not
    part of the measure's identity.
    """

    lower: Fraction
    upper: Fraction
    mass: Fraction
    depth: int = field(default=DEFAULT_DEPTH, compare=False)
    weight: Coeffs = (Fraction(1),)

    def __post_init__(self) -> None:
        lower = to_fraction(self.lower)
        upper = to_fraction(self.upper)
        if not lower < upper:
            raise ValueError(f"empty Cantor support [{lower}, {upper}]")
        if self.depth <= 0:
            raise ValueError("depth cap must be positive")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "mass", to_fraction(self.mass))
        object.__setattr__(self, "weight", normalize_coeffs(self.weight))

    @property
    def length(self) -> Fraction:
        return self.upper - self.lower

    @property
    def support(self) -> Support:
        return self.lower, self.upper

    @property
    def is_weighted(self) -> bool:
        return self.weight != (Fraction(1),)

    @property
    def density(self) -> Coeffs:
        """mass · weight, the polynomial multiplying C."""
        return poly_scale(self.weight, self.mass)

    @property
    def total(self) -> Fraction:
        return self.integrate((Fraction(1),))

    def local(self, x: Fraction) -> Fraction:
        return (x - self.lower) / self.length

    def staircase(self, x: Number) -> Fraction:
        """Cumulative mass on (-inf, x]."""
        t = self.local(to_fraction(x))
        if not self.is_weighted:
            return self.mass * cantor_function(t)
        local = poly_affine(self.weight, self.length, self.lower)
        moments = partial_moments(t, len(local) - 1)
        return self.mass * sum(
            (c * m for c, m in zip(local, moments)), Fraction(0)
        )

    def mass_between(self, a: Number, b: Number) -> Fraction:
        a, b = to_fraction(a), to_fraction(b)
        if a >= b:
            return Fraction(0)
        return self.staircase(b) - self.staircase(a)

    def contains(self, x: Number) -> bool:
        return in_cantor_set(self.local(to_fraction(x)))

    def is_piece_end(self, x: Number) -> bool:
        """Whether x ends one of the self-similar pieces of the support."""
        t = self.local(to_fraction(x))
        if not in_cantor_set(t):
            return False
        return _level(Fraction(t.denominator)) is not None

    def scaled(self, k: Number) -> "CantorComponent":
        return replace(self, mass=self.mass * to_fraction(k))

    def children(self) -> Tuple["CantorComponent", "CantorComponent"]:
        third = self.length / 3
        half = self.mass / 2
        return (
            replace(self, upper=self.lower + third, mass=half),
            replace(self, lower=self.upper - third, mass=half),
        )

    def piece(self, lower: Number, upper: Number) -> "CantorComponent":
        """The restriction to the self-similar piece on [lower, upper]."""
        lower, upper = to_fraction(lower), to_fraction(upper)
        if not is_cantor_subset(self.support, (lower, upper)):
            raise ValueError(
                f"[{lower}, {upper}] is not a piece of the Cantor set on "
                f"[{self.lower}, {self.upper}]"
            )
        level = _level(self.length / (upper - lower)) or 0
        return replace(
            self, lower=lower, upper=upper, mass=self.mass / 2**level
        )

    def weighted_by(
        self, f: PiecewisePoly, level: int = 0
    ) -> List["CantorComponent"]:
        """f · self, split where f breaks inside the support.

        Where the depth cap stops the split, the piece takes the
        polynomial of f at its midpoint.
        """
        inner = [
            x for x in f.interior_breakpoints if self.lower < x < self.upper
        ]
        if inner and level < self.depth:
            return [
                piece
                for child in self.children()
                for piece in child.weighted_by(f, level + 1)
            ]
        if inner:
            logger.debug(
                f"Cantor weighting depth cap reached on "
                f"[{self.lower}, {self.upper}]"
            )
        coefficients = f.piece_at((self.lower + self.upper) / 2)[2]
        return [replace(self, weight=poly_mul(self.weight, coefficients))]

    def integrate(self, coefficients: Coeffs) -> Fraction:
        """Exact ∫ p dμ for a polynomial p."""
        local = poly_affine(
            poly_mul(self.weight, coefficients), self.length, self.lower
        )
        return self.mass * sum(
            (c * cantor_moment(n) for n, c in enumerate(local)), Fraction(0)
        )

    def integrate_piecewise(
        self, phi: PiecewisePoly, level: int = 0
    ) -> Fraction:
        """∫ φ dμ, exact on self-similar pieces where φ is one polynomial."""
        inner = [
            x for x in phi.interior_breakpoints if self.lower < x < self.upper
        ]
        middle = (self.lower + self.upper) / 2
        if not inner:
            return self.integrate(phi.piece_at(middle)[2])
        if level >= self.depth:
            logger.debug(
                f"Cantor quadrature depth cap reached on "
                f"[{self.lower}, {self.upper}]"
            )
            return self.total * phi.value(middle)
        return sum(
            (child.integrate_piecewise(phi, level + 1)
             for child in self.children()),
            Fraction(0),
        )

    def restricted_to(
        self,
        intervals: Sequence[Tuple[Fraction, Fraction]],
        level: int = 0,
    ) -> List["CantorComponent"]:
        """Restriction to a union of disjoint open intervals."""
        if any(a <= self.lower and self.upper <= b for a, b in intervals):
            return [self]
        if all(b <= self.lower or a >= self.upper for a, b in intervals):
            return []
        if level >= self.depth:
            partial = sum(
                (self.mass_between(max(a, self.lower), min(b, self.upper))
                 for a, b in intervals),
                Fraction(0),
            )
            logger.warning(
                f"Cantor restriction truncated at depth {self.depth} on "
                f"[{self.lower}, {self.upper}]"
            )
            total = self.total
            return [self.scaled(partial / total)] if partial and total else []
        out: List[CantorComponent] = []
        for child in self.children():
            out.extend(child.restricted_to(intervals, level + 1))
        return out


def _changes_sign(p: Coeffs, lower: Fraction, upper: Fraction) -> bool:
    if len(p) < 2:
        return False
    marks = [lower, *poly_roots(p, lower, upper), upper]
    samples = [lower, upper] + [
        (x + y) / 2 for x, y in zip(marks, marks[1:])
    ]
    return len({sign(poly_eval(p, x)) for x in samples} - {0}) > 1


def _path_pieces(outer: Support, inner: Support) -> List[Tuple[Support, int]]:
    """Pieces of the Cantor set on ``outer`` that partition it around
    the piece ``inner``, with their subdivision levels."""
    pieces: List[Tuple[Support, int]] = []
    a, b = outer
    level = 0
    while (a, b) != inner:
        third = (b - a) / 3
        left, right = (a, a + third), (b - third, b)
        level += 1
        if is_cantor_subset(left, inner):
            pieces.append((right, level))
            a, b = left
        else:
            pieces.append((left, level))
            a, b = right
    pieces.append(((a, b), level))
    return pieces


def _common_piece(first: Support, second: Support) -> Optional[Support]:
    if is_cantor_subset(first, second):
        return second
    if is_cantor_subset(second, first):
        return first
    overlap = (max(first[0], second[0]), min(first[1], second[1]))
    if (
        overlap[0] < overlap[1]
        and is_cantor_subset(first, overlap)
        and is_cantor_subset(second, overlap)
    ):
        return overlap
    return None


class _Densities:
    """Support → polynomial multiplying the Cantor probability measure."""

    def __init__(self) -> None:
        self.density: Dict[Support, Coeffs] = {}
        self.depth: Dict[Support, int] = {}
        self.level: Dict[Support, int] = {}

    def add(
        self, support: Support, p: Coeffs, depth: int, level: int = 0
    ) -> None:
        self.density[support] = poly_add(self.density.get(support, ()), p)
        self.depth[support] = max(self.depth.get(support, 0), depth)
        self.level[support] = max(self.level.get(support, 0), level)

    def pop(self, support: Support) -> Tuple[Coeffs, int, int]:
        return (
            self.density.pop(support),
            self.depth[support],
            self.level[support],
        )

    def live(self) -> List[Support]:
        return sorted(s for s, p in self.density.items() if p)

    def subdivide(self, support: Support, target: Support) -> None:
        p, depth, level = self.pop(support)
        for piece, steps in _path_pieces(support, target):
            self.add(piece, poly_scale(p, Fraction(1, 2**steps)), depth,
                     level + steps)

    def refine_overlaps(self) -> None:
        changed = True
        while changed:
            changed = False
            supports = self.live()
            for i, first in enumerate(supports):
                for second in supports[i + 1:]:
                    if second[0] >= first[1]:
                        break
                    target = _common_piece(first, second)
                    if target is None:
                        continue
                    for support in (first, second):
                        if support != target:
                            self.subdivide(support, target)
                    changed = True
                    break
                if changed:
                    break

    def split_signs(self) -> None:
        while True:
            pending = [
                s for s in self.live()
                if _changes_sign(self.density[s], *s)
                and self.level[s] < self.depth[s]
            ]
            if not pending:
                return
            a, b = pending[0]
            p, depth, level = self.pop((a, b))
            third = (b - a) / 3
            for child in ((a, a + third), (b - third, b)):
                self.add(child, poly_scale(p, Fraction(1, 2)), depth,
                         level + 1)

    def merge_siblings(self) -> None:
        changed = True
        while changed:
            changed = False
            for a, b in self.live():
                p = self.density[(a, b)]
                length = b - a
                sibling = (a + 2 * length, a + 3 * length)
                if self.density.get(sibling) != p:
                    continue
                parent = (a, a + 3 * length)
                merged = poly_scale(p, 2)
                if _changes_sign(merged, *parent):
                    continue
                _, depth, level = self.pop((a, b))
                _, other_depth, other_level = self.pop(sibling)
                self.add(parent, merged, max(depth, other_depth),
                         max(min(level, other_level) - 1, 0))
                changed = True
                break


def _canonical(support: Support, p: Coeffs, depth: int) -> CantorComponent:
    a, b = support
    if len(p) == 1:
        return CantorComponent(a, b, p[0], depth)
    scale = next(
        (v for v in (poly_eval(p, (a + b) / 2), poly_eval(p, a),
                     poly_eval(p, b)) if v),
        Fraction(1),
    )
    return CantorComponent(a, b, scale, depth, poly_scale(p, 1 / scale))


def normalize_components(
    components: Iterable[CantorComponent],
) -> Tuple[CantorComponent, ...]:
    """Canonical form of a sum of Cantor components.

    Supports where one Cantor set is a self-similar piece of the other,
    or where both share their overlap as a piece, are refined into
    common pieces and summed. Weights that change sign on their support
    are subdivided down to the depth cap, equal siblings are merged back
    into their parent, and each weight is scaled to 1 at the support
    midpoint, so the sign of ``mass`` is the sign of the component.
    Overlapping supports that share no piece are kept apart and treated
    as mutually singular.
    """
    table = _Densities()
    for c in components:
        table.add(c.support, c.density, c.depth)
    table.refine_overlaps()
    table.split_signs()
    table.merge_siblings()
    return tuple(
        _canonical(support, table.density[support], table.depth[support])
        for support in table.live()
    )
