"""Seeded random corpus for the property tests

Everything lives on (-2, 2) with breakpoints on the quarter grid, linear
pieces with integer intercepts and half-integer slopes. Jumps are then
multiples of 1/8, crossings of rational levels are rational, and every
ramp of width at most 1/8 stays clear of the other breakpoints.
"""

import random
from fractions import Fraction
from typing import List, Sequence, Tuple

from lampair.bv import LambdaSelector, PiecewiseBV
from lampair.cantor import CantorComponent
from lampair.fields import DMField1D
from lampair.measures import Measure1D
from lampair.polynomials import PiecewisePoly

LOWER = Fraction(-2)
UPPER = Fraction(2)
DOMAIN = (LOWER, UPPER)
GRID = [Fraction(k, 4) for k in range(-7, 8)]
SLOPES = [Fraction(k, 2) for k in range(-2, 3)]
SELECTOR_VALUES = [Fraction(k, 4) for k in range(5)]

# ramps of width 1/8 or less never reach another breakpoint
SCHEDULE = (8, 16, 32, 64, 128, 256)

# two families of nested Cantor supports; within a family every support is
# a union of the cells below
CANTOR_FAMILIES = ((Fraction(0), Fraction(1)), (Fraction(-7, 4), Fraction(-1)))
CANTOR_SUPPORTS = (
    (Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(1, 3)),
    (Fraction(2, 3), Fraction(1)),
    (Fraction(2, 9), Fraction(1, 3)),
    (Fraction(-7, 4), Fraction(-1)),
    (Fraction(-5, 4), Fraction(-1)),
)
CANTOR_CELLS = (
    (Fraction(0), Fraction(1, 9)),
    (Fraction(2, 9), Fraction(1, 3)),
    (Fraction(2, 3), Fraction(7, 9)),
    (Fraction(8, 9), Fraction(1)),
    (Fraction(-7, 4), Fraction(-3, 2)),
    (Fraction(-5, 4), Fraction(-1)),
)
HALF_STEPS = [Fraction(k, 2) for k in (-3, -2, -1, 1, 2, 3)]


def seeds(count: int = 100) -> List[int]:
    return list(range(count))


def breakpoints(rng: random.Random, most: int = 3) -> List[Fraction]:
    inner = sorted(rng.sample(GRID, rng.randint(1, most)))
    return [LOWER, *inner, UPPER]


def linear_piece(rng: random.Random) -> Tuple[Fraction, Fraction]:
    return Fraction(rng.randint(-2, 2)), rng.choice(SLOPES)


def function(rng: random.Random, most: int = 3) -> PiecewiseBV:
    """Piecewise linear, usually with jumps."""
    points = breakpoints(rng, most)
    return PiecewiseBV.from_pieces(
        (lo, hi, linear_piece(rng)) for lo, hi in zip(points, points[1:])
    )


def continuous_function(rng: random.Random, most: int = 3) -> PiecewiseBV:
    """Piecewise linear interpolation of integer values on the grid."""
    points = breakpoints(rng, most)
    values = [Fraction(rng.randint(-2, 2)) for _ in points]
    pieces = []
    for (lo, hi), (a, b) in zip(
        zip(points, points[1:]), zip(values, values[1:])
    ):
        slope = (b - a) / (hi - lo)
        pieces.append((lo, hi, (a - slope * lo, slope)))
    return PiecewiseBV.from_pieces(pieces)


def field(rng: random.Random, most: int = 3) -> DMField1D:
    return DMField1D(function(rng, most))


def continuous_field(rng: random.Random, most: int = 3) -> DMField1D:
    return DMField1D(continuous_function(rng, most))


def selector(rng: random.Random, points: Sequence[Fraction]) -> LambdaSelector:
    """A random default with random overrides on some of the points."""
    overrides = {
        x: rng.choice(SELECTOR_VALUES) for x in points if rng.random() < 0.5
    }
    return LambdaSelector.from_mapping(rng.choice(SELECTOR_VALUES), overrides)


def phi(rng: random.Random) -> PiecewisePoly:
    """A polynomial of degree at most 2 on the whole domain."""
    coefficients = [Fraction(rng.randint(-3, 3), 2) for _ in range(3)]
    return PiecewisePoly.polynomial(LOWER, UPPER, coefficients)


def nonnegative_phi(rng: random.Random) -> PiecewisePoly:
    """a + b(x − m)² with a, b ≥ 0."""
    a = Fraction(rng.randint(0, 4), 2)
    b = Fraction(rng.randint(0, 2), 4)
    m = rng.choice(GRID)
    if a == 0 and b == 0:
        a = Fraction(1)
    return PiecewisePoly.polynomial(
        LOWER, UPPER, (a + b * m * m, -2 * b * m, b)
    )


def hat(center: Fraction, half_width: Fraction = Fraction(1)) -> PiecewisePoly:
    """A continuous tent of height 1, clipped to the domain."""
    lo = max(LOWER, center - half_width)
    hi = min(UPPER, center + half_width)
    pieces = []
    if lo > LOWER:
        pieces.append((LOWER, lo, ()))
    pieces.append((lo, center, (1 - center / half_width, 1 / half_width)))
    pieces.append((center, hi, (1 + center / half_width, -1 / half_width)))
    if hi < UPPER:
        pieces.append((hi, UPPER, ()))
    return PiecewisePoly.from_pieces(pieces)


def interval(rng: random.Random) -> Tuple[Fraction, Fraction]:
    c, d = sorted(rng.sample(GRID, 2))
    return c, d


def triple(seed: int) -> Tuple[DMField1D, PiecewiseBV, LambdaSelector]:
    """(A, u, λ) with λ overriding on points of J_u."""
    rng = random.Random(seed)
    A = field(rng)
    u = function(rng)
    lam = selector(rng, [*A.profile.jump_points, *u.jump_points])
    return A, u, lam


def measure(rng: random.Random) -> Measure1D:
    """Linear density, up to two atoms and up to three Cantor parts,
    often on nested supports."""
    points = breakpoints(rng)
    density = PiecewisePoly.from_pieces(
        [(lo, hi, linear_piece(rng)) for lo, hi in zip(points, points[1:])]
    )
    atoms = tuple(
        (x, rng.choice(HALF_STEPS))
        for x in rng.sample(GRID, rng.randint(0, 2))
    )
    cantor = tuple(
        CantorComponent(a, b, rng.choice(HALF_STEPS))
        for a, b in rng.sample(CANTOR_SUPPORTS, rng.randint(0, 3))
    )
    return Measure1D(density, atoms, cantor)


def staircase_field(rng: random.Random) -> DMField1D:
    """Linear outside one Cantor support, constant plus a staircase on it."""
    a, b = rng.choice(CANTOR_SUPPORTS)
    smooth = PiecewisePoly.from_pieces(
        [
            (LOWER, a, linear_piece(rng)),
            (a, b, (Fraction(rng.randint(-2, 2)),)),
            (b, UPPER, linear_piece(rng)),
        ]
    )
    return DMField1D(
        PiecewiseBV(smooth, (CantorComponent(a, b, rng.choice(HALF_STEPS)),))
    )
