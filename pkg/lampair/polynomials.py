"""Exact polynomials and piecewise polynomials over rational breakpoints

Coefficients are tuples of Fractions in ascending powers with trailing
zeros stripped; the zero polynomial is the empty tuple. Real roots are
isolated with sympy over QQ: rational roots are returned exactly,
irrational ones as the midpoint of an isolating interval refined to the
requested tolerance.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
)

import sympy

from .errors import DegreeUnsupportedError
from .rationals import Number, sign, to_fraction

Coeffs = Tuple[Fraction, ...]

ROOT_TOLERANCE = Fraction(1, 10**12)

_X = sympy.Symbol("x")


def poly(*coefficients: Number) -> Coeffs:
    """Build a polynomial from ascending coefficients."""
    return normalize_coeffs(coefficients)


def normalize_coeffs(coefficients: Iterable[Number]) -> Coeffs:
    values = [to_fraction(c) for c in coefficients]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


def degree(p: Coeffs) -> int:
    return len(p) - 1


def poly_eval(p: Coeffs, x: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(p):
        result = result * x + c
    return result


def poly_add(p: Coeffs, q: Coeffs) -> Coeffs:
    size = max(len(p), len(q))
    return normalize_coeffs(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
        for i in range(size)
    )


def poly_neg(p: Coeffs) -> Coeffs:
    return tuple(-c for c in p)


def poly_sub(p: Coeffs, q: Coeffs) -> Coeffs:
    return poly_add(p, poly_neg(q))


def poly_scale(p: Coeffs, k: Number) -> Coeffs:
    k = to_fraction(k)
    return normalize_coeffs(c * k for c in p)


def poly_mul(p: Coeffs, q: Coeffs) -> Coeffs:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return normalize_coeffs(out)


def poly_derivative(p: Coeffs) -> Coeffs:
    return normalize_coeffs(i * p[i] for i in range(1, len(p)))


def poly_antiderivative(p: Coeffs) -> Coeffs:
    return normalize_coeffs(
        [Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)]
    )


def poly_integral(p: Coeffs, a: Fraction, b: Fraction) -> Fraction:
    primitive = poly_antiderivative(p)
    return poly_eval(primitive, b) - poly_eval(primitive, a)


def poly_compose(p: Coeffs, q: Coeffs) -> Coeffs:
    """Return p(q(x))."""
    result: Coeffs = ()
    for c in reversed(p):
        result = poly_add(poly_mul(result, q), (c,))
    return result


def poly_affine(p: Coeffs, scale: Fraction, shift: Fraction) -> Coeffs:
    """Return the polynomial t -> p(scale * t + shift)."""
    return poly_compose(p, normalize_coeffs((shift, scale)))


def sign_near(p: Coeffs, x: Fraction, side: int) -> int:
    """Sign of p on a punctured one-sided neighbourhood of x.

    Uses the first non-vanishing derivative at x, so the answer is exact.

    Args:
        p: Polynomial
        x: Point
        side: +1 for the right neighbourhood, -1 for the left

    Returns:
        -1, 0 or 1 (0 only for the zero polynomial)
    """
    derivative = p
    order = 0
    while derivative:
        value = poly_eval(derivative, x)
        if value != 0:
            return sign(value) * (side**order)
        derivative = poly_derivative(derivative)
        order += 1
    return 0


def _to_sympy(p: Coeffs) -> sympy.Poly:
    return sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(p)],
        _X,
        domain=sympy.QQ,
    )


def _from_sympy_rational(value: sympy.Rational) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def poly_roots(
    p: Coeffs,
    lo: Fraction,
    hi: Fraction,
    tolerance: Fraction = ROOT_TOLERANCE,
) -> List[Fraction]:
    """Distinct real roots of p strictly inside (lo, hi), sorted.

    Args:
        p: Non-zero polynomial
        lo: Left end of the open search interval
        hi: Right end of the open search interval
        tolerance: Width to which irrational roots are isolated

    Returns:
        Sorted list of roots; irrational roots are rational midpoints of
        isolating intervals no wider than ``tolerance``

    Raises:
        ValueError: If p is the zero polynomial
    """
    logger = logging.getLogger("lampair")
    if not p:
        raise ValueError("the zero polynomial has no isolated roots")
    if len(p) == 1:
        return []
    if len(p) == 2:
        root = -p[0] / p[1]
        return [root] if lo < root < hi else []

    roots = set()
    _, factors = _to_sympy(p).factor_list()
    eps = sympy.Rational(tolerance.numerator, tolerance.denominator)
    inf = sympy.Rational(lo.numerator, lo.denominator)
    sup = sympy.Rational(hi.numerator, hi.denominator)
    for factor, _multiplicity in factors:
        if factor.degree() == 1:
            a1, a0 = factor.all_coeffs()
            root = _from_sympy_rational(-a0 / a1)
            if lo < root < hi:
                roots.add(root)
            continue
        for (s, t), _m in factor.intervals(eps=eps, inf=inf, sup=sup):
            root = (_from_sympy_rational(s) + _from_sympy_rational(t)) / 2
            if lo < root < hi:
                logger.debug(
                    f"Irrational root of degree-{factor.degree()} factor "
                    f"approximated by {root}"
                )
                roots.add(root)
    return sorted(roots)


def lagrange_integral(
    nodes: Sequence[Fraction],
    values: Sequence[Fraction],
    lo: Fraction,
    hi: Fraction,
) -> Fraction:
    """Integrate over [lo, hi] the interpolating polynomial of the data.

    Exact whenever the sampled function is a polynomial of degree below
    ``len(nodes)``.
    """
    total = Fraction(0)
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        if yi == 0:
            continue
        basis: Coeffs = (Fraction(1),)
        for j, xj in enumerate(nodes):
            if j != i:
                basis = poly_scale(poly_mul(basis, (-xj, Fraction(1))),
                                   Fraction(1) / (xi - xj))
        total += yi * poly_integral(basis, lo, hi)
    return total


def interpolate_at(
    nodes: Sequence[Fraction], values: Sequence[Fraction], x: Fraction
) -> Fraction:
    """Neville evaluation of the interpolating polynomial at x."""
    table = list(values)
    n = len(nodes)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            table[i] = (
                (x - nodes[j]) * table[i] + (nodes[i] - x) * table[i + 1]
            ) / (nodes[i] - nodes[j])
    return table[0]


Piece = Tuple[Fraction, Fraction, Coeffs]


@dataclass(frozen=True)
class PiecewisePoly:
    """A function on [lower, upper] given by one polynomial per piece.

    Values at breakpoints are not part of the data; use the one-sided
    limits.
    """

    breakpoints: Tuple[Fraction, ...]
    coefficients: Tuple[Coeffs, ...]

    def __post_init__(self) -> None:
        breakpoints = tuple(to_fraction(b) for b in self.breakpoints)
        coefficients = tuple(normalize_coeffs(c) for c in self.coefficients)
        if len(breakpoints) < 2:
            raise ValueError("a piecewise polynomial needs two breakpoints")
        if len(coefficients) != len(breakpoints) - 1:
            raise ValueError(
                f"{len(breakpoints)} breakpoints need "
                f"{len(breakpoints) - 1} pieces, got {len(coefficients)}"
            )
        for left, right in zip(breakpoints, breakpoints[1:]):
            if not left < right:
                raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def constant(
        cls, lower: Number, upper: Number, value: Number = 0
    ) -> "PiecewisePoly":
        return cls((lower, upper), ((value,),))

    @classmethod
    def zero(cls, lower: Number, upper: Number) -> "PiecewisePoly":
        return cls((lower, upper), ((),))

    @classmethod
    def polynomial(
        cls, lower: Number, upper: Number, coefficients: Iterable[Number]
    ) -> "PiecewisePoly":
        return cls((lower, upper), (tuple(coefficients),))

    @classmethod
    def from_pieces(
        cls, pieces: Sequence[Tuple[Number, Number, Iterable[Number]]]
    ) -> "PiecewisePoly":
        """Build from contiguous ``(lo, hi, coefficients)`` triples."""
        if not pieces:
            raise ValueError("at least one piece is required")
        breakpoints = [to_fraction(pieces[0][0])]
        coefficients = []
        for lo, hi, coeffs in pieces:
            if to_fraction(lo) != breakpoints[-1]:
                raise ValueError(f"pieces are not contiguous at {lo}")
            breakpoints.append(to_fraction(hi))
            coefficients.append(tuple(coeffs))
        return cls(tuple(breakpoints), tuple(coefficients))

    @property
    def lower(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def upper(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.lower, self.upper

    @property
    def interior_breakpoints(self) -> Tuple[Fraction, ...]:
        return self.breakpoints[1:-1]

    @property
    def max_degree(self) -> int:
        return max(degree(c) for c in self.coefficients)

    def pieces(self) -> Iterator[Piece]:
        for i, coeffs in enumerate(self.coefficients):
            yield self.breakpoints[i], self.breakpoints[i + 1], coeffs

    def contains(self, x: Fraction) -> bool:
        return self.lower <= x <= self.upper

    def locate(self, x: Number, side: int = 1) -> int:
        """Index of the piece seen from x on the given side."""
        x = to_fraction(x)
        if not self.contains(x):
            raise ValueError(f"{x} outside [{self.lower}, {self.upper}]")
        last = len(self.coefficients) - 1
        for i in range(last + 1):
            lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
            if side > 0 and lo <= x < hi:
                return i
            if side <= 0 and lo < x <= hi:
                return i
        return last if side > 0 else 0

    def value(self, x: Number, side: int = 1) -> Fraction:
        x = to_fraction(x)
        return poly_eval(self.coefficients[self.locate(x, side)], x)

    def left_limit(self, x: Number) -> Fraction:
        return self.value(x, -1)

    def right_limit(self, x: Number) -> Fraction:
        return self.value(x, 1)

    def piece_at(self, x: Number, side: int = 1) -> Piece:
        i = self.locate(x, side)
        return self.breakpoints[i], self.breakpoints[i + 1], \
            self.coefficients[i]

    def is_zero(self) -> bool:
        return all(not c for c in self.coefficients)

    def is_continuous(self) -> bool:
        return all(
            self.left_limit(x) == self.right_limit(x)
            for x in self.interior_breakpoints
        )

    def refine(self, points: Iterable[Number]) -> "PiecewisePoly":
        """Insert breakpoints without changing the function."""
        extra = sorted(
            {
                to_fraction(p)
                for p in points
                if self.lower < to_fraction(p) < self.upper
            }
            - set(self.breakpoints)
        )
        if not extra:
            return self
        breakpoints = sorted(set(self.breakpoints) | set(extra))
        coefficients = []
        for lo, hi in zip(breakpoints, breakpoints[1:]):
            coefficients.append(self.coefficients[self.locate(lo, 1)])
        return PiecewisePoly(tuple(breakpoints), tuple(coefficients))

    def _aligned(
        self, other: "PiecewisePoly"
    ) -> Tuple[Tuple[Fraction, ...], List[Tuple[Coeffs, Coeffs]]]:
        if self.domain != other.domain:
            raise ValueError(
                f"domains differ: {self.domain} and {other.domain}"
            )
        a = self.refine(other.breakpoints)
        b = other.refine(self.breakpoints)
        return a.breakpoints, list(zip(a.coefficients, b.coefficients))

    def _combine(self, other: "PiecewisePoly", op) -> "PiecewisePoly":
        breakpoints, pairs = self._aligned(other)
        return PiecewisePoly(
            breakpoints, tuple(op(p, q) for p, q in pairs)
        )

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._combine(other, poly_add)

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._combine(other, poly_sub)

    def __mul__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._combine(other, poly_mul)

    def __neg__(self) -> "PiecewisePoly":
        return self.map_pieces(poly_neg)

    def scale(self, k: Number) -> "PiecewisePoly":
        k = to_fraction(k)
        return self.map_pieces(lambda c: poly_scale(c, k))

    def map_pieces(self, fn) -> "PiecewisePoly":
        return PiecewisePoly(
            self.breakpoints, tuple(fn(c) for c in self.coefficients)
        )

    def derivative(self) -> "PiecewisePoly":
        """Piecewise derivative; jumps at breakpoints are ignored."""
        return self.map_pieces(poly_derivative)

    def integral(
        self, lo: Optional[Number] = None, hi: Optional[Number] = None
    ) -> Fraction:
        a = self.lower if lo is None else max(to_fraction(lo), self.lower)
        b = self.upper if hi is None else min(to_fraction(hi), self.upper)
        total = Fraction(0)
        if a >= b:
            return total
        for left, right, coeffs in self.pieces():
            s, t = max(left, a), min(right, b)
            if s < t and coeffs:
                total += poly_integral(coeffs, s, t)
        return total

    def restrict_to(self, lo: Number, hi: Number) -> "PiecewisePoly":
        """The same function on the sub-interval [lo, hi]."""
        lo, hi = to_fraction(lo), to_fraction(hi)
        if not (self.lower <= lo < hi <= self.upper):
            raise ValueError(f"[{lo}, {hi}] not inside {self.domain}")
        refined = self.refine((lo, hi))
        pieces = [
            (a, b, c) for a, b, c in refined.pieces() if lo <= a and b <= hi
        ]
        return PiecewisePoly.from_pieces(pieces)

    def masked(
        self, intervals: Iterable[Tuple[Fraction, Fraction]]
    ) -> "PiecewisePoly":
        """Zero outside the union of the given open intervals."""
        intervals = [
            (max(a, self.lower), min(b, self.upper)) for a, b in intervals
        ]
        intervals = [(a, b) for a, b in intervals if a < b]
        cuts = [p for ab in intervals for p in ab]
        refined = self.refine(cuts)
        coefficients = []
        for lo, hi, coeffs in refined.pieces():
            inside = any(a <= lo and hi <= b for a, b in intervals)
            coefficients.append(coeffs if inside else ())
        return PiecewisePoly(refined.breakpoints, tuple(coefficients))

    def normalized(self) -> "PiecewisePoly":
        """Merge neighbouring pieces that carry the same polynomial."""
        breakpoints = [self.breakpoints[0]]
        coefficients: List[Coeffs] = []
        for lo, hi, coeffs in self.pieces():
            if coefficients and coefficients[-1] == coeffs:
                breakpoints[-1] = hi
            else:
                coefficients.append(coeffs)
                breakpoints.append(hi)
        return PiecewisePoly(tuple(breakpoints), tuple(coefficients))

    def roots(
        self, level: Number = 0, tolerance: Fraction = ROOT_TOLERANCE
    ) -> List[Fraction]:
        """Points strictly inside pieces where a piece crosses ``level``.

        Pieces identically equal to ``level`` contribute nothing.
        """
        level = to_fraction(level)
        found = []
        for lo, hi, coeffs in self.pieces():
            shifted = poly_sub(coeffs, (level,))
            if shifted:
                found.extend(poly_roots(shifted, lo, hi, tolerance))
        return sorted(set(found))

    def signed_pieces(
        self, tolerance: Fraction = ROOT_TOLERANCE
    ) -> Iterator[Tuple[Fraction, Fraction, Coeffs, int]]:
        """Sub-pieces of constant sign: ``(lo, hi, coefficients, sign)``."""
        refined = self.refine(self.roots(0, tolerance))
        for lo, hi, coeffs in refined.pieces():
            yield lo, hi, coeffs, sign(poly_eval(coeffs, (lo + hi) / 2))

    def abs(self, tolerance: Fraction = ROOT_TOLERANCE) -> "PiecewisePoly":
        pieces = [
            (lo, hi, poly_neg(c) if s < 0 else c)
            for lo, hi, c, s in self.signed_pieces(tolerance)
        ]
        return PiecewisePoly.from_pieces(pieces)

    def positive_part(
        self, tolerance: Fraction = ROOT_TOLERANCE
    ) -> "PiecewisePoly":
        pieces = [
            (lo, hi, c if s > 0 else ())
            for lo, hi, c, s in self.signed_pieces(tolerance)
        ]
        return PiecewisePoly.from_pieces(pieces)

    def sup_abs(self, tolerance: Fraction = ROOT_TOLERANCE) -> Fraction:
        """Supremum of |p| over the domain.

        Exact when every critical point is rational; otherwise an upper
        bound obtained from the isolating interval of each irrational
        critical point.
        """
        best = Fraction(0)
        for lo, hi, coeffs in self.pieces():
            low, high = poly_range(coeffs, lo, hi, tolerance)
            best = max(best, abs(low), abs(high))
        return best

    def value_range(
        self, tolerance: Fraction = ROOT_TOLERANCE
    ) -> Tuple[Fraction, Fraction]:
        """(inf, sup) over the domain, padded like :meth:`sup_abs`."""
        ranges = [
            poly_range(coeffs, lo, hi, tolerance)
            for lo, hi, coeffs in self.pieces()
        ]
        return min(r[0] for r in ranges), max(r[1] for r in ranges)

    def primitive(self) -> "PiecewisePoly":
        """The continuous antiderivative vanishing at ``lower``."""
        pieces = []
        offset = Fraction(0)
        for lo, hi, coeffs in self.pieces():
            anti = poly_antiderivative(coeffs)
            shift = offset - poly_eval(anti, lo)
            pieces.append((lo, hi, poly_add(anti, (shift,))))
            offset += poly_integral(coeffs, lo, hi) if coeffs else 0
        return PiecewisePoly.from_pieces(pieces)


def step_function(
    lower: Number, upper: Number, at: Number, height: Number
) -> PiecewisePoly:
    """``height`` on (at, upper), zero on (lower, at)."""
    lower, upper, at = to_fraction(lower), to_fraction(upper), to_fraction(at)
    if at <= lower:
        return PiecewisePoly.constant(lower, upper, height)
    if at >= upper:
        return PiecewisePoly.zero(lower, upper)
    return PiecewisePoly((lower, at, upper), ((), (height,)))


def poly_range(
    p: Coeffs,
    lo: Fraction,
    hi: Fraction,
    tolerance: Fraction = ROOT_TOLERANCE,
) -> Tuple[Fraction, Fraction]:
    """(min, max) of p over [lo, hi].

    Critical points approximated by an isolating midpoint widen the
    range by a slope bound times the tolerance.
    """
    values = [poly_eval(p, lo), poly_eval(p, hi)]
    slope = poly_derivative(p)
    if not slope:
        return min(values), max(values)
    low, high = min(values), max(values)
    radius = max(abs(lo), abs(hi), Fraction(1))
    slope_bound = sum(abs(c) * radius**i for i, c in enumerate(slope))
    for x in poly_roots(slope, lo, hi, tolerance):
        value = poly_eval(p, x)
        pad = slope_bound * tolerance if poly_eval(slope, x) != 0 else 0
        low = min(low, value - pad)
        high = max(high, value + pad)
    return low, high


def exact_crossings(
    p: Coeffs, level: Fraction, lo: Fraction, hi: Fraction
) -> List[Fraction]:
    """Points strictly inside (lo, hi) where p equals ``level``.

    Raises:
        DegreeUnsupportedError: If a crossing is irrational
    """
    shifted = poly_sub(p, (level,))
    if not shifted:
        return []
    roots = poly_roots(shifted, lo, hi)
    for root in roots:
        if poly_eval(shifted, root) != 0:
            raise DegreeUnsupportedError(
                f"irrational crossing of level {level} near {float(root)}"
            )
    return roots


def to_sympy_expr(p: Coeffs, symbol: sympy.Symbol) -> sympy.Expr:
    return sum(
        (
            sympy.Rational(c.numerator, c.denominator) * symbol**i
            for i, c in enumerate(p)
        ),
        sympy.Integer(0),
    )


def from_sympy_expr(expr: sympy.Expr, symbol: sympy.Symbol) -> Coeffs:
    """Coefficients of a polynomial sympy expression with rational terms."""
    terms = sympy.Poly(sympy.expand(expr), symbol).all_coeffs()
    return normalize_coeffs(
        _from_sympy_rational(c) for c in reversed(terms)
    )
