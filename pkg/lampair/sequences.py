"""Approximating sequences and limits along them

One-sided sequences replace every jump of u by a linear ramp of width
1/n. The upper sequence lays the ramp on the low side of the jump, so
u_n reaches u^+ at the jump point; the lower sequence mirrors it. Ramp
widths shrink to half the distance to the next jump when 1/n is too
wide.

Quantities sampled along a sequence are polynomial in h = 1/n once n is
large enough, so limits are read off by interpolating in h and
evaluating at 0. The fit is certified by an extra node; without one
the last estimate is returned with an uncertainty.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .bv import PiecewiseBV, l1_distance, variation
from .errors import NonStrictSequenceError
from .polynomials import PiecewisePoly, interpolate_at
from .rationals import Number, format_fraction, to_fraction

UPPER = "upper"
LOWER = "lower"


def _ramp_width(u: PiecewiseBV, x: Fraction, n: int) -> Fraction:
    others = [abs(y - x) / 2 for y in u.jump_points if y != x]
    others += [x - u.lower, u.upper - x]
    return min([Fraction(1, n), *others])


def _ramp(
    u: PiecewiseBV, x: Fraction, start: Fraction, stop: Fraction,
    at_start: Fraction, at_stop: Fraction,
) -> PiecewisePoly:
    """Linear from ``at_start`` to ``at_stop`` on (start, stop), else 0."""
    slope = (at_stop - at_start) / (stop - start)
    coeffs = (at_start - slope * start, slope)
    points = sorted({u.lower, start, stop, u.upper})
    pieces = [
        (lo, hi, coeffs if (lo, hi) == (start, stop) else ())
        for lo, hi in zip(points, points[1:])
    ]
    return PiecewisePoly.from_pieces(pieces)


def one_sided_sequence(
    u: PiecewiseBV, direction: str, n: int
) -> PiecewiseBV:
    """The n-th member of the upper or lower one-sided sequence.

    Raises:
        ValueError: If n is not positive or the direction is unknown
        UnsupportedConstructError: If u carries a Cantor staircase
    """
    if n <= 0:
        raise ValueError(f"sequence index must be positive, got {n}")
    if direction not in (UPPER, LOWER):
        raise ValueError(f"unknown direction {direction!r}")
    u.require_no_staircases("one-sided approximation")
    smooth = u.smooth
    for x, left, right in u.jumps():
        w = _ramp_width(u, x, n)
        rise = right - left
        upward = rise > 0
        if (direction == UPPER) == upward:
            # ramp on the left side, meeting the right value at x
            smooth = smooth + _ramp(u, x, x - w, x, Fraction(0), rise)
        else:
            smooth = smooth + _ramp(u, x, x, x + w, -rise, Fraction(0))
    result = PiecewiseBV(smooth)
    if not result.is_continuous():
        raise AssertionError(f"ramps left a jump in {result.jump_points}")
    return result


def spike_sequence(
    lower: Number, upper: Number, center: Number, n: int,
    height: Number = 1,
) -> PiecewiseBV:
    """height·max{1 − n|x − center|, 0}: weak* but not strict to 0."""
    lower, upper = to_fraction(lower), to_fraction(upper)
    center, height = to_fraction(center), to_fraction(height)
    if n <= 0:
        raise ValueError(f"sequence index must be positive, got {n}")
    w = Fraction(1, n)
    points = sorted(
        {lower, upper}
        | {p for p in (center - w, center, center + w) if lower < p < upper}
    )
    pieces = []
    for lo, hi in zip(points, points[1:]):
        if center - w <= lo and hi <= center:
            coeffs = (height * (1 - n * center), height * n)
        elif center <= lo and hi <= center + w:
            coeffs = (height * (1 + n * center), -height * n)
        else:
            coeffs = ()
        pieces.append((lo, hi, coeffs))
    return PiecewiseBV.from_pieces(pieces)


def build_sequence(
    u: PiecewiseBV, kind: str, indices: Iterable[int], **options
) -> List[Tuple[int, PiecewiseBV]]:
    """[(n, u_n)] for a named sequence kind.

    ``upper``/``lower``: one-sided sequences of u. ``negated_upper`` and
    ``negated_lower``: one-sided sequences of −u. ``spike``: u plus a
    spike at ``center`` of ``height``.
    """
    out = []
    for n in indices:
        if kind in (UPPER, LOWER):
            member = one_sided_sequence(u, kind, n)
        elif kind in ("negated_upper", "negated_lower"):
            member = one_sided_sequence(-u, kind.split("_")[1], n)
        elif kind == "spike":
            member = u + spike_sequence(
                u.lower, u.upper, options["center"], n,
                options.get("height", 1),
            )
        else:
            raise ValueError(f"unknown sequence kind {kind!r}")
        out.append((n, member))
    return out


@dataclass(frozen=True)
class StrictCertificate:
    """L¹ distances and variation gaps along a sequence.

    A series is accepted when it ends at zero, or when it decreases and
    n·value stays within twice its first value.
    """

    indices: Tuple[int, ...]
    l1_distances: Tuple[Fraction, ...]
    variation_gaps: Tuple[Fraction, ...]

    @staticmethod
    def _decays(indices: Sequence[int], values: Sequence[Fraction]) -> bool:
        if values[-1] == 0:
            return True
        if len(values) < 2 or not values[-1] < values[0]:
            return False
        bound = 2 * indices[0] * values[0]
        return all(n * v <= bound for n, v in zip(indices, values))

    @property
    def l1_converges(self) -> bool:
        return self._decays(self.indices, self.l1_distances)

    @property
    def variation_converges(self) -> bool:
        return self._decays(self.indices, self.variation_gaps)

    @property
    def is_strict(self) -> bool:
        return self.l1_converges and self.variation_converges

    def describe(self) -> str:
        rows = ", ".join(
            f"n={n}: L1 {format_fraction(d)}, gap {format_fraction(g)}"
            for n, d, g in zip(
                self.indices, self.l1_distances, self.variation_gaps
            )
        )
        verdict = []
        if not self.l1_converges:
            verdict.append("L1 distance does not decay")
        if not self.variation_converges:
            verdict.append("total variations do not converge")
        return "; ".join(verdict + [rows]) if verdict else rows


def strict_convergence_certificate(
    u: PiecewiseBV, sequence: Sequence[Tuple[int, PiecewiseBV]]
) -> StrictCertificate:
    if not sequence:
        raise ValueError("empty sequence")
    target = variation(u)
    return StrictCertificate(
        tuple(n for n, _ in sequence),
        tuple(l1_distance(member, u) for _, member in sequence),
        tuple(abs(variation(member) - target) for _, member in sequence),
    )


def require_strict(
    u: PiecewiseBV, sequence: Sequence[Tuple[int, PiecewiseBV]]
) -> StrictCertificate:
    """Raises NonStrictSequenceError unless the certificate passes."""
    certificate = strict_convergence_certificate(u, sequence)
    if not certificate.is_strict:
        raise NonStrictSequenceError(certificate)
    return certificate


@dataclass(frozen=True)
class Extrapolation:
    limit: Fraction
    exact: bool
    uncertainty: Fraction
    n_max: int


def extrapolate(samples: Sequence[Tuple[int, Fraction]]) -> Extrapolation:
    """Limit as n → ∞ of values sampled at increasing n.

    Fits polynomials in h = 1/n through the tail of the samples with
    increasing degree until one predicts the next node exactly.
    """
    logger = logging.getLogger("lampair")
    samples = sorted(samples)
    if not samples:
        raise ValueError("no samples to extrapolate")
    hs = [Fraction(1, n) for n, _ in samples][::-1]
    values = [to_fraction(v) for _, v in samples][::-1]
    n_max = samples[-1][0]
    for size in range(1, len(values)):
        estimate = interpolate_at(hs[:size], values[:size], hs[size])
        if estimate == values[size]:
            limit = interpolate_at(hs[:size], values[:size], Fraction(0))
            logger.debug(
                f"Extrapolated limit {limit} with degree {size - 1} in 1/n"
            )
            return Extrapolation(limit, True, Fraction(0), n_max)
    limit = interpolate_at(hs, values, Fraction(0))
    previous = (
        interpolate_at(hs[:-1], values[:-1], Fraction(0))
        if len(values) > 1
        else values[0]
    )
    logger.warning(
        f"Richardson fallback: limit {float(limit)} not certified "
        f"by an extra node (n_max = {n_max})"
    )
    return Extrapolation(limit, False, abs(limit - previous), n_max)


def lahti_violations(
    u: PiecewiseBV, sequence: Sequence[Tuple[int, PiecewiseBV]]
) -> List[Tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Breakpoints where u^- ≤ lim u_n^- ≤ lim u_n^+ ≤ u^+ fails.

    Returns ``(x, u^-, limit, u^+)`` per violation, with the limit of
    the continuous u_n at x extrapolated along the sequence.
    """
    violations = []
    for x in u.smooth.interior_breakpoints:
        low = min(u.left_limit(x), u.right_limit(x))
        high = max(u.left_limit(x), u.right_limit(x))
        lower_limit = extrapolate(
            [(n, min(m.left_limit(x), m.right_limit(x))) for n, m in sequence]
        ).limit
        upper_limit = extrapolate(
            [(n, max(m.left_limit(x), m.right_limit(x))) for n, m in sequence]
        ).limit
        if not low <= lower_limit <= upper_limit <= high:
            violations.append((x, low, lower_limit, high))
    return violations
