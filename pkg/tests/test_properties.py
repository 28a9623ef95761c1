"""Randomised identities over the seeded corpus in tests.generators"""

import random
import unittest
from fractions import Fraction
from typing import List

from lampair.bv import (
    LambdaSelector,
    PiecewiseBV,
    derivative,
    sup_norm,
    truncation_map,
)
from lampair.cantor import CantorComponent
from lampair.fields import (
    DMField1D,
    classify,
    divergence_parts,
    lsc_selector,
    usc_selector,
)
from lampair.measures import (
    BorelSet1D,
    Measure1D,
    evaluate,
    jordan,
    lattice_max,
    lattice_min,
    polar_density,
    positive_part,
    restrict,
    total_variation,
)
from lampair.pairing import lattice_extremes, pairing, standard_pairing
from lampair.polynomials import PiecewisePoly
from lampair.sequences import build_sequence, lahti_violations
from lampair.theorems import (
    gauss_green,
    semicontinuity_experiment,
    verify_chain_rule,
    verify_domination,
    verify_extremal,
    verify_leibniz,
    verify_resto,
    verify_two_path,
)
from tests import generators as gen

LEVELS = [Fraction(1, 2), Fraction(1), Fraction(3, 2)]


def cells(*measures: Measure1D) -> List[BorelSet1D]:
    """A partition of the domain on which each of the measures, their
    differences and their lattice extremes are one-signed."""
    atoms = sorted({x for mu in measures for x in mu.atom_set})
    points = {gen.LOWER, gen.UPPER, *atoms}
    for mu in measures:
        points.update(mu.ac.breakpoints)
    ends = sorted(points)
    out = [BorelSet1D.point(x) for x in atoms]
    out += [
        BorelSet1D(cantor_sets=(cell,), punctures=tuple(atoms))
        for cell in gen.CANTOR_CELLS
    ]
    out += [
        BorelSet1D(
            intervals=((a, b),),
            holes=gen.CANTOR_FAMILIES,
            punctures=tuple(atoms),
        )
        for a, b in zip(ends, ends[1:])
    ]
    return out


def lebesgue_point(mu: Measure1D, lo: Fraction, hi: Fraction) -> Fraction:
    """A point of (lo, hi) carrying neither an atom nor Cantor mass."""
    candidates = (lo + (hi - lo) * Fraction(k, 11) for k in range(1, 11))
    return next(
        x for x in candidates
        if x not in mu.atom_set and not any(c.contains(x) for c in mu.cantor)
    )


def cantor_point(mu: Measure1D, c: CantorComponent) -> Fraction:
    """A point of the Cantor set of c without an atom."""
    candidates = (
        c.lower + c.length * t
        for t in (Fraction(1, 4), Fraction(3, 4), Fraction(1, 10), 0, 1)
    )
    return next(x for x in candidates if x not in mu.atom_set)


class TestMeasureProperties(unittest.TestCase):

    def test_sign_sets_are_disjoint(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                A = gen.staircase_field(rng) if seed % 2 else gen.field(rng)
                signs = classify(A)
                mu = A.divergence
                samples = {Fraction(k, 24) for k in range(-47, 48)}
                samples.update(mu.atom_set)
                for c in mu.cantor:
                    samples.update(
                        c.lower + c.length * t
                        for t in (0, Fraction(1, 4), Fraction(3, 4), 1)
                    )
                for x in samples:
                    self.assertFalse(
                        signs.positive.contains(x)
                        and signs.negative.contains(x),
                        x,
                    )
                plus, minus = divergence_parts(A)
                self.assertTrue(jordan(plus)[1].is_zero())
                self.assertTrue(jordan(minus)[1].is_zero())
                self.assertTrue((plus - minus - mu).is_zero())
                self.assertTrue((plus + minus - total_variation(mu)).is_zero())

    def test_lattice_matches_cellwise_extremes(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                first, second = gen.measure(rng), gen.measure(rng)
                low = lattice_min(first, second)
                high = lattice_max(first, second)
                low_total = high_total = Fraction(0)
                for E in cells(first, second, low, high):
                    a, b = evaluate(first, E), evaluate(second, E)
                    self.assertEqual(evaluate(low, E), min(a, b), E)
                    self.assertEqual(evaluate(high, E), max(a, b), E)
                    low_total += min(a, b)
                    high_total += max(a, b)
                self.assertEqual(low.total_mass(), low_total)
                self.assertEqual(high.total_mass(), high_total)

    def test_variation_is_the_cellwise_sum(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                mu = gen.measure(rng)
                nu = mu - gen.measure(rng)
                partition = cells(nu, positive_part(nu))
                expected = sum(
                    (abs(evaluate(nu, E)) for E in partition), Fraction(0)
                )
                self.assertEqual(nu.variation(), expected)

    def test_cantor_sums_cancel(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                first, second = gen.measure(rng), gen.measure(rng)
                self.assertEqual(first + second - second, first)
                self.assertTrue((first - first).is_zero())

    def test_restriction_is_additive(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                mu = gen.measure(rng)
                s = rng.choice(gen.GRID)
                pieces = [
                    BorelSet1D.interval(gen.LOWER, s),
                    BorelSet1D.point(s),
                    BorelSet1D.interval(s, gen.UPPER),
                ]
                support = rng.choice(gen.CANTOR_SUPPORTS)
                cut = tuple(rng.sample(gen.GRID, 2))
                pieces_with_holes = [
                    BorelSet1D(
                        intervals=(gen.DOMAIN,),
                        holes=(support,),
                        punctures=cut,
                    ),
                    BorelSet1D(cantor_sets=(support,), points=cut),
                ]
                for partition in (pieces, pieces_with_holes):
                    restricted = [restrict(mu, E) for E in partition]
                    total = restricted[0]
                    for part in restricted[1:]:
                        total = total + part
                    self.assertEqual(total, mu)
                    self.assertEqual(
                        sum((evaluate(mu, E) for E in partition), Fraction(0)),
                        mu.total_mass(),
                    )

    def test_polar_density_reconstructs_the_measure(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                mu = gen.measure(random.Random(seed))
                variation = total_variation(mu)
                ac_pieces = []
                for lo, hi, _coeffs, s in mu.ac.signed_pieces():
                    theta = (
                        polar_density(mu, lebesgue_point(mu, lo, hi))
                        if s else 0
                    )
                    ac_pieces += [
                        (a, b, tuple(theta * c for c in coeffs))
                        for a, b, coeffs in variation.ac.restrict_to(
                            lo, hi
                        ).pieces()
                    ]
                atoms = tuple(
                    (x, polar_density(mu, x) * variation.atom_weight(x))
                    for x in mu.atom_set
                )
                cantor = []
                for c in mu.cantor:
                    theta = polar_density(mu, cantor_point(mu, c))
                    self.assertEqual(theta, 1 if c.mass > 0 else -1)
                    share = restrict(
                        variation, BorelSet1D(cantor_sets=(c.support,))
                    )
                    cantor += [p.scaled(theta) for p in share.cantor]
                rebuilt = Measure1D(
                    PiecewisePoly.from_pieces(ac_pieces), atoms, tuple(cantor)
                )
                self.assertEqual(rebuilt, mu)


class TestPairingProperties(unittest.TestCase):

    def test_two_path(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                rng = random.Random(10_000 + seed)
                report = verify_two_path(A, u, lam, [gen.phi(rng), gen.phi(rng)])
                self.assertTrue(report.passed, report.witnesses)

    def test_domination(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                report = verify_domination(A, u, lam)
                self.assertTrue(report.passed, report.residual)

    def test_resto_and_nonlinearity_defect(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                self.assertTrue(verify_resto(A, u, lam).passed)

    def test_extremal_selectors(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, _ = gen.triple(seed)
                report = verify_extremal(A, u)
                self.assertTrue(report.passed, report.residual)

    def test_lattice_extremes_match_brute_force(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, _ = gen.triple(seed)
                low, high = lattice_extremes(A, u)
                measures = [
                    pairing(A, u, LambdaSelector.constant(value))
                    for value in gen.SELECTOR_VALUES
                ]
                brute_low, brute_high = measures[0], measures[0]
                for measure in measures[1:]:
                    brute_low = lattice_min(brute_low, measure)
                    brute_high = lattice_max(brute_high, measure)
                self.assertTrue((low - brute_low).is_zero())
                self.assertTrue((high - brute_high).is_zero())

    def test_continuous_field_ignores_selector(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                A = gen.continuous_field(rng)
                u = gen.function(rng)
                first = pairing(A, u, LambdaSelector.constant(0))
                second = pairing(A, u, gen.selector(rng, u.jump_points))
                self.assertTrue((first - second).is_zero())


class TestTrivialCases(unittest.TestCase):

    def test_constant_function_pairs_to_zero(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                A = gen.field(rng)
                c = Fraction(rng.randint(-4, 4), 2)
                u = PiecewiseBV.from_pieces([(gen.LOWER, gen.UPPER, (c,))])
                lam = gen.selector(rng, A.jump_set)
                self.assertTrue(pairing(A, u, lam).is_zero())

    def test_constant_field_scales_derivative(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                c = Fraction(rng.randint(-4, 4), 2)
                A = DMField1D.from_pieces([(gen.LOWER, gen.UPPER, (c,))])
                u = gen.function(rng)
                lam = gen.selector(rng, u.jump_points)
                expected = derivative(u).scale(c)
                self.assertTrue((pairing(A, u, lam) - expected).is_zero())

    def test_half_selector_is_standard_pairing(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, _ = gen.triple(seed)
                half = pairing(A, u, LambdaSelector.constant(Fraction(1, 2)))
                self.assertTrue((half - standard_pairing(A, u)).is_zero())


class TestSequenceProperties(unittest.TestCase):

    def test_one_sided_sequences_respect_limits(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                u = gen.function(random.Random(seed))
                for kind in ("upper", "lower"):
                    sequence = build_sequence(u, kind, gen.SCHEDULE)
                    self.assertEqual(lahti_violations(u, sequence), [])

    def test_extremal_selectors_are_semicontinuous(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                rng = random.Random(seed)
                A = gen.field(rng)
                u = gen.function(rng)
                phi = gen.nonnegative_phi(rng)
                for lam in (lsc_selector(A), usc_selector(A)):
                    report = semicontinuity_experiment(
                        A, lam, u, ["upper", "lower"], [phi], gen.SCHEDULE
                    )
                    self.assertTrue(report.passed, report.witnesses)


class TestCalculusProperties(unittest.TestCase):

    def test_gauss_green_on_random_intervals(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                c, d = gen.interval(random.Random(seed))
                report = gauss_green(A, u, lam, c, d)
                self.assertTrue(report.passed, report.witnesses)

    def test_chain_rule_for_truncations(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                k = random.Random(seed).choice(LEVELS)
                h = truncation_map(k, max(sup_norm(u), k))
                report = verify_chain_rule(A, u, lam, h, k)
                self.assertTrue(report.passed, report.witnesses)

    def test_leibniz_with_random_multiplier(self) -> None:
        for seed in gen.seeds():
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                v = gen.function(random.Random(20_000 + seed))
                report = verify_leibniz(A, u, v, lam)
                self.assertTrue(report.passed, report.witnesses)


if __name__ == "__main__":
    unittest.main()
