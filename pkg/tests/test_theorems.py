import random
import unittest
from fractions import Fraction

from lampair.bv import LambdaSelector, PiecewiseBV, truncation_map
from lampair.errors import NonStrictSequenceError, ShiftRequestedError
from lampair.fields import DMField1D, lsc_selector, usc_selector
from lampair.polynomials import PiecewisePoly
from lampair.theorems import (
    CheckReport,
    as_tolerance,
    coarea_integral,
    gauss_green,
    semicontinuity_experiment,
    t_partition,
    verify_chain_rule,
    verify_coarea,
    verify_domination,
    verify_extremal,
    verify_leibniz,
    verify_mollification,
    verify_resto,
    verify_theta_slicing,
    verify_truncation_limit,
    verify_two_path,
)
from tests import generators as gen

HALF = Fraction(1, 2)


def box_field() -> DMField1D:
    return DMField1D.indicator(-2, 2, -1, 1)


def box() -> PiecewiseBV:
    return PiecewiseBV.indicator(-2, 2, -1, 1)


def kinked_field() -> DMField1D:
    return DMField1D.from_pieces([(-2, 0, (0, 1)), (0, 2, (1,))])


def tilted_field() -> DMField1D:
    return DMField1D.from_pieces(
        [(-2, -1, (1,)), (-1, 1, (0, HALF)), (1, 2, (-1,))]
    )


def broken_line() -> PiecewiseBV:
    """x, then 1, then 1 − x: one jump at -1."""
    return PiecewiseBV.from_pieces(
        [(-2, -1, (0, 1)), (-1, 0, (1,)), (0, 2, (1, -1))]
    )


def step_up() -> PiecewiseBV:
    """−x on (-2, 1) jumping to 3."""
    return PiecewiseBV.from_pieces([(-2, 1, (0, -1)), (1, 2, (3,))])


def ramp_after() -> PiecewiseBV:
    """2 on (-2, -1), then x: shares the jump at -1 with broken_line."""
    return PiecewiseBV.from_pieces([(-2, -1, (2,)), (-1, 2, (0, 1))])


def phis():
    return [
        PiecewisePoly.constant(-2, 2, 1),
        PiecewisePoly.polynomial(-2, 2, (0, 1)),
        PiecewisePoly.polynomial(-2, 2, (0, 0, 1)),
        gen.hat(Fraction(0)),
        gen.hat(HALF),
    ]


class TestPairingIdentities(unittest.TestCase):

    def test_two_path_on_random_triples(self) -> None:
        for seed in range(25):
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                rng = random.Random(seed)
                report = verify_two_path(
                    A, u, lam, [gen.phi(rng), gen.phi(rng), gen.hat(HALF)]
                )
                self.assertTrue(report.passed, report.witnesses)

    def test_two_path_with_cantor_staircase(self) -> None:
        u = PiecewiseBV.cantor_staircase(-1, 2, 0, 1)
        tolerance = Fraction(1, 10**9)
        phi = [
            PiecewisePoly.constant(-1, 2, 1),
            PiecewisePoly.polynomial(-1, 2, (1, -1, 1)),
        ]
        constant = DMField1D.from_pieces([(-1, 2, (2,))])
        report = verify_two_path(constant, u, LambdaSelector(), phi, tolerance)
        self.assertTrue(report.passed, report.witnesses)
        self.assertIn("pairing", report.witnesses)

        sloped = DMField1D.from_pieces([(-1, 2, (0, 1))])
        report = verify_two_path(sloped, u, LambdaSelector(), phi, tolerance)
        self.assertTrue(report.passed, report.witnesses)
        self.assertIn("pairing", report.witnesses)

        stepped = DMField1D.indicator(-1, 2, 0, Fraction(3, 2))
        report = verify_two_path(stepped, u, lsc_selector(stepped), phi, tolerance)
        self.assertTrue(report.passed, report.witnesses)

    def test_resto_extremal_and_domination(self) -> None:
        cases = [
            (box_field(), box(), LambdaSelector.constant(Fraction(1, 4))),
            (kinked_field(), broken_line(), LambdaSelector.constant(1)),
            (tilted_field(), step_up(),
             LambdaSelector.from_mapping(Fraction(1, 3), {-1: 1})),
        ]
        for A, u, lam in cases:
            with self.subTest(u=str(u)):
                self.assertTrue(verify_resto(A, u, lam).passed)
                self.assertTrue(verify_extremal(A, u).passed)
                self.assertTrue(verify_domination(A, u, lam).passed)


class TestCoarea(unittest.TestCase):

    def test_coarea_on_ten_scenarios(self) -> None:
        for seed in range(10):
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                report = verify_coarea(A, u, lam, phis())
                self.assertTrue(report.passed, report.witnesses)
                self.assertEqual(len(report.witnesses["sides"]), 5)

    def test_coarea_of_an_indicator(self) -> None:
        value = coarea_integral(
            box_field(), box(), LambdaSelector(),
            PiecewisePoly.polynomial(-2, 2, (2, -1)),
        )
        self.assertEqual(value, 1)

    def test_t_partition_contains_critical_values(self) -> None:
        values = t_partition(kinked_field(), broken_line())
        for t in (-2, -1, 1):
            self.assertIn(t, values)

    def test_theta_slicing(self) -> None:
        for seed in range(10):
            with self.subTest(seed=seed):
                A, u, lam = gen.triple(seed)
                self.assertTrue(verify_theta_slicing(A, u, lam).passed)


class TestChainRuleAndLeibniz(unittest.TestCase):

    def test_chain_rule(self) -> None:
        line = PiecewisePoly.polynomial(-4, 4, (1, 2))
        square = PiecewisePoly.polynomial(-4, 4, (0, 0, 1))
        bent = PiecewisePoly.from_pieces(
            [(-4, 0, (0, HALF)), (0, 4, (0, 2))]
        )
        cases = [
            (box_field(), box(), LambdaSelector.constant(Fraction(1, 4)),
             line, None),
            (box_field(), box(), LambdaSelector(), square, None),
            (kinked_field(), broken_line(),
             LambdaSelector.constant(Fraction(1, 3)),
             truncation_map(HALF, 4), HALF),
            (kinked_field(), step_up(),
             LambdaSelector.from_mapping(Fraction(1, 4), {1: 0}),
             truncation_map(1, 4), 1),
            (tilted_field(), broken_line(), lsc_selector(tilted_field()),
             bent, None),
            (tilted_field(), step_up(), LambdaSelector(), square, None),
            (box_field(), step_up(), LambdaSelector.constant(0),
             truncation_map(2, 4), 2),
            (kinked_field(), broken_line(), LambdaSelector.constant(1),
             line, None),
            (tilted_field(), step_up(),
             LambdaSelector.constant(Fraction(3, 4)),
             truncation_map(1, 4), 1),
        ]
        for index, (A, u, lam, h, level) in enumerate(cases):
            with self.subTest(case=index):
                report = verify_chain_rule(A, u, lam, h, level)
                self.assertTrue(report.passed, report.witnesses)

    def test_chain_rule_skips_jump_factor_for_decreasing_maps(self) -> None:
        square = PiecewisePoly.polynomial(-4, 4, (0, 0, 1))
        report = verify_chain_rule(
            box_field(), step_up(), LambdaSelector.constant(0), square
        )
        self.assertTrue(report.passed)
        self.assertTrue(report.witnesses["jump_factor"].startswith("skipped"))

    def test_leibniz(self) -> None:
        x = PiecewiseBV.from_pieces([(-2, 2, (0, 1))])
        cases = [
            (box_field(), box(), PiecewiseBV.constant(-2, 2, 2), LambdaSelector()),
            (box_field(), box(), box(), LambdaSelector.constant(Fraction(1, 4))),
            (kinked_field(), broken_line(), step_up(), LambdaSelector.constant(1)),
            (kinked_field(), broken_line(), ramp_after(),
             LambdaSelector.constant(Fraction(2, 3))),
            (tilted_field(), broken_line(), ramp_after(),
             lsc_selector(tilted_field())),
            (tilted_field(), step_up(), box(), usc_selector(tilted_field())),
            (box_field(), step_up(), x, LambdaSelector.constant(0)),
            (kinked_field(), box(), step_up(), LambdaSelector()),
            (tilted_field(), box(), ramp_after(),
             LambdaSelector.from_mapping(0, {1: HALF})),
        ]
        shared = 0
        for index, (A, u, v, lam) in enumerate(cases):
            with self.subTest(case=index):
                report = verify_leibniz(A, u, v, lam)
                self.assertTrue(report.passed, report.witnesses)
                shared += bool(report.witnesses["shared_jumps"])
        self.assertGreaterEqual(shared, 4)


class TestGaussGreen(unittest.TestCase):

    def test_gauss_green_on_intervals(self) -> None:
        quarter = LambdaSelector.constant(Fraction(1, 4))
        staircase = PiecewiseBV.cantor_staircase(-1, 2, 0, 1)
        constant = DMField1D.from_pieces([(-1, 2, (2,))])
        cases = [
            (box_field(), box(), quarter, Fraction(-3, 2), 0),
            (box_field(), box(), quarter, -1, 1),
            (box_field(), box(), quarter, -1, Fraction(3, 2)),
            (box_field(), box(), quarter, Fraction(-3, 2), Fraction(3, 2)),
            (box_field(), box(), LambdaSelector(), 0, 1),
            (box_field(), box(), lsc_selector(box_field()), -1, 0),
            (kinked_field(), broken_line(), quarter, -1, 1),
            (kinked_field(), broken_line(), LambdaSelector(), 0, 1),
            (tilted_field(), step_up(), quarter, Fraction(-3, 2), HALF),
            (constant, staircase, LambdaSelector(), -HALF, Fraction(3, 2)),
            (constant, staircase, LambdaSelector(), 0, 1),
        ]
        for index, (A, u, lam, c, d) in enumerate(cases):
            with self.subTest(case=index):
                report = gauss_green(A, u, lam, c, d)
                self.assertTrue(report.passed, report.witnesses)

    def test_endpoint_inside_staircase(self) -> None:
        staircase = PiecewiseBV.cantor_staircase(-1, 2, 0, 1)
        constant = DMField1D.from_pieces([(-1, 2, (2,))])
        with self.assertRaises(ShiftRequestedError):
            gauss_green(constant, staircase, LambdaSelector(), HALF, Fraction(3, 2))

    def test_set_must_be_compactly_inside(self) -> None:
        with self.assertRaises(ValueError):
            gauss_green(box_field(), box(), LambdaSelector(), -2, 1)


class TestSemicontinuity(unittest.TestCase):

    def setUp(self) -> None:
        self.phi = PiecewisePoly.polynomial(-2, 2, (2, -1))

    def test_extremal_selectors_never_violate(self) -> None:
        A = box_field()
        for lam in (lsc_selector(A), usc_selector(A)):
            with self.subTest(lam=lam):
                report = semicontinuity_experiment(
                    A, lam, box(), ["upper", "lower"], [self.phi], gen.SCHEDULE
                )
                self.assertTrue(report.passed, report.witnesses)

    def test_half_selector_breaks_both_ways(self) -> None:
        report = semicontinuity_experiment(
            box_field(), LambdaSelector(), box(), ["upper", "lower"],
            [self.phi], gen.SCHEDULE, expect_violations=["lsc", "usc"],
        )
        self.assertTrue(report.passed, report.witnesses)
        limits = {row["sequence"]: row for row in report.witnesses["limits"]}
        self.assertEqual(limits["upper"]["limit"], "0")
        self.assertEqual(limits["lower"]["limit"], "2")
        self.assertEqual(limits["upper"]["pairing"], "1")
        self.assertEqual(report.witnesses["upper_lahti_violations"], [])

    def test_weak_star_sequence_fails(self) -> None:
        A = DMField1D.indicator(-1, 3, 0, 2)
        u = PiecewiseBV.constant(-1, 3)
        one = PiecewisePoly.constant(-1, 3, 1)
        report = semicontinuity_experiment(
            A, lsc_selector(A), u, ["spike"], [one], gen.SCHEDULE,
            strict=False, center=0, height=1,
        )
        self.assertFalse(report.passed)
        self.assertEqual(report.residual, 1)
        self.assertFalse(report.witnesses["spike_strict"])
        with self.assertRaises(NonStrictSequenceError):
            semicontinuity_experiment(
                A, lsc_selector(A), u, ["spike"], [one], gen.SCHEDULE,
                center=0, height=1,
            )

    def test_negative_test_functions_are_rejected(self) -> None:
        with self.assertRaises(ValueError):
            semicontinuity_experiment(
                box_field(), LambdaSelector(), box(), ["upper"],
                [PiecewisePoly.polynomial(-2, 2, (0, 1))], gen.SCHEDULE,
            )


class TestApproximation(unittest.TestCase):

    def test_mollification_halves(self) -> None:
        phi = [
            PiecewisePoly.polynomial(-2, 2, (2, -1)),
            PiecewisePoly.polynomial(-2, 2, (0, 0, 0, 1)),
        ]
        report = verify_mollification(
            box_field(), phi, Fraction(1, 4), as_tolerance(1e-9)
        )
        self.assertTrue(report.passed, report.witnesses)
        self.assertTrue(report.witnesses["halving"])
        self.assertLess(report.witnesses["steps"], 40)

    def test_truncation_limit(self) -> None:
        report = verify_truncation_limit(
            kinked_field(), step_up(), LambdaSelector(), phis(),
            [HALF, 1, 2, 3, 4],
        )
        self.assertTrue(report.passed)
        self.assertEqual(report.witnesses["sup_norm"], "3")
        self.assertEqual(report.witnesses["stable_levels"], 10)


class TestCheckReport(unittest.TestCase):

    def test_expected_failure_is_ok(self) -> None:
        report = CheckReport("x", Fraction(1), Fraction(0), False)
        self.assertFalse(report.ok)
        report.expected_failure = True
        self.assertTrue(report.ok)
        self.assertIn("expected failure", report.summary())
        self.assertEqual(report.to_dict()["residual"], "1")

    def test_passing_expected_failure_is_not_ok(self) -> None:
        report = CheckReport("x", Fraction(0), Fraction(0), True)
        self.assertTrue(report.ok)
        report.expected_failure = True
        self.assertFalse(report.ok)
        self.assertIn("unexpected pass", report.summary())

    def test_tolerance_from_float(self) -> None:
        self.assertEqual(as_tolerance(1e-9), Fraction(1, 10**9))
        self.assertEqual(as_tolerance("1/8"), Fraction(1, 8))


if __name__ == "__main__":
    unittest.main()
