import unittest
from fractions import Fraction

from lampair.bv import (
    LambdaSelector,
    PiecewiseBV,
    approximate_limits,
    coarea_variation,
    compose,
    critical_values,
    derivative,
    from_text,
    integrate,
    is_nondecreasing,
    l1_distance,
    lambda_representative,
    level_set,
    multiply,
    representative,
    sup_norm,
    truncate,
    truncation_map,
    variation,
)
from lampair.cantor import CantorComponent
from lampair.errors import (
    CantorInteractionError,
    DegreeUnsupportedError,
    NonLipschitzError,
    ScenarioParseError,
    UnsupportedConstructError,
)
from lampair.polynomials import PiecewisePoly


def box() -> PiecewiseBV:
    return PiecewiseBV.indicator(-2, 2, -1, 1)


def staircase() -> PiecewiseBV:
    return PiecewiseBV.cantor_staircase(-1, 2, 0, 1)


class TestStructure(unittest.TestCase):

    def test_indicator_jumps(self) -> None:
        u = box()
        self.assertEqual(u.jump_points, (-1, 1))
        self.assertEqual(u.jumps(), [(-1, 0, 1), (1, 1, 0)])
        self.assertFalse(u.is_continuous())

    def test_staircase_values(self) -> None:
        u = staircase()
        self.assertEqual(u.value(Fraction(1, 4)), Fraction(1, 3))
        self.assertEqual(u.value(Fraction(3, 2)), 1)
        self.assertTrue(u.is_continuous())
        self.assertEqual(u.plain.value(Fraction(1, 2)), 0)
        self.assertEqual(u.plain.value(Fraction(3, 2)), 1)

    def test_staircase_restrictions(self) -> None:
        with self.assertRaises(UnsupportedConstructError):
            PiecewiseBV(
                PiecewisePoly.from_pieces(
                    [(-1, Fraction(1, 2), ()), (Fraction(1, 2), 2, (1,))]
                ),
                (CantorComponent(0, 1, 1),),
            )
        with self.assertRaises(UnsupportedConstructError):
            PiecewiseBV(
                PiecewisePoly.polynomial(-1, 2, (0, 1)),
                (CantorComponent(0, 1, 1),),
            )
        with self.assertRaises(UnsupportedConstructError):
            PiecewiseBV(
                PiecewisePoly.zero(-1, 2),
                (CantorComponent(0, 1, 1), CantorComponent(Fraction(1, 2), 2, 1)),
            )

    def test_indicator_must_fit(self) -> None:
        with self.assertRaises(ValueError):
            PiecewiseBV.indicator(0, 1, -1, 1)

    def test_constant_on(self) -> None:
        u = staircase()
        self.assertIsNone(u.constant_on(Fraction(1, 2), Fraction(3, 2)))
        self.assertEqual(u.constant_on(Fraction(3, 2), 2), 1)


class TestRepresentatives(unittest.TestCase):

    def test_lambda_representative(self) -> None:
        u = box()
        self.assertEqual(
            representative(u, LambdaSelector.constant(Fraction(1, 4)), -1),
            Fraction(1, 4),
        )
        self.assertEqual(representative(u, LambdaSelector(), 1), Fraction(1, 2))
        self.assertEqual(representative(u, LambdaSelector.constant(0), 0), 1)
        precise = lambda_representative(u, LambdaSelector())
        self.assertEqual(precise(Fraction(3, 2)), 0)

    def test_approximate_limits(self) -> None:
        limits = approximate_limits(box(), 1)
        self.assertEqual((limits.lower, limits.upper), (0, 1))
        self.assertEqual(limits.normal, -1)
        self.assertIsNone(limits.precise)
        with self.assertRaises(ValueError):
            approximate_limits(box(), 2)

    def test_selector_validation(self) -> None:
        with self.assertRaises(ValueError):
            LambdaSelector.constant(2)
        lam = LambdaSelector.from_mapping(Fraction(1, 3), {1: 1})
        self.assertEqual(lam(1), 1)
        self.assertEqual(lam(0), Fraction(1, 3))
        self.assertFalse(lam.is_constant())
        self.assertTrue(LambdaSelector.from_mapping(1, {0: 1}).is_constant())


class TestDerivative(unittest.TestCase):

    def test_derivative_parts(self) -> None:
        Du = derivative(box())
        self.assertEqual(Du.atoms, ((-1, 1), (1, -1)))
        self.assertTrue(Du.ac.is_zero())
        self.assertEqual(variation(box()), 2)

    def test_cantor_derivative(self) -> None:
        u = staircase()
        self.assertEqual(derivative(u).cantor, (CantorComponent(0, 1, 1),))
        self.assertEqual(variation(u), 1)
        self.assertEqual(sup_norm(u), 1)

    def test_integrate_through_staircase(self) -> None:
        one = PiecewisePoly.constant(-1, 2, 1)
        self.assertEqual(integrate(staircase(), one), Fraction(3, 2))

    def test_l1_distance(self) -> None:
        self.assertEqual(l1_distance(box(), PiecewiseBV.constant(-2, 2)), 2)
        with self.assertRaises(UnsupportedConstructError):
            l1_distance(staircase(), staircase())


class TestProducts(unittest.TestCase):

    def test_multiply(self) -> None:
        x = PiecewiseBV.from_pieces([(-2, 2, (0, 1))])
        product = multiply(box(), x)
        self.assertEqual(product.value(Fraction(1, 2)), Fraction(1, 2))
        self.assertEqual(product.value(Fraction(3, 2)), 0)
        self.assertEqual(product.jump_points, (-1, 1))

    def test_staircase_times_constant(self) -> None:
        three = PiecewiseBV.constant(-1, 2, 3)
        product = staircase() * three
        self.assertEqual(product.staircases, (CantorComponent(0, 1, 3),))

    def test_staircase_meets_slope(self) -> None:
        x = PiecewiseBV.from_pieces([(-1, 2, (0, 1))])
        with self.assertRaises(CantorInteractionError):
            multiply(staircase(), x)


class TestTruncationAndComposition(unittest.TestCase):

    def test_truncate(self) -> None:
        x = PiecewiseBV.from_pieces([(-2, 2, (0, 1))])
        truncated = truncate(x, 1)
        self.assertEqual(
            list(truncated.smooth.pieces()),
            [(-2, -1, (-1,)), (-1, 1, (0, 1)), (1, 2, (1,))],
        )
        self.assertEqual(truncate(x, 3), x)
        with self.assertRaises(ValueError):
            truncate(x, 0)

    def test_truncate_irrational_crossing(self) -> None:
        square = PiecewiseBV.from_pieces([(0, 2, (0, 0, 1))])
        with self.assertRaises(DegreeUnsupportedError):
            truncate(square, 2)

    def test_truncation_map(self) -> None:
        h = truncation_map(1, 2)
        self.assertEqual(h.domain, (-2, 2))
        self.assertEqual(h.value(Fraction(3, 2)), 1)
        self.assertTrue(is_nondecreasing(h))
        self.assertEqual(truncation_map(3, 2).breakpoints, (-2, 2))

    def test_compose(self) -> None:
        square = PiecewisePoly.polynomial(-2, 2, (0, 0, 1))
        self.assertEqual(compose(square, box()), box())
        self.assertFalse(is_nondecreasing(square))
        x = PiecewiseBV.from_pieces([(-2, 2, (0, 1))])
        self.assertEqual(
            compose(truncation_map(1, 2), x), truncate(x, 1)
        )

    def test_compose_rejects_bad_maps(self) -> None:
        narrow = PiecewisePoly.polynomial(0, Fraction(1, 2), (0, 1))
        with self.assertRaises(NonLipschitzError):
            compose(narrow, box())
        jump = PiecewisePoly.from_pieces([(-2, 0, (0,)), (0, 2, (1,))])
        with self.assertRaises(NonLipschitzError):
            compose(jump, box())


class TestLevelSets(unittest.TestCase):

    def test_level_set_of_identity(self) -> None:
        x = PiecewiseBV.from_pieces([(-2, 2, (0, 1))])
        E = level_set(x, 0)
        self.assertEqual(E.intervals, ((0, 2),))
        self.assertEqual(E.boundary, ((0, 1),))
        self.assertEqual(E.perimeter, 1)
        self.assertEqual(E.indicator().jump_points, (0,))

    def test_level_set_merges_across_breakpoints(self) -> None:
        u = PiecewiseBV.from_pieces([(-2, 0, (0, 1)), (0, 2, (1,))])
        E = level_set(u, Fraction(-1))
        self.assertEqual(E.intervals, ((-1, 2),))

    def test_critical_values(self) -> None:
        u = PiecewiseBV.from_pieces([(-2, 2, (-1, 0, 1))])
        self.assertEqual(critical_values(u), [-1, 3])

    def test_coarea_variation_matches_variation(self) -> None:
        u = PiecewiseBV.from_pieces([(-2, 0, (0, 1)), (0, 2, (1,))])
        self.assertEqual(coarea_variation(u), 3)
        self.assertEqual(variation(u), 3)


class TestTextForm(unittest.TestCase):

    def test_text_form(self) -> None:
        u = PiecewiseBV(
            PiecewisePoly.from_pieces([(-1, 0, (0, 1)), (0, 2, (2,))]),
            (CantorComponent(Fraction(1, 2), 1, 1),),
        )
        self.assertEqual(from_text(str(u)), u)

    def test_jump_table_is_checked(self) -> None:
        text = str(box()).replace("(1,1,0)", "(1,1,2)")
        with self.assertRaises(ValueError):
            from_text(text)

    def test_text_form_keeps_the_depth_cap(self) -> None:
        u = PiecewiseBV(
            PiecewisePoly.zero(-1, 2),
            (CantorComponent(Fraction(1, 2), 1, 1, 5),),
        )
        self.assertIn("(1/2,1,1,5)", str(u))
        self.assertEqual(from_text(str(u)).staircases[0].depth, 5)

    def test_truncated_text_is_a_parse_error(self) -> None:
        text = str(staircase())
        with self.assertRaises(ScenarioParseError):
            from_text(text[:-3])
        with self.assertRaises(ScenarioParseError):
            from_text(text.split(";")[0])


if __name__ == "__main__":
    unittest.main()
