import math
import unittest
from fractions import Fraction

from lampair.errors import DegreeUnsupportedError
from lampair.polynomials import (
    PiecewisePoly,
    exact_crossings,
    interpolate_at,
    lagrange_integral,
    poly,
    poly_compose,
    poly_derivative,
    poly_integral,
    poly_mul,
    poly_roots,
    sign_near,
    step_function,
)
from lampair.rationals import format_fraction, to_fraction


class TestRationals(unittest.TestCase):

    def test_to_fraction_accepts_exact_forms(self) -> None:
        self.assertEqual(to_fraction("3/4"), Fraction(3, 4))
        self.assertEqual(to_fraction(" -2 "), Fraction(-2))
        self.assertEqual(to_fraction(5), Fraction(5))
        self.assertEqual(to_fraction(Fraction(1, 3)), Fraction(1, 3))

    def test_to_fraction_rejects_floats_and_junk(self) -> None:
        for value in (1.5, True, "1/0", "abc", "0.25", None):
            with self.subTest(value=value):
                with self.assertRaises(ValueError):
                    to_fraction(value)

    def test_format_fraction(self) -> None:
        self.assertEqual(format_fraction(Fraction(4, 2)), "2")
        self.assertEqual(format_fraction(Fraction(-3, 4)), "-3/4")


class TestPolynomials(unittest.TestCase):

    def test_trailing_zeros_are_stripped(self) -> None:
        self.assertEqual(poly(1, 2, 0), (Fraction(1), Fraction(2)))
        self.assertEqual(poly(0, 0), ())

    def test_arithmetic(self) -> None:
        self.assertEqual(poly_mul(poly(1, 1), poly(-1, 1)), poly(-1, 0, 1))
        self.assertEqual(poly_compose(poly(0, 0, 1), poly(1, 1)), poly(1, 2, 1))
        self.assertEqual(poly_derivative(poly(5, 0, 3)), poly(0, 6))
        self.assertEqual(poly_integral(poly(0, 0, 3), Fraction(0), Fraction(2)), 8)

    def test_sign_near_uses_higher_derivatives(self) -> None:
        self.assertEqual(sign_near(poly(0, 0, 1), Fraction(0), -1), 1)
        self.assertEqual(sign_near(poly(0, 1), Fraction(0), -1), -1)
        self.assertEqual(sign_near(poly(0, 0, 0, 1), Fraction(0), 1), 1)
        self.assertEqual(sign_near((), Fraction(0), 1), 0)

    def test_rational_roots_are_exact_and_strictly_inside(self) -> None:
        p = poly(-1, 0, 1)
        self.assertEqual(poly_roots(p, Fraction(-2), Fraction(2)), [-1, 1])
        self.assertEqual(poly_roots(p, Fraction(-1), Fraction(1)), [])

    def test_irrational_root_is_isolated(self) -> None:
        (root,) = poly_roots(poly(-2, 0, 1), Fraction(0), Fraction(2))
        self.assertLess(abs(float(root) - math.sqrt(2)), 1e-11)

    def test_zero_polynomial_has_no_isolated_roots(self) -> None:
        with self.assertRaises(ValueError):
            poly_roots((), Fraction(0), Fraction(1))

    def test_exact_crossings(self) -> None:
        self.assertEqual(
            exact_crossings(
                poly(0, 0, 1), Fraction(1, 4), Fraction(0), Fraction(1)
            ),
            [Fraction(1, 2)],
        )
        with self.assertRaises(DegreeUnsupportedError):
            exact_crossings(
                poly(0, 0, 1), Fraction(2), Fraction(0), Fraction(2)
            )

    def test_lagrange_integral_is_exact_for_low_degree(self) -> None:
        nodes = [Fraction(k) for k in range(4)]
        values = [x**3 for x in nodes]
        self.assertEqual(
            lagrange_integral(nodes, values, Fraction(0), Fraction(2)), 4
        )

    def test_interpolate_at(self) -> None:
        nodes = [Fraction(1), Fraction(2), Fraction(3)]
        self.assertEqual(
            interpolate_at(nodes, [x * x for x in nodes], Fraction(0)), 0
        )


class TestPiecewisePoly(unittest.TestCase):

    def setUp(self) -> None:
        self.ramp = PiecewisePoly.from_pieces(
            [(0, 1, (1,)), (1, 2, (0, 1))]
        )

    def test_construction_errors(self) -> None:
        with self.assertRaises(ValueError):
            PiecewisePoly.from_pieces([(0, 1, (1,)), (2, 3, (1,))])
        with self.assertRaises(ValueError):
            PiecewisePoly((0, 0), ((1,),))
        with self.assertRaises(ValueError):
            PiecewisePoly((0, 1, 2), ((1,),))

    def test_one_sided_values(self) -> None:
        p = PiecewisePoly.from_pieces([(0, 1, (1,)), (1, 2, (3,))])
        self.assertEqual(p.left_limit(1), 1)
        self.assertEqual(p.right_limit(1), 3)
        self.assertFalse(p.is_continuous())
        self.assertTrue(self.ramp.is_continuous())

    def test_integral_and_restriction(self) -> None:
        self.assertEqual(self.ramp.integral(), Fraction(5, 2))
        self.assertEqual(self.ramp.integral(Fraction(1, 2), 1), Fraction(1, 2))
        part = self.ramp.restrict_to(Fraction(1, 2), Fraction(3, 2))
        self.assertEqual(part.domain, (Fraction(1, 2), Fraction(3, 2)))
        self.assertEqual(part.integral(), Fraction(1, 2) + Fraction(5, 8))

    def test_abs_and_sup(self) -> None:
        p = PiecewisePoly.polynomial(-1, 2, (-1, 1))
        self.assertEqual(p.abs().integral(), Fraction(5, 2))
        q = PiecewisePoly.polynomial(0, 2, (0, -1, 1))
        self.assertEqual(q.sup_abs(), 2)
        self.assertEqual(q.value_range(), (Fraction(-1, 4), Fraction(2)))

    def test_roots_skip_flat_pieces(self) -> None:
        p = PiecewisePoly.from_pieces([(0, 1, (0, 1)), (1, 2, (1,))])
        self.assertEqual(p.roots(Fraction(1, 2)), [Fraction(1, 2)])
        self.assertEqual(p.roots(1), [])

    def test_primitive_is_continuous(self) -> None:
        p = PiecewisePoly.from_pieces([(0, 1, (1,)), (1, 2, (2,))])
        primitive = p.primitive()
        self.assertTrue(primitive.is_continuous())
        self.assertEqual(primitive.value(2, -1), 3)

    def test_normalized_merges_equal_pieces(self) -> None:
        p = PiecewisePoly.from_pieces([(0, 1, (1,)), (1, 2, (1,))])
        self.assertEqual(p.normalized().breakpoints, (0, 2))

    def test_arithmetic_aligns_breakpoints(self) -> None:
        step = step_function(0, 2, 1, 3)
        total = self.ramp + step
        self.assertEqual(total.value(Fraction(3, 2)), Fraction(9, 2))
        self.assertEqual((self.ramp * step).integral(), Fraction(9, 2))
        with self.assertRaises(ValueError):
            _ = self.ramp + PiecewisePoly.zero(0, 3)

    def test_masked(self) -> None:
        one = PiecewisePoly.constant(0, 4, 1)
        masked = one.masked([(Fraction(1), Fraction(2))])
        self.assertEqual(masked.integral(), 1)


if __name__ == "__main__":
    unittest.main()
