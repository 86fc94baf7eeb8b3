"""Exponential sums mod p: difference polynomials, the squared-modulus
decomposition identity, and explicit Weil-type bound audits.

The independent oracle throughout is a direct cmath evaluation of
sum(chi(x) e(f(x)/p)), no shared code with the library implementation.
"""

import cmath
import math
import random

import pytest

from lfunlab.chars import char_value, get_table
from lfunlab.expsum import (
    Polynomial,
    complete_sum,
    difference_poly,
    lemma2_defect,
    lemma3_report,
    sample_polynomial,
    weighted_char_sum,
    weighted_char_sum_all,
)


def poly_mod(coefficients, x, p):
    return sum(c * pow(x, i, p) for i, c in enumerate(coefficients)) % p


def brute_complete_sum(p, coefficients):
    return sum(cmath.exp(2j * cmath.pi * poly_mod(coefficients, y, p) / p) for y in range(1, p))


def brute_weighted_sum(t, j, f):
    p = t.q
    return sum(
        char_value(t, j, x) * cmath.exp(2j * cmath.pi * poly_mod(f.coefficients, x, p) / p)
        for x in range(1, p)
    )


class TestPolynomial:
    def test_parse(self):
        f = Polynomial.parse("1,0,3,2")
        assert f.coefficients == (1, 0, 3, 2)
        assert f.degree == 3
        assert str(f) == "1,0,3,2"

    def test_parse_rejects_garbage(self):
        for bad in ("", "5", "1,a,2", "1.5,2"):
            with pytest.raises(ValueError):
                Polynomial.parse(bad)

    def test_requires_degree_at_least_one(self):
        with pytest.raises(ValueError):
            Polynomial((7,))

    def test_coprime_check(self):
        assert Polynomial((1, 0, 3)).coprime_to(3)
        assert not Polynomial((3, 6, 9)).coprime_to(3)


class TestDifferencePoly:
    def test_x_one_vanishes(self):
        f = Polynomial((4, 1, 2, 3))
        g = difference_poly(f, 1, 7)
        assert g.coefficients == (0, 0, 0, 0)
        assert g.degenerate

    def test_linear_example(self):
        g = difference_poly(Polynomial((0, 1)), 2, 5)
        assert g.coefficients == (0, 1)
        assert not g.degenerate

    def test_square_degenerate_at_minus_one(self):
        # 6^2 = 36 = 1 mod 7, so x=6 kills the quadratic term
        g = difference_poly(Polynomial((0, 0, 1)), 6, 7)
        assert g.coefficients == (0, 0, 0)
        assert g.degenerate

    def test_formula_bi(self):
        rng = random.Random(11)
        for _ in range(50):
            p = rng.choice([5, 7, 11, 13])
            f = Polynomial(tuple(rng.randrange(p) for _ in range(rng.randint(2, 5))))
            x = rng.randrange(1, p)
            g = difference_poly(f, x, p)
            assert g.coefficients[0] == 0
            for i, (a_i, b_i) in enumerate(zip(f.coefficients, g.coefficients)):
                assert b_i == a_i * (pow(x, i, p) - 1) % p

    def test_matches_fxy_minus_fy(self):
        # complete_sum of the difference poly equals the literal sum over
        # y of e((f(xy) - f(y))/p)
        rng = random.Random(5)
        for _ in range(25):
            p = rng.choice([5, 7, 11])
            f = Polynomial(tuple(rng.randrange(p) for _ in range(rng.randint(2, 5))))
            x = rng.randrange(2, p)
            g = difference_poly(f, x, p)
            lhs = complete_sum(p, g.coefficients)
            rhs = sum(
                cmath.exp(
                    2j
                    * cmath.pi
                    * ((poly_mod(f.coefficients, x * y % p, p) - poly_mod(f.coefficients, y, p)) % p)
                    / p
                )
                for y in range(1, p)
            )
            assert abs(lhs - rhs) < 1e-10

    def test_rejects_bad_inputs(self):
        f = Polynomial((0, 1))
        with pytest.raises(ValueError):
            difference_poly(f, 1, 6)  # composite modulus
        with pytest.raises(ValueError):
            difference_poly(f, 0, 5)
        with pytest.raises(ValueError):
            difference_poly(f, 5, 5)


class TestCompleteSum:
    @pytest.mark.parametrize("p", [5, 7, 13])
    @pytest.mark.parametrize("c", [1, 2, 3])
    def test_linear_is_minus_one(self, p, c):
        assert abs(complete_sum(p, (0, c)) - (-1)) < 1e-12

    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_zero_polynomial_exact(self, p):
        assert complete_sum(p, (0, 0)) == complex(p - 1)
        assert complete_sum(p, (p, 2 * p, p * p)) == complex(p - 1)

    def test_quadratic_gauss_modulus(self):
        s = complete_sum(5, (0, 0, 1))
        assert abs(abs(s + 1) - math.sqrt(5)) < 1e-12

    def test_against_cmath_oracle(self):
        rng = random.Random(3)
        for _ in range(30):
            p = rng.choice([5, 7, 11, 13])
            coeffs = tuple(rng.randrange(-10, 30) for _ in range(rng.randint(2, 6)))
            assert abs(complete_sum(p, coeffs) - brute_complete_sum(p, coeffs)) < 1e-11

    def test_completion_identity(self):
        # sum over y=1..p-1 equals full period sum minus the y=0 term
        rng = random.Random(9)
        for _ in range(20):
            p = rng.choice([5, 7, 11])
            coeffs = tuple(rng.randrange(p) for _ in range(3))
            full = sum(
                cmath.exp(2j * cmath.pi * poly_mod(coeffs, y, p) / p) for y in range(p)
            )
            assert abs(complete_sum(p, coeffs) - (full - cmath.exp(2j * cmath.pi * coeffs[0] / p))) < 1e-12


class TestWeightedCharSum:
    def test_gauss_sum_modulus(self):
        t = get_table(5)
        f = Polynomial((0, 1))
        for j in range(t.phi):
            if j == t.principal_index:
                continue
            assert abs(abs(weighted_char_sum(t, j, f)) - math.sqrt(5)) < 1e-9

    def test_principal_zero_polynomial(self):
        t = get_table(7)
        assert abs(weighted_char_sum(t, t.principal_index, Polynomial((0, 0))) - 6) < 1e-12

    def test_cubic_weil_bound(self):
        t = get_table(7)
        f = Polynomial((0, 1, 0, 1))  # x^3 + x
        for j in range(t.phi):
            assert abs(weighted_char_sum(t, j, f)) <= 3 * math.sqrt(7) + 1

    def test_vector_matches_scalar_and_oracle(self):
        t = get_table(11)
        f = Polynomial((3, 1, 4, 1, 5))
        sums = weighted_char_sum_all(t, f)
        for j in range(t.phi):
            assert abs(sums[j] - weighted_char_sum(t, j, f)) < 1e-12
            assert abs(sums[j] - brute_weighted_sum(t, j, f)) < 1e-10

    def test_rejects_composite_modulus_table(self):
        t = get_table(12)
        with pytest.raises(ValueError):
            weighted_char_sum(t, 1, Polynomial((0, 1)))


class TestLemma2Defect:
    def test_linear(self):
        assert lemma2_defect(get_table(5), Polynomial((0, 1))) < 1e-8

    def test_cubic_example(self):
        assert lemma2_defect(get_table(13), Polynomial((1, 1, 0, 2))) < 1e-7

    def test_constant_polynomial_both_sides_square(self):
        t = get_table(7)
        f = Polynomial((3, 0))
        assert lemma2_defect(t, f) < 1e-8
        s0 = weighted_char_sum(t, t.principal_index, f)
        assert abs(abs(s0) ** 2 - 36) < 1e-10

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_random_polynomials(self, p):
        rng = random.Random(1000 + p)
        t = get_table(p)
        for _ in range(20):
            f = sample_polynomial(rng, rng.randint(1, 4), p)
            assert lemma2_defect(t, f) < 1e-7 * p


class TestLemma3Report:
    def test_linear_no_degenerate(self):
        audit = lemma3_report(11, Polynomial((0, 1)))
        assert audit.degenerate_x == ()
        assert audit.all_ok
        for entry in audit.entries:
            assert abs(entry.abs_sum - 1.0) < 1e-12  # every completed sum is -1

    def test_square_mod7(self):
        audit = lemma3_report(7, Polynomial((0, 0, 1)))
        assert audit.degenerate_x == (6,)
        assert audit.degenerate_values_ok
        assert audit.degenerate_count_ok  # 1 <= k-1 = 1
        assert audit.degenerate_x_bound_ok  # 6 >= sqrt(7)
        assert audit.all_ok

    def test_cube_mod11_no_roots(self):
        audit = lemma3_report(11, Polynomial((0, 0, 0, 1)))
        assert audit.degenerate_x == ()
        assert audit.all_ok

    def test_cube_mod13_two_roots(self):
        audit = lemma3_report(13, Polynomial((0, 0, 0, 1)))
        assert audit.degenerate_x == (3, 9)
        assert audit.degenerate_count_ok  # 2 <= k-1 = 2
        assert audit.all_ok

    def test_degree_drop_uses_effective_degree(self):
        # b4 = x^4 - 1 = 0 for every unit mod 5, so each difference poly
        # collapses to degree 1
        audit = lemma3_report(5, Polynomial((0, 1, 0, 0, 1)))
        assert audit.all_ok
        for entry in audit.entries:
            assert entry.effective_degree == 1
            assert abs(entry.abs_sum - 1.0) < 1e-12

    def test_weil_bound_sweep(self):
        rng = random.Random(97)
        primes = [p for p in range(11, 98) if all(p % d for d in range(2, p))]
        for p in primes:
            for _ in range(3):
                f = sample_polynomial(rng, rng.randint(2, 4), p)
                audit = lemma3_report(p, f)
                assert audit.bounds_ok, (p, f)
                assert audit.degenerate_values_ok and audit.degenerate_count_ok

    def test_rejects_zero_mod_p(self):
        with pytest.raises(ValueError):
            lemma3_report(7, Polynomial((7, 14, 21)))

    def test_rejects_constant_mod_p(self):
        # 1 + 7x reduces to a nonzero constant, so the degenerate-count
        # bound has no content
        with pytest.raises(ValueError):
            lemma3_report(7, Polynomial((1, 7)))


class TestSamplePolynomial:
    def test_shape_and_range(self):
        rng = random.Random(0)
        for _ in range(50):
            f = sample_polynomial(rng, 4, 13)
            assert f.degree == 4
            assert all(0 <= c < 13 for c in f.coefficients)
            assert any(c % 13 for c in f.coefficients[1:])

    def test_deterministic_for_seed(self):
        a = sample_polynomial(random.Random(42), 3, 11)
        b = sample_polynomial(random.Random(42), 3, 11)
        assert a == b
