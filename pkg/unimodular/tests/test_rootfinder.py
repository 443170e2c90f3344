import mpmath
import numpy as np
from django.test import SimpleTestCase, tag

from unimodular.config import MethodConfig
from unimodular.exceptions import NoConvergence
from unimodular.families import FamilySpec, make
from unimodular.measures import fiber_coefficients
from unimodular.polycore import CPoly, IntPoly, invert, substitute_y_xn
from unimodular.rootfinder import (
    Census, RootSet, cauchy_radius, census_kind, classify, find_roots, find_roots_batch,
)

LEHMER = IntPoly([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])


def random_cpoly(rng, degree):
    coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return CPoly(coeffs)


class FindRootsTests(SimpleTestCase):
    def test_matches_numpy_on_random_polynomials(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            p = random_cpoly(rng, int(rng.integers(2, 30)))
            rs = find_roots(p)
            self.assertEqual(rs.degree, p.deg)
            reference = np.roots(p.coeffs[::-1])
            for z in rs.roots:
                self.assertLess(np.abs(reference - z).min(), 1e-6 * max(1.0, abs(z)))

    def test_linear(self):
        rs = find_roots(CPoly([-1, 2]))
        self.assertAlmostEqual(complex(rs.roots[0]), 0.5)

    def test_zero_roots_are_deflated(self):
        rs = find_roots(CPoly([0, 0, 1, 1]))
        self.assertEqual(rs.deflated, 2)
        self.assertEqual(rs.count, 1)
        self.assertAlmostEqual(complex(rs.roots[0]), -1.0)
        self.assertEqual(len(rs.all_roots()), 3)

    def test_monomial(self):
        rs = find_roots(CPoly([0, 0, 0, 5]))
        self.assertEqual(rs.count, 0)
        self.assertEqual(rs.degree, 3)

    def test_constant_rejected(self):
        with self.assertRaises(ValueError):
            find_roots(CPoly([3]))

    def test_batch_shape(self):
        rng = np.random.default_rng(5)
        coeffs = rng.normal(size=(7, 6)) + 1j * rng.normal(size=(7, 6))
        roots, residuals, _ = find_roots_batch(coeffs)
        self.assertEqual(roots.shape, (7, 5))
        self.assertTrue((residuals < 1e-10).all())

    def test_cauchy_radius_bounds_roots(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            p = random_cpoly(rng, 12)
            radius = cauchy_radius(p.coeffs)[0]
            self.assertTrue((np.abs(np.roots(p.coeffs[::-1])) <= radius * (1 + 1e-9)).all())

    def test_high_degree_does_not_overflow(self):
        p = substitute_y_xn(invert(make(FamilySpec('P', (2, 3)))), 300).to_cpoly()
        rs = find_roots(p)
        self.assertEqual(rs.count, p.deg)
        self.assertTrue(np.isfinite(rs.roots).all())

    def test_root_hit_exactly_outside_the_disc_is_kept(self):
        # this fiber lands an iterate on an exact zero of the reversed polynomial
        _, coeffs = fiber_coefficients(make(FamilySpec('P', (2, 3))), [0.0084228515625], MethodConfig())
        roots, residuals, _ = find_roots_batch(coeffs)
        reference = np.roots(coeffs[0][::-1])
        np.testing.assert_allclose(np.sort(np.abs(roots[0])), np.sort(np.abs(reference)), atol=1e-9)
        np.testing.assert_allclose(np.abs(roots[0]), [1.0, 1.0], atol=1e-9)
        self.assertTrue((residuals < 1e-12).all())

    def test_every_returned_root_meets_the_residual_bound(self):
        rng = np.random.default_rng(77)
        coeffs = rng.integers(-3, 4, size=(64, 9)).astype(complex)
        coeffs[:, 0] = np.where(coeffs[:, 0] == 0, 1.0, coeffs[:, 0])
        coeffs[:, -1] = 1.0
        _, residuals, _ = find_roots_batch(coeffs)
        self.assertTrue((residuals <= np.sqrt(np.finfo(float).eps)).all())

    def test_unconverged_roots_raise(self):
        p = random_cpoly(np.random.default_rng(41), 24)
        with self.assertRaises(NoConvergence):
            find_roots(p, MethodConfig(max_iter=1))


class CensusTests(SimpleTestCase):
    def test_lehmer_is_salem(self):
        census = classify(find_roots(LEHMER.to_cpoly()))
        self.assertEqual((census.I, census.U, census.O, census.d), (1, 8, 1, 10))
        self.assertEqual(census_kind(census), 'salem')

    def test_golden_ratio_is_pisot(self):
        census = classify(find_roots(CPoly([-1, -1, 1])))
        self.assertEqual(census_kind(census), 'pisot')

    def test_cyclotomic_is_kronecker(self):
        census = classify(find_roots(CPoly([1, 1, 1])))
        self.assertEqual(census.U, 2)
        self.assertEqual(census_kind(census), 'kronecker')
        self.assertEqual(census.c_ratio, 0.0)

    def test_deflated_zeros_count_as_internal(self):
        census = classify(find_roots(CPoly([0, 0, 1, 1])))
        self.assertEqual((census.I, census.U, census.O), (2, 1, 0))

    def test_counts_sum_to_degree(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            p = random_cpoly(rng, int(rng.integers(1, 40)))
            census = classify(find_roots(p))
            self.assertEqual(census.I + census.U + census.O, p.deg)

    def test_additive_under_products(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            p = random_cpoly(rng, int(rng.integers(1, 15)))
            q = random_cpoly(rng, int(rng.integers(1, 15)))
            joint = classify(find_roots(p * q))
            split = classify(find_roots(p)) + classify(find_roots(q))
            self.assertEqual(joint.as_dict(), split.as_dict())

    def test_band_validation(self):
        rs = find_roots(CPoly([1, 1]))
        for tau in (0, -1e-3, 0.5):
            with self.assertRaises(ValueError):
                classify(rs, tau)

    def test_inconsistent_census_rejected(self):
        with self.assertRaises(ValueError):
            Census(I=1, U=1, O=1, d=4, band=1e-9)

    def test_wide_band_absorbs_near_roots(self):
        rs = RootSet(np.array([1.001, 0.5, 3.0]), np.zeros(3))
        self.assertEqual(classify(rs, 1e-9).as_dict()['O'], 2)
        self.assertEqual(classify(rs, 1e-2).as_dict()['U'], 1)


class SubstitutedCensusTests(SimpleTestCase):
    def test_inverted_p23_at_60(self):
        p = substitute_y_xn(invert(make(FamilySpec('P', (2, 3)))), 60)
        census = classify(find_roots(p.to_cpoly()), MethodConfig().tau)
        self.assertEqual(census.d, 242)
        self.assertEqual(census.I, 28)
        self.assertEqual(census.O, 28)

    @tag('slow')
    def test_inverted_p23_ratio_approaches_limit(self):
        lc = np.arccos(0.75) / np.pi
        p = substitute_y_xn(invert(make(FamilySpec('P', (2, 3)))), 300)
        census = classify(find_roots(p.to_cpoly()))
        self.assertLess(abs(census.c_ratio - lc), 4 / census.d)


class RootPropertyTests(SimpleTestCase):
    def test_small_examples(self):
        rs = find_roots(CPoly([-4, 0, 1]))
        np.testing.assert_allclose(np.sort(rs.roots.real), [-2, 2], atol=1e-12)
        rs = find_roots(CPoly([0, -1, 0, 1]))
        self.assertEqual(rs.deflated, 1)
        np.testing.assert_allclose(np.sort(rs.roots.real), [-1, 1], atol=1e-12)

    def test_scaling_invariance(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            p = random_cpoly(rng, 12)
            c = complex(rng.normal(), rng.normal())
            base = find_roots(p).roots
            scaled = find_roots(p.scale(c)).roots
            for z in scaled:
                self.assertLess(np.abs(base - z).min(), 1e-10 * max(1.0, abs(z)))

    def test_family_residuals(self):
        P = make(FamilySpec('P', (2, 3)))
        for n in (20, 99, 198):
            p = substitute_y_xn(P, n).to_cpoly()
            rs = find_roots(p)
            self.assertLessEqual(rs.residuals.max(), 1e-8 * (1 + np.abs(p.coeffs).max()))

    def test_reciprocal_balance(self):
        p = substitute_y_xn(make(FamilySpec('P', (3, 5))), 17).to_cpoly()
        census = classify(find_roots(p), 1e-6)
        self.assertEqual(census.I, census.O)

    def test_against_mpmath(self):
        rng = np.random.default_rng(41)
        for _ in range(5):
            p = random_cpoly(rng, 10)
            oracle = np.array([complex(z) for z in mpmath.polyroots(
                [complex(c) for c in p.coeffs[::-1]], maxsteps=200, extraprec=60)])
            for z in find_roots(p).roots:
                self.assertLess(np.abs(oracle - z).min(), 1e-9)
