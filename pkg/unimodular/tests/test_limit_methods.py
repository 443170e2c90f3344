import math

import numpy as np
from django.test import SimpleTestCase, tag

from unimodular.config import MethodConfig
from unimodular.exceptions import PoleNearContour
from unimodular.families import FamilySpec, make, parse_family
from unimodular.limit_methods import (
    JumpPartition, cap_count_uni, find_jumps, lc_bm, lc_cap, lc_cap_auto, lc_cap_family, lc_mbm,
)
from unimodular.polycore import CPoly, invert, parse_poly, substitute_y_xn

LC_P23 = 0.1328095098966884
LC_P23_INV = 0.230053456162615

# coarse CAP settings for consistency checks between integrands
QUICK_CAP = MethodConfig(cap_points=1024, quad_tol=0.05)


def P(a, b):
    return make(FamilySpec('P', (a, b)))


class BMTests(SimpleTestCase):
    def test_p23(self):
        self.assertAlmostEqual(lc_bm(P(2, 3)).value, LC_P23, delta=5e-4)

    def test_symmetric_half_sampling(self):
        result = lc_bm(P(2, 3), MethodConfig(quad_points=1000))
        self.assertTrue(result.diagnostics['symmetric'])
        odd = lc_bm(P(2, 3), MethodConfig(quad_points=1001))
        self.assertFalse(odd.diagnostics['symmetric'])
        self.assertAlmostEqual(result.value, odd.value, delta=5e-3)

    def test_trinomial_family_is_all_unimodular(self):
        self.assertEqual(lc_bm(make(parse_family('T(1 + x - x^3)'))).value, 0.0)

    def test_nonreciprocal_is_clamped(self):
        result = lc_bm(parse_poly('y-2*x'))
        self.assertEqual(result.raw_value, 2.0)
        self.assertEqual(result.value, 1.0)
        self.assertTrue(result.nonreciprocal)

    def test_needs_y(self):
        with self.assertRaises(ValueError):
            lc_bm(parse_poly('1+x'))


class JumpPartitionTests(SimpleTestCase):
    def test_integral(self):
        partition = JumpPartition((0.0, 0.25, 0.75, 1.0), (1, 0, 1))
        self.assertEqual(partition.integral(), 0.5)
        self.assertEqual(partition.jumps, (0.25, 0.75))
        self.assertAlmostEqual(math.fsum(partition.widths), 1.0, places=15)

    def test_validation(self):
        for angles, values in (
            ((0.1, 1.0), (1,)),
            ((0.0, 0.5, 0.5, 1.0), (0, 1, 0)),
            ((0.0, 0.5, 1.0), (1,)),
            ((0.0, 0.5, 1.0), (1, 1)),
        ):
            with self.subTest(angles=angles, values=values):
                with self.assertRaises(ValueError):
                    JumpPartition(angles, values)

    def test_values_at(self):
        partition = JumpPartition((0.0, 0.25, 0.75, 1.0), (1, 0, 1))
        np.testing.assert_array_equal(partition.values_at([0.0, 0.1, 0.25, 0.5, 0.8, 1.0]), [1, 1, 0, 0, 1, 1])


class MBMTests(SimpleTestCase):
    def test_p23(self):
        self.assertAlmostEqual(lc_mbm(P(2, 3)).value, LC_P23, delta=1e-9)

    def test_inverted_p23(self):
        self.assertAlmostEqual(lc_mbm(invert(P(2, 3))).value, LC_P23_INV, delta=1e-9)

    def test_p13_is_one_third(self):
        self.assertAlmostEqual(lc_mbm(P(1, 3)).value, 1 / 3, delta=1e-9)

    def test_inverted_p23_jumps(self):
        partition = find_jumps(invert(P(2, 3)))
        t = math.acos(1 / 8) / (2 * math.pi)
        np.testing.assert_allclose(partition.jumps, [t, 1 - t], atol=1e-10)
        self.assertEqual(partition.values, (1, 0, 1))

    def test_jumps_are_symmetric(self):
        jumps = find_jumps(invert(P(3, 5))).jumps
        np.testing.assert_allclose(np.array(jumps) + np.array(jumps[::-1]), 1.0, atol=1e-10)

    def test_constant_count(self):
        partition = find_jumps(parse_poly('y-2*x'))
        self.assertEqual(partition.angles, (0.0, 1.0))
        self.assertEqual(partition.values, (1,))

    def test_bm_and_mbm_agree(self):
        for spec in ('P(2, 1)', 'inv:P(3, 2)', 'S(1, 3,+)'):
            with self.subTest(spec=spec):
                poly = make(parse_family(spec))
                self.assertAlmostEqual(lc_bm(poly).value, lc_mbm(poly).value, delta=1e-3)

    @tag('slow')
    def test_table_rows(self):
        for label, lc, lc_inv in (
            ('P(2, 1)', 0.1608612465103325, 0.333333333333333),
            ('P(3, 2)', 0.1871346248477649, 0.345086459236550),
            ('P(3, 1)', 0.1895159205822178, 0.368337855217854),
            ('T(1 + x - x^3)', 0.0, 0.132322561324637),
            ('[++000, ++0-0, 00000, 0-0++, 000++]', 0.2069305454044983, 0.206930545404498),
        ):
            spec = parse_family(label)
            with self.subTest(label=label):
                self.assertAlmostEqual(lc_mbm(make(spec)).value, lc, delta=1e-6)
                self.assertAlmostEqual(lc_mbm(make(spec.with_inversion())).value, lc_inv, delta=1e-6)


class ContourCountTests(SimpleTestCase):
    def test_raw_count(self):
        p = CPoly([1, -2.5, 1])
        self.assertAlmostEqual(cap_count_uni(p, normalize=False).value, 1.0, places=9)

    def test_fixed_radius(self):
        count = cap_count_uni(CPoly([1, 1, 1]), r=0.9, normalize=False)
        self.assertAlmostEqual(count.value, 0.0, places=9)
        self.assertEqual(count.r, 0.9)

    def test_normalized_against_census(self):
        p = substitute_y_xn(invert(P(2, 3)), 60).to_cpoly()
        self.assertAlmostEqual(cap_count_uni(p).value, 56 / 242, places=6)

    def test_pole_on_contour(self):
        with self.assertRaises(PoleNearContour):
            cap_count_uni(CPoly([-1, 0, 0, 0, 1]), r=1.0)


class CAPTests(SimpleTestCase):
    def test_nonreciprocal_counts_inside(self):
        cfg = MethodConfig(cap_points=256, cap_r=0.9, cap_n=10)
        result = lc_cap(parse_poly('y-2*x'), cfg)
        self.assertAlmostEqual(result.raw_value, 0.0, places=9)
        self.assertTrue(result.nonreciprocal)

    def test_family_integrand_matches_generic(self):
        generic = lc_cap(P(2, 3), QUICK_CAP, r=0.99, n=50)
        family = lc_cap_family(2, 3, 'direct', QUICK_CAP, r=0.99, n=50)
        self.assertAlmostEqual(generic.raw_value, family.raw_value, places=9)

    def test_inverted_family_integrand_matches_generic(self):
        generic = lc_cap(invert(P(3, 1)), QUICK_CAP, r=0.99, n=50)
        family = lc_cap_family(3, 1, 'inverted', QUICK_CAP, r=0.99, n=50)
        self.assertAlmostEqual(generic.raw_value, family.raw_value, places=9)

    def test_family_orientation_validation(self):
        with self.assertRaises(ValueError):
            lc_cap_family(2, 3, 'sideways')
        with self.assertRaises(ValueError):
            lc_cap_family(0, 3)
        with self.assertRaises(ValueError):
            lc_cap_family(1, 1, 'inverted')

    @tag('slow')
    def test_inverted_p23(self):
        self.assertAlmostEqual(lc_cap(invert(P(2, 3))).value, LC_P23_INV, delta=1e-4)

    @tag('slow')
    def test_p23(self):
        self.assertAlmostEqual(lc_cap(P(2, 3)).value, LC_P23, delta=1e-3)

    @tag('slow')
    def test_family_values(self):
        self.assertAlmostEqual(lc_cap_family(2, 3, 'inverted').value, LC_P23_INV, delta=1e-3)
        self.assertAlmostEqual(lc_cap_family(3, 1, 'inverted').value, 0.368337855217854, delta=1e-3)

    @tag('slow')
    def test_schedule(self):
        result = lc_cap_auto(P(2, 3))
        self.assertEqual(len(result.diagnostics['schedule']), 2)
        self.assertLess(result.diagnostics['error_estimate'], 1e-3)
        self.assertAlmostEqual(result.value, LC_P23, delta=1e-3)
