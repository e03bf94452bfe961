import math
import unittest

import numpy as np

from spinpath.chsh import (CLASSICAL_BOUND, TSIRELSON, BellAngleSet, SValueRecord,
                           analytic_record, azimuthal_optimal_angle,
                           azimuthal_optimal_setting, bell_angles, correlations,
                           grid_maximize_s, maximize_surface, polar_optimal_angles,
                           s_azimuthal, s_general, s_no_adjustment, s_polar,
                           s_polar_max, standard_angles)
from spinpath.errors import DomainError, ValidationError
from spinpath.quantum import path_direction, spin_direction

SQRT2 = math.sqrt(2.0)


def random_angles(rng):
    a1, a2, a1p, a2p, b1, b2, b1p, b2p = rng.uniform(0, 2 * math.pi, 8)
    return BellAngleSet(alpha=path_direction(a1, a2), alpha_p=path_direction(a1p, a2p),
                        beta=spin_direction(b1, b2), beta_p=spin_direction(b1p, b2p))


class BellAngleSetTestCase(unittest.TestCase):

    def test_subspaces_checked(self):
        with self.assertRaises(ValidationError) as caught:
            BellAngleSet(alpha=path_direction(0.0), alpha_p=path_direction(1.0),
                         beta=path_direction(0.5), beta_p=spin_direction(2.0))
        self.assertEqual(caught.exception.field, 'beta')

    def test_standard_angles(self):
        angles = standard_angles()
        self.assertEqual(angles.alpha.polar, 0.0)
        self.assertEqual(angles.alpha_p.polar, math.pi / 2)
        self.assertEqual(angles.beta.polar, math.pi / 4)
        self.assertEqual(angles.beta_p.polar, 3 * math.pi / 4)

    def test_pair_signs(self):
        self.assertEqual([sign for _, _, sign in standard_angles().pairs()],
                         [1, -1, 1, 1])

    def test_record_bound(self):
        angles = standard_angles()
        self.assertRaises(ValidationError, SValueRecord, s=3.0, angles=angles)
        self.assertEqual(SValueRecord(s=3.0, angles=angles, method='counts').s, 3.0)


class SGeneralTestCase(unittest.TestCase):

    def test_maximum_at_zero(self):
        self.assertAlmostEqual(s_general(standard_angles(), 0.0), TSIRELSON, places=12)

    def test_zero_at_pi(self):
        self.assertAlmostEqual(s_general(standard_angles(), math.pi), 0.0, places=12)

    def test_telescoped(self):
        angles = bell_angles(alpha1_p=0.0, beta1=0.6, beta1_p=0.6)
        value = correlations(angles, 0.4)[0]
        self.assertAlmostEqual(s_general(angles, 0.4), 2 * abs(value), places=12)
        self.assertLessEqual(s_general(angles, 0.4), CLASSICAL_BOUND + 1e-12)

    def test_tsirelson_bound(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            gamma = rng.uniform(0, 2 * math.pi)
            self.assertLessEqual(s_general(random_angles(rng), gamma), TSIRELSON + 1e-9)

    def test_no_adjustment_curve(self):
        for gamma in np.linspace(0, 2 * math.pi, 37):
            self.assertAlmostEqual(s_general(standard_angles(), gamma),
                                   SQRT2 * abs(1 + math.cos(gamma)), places=9)
        self.assertAlmostEqual(s_no_adjustment(0.0), TSIRELSON, places=9)
        self.assertAlmostEqual(s_no_adjustment(math.pi), 0.0, places=9)
        self.assertAlmostEqual(s_no_adjustment(math.pi / 2), SQRT2, places=9)


class PolarTestCase(unittest.TestCase):

    def test_examples(self):
        self.assertAlmostEqual(float(s_polar(math.pi / 2, math.pi / 4, 3 * math.pi / 4, 0.0)),
                               TSIRELSON, places=12)
        self.assertAlmostEqual(float(s_polar(math.pi / 2, 0.0, math.pi, math.pi / 2)),
                               2.0, places=12)
        self.assertAlmostEqual(float(s_polar(math.pi / 2, math.pi / 4, 3 * math.pi / 4,
                                             math.pi / 2)), SQRT2, places=12)

    def test_matches_projector_form(self):
        rng = np.random.default_rng(5)
        for a1p, b1, b1p, gamma in rng.uniform(0, 2 * math.pi, (2000, 4)):
            angles = bell_angles(a1p, b1, b1p)
            self.assertAlmostEqual(float(s_polar(a1p, b1, b1p, gamma)),
                                   s_general(angles, gamma), places=9)

    def test_broadcasts(self):
        beta = np.linspace(0, math.pi, 5)
        values = s_polar(math.pi / 2, beta[:, None], beta[None, :], 0.3)
        self.assertEqual(values.shape, (5, 5))

    def test_optimal_angles(self):
        beta1, beta1_p, alpha1_p = polar_optimal_angles(0.0)
        self.assertAlmostEqual(beta1, math.pi / 4)
        self.assertAlmostEqual(beta1_p, 3 * math.pi / 4)
        self.assertEqual(alpha1_p, math.pi / 2)
        beta1, beta1_p, _ = polar_optimal_angles(math.pi / 2)
        self.assertAlmostEqual(beta1, 0.0)
        self.assertAlmostEqual(beta1_p, math.pi)
        self.assertAlmostEqual(polar_optimal_angles(math.pi / 3)[0], 0.46365, places=5)

    def test_maximum(self):
        self.assertAlmostEqual(s_polar_max(0.0), TSIRELSON)
        self.assertAlmostEqual(s_polar_max(math.pi / 2), 2.0)
        self.assertAlmostEqual(s_polar_max(math.pi / 4), 2 * math.sqrt(1.5))

    def test_period_pi(self):
        for gamma in np.linspace(0, 2 * math.pi, 25):
            self.assertAlmostEqual(s_polar_max(gamma), s_polar_max(gamma + math.pi),
                                   places=9)

    def test_optimum_is_stationary(self):
        h = 1e-5
        for gamma in np.arange(25) * (2 * math.pi / 25):
            beta1, beta1_p, alpha1_p = polar_optimal_angles(gamma)
            point = np.array([alpha1_p, beta1, beta1_p])
            gradient = []
            for k in range(3):
                step = np.zeros(3)
                step[k] = h
                upper = float(s_polar(*(point + step), gamma=gamma))
                lower = float(s_polar(*(point - step), gamma=gamma))
                gradient.append((upper - lower) / (2 * h))
            self.assertLess(np.linalg.norm(gradient), 1e-6)
            self.assertAlmostEqual(float(s_polar(alpha1_p, beta1, beta1_p, gamma)),
                                   s_polar_max(gamma), places=12)


class AzimuthalTestCase(unittest.TestCase):

    def test_examples(self):
        self.assertAlmostEqual(float(s_azimuthal(0.7, 0.0, 0.0, 0.7)), TSIRELSON, places=12)
        self.assertAlmostEqual(float(s_azimuthal(0.0, 0.0, 0.0, math.pi)), 0.0, places=12)
        self.assertAlmostEqual(float(s_azimuthal(math.pi / 2, 0.0, 0.0, 0.0)), SQRT2,
                               places=12)

    def test_compensation_for_random_gamma(self):
        rng = np.random.default_rng(9)
        for gamma in rng.uniform(0, 2 * math.pi, 100):
            self.assertAlmostEqual(float(s_azimuthal(gamma, 0.0, 0.0, gamma)), TSIRELSON,
                                   places=9)

    def test_matches_projector_form(self):
        rng = np.random.default_rng(6)
        for alpha2_p, gamma in rng.uniform(0, 2 * math.pi, (2000, 2)):
            self.assertAlmostEqual(float(s_azimuthal(alpha2_p, 0.0, 0.0, gamma)),
                                   s_general(standard_angles(alpha2_p), gamma), places=9)

    def test_optimal_angle(self):
        self.assertEqual(azimuthal_optimal_angle(0.0), 0.0)
        self.assertAlmostEqual(azimuthal_optimal_angle(math.pi / 6), math.pi / 6)
        self.assertAlmostEqual(azimuthal_optimal_angle(4 * math.pi / 3), math.pi / 3)

    def test_optimal_setting_reaches_maximum(self):
        rng = np.random.default_rng(10)
        for gamma in rng.uniform(-4 * math.pi, 4 * math.pi, 100):
            alpha2_p, beta2 = azimuthal_optimal_setting(gamma)
            self.assertTrue(0.0 <= alpha2_p < math.pi)
            self.assertIn(beta2, (0.0, math.pi))
            self.assertAlmostEqual(float(s_azimuthal(alpha2_p, beta2, beta2, gamma)),
                                   TSIRELSON, places=9)

    def test_half_turn_needs_spin_azimuth(self):
        self.assertEqual(azimuthal_optimal_setting(math.pi / 6)[1], 0.0)
        self.assertEqual(azimuthal_optimal_setting(4 * math.pi / 3)[1], math.pi)


class MaximizeSurfaceTestCase(unittest.TestCase):

    def test_quadratic(self):
        def objective(x, y):
            return -(x - 0.3) ** 2 - 2 * (y + 0.7) ** 2

        found = maximize_surface(objective, [(-1, 1), (-1, 1)], 0.05)
        self.assertTrue(found.success)
        self.assertAlmostEqual(found.x[0], 0.3, places=6)
        self.assertAlmostEqual(found.x[1], -0.7, places=6)
        self.assertAlmostEqual(found.fun, 0.0, places=10)

    def test_one_dimension(self):
        found = maximize_surface(np.cos, [(0.0, 2 * math.pi)], math.pi / 180)
        self.assertAlmostEqual(found.fun, 1.0, places=12)


class GridMaximizeTestCase(unittest.TestCase):

    def test_endpoints(self):
        beta1, beta1_p, s = grid_maximize_s(0.0)
        self.assertAlmostEqual(s, TSIRELSON, places=6)
        self.assertAlmostEqual(beta1, math.pi / 4, places=5)
        self.assertAlmostEqual(beta1_p, 3 * math.pi / 4, places=5)
        self.assertAlmostEqual(grid_maximize_s(math.pi / 2)[2], 2.0, places=6)

    def test_gamma_pi_branch(self):
        beta1, beta1_p, s = grid_maximize_s(math.pi)
        self.assertAlmostEqual(s, TSIRELSON, places=6)
        self.assertAlmostEqual(beta1, -math.pi / 4, places=5)
        self.assertAlmostEqual(beta1_p, 5 * math.pi / 4, places=5)

    def test_against_closed_form(self):
        for gamma in np.arange(25) * (2 * math.pi / 25):
            beta1, beta1_p, s = grid_maximize_s(gamma)
            self.assertGreaterEqual(s, s_polar_max(gamma) - 1e-6)
            self.assertLessEqual(s, s_polar_max(gamma) + 1e-9)
            self.assertLess(abs(beta1 - math.atan(math.cos(gamma))), 1e-5)
            self.assertLess(abs(beta1_p - (math.pi - beta1)), 1e-5)

    def test_custom_surface(self):
        def surface(beta1, beta1_p):
            return 0.5 * s_polar(math.pi / 2, beta1, beta1_p, 0.0)

        beta1, _, s = grid_maximize_s(0.0, surface=surface)
        self.assertAlmostEqual(s, 0.5 * TSIRELSON, places=6)
        self.assertAlmostEqual(beta1, math.pi / 4, places=5)

    def test_returns_builtin_float(self):
        s = grid_maximize_s(0.3)[2]
        self.assertIs(type(s), float)

    def test_coarse_step_bound(self):
        self.assertRaises(DomainError, grid_maximize_s, 0.0, coarse_step=math.pi / 32)
        self.assertRaises(DomainError, grid_maximize_s, 0.0, coarse_step=0.0)
        s = grid_maximize_s(0.0, coarse_step=math.pi / 64)[2]
        self.assertAlmostEqual(s, TSIRELSON, places=6)

    def test_refine_tol_bound(self):
        self.assertRaises(DomainError, grid_maximize_s, 0.0, refine_tol=1e-5)
        self.assertRaises(DomainError, grid_maximize_s, 0.0, refine_tol=-1e-7)


class AnalyticRecordTestCase(unittest.TestCase):

    def test_schemes_agree_with_projectors(self):
        for gamma in np.linspace(0, 2 * math.pi, 13):
            for scheme in ('none', 'polar', 'azimuthal'):
                record = analytic_record(gamma, scheme)
                self.assertEqual(record.method, 'analytic')
                self.assertAlmostEqual(s_general(record.angles, gamma), record.s, places=9)

    def test_values(self):
        self.assertAlmostEqual(analytic_record(math.pi, 'azimuthal').s, TSIRELSON)
        self.assertAlmostEqual(analytic_record(math.pi / 2, 'polar').s, 2.0)
        self.assertAlmostEqual(analytic_record(math.pi, 'none').s, 0.0)

    def test_unknown_scheme(self):
        self.assertRaises(ValidationError, analytic_record, 0.0, 'diagonal')


if __name__ == "__main__":
    unittest.main()
