import math
from unittest import TestCase

import numpy as np
from scipy import integrate, special, stats

from citest.distributions import ChiSquaredDist, log_sf_chisq
from core.exceptions import DegenerateTestError


def quad_sf(stat, dof):
    value, _ = integrate.quad(stats.chi2.pdf, stat, math.inf, args=(dof,))
    return value


def log_quad_sf(stat, dof):
    """log of the upper tail, integrating the density relative to its value at stat"""
    head = stats.chi2.logpdf(stat, dof)
    value, _ = integrate.quad(
        lambda u: math.exp(stats.chi2.logpdf(stat + u, dof) - head),
        0,
        math.inf,
        epsabs=0,
        epsrel=1e-12,
        limit=200,
    )
    return head + math.log(value)


TAIL_DOFS = (1, 2, 5, 12, 48, 192)
TAIL_PROBABILITIES = (0.999, 0.9, 0.5, 0.05, 1e-5, 1e-20, 1e-80, 1e-160, 1e-300)
# the density of one dof is too sharp near zero for quadrature at p = 0.999
QUADRATURE_PROBABILITIES = TAIL_PROBABILITIES[1:]


class LogSurvivalTestCase(TestCase):
    def test_zero_statistic(self):
        self.assertEqual(log_sf_chisq(0.0, 5), 0.0)

    def test_two_dof_closed_form(self):
        self.assertEqual(log_sf_chisq(2.0, 2), -1.0)
        self.assertEqual(log_sf_chisq(5000.0, 2), -2500.0)

    def test_five_percent_point(self):
        self.assertAlmostEqual(log_sf_chisq(3.8415, 1), math.log(0.05), delta=1e-4)

    def test_against_quadrature(self):
        for stat, dof in ((0.5, 1), (3.0, 4), (11.0, 12), (40.0, 48), (150.0, 192)):
            with self.subTest(stat=stat, dof=dof):
                self.assertAlmostEqual(
                    math.exp(log_sf_chisq(stat, dof)), quad_sf(stat, dof), delta=1e-7
                )

    def test_both_branches_against_scipy(self):
        # below and above x = a + 1
        for stat, dof in ((1.0, 6), (7.9, 6), (8.1, 6), (200.0, 192), (300.0, 192)):
            with self.subTest(stat=stat, dof=dof):
                self.assertAlmostEqual(
                    log_sf_chisq(stat, dof),
                    stats.chi2.logsf(stat, dof),
                    delta=1e-9 * max(1.0, abs(stats.chi2.logsf(stat, dof))),
                )

    def test_deep_tail_stays_finite(self):
        # even dof: Q(a, x) = exp(-x) * sum_{k < a} x^k / k!
        x = 10000.0
        exact = -x + math.log(sum(x**k / math.factorial(k) for k in range(6)))
        value = log_sf_chisq(2 * x, 12)
        self.assertTrue(math.isfinite(value))
        self.assertAlmostEqual(value, exact, delta=1e-9 * abs(exact))

    def test_log_space_against_scipy(self):
        for dof in TAIL_DOFS:
            for p in TAIL_PROBABILITIES:
                stat = stats.chi2.isf(p, dof)
                with self.subTest(dof=dof, p=p):
                    self.assertAlmostEqual(
                        log_sf_chisq(stat, dof),
                        np.log(stats.chi2.sf(stat, dof)),
                        delta=1e-10,
                    )

    def test_log_space_against_quadrature(self):
        for dof in TAIL_DOFS:
            for p in QUADRATURE_PROBABILITIES:
                stat = stats.chi2.isf(p, dof)
                with self.subTest(dof=dof, p=p):
                    self.assertAlmostEqual(
                        log_sf_chisq(stat, dof), log_quad_sf(stat, dof), delta=1e-9
                    )

    def test_two_dof_across_tail(self):
        for p in TAIL_PROBABILITIES:
            stat = stats.chi2.isf(p, 2)
            with self.subTest(p=p):
                self.assertAlmostEqual(log_sf_chisq(stat, 2), -stat / 2, delta=1e-12)

    def test_odd_dof_deep_tail(self):
        # one dof: Q = 2 * Phi(-sqrt(stat))
        for stat in (50.0, 500.0, 1380.0, 5000.0, 20000.0):
            exact = math.log(2) + special.log_ndtr(-math.sqrt(stat))
            with self.subTest(stat=stat):
                self.assertAlmostEqual(
                    log_sf_chisq(stat, 1), exact, delta=1e-10 * abs(exact)
                )

    def test_monotone(self):
        values = [log_sf_chisq(stat, 12) for stat in (0.1, 1, 5, 12, 30, 100, 1000)]
        self.assertEqual(values, sorted(values, reverse=True))
        self.assertTrue(all(value <= 0 for value in values))

    def test_zero_dof(self):
        with self.assertRaises(DegenerateTestError):
            log_sf_chisq(1.0, 0)
        with self.assertRaises(DegenerateTestError):
            ChiSquaredDist(0)

    def test_negative_statistic(self):
        with self.assertRaises(ValueError):
            log_sf_chisq(-1.0, 3)

    def test_distribution_object(self):
        dist = ChiSquaredDist(2)
        self.assertAlmostEqual(dist.sf(2.0), math.exp(-1.0))
        self.assertEqual(dist.log_sf(2.0), -1.0)
