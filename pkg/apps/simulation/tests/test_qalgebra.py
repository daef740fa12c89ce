"""
q-변형 진동자 대수 테스트
"""
import math

import numpy as np
from django.test import SimpleTestCase

from apps.simulation.exceptions import ConfigurationError
from apps.simulation.qalgebra import (
    HARMONIC,
    DeformationParam,
    anharmonic_slope,
    coherent_amplitudes,
    converged_terms,
    f_of_n,
    f_of_n_array,
    log_q_number,
    mean_f_of_n,
    q_exp,
    q_factorial,
    q_log_exp,
    q_log_factorial,
    q_number,
    rabi_frequency_estimate,
    trap_level_energies,
    trap_level_energy,
    trap_level_energy_taylor,
)

SWEEP_TAUS = (0.004, 0.0047, 0.008)


class DeformationParamTest(SimpleTestCase):

    def test_q_is_cached_exponential(self):
        d = DeformationParam(0.004)
        self.assertEqual(d.q, math.exp(0.004))
        self.assertFalse(d.is_harmonic)

    def test_harmonic(self):
        self.assertTrue(HARMONIC.is_harmonic)
        self.assertEqual(HARMONIC.q, 1.0)

    def test_equality_by_tau(self):
        self.assertEqual(DeformationParam(0.004), DeformationParam(0.004))
        self.assertNotEqual(DeformationParam(0.004), DeformationParam(0.008))

    def test_non_finite_tau_rejected(self):
        with self.assertRaises(ConfigurationError):
            DeformationParam(float('inf'))
        with self.assertRaises(ConfigurationError):
            DeformationParam(float('nan'))


class QNumberTest(SimpleTestCase):

    def test_harmonic_limit_is_exact(self):
        for n in range(10):
            self.assertEqual(q_number(n, HARMONIC), float(n))

    def test_two_is_two_cosh(self):
        for tau in SWEEP_TAUS:
            self.assertAlmostEqual(q_number(2, DeformationParam(tau)), 2 * math.cosh(tau), places=14)

    def test_known_value(self):
        self.assertAlmostEqual(q_number(2, DeformationParam(0.004)), 2.000016000021333, places=14)

    def test_array_input(self):
        d = DeformationParam(0.008)
        values = q_number(np.arange(6), d)
        expected = [q_number(k, d) for k in range(6)]
        np.testing.assert_allclose(values, expected, rtol=1e-15)
        np.testing.assert_array_equal(q_number(np.arange(6), HARMONIC), np.arange(6.0))

    def test_deformed_exceeds_integer(self):
        d = DeformationParam(0.004)
        for n in range(2, 33):
            self.assertGreater(q_number(n, d), n)

    def test_symmetric_in_tau(self):
        for tau in SWEEP_TAUS + (0.3,):
            for x in (0.5, 1, 2, 7, 32):
                self.assertAlmostEqual(
                    q_number(x, DeformationParam(tau)), q_number(x, DeformationParam(-tau)), places=12,
                )

    def test_strictly_increasing_in_x(self):
        x = np.linspace(0.0, 40.0, 401)
        for tau in (0.0, 0.004, -0.004, 0.1):
            values = q_number(x, DeformationParam(tau))
            self.assertTrue(np.all(np.diff(values) > 0), msg=tau)

    def test_log_form_matches_direct(self):
        for tau in SWEEP_TAUS + (-0.0047, 0.3):
            d = DeformationParam(tau)
            for k in range(1, 33):
                self.assertAlmostEqual(log_q_number(k, d), math.log(q_number(k, d)), places=12)
        np.testing.assert_allclose(log_q_number(np.arange(1, 6), HARMONIC), np.log(np.arange(1, 6)))


class QFactorialTest(SimpleTestCase):

    def test_zero_and_one(self):
        d = DeformationParam(0.3)
        self.assertEqual(q_log_factorial(0, d), 0.0)
        self.assertEqual(q_log_factorial(1, d), 0.0)

    def test_harmonic_reduces_to_factorial(self):
        self.assertAlmostEqual(q_log_factorial(3, HARMONIC), math.log(6), places=14)
        self.assertAlmostEqual(q_factorial(5, HARMONIC), 120.0, places=9)
        self.assertAlmostEqual(q_log_factorial(32, HARMONIC), math.lgamma(33), places=10)

    def test_recursion(self):
        d = DeformationParam(0.0047)
        for n in range(1, 20):
            self.assertAlmostEqual(
                q_log_factorial(n, d) - q_log_factorial(n - 1, d),
                math.log(q_number(n, d)), places=12,
            )

    def test_negative_rejected(self):
        with self.assertRaises(ConfigurationError):
            q_log_factorial(-1, HARMONIC)

    def test_large_deformation_stays_finite(self):
        # [k]_q = e^(20(k-1)) 까지 커져 sinh 로는 넘침
        value = q_log_factorial(64, DeformationParam(20.0))
        self.assertTrue(math.isfinite(value))
        self.assertAlmostEqual(value, 20.0 * 64 * 63 / 2, places=6)


class QExpTest(SimpleTestCase):

    def test_zero_argument(self):
        self.assertEqual(q_exp(0.0, DeformationParam(0.004), 5), 1.0)

    def test_harmonic_converges_to_exp(self):
        self.assertAlmostEqual(q_exp(1.0, HARMONIC, 30) / math.e, 1.0, places=14)
        terms = converged_terms(16.0, HARMONIC)
        self.assertAlmostEqual(q_exp(16.0, HARMONIC, terms) / math.exp(16.0), 1.0, places=13)

    def test_matches_direct_summation(self):
        d = DeformationParam(0.004)
        terms = []
        log_fact = 0.0
        for n in range(33):
            if n > 0:
                log_fact += math.log(q_number(n, d))
            terms.append(math.exp(n * math.log(16.0) - log_fact))
        direct = math.fsum(terms)
        self.assertAlmostEqual(q_exp(16.0, d, 33) / direct, 1.0, places=12)

    def test_log_domain_large_argument(self):
        value = q_log_exp(400.0, HARMONIC, converged_terms(400.0, HARMONIC))
        self.assertAlmostEqual(value, 400.0, places=9)

    def test_invalid_arguments(self):
        with self.assertRaises(ConfigurationError):
            q_exp(-1.0, HARMONIC, 5)
        with self.assertRaises(ConfigurationError):
            q_exp(1.0, HARMONIC, 0)

    def test_truncation_lowers_value(self):
        d = DeformationParam(0.004)
        self.assertLess(q_exp(16.0, d, 33), q_exp(16.0, d, converged_terms(16.0, d)))


class CoherentAmplitudesTest(SimpleTestCase):

    def test_unit_norm_in_truncated_basis(self):
        for tau in (0.0,) + SWEEP_TAUS:
            c = coherent_amplitudes(4.0, DeformationParam(tau), 32)
            self.assertAlmostEqual(float(np.sum(np.abs(c) ** 2)), 1.0, places=14)

    def test_vacuum(self):
        c = coherent_amplitudes(0.0, HARMONIC, 10)
        self.assertEqual(c[0], 1.0)
        self.assertEqual(float(np.sum(np.abs(c[1:]))), 0.0)

    def test_poisson_peak(self):
        weights = np.abs(coherent_amplitudes(4.0, HARMONIC, 32)) ** 2
        # Poisson(16): P(15) == P(16)
        self.assertIn(int(np.argmax(weights)), (15, 16))
        self.assertAlmostEqual(weights[15], weights[16], places=12)

    def test_phase(self):
        c = coherent_amplitudes(2j, HARMONIC, 10)
        self.assertAlmostEqual(c[1] / abs(c[1]), 1j, places=14)
        minus = coherent_amplitudes(-2.0, HARMONIC, 10)
        plus = coherent_amplitudes(2.0, HARMONIC, 10)
        np.testing.assert_allclose(minus, plus * (-1.0) ** np.arange(11), atol=1e-15)

    def test_converged_normalization_leaves_tail(self):
        d = DeformationParam(0.004)
        c = coherent_amplitudes(4.0, d, 32, norm_terms=converged_terms(16.0, d))
        total = float(np.sum(np.abs(c) ** 2))
        self.assertLess(total, 1.0)
        self.assertGreater(total, 0.99)

    def test_invalid_basis(self):
        with self.assertRaises(ConfigurationError):
            coherent_amplitudes(1.0, HARMONIC, 0)


class FOfNTest(SimpleTestCase):

    def test_harmonic_identity(self):
        for n in range(10):
            self.assertEqual(f_of_n(n, HARMONIC), 1.0)

    def test_zero_convention(self):
        self.assertEqual(f_of_n(0, DeformationParam(0.5)), 1.0)

    def test_array_matches_scalar(self):
        d = DeformationParam(0.008)
        values = f_of_n_array(32, d)
        for n in range(33):
            self.assertAlmostEqual(values[n], f_of_n(n, d), places=14)

    def test_mean_lamb_dicke_rescaling(self):
        d = DeformationParam(0.003)
        self.assertAlmostEqual(mean_f_of_n(4.0, d, 32, power=2), 1.0004, places=4)
        self.assertAlmostEqual(mean_f_of_n(4.0, d, 32, power=1), 1.0002, places=4)

    def test_mean_is_one_for_harmonic_trap(self):
        self.assertAlmostEqual(mean_f_of_n(4.0, HARMONIC, 32), 1.0, places=14)


class SpectrumTest(SimpleTestCase):

    def test_harmonic_levels(self):
        for n in range(33):
            self.assertAlmostEqual(trap_level_energy(n, 50.0, HARMONIC), 50.0 * (n + 0.5), places=10)

    def test_array_matches_scalar(self):
        d = DeformationParam(0.0047)
        levels = trap_level_energies(32, 50.0, d)
        for n in range(33):
            self.assertAlmostEqual(levels[n], trap_level_energy(n, 50.0, d), places=9)

    def test_level_spacing_grows(self):
        levels = trap_level_energies(32, 50.0, DeformationParam(0.004))
        gaps = np.diff(levels)
        self.assertTrue(np.all(np.diff(gaps) > 0))

    def test_bounded_below_by_harmonic_levels(self):
        for tau in SWEEP_TAUS + (-0.004, 0.1):
            d = DeformationParam(tau)
            # [1]_q + [0]_q = 1 이므로 바닥 준위는 tau 와 무관
            self.assertAlmostEqual(trap_level_energy(0, 50.0, d), 25.0, places=12)
            for n in range(1, 33):
                self.assertGreater(trap_level_energy(n, 50.0, d), 50.0 * (n + 0.5))
        for n in range(33):
            self.assertEqual(trap_level_energy(n, 50.0, HARMONIC), 50.0 * (n + 0.5))

    def test_taylor_expansion_validity(self):
        for tau in (0.001,) + SWEEP_TAUS:
            d = DeformationParam(tau)
            for n in range(33):
                exact = trap_level_energy(n, 1.0, d)
                approx = trap_level_energy_taylor(n, 1.0, d)
                self.assertLess(abs(approx - exact) / exact, 1e-4)


class RabiFrequencyTest(SimpleTestCase):

    def test_harmonic_reduces_to_sqrt_n(self):
        for n in range(10):
            self.assertAlmostEqual(
                rabi_frequency_estimate(n, 50.0, 1.0, 0.05, HARMONIC),
                0.05 * math.sqrt(n + 1), places=14,
            )

    def test_anharmonic_slope_near_four(self):
        self.assertAlmostEqual(anharmonic_slope(50.0, DeformationParam(0.004)), 4.0, delta=0.05)

    def test_anharmonic_slope_requires_deformation(self):
        with self.assertRaises(ConfigurationError):
            anharmonic_slope(50.0, HARMONIC)
