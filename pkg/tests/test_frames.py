"""Adiabatic/superadiabatic frame quantities and the Fig.-1-style diagnostics."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import powerbroadening as pb
from powerbroadening.frames import suppression_factor
from powerbroadening.units import QUADRATIC_DURATION, POWERLAW_DURATION

T8 = QUADRATIC_DURATION
T16 = POWERLAW_DURATION

# matched drive for the contrast diagnostics: both quadratic signs at the
# same edge amplitude and duration
FIG_OMEGA0 = pb.mhz_to_rad_ns(30.0)


class TestMixingAngle:
    def test_equal_fields(self):
        assert pb.mixing_angle(1.0, 1.0) == pytest.approx(math.pi / 8)

    def test_zero_drive(self):
        assert pb.mixing_angle(0.0, 0.7) == 0.0

    def test_resonant(self):
        assert pb.mixing_angle(0.7, 0.0) == pytest.approx(math.pi / 4)

    def test_negative_detuning_branch(self):
        # atan2 extends the range beyond [0, pi/4]
        assert pb.mixing_angle(0.5, -0.5) == pytest.approx(3 * math.pi / 8)

    def test_range_for_nonnegative_fields(self):
        om = np.linspace(0, 2, 41)
        th = pb.mixing_angle(om, 0.9)
        assert np.all(th >= 0) and np.all(th <= math.pi / 4 + 1e-15)


class TestSplitting:
    def test_pythagorean(self):
        assert pb.splitting(3.0, 4.0) == pytest.approx(5.0, rel=1e-15)

    def test_limits(self):
        assert pb.splitting(0.0, -0.4) == pytest.approx(0.4)
        assert pb.splitting(0.7, 0.0) == pytest.approx(0.7)


class TestNonadiabaticCoupling:
    def test_constant_drive_zero(self):
        assert pb.nonadiabatic_coupling(0.3, 0.0, 0.2, 0.0) == 0.0

    def test_chirp_free_form(self):
        om, omd, d = 0.21, 0.013, 0.09
        expected = d * omd / (2 * (om**2 + d**2))
        assert pb.nonadiabatic_coupling(om, omd, d) == pytest.approx(
            expected, rel=1e-14)

    def test_degenerate_point_convention(self):
        assert pb.nonadiabatic_coupling(0.0, 0.5, 0.0) == 0.0

    def test_beta_pm1_mirrored_times_antisymmetric(self):
        # for each sign of beta, theta1_dot(T - t) = -theta1_dot(t)
        d = pb.mhz_to_rad_ns(15.0)
        for beta in (1.0, -1.0):
            s = pb.PulseShape.quadratic(FIG_OMEGA0, T8, beta=beta)
            for frac in (0.15, 0.3, 0.42):
                t = frac * T8
                d1_a, _ = pb.envelope_derivatives(s, t)
                d1_b, _ = pb.envelope_derivatives(s, T8 - t)
                c_a = pb.nonadiabatic_coupling(pb.envelope(s, t), d1_a, d)
                c_b = pb.nonadiabatic_coupling(pb.envelope(s, T8 - t), d1_b, d)
                assert c_a == pytest.approx(-c_b, rel=1e-10)

    def test_matches_derivative_of_mixing_angle(self):
        s = pb.PulseShape.quadratic(FIG_OMEGA0, T8, beta=0.6)
        d = pb.mhz_to_rad_ns(12.0)
        h = 1e-4 * T8
        for frac in (0.2, 0.5, 0.77):
            t = frac * T8
            d1, _ = pb.envelope_derivatives(s, t)
            coupling = pb.nonadiabatic_coupling(pb.envelope(s, t), d1, d)
            fd = (pb.mixing_angle(pb.envelope(s, t + h), d)
                  - pb.mixing_angle(pb.envelope(s, t - h), d)) / (2 * h)
            assert coupling == pytest.approx(fd, rel=1e-6, abs=1e-12)


class TestSuperadiabatic:
    def test_zero_coupling_reduces_to_adiabatic(self):
        eps2, th2d = pb.superadiabatic_quantities(0.4, 0.0, 0.0, 0.0)
        assert eps2 == pytest.approx(0.4) and th2d == 0.0

    def test_eps2_dominates_eps1(self):
        rng = np.random.default_rng(7)
        e1 = rng.uniform(0.01, 1, 50)
        e1d = rng.normal(0, 0.1, 50)
        t1d = rng.normal(0, 0.3, 50)
        t1dd = rng.normal(0, 0.1, 50)
        eps2, _ = pb.superadiabatic_quantities(e1, e1d, t1d, t1dd)
        assert np.all(eps2 >= e1)

    def test_degenerate_rejected(self):
        with pytest.raises(pb.DegeneratePointError):
            pb.superadiabatic_quantities(0.0, 0.1, 0.0, 0.1)

    @settings(max_examples=80, deadline=None)
    @given(om=st.floats(1e-3, 1.0), omd=st.floats(-0.1, 0.1),
           omdd=st.floats(-0.01, 0.01), d=st.floats(0.01, 1.0))
    def test_two_theta2_dot_forms_agree(self, om, omd, omdd, d):
        # general Eq.-style form vs the chirp-free closed form; the absolute
        # floor covers exact-cancellation inputs where both forms are ~0
        eps1 = pb.splitting(om, d)
        eps1_dot = om * omd / eps1
        th1d = pb.nonadiabatic_coupling(om, omd, d)
        th1dd = d * (eps1**2 * omdd - 2 * om * omd**2) / (2 * eps1**4)
        _, general = pb.superadiabatic_quantities(eps1, eps1_dot, th1d, th1dd)
        closed = pb.theta2_dot_chirp_free(om, omd, omdd, d)
        assert general == pytest.approx(closed, rel=1e-10, abs=1e-14)

    def test_two_forms_agree_on_quadratic_family(self):
        # realistic drive: agreement to 1e-10 absolute along the pulse
        d = pb.mhz_to_rad_ns(12.0)
        for beta in (-1.0, 0.3, 1.0):
            s = pb.PulseShape.quadratic(FIG_OMEGA0, T8, beta=beta)
            diag = pb.diagnose(s, d, n_points=512)
            om = pb.envelope(s, diag.t)
            d1, d2 = pb.envelope_derivatives(s, diag.t)
            closed = pb.theta2_dot_chirp_free(om, d1, d2, d)
            np.testing.assert_allclose(diag.theta2_dot, closed, atol=1e-10)


class TestMidpointAsymptotic:
    def test_suppression_factor_at_gamma_two(self):
        assert suppression_factor(2.0) == pytest.approx(0.5)
        assert suppression_factor(math.inf) == 1.0

    def test_zero_detuning_rejected(self):
        s = pb.PulseShape.quadratic(0.1, T8, beta=1.0)
        with pytest.raises(ValueError):
            pb.midpoint_asymptotic(s, 0.0)

    def test_beta1_curvature_controlled(self):
        s = pb.PulseShape.quadratic(pb.mhz_to_rad_ns(10.0), T8, beta=1.0)
        d = pb.mhz_to_rad_ns(20.0)
        est = pb.midpoint_asymptotic(s, d)
        assert est.regime == "curvature_controlled"
        assert est.in_asymptotic_regime
        # Omega(T/2) = 0: estimate reduces to sgn(D) * Omegadd / D^2
        _, omdd = pb.envelope_derivatives(s, T8 / 2)
        assert est.theta2_dot == pytest.approx(omdd / d**2, rel=1e-12)
        # and matches the exact closed form
        exact = pb.theta2_dot_chirp_free(0.0, 0.0, omdd, d)
        assert est.theta2_dot == pytest.approx(exact, rel=0.05)

    def test_sign_follows_curvature(self):
        d = pb.mhz_to_rad_ns(25.0)
        plus = pb.midpoint_asymptotic(
            pb.PulseShape.quadratic(pb.mhz_to_rad_ns(1.0), T8, beta=1.0), d)
        minus = pb.midpoint_asymptotic(
            pb.PulseShape.quadratic(pb.mhz_to_rad_ns(1.0), T8, beta=-1.0), d)
        assert plus.theta2_dot > 0 > minus.theta2_dot
        neg_d = pb.midpoint_asymptotic(
            pb.PulseShape.quadratic(pb.mhz_to_rad_ns(1.0), T8, beta=1.0), -d)
        assert neg_d.theta2_dot < 0

    def test_out_of_regime_flagged(self):
        s = pb.PulseShape.quadratic(pb.mhz_to_rad_ns(10.0), T8, beta=-1.0)
        est = pb.midpoint_asymptotic(s, pb.mhz_to_rad_ns(30.0))
        # Omega(T/2)/Delta = 20/30 > 0.1
        assert not est.in_asymptotic_regime

    def test_matches_exact_within_5pct_when_margin_large(self):
        d = pb.mhz_to_rad_ns(30.0)
        s = pb.PulseShape.quadratic(pb.mhz_to_rad_ns(1.0), T8, beta=-1.0)
        est = pb.midpoint_asymptotic(s, d)
        assert est.gamma1 > 10 and est.in_asymptotic_regime
        om = pb.envelope(s, T8 / 2)
        d1, d2 = pb.envelope_derivatives(s, T8 / 2)
        exact = pb.theta2_dot_chirp_free(om, d1, d2, d)
        assert est.theta2_dot == pytest.approx(exact, rel=0.05)


class TestDiagnose:
    def test_rectangular_interior_couplings_zero(self):
        s = pb.PulseShape.rectangular(pb.mhz_to_rad_ns(10.0), T8)
        diag = pb.diagnose(s, pb.mhz_to_rad_ns(15.0), n_points=257)
        assert np.all(diag.theta1_dot == 0.0)
        assert np.all(diag.theta2_dot == 0.0)
        assert diag.edge_discontinuity
        np.testing.assert_allclose(diag.eps2, diag.eps1, rtol=1e-15)

    def test_grid_excludes_edges(self):
        s = pb.PulseShape.powerlaw(0.1, T16, p=3)
        diag = pb.diagnose(s, 0.05, n_points=101)
        assert diag.t[0] > 0 and diag.t[-1] < T16

    def test_invariant_eps2_ge_eps1_ge_zero(self):
        for beta in (-1.0, 0.25, 1.0):
            s = pb.PulseShape.quadratic(FIG_OMEGA0, T8, beta=beta)
            diag = pb.diagnose(s, pb.mhz_to_rad_ns(9.0))
            assert np.all(diag.eps1 >= 0)
            assert np.all(diag.eps2 >= diag.eps1 - 1e-15)

    def test_beta_contrast_over_detuning_range(self):
        # max_t |theta2_dot| larger for beta=+1 across 5..50 MHz
        for dmhz in np.arange(5.0, 50.1, 2.5):
            d = pb.mhz_to_rad_ns(dmhz)
            m = {}
            for beta in (1.0, -1.0):
                s = pb.PulseShape.quadratic(FIG_OMEGA0, T8, beta=beta)
                m[beta] = np.max(np.abs(pb.diagnose(s, d, 4001).theta2_dot))
            assert m[1.0] > m[-1.0], f"contrast failed at {dmhz} MHz"

    def test_powerlaw_coupling_peaks_inside_the_pit(self):
        # the |theta1_dot| maxima sit where the envelope has dropped to the
        # detuning scale (the pit flanks), not at the steep pulse edges
        delta = pb.mhz_to_rad_ns(10.0)
        s = pb.PulseShape.powerlaw(pb.mhz_to_rad_ns(30.0), T16, p=3)
        diag = pb.diagnose(s, delta, n_points=2001)
        absd = np.abs(diag.theta1_dot)
        peaks = [i for i in range(1, len(absd) - 1)
                 if absd[i] >= absd[i - 1] and absd[i] > absd[i + 1]]
        assert peaks, "expected local maxima of |theta1_dot|"
        for i in peaks:
            assert 0.05 * T16 < diag.t[i] < 0.95 * T16
            assert pb.envelope(s, diag.t[i]) < delta
        # exactly at the midpoint the coupling vanishes with the envelope slope
        k_mid = int(np.argmin(np.abs(diag.t - T16 / 2)))
        assert absd[k_mid] < absd.max() * 1e-3

    def test_margin_scales_at_least_quadratically(self):
        # midpoint margin eps2/|theta2_dot| for a pit shape grows ~ Delta^3
        s = pb.PulseShape.quadratic(pb.mhz_to_rad_ns(10.0), T8, beta=1.0)
        for dmhz in (20.0, 30.0, 40.0):
            margins = []
            for d in (pb.mhz_to_rad_ns(dmhz), pb.mhz_to_rad_ns(2 * dmhz)):
                om = pb.envelope(s, T8 / 2)
                d1, d2 = pb.envelope_derivatives(s, T8 / 2)
                eps1 = pb.splitting(om, d)
                th1d = pb.nonadiabatic_coupling(om, d1, d)
                eps2, th2d = pb.superadiabatic_quantities(
                    eps1, om * d1 / eps1, th1d,
                    d * (eps1**2 * d2 - 2 * om * d1**2) / (2 * eps1**4))
                margins.append(eps2 / abs(th2d))
            assert margins[1] / margins[0] >= 3.5

    def test_small_grid_rejected(self):
        with pytest.raises(ValueError):
            pb.diagnose(pb.PulseShape.rectangular(0.1, T8), 0.1, n_points=8)

    def test_degenerate_grid_flagged(self):
        # beta=1 at zero detuning: the frame is singular mid-pulse
        s = pb.PulseShape.quadratic(0.1, T8, beta=1.0)
        diag = pb.diagnose(s, 0.0, n_points=801)
        assert diag.degenerate
        assert np.all(np.isfinite(diag.theta2_dot))
