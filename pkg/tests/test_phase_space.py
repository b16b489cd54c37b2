import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idjcm.errors import ConfigurationError, GridCoverageError, InvalidParameterError
from idjcm.model import ModelConfig, coherent_amplitudes, evolve_closed_form
from idjcm.phase_space import (
    build_grid,
    coherent_overlap,
    husimi_gradient,
    husimi_on_points,
    husimi_q,
    integrate,
    make_grid,
    radial_integrate,
    sample_qfield,
)
from idjcm.validation import fd_gradient

TWO_PI = 2 * math.pi


def gaussian_husimi(g, alpha):
    x1, x2 = g.cartesian()
    return np.exp(-((x1 - alpha.real) ** 2 + (x2 - alpha.imag) ** 2)) / math.pi


class TestOverlap:
    def test_vacuum(self):
        assert coherent_overlap(0, np.array([1, 0, 0], dtype=complex)) == pytest.approx(1)

    def test_self_overlap(self):
        v = coherent_amplitudes(2.0, 0.0, 40)
        assert coherent_overlap(2.0, v) == pytest.approx(1, abs=1e-12)

    def test_displaced(self):
        # <1|3> = exp(-|1-3|^2/2) for real amplitudes
        v = coherent_amplitudes(3.0, 0.0, 60)
        assert coherent_overlap(1.0, v) == pytest.approx(math.exp(-2), rel=1e-12)

    def test_nonfinite(self):
        with pytest.raises(InvalidParameterError):
            coherent_overlap(complex(np.inf, 0), np.ones(3, dtype=complex))


class TestHusimi:
    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
    def test_peak_value(self, alpha):
        s = evolve_closed_form(ModelConfig(alpha_mag=alpha), 0.0)
        assert husimi_q(alpha, s) == pytest.approx(1 / math.pi, rel=1e-12)

    def test_half_period(self):
        s = evolve_closed_form(ModelConfig(alpha_mag=1.0), math.pi)
        assert husimi_q(-1.0, s) == pytest.approx(1 / math.pi, rel=1e-12)

    def test_vacuum_value_at_origin(self):
        s = evolve_closed_form(ModelConfig(alpha_mag=2.0), 0.0)
        assert husimi_q(0.0, s) == pytest.approx(math.exp(-4) / math.pi, rel=1e-12)

    # n_max=80 removes truncation error so closed Gaussian formulas hold to rounding
    def test_gradient_at_peak(self):
        s = evolve_closed_form(ModelConfig(alpha_mag=2.0, n_max=80), 0.0)
        assert husimi_gradient(2.0, s) == pytest.approx((0, 0), abs=1e-14)

    def test_gradient_off_peak(self):
        s = evolve_closed_form(ModelConfig(alpha_mag=2.0, n_max=80), 0.0)
        q = husimi_q(2.5, s)
        g1, g2 = husimi_gradient(2.5, s)
        assert g1 == pytest.approx(-2 * 0.5 * q, rel=1e-12)
        assert g2 == pytest.approx(0, abs=1e-15)

    def test_gradient_vs_fd_fixed_point(self):
        s = evolve_closed_form(ModelConfig(alpha_mag=2.0), 0.7)
        beta = 1 + 0.3j
        ga = np.array(husimi_gradient(beta, s))
        gf = np.array(fd_gradient(beta, s))
        assert np.linalg.norm(ga - gf) / np.linalg.norm(gf) < 1e-6

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.3, 3.0), st.floats(0, TWO_PI), st.floats(-5, 5), st.floats(-5, 5))
    def test_gradient_vs_fd_property(self, alpha, t, re, im):
        s = evolve_closed_form(ModelConfig(alpha_mag=alpha), t)
        beta = complex(re, im)
        if husimi_q(beta, s) < 1e-12 / math.pi:
            return
        ga = np.array(husimi_gradient(beta, s))
        gf = np.array(fd_gradient(beta, s))
        scale = np.linalg.norm(gf)
        # near a stationary point the FD truncation error ~1e-10 dominates
        assert np.linalg.norm(ga - gf) <= max(1e-6 * scale, 1e-9)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0, 3.5), st.floats(0, TWO_PI))
    def test_husimi_bound(self, alpha, t):
        s = evolve_closed_form(ModelConfig(alpha_mag=alpha), t)
        g = build_grid(ModelConfig(alpha_mag=alpha), 48, 64)
        x1, x2 = g.cartesian()
        q, _, _ = husimi_on_points(s, x1, x2)
        assert q.max() <= 1 / math.pi + 1e-10
        assert q.min() >= 0


class TestGrid:
    def test_r_max_rule(self):
        g = build_grid(ModelConfig(alpha_mag=1.0))
        assert g.r_max >= math.sqrt(16) + 4
        assert g.shape == (200, 256)

    def test_floor(self):
        with pytest.raises(ConfigurationError):
            build_grid(ModelConfig(), n_r=8)
        with pytest.raises(ConfigurationError):
            build_grid(ModelConfig(), n_theta=16)

    @pytest.mark.parametrize("alpha", [0.0, 3.0])
    def test_gaussian_normalisation(self, alpha):
        g = build_grid(ModelConfig(alpha_mag=alpha))
        assert g.r_max >= 8
        assert integrate(g, gaussian_husimi(g, complex(alpha))) == pytest.approx(1, abs=1e-10)


class TestIntegrate:
    def test_unit_gaussian(self):
        g = make_grid(8.0)
        r, _ = g.mesh()
        assert integrate(g, np.exp(-r**2) / math.pi) == pytest.approx(1, abs=1e-12)

    def test_zero(self):
        g = make_grid(8.0)
        assert integrate(g, np.zeros(g.shape)) == 0

    def test_shape_mismatch(self):
        g = make_grid(8.0)
        with pytest.raises(InvalidParameterError):
            integrate(g, np.zeros((3, 3)))
        with pytest.raises(InvalidParameterError):
            radial_integrate(g, np.zeros((3, 3)))

    def test_polynomial_moment(self):
        # int r^2 exp(-r^2)/pi d^2beta = 1
        g = make_grid(9.0, 64, 32)
        r, _ = g.mesh()
        assert integrate(g, r**2 * np.exp(-r**2) / math.pi) == pytest.approx(1, abs=1e-12)


class TestSample:
    def test_normalised_t0(self):
        cfg = ModelConfig(alpha_mag=1.0)
        qf = sample_qfield(evolve_closed_form(cfg, 0.0), build_grid(cfg))
        assert qf.norm == pytest.approx(1, abs=1e-10)
        assert qf.well_normalized

    def test_positive_mid_evolution(self):
        cfg = ModelConfig(alpha_mag=2.0)
        qf = sample_qfield(evolve_closed_form(cfg, math.pi / 2), build_grid(cfg))
        assert np.all(qf.q >= 0)
        assert qf.norm == pytest.approx(1, abs=1e-8)

    def test_revival_pointwise(self):
        cfg = ModelConfig(alpha_mag=1.0)
        g = build_grid(cfg)
        a = sample_qfield(evolve_closed_form(cfg, 0.0), g)
        b = sample_qfield(evolve_closed_form(cfg, TWO_PI), g)
        np.testing.assert_allclose(a.q, b.q, rtol=0, atol=1e-12)

    def test_rotational_covariance(self):
        phi = 2 * math.pi * 5 / 256  # five angular grid steps
        g = build_grid(ModelConfig(alpha_mag=2.0))
        a = sample_qfield(evolve_closed_form(ModelConfig(alpha_mag=2.0), 0.0), g)
        b = sample_qfield(evolve_closed_form(ModelConfig(alpha_mag=2.0, alpha_phase=phi), 0.0), g)
        np.testing.assert_allclose(np.roll(a.q, 5, axis=1), b.q, rtol=0, atol=1e-12)

    def test_matches_gaussian(self):
        cfg = ModelConfig(alpha_mag=3.0)
        g = build_grid(cfg)
        qf = sample_qfield(evolve_closed_form(cfg, 0.0), g)
        # default truncation: tail amplitude error shows only far from the peak
        np.testing.assert_allclose(qf.q, gaussian_husimi(g, 3.0), rtol=0, atol=1e-8)
        exact = sample_qfield(evolve_closed_form(ModelConfig(alpha_mag=3.0, n_max=120), 0.0), g)
        np.testing.assert_allclose(exact.q, gaussian_husimi(g, 3.0), rtol=0, atol=1e-14)

    def test_coverage_error(self):
        cfg = ModelConfig(alpha_mag=3.0)
        small = make_grid(3.0)
        with pytest.raises(GridCoverageError, match="increase r_max"):
            sample_qfield(evolve_closed_form(cfg, 0.0), small)
