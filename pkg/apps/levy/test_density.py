"""
Test cases for stable densities and distribution functions
"""
import math

import numpy as np
import pytest
from scipy import integrate, stats
from scipy.special import gamma

from apps.core.exceptions import ConfigurationError
from apps.levy.density import (
    SERIES_FROM_SUBCAUCHY, SERIES_FROM_SUPERCAUCHY, _series_terms, _unit_quadrature_pdf,
    quadrature_pdf, stable_cdf, stable_pdf,
)
from apps.levy.types import MuProfile, StableParams


def trapezoid_density(x, mu, scale=1.0, upper=40.0, points=2_000_001):
    k = np.linspace(0.0, upper, points)
    return integrate.trapezoid(np.cos(k * x) * np.exp(-scale * k ** mu), k) / math.pi


class TestStableParams:
    """Test parameter validation"""

    @pytest.mark.parametrize('mu', [0.0, -1.0, 2.1])
    def test_rejects_index(self, mu):
        with pytest.raises(ConfigurationError):
            StableParams(mu)

    def test_rejects_scale(self):
        with pytest.raises(ConfigurationError):
            StableParams(1.5, 0.0)

    def test_width(self):
        assert StableParams(0.5, 4.0).width == pytest.approx(16.0)


class TestMuProfile:
    """Test the piecewise-constant index table"""

    def test_constant(self):
        profile = MuProfile.parse('1.7')
        assert profile.mu_at(1) == profile.mu_at(4096) == 1.7

    def test_steps(self):
        profile = MuProfile.parse('1:1.9,64:1.5,512:1.2')
        assert profile.mu_at(2) == 1.9
        assert profile.mu_at(64) == 1.5
        assert profile.mu_at(511) == 1.5
        assert profile.mu_at(10 ** 6) == 1.2
        assert profile.delta_at(64) == pytest.approx(1 / 1.5)

    @pytest.mark.parametrize('text', ['abc', '1:2.5', '64:1.5,8:1.2', '1:'])
    def test_rejects(self, text):
        with pytest.raises(ConfigurationError):
            MuProfile.parse(text)


class TestStablePdf:
    """Test the symmetric stable density"""

    def test_gaussian_peak(self):
        assert stable_pdf(0.0, StableParams(2.0)) == pytest.approx(1 / math.sqrt(4 * math.pi), abs=1e-12)
        assert stable_pdf(0.0, StableParams(2.0)) == pytest.approx(0.28209, abs=1e-5)

    def test_cauchy_peak(self):
        assert stable_pdf(0.0, StableParams(1.0)) == pytest.approx(1 / math.pi, abs=1e-12)

    def test_peak_matches_gamma_form(self):
        assert stable_pdf(0.0, StableParams(1.5)) == pytest.approx(gamma(1 + 1 / 1.5) / math.pi, rel=1e-12)

    @pytest.mark.parametrize('x', [0.0, 0.7, 3.0])
    def test_matches_brute_force_quadrature(self, x):
        assert quadrature_pdf(x, StableParams(1.5)) == pytest.approx(trapezoid_density(x, 1.5), abs=1e-6)

    def test_symmetric(self):
        x = np.linspace(0.1, 30, 25)
        params = StableParams(1.3, 0.7)
        np.testing.assert_allclose(stable_pdf(x, params), stable_pdf(-x, params), rtol=1e-12)

    def test_scale_self_similarity(self):
        scale, mu = 2.5, 1.5
        x = np.array([0.0, 0.4, 1.9, 5.0])
        direct = [trapezoid_density(v, mu, scale=scale, upper=25.0) for v in x]
        np.testing.assert_allclose(stable_pdf(x, StableParams(mu, scale)), direct, atol=1e-6)

    @pytest.mark.parametrize('mu', [2.0, 1.0])
    def test_quadrature_matches_closed_forms(self, mu):
        x = np.linspace(-10, 10, 201)
        params = StableParams(mu)
        np.testing.assert_allclose(quadrature_pdf(x, params), stable_pdf(x, params), atol=1e-6)

    def test_closed_forms_match_scipy(self):
        x = np.linspace(-5, 5, 11)
        np.testing.assert_allclose(stable_pdf(x, StableParams(2.0)), stats.norm(scale=math.sqrt(2)).pdf(x))
        np.testing.assert_allclose(stable_pdf(x, StableParams(1.0, 0.5)), stats.cauchy(scale=0.5).pdf(x))

    @pytest.mark.parametrize('mu, y', [(0.8, SERIES_FROM_SUBCAUCHY), (0.5, 3.0), (1.5, SERIES_FROM_SUPERCAUCHY)])
    def test_tail_series_continues_quadrature(self, mu, y):
        series = _series_terms(y, mu, cumulative=False)
        assert series == pytest.approx(_unit_quadrature_pdf(y, mu), rel=1e-6, abs=1e-12)

    def test_power_law_tail(self):
        mu = 1.2
        value = stable_pdf(1e4, StableParams(mu))
        leading = gamma(mu + 1) * math.sin(math.pi * mu / 2) / math.pi * 1e4 ** (-1 - mu)
        assert value == pytest.approx(leading, rel=1e-3)

    @pytest.mark.parametrize('mu', [0.8, 1.2, 1.5, 1.9])
    def test_normalized(self, mu):
        params = StableParams(mu)
        body, _ = integrate.quad(
            lambda x: stable_pdf(x, params), 0.0, 30.0,
            points=(SERIES_FROM_SUBCAUCHY, SERIES_FROM_SUPERCAUCHY), limit=200, epsabs=1e-11,
        )
        tail = 1.0 - stable_cdf(30.0, params)
        assert 2.0 * (body + tail) == pytest.approx(1.0, abs=1e-6)


class TestStableCdf:
    """Test the distribution function"""

    def test_median(self):
        assert stable_cdf(0.0, StableParams(0.7)) == 0.5

    def test_cauchy_quartile(self):
        assert stable_cdf(2.0, StableParams(1.0, 2.0)) == pytest.approx(0.75, abs=1e-12)

    def test_gaussian(self):
        assert stable_cdf(1.3, StableParams(2.0)) == pytest.approx(stats.norm(scale=math.sqrt(2)).cdf(1.3), abs=1e-12)

    @pytest.mark.parametrize('mu, x', [(1.5, 1.3), (0.8, 0.9), (1.9, 4.0)])
    def test_matches_integrated_density(self, mu, x):
        params = StableParams(mu)
        mass, _ = integrate.quad(lambda v: stable_pdf(v, params), 0.0, x, epsabs=1e-12)
        assert stable_cdf(x, params) == pytest.approx(0.5 + mass, abs=1e-7)

    def test_symmetric(self):
        params = StableParams(1.4, 0.6)
        for x in (0.3, 2.0, 25.0):
            assert stable_cdf(-x, params) == pytest.approx(1.0 - stable_cdf(x, params), abs=1e-12)

    def test_series_branch_continuity(self):
        params = StableParams(0.8)
        below = stable_cdf(SERIES_FROM_SUBCAUCHY - 1e-9, params)
        above = stable_cdf(SERIES_FROM_SUBCAUCHY, params)
        assert above == pytest.approx(below, abs=1e-7)
