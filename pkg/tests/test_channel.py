"""Geometry tests: steering vectors, LOS channels, path loss, config."""

import math

import numpy as np
import pytest

from irsdm.channel import (ArraySpec, LinkAngles, ScenarioConfig,
                           build_channels, los_channel, path_loss,
                           steering_vector)
from irsdm.errors import ConfigError, ContractError
from tests.conftest import random_config


class TestSteeringVector:
    def test_broadside_all_equal(self):
        h = steering_vector(math.pi / 2, ArraySpec(4))
        np.testing.assert_allclose(h, 0.5 * np.ones(4), atol=1e-12)

    def test_endfire_two_elements(self):
        # direct evaluation: psi = (0.25, -0.25) at theta=0, d/lambda=0.5
        h = steering_vector(0.0, ArraySpec(2, 0.5))
        expected = np.array([np.exp(1j * np.pi / 2), np.exp(-1j * np.pi / 2)]) / np.sqrt(2)
        np.testing.assert_allclose(h, expected, atol=1e-15)

    def test_unit_norm(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 64))
            h = steering_vector(rng.uniform(0, 2 * math.pi), ArraySpec(n))
            assert np.linalg.norm(h) == pytest.approx(1.0)

    def test_conjugate_symmetry(self, rng):
        # psi is antisymmetric about the array center
        n = 7
        h = steering_vector(rng.uniform(0, 2 * math.pi), ArraySpec(n))
        np.testing.assert_allclose(h, h[::-1].conj(), atol=1e-14)

    def test_phase_sum_zero(self, rng):
        # sum_k psi(k) = 0  <=>  prod_k (sqrt(n) h_k) = 1
        for n in (2, 5, 16):
            h = steering_vector(rng.uniform(0, 2 * math.pi), ArraySpec(n))
            assert np.prod(h * np.sqrt(n)) == pytest.approx(1.0, abs=1e-10)


class TestLosChannel:
    def test_broadside_constant(self):
        h = los_channel(math.pi / 2, ArraySpec(2), math.pi / 2, ArraySpec(2))
        np.testing.assert_allclose(h, 0.5 * np.ones((2, 2)), atol=1e-12)

    def test_frobenius_norm_one(self, rng):
        h = los_channel(rng.uniform(0, 2 * math.pi), ArraySpec(5),
                        rng.uniform(0, 2 * math.pi), ArraySpec(9))
        assert np.linalg.norm(h) == pytest.approx(1.0)
        assert h.shape == (5, 9)

    def test_rank_one(self, rng):
        h = los_channel(rng.uniform(0, 2 * math.pi), ArraySpec(6),
                        rng.uniform(0, 2 * math.pi), ArraySpec(4))
        s = np.linalg.svd(h, compute_uv=False)
        assert s[1] <= 1e-12


class TestPathLoss:
    @pytest.mark.parametrize("dist,alpha,expected",
                             [(1.0, 2.0, 1.0), (10.0, 2.0, 0.01), (50.0, 2.0, 4e-4)])
    def test_values(self, dist, alpha, expected):
        assert path_loss(dist, alpha) == pytest.approx(expected)

    def test_non_positive_distance(self):
        with pytest.raises(ContractError):
            path_loss(0.0, 2.0)
        with pytest.raises(ContractError):
            path_loss(-3.0, 2.0)


class TestBuildChannels:
    def test_default_shapes(self):
        ch = build_channels(ScenarioConfig())
        assert ch.h_ai.shape == (80, 16)
        assert ch.h_ab_h.shape == (4, 16)
        assert ch.h_ae_h.shape == (4, 16)
        assert ch.h_ib_h.shape == (4, 80)
        assert ch.h_ie_h.shape == (4, 80)

    def test_gain_composition(self):
        cfg = ScenarioConfig()
        ch = build_channels(cfg)
        assert ch.g_ab == pytest.approx(50.0 ** -2)
        assert ch.g_aib == pytest.approx(path_loss(cfg.d_ai, 2.0) * path_loss(cfg.d_ib, 2.0))
        assert ch.g_aie == pytest.approx(path_loss(cfg.d_ai, 2.0) * path_loss(cfg.d_ie, 2.0))

    def test_all_rank_one(self, rng):
        ch = build_channels(random_config(rng))
        for mat in (ch.h_ai, ch.h_ab_h, ch.h_ae_h, ch.h_ib_h, ch.h_ie_h):
            s = np.linalg.svd(mat, compute_uv=False)
            assert s[0] > 0 and s[1] <= 1e-10 * s[0]

    def test_deterministic(self, rng):
        cfg = random_config(rng)
        a, b = build_channels(cfg), build_channels(cfg)
        for name in ("h_ai", "h_ab_h", "h_ae_h", "h_ib_h", "h_ie_h"):
            assert np.array_equal(getattr(a, name), getattr(b, name))


class TestScenarioConfigValidation:
    def test_beta_sum(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(beta1=0.4, beta2=0.4, beta3=0.5)

    def test_negative_beta(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(beta1=-0.1, beta2=0.9, beta3=0.2)

    def test_zero_elements(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(m=0)

    def test_angle_range(self):
        with pytest.raises(ConfigError):
            LinkAngles(departure=2 * math.pi, arrival=0.0)

    def test_non_positive_noise(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(sigma2=0.0)
