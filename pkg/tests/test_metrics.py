"""Rate and objective tests, including the independent covariance-based
rate evaluator used as the oracle for the log-det formulas."""

import numpy as np
import pytest

from irsdm.channel import build_channels
from irsdm.errors import DegenerateError
from irsdm.metrics import (BeamformingSolution, effective_channel,
                           eve_beamformers, gain_2x2, rate_bob, rate_eve,
                           receive_power_sum, rps_objective, secrecy_rate)
from irsdm.precoding import build_transmit_design
from tests.conftest import random_config, random_unit_modulus, random_unit_vector


def covariance_rate_bob(ch, theta, u1, u2, v1, v2, beta1, beta2, ps, sigma2):
    """Independent evaluation: signal and noise covariances of the
    combined two-stream received signal, assembled from the raw channel
    matrices without the 2x2 gain shortcut."""
    h_b = np.sqrt(ch.g_aib) * ch.h_ib_h @ (np.asarray(theta)[:, None] * ch.h_ai) \
        + np.sqrt(ch.g_ab) * ch.h_ab_h
    w = np.column_stack([u1, u2])
    tx_cov = beta1 * ps * np.outer(v1, v1.conj()) + beta2 * ps * np.outer(v2, v2.conj())
    sig = w.conj().T @ h_b @ tx_cov @ h_b.conj().T @ w
    noise = sigma2 * (w.conj().T @ w)
    return float(np.log2(np.linalg.det(np.eye(2) + sig @ np.linalg.inv(noise)).real))


def covariance_rate_eve(ch, theta, u1, u2, v1, v2, p_an, beta1, beta2, beta3, ps, sigma2):
    h_e = np.sqrt(ch.g_aie) * ch.h_ie_h @ (np.asarray(theta)[:, None] * ch.h_ai) \
        + np.sqrt(ch.g_ae) * ch.h_ae_h
    w = np.column_stack([u1, u2])
    tx_cov = beta1 * ps * np.outer(v1, v1.conj()) + beta2 * ps * np.outer(v2, v2.conj())
    sig = w.conj().T @ h_e @ tx_cov @ h_e.conj().T @ w
    an = beta3 * ps * ch.g_ae * (ch.h_ae_h @ p_an @ p_an.conj().T @ ch.h_ae_h.conj().T)
    denom = w.conj().T @ an @ w + sigma2 * (w.conj().T @ w)
    return float(np.log2(np.linalg.det(np.eye(2) + sig @ np.linalg.inv(denom)).real))


def build_case(rng, **overrides):
    cfg = random_config(rng, **overrides)
    ch = build_channels(cfg)
    td = build_transmit_design(ch)
    theta = random_unit_modulus(rng, cfg.m)
    return cfg, ch, td, theta


class TestEffectiveChannel:
    def test_no_surface_reduces_to_direct(self, rng):
        cfg, ch, td, theta = build_case(rng)
        ch.h_ai = np.zeros_like(ch.h_ai)
        np.testing.assert_allclose(effective_channel(ch, theta, "bob"),
                                   np.sqrt(ch.g_ab) * ch.h_ab_h, atol=1e-14)

    def test_all_ones_theta(self, rng):
        cfg, ch, td, _ = build_case(rng)
        theta = np.ones(cfg.m)
        h_b = effective_channel(ch, theta, "bob")
        expected = np.sqrt(ch.g_aib) * ch.h_ib_h @ ch.h_ai + np.sqrt(ch.g_ab) * ch.h_ab_h
        np.testing.assert_allclose(h_b, expected, atol=1e-14)

    def test_rank_at_most_two(self, rng):
        cfg, ch, td, theta = build_case(rng)
        s = np.linalg.svd(effective_channel(ch, theta, "eve"), compute_uv=False)
        if s.size > 2:
            assert s[2] <= 1e-10 * s[0]


class TestGain2x2:
    def test_orthogonal_combiner_zero_row(self, rng):
        cfg, ch, td, theta = build_case(rng)
        h_b = effective_channel(ch, theta, "bob")
        # u1 orthogonal to the 2-dim column space of H_B
        q, _ = np.linalg.qr(h_b @ np.column_stack([td.v1, td.v2]))
        u1 = random_unit_vector(rng, cfg.n_b)
        u1 -= q @ (q.conj().T @ u1)
        if np.linalg.norm(u1) > 1e-6:
            u1 /= np.linalg.norm(u1)
            g = gain_2x2(h_b, u1, random_unit_vector(rng, cfg.n_b),
                         td.v1, td.v2, cfg.beta1, cfg.beta2, cfg.ps)
            assert abs(g.a) <= 1e-10 and abs(g.b) <= 1e-10

    def test_zero_beta_zeroes_column(self, rng):
        cfg, ch, td, theta = build_case(rng)
        h_b = effective_channel(ch, theta, "bob")
        u1, u2 = random_unit_vector(rng, cfg.n_b), random_unit_vector(rng, cfg.n_b)
        g = gain_2x2(h_b, u1, u2, td.v1, td.v2, 0.0, cfg.beta2, cfg.ps)
        assert g.a == 0 and g.c == 0

    def test_power_scaling(self, rng):
        cfg, ch, td, theta = build_case(rng)
        h_b = effective_channel(ch, theta, "bob")
        u1, u2 = random_unit_vector(rng, cfg.n_b), random_unit_vector(rng, cfg.n_b)
        g1 = gain_2x2(h_b, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, 1.0)
        g4 = gain_2x2(h_b, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, 4.0)
        np.testing.assert_allclose(np.abs(g4.as_matrix()), 2 * np.abs(g1.as_matrix()))


class TestRateBob:
    def test_zero_gain_zero_rate(self, rng):
        from irsdm.metrics import Gain2x2
        u1 = np.array([1.0, 0.0]); u2 = np.array([0.0, 1.0])
        assert rate_bob(Gain2x2(0, 0, 0, 0), u1, u2, 1e-3) == pytest.approx(0.0)

    def test_orthonormal_diagonal_decouples(self):
        from irsdm.metrics import Gain2x2
        g1, g2, sigma2 = 0.3 + 0.1j, 0.05 - 0.2j, 1e-2
        u1 = np.array([1.0, 0.0]); u2 = np.array([0.0, 1.0])
        r = rate_bob(Gain2x2(g1, 0, 0, g2), u1, u2, sigma2)
        expected = np.log2(1 + abs(g1) ** 2 / sigma2) + np.log2(1 + abs(g2) ** 2 / sigma2)
        assert r == pytest.approx(expected, rel=1e-12)

    def test_matches_covariance_oracle(self, rng):
        for _ in range(10):
            cfg, ch, td, theta = build_case(rng)
            u1, u2 = random_unit_vector(rng, cfg.n_b), random_unit_vector(rng, cfg.n_b)
            h_b = effective_channel(ch, theta, "bob")
            g = gain_2x2(h_b, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, cfg.ps)
            ours = rate_bob(g, u1, u2, cfg.sigma2)
            oracle = covariance_rate_bob(ch, theta, u1, u2, td.v1, td.v2,
                                         cfg.beta1, cfg.beta2, cfg.ps, cfg.sigma2)
            assert ours == pytest.approx(oracle, rel=1e-10)

    def test_parallel_combiners_raise(self, rng):
        from irsdm.metrics import Gain2x2
        u = random_unit_vector(rng, 4)
        with pytest.raises(DegenerateError):
            rate_bob(Gain2x2(1, 0, 0, 1), u, u * np.exp(0.3j), 1e-3)


class TestRateEve:
    def test_no_jamming_reduces_to_user_formula(self, rng):
        cfg, ch, td, theta = build_case(rng)
        u1, u2 = random_unit_vector(rng, cfg.n_e), random_unit_vector(rng, cfg.n_e)
        h_e = effective_channel(ch, theta, "eve")
        g = gain_2x2(h_e, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, cfg.ps)
        r0 = rate_eve(g, u1, u2, ch, td.p_an, 0.0, cfg.ps, cfg.sigma2)
        assert r0 == pytest.approx(rate_bob(g, u1, u2, cfg.sigma2), rel=1e-10)

    def test_monotone_in_jamming_power(self, rng):
        cfg, ch, td, theta = build_case(rng)
        u1, u2 = random_unit_vector(rng, cfg.n_e), random_unit_vector(rng, cfg.n_e)
        h_e = effective_channel(ch, theta, "eve")
        g = gain_2x2(h_e, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, cfg.ps)
        rates = [rate_eve(g, u1, u2, ch, td.p_an, b3, cfg.ps, cfg.sigma2)
                 for b3 in (0.0, 0.1, 0.2)]
        assert rates[0] >= rates[1] - 1e-12 >= rates[2] - 2e-12

    def test_zero_gain_zero_rate(self, rng):
        from irsdm.metrics import Gain2x2
        cfg, ch, td, _ = build_case(rng)
        u1 = np.eye(cfg.n_e)[0]; u2 = np.eye(cfg.n_e)[1]
        assert rate_eve(Gain2x2(0, 0, 0, 0), u1, u2, ch, td.p_an,
                        cfg.beta3, cfg.ps, cfg.sigma2) == pytest.approx(0.0)

    def test_matches_covariance_oracle(self, rng):
        for _ in range(10):
            cfg, ch, td, theta = build_case(rng)
            u1, u2 = random_unit_vector(rng, cfg.n_e), random_unit_vector(rng, cfg.n_e)
            h_e = effective_channel(ch, theta, "eve")
            g = gain_2x2(h_e, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, cfg.ps)
            ours = rate_eve(g, u1, u2, ch, td.p_an, cfg.beta3, cfg.ps, cfg.sigma2)
            oracle = covariance_rate_eve(ch, theta, u1, u2, td.v1, td.v2, td.p_an,
                                         cfg.beta1, cfg.beta2, cfg.beta3, cfg.ps, cfg.sigma2)
            assert ours == pytest.approx(oracle, rel=1e-10)


class TestReceivePowerSum:
    def test_equals_diagonal_gain_power(self, rng):
        cfg, ch, td, theta = build_case(rng)
        u1, u2 = random_unit_vector(rng, cfg.n_b), random_unit_vector(rng, cfg.n_b)
        h_b = effective_channel(ch, theta, "bob")
        g = gain_2x2(h_b, u1, u2, td.v1, td.v2, cfg.beta1, cfg.beta2, cfg.ps)
        rps = rps_objective(ch, u1, u2, theta, td, cfg)
        assert rps == pytest.approx(abs(g.a) ** 2 + abs(g.d) ** 2, rel=1e-12)

    def test_global_phase_invariance(self, rng):
        cfg, ch, td, theta = build_case(rng)
        u1, u2 = random_unit_vector(rng, cfg.n_b), random_unit_vector(rng, cfg.n_b)
        base = rps_objective(ch, u1, u2, theta, td, cfg)
        rotated = rps_objective(ch, u1 * np.exp(0.7j), u2, theta, td, cfg)
        assert rotated == pytest.approx(base, rel=1e-10)


class TestSecrecyRate:
    def _solution(self, rng, cfg, ch, td, theta):
        u_e1, u_e2 = eve_beamformers(ch, theta, td, cfg, "rayleigh_ritz")
        u_b1, u_b2 = random_unit_vector(rng, cfg.n_b), random_unit_vector(rng, cfg.n_b)
        return BeamformingSolution(u_b1, u_b2, u_e1, u_e2, theta)

    def test_fields_consistent(self, rng):
        cfg, ch, td, theta = build_case(rng)
        sol = self._solution(rng, cfg, ch, td, theta)
        rep = secrecy_rate(ch, sol, td, cfg)
        assert rep.r_s == max(0.0, rep.r_b - rep.r_e)
        assert rep.r_b >= 0 and rep.r_e >= 0 and rep.rps >= 0
        assert rep.rps == pytest.approx(receive_power_sum(ch, sol, td, cfg))

    def test_global_phase_invariance(self, rng):
        cfg, ch, td, theta = build_case(rng)
        sol = self._solution(rng, cfg, ch, td, theta)
        rep = secrecy_rate(ch, sol, td, cfg)
        sol2 = BeamformingSolution(sol.u_b1 * np.exp(1.1j), sol.u_b2,
                                   sol.u_e1, sol.u_e2 * np.exp(-0.4j), theta)
        rep2 = secrecy_rate(ch, sol2, td, cfg)
        assert rep2.r_b == pytest.approx(rep.r_b, rel=1e-10)
        assert rep2.r_e == pytest.approx(rep.r_e, rel=1e-10)
        assert rep2.r_s == pytest.approx(rep.r_s, rel=1e-9, abs=1e-12)


class TestEveBeamformers:
    def test_rayleigh_ritz_matched(self, rng):
        cfg, ch, td, theta = build_case(rng)
        u_e1, u_e2 = eve_beamformers(ch, theta, td, cfg, "rayleigh_ritz")
        h_e = effective_channel(ch, theta, "eve")
        k1 = h_e @ td.v1
        assert abs(u_e1.conj() @ (k1 / np.linalg.norm(k1))) == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.norm(u_e2) == pytest.approx(1.0)

    def test_zero_forcing_nulls(self, rng):
        cfg, ch, td, theta = build_case(rng)
        u_e1, u_e2 = eve_beamformers(ch, theta, td, cfg, "zero_forcing")
        assert np.linalg.norm(u_e1.conj() @ ch.h_ae_h) <= 1e-9
        assert np.linalg.norm(u_e2.conj() @ ch.h_ie_h) <= 1e-9

    def test_unknown_mode(self, rng):
        cfg, ch, td, theta = build_case(rng)
        with pytest.raises(ValueError):
            eve_beamformers(ch, theta, td, cfg, "nope")
