"""Effective channels, two-stream gain matrices, achievable rates,
secrecy rate, and the receive-power-sum objective.

Rates are in bits/s/Hz (base-2 logs). The two receive beamformers need
not be orthogonal: the Gram matrix of the combiners is carried through
the log-det expressions explicitly.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, ScenarioConfig
from .errors import DegenerateError, DimensionError
from .numerics import hermitian_principal_eigpair, null_space_projector
from .precoding import TransmitDesign

# below this, det(U^H U) = 1 - |u1^H u2|^2 counts as singular
_GRAM_DET_TOL = 1e-12
_ZERO_DIR_TOL = 1e-300


@dataclass(eq=False)
class BeamformingSolution:
    """Receive beamformers for user and eavesdropper plus the
    unit-modulus phase vector of the reflecting surface."""
    u_b1: np.ndarray
    u_b2: np.ndarray
    u_e1: np.ndarray
    u_e2: np.ndarray
    theta: np.ndarray


@dataclass(frozen=True)
class Gain2x2:
    """Complex stream gains: rows index combiners, columns index streams."""
    a: complex
    b: complex
    c: complex
    d: complex

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])


@dataclass(frozen=True)
class RateReport:
    r_b: float
    r_e: float
    r_s: float
    rps: float


def effective_channel(ch: ChannelSet, theta: np.ndarray, side: str) -> np.ndarray:
    """Combined reflected-plus-direct channel for side "bob" or "eve"."""
    theta = np.asarray(theta, dtype=complex)
    if theta.shape != (ch.h_ai.shape[0],):
        raise DimensionError(
            f"theta must have length {ch.h_ai.shape[0]}, got shape {theta.shape}")
    reflected = theta[:, None] * ch.h_ai
    if side == "bob":
        return np.sqrt(ch.g_aib) * (ch.h_ib_h @ reflected) + np.sqrt(ch.g_ab) * ch.h_ab_h
    if side == "eve":
        return np.sqrt(ch.g_aie) * (ch.h_ie_h @ reflected) + np.sqrt(ch.g_ae) * ch.h_ae_h
    raise ValueError(f"side must be 'bob' or 'eve', got {side!r}")


def gain_2x2(h, u1, u2, v1, v2, beta1: float, beta2: float, ps: float) -> Gain2x2:
    """Per-combiner, per-stream complex gains including the power split."""
    s1 = np.sqrt(beta1 * ps)
    s2 = np.sqrt(beta2 * ps)
    h1 = h @ v1
    h2 = h @ v2
    return Gain2x2(
        a=complex(s1 * (u1.conj() @ h1)),
        b=complex(s2 * (u1.conj() @ h2)),
        c=complex(s1 * (u2.conj() @ h1)),
        d=complex(s2 * (u2.conj() @ h2)),
    )


def _logdet_rate(g_mat: np.ndarray, cov: np.ndarray) -> float:
    """log2 det(I + G G^H cov^{-1}) for a 2x2 gain matrix and a positive
    definite 2x2 covariance."""
    x = g_mat @ g_mat.conj().T @ np.linalg.inv(cov)
    det = np.linalg.det(np.eye(2) + x)
    return float(np.log2(det.real))


def _check_gram(u1, u2) -> np.ndarray:
    w = np.column_stack([u1, u2])
    gram = w.conj().T @ w
    if abs(np.linalg.det(gram)) <= _GRAM_DET_TOL:
        raise DegenerateError("receive beamformers are (numerically) parallel")
    return gram


def rate_bob(g: Gain2x2, u1, u2, sigma2: float) -> float:
    """User rate: log2 det(I + G G^H (sigma2 * U^H U)^{-1})."""
    gram = _check_gram(u1, u2)
    return _logdet_rate(g.as_matrix(), sigma2 * gram)


def rate_eve(g: Gain2x2, u1, u2, ch: ChannelSet, p_an: np.ndarray,
             beta3: float, ps: float, sigma2: float) -> float:
    """Eavesdropper rate with the jamming covariance in the denominator."""
    gram = _check_gram(u1, u2)
    w = np.column_stack([u1, u2])
    an_cov = beta3 * ps * ch.g_ae * (ch.h_ae_h @ p_an @ p_an.conj().T @ ch.h_ae_h.conj().T)
    cov = w.conj().T @ an_cov @ w + sigma2 * gram
    return _logdet_rate(g.as_matrix(), cov)


def rps_objective(ch: ChannelSet, u_b1, u_b2, theta, td: TransmitDesign,
                  cfg: ScenarioConfig) -> float:
    """Receive power sum at the user:
    beta1*Ps*|u1^H H_B v1|^2 + beta2*Ps*|u2^H H_B v2|^2 (watts)."""
    h_b = effective_channel(ch, theta, "bob")
    p1 = cfg.beta1 * cfg.ps * abs(u_b1.conj() @ h_b @ td.v1) ** 2
    p2 = cfg.beta2 * cfg.ps * abs(u_b2.conj() @ h_b @ td.v2) ** 2
    return float(p1 + p2)


def receive_power_sum(ch: ChannelSet, sol: BeamformingSolution,
                      td: TransmitDesign, cfg: ScenarioConfig) -> float:
    return rps_objective(ch, sol.u_b1, sol.u_b2, sol.theta, td, cfg)


def _matched_combiner(h_eff, v, weight: float):
    """Principal eigenvector of weight * (H v)(H v)^H, i.e. the matched
    filter for one stream with the deterministic phase rule."""
    k = h_eff @ v
    if np.linalg.norm(k) <= _ZERO_DIR_TOL:
        raise DegenerateError("stream direction H v is zero; combiner undefined")
    _, u = hermitian_principal_eigpair(weight * np.outer(k, k.conj()))
    return u


def _projected_combiner(direction, projector):
    """Principal eigenvector of P d d^H P: the matched filter confined to
    the projector's range."""
    pk = projector @ direction
    scale = np.linalg.norm(direction)
    if scale <= _ZERO_DIR_TOL or np.linalg.norm(pk) <= 1e-12 * scale:
        raise DegenerateError(
            "projected stream direction is zero; zero-forcing combiner undefined")
    mat = projector @ np.outer(direction, direction.conj()) @ projector
    _, u = hermitian_principal_eigpair(mat)
    return u


def eve_beamformers(ch: ChannelSet, theta, td: TransmitDesign,
                    cfg: ScenarioConfig, mode: str):
    """Eavesdropper combiners used when evaluating rates.

    mode "rayleigh_ritz": worst-case per-stream matched filters on the
    eavesdropper's own effective channel.
    mode "zero_forcing": combiner 1 nulls her direct channel and matches
    her reflected path; combiner 2 nulls her reflected channel and
    matches her direct path.
    """
    if mode == "rayleigh_ritz":
        h_e = effective_channel(ch, theta, "eve")
        u_e1 = _matched_combiner(h_e, td.v1, cfg.beta1 * cfg.ps)
        u_e2 = _matched_combiner(h_e, td.v2, cfg.beta2 * cfg.ps)
        return u_e1, u_e2
    if mode == "zero_forcing":
        theta = np.asarray(theta, dtype=complex)
        k1 = np.sqrt(cfg.beta1 * cfg.ps * ch.g_aie) * (
            ch.h_ie_h @ (theta * (ch.h_ai @ td.v1)))
        m2 = np.sqrt(cfg.beta2 * cfg.ps * ch.g_ae) * (ch.h_ae_h @ td.v2)
        u_e1 = _projected_combiner(k1, null_space_projector(ch.h_ae_h))
        u_e2 = _projected_combiner(m2, null_space_projector(ch.h_ie_h))
        return u_e1, u_e2
    raise ValueError(f"unknown eavesdropper mode {mode!r}")


def secrecy_rate(ch: ChannelSet, sol: BeamformingSolution,
                 td: TransmitDesign, cfg: ScenarioConfig) -> RateReport:
    """Full rate report for one solution: R_B, R_E, R_s = max(0, R_B - R_E),
    and the receive power sum."""
    h_b = effective_channel(ch, sol.theta, "bob")
    g_b = gain_2x2(h_b, sol.u_b1, sol.u_b2, td.v1, td.v2,
                   cfg.beta1, cfg.beta2, cfg.ps)
    r_b = rate_bob(g_b, sol.u_b1, sol.u_b2, cfg.sigma2)

    h_e = effective_channel(ch, sol.theta, "eve")
    g_e = gain_2x2(h_e, sol.u_e1, sol.u_e2, td.v1, td.v2,
                   cfg.beta1, cfg.beta2, cfg.ps)
    r_e = rate_eve(g_e, sol.u_e1, sol.u_e2, ch, td.p_an,
                   cfg.beta3, cfg.ps, cfg.sigma2)

    return RateReport(
        r_b=r_b,
        r_e=r_e,
        r_s=max(0.0, r_b - r_e),
        rps=receive_power_sum(ch, sol, td, cfg),
    )
