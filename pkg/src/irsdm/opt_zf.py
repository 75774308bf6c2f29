"""Low-complexity zero-forcing optimizer: each combiner nulls one of the
two propagation paths, so the direct-path and reflected-path streams are
recovered independently; the phase update then reduces to exact
entrywise phase alignment.

By default each combiner subproblem is solved inside the null space of
the path it must reject (the literal unconstrained subproblems are kept
behind ``enforce_zf_in_subproblem=False`` for comparison). With the
constraints enforced, every block update is an exact maximizer over its
feasible set, so the objective trace is non-decreasing without any
safeguard.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, ScenarioConfig
from .errors import DegenerateError
from .metrics import (BeamformingSolution, eve_beamformers, rps_objective,
                      secrecy_rate)
from .numerics import (hermitian_principal_eigpair, null_space_projector,
                       unit_modulus_project)
from .opt_gao import ConvergenceTrace, TraceRecord, _stream_theta_terms
from .precoding import TransmitDesign

__all__ = ["ZfSettings", "null_space_projector", "zf_update_rbf",
           "zf_update_theta", "run_zf"]


@dataclass(frozen=True)
class ZfSettings:
    epsilon: float = 1e-6
    max_iter: int = 50
    enforce_zf_in_subproblem: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def _principal(mat, reference_norm: float) -> np.ndarray:
    val, u = hermitian_principal_eigpair(mat)
    if val <= 1e-24 * reference_norm:
        raise DegenerateError(
            "zero-forcing combiner subproblem has a zero signal direction")
    return u


def zf_update_rbf(ch: ChannelSet, theta, td: TransmitDesign,
                  cfg: ScenarioConfig, settings: ZfSettings | None = None):
    """Combiner updates: u1 matches the reflected path of stream 1, u2
    the direct path of stream 2. With the constraints enforced, each
    matched direction is first projected into the null space of the
    rejected path."""
    if settings is None:
        settings = ZfSettings()
    theta = np.asarray(theta, dtype=complex)
    k1 = np.sqrt(cfg.beta1 * cfg.ps * ch.g_aib) * (ch.h_ib_h @ (theta * (ch.h_ai @ td.v1)))
    m2 = np.sqrt(cfg.beta2 * cfg.ps * ch.g_ab) * (ch.h_ab_h @ td.v2)
    mat1 = np.outer(k1, k1.conj())
    mat2 = np.outer(m2, m2.conj())
    if settings.enforce_zf_in_subproblem:
        p_ab = null_space_projector(ch.h_ab_h)
        p_ib = null_space_projector(ch.h_ib_h)
        mat1 = p_ab @ mat1 @ p_ab
        mat2 = p_ib @ mat2 @ p_ib
    u_b1 = _principal(mat1, float(np.vdot(k1, k1).real))
    u_b2 = _principal(mat2, float(np.vdot(m2, m2).real))
    return u_b1, u_b2


def zf_update_theta(ch: ChannelSet, u_b1, td: TransmitDesign,
                    cfg: ScenarioConfig, prev_theta) -> np.ndarray:
    """Exact phase update: with the stream-2 term independent of the
    phases and the stream-1 direct term nulled, the objective is
    |w1^H theta|^2, maximized by aligning each phase with w1. Zero
    entries of w1 keep the previous iterate's phase."""
    w1, _ = _stream_theta_terms(ch, u_b1, td.v1, cfg.beta1, cfg)
    return unit_modulus_project(w1, prev_theta)


def run_zf(ch: ChannelSet, td: TransmitDesign, cfg: ScenarioConfig,
           settings: ZfSettings | None = None,
           eve_mode: str = "zero_forcing"):
    """Alternate the zero-forcing combiner and phase updates with the
    same loop contract as the general optimizer."""
    if settings is None:
        settings = ZfSettings()
    theta = np.ones(cfg.m, dtype=complex)
    trace = ConvergenceTrace()
    u_b1 = u_b2 = u_e1 = u_e2 = None
    prev_rps = None
    for p in range(1, settings.max_iter + 1):
        u_b1, u_b2 = zf_update_rbf(ch, theta, td, cfg, settings)
        theta = zf_update_theta(ch, u_b1, td, cfg, theta)
        rps = rps_objective(ch, u_b1, u_b2, theta, td, cfg)
        u_e1, u_e2 = eve_beamformers(ch, theta, td, cfg, eve_mode)
        sol = BeamformingSolution(u_b1, u_b2, u_e1, u_e2, theta)
        report = secrecy_rate(ch, sol, td, cfg)
        trace.records.append(TraceRecord(p, rps, report.r_s, None,
                                         u_b1, u_b2, theta))
        trace.iterations_used = p
        if prev_rps is not None and \
                abs(rps - prev_rps) <= settings.epsilon * max(abs(prev_rps), 1e-300):
            trace.converged = True
            break
        prev_rps = rps
    sol = BeamformingSolution(u_b1, u_b2, u_e1, u_e2, theta)
    return sol, trace
