"""General alternating optimizer for the receive-power-sum objective:
closed-form matched-filter combiner updates alternate with a closed-form
phase-shift update derived from the stationary point of the quadratic
objective, projected back to unit modulus.

The projection step is heuristic, so by default a monotonic safeguard
accepts a candidate phase vector only if it increases the objective,
trying the stationary point first, then its negation, then keeping the
previous iterate.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, ScenarioConfig
from .errors import DegenerateError
from .metrics import (BeamformingSolution, effective_channel, eve_beamformers,
                      rps_objective, secrecy_rate)
from .numerics import (hermitian_principal_eigpair, pseudo_inverse,
                       unit_modulus_project)
from .precoding import TransmitDesign, initial_rbf

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaoSettings:
    epsilon: float = 1e-6      # relative objective change at termination
    max_iter: int = 50
    safeguard: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(eq=False)
class TraceRecord:
    iteration: int
    rps: float
    r_s: float
    theta_choice: str | None = None
    u_b1: np.ndarray | None = None
    u_b2: np.ndarray | None = None
    theta: np.ndarray | None = None


@dataclass(eq=False)
class ConvergenceTrace:
    records: list[TraceRecord] = field(default_factory=list)
    converged: bool = False
    iterations_used: int = 0

    def rps_series(self) -> np.ndarray:
        return np.array([r.rps for r in self.records])

    def rs_series(self) -> np.ndarray:
        return np.array([r.r_s for r in self.records])


def gao_update_rbf(ch: ChannelSet, theta, td: TransmitDesign, cfg: ScenarioConfig):
    """Optimal combiners for fixed phases: principal eigenvectors of
    beta_i * Ps * (H_B v_i)(H_B v_i)^H, i.e. per-stream matched filters."""
    h_b = effective_channel(ch, theta, "bob")
    out = []
    for v, beta in ((td.v1, cfg.beta1), (td.v2, cfg.beta2)):
        k = h_b @ v
        if np.linalg.norm(k) == 0.0:
            raise DegenerateError("effective channel maps a precoder to zero")
        _, u = hermitian_principal_eigpair(beta * cfg.ps * np.outer(k, k.conj()))
        out.append(u)
    return out[0], out[1]


def _stream_theta_terms(ch: ChannelSet, u, v, beta: float, cfg: ScenarioConfig):
    """Linear form of one stream's gain in the phase vector:
    u^H H_B v = w^H theta + t."""
    row = np.sqrt(beta * cfg.ps * ch.g_aib) * (u.conj() @ ch.h_ib_h) * (ch.h_ai @ v)
    t = np.sqrt(beta * cfg.ps * ch.g_ab) * (u.conj() @ ch.h_ab_h @ v)
    return row.conj(), complex(t)


def gao_theta_terms(ch: ChannelSet, u_b1, u_b2, td: TransmitDesign, cfg: ScenarioConfig):
    """Reflected-path weight vectors and direct-path scalars of both
    streams, so that RPS = |w1^H theta + t1|^2 + |w2^H theta + t2|^2."""
    w1, t1 = _stream_theta_terms(ch, u_b1, td.v1, cfg.beta1, cfg)
    w2, t2 = _stream_theta_terms(ch, u_b2, td.v2, cfg.beta2, cfg)
    return w1, w2, t1, t2


def _quadratic_rps(w1, w2, t1, t2):
    def f(theta):
        return float(abs(w1.conj() @ theta + t1) ** 2
                     + abs(w2.conj() @ theta + t2) ** 2)
    return f


def _update_theta_with_choice(w1, w2, t1, t2, prev_theta, safeguard, rps_eval):
    """Phase update returning (theta, choice) with choice in
    {"raw", "flipped", "kept"}."""
    prev_theta = np.asarray(prev_theta, dtype=complex)
    if rps_eval is None:
        rps_eval = _quadratic_rps(w1, w2, t1, t2)
    # Stationary point of the unconstrained quadratic. The sign is chosen
    # so that, for the rank-one weight matrix this geometry produces, the
    # projected candidate is the exact unit-modulus maximizer.
    a = np.outer(w1, w1.conj()) + np.outer(w2, w2.conj())
    raw = pseudo_inverse(a) @ (w1 * t1 + w2 * t2)
    cand = unit_modulus_project(raw, prev_theta)
    if not safeguard:
        return cand, "raw"
    base = rps_eval(prev_theta)
    if rps_eval(cand) > base:
        return cand, "raw"
    flipped = unit_modulus_project(-raw, prev_theta)
    if rps_eval(flipped) > base:
        return flipped, "flipped"
    return prev_theta, "kept"


def gao_update_theta(w1, w2, t1, t2, prev_theta, safeguard: bool = True,
                     rps_eval=None) -> np.ndarray:
    """Closed-form phase-shift update; always returns unit-modulus phases.

    With the safeguard on, the result never decreases the objective:
    zero raw entries inherit the previous iterate's phases, and if
    neither the projected stationary point nor its negation improves,
    the previous phases are kept.
    """
    theta, _ = _update_theta_with_choice(w1, w2, t1, t2, prev_theta,
                                         safeguard, rps_eval)
    return theta


def run_gao(ch: ChannelSet, td: TransmitDesign, cfg: ScenarioConfig,
            settings: GaoSettings | None = None,
            eve_mode: str = "rayleigh_ritz"):
    """Alternate combiner and phase updates until the relative change of
    the receive power sum drops below epsilon or max_iter is reached.

    Phases start at all ones, combiners at the SVD initializer. Returns
    (BeamformingSolution, ConvergenceTrace); the trace records every
    iteration's objective and secrecy rate.
    """
    if settings is None:
        settings = GaoSettings()
    theta = np.ones(cfg.m, dtype=complex)
    trace = ConvergenceTrace()
    init = initial_rbf(ch)
    u_b1, u_b2 = init.u_b1, init.u_b2
    u_e1 = u_e2 = None
    prev_rps = None
    for p in range(1, settings.max_iter + 1):
        u_b1, u_b2 = gao_update_rbf(ch, theta, td, cfg)
        w1, w2, t1, t2 = gao_theta_terms(ch, u_b1, u_b2, td, cfg)

        def eval_rps(cand_theta):
            return rps_objective(ch, u_b1, u_b2, cand_theta, td, cfg)

        theta, choice = _update_theta_with_choice(
            w1, w2, t1, t2, theta, settings.safeguard, eval_rps)
        log.debug("iteration %d: theta candidate %s accepted", p, choice)

        rps = eval_rps(theta)
        u_e1, u_e2 = eve_beamformers(ch, theta, td, cfg, eve_mode)
        sol = BeamformingSolution(u_b1, u_b2, u_e1, u_e2, theta)
        report = secrecy_rate(ch, sol, td, cfg)
        trace.records.append(TraceRecord(p, rps, report.r_s, choice,
                                         u_b1, u_b2, theta))
        trace.iterations_used = p
        if prev_rps is not None and \
                abs(rps - prev_rps) <= settings.epsilon * max(abs(prev_rps), 1e-300):
            trace.converged = True
            break
        prev_rps = rps
    sol = BeamformingSolution(u_b1, u_b2, u_e1, u_e2, theta)
    return sol, trace
