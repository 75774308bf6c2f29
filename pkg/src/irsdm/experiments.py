"""Baseline schemes, experiment sweeps, and closed-form FLOP models for
comparing the two optimizers.

Schemes:
  GAO          general alternating optimizer
  ZF           zero-forcing alternating optimizer
  RandomPhase  combiners optimized for uniformly random fixed phases
  NoIRS        reflecting surface removed; the stacked message channel is
               then rank one, so this baseline sends a single stream with
               the power of the second stream folded into the first
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelSet, ScenarioConfig, build_channels
from .errors import ConfigError, IrsdmError
from .metrics import (BeamformingSolution, RateReport, effective_channel,
                      eve_beamformers, secrecy_rate)
from .numerics import hermitian_principal_eigpair, svd
from .opt_gao import ConvergenceTrace, GaoSettings, gao_update_rbf, run_gao
from .opt_zf import ZfSettings, run_zf
from .precoding import TransmitDesign, an_projection, stack_cm_channel

SCHEMES = ("GAO", "ZF", "RandomPhase", "NoIRS")
SWEEP_VARIABLES = ("Ps_dBm", "M", "snr_dB", "theta_AE")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple
    schemes: tuple = SCHEMES
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"unknown sweep variable {self.variable!r}; "
                              f"expected one of {SWEEP_VARIABLES}")
        if len(self.values) == 0:
            raise ConfigError("sweep values must be non-empty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown:
            raise ConfigError(f"unknown schemes {unknown}; expected subset of {SCHEMES}")


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    variable: str
    value: float
    trial: int
    r_b: float
    r_e: float
    r_s: float
    rps: float
    iterations_used: int
    flops_estimate: float
    mode: str = ""
    eve_mode: str = ""
    error: str = ""


@dataclass(eq=False)
class SchemeResult:
    report: RateReport
    solution: BeamformingSolution | None
    trace: ConvergenceTrace | None
    eve_mode: str
    mode: str = ""


def random_phase_psm(m: int, seed: int) -> np.ndarray:
    """Unit-modulus phase vector with phases i.i.d. uniform on [0, 2*pi),
    deterministic for a given seed."""
    if m < 1:
        raise ConfigError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    return np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, m))


def no_irs_channels(ch: ChannelSet) -> ChannelSet:
    """Copy of the channel set with all surface-related matrices zeroed."""
    return ChannelSet(
        h_ai=np.zeros_like(ch.h_ai),
        h_ab_h=ch.h_ab_h.copy(),
        h_ae_h=ch.h_ae_h.copy(),
        h_ib_h=np.zeros_like(ch.h_ib_h),
        h_ie_h=np.zeros_like(ch.h_ie_h),
        g_aib=ch.g_aib, g_aie=ch.g_aie, g_ab=ch.g_ab, g_ae=ch.g_ae,
    )


def flops_gao(d: int, m: int, n_a: int, n_b: int) -> float:
    """Operation count of the general optimizer over d iterations."""
    return float(d) * (m ** 3 + (2 * n_b + 5) * m ** 2
                       + (2 * n_b * n_a + 2 * n_a + 2 * n_b + 2) * m
                       + (2 * n_b ** 3 + 2 * n_b ** 2 + 2 * n_b * n_a))


def flops_zf(l: int, m: int, n_b: int) -> float:
    """Operation count of the zero-forcing optimizer over l iterations."""
    return float(l) * (m ** 3 + (2 * n_b + 1) * m ** 2
                       + (2 * n_b ** 3 + 2 * n_b ** 2))


def _transmit_design(ch: ChannelSet) -> TransmitDesign:
    from .precoding import build_transmit_design
    return build_transmit_design(ch)


def solve_gao(cfg: ScenarioConfig, settings: GaoSettings | None = None,
              eve_mode: str = "rayleigh_ritz") -> SchemeResult:
    ch = build_channels(cfg)
    td = _transmit_design(ch)
    sol, trace = run_gao(ch, td, cfg, settings, eve_mode)
    if settings is None:
        settings = GaoSettings()
    return SchemeResult(secrecy_rate(ch, sol, td, cfg), sol, trace, eve_mode,
                        mode="safeguarded" if settings.safeguard else "literal")


def solve_zf(cfg: ScenarioConfig, settings: ZfSettings | None = None,
             eve_mode: str = "zero_forcing") -> SchemeResult:
    ch = build_channels(cfg)
    td = _transmit_design(ch)
    sol, trace = run_zf(ch, td, cfg, settings, eve_mode)
    if settings is None:
        settings = ZfSettings()
    return SchemeResult(secrecy_rate(ch, sol, td, cfg), sol, trace, eve_mode,
                        mode="projected" if settings.enforce_zf_in_subproblem else "literal")


def solve_random_phase(cfg: ScenarioConfig, seed: int,
                       eve_mode: str = "rayleigh_ritz") -> SchemeResult:
    """Random fixed phases; only the combiners are optimized (one
    closed-form matched-filter update)."""
    ch = build_channels(cfg)
    td = _transmit_design(ch)
    theta = random_phase_psm(cfg.m, seed)
    u_b1, u_b2 = gao_update_rbf(ch, theta, td, cfg)
    u_e1, u_e2 = eve_beamformers(ch, theta, td, cfg, eve_mode)
    sol = BeamformingSolution(u_b1, u_b2, u_e1, u_e2, theta)
    return SchemeResult(secrecy_rate(ch, sol, td, cfg), sol, None, eve_mode)


def solve_no_irs(cfg: ScenarioConfig) -> SchemeResult:
    """Surface removed. The stacked message channel [0; H_AB^H] is rank
    one, so only one stream is supportable: the second stream's power is
    reassigned to the first and scalar single-stream rates are reported."""
    ch = no_irs_channels(build_channels(cfg))
    h_cm = stack_cm_channel(ch)
    _, s, v = svd(h_cm)
    if s[0] == 0.0:
        raise IrsdmError("direct channel is zero; no stream supportable")
    v1 = v[:, 0]
    p_an = an_projection(h_cm)
    b1 = cfg.beta1 + cfg.beta2
    theta = np.ones(cfg.m, dtype=complex)

    h_b = effective_channel(ch, theta, "bob")
    k_b = h_b @ v1
    _, u_b1 = hermitian_principal_eigpair(b1 * cfg.ps * np.outer(k_b, k_b.conj()))
    gain_b = b1 * cfg.ps * abs(u_b1.conj() @ k_b) ** 2
    r_b = math.log2(1.0 + gain_b / cfg.sigma2)

    h_e = effective_channel(ch, theta, "eve")
    k_e = h_e @ v1
    _, u_e1 = hermitian_principal_eigpair(b1 * cfg.ps * np.outer(k_e, k_e.conj()))
    an_cov = cfg.beta3 * cfg.ps * ch.g_ae * (
        ch.h_ae_h @ p_an @ p_an.conj().T @ ch.h_ae_h.conj().T)
    denom = float((u_e1.conj() @ an_cov @ u_e1).real) + cfg.sigma2
    gain_e = b1 * cfg.ps * abs(u_e1.conj() @ k_e) ** 2
    r_e = math.log2(1.0 + gain_e / denom)

    report = RateReport(r_b=r_b, r_e=r_e, r_s=max(0.0, r_b - r_e), rps=gain_b)
    return SchemeResult(report, None, None, eve_mode="rayleigh_ritz",
                        mode="single_stream")


def apply_sweep_variable(base: ScenarioConfig, variable: str, value) -> ScenarioConfig:
    if variable == "Ps_dBm":
        return replace(base, ps=10.0 ** ((value - 30.0) / 10.0))
    if variable == "M":
        return replace(base, m=int(value))
    if variable == "snr_dB":
        return replace(base, sigma2=base.ps / 10.0 ** (value / 10.0))
    if variable == "theta_AE":
        angles = replace(base.angles,
                         ae=replace(base.angles.ae, departure=float(value)))
        return replace(base, angles=angles)
    raise ConfigError(f"unknown sweep variable {variable!r}")


def run_scheme(scheme: str, cfg: ScenarioConfig, seed: int = 0,
               gao_settings: GaoSettings | None = None,
               zf_settings: ZfSettings | None = None) -> SchemeResult:
    if scheme == "GAO":
        return solve_gao(cfg, gao_settings)
    if scheme == "ZF":
        return solve_zf(cfg, zf_settings)
    if scheme == "RandomPhase":
        return solve_random_phase(cfg, seed)
    if scheme == "NoIRS":
        return solve_no_irs(cfg)
    raise ConfigError(f"unknown scheme {scheme!r}")


def _flops_for(scheme: str, result: SchemeResult, cfg: ScenarioConfig) -> float:
    if scheme == "GAO" and result.trace is not None:
        return flops_gao(result.trace.iterations_used, cfg.m, cfg.n_a, cfg.n_b)
    if scheme == "ZF" and result.trace is not None:
        return flops_zf(result.trace.iterations_used, cfg.m, cfg.n_b)
    return 0.0


def run_sweep(base: ScenarioConfig, spec: SweepSpec,
              gao_settings: GaoSettings | None = None,
              zf_settings: ZfSettings | None = None,
              jobs: int = 1) -> list[SweepRow]:
    """One row per scheme x value x trial, in that order regardless of
    how the points are executed. Failed points produce a row with the
    error message and NaN rates rather than being dropped.

    The random-phase baseline draws its phases from seed + trial only,
    so its curve over the sweep variable reuses the same draw (and
    averaging over trials means averaging over seeds).
    """
    tasks = [(scheme, value, trial)
             for scheme in spec.schemes
             for value in spec.values
             for trial in range(spec.trials)]

    def one(task):
        scheme, value, trial = task
        cfg = apply_sweep_variable(base, spec.variable, value)
        try:
            result = run_scheme(scheme, cfg, seed=spec.seed + trial,
                                gao_settings=gao_settings, zf_settings=zf_settings)
        except IrsdmError as exc:
            return SweepRow(scheme, spec.variable, float(value), trial,
                            math.nan, math.nan, math.nan, math.nan, 0, 0.0,
                            error=f"{type(exc).__name__}: {exc}")
        iters = result.trace.iterations_used if result.trace is not None else 1
        return SweepRow(scheme, spec.variable, float(value), trial,
                        result.report.r_b, result.report.r_e,
                        result.report.r_s, result.report.rps,
                        iters, _flops_for(scheme, result, cfg),
                        mode=result.mode, eve_mode=result.eve_mode)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, tasks))
    return [one(t) for t in tasks]
