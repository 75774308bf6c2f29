"""Scenario geometry: ULA steering vectors, rank-one LOS channels, and
power-law path loss.

The transmitter (Alice) serves a multi-antenna user (Bob) beside an
eavesdropper (Eve), assisted by an M-element reflecting surface. Five
links exist: Alice->IRS (ai), Alice->Bob (ab), Alice->Eve (ae),
IRS->Bob (ib), IRS->Eve (ie). Every channel is the outer product of a
receive and a transmit steering vector, hence rank one.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, ContractError

PI = math.pi


@dataclass(frozen=True)
class ArraySpec:
    """Uniform linear array: element count and spacing in wavelengths."""
    n: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"array size must be >= 1, got {self.n}")
        if self.spacing_over_wavelength <= 0:
            raise ConfigError("spacing_over_wavelength must be positive")


@dataclass(frozen=True)
class LinkAngles:
    """Departure and arrival angle (radians) of one link."""
    departure: float
    arrival: float

    def __post_init__(self):
        for name, val in (("departure", self.departure), ("arrival", self.arrival)):
            if not (0.0 <= val < 2 * PI):
                raise ConfigError(f"angle {name}={val} outside [0, 2*pi)")


@dataclass(frozen=True)
class ScenarioAngles:
    ai: LinkAngles
    ab: LinkAngles
    ae: LinkAngles
    ib: LinkAngles
    ie: LinkAngles


def default_angles() -> ScenarioAngles:
    # Departure angles of the three Alice links are the standard scenario
    # values; the remaining arrival/IRS-side angles are artifact defaults
    # chosen so the direct and reflected paths arrive at each receiver
    # from distinct directions (zero-forcing separation needs that).
    return ScenarioAngles(
        ai=LinkAngles(departure=5 * PI / 36, arrival=7 * PI / 36),
        ab=LinkAngles(departure=11 * PI / 36, arrival=PI / 6),
        ae=LinkAngles(departure=PI / 3, arrival=PI / 5),
        ib=LinkAngles(departure=3 * PI / 7, arrival=5 * PI / 12),
        ie=LinkAngles(departure=5 * PI / 12, arrival=3 * PI / 10),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """All geometry, array sizes, power split, noise, and path-loss
    parameters defining one experiment."""
    n_a: int = 16
    n_b: int = 4
    n_e: int = 4
    m: int = 80
    angles: ScenarioAngles = field(default_factory=default_angles)
    d_ai: float = 10.0
    d_ab: float = 50.0
    d_ae: float = 50.0
    d_ib: float = 2.0
    d_ie: float = 40.0
    ps: float = 1.0            # total transmit power, watts (30 dBm)
    beta1: float = 0.4
    beta2: float = 0.4
    beta3: float = 0.2
    sigma2: float = 1e-5       # receiver noise power, watts
    alpha: float = 2.0         # path-loss exponent
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        for name in ("n_a", "n_b", "n_e", "m"):
            val = getattr(self, name)
            if not isinstance(val, int) or val < 1:
                raise ConfigError(f"{name} must be a positive integer, got {val!r}")
        for name in ("d_ai", "d_ab", "d_ae", "d_ib", "d_ie", "ps", "sigma2",
                     "spacing_over_wavelength"):
            val = getattr(self, name)
            if not val > 0:
                raise ConfigError(f"{name} must be positive, got {val!r}")
        betas = (self.beta1, self.beta2, self.beta3)
        if any(b < 0 for b in betas):
            raise ConfigError(f"beta1, beta2, beta3 must be >= 0, got {betas}")
        if abs(sum(betas) - 1.0) > 1e-9:
            raise ConfigError(
                f"beta1 + beta2 + beta3 must equal 1, got {sum(betas)!r}")

    def with_updates(self, **kwargs) -> "ScenarioConfig":
        return replace(self, **kwargs)


@dataclass(eq=False)
class ChannelSet:
    """The five rank-one LOS channel matrices plus the four linear
    path-loss gains. Matrix names follow the receive-side convention:
    h_ab_h holds the Bob-side channel (n_b x n_a), etc."""
    h_ai: np.ndarray    # m   x n_a
    h_ab_h: np.ndarray  # n_b x n_a
    h_ae_h: np.ndarray  # n_e x n_a
    h_ib_h: np.ndarray  # n_b x m
    h_ie_h: np.ndarray  # n_e x m
    g_aib: float
    g_aie: float
    g_ab: float
    g_ae: float


def steering_vector(theta: float, arr: ArraySpec) -> np.ndarray:
    """Normalized ULA steering vector for direction angle theta.

    Entry k (1-based) is exp(j*2*pi*psi(k)) / sqrt(n) with
    psi(k) = -(k - (n+1)/2) * (d/lambda) * cos(theta).
    """
    k = np.arange(1, arr.n + 1)
    psi = -(k - (arr.n + 1) / 2) * arr.spacing_over_wavelength * np.cos(theta)
    return np.exp(2j * PI * psi) / np.sqrt(arr.n)


def los_channel(rx_angle: float, rx: ArraySpec, tx_angle: float, tx: ArraySpec) -> np.ndarray:
    """Rank-one LOS channel h(rx_angle) h(tx_angle)^H of shape rx.n x tx.n."""
    return np.outer(steering_vector(rx_angle, rx),
                    steering_vector(tx_angle, tx).conj())


def path_loss(dist_m: float, alpha: float) -> float:
    """Linear power gain d^(-alpha)."""
    if dist_m <= 0:
        raise ContractError(f"distance must be positive, got {dist_m}")
    return float(dist_m ** (-alpha))


def build_channels(cfg: ScenarioConfig) -> ChannelSet:
    """Construct all five LOS matrices and the four path-loss gains."""
    alice = ArraySpec(cfg.n_a, cfg.spacing_over_wavelength)
    bob = ArraySpec(cfg.n_b, cfg.spacing_over_wavelength)
    eve = ArraySpec(cfg.n_e, cfg.spacing_over_wavelength)
    irs = ArraySpec(cfg.m, cfg.spacing_over_wavelength)
    ang = cfg.angles
    g_ai = path_loss(cfg.d_ai, cfg.alpha)
    return ChannelSet(
        h_ai=los_channel(ang.ai.arrival, irs, ang.ai.departure, alice),
        h_ab_h=los_channel(ang.ab.arrival, bob, ang.ab.departure, alice),
        h_ae_h=los_channel(ang.ae.arrival, eve, ang.ae.departure, alice),
        h_ib_h=los_channel(ang.ib.arrival, bob, ang.ib.departure, irs),
        h_ie_h=los_channel(ang.ie.arrival, eve, ang.ie.departure, irs),
        g_aib=g_ai * path_loss(cfg.d_ib, cfg.alpha),
        g_aie=g_ai * path_loss(cfg.d_ie, cfg.alpha),
        g_ab=path_loss(cfg.d_ab, cfg.alpha),
        g_ae=path_loss(cfg.d_ae, cfg.alpha),
    )
