"""Shared helpers: random but numerically wholesome scenario configs."""

import math

import numpy as np
import pytest

from irsdm.channel import LinkAngles, ScenarioAngles, ScenarioConfig


def random_unit_vector(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_unit_modulus(rng, n):
    return np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, n))


def random_config(rng, **overrides) -> ScenarioConfig:
    """Random valid scenario. Angle draws are rejected until the steering
    signatures that must stay distinguishable (stacked-channel rank,
    zero-forcing feasibility, eavesdropper stream separation) are
    separated in cos(theta)."""
    while True:
        ai, ab, ae, ib, ie = (
            LinkAngles(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
            for _ in range(5))
        separations = (
            abs(math.cos(ai.departure) - math.cos(ab.departure)),
            abs(math.cos(ab.arrival) - math.cos(ib.arrival)),
            abs(math.cos(ae.arrival) - math.cos(ie.arrival)),
            abs(math.cos(ai.departure) - math.cos(ae.departure)),
            abs(math.cos(ab.departure) - math.cos(ae.departure)),
        )
        if min(separations) > 0.05:
            break
    beta3 = rng.uniform(0.05, 0.4)
    beta1 = rng.uniform(0.2, 0.8) * (1.0 - beta3)
    kwargs = dict(
        n_a=int(rng.integers(6, 17)),
        n_b=int(rng.integers(2, 6)),
        n_e=int(rng.integers(2, 6)),
        m=int(rng.integers(4, 33)),
        angles=ScenarioAngles(ai, ab, ae, ib, ie),
        d_ai=float(rng.uniform(5.0, 30.0)),
        d_ab=float(rng.uniform(20.0, 80.0)),
        d_ae=float(rng.uniform(20.0, 80.0)),
        d_ib=float(rng.uniform(1.0, 10.0)),
        d_ie=float(rng.uniform(10.0, 60.0)),
        ps=float(rng.uniform(0.1, 4.0)),
        beta1=beta1,
        beta2=1.0 - beta3 - beta1,
        beta3=beta3,
        sigma2=float(rng.uniform(1e-6, 1e-4)),
    )
    kwargs.update(overrides)
    return ScenarioConfig(**kwargs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
