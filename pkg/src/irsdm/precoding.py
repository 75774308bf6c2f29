"""Transmit-side design: stacked confidential-message channel, the
artificial-noise projector, the two SVD transmit beamformers, and the
SVD-based initial receive beamformers.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .errors import DegenerateError
from .numerics import DEFAULT_RANK_TOL, pseudo_inverse, svd


@dataclass(eq=False)
class TransmitDesign:
    """Unit-norm message precoders and the noise projector.

    p_an is the orthogonal projector onto the null space of the stacked
    message channel, so the jamming signal is invisible at the surface
    and at the user.
    """
    v1: np.ndarray
    v2: np.ndarray
    p_an: np.ndarray


@dataclass(eq=False)
class InitialRbf:
    u_b1: np.ndarray
    u_b2: np.ndarray


def stack_cm_channel(ch: ChannelSet) -> np.ndarray:
    """Vertical stack of the Alice->IRS and Alice->Bob channels,
    shape (m + n_b) x n_a. Rank <= 2 since both blocks are rank one."""
    return np.vstack([ch.h_ai, ch.h_ab_h])


def an_projection(h_cm: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """P = I - H^H [H H^H]^+ H: Hermitian idempotent projector with
    H @ P = 0 and trace(P) = n_a - rank(H)."""
    n_a = h_cm.shape[1]
    gram = h_cm @ h_cm.conj().T
    return np.eye(n_a, dtype=complex) - h_cm.conj().T @ pseudo_inverse(gram, rank_tol) @ h_cm


def transmit_beamformers(h_cm: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL):
    """First two right singular vectors of the stacked message channel.

    Raises DegenerateError when the stack is (numerically) rank one,
    i.e. the user and the surface sit at the same departure angle; a
    second precoder would then point into the noise space.
    """
    u, s, v = svd(h_cm)
    if s.size < 2 or s[1] <= rank_tol * s[0]:
        raise DegenerateError(
            "stacked message channel has rank < 2; two transmit "
            "beamformers are not supported by this geometry")
    return v[:, 0], v[:, 1]


def initial_rbf(ch: ChannelSet) -> InitialRbf:
    """Two leading left singular vectors of the horizontally stacked
    receive channel [IRS->Bob, Alice->Bob] (n_b x (m + n_a))."""
    h_br = np.hstack([ch.h_ib_h, ch.h_ab_h])
    u, _, _ = svd(h_br)
    return InitialRbf(u_b1=u[:, 0], u_b2=u[:, 1])


def build_transmit_design(ch: ChannelSet, rank_tol: float = DEFAULT_RANK_TOL) -> TransmitDesign:
    h_cm = stack_cm_channel(ch)
    v1, v2 = transmit_beamformers(h_cm, rank_tol)
    return TransmitDesign(v1=v1, v2=v2, p_an=an_projection(h_cm, rank_tol))
