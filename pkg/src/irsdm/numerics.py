"""Complex dense linear-algebra kernel used by every other module.

All decompositions are phase-normalized (largest-magnitude entry of each
vector made real non-negative) so repeated calls on identical input give
bit-identical output. Everything here is a pure function; thread-safe.
"""

import numpy as np

from .errors import ContractError, DimensionError, ZfInfeasibleError

# Singular values at or below DEFAULT_RANK_TOL * s_max count as zero. The
# matrices inverted in this package have exact rank <= 2, so a strict
# relative tolerance preserves that structure under floating point.
DEFAULT_RANK_TOL = 1e-10


def _phase_fix(v: np.ndarray) -> np.ndarray:
    """Rotate v by a unit scalar so its largest-magnitude entry is real
    non-negative (global-phase determinism rule)."""
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    mag = abs(pivot)
    if mag == 0.0:
        return v
    return v * (pivot.conjugate() / mag)


def hermitian_principal_eigpair(a, tol: float = 1e-8):
    """Largest eigenvalue and a unit-norm eigenvector of a Hermitian matrix.

    Parameters
    ----------
    a : array_like, square, Hermitian to within ``tol`` in relative
        Frobenius norm.
    tol : Hermitian-defect tolerance.

    Returns
    -------
    (value, vector) with ``vector`` phase-normalized.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    norm = np.linalg.norm(a)
    defect = np.linalg.norm(a - a.conj().T)
    if defect > tol * norm:
        raise ContractError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds "
            f"{tol:.1e} * ||A||_F = {tol * norm:.3e}")
    w, vecs = np.linalg.eigh((a + a.conj().T) / 2)
    return float(w[-1]), _phase_fix(vecs[:, -1])


def svd(a):
    """Economy SVD with deterministic phases: A = U @ diag(s) @ V^H.

    Singular values are sorted descending; U and V have orthonormal
    columns. Each column pair (u_k, v_k) is rotated by a common unit
    scalar chosen from u_k, which keeps the reconstruction exact while
    pinning the global phase.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError(f"expected a non-empty matrix, got shape {a.shape}")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    v = vh.conj().T
    for k in range(s.size):
        idx = int(np.argmax(np.abs(u[:, k])))
        pivot = u[idx, k]
        mag = abs(pivot)
        if mag > 0.0:
            c = pivot.conjugate() / mag
            u[:, k] *= c
            v[:, k] *= c
    return u, s, v


def pseudo_inverse(a, rank_tol: float = DEFAULT_RANK_TOL):
    """Moore-Penrose pseudo-inverse via SVD.

    Singular values <= rank_tol * s_max are treated as zero. A zero
    matrix maps to the zero matrix of transposed shape.
    """
    u, s, v = svd(a)
    inv = np.zeros_like(s)
    if s[0] > 0.0:
        keep = s > rank_tol * s[0]
        inv[keep] = 1.0 / s[keep]
    return (v * inv) @ u.conj().T


def unit_modulus_project(t, fallback):
    """Entrywise phase extraction: exp(j*arg(t_i)), keeping fallback_i
    where t_i is exactly zero (the previous iterate's phase)."""
    t = np.asarray(t, dtype=complex)
    fallback = np.asarray(fallback, dtype=complex)
    if t.shape != fallback.shape:
        raise DimensionError(
            f"length mismatch: t has shape {t.shape}, fallback {fallback.shape}")
    return np.where(t != 0, np.exp(1j * np.angle(t)), fallback)


def null_space_projector(h, rank_tol: float = DEFAULT_RANK_TOL):
    """Orthogonal projector onto the orthogonal complement of the column
    space of ``h``: P = P^H = P^2 and P @ h = 0.

    Raises ZfInfeasibleError when the column space fills the whole space.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {h.shape}")
    u, s, _ = svd(h)
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if s[0] > 0.0 else 0
    n = h.shape[0]
    if rank >= n:
        raise ZfInfeasibleError(
            f"column space has full dimension {n}; no null space left")
    q = u[:, :rank]
    return np.eye(n, dtype=complex) - q @ q.conj().T
