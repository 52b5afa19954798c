"""Singular-value extremes and shared dense linear-algebra helpers.

Full SVD is exact but cubic per call, so it is reserved for moderate sizes;
above ``SVD_CUTOFF`` the extreme singular values come from (inverse) power
iteration with deterministic seeding, which keeps large grid sweeps cheap and
byte-reproducible.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

SVD_CUTOFF = 400

_INVIT_ITERS = 20
_INVIT_TOL = 1e-10
_INVIT_RESTARTS = 3
_POWER_ITERS = 200
_POWER_TOL = 1e-12


def smallest_singular_value(mat: np.ndarray) -> float:
    """sigma_min of a square complex matrix; 0.0 when the matrix is singular."""
    if mat.shape[0] <= SVD_CUTOFF:
        try:
            return float(np.linalg.svd(mat, compute_uv=False)[-1])
        except np.linalg.LinAlgError:
            return 0.0
    return _smallest_sv_inverse_iteration(mat)


def largest_singular_value(mat: np.ndarray) -> float:
    """sigma_max of a dense complex matrix (the Euclidean operator norm)."""
    if min(mat.shape) <= SVD_CUTOFF:
        return float(np.linalg.svd(mat, compute_uv=False)[0])
    return _largest_sv_power_iteration(mat)


def numerical_abscissa(mat: np.ndarray) -> float:
    """Largest eigenvalue of the Hermitian part (M + M^H)/2.

    Bounds the instantaneous growth rate: d/dt ||exp(tM) x|| <= abscissa * ||.||.
    """
    herm = 0.5 * (mat + mat.conj().T)
    return float(np.linalg.eigvalsh(herm)[-1])


def default_trial_vectors(dim: int, count: int = 3, seed: int = 7) -> list[np.ndarray]:
    """Deterministic probe vectors: a basis vector, a flat vector, seeded noise."""
    if dim < 1:
        raise ValueError("dim must be positive")
    out: list[np.ndarray] = []
    e0 = np.zeros(dim, dtype=complex)
    e0[0] = 1.0
    out.append(e0)
    if count > 1:
        out.append(np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))
    rng = np.random.default_rng(seed)
    while len(out) < count:
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        out.append(v / np.linalg.norm(v))
    return out[:count]


def _smallest_sv_inverse_iteration(mat: np.ndarray) -> float:
    """Power iteration on (M^H M)^{-1} through one LU factorization of M."""
    n = mat.shape[0]
    try:
        lu = sla.lu_factor(mat, check_finite=False)
    except (np.linalg.LinAlgError, sla.LinAlgError, ValueError):
        return 0.0
    if not np.all(np.isfinite(lu[0])) or np.any(np.diagonal(lu[0]) == 0):
        return 0.0

    rng = np.random.default_rng(0)
    best = np.inf
    for _ in range(_INVIT_RESTARTS):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        sigma_prev = np.inf
        stagnated = False
        for _ in range(_INVIT_ITERS):
            y = sla.lu_solve(lu, v, trans=2, check_finite=False)
            z = sla.lu_solve(lu, y, trans=0, check_finite=False)
            if not np.all(np.isfinite(z)):
                return 0.0
            rho = float(np.real(np.vdot(v, z)))
            nz = float(np.linalg.norm(z))
            if rho <= 0.0 or nz == 0.0:
                stagnated = True
                break
            sigma = 1.0 / np.sqrt(rho)
            v = z / nz
            if np.isfinite(sigma_prev) and abs(sigma - sigma_prev) <= _INVIT_TOL * sigma:
                return sigma
            sigma_prev = sigma
        if not stagnated and sigma_prev < best:
            return float(sigma_prev)
        if sigma_prev < best:
            best = sigma_prev
    return float(best) if np.isfinite(best) else 0.0


def _largest_sv_power_iteration(mat: np.ndarray) -> float:
    """Power iteration on M^H M; converges in value even for clustered spectra."""
    rng = np.random.default_rng(1)
    v = rng.standard_normal(mat.shape[1]) + 1j * rng.standard_normal(mat.shape[1])
    v /= np.linalg.norm(v)
    sigma_prev = 0.0
    sigma = 0.0
    for _ in range(_POWER_ITERS):
        w = mat @ v
        sigma = float(np.linalg.norm(w))
        if sigma == 0.0:
            return 0.0
        v = mat.conj().T @ w
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return sigma
        v /= nv
        if abs(sigma - sigma_prev) <= _POWER_TOL * sigma:
            return sigma
        sigma_prev = sigma
    return sigma
