"""Concurrence and partial-transpose tests for two-qubit states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .smatrix import Y

DEFAULT_NEG_TOL = 1e-13
_YY = np.kron(Y, Y)


@dataclass(frozen=True)
class PTReport:
    min_eigenvalue: float
    determinant: float


def check_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def partial_transpose(rho) -> np.ndarray:
    """Transpose over qubit 1. Accepts a 4x4 matrix or a stack of them."""
    rho = np.asarray(rho)
    lead = rho.shape[:-2]
    r = rho.reshape(lead + (2, 2, 2, 2))
    n = len(lead)
    axes = tuple(range(n)) + (n + 2, n + 1, n, n + 3)
    return r.transpose(axes).reshape(lead + (4, 4))


def min_pt_eigenvalue(rho):
    """Smallest eigenvalue of the partial transpose (vectorized over stacks)."""
    pt = partial_transpose(rho)
    return np.linalg.eigvalsh(pt)[..., 0]


def pt_report(rho) -> PTReport:
    rho = check_density_matrix(rho)
    pt = partial_transpose(rho)
    eig = np.linalg.eigvalsh(pt)
    return PTReport(min_eigenvalue=float(eig[0]), determinant=float(np.prod(eig)))


def is_entangled(rho, tol: float = DEFAULT_NEG_TOL) -> bool:
    """Peres-Horodecki test: entangled iff the partial transpose has an
    eigenvalue below ``-tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return bool(min_pt_eigenvalue(check_density_matrix(rho)) < -tol)


def spin_flip_overlap(vectors) -> np.ndarray:
    """``V^dagger (Y (x) Y) V^*`` for an eigenvector matrix ``V``."""
    v = np.asarray(vectors)
    return v.conj().T @ _YY @ v.conj()


def concurrence_from_spectrum(weights, vectors):
    """Concurrence of ``sum_k weights[k] |v_k><v_k|``.

    The Wootters numbers are the singular values of
    ``sqrt(rho) (Y (x) Y) sqrt(rho)^*``; in the eigenbasis of rho this is
    ``D M D`` with ``D = diag(sqrt(weights))``, which avoids the square root
    of tiny, noisy eigenvalues. ``weights`` may be a stack of shape (n, 4).
    """
    w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    d = np.sqrt(w)
    m = spin_flip_overlap(vectors)
    a = d[..., :, None] * m * d[..., None, :]
    lam = np.linalg.svd(a, compute_uv=False)
    c = lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3]
    return np.maximum(c, 0.0)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = check_density_matrix(rho)
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    # Eigenvalues within roundoff of zero are treated as zero.
    w = np.where(w < 0, np.where(w > -1e-12, 0.0, w), w)
    return float(concurrence_from_spectrum(w, v))
