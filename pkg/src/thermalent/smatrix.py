"""Small dense linear algebra for two-qubit work.

Everything here operates on 2x2, 4x4 complex and 3x3 real numpy arrays.
The hot paths use LAPACK through numpy; :func:`jacobi_eigh` is a
self-contained cyclic Jacobi solver kept as an independent cross-check and
as a selectable method of :func:`hermitian_eig`.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

HERMITIAN_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Single-qubit basis in the order I, X, Y, Z.
PAULIS = (I2, X, Y, Z)
PAULI_LABELS = "IXYZ"

#: PAULI_PRODUCTS[i, j] = sigma_i (x) sigma_j, qubit 1 on the left.
PAULI_PRODUCTS = np.array(
    [[np.kron(a, b) for b in PAULIS] for a in PAULIS]
)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"kron expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = max(np.abs(m).max(), 1.0) if m.size else 1.0
    if np.abs(m - m.conj().T).max(initial=0.0) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return m


def _phase_fix(vectors: np.ndarray) -> np.ndarray:
    # Make the largest-magnitude component of each column real positive
    # (first such component on ties) so outputs are reproducible.
    idx = np.argmax(np.round(np.abs(vectors), 8), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots)


def _order(values: np.ndarray, vectors: np.ndarray) -> EigenSystem:
    values = np.asarray(values).real.astype(float)
    vectors = _phase_fix(vectors)
    rounded = np.round(values, 12)
    if len(np.unique(rounded)) == len(rounded) and np.all(np.diff(values) >= 0):
        return EigenSystem(values, vectors)
    keys = []
    for k in range(len(values)):
        v = vectors[:, k]
        lex = tuple(np.round(np.concatenate([v.real, v.imag]), 8))
        keys.append((rounded[k], lex))
    order = sorted(range(len(values)), key=lambda k: keys[k])
    return EigenSystem(values[order], vectors[:, order])


def jacobi_eigh(m, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic complex Jacobi eigensolver for a small Hermitian matrix.

    Returns ``(values, vectors)`` unsorted. Each rotation zeroes one
    off-diagonal pair; sweeps stop when the off-diagonal Frobenius norm
    falls below ``tol * ||m||``.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                # Remove the phase so the pair becomes real symmetric.
                phase = apq / abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                theta = 0.5 * np.arctan2(2 * abs(apq), aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                v = v @ rot
    return np.diag(a).real.copy(), v


def hermitian_eig(m, method: str = "lapack") -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix, ascending.

    Degenerate eigenvalues are ordered by the lexicographic order of their
    rounded, phase-fixed eigenvectors so repeated calls agree exactly.
    """
    m = check_hermitian(m)
    m = 0.5 * (m + m.conj().T)
    if method == "lapack":
        values, vectors = np.linalg.eigh(m)
    elif method == "jacobi":
        values, vectors = jacobi_eigh(m)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return _order(values, vectors)


def svd3(r):
    """Real SVD of a 3x3 matrix: returns ``(o1, s, o2)`` with ``o1.T @ r @ o2 == diag(s)``."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise ValueError(f"svd3 expects a 3x3 matrix, got {r.shape}")
    if not np.all(np.isfinite(r)):
        raise ValueError("matrix has non-finite entries")
    u, s, vh = np.linalg.svd(r)
    return u, s, vh.T


def pauli_compose(c) -> np.ndarray:
    """Operator sum_ij c[i, j] sigma_i (x) sigma_j."""
    c = np.asarray(c, dtype=float)
    return np.einsum("ij,ijkl->kl", c, PAULI_PRODUCTS)


def pauli_coefficients(h) -> np.ndarray:
    """Real 4x4 coefficients c[i, j] = Tr[(sigma_i (x) sigma_j) h] / 4."""
    h = check_hermitian(h)
    if h.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got {h.shape}")
    c = np.einsum("ijlk,kl->ij", PAULI_PRODUCTS, h) / 4
    return c.real.copy()


def pauli_decompose(h):
    """Pauli-basis expansion of a two-qubit Hermitian operator.

    Returns a :class:`~thermalent.hamiltonians.PauliHamiltonian`.
    """
    from .hamiltonians import PauliHamiltonian

    return PauliHamiltonian(pauli_coefficients(h))


def pauli_label(i: int, j: int) -> str:
    return PAULI_LABELS[i] + PAULI_LABELS[j]
