"""Canonical-ensemble (Gibbs) states and majorization of their spectra."""

from __future__ import annotations

import math

import numpy as np

from .hamiltonians import PauliHamiltonian
from .smatrix import EigenSystem, hermitian_eig

INFINITE_T = math.inf
ZERO_T_CUTOFF = 1e-12
DEGENERACY_TOL = 1e-10
MAJORIZATION_TOL = 1e-12


def _check_temperature(t: float) -> float:
    t = float(t)
    if math.isnan(t) or t < 0:
        raise ValueError(f"temperature must be non-negative, got {t}")
    return t


def gibbs_weights(energies, t):
    """Normalized Gibbs populations for ascending ``energies``.

    ``t`` may be a scalar or an array of temperatures; for an array the
    result has shape ``(len(t), len(energies))``. Energies are measured from
    the ground level before exponentiating. At ``t == 0`` the weight is
    spread evenly over the (numerically) degenerate ground space, and at
    ``t == inf`` over all levels.
    """
    e = np.asarray(energies, dtype=float)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.isnan(ts).any() or (ts < 0).any():
        raise ValueError("temperatures must be non-negative")
    gaps = e - e.min()
    zero = ts < ZERO_T_CUTOFF
    beta = np.zeros_like(ts)
    np.divide(1.0, ts, out=beta, where=~zero)
    w = np.exp(-np.multiply.outer(beta, gaps))
    w /= w.sum(axis=1, keepdims=True)
    if zero.any():
        width = gaps.max()
        ground = gaps <= DEGENERACY_TOL * width if width > 0 else np.ones(len(gaps), dtype=bool)
        w[zero] = ground / ground.sum()
    return w[0] if np.ndim(t) == 0 else w


def eigensystem(h) -> EigenSystem:
    if isinstance(h, PauliHamiltonian):
        # The identity component only shifts energies.
        c = np.array(h.c)
        c[0, 0] = 0.0
        h = PauliHamiltonian(c).matrix()
    return hermitian_eig(h)


def thermal_state(h, t: float) -> np.ndarray:
    """Thermal state ``exp(-H/t) / Z`` of a two-qubit Hamiltonian (k_B = 1)."""
    t = _check_temperature(t)
    es = eigensystem(h)
    w = gibbs_weights(es.values, t)
    rho = (es.vectors * w) @ es.vectors.conj().T
    return 0.5 * (rho + rho.conj().T)


def gibbs_spectrum(h, t: float) -> np.ndarray:
    """Eigenvalues of the thermal state sorted in descending order."""
    t = _check_temperature(t)
    return np.sort(gibbs_weights(eigensystem(h).values, t))[::-1]


def majorizes(p, q, tol: float = MAJORIZATION_TOL) -> bool:
    """True if population vector ``p`` majorizes ``q``.

    Both vectors are sorted descending before comparing leading partial sums.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("spectra must have the same length")
    for v in (p, q):
        if np.any(v < -tol) or abs(v.sum() - 1.0) > 1e-10:
            raise ValueError("spectra must be normalized probability vectors")
    ps = np.cumsum(np.sort(p)[::-1])[:-1]
    qs = np.cumsum(np.sort(q)[::-1])[:-1]
    return bool(np.all(ps >= qs - tol))
