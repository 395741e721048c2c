"""Temperature scans and detection of entangled temperature regions.

A thermal state is classified on a temperature grid and every change of
classification between neighbouring grid points is refined by bisection.

For two qubits the partial transpose has at most one negative eigenvalue,
so its determinant is negative exactly when the state is entangled. Grid
classification therefore uses the determinant, which is a quartic form in
the Gibbs weights and costs one small matrix product per temperature once
the form's 256 coefficients are known. Points whose determinant is too
close to zero to decide the sign against ``neg_tol`` fall back to a direct
eigenvalue computation, so the outcome is the same as classifying every
point by its smallest partial-transpose eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Optional

import numpy as np

from .entanglement import DEFAULT_NEG_TOL, concurrence_from_spectrum, partial_transpose
from .hamiltonians import PauliHamiltonian
from .smatrix import PAULI_PRODUCTS
from .thermal import DEGENERACY_TOL, eigensystem, gibbs_weights

DEFAULT_T_POINTS = 2000
DEFAULT_REFINE_TOL = 1e-9
T_MAX_FACTOR = 20.0
LOG_DECADES = 6.0
DEFAULT_H_GRID = tuple(np.linspace(0.0, 5.0, 201))

# Absolute roundoff allowance on the normalized PT determinant.
_DET_ROUNDOFF = 1e-13

# Unordered level pairs (i <= j) and the 16x10 map from ordered to unordered.
_PAIRS = [(i, j) for i in range(4) for j in range(i, 4)]
_PAIR_I = np.array([p[0] for p in _PAIRS])
_PAIR_J = np.array([p[1] for p in _PAIRS])
_SYM = np.zeros((16, len(_PAIRS)))
for _k, (_i, _j) in enumerate(_PAIRS):
    _SYM[4 * _i + _j, _k] = 1.0
    _SYM[4 * _j + _i, _k] = 1.0


class StillEntangledError(RuntimeError):
    """The state is still entangled at the highest scanned temperature."""


@dataclass(frozen=True)
class ScanOptions:
    """Grid and tolerance settings shared by the scanning routines.

    ``conc_tol`` switches the entanglement test from the partial-transpose
    eigenvalue (entangled iff below ``-neg_tol``) to the concurrence
    (entangled iff above ``conc_tol``).
    """

    t_points: int = DEFAULT_T_POINTS
    refine_tol: float = DEFAULT_REFINE_TOL
    neg_tol: float = DEFAULT_NEG_TOL
    conc_tol: Optional[float] = None
    refine: bool = True

    def __post_init__(self):
        if self.t_points < 4:
            raise ValueError("t_points must be at least 4")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be positive")
        if not self.neg_tol > 0:
            raise ValueError("neg_tol must be positive")
        if self.conc_tol is not None and not self.conc_tol > 0:
            raise ValueError("conc_tol must be positive")


@dataclass(frozen=True)
class CurveSample:
    t: float
    concurrence: float
    min_pt_eig: float


@dataclass(frozen=True)
class RegionReport:
    intervals: tuple
    includes_zero: bool
    t_max_scanned: float
    refine_tol: float
    neg_tol: float
    conc_tol: Optional[float] = None
    t_points: int = DEFAULT_T_POINTS
    refined: bool = True

    @property
    def count(self) -> int:
        return len(self.intervals)

    def to_dict(self) -> dict:
        return {
            "intervals": [list(iv) for iv in self.intervals],
            "count": self.count,
            "includes_zero": self.includes_zero,
            "t_max_scanned": self.t_max_scanned,
            "t_points": self.t_points,
            "refine_tol": self.refine_tol,
            "neg_tol": self.neg_tol,
            "conc_tol": self.conc_tol,
            "refined": self.refined,
        }


@lru_cache(maxsize=16)
def _unit_grid(n: int) -> np.ndarray:
    n_log = n // 2
    lo = np.logspace(-LOG_DECADES, math.log10(0.5), n_log, endpoint=False)
    hi = np.linspace(0.5, 1.0, n - n_log)
    grid = np.concatenate([[0.0], lo, hi])
    grid.setflags(write=False)
    return grid


def default_t_grid(t_max: float, n: int = DEFAULT_T_POINTS) -> np.ndarray:
    """Exact zero, then ``n // 2`` log-spaced points from ``t_max * 1e-6``
    up to ``t_max / 2`` and the rest linear up to ``t_max``."""
    grid = t_max * _unit_grid(n)
    grid[-1] = t_max
    return grid


class ThermalFamily:
    """Thermal states of one Hamiltonian at arbitrary temperatures.

    Holds the eigendecomposition and the partial transposes of the
    eigenprojectors, so that a state at temperature t is just a weighted
    sum ``sum_k w_k(t) Q_k``.
    """

    def __init__(self, h):
        es = eigensystem(h)
        self.energies = es.values
        self.vectors = es.vectors
        v = self.vectors
        proj = np.einsum("ik,jk->kij", v, v.conj())
        self.pt_projectors = partial_transpose(proj)
        self._quartic = None

    @property
    def width(self) -> float:
        return float(self.energies[-1] - self.energies[0])

    def default_t_max(self) -> float:
        return T_MAX_FACTOR * self.width if self.width > 0 else 1.0

    def weights(self, ts) -> np.ndarray:
        return gibbs_weights(self.energies, np.asarray(ts, dtype=float))

    def states(self, ts) -> np.ndarray:
        w = self.weights(np.atleast_1d(ts))
        return np.einsum("ik,tk,jk->tij", self.vectors, w, self.vectors.conj())

    def pt_states(self, ts) -> np.ndarray:
        w = self.weights(np.atleast_1d(ts))
        return np.einsum("tk,kij->tij", w, self.pt_projectors)

    def min_pt_eigs(self, ts) -> np.ndarray:
        return np.linalg.eigvalsh(self.pt_states(ts))[:, 0]

    def concurrences(self, ts) -> np.ndarray:
        return concurrence_from_spectrum(self.weights(np.atleast_1d(ts)), self.vectors)

    @property
    def quartic(self) -> np.ndarray:
        """Symmetric 10x10 matrix M with det(rho^{T_A}) = p M p, where p holds
        the pair products w_i w_j for i <= j."""
        if self._quartic is None:
            q = self.pt_projectors
            mats = np.empty((4, 4, 4, 4, 4, 4), dtype=complex)
            # Column k of the matrix comes from projector i_k (multilinearity).
            mats[..., 0] = q[:, None, None, None, :, 0]
            mats[..., 1] = q[None, :, None, None, :, 1]
            mats[..., 2] = q[None, None, :, None, :, 2]
            mats[..., 3] = q[None, None, None, :, :, 3]
            # The determinant is real, so only the real part contributes.
            full = np.linalg.det(mats).reshape(16, 16).real
            self._quartic = np.ascontiguousarray(_SYM.T @ full @ _SYM)
        return self._quartic

    def pt_determinants(self, ts) -> np.ndarray:
        w = self.weights(np.atleast_1d(ts))
        p = w[:, _PAIR_I] * w[:, _PAIR_J]
        return ((p @ self.quartic) * p).sum(axis=1)

    def classify(self, ts, opts: ScanOptions) -> np.ndarray:
        """Boolean entangled flag for each temperature."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if opts.conc_tol is not None:
            return self.concurrences(ts) > opts.conc_tol
        det = self.pt_determinants(ts)
        unsure = np.abs(det) <= opts.neg_tol + _DET_ROUNDOFF
        flags = det < 0
        if unsure.any():
            flags[unsure] = self.min_pt_eigs(ts[unsure]) < -opts.neg_tol
        return flags

    def indicator(self, t: float, opts: ScanOptions) -> float:
        """Negative exactly where the state counts as entangled."""
        if opts.conc_tol is not None:
            return float(opts.conc_tol - self.concurrences([t])[0])
        return float(self.min_pt_eigs([t])[0] + opts.neg_tol)


def _bisect(fam: ThermalFamily, a: float, b: float, fa: float, opts: ScanOptions) -> float:
    """Locate the sign change of the indicator between ``a`` and ``b``."""
    fb = fam.indicator(b, opts)
    pt_mode = opts.conc_tol is None
    while True:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        narrow = (b - a) <= opts.refine_tol * b
        if narrow:
            if not pt_mode:
                break
            # Also pin the PT eigenvalue itself close to the threshold.
            best = min(abs(fa), abs(fb))
            if best <= 9 * opts.neg_tol:
                break
        fm = fam.indicator(mid, opts)
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return a if abs(fa) <= abs(fb) else b


def _runs(flags: np.ndarray):
    """Index pairs (first, last) of each maximal run of True values."""
    padded = np.concatenate([[False], flags, [False]]).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return list(zip(starts.tolist(), ends.tolist()))


def detect_regions(
    h,
    t_max: Optional[float] = None,
    opts: ScanOptions = ScanOptions(),
    family: Optional[ThermalFamily] = None,
) -> RegionReport:
    """Find the maximal temperature intervals on which the state is entangled.

    Parameters
    ----------
    h : PauliHamiltonian or 4x4 array
    t_max : float, optional
        Highest temperature scanned; defaults to 20 times the spectral width.
        The state must be separable there.
    opts : ScanOptions
        Grid size and tolerances. With ``opts.refine`` false the reported
        boundaries are the bracketing grid points.

    Raises
    ------
    StillEntangledError
        If the state is entangled at ``t_max``.
    """
    fam = family if family is not None else ThermalFamily(h)
    if t_max is None:
        t_max = fam.default_t_max()
    if not (t_max > 0 and math.isfinite(t_max)):
        raise ValueError("t_max must be positive and finite")
    grid = default_t_grid(t_max, opts.t_points)
    flags = fam.classify(grid, opts)
    if flags[-1]:
        raise StillEntangledError(f"state is still entangled at t_max = {t_max:g}; raise t_max")

    intervals = []
    for start, end in _runs(flags):
        if start == 0:
            lo = 0.0
        elif opts.refine:
            a = grid[start - 1]
            lo = _bisect(fam, a, grid[start], fam.indicator(a, opts), opts)
        else:
            lo = float(grid[start - 1])
        if opts.refine:
            a = grid[end]
            hi = _bisect(fam, a, grid[end + 1], fam.indicator(a, opts), opts)
        else:
            hi = float(grid[end + 1])
        intervals.append((float(lo), float(hi)))

    return RegionReport(
        intervals=tuple(intervals),
        includes_zero=bool(intervals) and intervals[0][0] == 0.0,
        t_max_scanned=float(t_max),
        refine_tol=opts.refine_tol,
        neg_tol=opts.neg_tol,
        conc_tol=opts.conc_tol,
        t_points=opts.t_points,
        refined=opts.refine,
    )


def concurrence_curve(h, t_grid: Iterable[float]) -> list[CurveSample]:
    """Concurrence and smallest partial-transpose eigenvalue along ``t_grid``."""
    ts = np.asarray(list(t_grid), dtype=float)
    if ts.size == 0:
        raise ValueError("temperature grid is empty")
    if np.any(ts < 0) or np.any(np.diff(ts) < 0):
        raise ValueError("temperature grid must be non-negative and ascending")
    fam = ThermalFamily(h)
    conc = fam.concurrences(ts)
    mins = fam.min_pt_eigs(ts)
    return [CurveSample(float(t), float(c), float(m)) for t, c, m in zip(ts, conc, mins)]


def region_count(h, opts: ScanOptions = ScanOptions(), t_max: Optional[float] = None) -> int:
    """Number of entangled regions on the grid, without boundary refinement."""
    return detect_regions(h, t_max=t_max, opts=replace(opts, refine=False)).count


def _batch_region_counts(hams, opts: ScanOptions) -> np.ndarray:
    """Unrefined region counts for many Hamiltonians at once.

    Same classification as :meth:`ThermalFamily.classify` on each
    Hamiltonian's default grid, vectorized across the batch.
    """
    c = np.stack([np.asarray(h.c) for h in hams])
    c[:, 0, 0] = 0.0
    mats = np.einsum("hij,ijkl->hkl", c, PAULI_PRODUCTS)
    energies, vecs = np.linalg.eigh(mats)
    nh = len(hams)
    proj = np.einsum("hik,hjk->hkij", vecs, vecs.conj())
    q = partial_transpose(proj)

    blocks = np.empty((nh, 4, 4, 4, 4, 4, 4), dtype=complex)
    blocks[..., 0] = q[:, :, None, None, None, :, 0]
    blocks[..., 1] = q[:, None, :, None, None, :, 1]
    blocks[..., 2] = q[:, None, None, :, None, :, 2]
    blocks[..., 3] = q[:, None, None, None, :, :, 3]
    full = np.linalg.det(blocks).reshape(nh, 16, 16).real
    quartic = _SYM.T @ full @ _SYM

    gaps = energies - energies[:, :1]
    width = gaps[:, -1]
    t_max = np.where(width > 0, T_MAX_FACTOR * width, 1.0)
    unit = _unit_grid(opts.t_points)
    ts = t_max[:, None] * unit[None, :]
    ts[:, -1] = t_max
    beta = np.zeros_like(ts)
    beta[:, 1:] = 1.0 / ts[:, 1:]
    w = np.exp(-beta[:, :, None] * gaps[:, None, :])
    ground = gaps <= DEGENERACY_TOL * np.where(width > 0, width, 1.0)[:, None]
    w[:, 0, :] = ground
    w /= w.sum(axis=2, keepdims=True)

    pairs = w[..., _PAIR_I] * w[..., _PAIR_J]
    det = (np.matmul(pairs, quartic) * pairs).sum(axis=2)
    flags = det < 0
    unsure = np.abs(det) <= opts.neg_tol + _DET_ROUNDOFF
    if unsure.any():
        hi, ti = np.nonzero(unsure)
        pt = np.einsum("nk,nkij->nij", w[hi, ti], q[hi])
        flags[hi, ti] = np.linalg.eigvalsh(pt)[:, 0] < -opts.neg_tol
    if flags[:, -1].any():
        k = int(np.flatnonzero(flags[:, -1])[0])
        raise StillEntangledError(f"state {k} of the batch is still entangled at t_max = {t_max[k]:g}")
    padded = np.concatenate([np.zeros((nh, 1), bool), flags], axis=1).astype(np.int8)
    return (np.diff(padded, axis=1) == 1).sum(axis=1)


def region_counts_over_h(
    base: Callable[[float], PauliHamiltonian],
    h_grid: Iterable[float] = DEFAULT_H_GRID,
    opts: ScanOptions = ScanOptions(),
) -> list[tuple[float, int]]:
    """Unrefined region count at every ``h`` of the grid."""
    hs = [float(h) for h in h_grid]
    if not hs:
        raise ValueError("h grid is empty")
    hams = [base(h) for h in hs]
    if opts.conc_tol is not None:
        counts = [region_count(hm, opts) for hm in hams]
    else:
        counts = _batch_region_counts(hams, opts).tolist()
    return list(zip(hs, counts))


def two_regions_over_h(
    base: Callable[[float], PauliHamiltonian],
    h_grid: Iterable[float] = DEFAULT_H_GRID,
    opts: ScanOptions = ScanOptions(),
) -> Optional[float]:
    """Smallest ``h`` in ``h_grid`` for which ``base(h)`` has two or more
    entangled regions, or None."""
    for h, count in sorted(region_counts_over_h(base, h_grid, opts)):
        if count >= 2:
            return h
    return None
