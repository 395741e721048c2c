"""Zero-field Hamiltonians: Bell-diagonal form, local Bell-state swaps and
the single-region check."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .entanglement import DEFAULT_NEG_TOL
from .hamiltonians import PauliHamiltonian, canonical_form
from .regions import ThermalFamily
from .smatrix import X, Z, kron

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")

_s = 1 / np.sqrt(2)
#: Columns are |phi+>, |phi->, |psi+>, |psi-> in the computational basis.
BELL_BASIS = np.array(
    [
        [_s, _s, 0, 0],
        [0, 0, _s, _s],
        [0, 0, _s, -_s],
        [_s, -_s, 0, 0],
    ],
    dtype=complex,
)

HADAMARD = (X + Z) / np.sqrt(2)


@dataclass(frozen=True)
class BellForm:
    alpha: np.ndarray
    bell_energies: np.ndarray

    @property
    def ground_label(self) -> str:
        return BELL_LABELS[int(np.argmin(self.bell_energies))]


@dataclass(frozen=True)
class LocalSwap:
    u1: np.ndarray
    u2: np.ndarray
    swapped_pair: tuple

    @property
    def unitary(self) -> np.ndarray:
        return kron(self.u1, self.u2)


def _require_zero_field(h: PauliHamiltonian):
    if h.has_local_terms(1e-12):
        raise ValueError("Hamiltonian has local (field) terms")


def bell_overlaps(u) -> np.ndarray:
    """``|<bell_i| U |bell_j>|^2``, a doubly stochastic matrix for unitary U."""
    return np.abs(BELL_BASIS.conj().T @ np.asarray(u) @ BELL_BASIS) ** 2


def bell_form(h: PauliHamiltonian) -> BellForm:
    """Canonical couplings and the energy of each Bell state.

    The energies are read off the canonical operator in the Bell basis, and
    its off-diagonal part is checked to vanish.
    """
    _require_zero_field(h)
    cf = canonical_form(h)
    op = cf.hamiltonian().matrix()
    in_bell = BELL_BASIS.conj().T @ op @ BELL_BASIS
    off = in_bell - np.diag(np.diag(in_bell))
    if np.abs(off).max() > 1e-10 * max(1.0, np.abs(in_bell).max()):
        raise ArithmeticError("canonical interaction is not Bell diagonal")
    return BellForm(alpha=cf.alpha, bell_energies=np.diag(in_bell).real.copy())


def bell_swaps() -> tuple[LocalSwap, LocalSwap, LocalSwap]:
    """Three product unitaries, each exchanging one pair of Bell states."""
    # exp(+-i pi Z / 4) is diagonal.
    rz = np.diag(np.exp(1j * np.pi / 4 * np.diag(Z).real))
    rz_inv = rz.conj()
    return (
        LocalSwap(rz, rz, ("phi+", "phi-")),
        LocalSwap(rz_inv, rz, ("psi+", "psi-")),
        LocalSwap(HADAMARD, HADAMARD, ("phi-", "psi+")),
    )


def swap_permutation(swap: LocalSwap, tol: float = 1e-12) -> tuple:
    """Bell-label permutation effected by ``swap`` (phases ignored).

    Entry j is the index of the Bell state that |bell_j> is mapped to.
    """
    ov = bell_overlaps(swap.unitary)
    perm = tuple(int(np.argmax(ov[:, j])) for j in range(4))
    target = np.zeros((4, 4))
    target[list(perm), range(4)] = 1.0
    if np.abs(ov - target).max() > tol:
        raise ArithmeticError("unitary does not permute the Bell basis")
    return perm


def permutation_words(swaps=None) -> dict:
    """Shortest sequence of swaps realizing each reachable Bell permutation.

    Maps a permutation ``p`` (state j goes to state ``p[j]``) to the tuple of
    :class:`LocalSwap` to apply in order.
    """
    swaps = tuple(swaps or bell_swaps())
    gens = [swap_permutation(s) for s in swaps]
    identity = (0, 1, 2, 3)
    words = {identity: ()}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for s, g in zip(swaps, gens):
            q = tuple(g[p[j]] for j in range(4))
            if q not in words:
                words[q] = words[p] + (s,)
                queue.append(q)
    return words


def generated_permutations(swaps=None) -> set:
    """All Bell-label permutations reachable by composing the swaps."""
    return set(permutation_words(swaps))


@dataclass(frozen=True)
class MonotoneCheck:
    ok: bool
    entangled: tuple
    first_failure: Optional[int] = None


def check_monotone_separability(h: PauliHamiltonian, t_grid, neg_tol: float = DEFAULT_NEG_TOL) -> MonotoneCheck:
    """Whether entanglement along an ascending grid has the form 1..10..0.

    ``first_failure`` is the index of the first entangled point that follows
    a separable one.
    """
    _require_zero_field(h)
    ts = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(ts) < 0):
        raise ValueError("temperature grid must be ascending")
    fam = ThermalFamily(h)
    flags = fam.min_pt_eigs(ts) < -neg_tol
    failure = None
    seen_separable = False
    for i, f in enumerate(flags):
        if not f:
            seen_separable = True
        elif seen_separable:
            failure = i
            break
    return MonotoneCheck(failure is None, tuple(bool(f) for f in flags), failure)


def permuted_state(rho, perm_swaps) -> np.ndarray:
    """Apply a sequence of Bell swaps to ``rho`` by conjugation."""
    out = np.asarray(rho, dtype=complex)
    for s in perm_swaps:
        u = s.unitary
        out = u @ out @ u.conj().T
    return out

