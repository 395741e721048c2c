"""Two-qubit Hamiltonians: Pauli representation, model families, canonical
form under local unitaries, and seeded random samplers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .smatrix import I2, X, Y, Z, hermitian_eig, kron, pauli_coefficients, pauli_compose, svd3

FAMILIES = ("rosci", "homogeneous", "wang", "anisotropic", "misaligned", "example11", "explicit")

# Parameters each family needs besides the optional overall scale J.
_REQUIRED = {
    "rosci": ("h",),
    "homogeneous": ("alpha", "beta", "h"),
    "wang": ("h",),
    "anisotropic": ("h", "gamma"),
    "misaligned": ("h", "delta"),
    "example11": (),
    "explicit": ("c",),
}
#: Families with a field strength ``h`` that can be scanned.
FIELD_FAMILIES = tuple(name for name in FAMILIES if "h" in _REQUIRED[name])

_OPTIONAL = {name: ("J",) for name in FAMILIES}
_OPTIONAL["example11"] = ()
_OPTIONAL["explicit"] = ()

_I, _X, _Y, _Z = range(4)


class PauliHamiltonian:
    """Hamiltonian ``sum_ij c[i, j] sigma_i (x) sigma_j`` with basis order I, X, Y, Z.

    ``c[i, 0]`` (i > 0) are the local fields on qubit 1, ``c[0, j]`` those on
    qubit 2, and ``c[1:, 1:]`` is the interaction matrix R. ``c[0, 0]`` is a
    global energy offset that no entanglement quantity depends on.
    """

    __slots__ = ("_c",)

    def __init__(self, c):
        c = np.array(c, dtype=float)
        if c.shape != (4, 4):
            raise ValueError(f"Pauli coefficient tensor must be 4x4, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("Pauli coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @property
    def c(self) -> np.ndarray:
        return self._c

    @classmethod
    def from_matrix(cls, h) -> "PauliHamiltonian":
        return cls(pauli_coefficients(h))

    @classmethod
    def zero(cls) -> "PauliHamiltonian":
        return cls(np.zeros((4, 4)))

    def matrix(self) -> np.ndarray:
        return pauli_compose(self._c)

    @property
    def interaction(self) -> np.ndarray:
        return self._c[1:, 1:].copy()

    @property
    def field_a(self) -> np.ndarray:
        return self._c[1:, 0].copy()

    @property
    def field_b(self) -> np.ndarray:
        return self._c[0, 1:].copy()

    def has_local_terms(self, tol: float = 1e-12) -> bool:
        return bool(np.abs(self._c[1:, 0]).max() > tol or np.abs(self._c[0, 1:]).max() > tol)

    def energies(self) -> np.ndarray:
        return hermitian_eig(self.matrix()).values

    def __add__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        return PauliHamiltonian(self._c + other._c)

    def __sub__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        return PauliHamiltonian(self._c - other._c)

    def __mul__(self, k: float) -> "PauliHamiltonian":
        return PauliHamiltonian(self._c * float(k))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliHamiltonian) and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self) -> str:
        terms = []
        for i in range(4):
            for j in range(4):
                if self._c[i, j] != 0:
                    terms.append(f"{self._c[i, j]:+.6g}*{'IXYZ'[i]}{'IXYZ'[j]}")
        return "PauliHamiltonian(" + (" ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: Mapping[str, object] = field(default_factory=dict)

    def with_h(self, h: float) -> "FamilySpec":
        return FamilySpec(self.family, {**self.params, "h": float(h)})


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"parameter {name!r} must have three entries")
    return arr


def _check_params(spec: FamilySpec) -> dict:
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
    params = dict(spec.params)
    allowed = set(_REQUIRED[spec.family]) | set(_OPTIONAL[spec.family])
    missing = [k for k in _REQUIRED[spec.family] if k not in params]
    if missing:
        raise ValueError(f"family {spec.family!r} is missing parameter(s): {', '.join(missing)}")
    extra = sorted(set(params) - allowed)
    if extra:
        raise ValueError(f"family {spec.family!r} does not take parameter(s): {', '.join(extra)}")
    for key, value in params.items():
        if not np.all(np.isfinite(np.asarray(value, dtype=float))):
            raise ValueError(f"parameter {key!r} must be finite")
    return params


def build(spec: FamilySpec) -> PauliHamiltonian:
    """Coefficient tensor for one of the named model families.

    ``rosci``        -J [XX - ZZ + h (Z1 + Z2)]
    ``homogeneous``  J {a_x XX + a_y YY + a_z ZZ + h [b . (sigma_1 + sigma_2)]}
    ``wang``         J [XX + YY + h (Z1 + Z2)]
    ``anisotropic``  J [(1 + gamma) XX + (1 - gamma) YY + h (Z1 + Z2)]
    ``misaligned``   J {XX + YY + h [Z1 + Z2 + delta (X1 + X2)]}
    ``example11``    fixed Hamiltonian with ground state |00>
    ``explicit``     coefficients given directly as ``c``
    """
    p = _check_params(spec)
    c = np.zeros((4, 4))
    J = float(p.get("J", 1.0))
    fam = spec.family
    if fam == "explicit":
        return PauliHamiltonian(p["c"])
    if fam == "example11":
        c[_X, _X] = c[_Y, _Y] = 0.006
        c[_X, _Y], c[_Y, _X] = 0.03, -0.03
        c[_Z, _X], c[_I, _X] = 0.02, -0.02
        c[_Z, _Y], c[_I, _Y] = 1 / 10, -1 / 10
        c[_X, _Z], c[_X, _I] = 1 / 14, -1 / 14
        c[_Z, _Z] = 1 / 7
        c[_Z, _I] = -1 / 4
        c[_I, _Z] = -1 / 5
        return PauliHamiltonian(c)

    h = float(p["h"])
    if fam == "rosci":
        c[_X, _X] = -J
        c[_Z, _Z] = J
        c[_Z, _I] = c[_I, _Z] = -J * h
    elif fam == "homogeneous":
        alpha = _vec3(p["alpha"], "alpha")
        beta = _vec3(p["beta"], "beta")
        for k in range(3):
            c[k + 1, k + 1] = J * alpha[k]
            c[k + 1, _I] = c[_I, k + 1] = J * h * beta[k]
    elif fam == "wang":
        c[_X, _X] = c[_Y, _Y] = J
        c[_Z, _I] = c[_I, _Z] = J * h
    elif fam == "anisotropic":
        g = float(p["gamma"])
        c[_X, _X] = J * (1 + g)
        c[_Y, _Y] = J * (1 - g)
        c[_Z, _I] = c[_I, _Z] = J * h
    elif fam == "misaligned":
        d = float(p["delta"])
        c[_X, _X] = c[_Y, _Y] = J
        c[_Z, _I] = c[_I, _Z] = J * h
        c[_X, _I] = c[_I, _X] = J * h * d
    return PauliHamiltonian(c)


def family_in_h(spec: FamilySpec) -> Callable[[float], PauliHamiltonian]:
    """Return ``h -> build(spec with that h)`` for a field-scanned family."""
    return lambda h: build(spec.with_h(h))


# ---------------------------------------------------------------------------
# Local-unitary canonical form


@dataclass(frozen=True)
class CanonicalForm:
    alpha: np.ndarray
    field_a: np.ndarray
    field_b: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def hamiltonian(self, offset: float = 0.0) -> PauliHamiltonian:
        c = np.zeros((4, 4))
        c[0, 0] = offset
        c[1:, 1:] = np.diag(self.alpha)
        c[1:, 0] = self.field_a
        c[0, 1:] = self.field_b
        return PauliHamiltonian(c)

    @property
    def local_unitary(self) -> np.ndarray:
        return kron(self.v1, self.v2)


def lift_rotation(o) -> np.ndarray:
    """SU(2) element V with ``V sigma_j V^dagger = sum_k o[j, k] sigma_k``.

    ``o`` must be a proper rotation. Reflections cannot be realized by a
    single-qubit unitary and are rejected.
    """
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        raise ValueError("rotation must be 3x3")
    if np.abs(o @ o.T - np.eye(3)).max() > 1e-9:
        raise ValueError("matrix is not orthogonal")
    if abs(np.linalg.det(o) - 1.0) > 1e-9:
        raise ValueError("rotation has determinant -1; absorb the reflection first")
    # Rotation acting on the Bloch vector: V (v.sigma) V^dagger = (R v).sigma.
    r = o.T
    tr = np.trace(r)
    if tr > 0:
        s = 2.0 * np.sqrt(tr + 1.0)
        w = 0.25 * s
        x = (r[2, 1] - r[1, 2]) / s
        y = (r[0, 2] - r[2, 0]) / s
        z = (r[1, 0] - r[0, 1]) / s
    elif r[0, 0] > r[1, 1] and r[0, 0] > r[2, 2]:
        s = 2.0 * np.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
        w = (r[2, 1] - r[1, 2]) / s
        x = 0.25 * s
        y = (r[0, 1] + r[1, 0]) / s
        z = (r[0, 2] + r[2, 0]) / s
    elif r[1, 1] > r[2, 2]:
        s = 2.0 * np.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2])
        w = (r[0, 2] - r[2, 0]) / s
        x = (r[0, 1] + r[1, 0]) / s
        y = 0.25 * s
        z = (r[1, 2] + r[2, 1]) / s
    else:
        s = 2.0 * np.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1])
        w = (r[1, 0] - r[0, 1]) / s
        x = (r[0, 2] + r[2, 0]) / s
        y = (r[1, 2] + r[2, 1]) / s
        z = 0.25 * s
    norm = np.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / norm, x / norm, y / norm, z / norm
    return w * I2 - 1j * (x * X + y * Y + z * Z)


def canonical_form(h: PauliHamiltonian) -> CanonicalForm:
    """Rotate both qubits so the interaction block becomes diagonal.

    With ``R = o1 diag(s) o2^T`` the local unitaries lifted from ``o1`` and
    ``o2`` map R to ``o1^T R o2``. Both factors are made proper rotations by
    flipping their last column when needed, which leaves the last entry of
    ``alpha`` carrying the sign of det(R).
    """
    r = h.interaction
    o1, s, o2 = svd3(r)
    alpha = s.copy()
    if np.linalg.det(o1) < 0:
        o1[:, 2] *= -1
        alpha[2] *= -1
    if np.linalg.det(o2) < 0:
        o2[:, 2] *= -1
        alpha[2] *= -1
    return CanonicalForm(
        alpha=alpha,
        field_a=o1.T @ h.field_a,
        field_b=o2.T @ h.field_b,
        v1=lift_rotation(o1),
        v2=lift_rotation(o2),
    )


def split_local_nonlocal(h: PauliHamiltonian) -> tuple[PauliHamiltonian, PauliHamiltonian]:
    """Return ``(h_nonlocal, h_local)``; the identity component is dropped."""
    cn = np.zeros((4, 4))
    cl = np.zeros((4, 4))
    cn[1:, 1:] = h.c[1:, 1:]
    cl[1:, 0] = h.c[1:, 0]
    cl[0, 1:] = h.c[0, 1:]
    return PauliHamiltonian(cn), PauliHamiltonian(cl)


# ---------------------------------------------------------------------------
# Seeded samplers


def derive_seed(master_seed: int, index: int) -> int:
    """Per-sample 64-bit seed from ``(master_seed, index)``.

    Mixing is numpy's SeedSequence hash of the pair, so a sample's draw does
    not depend on which worker produces it or in what order.
    """
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & (2**64 - 1)))


def sample_homogeneous(seed: int) -> FamilySpec:
    """Random homogeneous-field model: alpha in [0, 1)^3, beta in (-1, 1)^3, J = 1.

    The field strength ``h`` is left unset; scan it with :func:`family_in_h`.
    """
    rng = make_rng(seed)
    alpha = rng.random(3)
    beta = 2.0 * rng.random(3) - 1.0
    # -1 itself is excluded from the open interval.
    while np.any(beta == -1.0):
        beta = np.where(beta == -1.0, 2.0 * rng.random(3) - 1.0, beta)
    return FamilySpec("homogeneous", {"J": 1.0, "alpha": alpha.tolist(), "beta": beta.tolist()})


def sample_gue(seed: int) -> np.ndarray:
    """4x4 GUE matrix ``(G + G^dagger) / 2``.

    G has independent N(0, 1) real and imaginary parts, so diagonal entries
    have variance 1 and off-diagonal real/imaginary parts variance 1/2.
    """
    rng = make_rng(seed)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return (g + g.conj().T) / 2


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_separable_ground(seed: int) -> PauliHamiltonian:
    """Random Hamiltonian whose ground state is exactly |00> with energy 0.

    The three excited states form a Haar-random basis of the complement of
    |00> and their energies are independent uniform draws on (0, 1].
    """
    rng = make_rng(seed)
    u = haar_unitary(rng, 3)
    energies = 1.0 - rng.random(3)
    vecs = np.zeros((4, 3), dtype=complex)
    vecs[1:, :] = u
    h = (vecs * energies) @ vecs.conj().T
    return PauliHamiltonian.from_matrix(h)
