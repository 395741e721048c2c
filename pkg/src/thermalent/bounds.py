"""Descartes-rule bound on the number of entangled temperature regions.

With energies measured from the ground level and approximated as integer
multiples ``n_i r`` of a common unit, ``Z^4 det(rho(T)^{T_A})`` is an
ordinary polynomial in ``x = exp(-r/T)``: each entry of ``Z rho^{T_A}`` is
``sum_i x^{n_i} (Q_i)_{mn}`` with ``Q_i`` the partially transposed
eigenprojectors, and the determinant is expanded exactly over that ring.
Every term has the form ``x^{n_a + n_b + n_c + n_d}``, so at most 35
exponents occur. Sign changes in the derivative's coefficients bound its
positive roots, and hence the turning points of the polynomial.

The expansion is carried out in exact rational arithmetic on the floating
point projector entries. Coefficients that matter can be tiny: a weakly
entangled ground state contributes a constant term of order
``(amplitude)^4``, far below any relative pruning threshold, and dropping
it loses sign changes. Only exact zeros are therefore removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict

import numpy as np

from .entanglement import partial_transpose
from .thermal import eigensystem

PRUNE_TOL = 1e-12
IMAG_TOL = 1e-10
MAX_TERMS = 35


@dataclass(frozen=True)
class RationalSpectrum:
    levels: tuple
    scale: float
    approx_error: float


@dataclass(frozen=True)
class ExpPolynomial:
    """Polynomial ``sum_n terms[n] x^n`` with ``x = exp(-scale / T)``."""

    terms: Dict[int, float]
    scale: float = 1.0

    @classmethod
    def from_terms(cls, terms, scale: float = 1.0, prune_tol: float = PRUNE_TOL) -> "ExpPolynomial":
        terms = {int(n): float(c) for n, c in terms.items()}
        if any(n < 0 for n in terms):
            raise ValueError("exponents must be non-negative")
        big = max((abs(c) for c in terms.values()), default=0.0)
        kept = {n: c for n, c in sorted(terms.items()) if abs(c) > prune_tol * big and c != 0.0}
        return cls(kept, float(scale))

    def __len__(self) -> int:
        return len(self.terms)

    def exponents(self) -> list:
        return sorted(self.terms)

    def coefficients(self) -> list:
        return [self.terms[n] for n in self.exponents()]

    def __call__(self, x: float) -> float:
        if x == 0:
            return self.terms.get(0, 0.0)
        logx = math.log(x)
        return math.fsum(c * math.exp(n * logx) for n, c in self.terms.items())

    def at_temperature(self, t: float) -> float:
        if t <= 0:
            return self(0.0)
        return self(math.exp(-self.scale / t))

    def derivative(self) -> "ExpPolynomial":
        # n * c cannot cancel, so nothing is pruned here.
        return ExpPolynomial({n - 1: n * c for n, c in self.terms.items() if n > 0}, self.scale)

    def sign_changes(self) -> int:
        signs = [c > 0 for c in self.coefficients()]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# -- small sparse polynomial ring with complex coefficients -----------------


class GaussianRational:
    """Exact complex number with :class:`fractions.Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def from_complex(cls, z: complex) -> "GaussianRational":
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, int):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for na, ca in a.items():
        for nb, cb in b.items():
            out[na + nb] = out.get(na + nb, 0) + ca * cb
    return out


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


_PERMS4 = [(p, _perm_sign(p)) for p in permutations(range(4))]


def poly_det4(entries) -> dict:
    """Leibniz expansion of a 4x4 determinant whose entries are sparse
    polynomials ``{exponent: coefficient}``."""
    total: dict = {}
    for perm, sign in _PERMS4:
        prod = {0: 1}
        for row, col in enumerate(perm):
            prod = _mul(prod, entries[row][col])
            if not prod:
                break
        for n, c in prod.items():
            total[n] = total.get(n, 0) + sign * c
    return total


# ---------------------------------------------------------------------------


def rationalize_energies(energies, max_denominator: int = 10**6) -> RationalSpectrum:
    """Approximate energies by ``r * n_i`` with non-negative integers ``n_i``.

    Energies are shifted so the minimum is zero and the largest gap is
    mapped to the common denominator D, i.e. ``r = gap / D``. Ratios are
    first approximated one at a time by continued fractions; if their
    common denominator exceeds ``max_denominator`` every D up to that
    limit is tried and the one with the smallest worst-case error wins.
    """
    e = np.asarray(energies, dtype=float)
    if not np.all(np.isfinite(e)):
        raise ValueError("energies must be finite")
    if max_denominator < 1:
        raise ValueError("max_denominator must be at least 1")
    g = e - e.min()
    top = g.max()
    if top == 0:
        return RationalSpectrum(tuple(0 for _ in g), 1.0, 0.0)
    q = g / top
    fracs = [Fraction(float(v)).limit_denominator(max_denominator) for v in q]
    d = 1
    for f in fracs:
        d = d * f.denominator // math.gcd(d, f.denominator)
    if d > max_denominator:
        ds = np.arange(1, max_denominator + 1, dtype=float)
        err = np.zeros_like(ds)
        for v in q:
            err = np.maximum(err, np.abs(v * ds - np.round(v * ds)) / ds)
        d = int(ds[int(np.argmin(err))])
    levels = np.round(q * d).astype(np.int64)
    r = top / d
    approx = float(np.abs(g - r * levels).max())
    return RationalSpectrum(tuple(int(n) for n in levels), float(r), approx)


def pt_det_polynomial(h, spec: RationalSpectrum | None = None, max_denominator: int = 10**6) -> ExpPolynomial:
    """``Z^4 det(rho(T)^{T_A})`` as a polynomial in ``x = exp(-r/T)``.

    If ``spec`` is omitted the spectrum of ``h`` is rationalized here.
    """
    es = eigensystem(h)
    if spec is None:
        spec = rationalize_energies(es.values, max_denominator)
    g = es.values - es.values.min()
    mismatch = np.abs(g - spec.scale * np.asarray(spec.levels)).max()
    if len(spec.levels) != 4 or mismatch > spec.approx_error + 1e-9 * max(g.max(), 1.0):
        raise ValueError("rational spectrum does not match the Hamiltonian")
    det = poly_det4(_pt_entries(es.vectors, spec.levels))
    coeffs = {n: complex(c) for n, c in det.items() if c}
    big = max((abs(c) for c in coeffs.values()), default=0.0)
    for n, c in coeffs.items():
        if abs(c.imag) > IMAG_TOL * max(big, 1.0):
            raise ArithmeticError(f"determinant coefficient at x^{n} is not real: {c}")
    return ExpPolynomial.from_terms(
        {n: c.real for n, c in coeffs.items()}, spec.scale, prune_tol=0.0
    )


def pt_projectors(vectors) -> np.ndarray:
    """Partial transposes of the eigenprojectors, shape (4, 4, 4)."""
    v = np.asarray(vectors)
    return partial_transpose(np.einsum("ik,jk->kij", v, v.conj()))


def _pt_entries(vectors, levels) -> list:
    q = pt_projectors(vectors)
    entries = [[{} for _ in range(4)] for _ in range(4)]
    for k, n in enumerate(levels):
        for a in range(4):
            for b in range(4):
                if q[k, a, b] != 0:
                    cell = entries[a][b]
                    cell[n] = cell.get(n, 0) + GaussianRational.from_complex(q[k, a, b])
    return entries


def descartes_region_bound(p: ExpPolynomial) -> int:
    """Upper bound on the number of maximal intervals in ``0 < x < 1`` where
    ``p < 0``, assuming ``p(1) > 0`` (separable at infinite temperature).

    With S the sign changes of the derivative's coefficients and V those of
    ``p`` itself, k negative intervals need 2k roots and 2k - 1 turning
    points if ``p`` starts positive near ``x = 0``, and 2k - 1 roots and
    2k - 2 turning points if it starts negative (a region reaching down to
    T = 0). Descartes' rule bounds roots by V and turning points by S; the
    smaller of the two resulting bounds is returned. For 35 terms V <= 34,
    so the result never exceeds 17.
    """
    if len(p) == 0:
        raise ValueError("polynomial has no terms")
    s = p.derivative().sign_changes()
    v = p.sign_changes()
    if p.coefficients()[0] < 0:
        return min(s // 2 + 1, (v + 1) // 2)
    return min((s + 1) // 2, v // 2)


@dataclass(frozen=True)
class BoundResult:
    polynomial: ExpPolynomial
    spectrum: RationalSpectrum
    term_count: int
    derivative_sign_changes: int
    sign_changes: int
    bound: int

    def to_dict(self) -> dict:
        return {
            "levels": list(self.spectrum.levels),
            "scale": self.spectrum.scale,
            "approx_error": self.spectrum.approx_error,
            "terms": [[n, c] for n, c in sorted(self.polynomial.terms.items())],
            "term_count": self.term_count,
            "derivative_sign_changes": self.derivative_sign_changes,
            "sign_changes": self.sign_changes,
            "bound": self.bound,
        }


def region_bound(h, max_denominator: int = 10**6) -> BoundResult:
    """Rationalize, expand the determinant polynomial and bound the regions."""
    spec = rationalize_energies(eigensystem(h).values, max_denominator)
    p = pt_det_polynomial(h, spec)
    return BoundResult(
        polynomial=p,
        spectrum=spec,
        term_count=len(p),
        derivative_sign_changes=p.derivative().sign_changes(),
        sign_changes=p.sign_changes(),
        bound=descartes_region_bound(p),
    )
