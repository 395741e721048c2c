"""Thermal entanglement of two-qubit Hamiltonians."""

__version__ = "0.1.0"

from .bounds import ExpPolynomial, RationalSpectrum, descartes_region_bound, pt_det_polynomial, rationalize_energies, region_bound
from .entanglement import concurrence, is_entangled, min_pt_eigenvalue, partial_transpose, pt_report
from .hamiltonians import FamilySpec, PauliHamiltonian, build, canonical_form, split_local_nonlocal
from .regions import RegionReport, ScanOptions, StillEntangledError, concurrence_curve, detect_regions
from .thermal import gibbs_spectrum, majorizes, thermal_state

__all__ = [
    "ExpPolynomial",
    "FamilySpec",
    "PauliHamiltonian",
    "RationalSpectrum",
    "RegionReport",
    "ScanOptions",
    "StillEntangledError",
    "build",
    "canonical_form",
    "concurrence",
    "concurrence_curve",
    "descartes_region_bound",
    "detect_regions",
    "gibbs_spectrum",
    "is_entangled",
    "majorizes",
    "min_pt_eigenvalue",
    "partial_transpose",
    "pt_det_polynomial",
    "pt_report",
    "rationalize_energies",
    "region_bound",
    "split_local_nonlocal",
    "thermal_state",
]
