"""Seeded random-search campaigns over two-qubit Hamiltonians.

Every sample ``i`` is drawn from its own generator seeded with
``derive_seed(master_seed, i)``, and results are collected in index order,
so a campaign's outcome does not depend on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Optional

import numpy as np

from .belldiag import bell_swaps, check_monotone_separability, generated_permutations, swap_permutation
from .entanglement import concurrence
from .hamiltonians import (
    PauliHamiltonian,
    build,
    derive_seed,
    sample_gue,
    sample_homogeneous,
    sample_separable_ground,
    split_local_nonlocal,
)
from .regions import ScanOptions, StillEntangledError, ThermalFamily, default_t_grid, detect_regions, two_regions_over_h
from .thermal import MAJORIZATION_TOL, gibbs_spectrum, majorizes, thermal_state

MAX_EXEMPLARS = 10
GROUND_SEPARABLE_TOL = 1e-10


@dataclass(frozen=True)
class HGrid:
    """Field-strength grid for the "is there an h with two regions" search.

    With ``relative`` set, the grid ``linspace(h_min, h_max, points)`` is
    multiplied by ``||c_nonlocal|| / ||c_local||`` (Frobenius norms of the
    Pauli coefficients at h = 1), i.e. it spans field-to-coupling ratios
    rather than raw h. For the rosci and Wang families the factor is exactly 1.
    """

    h_max: float = 5.0
    points: int = 201
    relative: bool = True
    h_min: float = 0.0

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("h grid needs at least one point")
        if not (math.isfinite(self.h_min) and math.isfinite(self.h_max) and self.h_min <= self.h_max):
            raise ValueError("need finite h_min <= h_max")

    def values(self, h_nonlocal: PauliHamiltonian, h_local: PauliHamiltonian) -> np.ndarray:
        base = np.linspace(self.h_min, self.h_max, self.points)
        if not self.relative:
            return base
        local = np.linalg.norm(h_local.c)
        if local == 0:
            return base
        return base * (np.linalg.norm(h_nonlocal.c) / local)

    def to_dict(self) -> dict:
        return {"h_min": self.h_min, "h_max": self.h_max, "h_points": self.points, "relative": self.relative}


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0 or not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n and n > 0")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = k / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    # Clamp roundoff so lo <= p <= hi holds exactly at the edges.
    return min(lo, p), max(hi, p)


@dataclass(frozen=True)
class CampaignResult:
    kind: str
    samples: int
    positives: int
    fraction: float
    wilson95: tuple
    master_seed: int
    grids: dict
    exemplars: tuple = ()
    found: tuple = field(default=(), repr=False)
    errors: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "samples": self.samples,
            "positives": self.positives,
            "fraction": self.fraction,
            "wilson95": list(self.wilson95),
            "master_seed": self.master_seed,
            "grids": self.grids,
            "exemplars": [dict(e) for e in self.exemplars],
            "found": [dict(f) for f in self.found],
            "errors": self.errors,
        }


# -- per-sample workers (module level so they pickle) -----------------------


def homogeneous_sample(master_seed: int, index: int, hgrid: HGrid, opts: ScanOptions) -> dict:
    seed = derive_seed(master_seed, index)
    fam = sample_homogeneous(seed)
    h_nonlocal, h_local = split_local_nonlocal(build(fam.with_h(1.0)))
    hs = hgrid.values(h_nonlocal, h_local)
    h = two_regions_over_h(lambda x: h_nonlocal + h_local * x, hs, opts)
    return {"index": index, "seed": seed, "h": h}


def gue_sample(master_seed: int, index: int, hgrid: HGrid, opts: ScanOptions) -> dict:
    seed = derive_seed(master_seed, index)
    h_nonlocal, h_local = split_local_nonlocal(PauliHamiltonian.from_matrix(sample_gue(seed)))
    hs = hgrid.values(h_nonlocal, h_local)
    h = two_regions_over_h(lambda x: h_nonlocal + h_local * x, hs, opts)
    return {"index": index, "seed": seed, "h": h}


def is_separable_ground_two_region(ham: PauliHamiltonian, opts: ScanOptions) -> bool:
    """Separable ground state and at least two entangled regions, the
    first of which does not reach down to T = 0."""
    if concurrence(thermal_state(ham, 0.0)) >= GROUND_SEPARABLE_TOL:
        return False
    report = detect_regions(ham, opts=opts)
    return report.count >= 2 and not report.includes_zero


def sepground_sample(master_seed: int, index: int, opts: ScanOptions) -> dict:
    seed = derive_seed(master_seed, index)
    ham = sample_separable_ground(seed)
    hit = is_separable_ground_two_region(ham, opts)
    return {"index": index, "seed": seed, "h": None, "hit": hit, "c": ham.c.tolist() if hit else None}


def _call(args):
    fn, rest = args
    try:
        return fn(*rest)
    except StillEntangledError:
        return {"index": rest[1], "error": True}


def _run(tasks, workers: Optional[int]):
    if workers is None or workers <= 1:
        return [_call(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, tasks, chunksize=max(1, len(tasks) // (8 * workers))))


def _summarize(kind, outcomes, n, master_seed, grids) -> CampaignResult:
    positives = [o for o in outcomes if o.get("hit", o.get("h") is not None) and not o.get("error")]
    exemplars = tuple(
        {"index": o["index"], "seed": o["seed"], "h": o["h"]} for o in positives[:MAX_EXEMPLARS]
    )
    found = tuple({"index": o["index"], "seed": o["seed"], "pauli": o["c"]} for o in positives if o.get("c"))
    k = len(positives)
    return CampaignResult(
        kind=kind,
        samples=n,
        positives=k,
        fraction=k / n,
        wilson95=wilson_interval(k, n),
        master_seed=int(master_seed),
        grids=grids,
        exemplars=exemplars,
        found=found,
        errors=sum(1 for o in outcomes if o.get("error")),
    )


def _grids(hgrid: Optional[HGrid], opts: ScanOptions) -> dict:
    g = {
        "t_points": opts.t_points,
        "t_max_factor": 20.0,
        "neg_tol": opts.neg_tol,
        "conc_tol": opts.conc_tol,
    }
    if hgrid is not None:
        g.update(hgrid.to_dict())
    return g


def run_homogeneous_campaign(
    n: int = 1000,
    master_seed: int = 0,
    hgrid: HGrid = HGrid(),
    opts: ScanOptions = ScanOptions(),
    workers: Optional[int] = None,
) -> CampaignResult:
    """Fraction of random homogeneous-field models with some h giving two regions."""
    if n < 1:
        raise ValueError("need at least one sample")
    tasks = [(homogeneous_sample, (master_seed, i, hgrid, opts)) for i in range(n)]
    return _summarize("homogeneous", _run(tasks, workers), n, master_seed, _grids(hgrid, opts))


def run_gue_campaign(
    n: int = 4096,
    master_seed: int = 0,
    hgrid: HGrid = HGrid(),
    opts: ScanOptions = ScanOptions(),
    workers: Optional[int] = None,
) -> CampaignResult:
    """Same search for ``H_N + h H_L`` built from GUE samples."""
    if n < 1:
        raise ValueError("need at least one sample")
    tasks = [(gue_sample, (master_seed, i, hgrid, opts)) for i in range(n)]
    return _summarize("gue", _run(tasks, workers), n, master_seed, _grids(hgrid, opts))


def run_sepground_search(
    n: int = 100_000,
    master_seed: int = 0,
    opts: ScanOptions = ScanOptions(),
    workers: Optional[int] = None,
    stop_after: Optional[int] = None,
    inject: tuple = (),
) -> CampaignResult:
    """Search Hamiltonians with ground state |00> for two entangled regions.

    ``inject`` prepends given Hamiltonians as extra samples (index -1, -2,
    ...). With ``stop_after`` set, samples are processed in blocks and the
    search ends after the block in which that many hits were reached; the
    reported sample count is the number actually examined.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    outcomes = []
    for j, ham in enumerate(inject):
        hit = is_separable_ground_two_region(ham, opts)
        outcomes.append({"index": -(j + 1), "seed": None, "h": None, "hit": hit,
                         "c": ham.c.tolist() if hit else None})
    block = n if stop_after is None else max(64, 16 * (workers or 1))
    done = 0
    while done < n:
        hi = min(n, done + block)
        tasks = [(sepground_sample, (master_seed, i, opts)) for i in range(done, hi)]
        outcomes.extend(_run(tasks, workers))
        done = hi
        if stop_after is not None and sum(1 for o in outcomes if o.get("hit")) >= stop_after:
            break
    grids = _grids(None, opts)
    grids["stop_after"] = stop_after
    return _summarize("sepground", outcomes, len(outcomes), master_seed, grids)


# -- theorem checks ------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    kind: str
    samples: int
    violations: int
    master_seed: int
    details: dict = field(default_factory=dict)
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return self.violations == 0 and all(v for k, v in self.details.items() if k.endswith("_ok"))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "samples": self.samples,
            "violations": self.violations,
            "ok": self.ok,
            "master_seed": self.master_seed,
            "details": self.details,
            "failures": [dict(f) for f in self.failures],
        }


def majorization_sample(master_seed: int, index: int) -> dict:
    """GUE Hamiltonian and random ``0 <= T1 < T2`` (every tenth sample has
    ``T1 = 0``), temperatures drawn on the scale of the spectral width."""
    seed = derive_seed(master_seed, index)
    ham = PauliHamiltonian.from_matrix(sample_gue(seed))
    rng = np.random.default_rng([seed, 1])
    width = float(np.ptp(ham.energies()))
    t1, t2 = np.sort(rng.exponential(width, size=2))
    if index % 10 == 0:
        t1 = 0.0
    if t1 == t2:
        t2 = t1 + width
    ok = majorizes(gibbs_spectrum(ham, t1), gibbs_spectrum(ham, t2), MAJORIZATION_TOL)
    return {"index": index, "seed": seed, "t1": float(t1), "t2": float(t2), "ok": ok}


def zero_field_sample(master_seed: int, index: int, opts: ScanOptions) -> dict:
    """Nonlocal part of a GUE sample: region count and monotone check."""
    seed = derive_seed(master_seed, index)
    ham, _ = split_local_nonlocal(PauliHamiltonian.from_matrix(sample_gue(seed)))
    fam = ThermalFamily(ham)
    report = detect_regions(ham, opts=opts, family=fam)
    grid = default_t_grid(fam.default_t_max(), opts.t_points)
    mono = check_monotone_separability(ham, grid, opts.neg_tol)
    ok = report.count <= 1 and mono.ok
    return {"index": index, "seed": seed, "regions": report.count, "monotone": mono.ok, "ok": ok}


def _check_summary(kind, outcomes, master_seed, details) -> CheckResult:
    failures = tuple(o for o in outcomes if o.get("error") or not o.get("ok"))
    return CheckResult(
        kind=kind,
        samples=len(outcomes),
        violations=len(failures),
        master_seed=int(master_seed),
        details=details,
        failures=failures[:MAX_EXEMPLARS],
    )


def run_majorization_check(n: int = 1000, master_seed: int = 0, workers: Optional[int] = None) -> CheckResult:
    """Gibbs spectra at lower temperature majorize those at higher temperature."""
    if n < 1:
        raise ValueError("need at least one sample")
    tasks = [(majorization_sample, (master_seed, i)) for i in range(n)]
    return _check_summary("majorization", _run(tasks, workers), master_seed, {"tol": MAJORIZATION_TOL})


def verify_bell_swaps(tol: float = 1e-12) -> dict:
    """Each swap permutes the Bell basis as labelled, and together they
    generate every permutation of the four Bell states."""
    expected = {("phi+", "phi-"): (1, 0, 2, 3), ("psi+", "psi-"): (0, 1, 3, 2), ("phi-", "psi+"): (0, 2, 1, 3)}
    swaps = bell_swaps()
    perms_ok = all(swap_permutation(s, tol) == expected[s.swapped_pair] for s in swaps)
    group = generated_permutations(swaps)
    return {"swaps_ok": perms_ok, "permutations": len(group), "group_ok": len(group) == 24}


def run_belldiag_check(
    n: int = 1000,
    master_seed: int = 0,
    opts: ScanOptions = ScanOptions(),
    workers: Optional[int] = None,
) -> CheckResult:
    """Zero-field Hamiltonians have at most one entangled region, which
    starts at T = 0 when present."""
    if n < 1:
        raise ValueError("need at least one sample")
    tasks = [(zero_field_sample, (master_seed, i, opts)) for i in range(n)]
    details = verify_bell_swaps()
    details["neg_tol"] = opts.neg_tol
    details["t_points"] = opts.t_points
    return _check_summary("belldiag", _run(tasks, workers), master_seed, details)
