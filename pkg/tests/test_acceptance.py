"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (also collected in the terminal
summary). Runtime budgets are part of each criterion.
"""

import functools
import json
import time

import numpy as np
import pytest

from conftest import CORPUS
from test_bounds import integer_spectrum_hamiltonian, oracle_det
from thermalent.belldiag import bell_swaps, generated_permutations, swap_permutation
from thermalent.bounds import region_bound
from thermalent.cli import main, payload_json
from thermalent.entanglement import concurrence, is_entangled, partial_transpose
from thermalent.experiments import run_belldiag_check, run_gue_campaign, run_homogeneous_campaign, run_majorization_check
from thermalent.hamiltonians import FamilySpec, PauliHamiltonian, build, derive_seed, family_in_h, make_rng, sample_gue
from thermalent.regions import (
    DEFAULT_H_GRID,
    ScanOptions,
    ThermalFamily,
    default_t_grid,
    detect_regions,
    region_counts_over_h,
)
from thermalent.thermal import thermal_state

RESULTS = []


def criterion(number, title, budget):
    """Run the body, which returns (ok, detail); record and print one line."""

    def wrap(fn):
        @functools.wraps(fn)
        def test(*args, **kwargs):
            start = time.perf_counter()
            try:
                ok, detail = fn(*args, **kwargs)
            except Exception as exc:  # recorded, then re-raised below
                ok, detail = False, f"error: {exc!r}"
            elapsed = time.perf_counter() - start
            in_time = elapsed < budget
            status = "PASS" if ok and in_time else "FAIL"
            timing = f"{elapsed:.1f}s / {budget:.0f}s" + ("" if in_time else " OVER BUDGET")
            line = f"[{status}] criterion {number}: {title} | {detail} | {timing}"
            RESULTS.append(line)
            print(line)
            assert ok, detail
            assert in_time, timing

        return test

    return wrap


@criterion(1, "two-region band of the XZ model", 30)
def test_c1_rosci_band():
    counts = {h: detect_regions(build(FamilySpec("rosci", {"J": 1.0, "h": h}))).count for h in (0.5, 1.0, 1.8, 2.0, 2.2)}
    expected = {0.5: 1, 1.0: 1, 1.8: 2, 2.0: 2, 2.2: 2}
    sweep = np.round(np.arange(0, 5.0 + 1e-9, 0.02), 10)
    swept = region_counts_over_h(family_in_h(FamilySpec("rosci", {"J": 1.0})), sweep)
    two = [h for h, n in swept if n == 2]
    ok = counts == expected and bool(two) and 1.35 <= min(two) and max(two) <= 2.45
    return ok, f"counts {counts}; two-region h in [{min(two):.2f}, {max(two):.2f}]"


@criterion(2, "Wang model: entanglement only above T = 0, never two regions", 60)
def test_c2_wang():
    wang = family_in_h(FamilySpec("wang", {"J": 1.0}))
    revival = None
    for h in DEFAULT_H_GRID:
        ham = wang(h)
        fam = ThermalFamily(ham)
        ts = default_t_grid(fam.default_t_max())
        conc = fam.concurrences(ts)
        if conc[0] == 0 and not is_entangled(thermal_state(ham, 0.0)) and conc[1:].max() > 1e-10:
            revival = float(h)
            break
    two = {}
    for tol in (1e-13, 1e-14, 1e-15):
        counts = region_counts_over_h(wang, DEFAULT_H_GRID, ScanOptions(neg_tol=tol))
        two[tol] = [h for h, n in counts if n >= 2]
    ok = revival is not None and not any(two.values())
    return ok, f"first h with C(0) = 0 < max C(T): {revival}; two-region h at neg_tol 1e-13/1e-14/1e-15: {[len(v) for v in two.values()]}"


@criterion(3, "perturbed Wang models admit two regions", 60)
def test_c3_perturbations():
    aniso = region_counts_over_h(family_in_h(FamilySpec("anisotropic", {"J": 1.0, "gamma": 1e-6})))
    # The misaligned field enters the ground-state PT eigenvalue as delta^2,
    # about -6e-14 here, so the test threshold is lowered to 1e-14.
    mis = region_counts_over_h(
        family_in_h(FamilySpec("misaligned", {"J": 1.0, "delta": 1e-6})), opts=ScanOptions(neg_tol=1e-14)
    )
    a = [h for h, n in aniso if n == 2]
    m = [h for h, n in mis if n == 2]
    ok = bool(a) and bool(m)
    return ok, f"anisotropic: {len(a)} grid h with 2 regions (first {a[0] if a else None}); misaligned (neg_tol 1e-14): {len(m)} (first {m[0] if m else None})"


@criterion(4, "separable ground state with two entangled regions", 10)
def test_c4_example11():
    h = build(FamilySpec("example11"))
    c0 = concurrence(thermal_state(h, 0.0))
    report = detect_regions(h, opts=ScanOptions(conc_tol=1e-6))
    ok = c0 < 1e-9 and report.count == 2 and report.intervals[0][0] > 0
    ivs = ", ".join(f"({a:.4g}, {b:.4g})" for a, b in report.intervals)
    return ok, f"C(0) = {c0:.1e}; intervals {ivs}"


@pytest.mark.slow
@criterion(5, "homogeneous-field campaign", 15 * 60)
def test_c5_homogeneous():
    r = run_homogeneous_campaign(1000, master_seed=0)
    return r.fraction >= 0.99, f"{r.positives}/{r.samples} = {r.fraction:.3f}, wilson95 [{r.wilson95[0]:.3f}, {r.wilson95[1]:.3f}]"


@pytest.mark.slow
@criterion(6, "GUE campaign", 30 * 60)
def test_c6_gue():
    r = run_gue_campaign(4096, master_seed=0)
    ok = 0.005 <= r.fraction <= 0.08
    return ok, f"{r.positives}/{r.samples} = {100 * r.fraction:.2f}%, wilson95 [{100 * r.wilson95[0]:.2f}%, {100 * r.wilson95[1]:.2f}%]"


@criterion(7, "region bound on the corpus", 120)
def test_c7_bounds():
    cases = [(f"{f} {p}", build(FamilySpec(f, p))) for f, p in CORPUS]
    cases += [(f"rational #{i}", integer_spectrum_hamiltonian(derive_seed(7, i))) for i in range(100)]
    problems = []
    worst_err = 0.0
    max_terms = max_s = max_bound = 0
    near = 0
    unrationalizable = []
    for name, h in cases:
        res = region_bound(h)
        max_terms = max(max_terms, res.term_count)
        max_s = max(max_s, res.derivative_sign_changes)
        max_bound = max(max_bound, res.bound)
        if res.term_count > 35 or res.derivative_sign_changes > 34 or res.bound > 17:
            problems.append(f"{name}: cap exceeded")
        if res.spectrum.approx_error < 1e-9:
            detected = detect_regions(h).count
            if res.bound < detected:
                problems.append(f"{name}: bound {res.bound} < detected {detected}")
            near += res.bound - detected <= 1
        else:
            unrationalizable.append(name)
        levels = res.spectrum.levels
        width = res.spectrum.scale * max(max(levels), 1)
        for t in (0.05 * width, 0.2 * width, width, 5 * width, 25 * width):
            expected = oracle_det(h, res.spectrum, t)
            err = abs(res.polynomial.at_temperature(t) - expected) / abs(expected)
            worst_err = max(worst_err, err)
            if err > 1e-8:
                problems.append(f"{name}: evaluation error {err:.1e} at T = {t:.3g}")
    detail = (
        f"{len(cases)} Hamiltonians; max terms {max_terms}, max S {max_s}, max bound {max_bound}; "
        f"worst relative evaluation error {worst_err:.1e}; within 1 of detected: {near}; "
        f"soundness skipped (approx_error >= 1e-9): {unrationalizable or 'none'}"
    )
    if problems:
        detail += "; problems: " + "; ".join(problems[:5])
    return not problems, detail


@criterion(8, "majorization along temperature", 60)
def test_c8_majorization():
    r = run_majorization_check(1000, master_seed=0)
    return r.violations == 0, f"{r.violations} violations in {r.samples} samples"


@criterion(9, "zero-field Hamiltonians have at most one region", 5 * 60)
def test_c9_zero_field():
    r = run_belldiag_check(1000, master_seed=0)
    perms = [swap_permutation(s, 1e-12) for s in bell_swaps()]
    group = len(generated_permutations())
    ok = r.violations == 0 and r.details["swaps_ok"] and group == 24
    return ok, f"{r.violations} violations in {r.samples} samples; swap permutations {perms}; generated group size {group}"


@criterion(10, "PPT test and concurrence agree", 60)
def test_c10_criterion_agreement():
    disagreements = tolerated = second_negative = 0
    worst_second = np.inf
    for i in range(10_000):
        seed = derive_seed(10, i)
        m = sample_gue(seed)
        width = np.ptp(np.linalg.eigvalsh(m))
        t = width * 10 ** make_rng(seed ^ 0x5A5A).uniform(-3, 1)
        rho = thermal_state(m, t)
        ev = np.linalg.eigvalsh(partial_transpose(rho))
        worst_second = min(worst_second, ev[1])
        second_negative += ev[1] < -1e-12
        if is_entangled(rho) != (concurrence(rho) > 1e-10):
            if abs(ev[0]) < 1e-12:
                tolerated += 1
            else:
                disagreements += 1
    ok = disagreements == 0 and second_negative == 0
    return ok, f"disagreements {disagreements} (+{tolerated} within |min PT eig| < 1e-12); second-smallest PT eigenvalue min {worst_second:.3g}"


@criterion(11, "campaign payloads independent of --threads", 5 * 60)
def test_c11_determinism(tmp_path, capsys):
    mismatched = []
    for kind, samples in (("homogeneous", 40), ("gue", 64), ("sepground", 64)):
        payloads = []
        for threads in (1, 2, 3):
            out = tmp_path / f"{kind}-{threads}.json"
            code = main(["campaign", kind, "--samples", str(samples), "--seed", "11", "--threads", str(threads), "--out", str(out)])
            if code != 0:
                return False, f"{kind} exited with {code}"
            payloads.append(payload_json(json.loads(out.read_text())["payload"]))
        if len(set(payloads)) != 1:
            mismatched.append(kind)
    capsys.readouterr()
    return not mismatched, f"mismatched: {mismatched or 'none'} across threads 1/2/3"
