"""Command-line interface.

Hamiltonians are read from JSON spec files of one of two shapes::

    {"family": "rosci", "params": {"J": 1, "h": 2}}
    {"pauli": [[c_II, c_IX, c_IY, c_IZ], ..., [c_ZI, ..., c_ZZ]]}

Exit status is 0 on success, 1 when a computation fails (for example a
state still entangled at the top of the temperature scan) and 2 on usage
errors, including malformed spec files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bounds import region_bound
from .experiments import (
    HGrid,
    run_belldiag_check,
    run_gue_campaign,
    run_homogeneous_campaign,
    run_majorization_check,
    run_sepground_search,
)
from .hamiltonians import FAMILIES, FIELD_FAMILIES, FamilySpec, PauliHamiltonian, build, split_local_nonlocal
from .regions import DEFAULT_T_POINTS, ScanOptions, ThermalFamily, default_t_grid, detect_regions

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2

CURVE_HEADER = ("t", "concurrence", "min_pt_eig")


class UsageError(ValueError):
    """Bad command-line input or spec file."""


# -- spec files --------------------------------------------------------------


def _reject_constant(name):
    raise UsageError(f"non-finite number {name} in spec")


def _number(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise UsageError(f"{what} must be a number")
    x = float(x)
    if not math.isfinite(x):
        raise UsageError(f"{what} must be finite")
    return x


def _param(value, key: str):
    if isinstance(value, list):
        return [_param(v, key) for v in value]
    return _number(value, f"parameter {key!r}")


def load_spec(text: str) -> FamilySpec:
    """Parse spec-file content into a :class:`FamilySpec`.

    A ``pauli`` spec becomes the ``explicit`` family.
    """
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed spec: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("spec must be a JSON object")
    keys = set(data)
    if "pauli" in keys and "family" in keys:
        raise UsageError("spec has both 'family' and 'pauli'")
    if "pauli" in keys:
        if keys != {"pauli"}:
            raise UsageError(f"unknown spec keys: {', '.join(sorted(keys - {'pauli'}))}")
        rows = data["pauli"]
        if not (isinstance(rows, list) and len(rows) == 4 and all(isinstance(r, list) and len(r) == 4 for r in rows)):
            raise UsageError("'pauli' must be a 4x4 array")
        c = [[_number(v, "pauli coefficient") for v in row] for row in rows]
        return FamilySpec("explicit", {"c": c})
    if "family" in keys:
        extra = keys - {"family", "params"}
        if extra:
            raise UsageError(f"unknown spec keys: {', '.join(sorted(extra))}")
        family = data["family"]
        if family not in FAMILIES:
            raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise UsageError("'params' must be an object")
        spec = FamilySpec(family, {k: _param(v, k) for k, v in params.items()})
        # ``h`` may be left out when it is supplied by a grid sweep.
        probe = spec.with_h(0.0) if family in FIELD_FAMILIES and "h" not in spec.params else spec
        try:
            build(probe)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return spec
    raise UsageError("spec needs either 'family' or 'pauli'")


def parse_spec(text: str) -> PauliHamiltonian:
    """Spec-file content to a Hamiltonian."""
    return _build(load_spec(text))


def _build(spec: FamilySpec) -> PauliHamiltonian:
    try:
        return build(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def serialize_spec(obj) -> str:
    """JSON for a :class:`FamilySpec` or :class:`PauliHamiltonian`.

    Floats are written with ``repr`` so parsing restores them exactly.
    """
    if isinstance(obj, PauliHamiltonian):
        return json.dumps({"pauli": obj.c.tolist()})
    if isinstance(obj, FamilySpec):
        if obj.family == "explicit":
            return json.dumps({"pauli": np.asarray(obj.params["c"], dtype=float).tolist()})
        params = {k: np.asarray(v, dtype=float).tolist() for k, v in obj.params.items()}
        return json.dumps({"family": obj.family, "params": params})
    raise TypeError("expected FamilySpec or PauliHamiltonian")


def _read_spec(path: str) -> FamilySpec:
    try:
        with open(path, encoding="utf-8") as fh:
            return load_spec(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def field_family(spec: FamilySpec):
    """``h -> H(h)``: the family's own field parameter, or ``H_N + h H_L``
    for an explicit tensor."""
    if spec.family == "explicit":
        h_nonlocal, h_local = split_local_nonlocal(build(spec))
        return lambda h: h_nonlocal + h_local * h
    if spec.family == "example11":
        raise UsageError("example11 has no field parameter")
    return lambda h: build(spec.with_h(h))


# -- output --------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def curve_csv(rows, with_h: bool = False) -> str:
    header = (("h",) if with_h else ()) + CURVE_HEADER
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def payload_json(payload) -> str:
    """Canonical serialization used for reports and reproducibility checks."""
    return json.dumps(payload, sort_keys=True, allow_nan=False)


def _report(argv, args, grids, payload, seconds) -> str:
    report = {
        "command": list(argv),
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "grids": grids,
        "payload": payload,
        "timing": {"seconds": seconds},
    }
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- commands --------------------------------------------------------------------


def _options(args) -> ScanOptions:
    return ScanOptions(
        t_points=args.t_points,
        refine_tol=args.refine_tol,
        neg_tol=args.neg_tol,
        conc_tol=args.conc_tol,
    )


def _t_grid(t_max: float, points: int) -> np.ndarray:
    if not (t_max > 0 and math.isfinite(t_max)):
        raise UsageError("--t-max must be positive and finite")
    return default_t_grid(t_max, points)


def _curve(ham: PauliHamiltonian, ts: np.ndarray) -> np.ndarray:
    fam = ThermalFamily(ham)
    return np.column_stack([ts, fam.concurrences(ts), fam.min_pt_eigs(ts)])


def cmd_scan(args):
    spec = _read_spec(args.hamiltonian)
    ham = _build(spec)
    fam = ThermalFamily(ham)
    t_max = args.t_max if args.t_max is not None else fam.default_t_max()
    ts = _t_grid(t_max, args.t_points)
    rows = _curve(ham, ts)
    grids = {"t_max": t_max, "t_points": args.t_points}
    payload = {name: rows[:, k].tolist() for k, name in enumerate(CURVE_HEADER)}
    return grids, payload, lambda: curve_csv(rows)


def _grid_rows(args_tuple):
    ham, ts = args_tuple
    return _curve(ham, ts)


def cmd_grid(args):
    spec = _read_spec(args.hamiltonian)
    family = field_family(spec)
    if args.h_points < 1 or args.h_min > args.h_max:
        raise UsageError("need --h-points >= 1 and --h-min <= --h-max")
    hs = np.linspace(args.h_min, args.h_max, args.h_points)
    hams = [family(h) for h in hs]
    if args.t_max is not None:
        t_max = args.t_max
    else:
        t_max = max(ThermalFamily(hm).default_t_max() for hm in hams)
    ts = _t_grid(t_max, args.t_points)
    tasks = [(hm, ts) for hm in hams]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            blocks = list(pool.map(_grid_rows, tasks))
    else:
        blocks = [_grid_rows(t) for t in tasks]
    rows = np.vstack([np.column_stack([np.full(len(ts), h), b]) for h, b in zip(hs, blocks)])
    grids = {"h_min": args.h_min, "h_max": args.h_max, "h_points": args.h_points, "t_max": t_max, "t_points": args.t_points}
    payload = {
        "h": hs.tolist(),
        "t": ts.tolist(),
        "concurrence": [b[:, 1].tolist() for b in blocks],
        "min_pt_eig": [b[:, 2].tolist() for b in blocks],
    }
    return grids, payload, lambda: curve_csv(rows, with_h=True)


def cmd_regions(args):
    ham = _build(_read_spec(args.hamiltonian))
    opts = _options(args)
    report = detect_regions(ham, t_max=args.t_max, opts=opts)
    grids = {"t_max": report.t_max_scanned, "t_points": opts.t_points}
    return grids, report.to_dict(), None


def cmd_bound(args):
    ham = _build(_read_spec(args.hamiltonian))
    if args.max_denominator < 1:
        raise UsageError("--max-denominator must be at least 1")
    result = region_bound(ham, args.max_denominator)
    return {"max_denominator": args.max_denominator}, result.to_dict(), None


def _hgrid(args) -> HGrid:
    return HGrid(h_min=args.h_min, h_max=args.h_max, points=args.h_points, relative=not args.absolute_h)


def cmd_campaign(args):
    opts = _options(args)
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.kind == "homogeneous":
        result = run_homogeneous_campaign(args.samples, args.seed, _hgrid(args), opts, args.threads)
    elif args.kind == "gue":
        result = run_gue_campaign(args.samples, args.seed, _hgrid(args), opts, args.threads)
    else:
        result = run_sepground_search(args.samples, args.seed, opts, args.threads, args.stop_after)
    return result.grids, result.to_dict(), None


def cmd_check(args):
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.kind == "majorization":
        result = run_majorization_check(args.samples, args.seed, args.threads)
        grids = {}
    else:
        opts = _options(args)
        result = run_belldiag_check(args.samples, args.seed, opts, args.threads)
        grids = {"t_points": opts.t_points, "neg_tol": opts.neg_tol}
    return grids, result.to_dict(), None


# -- argument parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _add_scan_flags(p, tolerances=True):
    p.add_argument("--t-max", type=float, default=None, help="highest temperature (default 20x spectral width)")
    p.add_argument("--t-points", type=int, default=DEFAULT_T_POINTS, help="temperature grid size")
    if tolerances:
        p.add_argument("--neg-tol", type=float, default=1e-13, help="entangled iff min PT eigenvalue < -neg_tol")
        p.add_argument("--refine-tol", type=float, default=1e-9, help="relative tolerance of boundary bisection")
        p.add_argument("--conc-tol", type=float, default=None, help="use concurrence > conc_tol as the test instead")


def _add_common(p, formats=("report",)):
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def _add_h_flags(p, h_max=5.0):
    p.add_argument("--h-min", type=float, default=0.0)
    p.add_argument("--h-max", type=float, default=h_max)
    p.add_argument("--h-points", type=int, default=201)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thermalent", description="Thermal entanglement of two-qubit Hamiltonians.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", help="concurrence and min PT eigenvalue along a temperature grid")
    p.add_argument("--hamiltonian", required=True)
    _add_scan_flags(p, tolerances=False)
    _add_common(p, ("csv", "report"))
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("grid", help="scan over field strength h and temperature")
    p.add_argument("--hamiltonian", required=True)
    _add_scan_flags(p, tolerances=False)
    _add_h_flags(p)
    p.add_argument("--threads", type=int, default=1)
    _add_common(p, ("csv", "report"))
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("regions", help="entangled temperature intervals")
    p.add_argument("--hamiltonian", required=True)
    _add_scan_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("bound", help="upper bound on the number of entangled regions")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--max-denominator", type=int, default=10**6)
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("campaign", help="seeded random-search campaigns")
    p.add_argument("kind", choices=("homogeneous", "gue", "sepground"))
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--stop-after", type=int, default=None, help="sepground: stop once this many hits are found")
    p.add_argument("--absolute-h", action="store_true", help="do not rescale the h grid by the coupling/field ratio")
    _add_scan_flags(p)
    _add_h_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("check", help="numerical checks of the zero-field and majorization results")
    p.add_argument("kind", choices=("majorization", "belldiag"))
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    _add_scan_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "threads", 1) < 1:
        sys.stderr.write("thermalent: error: --threads must be at least 1\n")
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        grids, payload, csv = args.func(args)
    except (UsageError, OSError) as exc:
        sys.stderr.write(f"thermalent: error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        # Invalid option values surface as ValueError from the library.
        sys.stderr.write(f"thermalent: error: {exc}\n")
        return EXIT_USAGE
    except (RuntimeError, ArithmeticError) as exc:
        sys.stderr.write(f"thermalent: computation failed: {exc}\n")
        return EXIT_COMPUTE
    seconds = time.perf_counter() - start
    if args.format == "csv":
        text = csv()
    else:
        text = _report(["thermalent", *argv], args, grids, payload, seconds)
    try:
        _emit(text, args.out)
    except OSError as exc:
        sys.stderr.write(f"thermalent: error: cannot write {args.out}: {exc.strerror}\n")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
