"""Command-line interface: solve, bench, verify.

solve   -- compute reduced phases for one target, print a JSON report.
bench   -- run a (method x degree) or (method x tau) grid, append CSV rows.
verify  -- recompute the residual of a phases file against a target file.

The reported residual always comes from the direct evaluator, regardless of
which method produced the phases.  Exit codes: 0 success, 1 solver/data
error (structured JSON on stderr), 2 flag errors (argparse).

CSV format (schema 1):

    # schema=1
    method,d,eta,wall_ms,residual,iterations,seed,grid_size

New files get the schema line and header; an existing file with a matching
schema line is appended to; anything else is refused unless --force, which
truncates.  Timing is single-threaded: one warmup, then median of 3 runs on
a monotonic clock.  QSPF_THREADS caps internal parallelism (the numpy
backend used here is single-threaded, so the cap is recorded and trivially
respected).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import QspfError, SolverError
from .fpi import FpiConfig, fpi_solve
from .halfchol import hc_phase_factors
from .poly import ChebTarget
from .qsp import PhaseFactors, direct_residual
from .targets import HamSimSpec, hamsim_target, load_target, random_target, sup_norm
from .weiss import WeissConfig, rhw_phase_factors, weiss

CSV_SCHEMA_LINE = "# schema=1"
CSV_HEADER = "method,d,eta,wall_ms,residual,iterations,seed,grid_size"

METHODS = ("hc", "ffpi", "fpi_direct", "rhw_oracle")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    d: int
    eta: float
    wall_ms: float
    residual: float
    iterations: int
    seed: int
    grid_size: int

    def to_row(self) -> str:
        return (
            f"{self.method},{self.d},{self.eta!r},{self.wall_ms!r},"
            f"{self.residual!r},{self.iterations},{self.seed},{self.grid_size}"
        )


def thread_cap() -> int | None:
    """Parsed QSPF_THREADS (upper bound on internal parallelism), None = all cores."""
    raw = os.environ.get("QSPF_THREADS")
    if raw is None or raw.strip() == "":
        return None
    try:
        val = int(raw)
    except ValueError:
        raise QspfError(f"QSPF_THREADS={raw!r} is not an integer") from None
    if val < 1:
        raise QspfError(f"QSPF_THREADS must be >= 1, got {val}")
    return val


def write_bench_csv(records, path, force: bool = False) -> None:
    """Create-or-append records at path per the schema rules above."""
    rows = [rec.to_row() for rec in records]
    exists = os.path.exists(path)
    if exists and not force:
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
        if first != CSV_SCHEMA_LINE:
            raise QspfError(
                f"{path} exists with unrecognized schema {first!r}; refusing to "
                "overwrite without --force"
            )
        with open(path, "a", encoding="utf-8") as fh:
            for row in rows:
                fh.write(row + "\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_SCHEMA_LINE + "\n")
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row + "\n")


# ---------------------------------------------------------------------------
# target construction and solving
# ---------------------------------------------------------------------------


def _build_target(args) -> tuple[ChebTarget, dict]:
    if args.target == "random":
        if args.degree is None:
            raise QspfError("--target random requires --degree")
        t = random_target(args.degree, args.inf_norm, args.seed)
        meta = {"target": "random", "degree_half": t.degree_half, "inf_norm": args.inf_norm,
                "seed": args.seed}
    elif args.target == "hamsim":
        if args.tau is None:
            raise QspfError("--target hamsim requires --tau")
        t = hamsim_target(HamSimSpec(tau=args.tau, scale=args.scale, eps0=args.eps0))
        meta = {"target": "hamsim", "degree_half": t.degree_half, "tau": args.tau,
                "scale": args.scale}
    elif args.target == "file":
        if args.input is None:
            raise QspfError("--target file requires --input")
        t = load_target(args.input)
        meta = {"target": "file", "degree_half": t.degree_half, "input": args.input}
    else:  # pragma: no cover - argparse already restricts choices
        raise QspfError(f"unknown target {args.target!r}")
    return t, meta


def _derive_eta(target: ChebTarget, requested: float | None) -> float:
    if requested is not None:
        if not (0.0 < requested < 1.0):
            raise QspfError("--eta must lie in (0, 1)")
        return requested
    m = sup_norm(target)
    if m >= 1.0:
        raise QspfError(f"target sup-norm {m:.6f} >= 1; no admissible eta")
    return 1.0 - m


def solve_target(method: str, target: ChebTarget, tol: float, eta: float,
                 max_iter: int = 500) -> dict:
    """Run one method; returns psi, iterations, grid_size, warnings, wall_ms."""
    if method not in METHODS:
        raise QspfError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    t0 = time.perf_counter()
    warnings: list[str] = []
    if method == "hc":
        res = hc_phase_factors(target, WeissConfig(eta=eta, eps=min(1e-12, 0.25 * tol)))
        psi, iterations, grid = res.phases, 1, res.weiss.grid_size
    elif method == "rhw_oracle":
        wres = weiss(target, WeissConfig(eta=eta, eps=min(1e-12, 0.25 * tol)))
        psi, iterations, grid = rhw_phase_factors(wres.c), 1, wres.grid_size
    else:
        cfg = FpiConfig(tol=0.25 * tol, max_iter=max_iter,
                        evaluator="fast" if method == "ffpi" else "direct")
        rep = fpi_solve(target, cfg)
        psi, iterations, grid = rep.psi, rep.iterations, 0
        warnings = list(rep.warnings)
    wall_ms = 1e3 * (time.perf_counter() - t0)
    return {"psi": psi, "iterations": iterations, "grid_size": grid,
            "warnings": warnings, "wall_ms": wall_ms}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    target, meta = _build_target(args)
    eta = _derive_eta(target, args.eta)
    out = solve_target(args.method, target, args.tol, eta, args.max_iter)
    psi: PhaseFactors = out["psi"]
    residual = direct_residual(psi, target)
    cap = thread_cap()
    payload = {
        "psi": [float(v) for v in psi.reduced],
        "residual": residual,
        "iterations": out["iterations"],
        "wall_ms": out["wall_ms"],
        "method": args.method,
        "warnings": out["warnings"],
        "meta": {**meta, "eta": eta, "tol": args.tol, "grid_size": out["grid_size"],
                 "thread_cap": cap if cap is not None else "all",
                 "qspf_version": __version__},
    }
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if residual > args.tol:
        print(
            json.dumps({"error": "ResidualAboveTol",
                        "message": f"direct residual {residual:.3e} > tol {args.tol:.1e}"}),
            file=sys.stderr,
        )
        return 1
    return 0


def _bench_cell(method: str, target: ChebTarget, tol: float, eta: float, seed: int) -> BenchRecord:
    solve_target(method, target, tol, eta)  # warmup (JIT, FFT plans, caches)
    walls = []
    last = None
    for _ in range(3):
        last = solve_target(method, target, tol, eta)
        walls.append(last["wall_ms"])
    residual = direct_residual(last["psi"], target)
    return BenchRecord(
        method=method,
        d=target.degree_half,
        eta=eta,
        wall_ms=float(np.median(walls)),
        residual=residual,
        iterations=last["iterations"],
        seed=seed,
        grid_size=last["grid_size"],
    )


def cmd_bench(args) -> int:
    cap = thread_cap()
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise QspfError("--methods must name at least one method")
    for m in methods:
        if m not in METHODS:
            raise QspfError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")

    cells: list[tuple[ChebTarget, int]] = []  # (target, seed-or-tau tag)
    if args.target == "random":
        if not args.degrees:
            raise QspfError("--target random requires --degrees")
        degrees = [int(v) for v in args.degrees.split(",") if v.strip()]
        for d in degrees:
            cells.append((random_target(d, args.inf_norm, args.seed), args.seed))
    elif args.target == "hamsim":
        if not args.taus:
            raise QspfError("--target hamsim requires --taus")
        taus = [float(v) for v in args.taus.split(",") if v.strip()]
        for tau in taus:
            cells.append((hamsim_target(HamSimSpec(tau=tau, scale=args.scale,
                                                   eps0=args.eps0)), args.seed))
    else:  # pragma: no cover
        raise QspfError(f"unknown bench target {args.target!r}")

    records: list[BenchRecord] = []
    failures = 0
    for target, seed in cells:
        eta = _derive_eta(target, args.eta)
        for method in methods:
            try:
                records.append(_bench_cell(method, target, args.tol, eta, seed))
            except QspfError as exc:
                failures += 1
                print(f"bench: {method} d={target.degree_half}: "
                      f"{type(exc).__name__}: {exc}", file=sys.stderr)
                if not args.keep_going:
                    write_bench_csv(records, args.output, force=args.force)
                    return 1
    write_bench_csv(records, args.output, force=args.force)
    note = {"rows": len(records), "output": args.output, "failures": failures,
            "thread_cap": cap if cap is not None else "all"}
    print(json.dumps(note))
    return 0 if (failures == 0 or args.keep_going) else 1


def cmd_verify(args) -> int:
    with open(args.phases, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "psi" not in obj:
        raise QspfError(f"{args.phases}: not a phases file (need a psi array)")
    psi = PhaseFactors(np.asarray(obj["psi"], dtype=np.float64))
    target = load_target(args.target)
    if psi.degree_half != target.degree_half:
        raise QspfError(
            f"phases have d={psi.degree_half} but target has d={target.degree_half}"
        )
    residual = direct_residual(psi, target)
    print(json.dumps({"residual": residual, "tol": args.tol,
                      "ok": bool(residual <= args.tol)}))
    return 0 if residual <= args.tol else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_target_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", choices=("random", "hamsim", "file"), default="random")
    p.add_argument("--degree", type=int, default=None, help="d for random targets")
    p.add_argument("--inf-norm", type=float, default=0.5, dest="inf_norm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=None, help="hamsim evolution time")
    p.add_argument("--scale", type=float, default=0.999)
    p.add_argument("--eps0", type=float, default=1e-15)
    p.add_argument("--input", default=None, help="target JSON for --target file")
    p.add_argument("--eta", type=float, default=None,
                   help="override eta (default: 1 - measured sup-norm)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qspf",
                                 description="QSP phase-factor solvers (even targets)")
    ap.add_argument("--version", action="version", version=f"qspf {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one target, print JSON phases")
    ps.add_argument("--method", choices=METHODS, default="hc")
    _add_target_flags(ps)
    ps.add_argument("--tol", type=float, default=1e-12)
    ps.add_argument("--max-iter", type=int, default=500, dest="max_iter")
    ps.add_argument("--output", default=None, help="write JSON here instead of stdout")
    ps.set_defaults(func=cmd_solve)

    pb = sub.add_parser("bench", help="time a method x size grid, write CSV")
    pb.add_argument("--methods", required=True, help="comma list, e.g. hc,ffpi")
    pb.add_argument("--target", choices=("random", "hamsim"), default="random")
    pb.add_argument("--degrees", default=None, help="comma list of d (random)")
    pb.add_argument("--taus", default=None, help="comma list of tau (hamsim)")
    pb.add_argument("--inf-norm", type=float, default=0.5, dest="inf_norm")
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--scale", type=float, default=0.999)
    pb.add_argument("--eps0", type=float, default=1e-15)
    pb.add_argument("--eta", type=float, default=None)
    pb.add_argument("--tol", type=float, default=1e-12)
    pb.add_argument("--output", required=True, help="CSV path")
    pb.add_argument("--force", action="store_true",
                    help="truncate an existing/foreign CSV instead of appending")
    pb.add_argument("--keep-going", action="store_true", dest="keep_going",
                    help="skip failed cells instead of aborting")
    pb.set_defaults(func=cmd_bench)

    pv = sub.add_parser("verify", help="recompute a residual certificate")
    pv.add_argument("--phases", required=True, help="phases JSON (psi array)")
    pv.add_argument("--target", required=True, help="target JSON")
    pv.add_argument("--tol", type=float, default=1e-10)
    pv.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        thread_cap()  # a bad QSPF_THREADS is a usage error, same class as bad flags
    except QspfError as exc:
        print(json.dumps({"error": "UsageError", "message": str(exc)}), file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SolverError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if exc.report is not None:
            payload["iterations"] = exc.report.iterations
            payload["warnings"] = exc.report.warnings
        print(json.dumps(payload), file=sys.stderr)
        return 1
    except QspfError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
