"""Command-line front end: solve, verify, random, bounds, sweep.

Exit codes: 0 success, 1 verification failure, 2 parse or dimension errors,
3 spectral-split failures (gap violation, not a graph), 4 solver failures
(no convergence, overlapping spectra).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
import time

import numpy as np

from .bounds import bounds_report, sweep_row
from .errors import (
    BadPair,
    BadParams,
    BlockdiagError,
    DimensionMismatch,
    GapViolation,
    NoConvergence,
    NotAGraph,
    NotHermitian,
    NotUnimodular,
    ParseError,
    RankMismatch,
    Singular,
    SpectraOverlap,
    ZeroLambda,
)
from .generate import family_problem, parse_family, random_subordinated_problem
from .model import parse_problem, serialize_problem
from .report import timed_report
from .riccati import newton_solve
from .subspace import SpectralSplit, angular_from_projection, spectral_projection

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_SPLIT = 3
EXIT_SOLVER = 4

_PARSE_ERRORS = (ParseError, DimensionMismatch, NotHermitian, NotUnimodular, BadParams, BadPair, ZeroLambda, ValueError)
_SPLIT_ERRORS = (GapViolation, NotAGraph, RankMismatch)
_SOLVER_ERRORS = (NoConvergence, SpectraOverlap, Singular)


def _default_tol() -> float:
    env = os.environ.get("BLOCKDIAG_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            pass
    return 1e-9


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_problem(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _split_from_args(args, problem) -> SpectralSplit | None:
    if getattr(args, "threshold", None) is not None:
        return SpectralSplit(threshold=args.threshold)
    if getattr(args, "indices", None):
        return SpectralSplit(indices=tuple(int(i) for i in args.indices.split(",")))
    return problem.sigma0


def _solve_x(problem, method: str, split):
    """Returns (x, provenance, gap)."""
    if method == "spectral":
        if split is None:
            raise ParseError("spectral method needs sigma0 in the file or --threshold/--indices")
        projectors = spectral_projection(problem.B, split, eigen=problem.eig_B if problem.hermitian else None)
        x = angular_from_projection(projectors.p, problem.n0)
        return x, "spectral", projectors.gap
    x, _ = newton_solve(problem)
    return x, "newton", None


def cmd_solve(args) -> int:
    problem = _load_problem(args.problem)
    split = _split_from_args(args, problem)
    start = time.perf_counter()
    x, provenance, gap = _solve_x(problem, args.method, split)
    report, _ = timed_report(problem, x, args.tol, provenance, split=split, gap=gap)
    report["wall_time_s"] = time.perf_counter() - start
    _emit(report, args.out)
    return EXIT_OK if report["verdicts"]["all_pass"] else EXIT_FAIL


def _load_x(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in X file: {exc.msg}", line=exc.lineno) from exc
    if isinstance(doc, dict):
        if "X" not in doc:
            raise ParseError("X file object must carry an X field", field="X")
        doc = doc["X"]
    if not isinstance(doc, list):
        raise ParseError("X must be a (list of lists) matrix", field="X")
    from .model import _parse_matrix

    rows = len(doc)
    cols = len(doc[0]) if rows and isinstance(doc[0], list) else 0
    if rows < 1 or cols < 1:
        raise ParseError("X must be a nonempty matrix", field="X")
    return _parse_matrix({"X": doc}, "X", (rows, cols))


def cmd_verify(args) -> int:
    problem = _load_problem(args.problem)
    x = _load_x(args.x_file)
    if x.shape != (problem.n1, problem.n0):
        raise DimensionMismatch(
            f"X must be {problem.n1} x {problem.n0}, got {x.shape[0]} x {x.shape[1]}"
        )
    report, analysis = timed_report(problem, x, args.tol, "file")
    _emit(report, args.out)
    ok = (
        analysis.reducing.reducing
        and analysis.riccati.strong_solution
        and report["verdicts"]["all_pass"]
    )
    return EXIT_OK if ok else EXIT_FAIL


def _random_one(params: tuple) -> tuple[str, str]:
    n0, n1, gap, coupling, seed, path = params
    problem = random_subordinated_problem(seed, n0, n1, gap, coupling)
    return path, serialize_problem(problem)


def cmd_random(args) -> int:
    if args.count < 1:
        raise BadParams("count must be at least 1")
    tasks = []
    for i in range(args.count):
        if args.count == 1:
            path = args.out
        else:
            base, ext = os.path.splitext(args.out or "problem.json")
            path = f"{base}.{i}{ext or '.json'}"
        tasks.append((args.n0, args.n1, args.gap, args.coupling_scale, args.seed + i, path))
    results = _map_maybe_parallel(_random_one, tasks, args.jobs)
    for path, text in results:
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def _map_maybe_parallel(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _fmt10(value) -> str:
    if value is None:
        return "-"
    return "%.10g" % value


def cmd_bounds(args) -> int:
    problem = _load_problem(args.problem)
    a_grid = [float(v) for v in args.a_grid.split(",")] if args.a_grid else [0.0, 0.5, 1.0, 2.0]
    lambdas = (
        [float(v) for v in args.resolvent_lambdas.split(",")]
        if args.resolvent_lambdas
        else (0.5, 1.0, 2.0, 5.0, 10.0, 100.0)
    )
    rep = bounds_report(problem, a_grid, resolvent_lambdas=lambdas, samples=args.lambda_samples)
    payload = {
        "schema": "blockdiag-bounds/1",
        "pairs": [
            {
                "a": pr.a,
                "b": pr.b if math.isfinite(pr.b) else None,
                "feasible": math.isfinite(pr.b),
                "certified": pr.certified,
                "margin": pr.margin,
            }
            for pr in rep.pairs
        ],
        "k": rep.k,
        "selected": None
        if rep.selected is None
        else {"a": rep.selected.a, "b": rep.selected.b},
        "resolvent_checks": [
            {
                "lambda": c.lam,
                "norm_resolvent": c.norm_resolvent,
                "norm_a_resolvent": c.norm_a_resolvent,
                "passed": c.passed,
            }
            for c in rep.resolvent_checks
        ],
        "shift_checks": [
            {"lambda": c.lam, "sigma_min": c.sigma_min, "passed": c.passed}
            for c in rep.shift_checks
        ],
        "davis_kahan": None
        if rep.davis_kahan is None
        else {
            "subordinated": rep.davis_kahan.subordinated,
            "sup_spec_a0": rep.davis_kahan.sup_spec_a0,
            "inf_spec_a1": rep.davis_kahan.inf_spec_a1,
            "proj_diff": rep.davis_kahan.proj_diff,
            "bound": rep.davis_kahan.bound,
            "x_norm": rep.davis_kahan.x_norm,
            "contractive": rep.davis_kahan.contractive,
            "bound_satisfied": rep.davis_kahan.bound_satisfied,
        },
    }
    _emit(payload, args.out)
    ok = all(pr.certified for pr in rep.pairs if math.isfinite(pr.b))
    ok = ok and all(c.passed for c in rep.resolvent_checks)
    ok = ok and all(c.passed for c in rep.shift_checks)
    dk = rep.davis_kahan
    if dk is not None and dk.subordinated:
        ok = ok and dk.bound_satisfied and dk.contractive
    return EXIT_OK if ok else EXIT_FAIL


def _sweep_one(params: tuple) -> dict:
    family, n, tol = params
    problem = family_problem(family, n)
    return sweep_row(problem, n, tol=tol)


def cmd_sweep(args) -> int:
    with open(args.family, "r", encoding="utf-8") as fh:
        family = parse_family(fh.read())
    sizes = [int(v) for v in args.sizes.split(",")]
    rows = _map_maybe_parallel(_sweep_one, [(family, n, args.tol) for n in sizes], args.jobs)
    rows.sort(key=lambda r: r["n"])

    header = f"{'n':>6} {'b(a) profile':>40} {'k':>14} {'|X|':>14} {'proj_diff':>14} {'max_resid':>14} {'pass':>5}"
    lines = [header]
    for row in rows:
        profile = " ".join(_fmt10(b) for _, b, _ in row["pairs"])
        lines.append(
            f"{row['n']:>6} {profile:>40} {_fmt10(row['k']):>14} {_fmt10(row['x_norm']):>14} "
            f"{_fmt10(row['proj_diff']):>14} {_fmt10(row['max_residual']):>14} "
            f"{str(bool(row['all_pass'])):>5}"
        )
    sys.stdout.write("\n".join(lines) + "\n")

    payload = {"schema": "blockdiag-sweep/1", "rows": rows}
    if args.out:
        _emit(payload, args.out)
    return EXIT_OK if all(r["all_pass"] for r in rows) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockdiag",
        description="Angular operators, Riccati residuals, and block diagonalizations "
        "for 2x2 block operator matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, tol=True):
        if tol:
            sp.add_argument("--tol", type=float, default=_default_tol(),
                            help="normalized residual tolerance (env BLOCKDIAG_TOL, default 1e-9)")
        sp.add_argument("--out", type=str, default=None, help="output path (default stdout)")

    sp = sub.add_parser("solve", help="compute X and verify the whole identity web")
    sp.add_argument("problem", help="problem JSON file")
    sp.add_argument("--method", choices=("spectral", "newton"), default="spectral")
    sp.add_argument("--threshold", type=float, default=None,
                    help="spectral split: select spectrum of B at or below this value")
    sp.add_argument("--indices", type=str, default=None,
                    help="spectral split: comma-separated indices into the ascending spectrum")
    add_common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="verify a given X against a problem")
    sp.add_argument("problem")
    sp.add_argument("x_file", help='JSON matrix or {"X": [[...]]}')
    add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("random", help="generate seeded subordinated random problems")
    sp.add_argument("--n0", type=int, required=True)
    sp.add_argument("--n1", type=int, required=True)
    sp.add_argument("--gap", type=float, default=1.0)
    sp.add_argument("--coupling-scale", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    add_common(sp, tol=False)
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("bounds", help="relative-bound profile and shift regularity probes")
    sp.add_argument("problem")
    sp.add_argument("--a-grid", type=str, default=None, help="comma-separated a values")
    sp.add_argument("--resolvent-lambdas", type=str, default=None)
    sp.add_argument("--lambda-samples", type=int, default=8)
    add_common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("sweep", help="verification sweep over growing truncations")
    sp.add_argument("family", help="family spec JSON file")
    sp.add_argument("--sizes", type=str, default="2,4,8,16")
    sp.add_argument("--jobs", type=int, default=1)
    add_common(sp)
    sp.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _SPLIT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPLIT
    except _SOLVER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BlockdiagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
