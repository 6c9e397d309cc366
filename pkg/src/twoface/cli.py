"""Command-line front end.

Exit codes: 0 solved (or proven infeasible), 1 nothing found within the
retry cap, 2 bad input, 3 unverified answer after the retry cap, 4 internal
invariant violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import GaloisRing, extract_coeffs_mod2k, ring_evaluator
from .errors import InstanceError, InvariantViolation, ProbabilisticFailure
from .graph_model import dual_axis, load_ab_instance, load_instance
from .system import config_system, run_checks, target_configuration

EXIT_OK, EXIT_NOT_FOUND, EXIT_INPUT, EXIT_PROBABILISTIC, EXIT_INVARIANT = 0, 1, 2, 3, 4
JOBS_ENV = "TWOFACE_JOBS"


def default_jobs() -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        return max(1, int(env))
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _read(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path} is not valid JSON: {exc}") from None


# -- commands -------------------------------------------------------------------------

def cmd_solve(args) -> tuple[int, dict, str]:
    from .solver import solve

    g, layout = load_instance(_read(args.input), require_odd=True)
    rep = solve(g, layout, seed=args.seed, trials=args.trials, modulus_bits=args.modulus_bits,
                jobs=args.jobs)
    doc = {"command": "solve", "report": rep.as_dict(g.names)}
    if args.dump_matrices:
        doc["matrices"] = config_system(layout.k1, layout.k2).as_dict()
    code = EXIT_OK if rep.status in ("solved", "infeasible") else EXIT_NOT_FOUND
    return code, doc, _summary(rep, g.names)


def cmd_solve_ab(args) -> tuple[int, dict, str]:
    from .solver import solve_ab

    g, q = load_ab_instance(_read(args.input))
    rep = solve_ab(g, q, seed=args.seed, trials=args.trials, jobs=args.jobs)
    doc = {"command": "solve-ab", "report": rep.as_dict(g.names)}
    code = EXIT_OK if rep.status == "solved" else EXIT_NOT_FOUND
    return code, doc, _summary(rep, g.names)


def cmd_oracle(args) -> tuple[int, dict, str]:
    from .oracle import shortest_disjoint_paths
    from .solver import ab_pairings

    raw = _read(args.input)
    if "A" in raw:
        g, q = load_ab_instance(raw)
        best, optima = float("inf"), []
        for pairing in ab_pairings(g, q):
            w, sols = shortest_disjoint_paths(g, pairing)
            if w < best:
                best, optima = w, list(sols)
            elif w == best and sols:
                optima += sols
        paths = optima[0].vertices_plain(g) if optima else []
        count = len(optima)
    else:
        g, layout = load_instance(raw, require_odd=False)
        best, sols = shortest_disjoint_paths(g, layout.pairs)
        paths = sols[0].vertices(g) if sols else []
        count = len(sols)
    found = best != float("inf")
    doc = {
        "command": "oracle",
        "weight": int(best) if found else None,
        "optimal_count": count,
        "paths": [[g.names[v] for v in p] for p in paths],
    }
    line = f"optimum {int(best)}" if found else "no disjoint paths"
    return EXIT_OK, doc, line


def cmd_verify_matrices(args) -> tuple[int, dict, str]:
    if args.k1 % 2 == 0 or args.k2 % 2 == 0 or args.k1 < 1 or args.k2 < 1:
        raise InstanceError("k1 and k2 must be positive and odd")
    res = run_checks(args.k1, args.k2)
    doc = {"command": "verify-matrices", "result": res}
    if args.dump_matrices:
        doc["matrices"] = config_system(args.k1, args.k2).as_dict()
    lines = [f"k1={args.k1} k2={args.k2} dim={res['dimension']} det={res['det']}"]
    lines.append(f"triangular witness: {res['witness_order']}")
    lines += [f"  {c['name']}: {'pass' if c['passed'] else 'FAIL'}" for c in res["checks"]]
    return EXIT_OK, doc, "\n".join(lines)


def cmd_extract_demo(args) -> tuple[int, dict, str]:
    rng = np.random.default_rng(args.seed)
    ring = GaloisRing(args.m, args.c)
    d = args.degree
    coeffs = {(i, j): int(rng.integers(0, 1 << 20)) for i in range(d + 1) for j in range(d + 1)
              if rng.random() < 0.5}
    table = extract_coeffs_mod2k(ring_evaluator(coeffs, ring), d, ring)
    want = np.zeros((d + 1, d + 1), dtype=np.int64)
    for (i, j), c in coeffs.items():
        want[i, j] = c % ring.mod
    ok = bool(np.array_equal(table, want))
    doc = {"command": "extract-demo", "m": args.m, "c": args.c, "degree": d, "seed": args.seed,
           "terms": len(coeffs), "exact": ok, "coefficients": table.tolist()}
    return (EXIT_OK if ok else EXIT_INVARIANT), doc, f"{len(coeffs)} coefficients recovered mod 2^{args.c}: {ok}"


def cmd_describe(args) -> tuple[int, dict, str]:
    g, layout = load_instance(_read(args.input), require_odd=True)
    axis = dual_axis(g, layout)
    P = target_configuration(layout, axis)
    doc = {"command": "describe", "target": P.as_dict(), "axis_edges": sorted(axis.edges),
           "k1": layout.k1, "k2": layout.k2, "n": g.n}
    return EXIT_OK, doc, P.describe()


def _summary(rep, names) -> str:
    if rep.status == "solved":
        lines = [f"weight {rep.weight} after {rep.trials} trial(s)"]
        lines += ["  " + " - ".join(str(names[v]) for v in p) for p in rep.paths]
        return "\n".join(lines)
    return f"{rep.status}: {rep.detail}"


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twoface", description="Shortest disjoint paths with terminals on two faces.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, solver=True):
        p.add_argument("--output", "-o", help="write the JSON report here")
        if solver:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--trials", type=int, default=16, help="retry cap")
            p.add_argument("--jobs", type=int, default=None,
                           help=f"worker processes (default ${JOBS_ENV} or available CPUs)")

    p = sub.add_parser("solve", help="odd two-face shortest disjoint paths")
    p.add_argument("input")
    common(p)
    p.add_argument("--modulus-bits", type=int, default=None)
    p.add_argument("--dump-matrices", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solve-ab", help="(A+B, q) shortest disjoint paths on a general graph")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_solve_ab)

    p = sub.add_parser("oracle", help="brute-force optimum for a small instance")
    p.add_argument("input")
    common(p, solver=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-matrices", help="build M, L, F and run the structural checks")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--dump-matrices", action="store_true")
    common(p, solver=False)
    p.set_defaults(func=cmd_verify_matrices)

    p = sub.add_parser("extract-demo", help="coefficient recovery by character sums over a Galois ring")
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--c", type=int, default=3)
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    common(p, solver=False)
    p.set_defaults(func=cmd_extract_demo)

    p = sub.add_parser("describe", help="show the target configuration of an instance")
    p.add_argument("input")
    common(p, solver=False)
    p.set_defaults(func=cmd_describe)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 0) is None:
        args.jobs = default_jobs()
    start = time.perf_counter()
    try:
        code, doc, summary = args.func(args)
    except (InstanceError, ValueError) as exc:
        code = EXIT_INPUT
        doc = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "code", None):
            doc["code"] = exc.code
        summary = f"input error: {exc}"
    except ProbabilisticFailure as exc:
        code, doc, summary = EXIT_PROBABILISTIC, {"command": args.command, "error": "ProbabilisticFailure",
                                                   "message": str(exc)}, f"failed: {exc}"
    except InvariantViolation as exc:
        code, doc, summary = EXIT_INVARIANT, {"command": args.command, "error": "InvariantViolation",
                                               "message": str(exc)}, f"invariant violated: {exc}"
    doc["exit_code"] = code
    doc["version"] = __version__
    if args.output:
        Path(args.output).write_text(dumps(doc))
    else:
        sys.stdout.write(dumps(doc))
    stream = sys.stderr if not args.output else sys.stdout
    print(summary, file=stream)
    print(f"elapsed {time.perf_counter() - start:.2f}s", file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
