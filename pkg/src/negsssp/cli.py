"""Command line: solve, gen, verify, bench, inspect-reducer.

Vertex ids on the command line and in reports are 1-based like the DIMACS
files; arc ids are 0-based positions of the ``a`` lines. Reports are JSON
on stdout. Exit codes: 0 ok, 1 negative cycle, 2 input error, 3 internal
verification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .baselines import bellman_ford
from .dimacs import parse_dimacs, write_dimacs
from .exceptions import GraphError, NegativeCycleError, RetryableFailure, VerificationError
from .generate import MODES, InstanceSpec, generate
from .graph import Walk, restrict_negatives
from .reducer import bootstrap_reducer, dump_reducer
from .results import SolveResult, verify
from .solver import SolverConfig, solve
from .validation import check_random_state

log = logging.getLogger("negsssp")

FORMAT_VERSION = 1
EXIT_OK, EXIT_CYCLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
CONFIG_ENV = "NEGSSSP_CONFIG"

# bench suites: (mode, n, m, negatives or None, W); seeds are 0..K-1
SUITES = {
    "tiny": [("uniform", 32, 128, None, 16), ("shifted", 32, 128, None, 16),
             ("planted", 32, 128, None, 16)],
    "small": [("shifted", 500, 2000, None, 16), ("shifted", 1000, 4000, 100, 16)],
    "smoke": [("shifted", 5000, 40000, 800, 16)],
}


class InputError(Exception):
    pass


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_graph(path):
    try:
        return parse_dimacs(_read_text(path))
    except GraphError as e:
        raise InputError(f"{path}: {e}") from None


def _config_values(path):
    """A JSON object or ``key=value`` lines."""
    text = _read_text(path)
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as e:
            raise InputError(f"{path}: {e}") from None
    values = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            key, sep, val = line.partition("=")
            if not sep:
                raise InputError(f"{path}: expected key=value, got {line!r}")
            values[key.strip()] = val.strip()
    return values


def build_config(pairs=(), seed=None, path=None) -> SolverConfig:
    """Defaults, then the config file (``--config-file`` or the environment), then ``k=v`` pairs."""
    values = {}
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        values.update(_config_values(path))
    for pair in pairs:
        key, sep, val = pair.partition("=")
        if not sep:
            raise InputError(f"--config expects key=value, got {pair!r}")
        values[key.strip()] = val.strip()
    if seed is not None:
        values["seed"] = seed
    try:
        return SolverConfig.from_mapping(values)
    except (TypeError, ValueError) as e:
        raise InputError(f"bad config: {e}") from None


def report_of(res: SolveResult, baseline="auto") -> dict:
    cycle = res.cycle
    return {
        "format_version": FORMAT_VERSION,
        "status": "negative_cycle" if cycle is not None else "ok",
        "baseline": baseline,
        "n": res.graph.n,
        "m": res.graph.m,
        "source": res.source + 1,
        "dist": res.dist,
        "parent": res.parent,
        "cycle": None if cycle is None else [v + 1 for v in cycle.vertices()[:-1]],
        "cycle_arcs": None if cycle is None else list(cycle.arcs),
        "reports": [r.as_dict() for r in res.reports],
        "counters": res.counters,
    }


def _emit(obj, out=None):
    text = json.dumps(obj, indent=None, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _error(msg):
    return {"format_version": FORMAT_VERSION, "status": "error", "error": msg}


def _source(G, sid):
    if not 1 <= sid <= G.n:
        raise InputError(f"source {sid} out of range 1..{G.n}")
    return sid - 1


def cmd_solve(args):
    G = _load_graph(args.input)
    s = _source(G, args.source)
    if args.baseline == "bf":
        res = bellman_ford(G, s)
        if not verify(G, res):
            raise VerificationError("baseline output failed verification")
    else:
        cfg = build_config(args.config, args.seed, args.config_file)
        res = solve(G, s, cfg)
    rep = report_of(res, args.baseline)
    if args.no_timing:
        rep["counters"].pop("seconds", None)
        for r in rep["reports"]:
            r.pop("seconds", None)
    _emit(rep)
    return EXIT_CYCLE if res.has_negative_cycle else EXIT_OK


def cmd_gen(args):
    try:
        spec = InstanceSpec(args.mode, args.n, args.m, args.neg_fraction, args.W, args.seed,
                            args.negatives)
    except ValueError as e:
        raise InputError(str(e)) from None
    G = generate(spec)
    text = write_dimacs(G, comments=[f"negsssp gen mode={spec.mode} n={spec.n} m={spec.m} "
                                     f"seed={spec.seed}"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _result_from_report(G, rep):
    try:
        if rep.get("format_version") != FORMAT_VERSION:
            raise InputError("unsupported report format_version")
        s = rep["source"] - 1
        if rep["status"] == "negative_cycle":
            arcs = rep["cycle_arcs"]
            if not arcs or any(not isinstance(a, int) or not 0 <= a < G.m for a in arcs):
                return None
            try:
                cyc = Walk(G, arcs, start=G.tails[arcs[0]])
            except ValueError:
                return None
            return SolveResult(G, s, cycle=cyc)
        if rep["status"] == "ok":
            return SolveResult(G, s, dist=rep["dist"], parent=rep["parent"])
        raise InputError(f"cannot verify a report with status {rep['status']!r}")
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed report: {e}") from None


def cmd_verify(args):
    G = _load_graph(args.input)
    try:
        rep = json.loads(_read_text(args.result))
    except json.JSONDecodeError as e:
        raise InputError(f"{args.result}: {e}") from None
    res = _result_from_report(G, rep)
    ok = res is not None and verify(G, res)
    _emit({"format_version": FORMAT_VERSION, "verified": ok, "status": rep.get("status")})
    if not ok:
        return EXIT_INTERNAL
    return EXIT_CYCLE if res.has_negative_cycle else EXIT_OK


def _bench_one(task):
    (mode, n, m, negatives, W), seed, with_bf = task
    G = generate(InstanceSpec(mode, n, m, W=W, seed=seed, negatives=negatives))
    t0 = time.perf_counter()
    res = solve(G, 0, SolverConfig(seed=seed))
    row = {"mode": mode, "n": n, "m": m, "k": G.k, "seed": seed,
           "status": "negative_cycle" if res.has_negative_cycle else "ok",
           "seconds": time.perf_counter() - t0, "counters": res.counters,
           "iterations": len(res.reports)}
    if with_bf:
        t0 = time.perf_counter()
        bf = bellman_ford(G, 0)
        row["bf_seconds"] = time.perf_counter() - t0
        row["agrees"] = (bf.has_negative_cycle == res.has_negative_cycle
                         and (res.has_negative_cycle or bf.dist == res.dist))
    return row


def cmd_bench(args):
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    if args.seeds < 1 or args.jobs < 1:
        raise InputError("--seeds and --jobs must be positive")
    tasks = [(inst, seed, args.baseline) for inst in SUITES[args.suite]
             for seed in range(args.seeds)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, tasks))
    else:
        rows = [_bench_one(t) for t in tasks]
    _emit({"format_version": FORMAT_VERSION, "suite": args.suite, "seeds": args.seeds,
           "runs": rows}, args.out)
    if args.out:
        print(json.dumps({"suite": args.suite, "runs": len(rows), "out": args.out}))
    return EXIT_OK


def cmd_inspect_reducer(args):
    G = _load_graph(args.input)
    if args.u_set:
        try:
            U = {int(x) - 1 for part in args.u_set for x in part.split(",") if x}
        except ValueError:
            raise InputError("--u-set expects vertex ids") from None
    else:
        U = set(G.negative_vertices)
    if not U <= G.negative_vertices:
        bad = sorted(v + 1 for v in U - G.negative_vertices)
        raise InputError(f"not negative vertices: {bad}")
    h = args.hops or max(1, len(U))
    GU = restrict_negatives(G, U)
    H = bootstrap_reducer(GU, U, h, check_random_state(args.seed))
    sys.stdout.write(dump_reducer(H))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="negsssp",
                                description="Negative-weight single-source shortest paths.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one DIMACS instance")
    s.add_argument("--input", required=True)
    s.add_argument("--source", type=int, required=True, help="1-based source vertex")
    s.add_argument("--baseline", choices=("bf", "auto"), default="auto")
    s.add_argument("--seed", type=int)
    s.add_argument("--config", nargs="*", default=[], metavar="K=V")
    s.add_argument("--config-file", help=f"JSON or key=value file (default: ${CONFIG_ENV})")
    s.add_argument("--no-timing", action="store_true",
                   help="drop wall-clock fields so reports are byte-comparable")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="write a seeded random instance")
    g.add_argument("--mode", choices=MODES + ("planted-cycle",), default="shifted")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--neg-fraction", type=float, default=0.25)
    g.add_argument("--W", type=int, default=16)
    g.add_argument("--negatives", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check a solve report against its instance")
    v.add_argument("--input", required=True)
    v.add_argument("--result", required=True)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a fixed benchmark suite")
    b.add_argument("--suite", required=True)
    b.add_argument("--seeds", type=int, default=1)
    b.add_argument("--out")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--baseline", action="store_true", help="also time Bellman-Ford")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("inspect-reducer", help="dump a bootstrapped reducer for G_U")
    r.add_argument("--input", required=True)
    r.add_argument("--u-set", nargs="*", default=[], help="1-based negative vertices")
    r.add_argument("--hops", type=int)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_inspect_reducer)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        _emit(_error(str(e)))
        return EXIT_INPUT
    except NegativeCycleError as e:
        # only reachable from inspect-reducer; solve reports cycles itself
        _emit({"format_version": FORMAT_VERSION, "status": "negative_cycle",
               "cycle_arcs": list(e.cycle.arcs)})
        return EXIT_CYCLE
    except (VerificationError, RetryableFailure) as e:
        log.error("internal failure: %s", e)
        _emit(_error(f"internal: {e}"))
        return EXIT_INTERNAL


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
