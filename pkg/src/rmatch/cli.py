"""Command-line front end.

Exit codes:

====  =========================================================
0     success; condition holds; trace replays
1     condition fails; trace does not replay
2     usage error
3     solver precondition violated (ConditionViolated)
4     no perfect matching (oracle says none, or builder failed)
5     oracle search budget exhausted
====  =========================================================
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import conditions, generators
from .constructive import solve, verify_solution_text
from .errors import BudgetExhausted, ConditionViolated, NoNearPerfectFound, RMatchError
from .fractional import analyze_cover, decompose_complete_multipartite, nu_star, perfect_fractional_matching, tau_star
from .hypergraph import format_edge, read_hypergraph
from .oracle import default_budget, max_matching

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_CONDITION = 3
EXIT_NO_PM = 4
EXIT_BUDGET = 5

SWEEP_VERSION = "rmatch-sweep v1"
SWEEP_COLUMNS = [
    "index", "seed", "family", "r", "n", "p", "edges",
    "main", "ko", "fractional_I0", "solver", "oracle_max", "oracle_perfect", "nu_star", "tau_star",
]
TIMING_COLUMNS = ["t_check", "t_solve", "t_oracle", "t_lp"]


def _q(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _sides(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "complete":
        h = generators.gen_complete(args.r, args.n)
    elif fam == "parity":
        h, _ = generators.gen_parity_sharpness(args.r, args.n)
    elif fam == "union-cover":
        h = generators.gen_union_cover(args.r, args.n, args.k)
    elif fam == "latin":
        if args.table:
            with open(args.table, encoding="utf-8") as fh:
                table = [[int(v) for v in line.split()] for line in fh if line.strip()]
            h = generators.gen_latin(args.n, table)
        else:
            h = generators.gen_latin(args.n, args.rule)
    else:
        h = generators.gen_random(args.r, args.n, args.p, args.seed)
    if not args.spec:
        h = type(h)(h.r, h.n, h.edges)
    sys.stdout.write(h.to_text())
    return EXIT_OK


def cmd_check(args) -> int:
    h = read_hypergraph(args.file)
    cond = args.condition
    if cond == "main":
        report = conditions.check_main_condition(h, args.strict, h.r - 1 if args.weak is None else args.weak)
    elif cond == "ko":
        report = conditions.check_ko_threshold(h)
    elif cond == "ituple":
        report = conditions.check_itupl_condition(h, _sides(args.I))
    elif cond == "fractional":
        report = conditions.check_fractional_condition(h, _sides(args.I), strict=args.strict_fractional)
    elif cond == "latin":
        report = conditions.check_latin_property(h)
    else:
        report = conditions.check_vertex_degree(h, Fraction(args.fraction))
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.holds else EXIT_FAILS


def cmd_match(args) -> int:
    h = read_hypergraph(args.file)
    try:
        sol = solve(h, args.budget)
    except ConditionViolated as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        if exc.report is not None:
            sys.stderr.write(exc.report.to_text())
        return EXIT_CONDITION
    except NoNearPerfectFound as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return EXIT_NO_PM
    sys.stdout.write(sol.to_text())
    return EXIT_OK


def cmd_oracle(args) -> int:
    h = read_hypergraph(args.file)
    res = max_matching(h, args.budget)
    print(f"size={res.max_matching_size} perfect={'yes' if res.perfect_exists else 'no'} nodes={res.nodes_explored}")
    for e in res.witness:
        print(f"EDGE {format_edge(e)}")
    return EXIT_OK if res.perfect_exists else EXIT_NO_PM


def cmd_lp(args) -> int:
    h = read_hypergraph(args.file)
    nu, matching = nu_star(h)
    tau, cover = tau_star(h)
    print(f"nu*={_q(nu)} tau*={_q(tau)} duality={'ok' if nu == tau else 'FAILED'}")
    if args.weights:
        sys.stdout.write("# matching\n" + matching.to_text() + "# cover\n" + cover.to_text())
    if args.I is None:
        return EXIT_OK if nu == tau else EXIT_FAILS
    subset = _sides(args.I)
    try:
        pfm = perfect_fractional_matching(h, subset)
    except ConditionViolated as exc:
        sys.stdout.write(exc.report.to_text())
        return EXIT_CONDITION
    print(f"perfect_fractional=yes total={_q(pfm.total)}")
    analysis = analyze_cover(h, cover, subset)
    print(f"cover_bound={_q(analysis.bound)} branch={analysis.branch} g[V]={_q(analysis.total)}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    for c, matching in enumerate(decompose_complete_multipartite(args.n, args.k)):
        print(f"MATCHING {c} " + " ".join(format_edge(t) for t in matching))
    return EXIT_OK


def cmd_verify_trace(args) -> int:
    h = read_hypergraph(args.file)
    with open(args.trace, encoding="utf-8") as fh:
        ok, reason = verify_solution_text(h, fh.read())
    print("REPLAY OK" if ok else f"REPLAY FAILED {reason}")
    return EXIT_OK if ok else EXIT_FAILS


def _int_range(text: str):
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def sweep_row(task) -> dict:
    """Evaluate one random instance; every column but the timings depends only on ``task``."""
    index, seed, r, n, p, budget = task
    h = generators.gen_random(r, n, p, seed)
    row = {"index": index, "seed": seed, "family": "random", "r": r, "n": n, "p": p, "edges": len(h)}
    t0 = time.perf_counter()
    main_ok = next(conditions.admissible_side_pairs(h), None) is not None
    row["main"] = "HOLDS" if main_ok else "FAILS"
    row["ko"] = "HOLDS" if conditions.check_ko_threshold(h).holds else "FAILS"
    row["fractional_I0"] = "HOLDS" if conditions.check_fractional_condition(h, [0]).holds else "FAILS"
    t1 = time.perf_counter()
    try:
        solve(h, budget)
        row["solver"] = "PM"
    except ConditionViolated:
        row["solver"] = "ConditionViolated"
    except NoNearPerfectFound:
        row["solver"] = "NoNearPerfect"
    t2 = time.perf_counter()
    try:
        res = max_matching(h, budget)
        row["oracle_max"] = res.max_matching_size
        row["oracle_perfect"] = "yes" if res.perfect_exists else "no"
    except BudgetExhausted as exc:
        row["oracle_max"] = f">={len(exc.best or [])}"
        row["oracle_perfect"] = "unknown"
    t3 = time.perf_counter()
    row["nu_star"] = _q(nu_star(h)[0])
    row["tau_star"] = _q(tau_star(h)[0])
    t4 = time.perf_counter()
    row.update(t_check=f"{t1 - t0:.6f}", t_solve=f"{t2 - t1:.6f}", t_oracle=f"{t3 - t2:.6f}", t_lp=f"{t4 - t3:.6f}")
    return row


def sweep(r, ns, ps, count, seed0, budget=None, jobs=1):
    tasks = []
    for n in ns:
        for p in ps:
            for _ in range(count):
                tasks.append((len(tasks), seed0 + len(tasks), r, n, p, budget))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_row, tasks))
    return [sweep_row(t) for t in tasks]


def cmd_sweep(args) -> int:
    rows = sweep(args.r, _int_range(args.n_range), [float(v) for v in args.p_range.split(",")],
                 args.count, args.seed0, args.budget, args.jobs)
    columns = SWEEP_COLUMNS + (TIMING_COLUMNS if args.timing else [])
    buf = io.StringIO()
    buf.write(f"# {SWEEP_VERSION}\n")
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmatch", description="Perfect matchings in r-partite r-graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance in the text format")
    p.add_argument("family", choices=["complete", "parity", "union-cover", "latin", "random"])
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1, help="X-set size for union-cover")
    p.add_argument("--rule", default="cyclic", choices=["cyclic"])
    p.add_argument("--table", help="file with an explicit Latin square, one row per line")
    p.add_argument("--p", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spec", action=argparse.BooleanOptionalAction, default=True,
                   help="write the generator parameters as a comment header (default on)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="check a degree condition")
    p.add_argument("file")
    p.add_argument("--condition", required=True, choices=["main", "ko", "ituple", "fractional", "latin", "vertex"])
    p.add_argument("--strict", type=int, default=0, help="strict side for main")
    p.add_argument("--weak", type=int, default=None, help="weak side for main (default r-1)")
    p.add_argument("--I", default="0", help="comma-separated side subset")
    p.add_argument("--strict-fractional", action="store_true", help="require theta + zeta > 1")
    p.add_argument("--fraction", default=str(conditions.DEFAULT_VERTEX_FRACTION))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("match", help="constructive perfect matching with trace")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("oracle", help="exact maximum matching by search")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("lp", help="exact fractional matching and cover numbers")
    p.add_argument("file")
    p.add_argument("--I", default=None, help="side subset for the fractional theorem")
    p.add_argument("--weights", action="store_true")
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("decompose", help="perfect-matching decomposition of the complete k-partite k-graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify_trace", help="replay a match transcript")
    p.add_argument("file")
    p.add_argument("trace")
    p.set_defaults(func=cmd_verify_trace)

    p = sub.add_parser("sweep", help="CSV sweep over random instances")
    p.add_argument("--family", default="random", choices=["random"])
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--n-range", default="3-5", help="inclusive 'lo-hi' or comma list")
    p.add_argument("--p-range", default="0.9", help="comma list of edge probabilities")
    p.add_argument("--count", type=int, default=10, help="instances per (n, p) cell")
    p.add_argument("--seed0", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="append wall-time columns (breaks byte determinism)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is None and args.command in ("match", "oracle", "sweep"):
        args.budget = default_budget()
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RMatchError, ValueError, OSError) as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
