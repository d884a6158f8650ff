"""Command-line interface: ``carascale generate | solve | bench | verify``.

Exit codes: 0 success, 1 error (I/O, numerical breakdown), 2 invalid
arguments, 3 undetermined, 4 bound violation in a bench run, 5 failed
verification.
"""

import argparse
import json
import logging
import sys

import numpy as np

from . import bench
from .caratheodory import NumericalBreakdown
from .fileio import FormatError, fmt, read_instance, read_vector, write_instance, write_matrix
from .instances import generate
from .procedures import ProcedureKind
from .rescaling import DUAL_STRICT, PRIMAL_STRICT, SolverConfig, solve, verify_certificate

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_UNDETERMINED, EXIT_VIOLATION, EXIT_VERIFY_FAIL = 0, 1, 2, 3, 4, 5

PROCEDURES = [p.value for p in ProcedureKind]


def parse_int_list(tokens):
    """``["1..3", "7,9"]`` -> ``[1, 2, 3, 7, 9]``."""
    out = []
    for tok in tokens:
        for part in tok.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    return out


def cmd_generate(args, parser):
    if not 1 <= args.m < args.n:
        parser.error(f"need 1 <= m < n (got n={args.n}, m={args.m})")
    if not 0 < args.hardness <= 1:
        parser.error("--hardness must lie in (0, 1]")
    inst = generate(args.kind, args.n, args.m, args.seed, args.hardness)
    try:
        write_instance(args.output, inst)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_solve(args, parser):
    try:
        inst = read_instance(args.instance)
    except (OSError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    cfg = SolverConfig(procedure=ProcedureKind(args.procedure), max_rounds=args.max_rounds,
                       per_round_budget=args.budget)
    try:
        out = solve(inst, cfg)
    except NumericalBreakdown as exc:
        report = {"result": "breakdown", "message": str(exc)}
        print(json.dumps(report) if args.format == "json" else f"result: breakdown\n{exc}")
        return EXIT_ERROR
    report = {
        "result": out.status,
        "procedure": cfg.procedure.value,
        "n": inst.n,
        "m": inst.m,
        "rounds": out.rounds,
        "rescalings": out.rescalings,
        "iterations": sum(rt.iterations for rt in out.trace),
        "max_support": max((rt.max_support for rt in out.trace), default=0),
    }
    if out.y is not None:
        ver = verify_certificate(inst, out)
        report["verified"] = ver.passed
        report["membership_residual"] = ver.membership_residual
        report["min_entry"] = ver.min_entry
        report["y"] = out.y.tolist()
        if args.solution_out:
            try:
                write_matrix(args.solution_out, out.y)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_ERROR
    if args.format == "json":
        print(json.dumps(report))
    else:
        for key, val in report.items():
            if key == "y":
                val = " ".join(fmt(v) for v in val)
            print(f"{key}: {val}")
    if out.status in (PRIMAL_STRICT, DUAL_STRICT):
        return EXIT_OK if report["verified"] else EXIT_ERROR
    return EXIT_UNDETERMINED


def cmd_bench(args, parser):
    try:
        seeds = parse_int_list(args.seeds)
        ns = parse_int_list(args.n)
        ms = parse_int_list(args.m)
    except ValueError as exc:
        parser.error(str(exc))
    procs = [p for tok in args.procedures for p in tok.split(",") if p]
    if not seeds:
        parser.error("empty seed list")
    if not ns or not ms or not procs:
        parser.error("suite needs at least one n, m and procedure")
    bad = [p for p in procs if p not in PROCEDURES]
    if bad:
        parser.error(f"unknown procedures {bad}; choose from {PROCEDURES}")
    try:
        tasks = bench.make_tasks(ns, ms, seeds, procs, args.kinds, args.max_rounds, args.hardness)
    except ValueError as exc:
        parser.error(str(exc))
    results = bench.run_bench(tasks, args.workers)
    try:
        if args.output == "-":
            bench.write_csv(results, sys.stdout)
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                bench.write_csv(results, fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(bench.summarize(results), file=sys.stderr)
    violations = [(r.record.instance_id, r.record.procedure, v) for r in results for v in r.violations]
    for iid, proc, v in violations:
        print(f"VIOLATION {iid} {proc}: {v}", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_verify(args, parser):
    try:
        inst = read_instance(args.instance)
        y = read_vector(args.solution)
    except (OSError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if y.size != inst.n:
        print(f"error: solution has {y.size} entries, instance has n={inst.n}", file=sys.stderr)
        return EXIT_ERROR
    side = "dual" if args.dual else "primal"
    rep = verify_certificate(inst, y, side=side)
    print(rep.describe())
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="carascale", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random instance with a feasibility witness")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=["primal", "dual"], default="primal")
    g.add_argument("--hardness", type=float, default=1.0,
                   help="factor applied to the smallest witness entry (1 = default conditioning)")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(parser=g, func=cmd_generate)

    s = sub.add_parser("solve", help="run the projection-and-rescaling driver on an instance")
    s.add_argument("instance")
    s.add_argument("--procedure", choices=PROCEDURES, default="lsvn")
    s.add_argument("--max-rounds", type=int, default=200)
    s.add_argument("--budget", type=int, default=None,
                   help="iteration budget per basic-procedure run (default 9(m+1)^2 n)")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--solution-out", help="write the solution vector as a prmat file")
    s.set_defaults(parser=s, func=cmd_solve)

    b = sub.add_parser("bench", help="benchmark procedures over a generated suite, CSV out")
    b.add_argument("--n", nargs="+", required=True)
    b.add_argument("--m", nargs="+", required=True)
    b.add_argument("--seeds", nargs="+", required=True, help="e.g. 1..10 or 1,2,3")
    b.add_argument("--procedures", nargs="+", default=["lsvn", "baseline_vn"])
    b.add_argument("--kinds", nargs="+", choices=["primal", "dual"], default=["primal"])
    b.add_argument("--max-rounds", type=int, default=200)
    b.add_argument("--hardness", type=float, default=1.0)
    b.add_argument("--workers", type=int, default=None,
                   help=f"parallel workers (default ${bench.THREADS_ENV} or 1)")
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(parser=b, func=cmd_bench)

    v = sub.add_parser("verify", help="check a solution vector against an instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--dual", action="store_true", help="check membership in L^perp instead of L")
    v.set_defaults(parser=v, func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args, args.parser)


if __name__ == "__main__":
    sys.exit(main())
