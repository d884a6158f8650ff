"""Benchmark harness: one CSV row per (instance, procedure) solve.

Every basic-procedure run of a limited-support scheme is checked against
the iteration bound ``9 (m+1)^2 n`` and the support bound ``m + 1``, where
``n`` and ``m`` are the dimensions of the subspace that run worked on (the
dual side works on L^perp, of dimension ``n - m``).
"""

import csv
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from .caratheodory import NumericalBreakdown
from .instances import generate
from .procedures import ProcedureKind, iteration_bound
from .rescaling import BREAKDOWN, SolverConfig, solve, verify_certificate

log = logging.getLogger(__name__)

THREADS_ENV = "CARASCALE_THREADS"


@dataclass
class BenchRecord:
    instance_id: str
    procedure: str
    n: int
    m: int
    iterations: int
    max_support: int
    rescalings: int
    counted_ops: int
    wall_nanoseconds: int
    result_tag: str

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_row(cls, row):
        kw = {}
        for f in fields(cls):
            kw[f.name] = int(row[f.name]) if f.type in (int, "int") else row[f.name]
        return cls(**kw)


@dataclass
class BenchTask:
    kind: str
    n: int
    m: int
    seed: int
    procedure: str
    max_rounds: int = 200
    hardness: float = 1.0

    @property
    def instance_id(self):
        return f"{self.kind}-n{self.n}-m{self.m}-s{self.seed}"


@dataclass
class BenchResult:
    record: BenchRecord
    violations: list
    verified: bool
    mirr_calls: int
    mirr_ops: int
    support_excess: int  # basic runs whose support exceeded m + 1
    decay_violations: int  # iterates with |z_t|^2 > (1 + 1e-9) / t
    max_iteration_ratio: float  # max over runs of iterations / 9 (m+1)^2 n


def run_task(task):
    inst = generate(task.kind, task.n, task.m, task.seed, task.hardness)
    proc = ProcedureKind(task.procedure)
    cfg = SolverConfig(procedure=proc, max_rounds=task.max_rounds)
    t0 = time.perf_counter_ns()
    violations = []
    try:
        out = solve(inst, cfg)
        tag = out.status
        trace, rescalings = out.trace, out.rescalings
    except NumericalBreakdown as exc:
        log.warning("%s/%s: %s", task.instance_id, proc.value, exc)
        tag, trace, rescalings, out = BREAKDOWN, [], 0, None
    wall = time.perf_counter_ns() - t0
    for rt in trace if proc.limited else ():
        bound = iteration_bound(inst.n, rt.m)
        if rt.iterations > bound:
            violations.append(f"round {rt.round} {rt.side}: {rt.iterations} iterations "
                              f"> bound {bound}")
        if rt.max_support > rt.m + 1:
            violations.append(f"round {rt.round} {rt.side}: support {rt.max_support} > {rt.m + 1}")
    verified = out is not None and out.y is not None and verify_certificate(inst, out).passed
    if out is not None and out.y is not None and not verified:
        violations.append("returned solution fails verification")
    primal = [rt.max_support for rt in trace if rt.side == "primal"]
    rec = BenchRecord(
        instance_id=task.instance_id,
        procedure=proc.value,
        n=inst.n,
        m=inst.m,
        iterations=sum(rt.iterations for rt in trace),
        max_support=max(primal, default=0),
        rescalings=rescalings,
        counted_ops=sum(rt.counted_ops for rt in trace),
        wall_nanoseconds=wall,
        result_tag=tag,
    )
    return BenchResult(
        rec, violations, verified,
        mirr_calls=sum(rt.mirr_calls for rt in trace),
        mirr_ops=sum(rt.mirr_ops for rt in trace),
        support_excess=sum(rt.max_support > rt.m + 1 for rt in trace),
        decay_violations=sum(rt.decay_violations for rt in trace),
        max_iteration_ratio=max((rt.iterations / iteration_bound(inst.n, rt.m) for rt in trace),
                                default=0.0),
    )


def make_tasks(ns, ms, seeds, procedures, kinds=("primal",), max_rounds=200, hardness=1.0):
    tasks = []
    for kind in kinds:
        for n in ns:
            for m in ms:
                if not 1 <= m < n:
                    raise ValueError(f"invalid dimensions n={n}, m={m}")
                for seed in seeds:
                    for p in procedures:
                        tasks.append(BenchTask(kind, n, m, seed, ProcedureKind(p).value,
                                               max_rounds, hardness))
    return tasks


def default_workers():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_bench(tasks, workers=None):
    """Run all tasks; results come back sorted by (instance_id, procedure)."""
    workers = workers or default_workers()
    if workers == 1 or len(tasks) < 2:
        results = [run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_task, tasks, chunksize=4))
    results.sort(key=lambda r: (r.record.instance_id, r.record.procedure))
    return results


def write_csv(results, fh):
    w = csv.DictWriter(fh, fieldnames=BenchRecord.columns(), lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(asdict(r.record))


def read_csv(fh):
    return [BenchRecord.from_row(row) for row in csv.DictReader(fh)]


def summarize(results):
    by_proc = {}
    for r in results:
        s = by_proc.setdefault(r.record.procedure, {"runs": 0, "iterations": 0, "max_support": 0,
                                                    "violations": 0, "tags": {}})
        s["runs"] += 1
        s["iterations"] += r.record.iterations
        s["max_support"] = max(s["max_support"], r.record.max_support)
        s["violations"] += len(r.violations)
        s["tags"][r.record.result_tag] = s["tags"].get(r.record.result_tag, 0) + 1
    lines = []
    for p in sorted(by_proc):
        s = by_proc[p]
        tags = ", ".join(f"{k}={v}" for k, v in sorted(s["tags"].items()))
        lines.append(f"{p:>20}: runs={s['runs']} mean_iterations={s['iterations'] / s['runs']:.1f} "
                     f"max_support={s['max_support']} violations={s['violations']} [{tags}]")
    return "\n".join(lines)
