"""Command line driver: single checks and batch verification plans.

Every subcommand builds a :class:`Job` and runs it through the same check
registry used by ``run-plan``, so a plan file is just a list of the same
jobs.  ``--json`` output carries a top-level ``"schema": 1``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bundles, chern, reps, spheres
from .heegaard import normalize, parse_word
from .spheres import WeightPair

SCHEMA = 1


class PlanError(ValueError):
    """A malformed plan; the message names the offending location."""


@dataclass(frozen=True)
class Job:
    check: str
    weight: WeightPair | None = None
    n: tuple = ()
    s: int | None = None
    t: int | None = None
    N: int = 200
    p: float = reps.DEFAULT_P
    q: float = reps.DEFAULT_Q
    tol: float = 1e-10
    options: dict = field(default_factory=dict, hash=False, compare=False)

    def to_json(self) -> dict:
        out = {"check": self.check}
        if self.weight is not None:
            out["weight"] = self.weight.as_list()
        if self.n:
            out["n"] = list(self.n)
        for key in ("s", "t"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out.update(N=self.N, p=self.p, q=self.q, tol=self.tol)
        out.update(self.options)
        return out


def _checks_json(checks) -> tuple[bool, list]:
    return all(c.passed for c in checks), [c.to_json() for c in checks]


def _need_weight(job: Job) -> WeightPair:
    if job.weight is None:
        raise PlanError(f"check {job.check!r} needs a weight")
    return job.weight


def _s_values(job: Job, w: WeightPair) -> list[int]:
    return [job.s] if job.s is not None else list(range(w.abs_l))


def _t_values(job: Job, w: WeightPair) -> list[int]:
    return [job.t] if job.t is not None else list(range(w.k))


# -- checks ----------------------------------------------------------------------


def check_normalize(job: Job):
    word = job.options.get("word", "")
    result = str(normalize(parse_word(word)))
    expect = job.options.get("expect")
    passed = expect is None or result == expect
    return passed, {"word": word, "normal_form": result, **({"expected": expect} if expect else {})}


def check_power_formulas(job: Job):
    m_max = int(job.options.get("m_max", 6))
    failures = []
    for letter in ("a", "b"):
        for star_first in (True, False):
            for m in range(1, m_max + 1):
                for n in range(1, m_max + 1):
                    lhs, rhs = spheres.power_identity(letter, star_first, m, n)
                    if lhs != rhs:
                        failures.append({"letter": letter, "star_first": star_first, "m": m, "n": n})
    return not failures, {"cases": 4 * m_max * m_max, "failures": failures}


def check_sphere(job: Job):
    w = _need_weight(job)
    ok, rel = _checks_json(spheres.verify_sphere_relations(w))
    gens = spheres.make_generators(w)
    return ok, {"weight": w.as_list(), "C": str(gens.C), "relations": rel}


def check_gwa(job: Job):
    w = _need_weight(job)
    ok, out = _checks_json(spheres.gwa_verify(w))
    data = spheres.gwa_data(w)
    return ok, {
        "weight": w.as_list(),
        "sigma_A": str(data.sigma_A),
        "sigma_B": str(data.sigma_B),
        "a_tilde": str(data.a_tilde),
        "gwa": out,
    }


def check_strong_connection(job: Job):
    w = _need_weight(job)
    ns = job.n or tuple(range(-5, 6))
    ok, per_n = True, []
    for n in ns:
        T = bundles.strong_connection(w, n)
        passed, checks = _checks_json(bundles.verify_strong_connection(T, w, n))
        ok &= passed
        per_n.append({"n": n, "pairs": len(T), "checks": checks})
    lens_ok, lens = _checks_json(bundles.lens_relations(w) + bundles.quotient_check(w))
    return ok and lens_ok, {"weight": w.as_list(), "connection": per_n, "total_space": lens}


def check_idempotent(job: Job):
    w = _need_weight(job)
    ns = job.n or tuple(range(0, 5))
    ok, per_n = True, []
    for n in ns:
        entry = {"n": n}
        try:
            E = bundles.idempotent(w, n, verify=False)
            entry["size"] = E.size
            entry["coinvariant"] = E.entries_coinvariant(w)
            entry["idempotent"] = E.square() == E
        except bundles.ConnectionLimitExceeded as exc:
            entry["error"] = str(exc)
            entry["coinvariant"] = entry["idempotent"] = False
        ok &= entry["coinvariant"] and entry["idempotent"]
        per_n.append(entry)
    trace_max = int(job.options.get("trace_n_max", max(max(ns, default=0), 0)))
    traces = []
    for n in range(trace_max + 1):
        traced = bundles.ZPolynomial.from_element(bundles.idempotent_trace(w, n))
        recursed = bundles.g_recursion(w, n)
        same = traced == recursed
        ok &= same
        traces.append({"n": n, "trace": str(traced), "recursion": str(recursed), "equal": same})
    return ok, {"weight": w.as_list(), "idempotents": per_n, "traces": traces}


def check_chern(job: Job):
    w = _need_weight(job)
    ns = job.n or (1, 2, 3, 4)
    numeric = bool(job.options.get("numeric", False))
    ok, cells = True, []
    f_ok, f_checks = _checks_json(chern.f_vanishing_checks(w))
    for n in ns:
        for s in _s_values(job, w):
            value = chern.chern_number(w, n, s)
            cell = {"n": n, "s": s, "value": str(value)}
            if w.sign > 0:
                cell["expected"] = str(-n)
                cell["passed"] = value == -n
                ok &= cell["passed"]
            if numeric:
                cons = chern.chern_consistency(w, n, s, 0, job.N, job.p, job.q)
                cell["numeric"] = {k: cons[k] for k in ("numeric", "tail_bound", "delta", "passed")}
                ok &= cons["passed"]
            cells.append(cell)
    return ok and f_ok, {"weight": w.as_list(), "cells": cells, "f_vanishing": f_checks}


def _series_specs(job: Job, w: WeightPair):
    series = job.options.get("series")
    index = job.options.get("index")
    names = [series] if series else list(reps.SERIES)
    for name in names:
        bound = {"series1": w.abs_l, "series2": w.k, "circle": 1}[name]
        for i in [index] if index is not None else range(bound):
            yield reps.RepSpec(w, name, i, job.N, job.p, job.q)


def check_rep(job: Job):
    w = _need_weight(job)
    ok, rows = True, []
    for spec in _series_specs(job, w):
        res = reps.relation_residual(spec)
        worst = max(v["residual"] for v in res.values())
        passed = worst <= job.tol
        ok &= passed
        rows.append(
            {
                "series": spec.series,
                "index": spec.index,
                "max_residual": worst,
                "residuals": {k: v["residual"] for k, v in res.items()},
                "edge": {k: v["edge"] for k, v in res.items()},
                "passed": passed,
            }
        )
    point = reps.relation_residual(reps.RepSpec(w, "circle", 0, 1), reps.point_rep(w, np.exp(2j)))
    point_worst = max(v["residual"] for v in point.values())
    ok &= point_worst <= job.tol
    return ok, {"weight": w.as_list(), "N": job.N, "reps": rows, "point_rep_residual": point_worst}


def check_tau(job: Job):
    w = _need_weight(job)
    heads = job.options.get("heads", ["A", "B"])
    powers = job.options.get("powers", [1, 2])
    cpower = int(job.options.get("cpower", 0))
    ok, cells = True, []
    for s in _s_values(job, w):
        for t in _t_values(job, w):
            for head in heads:
                for power in powers:
                    partial, tail = reps.tau_numeric(w, s, t, head, power, cpower, job.N, job.p, job.q)
                    closed = chern.tau_symbolic(head, power, cpower, s, t, w)
                    value = closed.evaluate(job.p, job.q)
                    delta = abs(partial - value)
                    passed = delta <= tail + job.tol
                    ok &= passed
                    cells.append(
                        {
                            "s": s,
                            "t": t,
                            "head": head,
                            "power": power,
                            "cpower": cpower,
                            "partial": partial,
                            "closed_form": str(closed),
                            "closed_value": value,
                            "tail_bound": tail,
                            "delta": delta,
                            "passed": passed,
                        }
                    )
    return ok, {"weight": w.as_list(), "N": job.N, "cells": cells}


def check_summability(job: Job):
    w = _need_weight(job)
    ok, cells = True, []
    for s in _s_values(job, w):
        for t in _t_values(job, w):
            for x in job.options.get("elements", ["A", "B", "C"]):
                r = reps.summability_partial(w, s, t, x, job.N, job.p, job.q)
                passed = r["monotone"] and r["bounded"]
                ok &= passed
                cells.append(
                    {
                        "s": s,
                        "t": t,
                        "x": x,
                        "partial_sum": float(r["partial_sums"][-1]),
                        "bound": r["bound"],
                        "monotone": r["monotone"],
                        "bounded": r["bounded"],
                        "termwise_ok": r["termwise_ok"],
                        "passed": passed,
                    }
                )
    return ok, {"weight": w.as_list(), "N": job.N, "cells": cells}


def check_compactness(job: Job):
    w = _need_weight(job)
    ok, rows = True, []
    threshold = float(job.options.get("threshold", 1e-8))
    for spec in _series_specs(job, w):
        r = reps.toeplitz_compactness(spec, threshold)
        ok &= r["passed"]
        rows.append(
            {
                "series": spec.series,
                "index": spec.index,
                "shift": r["shift"],
                "predicted_index": r["predicted_index"],
                "final_norm": float(r["norms"][-1]),
                "norms": [float(v) for v in r["norms"]],
                "passed": r["passed"],
            }
        )
    return ok, {"weight": w.as_list(), "N": job.N, "reps": rows}


CHECKS: dict[str, Callable[[Job], tuple]] = {
    "normalize": check_normalize,
    "power-formulas": check_power_formulas,
    "sphere-verify": check_sphere,
    "gwa-verify": check_gwa,
    "strong-connection": check_strong_connection,
    "idempotent": check_idempotent,
    "chern": check_chern,
    "rep-check": check_rep,
    "tau": check_tau,
    "summability": check_summability,
    "compactness": check_compactness,
}


# -- plans -------------------------------------------------------------------------


_JOB_KEYS = {"check", "weight", "n", "s", "t", "N", "p", "q", "tol"}


def _parse_n(value, where: str) -> tuple:
    if isinstance(value, int):
        return (value,)
    if isinstance(value, list) and all(isinstance(v, int) for v in value):
        return tuple(value)
    if isinstance(value, dict) and set(value) == {"from", "to"}:
        return tuple(range(value["from"], value["to"] + 1))
    raise PlanError(f"{where}.n: expected an int, a list of ints or {{from, to}}")


def job_from_json(raw, where: str = "job") -> Job:
    if not isinstance(raw, dict):
        raise PlanError(f"{where}: expected an object")
    name = raw.get("check")
    if name not in CHECKS:
        raise PlanError(f"{where}.check: unknown check {name!r}")
    weight = None
    if "weight" in raw:
        wt = raw["weight"]
        if not (isinstance(wt, list) and len(wt) == 2 and all(isinstance(v, int) for v in wt)):
            raise PlanError(f"{where}.weight: expected [k, l]")
        try:
            weight = WeightPair(*wt)
        except ValueError as exc:
            raise PlanError(f"{where}.weight: {exc}") from None
    kwargs = {}
    for key, kind in (("s", int), ("t", int), ("N", int), ("p", float), ("q", float), ("tol", float)):
        if key in raw:
            if not isinstance(raw[key], (int, float)) or isinstance(raw[key], bool):
                raise PlanError(f"{where}.{key}: expected a number")
            kwargs[key] = kind(raw[key])
    if "n" in raw:
        kwargs["n"] = _parse_n(raw["n"], where)
    options = {k: v for k, v in raw.items() if k not in _JOB_KEYS}
    return Job(name, weight, options=options, **kwargs)


def load_plan(data) -> list[Job]:
    if isinstance(data, dict):
        jobs = data.get("jobs")
        if jobs is None:
            raise PlanError("plan: missing 'jobs' list")
    else:
        jobs = data
    if not isinstance(jobs, list):
        raise PlanError("plan.jobs: expected a list")
    return [job_from_json(j, f"jobs[{i}]") for i, j in enumerate(jobs)]


def _weights(*pairs) -> list[WeightPair]:
    return [WeightPair(k, l) for k, l in pairs]


BASE_WEIGHTS = [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (5, 2)]
SPHERE_WEIGHTS = BASE_WEIGHTS + [(k, -l) for k, l in BASE_WEIGHTS]
CONNECTION_WEIGHTS = [(1, 1), (1, 2), (2, 1), (2, 3)]
NUMERIC_WEIGHTS = [(1, 1), (2, 3), (2, -3)]


def default_plan() -> list[Job]:
    """The acceptance matrix as a list of jobs (criterion order)."""
    jobs = [Job("power-formulas", options={"m_max": 6})]
    jobs += [Job("sphere-verify", w) for w in _weights(*SPHERE_WEIGHTS)]
    jobs += [Job("gwa-verify", w) for w in _weights(*SPHERE_WEIGHTS)]
    conn = CONNECTION_WEIGHTS + [(k, -l) for k, l in CONNECTION_WEIGHTS]
    jobs += [Job("strong-connection", w, n=tuple(range(-5, 6))) for w in _weights(*conn)]
    jobs += [
        Job("idempotent", w, n=tuple(range(0, 5)), options={"trace_n_max": 5})
        for w in _weights((1, 1), (2, 3))
    ]
    jobs += [Job("chern", w, n=(1, 2, 3, 4)) for w in _weights((1, 1), (1, 2), (2, 1), (3, 2))]
    jobs += [Job("rep-check", w, N=200) for w in _weights(*NUMERIC_WEIGHTS)]
    jobs += [Job("tau", w, N=400) for w in _weights(*NUMERIC_WEIGHTS, (1, -1))]
    jobs += [Job("summability", w, N=400) for w in _weights(*NUMERIC_WEIGHTS)]
    jobs += [Job("compactness", w, N=200) for w in _weights(*NUMERIC_WEIGHTS)]
    return jobs


def run_job(job: Job, index: int = 0) -> dict:
    start = time.perf_counter()
    try:
        passed, witnesses = CHECKS[job.check](job)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        passed, witnesses = False, {"error": f"{type(exc).__name__}: {exc}"}
    return {
        "index": index,
        "job": job.to_json(),
        "status": "pass" if passed else "fail",
        "witnesses": witnesses,
        "runtime": round(time.perf_counter() - start, 6),
    }


def run(plan) -> dict:
    """Run a plan (list of :class:`Job` or raw JSON) and return the report.

    Jobs run in plan order; the report is identical for identical plans up to
    the ``runtime`` fields.
    """
    jobs = plan if all(isinstance(j, Job) for j in plan) else load_plan(plan)
    results = [run_job(job, i) for i, job in enumerate(jobs)]
    return {
        "schema": SCHEMA,
        "status": "pass" if all(r["status"] == "pass" for r in results) else "fail",
        "jobs": results,
    }


def strip_runtime(report: dict) -> dict:
    """Copy of a report without timing fields, for determinism comparisons."""
    out = dict(report)
    out["jobs"] = [{k: v for k, v in r.items() if k != "runtime"} for r in report["jobs"]]
    return out


# -- argument parsing ----------------------------------------------------------------


def _n_arg(text: str) -> tuple:
    """``3``, ``1,2,3`` or ``-5..5``."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(v) for v in text.split(","))


def _common(sub: argparse.ArgumentParser, weight=True, numeric=False):
    if weight:
        sub.add_argument("--k", type=int, required=True)
        sub.add_argument("--l", type=int, required=True)
        sub.add_argument("--sign", choices=["+", "-"], help="sign of l (overrides the sign of --l)")
    sub.add_argument("--json", action="store_true", help="emit a JSON report")
    if numeric:
        sub.add_argument("--N", type=int, default=200, help="truncation size")
        sub.add_argument("--p", type=float, default=reps.DEFAULT_P)
        sub.add_argument("--q", type=float, default=reps.DEFAULT_Q)
        sub.add_argument("--tol", type=float, default=1e-10)
        sub.add_argument("--s", type=int)
        sub.add_argument("--t", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weighted-heegaard", description="Exact and numeric checks for quantum weighted Heegaard spheres."
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("normalize", help="print the normal form of a word")
    sp.add_argument("word", help="e.g. 'a* a' or 'b^2 a*'")
    _common(sp, weight=False)

    for name, text in (("sphere-verify", "sphere relations"), ("gwa-verify", "generalised Weyl algebra axioms")):
        _common(subs.add_parser(name, help=f"verify the {text}"))

    sp = subs.add_parser("strong-connection", help="verify the strong connection conditions")
    _common(sp)
    sp.add_argument("--n", type=_n_arg, default=tuple(range(-5, 6)))

    sp = subs.add_parser("idempotent", help="check E[n]^2 = E[n] and Tr E[n] = g_n")
    _common(sp)
    sp.add_argument("--n", type=_n_arg, default=tuple(range(0, 4)))

    sp = subs.add_parser("chern", help="exact Chern pairing τ(Tr E[n])")
    _common(sp, numeric=True)
    sp.add_argument("--n", type=_n_arg, default=(1, 2, 3, 4))
    sp.add_argument("--numeric", action="store_true", help="cross-check against truncated traces")

    sp = subs.add_parser("rep-check", help="relation residuals of truncated representations")
    _common(sp, numeric=True)
    sp.add_argument("--series", choices=reps.SERIES)
    sp.add_argument("--index", type=int)

    sp = subs.add_parser("tau", help="numeric trace formula vs closed form")
    _common(sp, numeric=True)
    sp.add_argument("--head", choices=["A", "B"], action="append")
    sp.add_argument("--power", type=int, action="append")
    sp.add_argument("--cpower", type=int, default=0)

    sp = subs.add_parser("summability", help="partial sums of Tr|[F, π(x)]|")
    _common(sp, numeric=True)

    sp = subs.add_parser("compactness", help="decay of π(C) minus the Toeplitz shift")
    _common(sp, numeric=True)
    sp.add_argument("--series", choices=reps.SERIES)
    sp.add_argument("--index", type=int)

    sp = subs.add_parser("run-plan", help="run a JSON plan (default: the acceptance matrix)")
    sp.add_argument("--plan", help="plan file; omit for the acceptance matrix")
    sp.add_argument("--json", action="store_true")
    return parser


def _job_from_args(args) -> Job:
    weight = None
    if hasattr(args, "k"):
        l = args.l
        if args.sign:
            l = abs(l) if args.sign == "+" else -abs(l)
        weight = WeightPair(args.k, l)
    kwargs = {}
    for key in ("N", "p", "q", "tol", "s", "t", "n"):
        if getattr(args, key, None) is not None:
            kwargs[key] = getattr(args, key)
    options = {}
    cmd = args.command
    if cmd == "normalize":
        options["word"] = args.word
    elif cmd == "chern":
        options["numeric"] = args.numeric
    elif cmd in ("rep-check", "compactness"):
        if args.series:
            options["series"] = args.series
        if args.index is not None:
            options["index"] = args.index
    elif cmd == "tau":
        options.update(cpower=args.cpower)
        if args.head:
            options["heads"] = args.head
        if args.power:
            options["powers"] = args.power
    return Job(cmd, weight, options=options, **kwargs)


def _print_human(report: dict, out) -> None:
    for r in report["jobs"]:
        job = r["job"]
        label = job["check"] + (f" {tuple(job['weight'])}" if "weight" in job else "")
        print(f"{r['status']:4}  {label}  ({r['runtime']:.2f}s)", file=out)
        if r["status"] == "fail":
            print("      " + json.dumps(r["witnesses"], ensure_ascii=False, default=str)[:2000], file=out)
    print(f"overall: {report['status']}", file=out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run-plan":
            if args.plan:
                with open(args.plan, encoding="utf-8") as fh:
                    jobs = load_plan(json.load(fh))
            else:
                jobs = default_plan()
        else:
            if args.command == "normalize" and not args.json:
                print(normalize(parse_word(args.word)))
                return 0
            jobs = [_job_from_args(args)]
    except (PlanError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(jobs)
    if args.json:
        json.dump(report, sys.stdout, ensure_ascii=False, indent=2, default=str)
        print()
    else:
        _print_human(report, sys.stdout)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
