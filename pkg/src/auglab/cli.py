"""``auglab`` command line: run engines, verify bounds, generate instances.

Every command writes its JSON (or CSV, for curves with ``--csv``) to ``--out``
when given and prints a one-line summary. Exit status is 0 when all requested
verifications pass, 1 when one fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from auglab import __version__, lab, paging, routing, scheduling
from auglab.report import VerificationReport, format_number, parse_rational

DEFAULT_SEED = 20240
SEED_ENV = "AUGLAB_SEED"


class InputError(Exception):
    """Bad user input; the message names the offending option or field."""


class Outcome:
    """What a command produced: a JSON-able result, or ``text`` written verbatim
    (generated instances), plus an optional CSV rendering for curves."""

    def __init__(self, command: str, result: Any, summary: str, passed: bool = True,
                 csv: str | None = None, text: str | None = None):
        self.command = command
        self.result = result
        self.summary = summary
        self.passed = passed
        self.csv = csv
        self.text = text

    def payload(self) -> dict[str, Any]:
        return {"command": self.command, "result": self.result}


def dumps(obj: Any) -> str:
    def default(x):
        if isinstance(x, Fraction):
            return format_number(x)
        if isinstance(x, (set, frozenset, tuple)):
            return sorted(x) if not isinstance(x, tuple) else list(x)
        raise TypeError(f"cannot serialize {type(x).__name__}")

    return json.dumps(obj, sort_keys=True, indent=2, default=default) + "\n"


# -- argument helpers --------------------------------------------------------------------

def _field(name: str, fn: Callable[[], Any]) -> Any:
    try:
        return fn()
    except InputError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError, OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{name}: {exc}") from exc


def rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return x


def positive_int(text: str) -> int:
    try:
        x = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return x


def levels(text: str) -> list:
    """``"1:6"`` (inclusive integer range) or a comma list of numbers."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [parse_rational(x) for x in text.split(",")]
            out = [int(x) if x.denominator == 1 else x for x in out]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError("empty level list")
    return out


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"{SEED_ENV}: not an integer: {env!r}") from exc


def _trace(args) -> paging.PageRequestSequence:
    return _field("--trace", lambda: paging.read_trace(args.trace))


def _net(args) -> routing.RoutingNetwork:
    return _field("--net", lambda: routing.read_network(args.net))


def _jobs(args) -> scheduling.JobSet:
    return _field("--jobs", lambda: scheduling.read_jobs(args.jobs))


def _verified(command: str, report: VerificationReport) -> Outcome:
    return Outcome(command, report.to_dict(), report.summary(), report.passed)


def _aggregate(command: str, reports: list[VerificationReport]) -> Outcome:
    failed = [r for r in reports if not r.passed]
    passed = not failed
    summary = f"{'PASS' if passed else 'FAIL'} {len(reports) - len(failed)}/{len(reports)} checks"
    if failed:
        summary += f"; first failure {failed[0].summary()}"
    return Outcome(command, {"passed": passed, "reports": [r.to_dict() for r in reports]}, summary, passed)


# -- paging ---------------------------------------------------------------------------------

def cmd_page_sim(args) -> Outcome:
    z = _trace(args)
    res = _field("--k", lambda: paging.simulate(args.policy, args.k, z))
    return Outcome("page sim", res.to_dict(),
                   f"{res.policy.value} k={res.cache_size}: {res.fault_count} faults on {len(z)} requests")


def cmd_page_curve(args) -> Outcome:
    z = _trace(args)
    ks = args.levels or list(range(1, args.k_max + 1))
    c = _field("--levels", lambda: lab.curve(f"paging:{args.policy}", z, ks, jobs=args.jobs,
                                             name=Path(args.trace).name))
    return Outcome("page curve", c.to_dict(),
                   f"{args.policy} faults over k={ks[0]}..{ks[-1]}: {c.values[0]} -> {c.values[-1]}",
                   csv=c.to_csv())


def cmd_page_loose(args) -> Outcome:
    z = _trace(args)
    cls = _field("--eps/--delta", lambda: lab.loose_classify(z, args.n, args.eps, args.delta, args.policy))
    counts = {cat: sum(1 for s in cls.sizes if s.category == cat)
              for cat in (lab.COMPETITIVE, lab.LOW_FAULT_RATE, lab.EXEMPT)}
    summary = (f"{'PASS' if cls.ok else 'FAIL'} b={cls.b}: {counts['competitive']} competitive, "
               f"{counts['low_fault_rate']} low-fault-rate, {counts['exempt']} exempt "
               f"(max {cls.max_exempt})")
    return Outcome("page loose", cls.to_dict(), summary, cls.ok)


def cmd_page_verify_ra(args) -> Outcome:
    z = _trace(args)
    if args.k_max is not None:
        return _aggregate("page verify-ra",
                          _field("--k-max", lambda: lab.verify_lru_ra_sweep(z, args.k_max, args.policy)))
    if args.k is None or args.h is None:
        raise InputError("--k/--h: give both, or --k-max for a sweep")
    return _verified("page verify-ra", _field("--h", lambda: lab.verify_lru_ra(z, args.k, args.h, args.policy)))


# -- routing ---------------------------------------------------------------------------------

def _solve_cmd(name: str, solver):
    def run(args) -> Outcome:
        net = _net(args)
        rep = _field("--net", lambda: solver(net, args.tol))
        state = "converged" if rep.converged else "NOT converged"
        return Outcome(f"route {name}", rep.to_dict(),
                       f"{rep.kind} cost {rep.cost:.10g} ({state}, gap {rep.gap:.2e})", rep.converged)
    return run


def cmd_route_poa(args) -> Outcome:
    net = _net(args)
    eq = _field("--net", lambda: routing.equilibrium_flow(net, args.tol))
    opt = _field("--net", lambda: routing.optimal_flow(net, args.tol))
    poa = eq.cost / opt.cost if opt.cost > 0 else None
    result = {"poa": poa, "eq_cost": eq.cost, "opt_cost": opt.cost, "eq_gap": eq.gap, "opt_gap": opt.gap}
    text = "undefined (optimal cost 0)" if poa is None else f"{poa:.10g}"
    return Outcome("route poa", result, f"price of anarchy {text}", eq.converged and opt.converged)


def cmd_route_verify_rt(args) -> Outcome:
    net = _net(args)
    reports = [_field("--delta", lambda d=d: lab.verify_routing_ra(net, d, tol=args.tol)) for d in args.delta]
    if len(reports) == 1:
        return _verified("route verify-rt", reports[0])
    return _aggregate("route verify-rt", reports)


def cmd_route_verify_bicrit(args) -> Outcome:
    net = _net(args)
    return _verified("route verify-bicrit", _field("--net", lambda: lab.verify_bicriteria(net, tol=args.tol)))


def cmd_route_loose(args) -> Outcome:
    net = _net(args)
    rate = args.rate if args.rate is not None else net.total_rate
    rep = _field("--net", lambda: lab.routing_loose_curve(net, rate, args.samples, args.beta, tol=args.tol))
    if rep.pi is None:
        summary = "pi undefined: equilibrium cost at r/2 is 0"
    else:
        summary = (f"pi={rep.pi:.6g}, threshold {rep.threshold:.6g}, "
                   f"alpha_hat={rep.alpha_hat:.4g} over {args.samples} rates")
    return Outcome("route loose", rep.to_dict(), summary)


# -- scheduling ----------------------------------------------------------------------------

def cmd_sched_sim(args) -> Outcome:
    jobs = _jobs(args)
    sim = scheduling.simulate_srpt if args.policy == "srpt" else scheduling.simulate_setf
    tl = _field("--speed", lambda: sim(jobs, args.speed))
    m = scheduling.flow_metrics(tl)
    result = tl.to_dict()
    result["total_flow_time"] = format_number(m.total_flow_time)
    result["max_idle_time"] = format_number(m.max_idle_time)
    return Outcome("sched sim", result,
                   f"{args.policy} speed {format_number(args.speed)}: total flow time "
                   f"{format_number(m.total_flow_time)} over {len(jobs)} jobs")


def _sched_verify(name: str, fn):
    def run(args) -> Outcome:
        jobs = _jobs(args)
        return _verified(f"sched {name}", _field("--eps", lambda: fn(jobs, args.eps)))
    return run


# -- generators --------------------------------------------------------------------------------

def _gen(args) -> Outcome:
    fam, seed = args.family, resolve_seed(args.seed)
    if fam in ("cyclic", "adaptive", "locality"):
        if fam == "cyclic":
            z = paging.gen_cyclic_adversary(args.k, args.length)
        elif fam == "adaptive":
            z = paging.gen_adaptive_adversary(args.policy, args.k, args.length)
        else:
            z = _field("--locality", lambda: paging.gen_locality_workload(
                args.pages, args.length, seed, args.locality, args.window))
        text = f"N={z.universe_size}\n" + "".join(f"{p}\n" for p in z.requests)
        return Outcome(f"gen {fam}", None, f"{fam}: {len(z)} requests over {z.universe_size} pages", text=text)
    if fam in ("example-setf", "random-jobs"):
        if fam == "example-setf":
            jobs = _field("--eps/--delta", lambda: scheduling.gen_example_setf(args.eps, args.delta))
        else:
            jobs = scheduling.random_jobs(seed, args.max_jobs, args.max_release)
        return Outcome(f"gen {fam}", None, f"{fam}: {len(jobs)} jobs",
                       text=dumps(scheduling.jobs_to_list(jobs)))
    if fam == "pigou":
        net = routing.pigou(args.rate)
    elif fam == "nonlinear-pigou":
        net = routing.nonlinear_pigou(args.d, args.rate)
    elif fam == "mm1":
        net = _field("--u", lambda: routing.mm1_link(args.u, args.rate))
    elif fam == "random-network":
        net = routing.random_network(args.vertices, seed, extra_edges=args.extra_edges,
                                     rate=args.rate, commodities=args.commodities)
    elif fam == "random-parallel":
        net = routing.random_parallel_network(seed, args.max_links)
    else:
        net = routing.capacity_ladder(args.n, args.rho, args.degree, args.rate)
    return Outcome(f"gen {fam}", None,
                   f"{fam}: {net.num_vertices} vertices, {len(net.edges)} edges, "
                   f"{len(net.commodities)} commodities",
                   text=dumps(routing.network_to_dict(net)))


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write the JSON (or CSV) result here")
    common.add_argument("--seed", type=int, default=None,
                        help=f"generator seed (default ${SEED_ENV} or {DEFAULT_SEED})")

    parser = argparse.ArgumentParser(prog="auglab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"auglab {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help):
        p = group.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    # paging
    page = groups.add_parser("page", help="demand paging").add_subparsers(dest="cmd", required=True)
    online = ["lru", "fifo"]
    p = sub(page, "sim", cmd_page_sim, "simulate one policy")
    p.add_argument("--trace", required=True)
    p.add_argument("--policy", choices=["lru", "fifo", "fif"], default="lru")
    p.add_argument("--k", type=positive_int, required=True)
    p = sub(page, "curve", cmd_page_curve, "faults as a function of cache size")
    p.add_argument("--trace", required=True)
    p.add_argument("--policy", choices=["lru", "fifo", "fif"], default="lru")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k-max", type=positive_int)
    g.add_argument("--levels", type=levels, help="e.g. 1:20 or 1,2,4,8")
    p.add_argument("--csv", action="store_true", help="write CSV instead of JSON")
    p.add_argument("--jobs", type=positive_int, default=1, help="worker processes")
    p = sub(page, "loose", cmd_page_loose, "loosely-competitive classification of cache sizes")
    p.add_argument("--trace", required=True)
    p.add_argument("--policy", choices=online, default="lru")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--eps", type=rational, required=True)
    p.add_argument("--delta", type=rational, required=True)
    p = sub(page, "verify-ra", cmd_page_verify_ra, "online policy at k vs FIF at h <= k")
    p.add_argument("--trace", required=True)
    p.add_argument("--policy", choices=online, default="lru")
    p.add_argument("--k", type=positive_int)
    p.add_argument("--h", type=positive_int)
    p.add_argument("--k-max", type=positive_int, help="sweep all 1 <= h <= k <= K")

    # routing
    route = groups.add_parser("route", help="selfish routing").add_subparsers(dest="cmd", required=True)

    def rsub(name, fn, help):
        p = sub(route, name, fn, help)
        p.add_argument("--net", required=True)
        p.add_argument("--tol", type=positive_float, default=1e-10, help="relative duality gap")
        return p

    rsub("eq", _solve_cmd("eq", routing.equilibrium_flow), "equilibrium flow")
    rsub("opt", _solve_cmd("opt", routing.optimal_flow), "optimal flow")
    rsub("poa", cmd_route_poa, "price of anarchy")
    p = rsub("verify-rt", cmd_route_verify_rt, "equilibrium at r vs optimum at (1+delta) r")
    p.add_argument("--delta", type=positive_float, nargs="+", default=[1.0])
    rsub("verify-bicrit", cmd_route_verify_bicrit, "equilibrium with slower edges vs optimum")
    p = rsub("loose", cmd_route_loose, "price of anarchy across [r/2, r]")
    p.add_argument("--rate", type=positive_float, help="total rate r (default: the file's)")
    p.add_argument("--samples", type=int, default=11)
    p.add_argument("--beta", type=positive_float, required=True)

    # scheduling
    sched = groups.add_parser("sched", help="single-machine scheduling").add_subparsers(dest="cmd", required=True)
    p = sub(sched, "sim", cmd_sched_sim, "simulate SRPT or SETF")
    p.add_argument("--jobs", required=True, help="job set JSON")
    p.add_argument("--policy", choices=["srpt", "setf"], default="srpt")
    p.add_argument("--speed", type=rational, default=Fraction(1))
    for name, fn, help in (
        ("verify-kp00", scheduling.verify_kp00, "SETF at 1+eps vs SRPT total flow time"),
        ("verify-pointwise", scheduling.verify_pointwise_bound, "active-job counts at every instant"),
        ("verify-idle", scheduling.verify_idle_bound, "SETF at 1+eps max idle vs optimum"),
    ):
        p = sub(sched, name, _sched_verify(name, fn), help)
        p.add_argument("--jobs", required=True, help="job set JSON")
        p.add_argument("--eps", type=rational, required=True)

    # generators
    gen = groups.add_parser("gen", help="instance generators").add_subparsers(dest="family", required=True)
    p = sub(gen, "cyclic", _gen, "cyclic adversary over k+1 pages")
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--length", type=int, required=True)
    p = sub(gen, "adaptive", _gen, "adversary requesting a page missing from the online cache")
    p.add_argument("--policy", choices=online, default="lru")
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--length", type=int, required=True)
    p = sub(gen, "locality", _gen, "seeded workload with recency locality")
    p.add_argument("--pages", type=positive_int, default=30)
    p.add_argument("--length", type=int, default=10_000)
    p.add_argument("--locality", type=float, default=0.9)
    p.add_argument("--window", type=positive_int, default=8)
    p = sub(gen, "pigou", _gen, "two-link Pigou network")
    p.add_argument("--rate", type=positive_float, default=1.0)
    p = sub(gen, "nonlinear-pigou", _gen, "Pigou network with x^d on the variable link")
    p.add_argument("--d", type=positive_float, required=True)
    p.add_argument("--rate", type=positive_float, default=1.0)
    p = sub(gen, "mm1", _gen, "single M/M/1 link")
    p.add_argument("--u", type=positive_float, required=True)
    p.add_argument("--rate", type=positive_float, default=1.0)
    p = sub(gen, "random-network", _gen, "seeded random network")
    p.add_argument("--vertices", type=int, default=10)
    p.add_argument("--extra-edges", type=int, default=15)
    p.add_argument("--commodities", type=int, choices=[1, 2], default=1)
    p.add_argument("--rate", type=positive_float, default=1.0)
    p = sub(gen, "random-parallel", _gen, "seeded parallel links")
    p.add_argument("--max-links", type=int, default=6)
    p = sub(gen, "capacity-ladder", _gen, "parallel links with geometric soft capacities")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--rho", type=positive_float, default=2.0)
    p.add_argument("--degree", type=positive_int, default=64)
    p.add_argument("--rate", type=positive_float, default=1.0)
    p = sub(gen, "example-setf", _gen, "job set on which SETF without speedup does badly")
    p.add_argument("--eps", type=rational, required=True)
    p.add_argument("--delta", type=rational, required=True)
    p = sub(gen, "random-jobs", _gen, "seeded random job set")
    p.add_argument("--max-jobs", type=positive_int, default=12)
    p.add_argument("--max-release", type=int, default=20)
    return parser


def emit(outcome: Outcome, out: Path | None, csv: bool = False) -> None:
    if out is None:
        return
    if outcome.text is not None:
        text = outcome.text
    elif csv and outcome.csv is not None:
        text = outcome.csv
    else:
        text = dumps(outcome.payload())
    out.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        outcome = args.func(args)
        emit(outcome, args.out, getattr(args, "csv", False))
    except InputError as exc:
        print(f"auglab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"auglab: error: --out: {exc}", file=sys.stderr)
        return 2
    print(outcome.summary)
    return 0 if outcome.passed else 1


if __name__ == "__main__":
    sys.exit(main())
