"""Command-line front end.

Exit codes: 0 success, 2 argument error, 3 oracle budget refusal,
4 verify-suite failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import formulas as fm
from . import montecarlo as mc
from .model import LabelDistribution
from .oracle import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    EdgePresent,
    EmptyGraphWithKVertices,
    IsComplete,
    MaxDegreeEquals,
    PointInInterval,
    STATISTICS,
    enumerate_event_prob,
    enumerate_expectation,
    parse_event,
    validate_event,
)

EXIT_ARGS = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4

CSV_FIELDS = ["m", "n", "event", "method", "value", "ci_low", "ci_high", "trials", "seed"]
METHODS = ("exact", "bound", "oracle", "mc")


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"4"``, ``"2:6"`` (inclusive) or ``"2,3,8"``; ``"2:20:2"`` adds a step."""
    try:
        if ":" in text:
            parts = [int(v) for v in text.split(":")]
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            values = list(range(lo, hi + 1, step))
        else:
            values = [int(v) for v in text.split(",")]
    except (ValueError, IndexError):
        raise UsageError(f"malformed range {text!r}") from None
    if not values:
        raise UsageError(f"empty range {text!r}")
    return values


def resolve_distribution(args) -> LabelDistribution:
    if args.p is not None:
        p = LabelDistribution.parse(args.p)
        if args.m is not None and args.m != p.m:
            raise UsageError(f"--m {args.m} disagrees with the {p.m} probabilities in --p")
        return p
    if args.m is None:
        raise UsageError("give --p, or --m (optionally with --uniform)")
    return LabelDistribution.uniform(args.m)


# Query targets: an EventQuery, or ("mean", statistic) for expectations.

def parse_target(text: str):
    if text.startswith("mean:"):
        stat = text.split(":", 1)[1]
        if stat not in STATISTICS:
            raise UsageError(f"unknown statistic {stat!r}; choose from {sorted(STATISTICS)}")
        return ("mean", stat)
    try:
        return parse_event(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def target_name(target) -> str:
    return f"mean:{target[1]}" if isinstance(target, tuple) else str(target)


def exact_value(target, n: int, p: LabelDistribution) -> fm.ProbabilityResult:
    if isinstance(target, EdgePresent):
        if p.is_uniform:
            return fm.edge_prob_uniform(n, p.m)
        return fm.edge_prob(n, p[target.i], p[target.j])
    if isinstance(target, EmptyGraphWithKVertices) and p.is_uniform:
        return fm.empty_graph_prob(n, target.k, p)
    if isinstance(target, PointInInterval):
        return fm.point_in_interval_prob(n, target.x, p[target.i])
    if target == ("mean", "edges"):
        return fm.expected_edge_count(n, p)
    raise UsageError(f"no exact formula for {target_name(target)} with p={p}")


def bound_value(target, n: int, p: LabelDistribution, paper_verbatim: bool = False) -> fm.ProbabilityResult:
    if isinstance(target, MaxDegreeEquals) and target.d is None:
        return fm.max_degree_lower_bound(n, p, paper_verbatim)
    if isinstance(target, IsComplete):
        return fm.simplex_prob_lower_bound(n, p, paper_verbatim)
    if target == ("mean", "clique"):
        return fm.expected_clique_lower_bound(n, p, paper_verbatim)
    if isinstance(target, EmptyGraphWithKVertices):
        return fm.empty_graph_prob(n, target.k, p)
    raise UsageError(f"no bound for {target_name(target)}")


def oracle_value(target, n: int, p: LabelDistribution, budget: int, workers: int = 1) -> Fraction:
    if isinstance(target, tuple):
        return enumerate_expectation(n, p, target[1], budget, workers)
    return enumerate_event_prob(n, p, target, budget, workers)


def mc_value(target, n: int, p: LabelDistribution, trials: int, seed: int, workers: int = 1) -> mc.McEstimate:
    if isinstance(target, tuple):
        return mc.estimate_statistic(n, p, target[1], trials, seed, workers)
    return mc.estimate_event(n, p, target, trials, seed, workers)


def csv_row(m, n, event, method, value, est: Optional[mc.McEstimate] = None) -> dict:
    row = dict(m=m, n=n, event=event, method=method, value=fm.decimal12(value),
               ci_low="", ci_high="", trials="", seed="")
    if est is not None:
        row.update(ci_low=fm.decimal12(est.ci_low), ci_high=fm.decimal12(est.ci_high),
                   trials=est.trials, seed=est.seed)
    return row


def write_csv(rows, out: Optional[str]):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if out and out != "-":
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


@dataclass(frozen=True)
class SweepSpec:
    m_values: tuple[int, ...]
    n_values: tuple[int, ...]
    event: str
    methods: tuple[str, ...]
    trials: int = 0
    seed: Optional[int] = None
    output: Optional[str] = None
    p: Optional[LabelDistribution] = None
    budget: int = DEFAULT_BUDGET
    paper_verbatim: bool = False

    def __post_init__(self):
        if not self.m_values or not self.n_values:
            raise UsageError("sweep ranges must be non-empty")
        bad = [meth for meth in self.methods if meth not in METHODS]
        if bad or not self.methods:
            raise UsageError(f"methods must be a non-empty subset of {METHODS}, got {list(self.methods)}")
        if "mc" in self.methods and (self.seed is None or self.trials < 1):
            raise UsageError("method mc needs --seed and --trials >= 1")
        if "oracle" in self.methods:
            for m in self.m_values:
                for n in self.n_values:
                    if m**n > self.budget:
                        raise BudgetExceeded(m**n, self.budget)

    def distribution(self, m: int) -> LabelDistribution:
        return self.p if self.p is not None else LabelDistribution.uniform(m)

    def cells(self):
        ms = (self.p.m,) if self.p is not None else self.m_values
        return [(m, n, meth) for m in ms for n in self.n_values for meth in self.methods]


def run_cell(spec: SweepSpec, m: int, n: int, method: str) -> dict:
    target = parse_target(spec.event)
    p = spec.distribution(m)
    if not isinstance(target, tuple):
        try:
            validate_event(target, n, m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if method == "exact":
        return csv_row(m, n, spec.event, method, exact_value(target, n, p).value)
    if method == "bound":
        return csv_row(m, n, spec.event, method, bound_value(target, n, p, spec.paper_verbatim).value)
    if method == "oracle":
        return csv_row(m, n, spec.event, method, oracle_value(target, n, p, spec.budget))
    est = mc_value(target, n, p, spec.trials, spec.seed)
    return csv_row(m, n, spec.event, method, est.point_estimate, est)


def _run_cell_job(job):
    return run_cell(*job)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[dict]:
    jobs = [(spec, m, n, meth) for m, n, meth in spec.cells()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_run_cell_job, jobs))
    else:
        rows = [_run_cell_job(j) for j in jobs]
    return sorted(rows, key=lambda r: (r["m"], r["n"], r["method"]))


# subcommands

EXACT_FORMULAS = {
    "edge-prob": lambda a: EdgePresent(a.i, a.j),
    "empty-graph": lambda a: EmptyGraphWithKVertices(a.k),
    "expected-edges": lambda a: ("mean", "edges"),
    "point-in-interval": lambda a: PointInInterval(a.x, a.label),
}

BOUNDS = {
    "max-degree": lambda a: MaxDegreeEquals(),
    "clique": lambda a: ("mean", "clique"),
    "simplex": lambda a: IsComplete(),
    "empty-graph": lambda a: EmptyGraphWithKVertices(a.k),
}


def cmd_exact(args) -> int:
    p = resolve_distribution(args)
    if args.formula == "coupon-time":
        print(fm.coupon_expected_time(p).render())
        return 0
    if args.k is None:
        args.k = p.m
    target = EXACT_FORMULAS[args.formula](args)
    if args.n is None:
        raise UsageError(f"{args.formula} needs --n")
    if not isinstance(target, tuple):
        try:
            validate_event(target, args.n, p.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    print(exact_value(target, args.n, p).render())
    return 0


def cmd_bound(args) -> int:
    p = resolve_distribution(args)
    if args.name == "waiting-time":
        print(fm.waiting_time_upper_bound(p).render())
        return 0
    if args.n is None:
        raise UsageError(f"{args.name} needs --n")
    if args.k is None:
        args.k = p.m
    try:
        result = bound_value(BOUNDS[args.name](args), args.n, p, args.paper_verbatim)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(result.render())
    if args.terms and args.name == "max-degree":
        for r, a, b in fm.max_degree_bound_terms(args.n, p, args.paper_verbatim):
            print(f"  r={r}: first={fm.decimal12(a)} second={fm.decimal12(b)} product={fm.decimal12(a * b)}")
    return 0


def _single_target(args):
    if (args.event is None) == (args.stat is None):
        raise UsageError("give exactly one of --event or --stat")
    return parse_target(args.event) if args.event else parse_target(f"mean:{args.stat}")


def cmd_oracle(args) -> int:
    p = resolve_distribution(args)
    target = _single_target(args)
    try:
        value = oracle_value(target, args.n, p, args.budget, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(fm.ProbabilityResult(value, "exact", "oracle").render())
    return 0


def cmd_simulate(args) -> int:
    p = resolve_distribution(args)
    target = _single_target(args)
    try:
        est = mc_value(target, args.n, p, args.trials, args.seed, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_csv([csv_row(p.m, args.n, target_name(target), "mc", est.point_estimate, est)], args.out)
    return 0


def cmd_waiting_time(args) -> int:
    p = resolve_distribution(args)
    bound = fm.waiting_time_upper_bound(p)
    floor = fm.coupon_expected_time(p)
    est = mc.estimate_waiting_time(p, args.trials, args.seed, args.cap, args.workers)
    print(f"upper bound (two collections): {bound.render()}")
    print(f"coupon-collector time:         {floor.render()}")
    print(f"monte carlo mean:              {fm.decimal12(est.point_estimate)} "
          f"[{fm.decimal12(est.ci_low)}, {fm.decimal12(est.ci_high)}] "
          f"trials={est.trials} seed={est.seed} truncated={est.truncated}")
    return 0


def cmd_scheinerman(args) -> int:
    rows = []
    for m in parse_range(args.m):
        est = mc.scheinerman_max_degree_estimate(m, args.trials, args.seed, args.workers)
        rows.append(csv_row(m, "", "scheinerman:maxdeg", "mc", est.point_estimate, est))
    if args.out:
        write_csv(rows, args.out)
    else:
        for row in rows:
            print(f"m={row['m']}: {row['value']} [{row['ci_low']}, {row['ci_high']}] "
                  f"trials={row['trials']} seed={row['seed']} (target 2/3)")
    return 0


def cmd_sweep(args) -> int:
    p = LabelDistribution.parse(args.p) if args.p else None
    spec = SweepSpec(
        m_values=tuple(parse_range(args.m)) if args.m else ((p.m,) if p else ()),
        n_values=tuple(parse_range(args.n)),
        event=target_name(parse_target(args.event)),
        methods=tuple(s.strip() for s in args.methods.split(",")),
        trials=args.trials,
        seed=args.seed,
        output=args.out,
        p=p,
        budget=args.budget,
        paper_verbatim=args.paper_verbatim,
    )
    write_csv(run_sweep(spec, args.workers), spec.output)
    return 0


def cmd_verify(args) -> int:
    from .verify import format_table, run_all

    checks, rows = run_all()
    print(format_table(checks))
    if args.details:
        print("\nmax-degree bound vs exact (n, p, bound, exact):")
        for n, p, bound, exact in rows:
            flag = "  <-- bound exceeds exact" if bound > exact else ""
            print(f"  n={n} p={p}: {fm.decimal12(bound)} vs {fm.decimal12(exact)}{flag}")
    ok = all(c.passed for c in checks)
    print("verify:", "PASS" if ok else "FAIL")
    return 0 if ok else EXIT_VERIFY


def _dist_opts(sp, n_required=True):
    sp.add_argument("--n", type=int, required=n_required, help="number of sample points")
    sp.add_argument("--m", type=int, help="number of labels")
    sp.add_argument("--uniform", action="store_true", help="p_i = 1/m (the default when --p is absent)")
    sp.add_argument("--p", help='probabilities, e.g. "1/2,1/4,1/4" or "0.5,0.25,0.25"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randintervals", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("exact", help="evaluate an exact formula")
    sp.add_argument("formula", choices=[*EXACT_FORMULAS, "coupon-time"])
    _dist_opts(sp, n_required=False)
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--j", type=int, default=2)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--x", type=int, default=1)
    sp.add_argument("--label", type=int, default=1)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("bound", help="evaluate a bound")
    sp.add_argument("name", choices=[*BOUNDS, "waiting-time"])
    _dist_opts(sp, n_required=False)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--paper-verbatim", action="store_true", help="use the printed uniform shortcuts")
    sp.add_argument("--terms", action="store_true", help="show the per-r factors of the max-degree bound")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("oracle", help="exact value by enumerating all colorings")
    _dist_opts(sp)
    sp.add_argument("--event", help="edge:i,j | empty:k | maxdeg[:d] | complete | point:x,i | clique:t")
    sp.add_argument("--stat", choices=sorted(STATISTICS), help="expectation of a statistic")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("simulate", help="Monte Carlo estimate, written as one CSV row")
    _dist_opts(sp)
    sp.add_argument("--event")
    sp.add_argument("--stat", choices=sorted(STATISTICS))
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("waiting-time", help="waiting-time bound and Monte Carlo mean")
    _dist_opts(sp, n_required=False)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_waiting_time)

    sp = sub.add_parser("scheinerman", help="max-degree probability in the Scheinerman model")
    sp.add_argument("--m", required=True, help="label count or range, e.g. 10 or 2:50")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="write CSV here instead of a text summary")
    sp.set_defaults(func=cmd_scheinerman)

    sp = sub.add_parser("sweep", help="grid of (m, n) cells written as CSV")
    sp.add_argument("--m", help="label-count range (uniform p), e.g. 2:6")
    sp.add_argument("--p", help="fixed probability vector instead of a uniform m range")
    sp.add_argument("--n", required=True, help="sample-count range, e.g. 2:40")
    sp.add_argument("--event", required=True, help="event (as for oracle) or mean:<statistic>")
    sp.add_argument("--methods", default="bound,mc", help="subset of exact,bound,oracle,mc")
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--paper-verbatim", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the formula-vs-oracle identity suite")
    sp.add_argument("--details", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
