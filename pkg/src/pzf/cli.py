"""Command-line interface: run, exact, table, profile, bounds.

Every command honors --seed for bit-exact reruns; PZF_THREADS caps worker
processes. Formats: csv | json | table. Table commands can additionally
render a figure next to the delimited output via --plot.
"""

from __future__ import annotations

import argparse
import sys

from . import bounds as bounds_mod
from .exact import BudgetExceeded, exact_ept, exact_ept_min_over_starts
from .forcing import parse_rule
from .graphs import GraphError, eccentricity, make_named_graph
from .montecarlo import (doubling_profile, estimate_ept,
                         estimate_ept_min_over_starts, tail_estimate)
from .reporting import (RunConfig, csv_quote, exact_to_dict, float17,
                        format_grid_table, format_hypercube_table,
                        format_summary_table, grid_table_csv,
                        hypercube_table_csv, json_dumps, normalize_start_policy,
                        profile_to_dict, summary_csv, summary_to_dict)

EXACT_CSV_HEADER = "graph,rule,start,expected_time,expected_time_exact,t_max"
BOUNDS_CSV_HEADER = "name,value,applicable,note"

TABLE_GRID_DIM_CAP = 20
TABLE_HYPERCUBE_DIM_CAP = 20


def _write_out(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def resolve_start_vertex(g, policy):
    """Map a start policy string to a vertex index (None means min-over-all)."""
    policy = normalize_start_policy(policy)
    if policy == "min":
        return None
    if policy == "corner":
        if g.family != "grid":
            raise GraphError("start policy 'corner' requires a grid graph")
        return 0
    if policy == "center":
        if g.family == "grid":
            m, n = g.params
            return (m - 1) // 2 + m * ((n - 1) // 2)
        if g.n <= 2048:
            eccs = [eccentricity(g, v) for v in range(g.n)]
            return min(range(g.n), key=lambda v: (eccs[v], v))
        return 0  # large graphs: assume near-transitivity rather than scan
    return int(policy)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_run(args):
    config = RunConfig(args.graph, args.rule, args.start, args.trials, args.seed,
                       args.max_steps, args.format, args.tail).normalized()
    g = make_named_graph(config.graph)
    rule = parse_rule(config.rule)
    start = resolve_start_vertex(g, config.start)
    candidates = None
    if start is None:
        result = estimate_ept_min_over_starts(
            g, rule=rule, trials=config.trials, seed=config.seed,
            max_steps=config.max_steps, workers=args.threads)
        summary = result.best
        candidates = result.candidates
        start = result.best_vertex
    else:
        summary = estimate_ept(g, start, rule, config.trials, config.seed,
                               config.max_steps, workers=args.threads)
    lower, upper = bounds_mod.summary_bounds(g, start)
    tail = None
    if config.tail_t is not None:
        tail = tail_estimate(g, start, rule, config.trials, config.seed,
                             config.tail_t, config.max_steps, workers=args.threads)

    if config.fmt == "csv":
        _write_out(summary_csv(summary, lower, upper), args.out)
    elif config.fmt == "json":
        payload = summary_to_dict(summary, lower, upper, tail, candidates)
        _write_out(json_dumps(payload) + "\n", args.out)
    else:
        text = format_summary_table(summary, lower, upper)
        if tail is not None:
            text += (f"tail P(T > {tail.t})  {float17(tail.probability)}"
                     f" (se {tail.std_error:.2e})\n")
        _write_out(text, args.out)
    return 0


def cmd_exact(args):
    g = make_named_graph(args.graph)
    rule = parse_rule(args.rule)
    start = resolve_start_vertex(g, args.start)
    if start is None:
        start_v, res = exact_ept_min_over_starts(
            g, rule, rational=args.rational, compute_tail=not args.no_tail)
    else:
        start_v = start
        res = exact_ept(g, {start}, rule, rational=args.rational,
                        compute_tail=not args.no_tail)
    label = g.label or args.graph
    if args.format == "csv":
        frac = res.expected_time_exact
        row = ",".join([
            csv_quote(label), res.rule, str(start_v), float17(res.expected_time),
            "" if frac is None else f"{frac.numerator}/{frac.denominator}",
            str(res.t_max)])
        _write_out(EXACT_CSV_HEADER + "\n" + row + "\n", args.out)
    elif args.format == "json":
        _write_out(json_dumps(exact_to_dict(res, label)) + "\n", args.out)
    else:
        lines = [f"graph          {label}",
                 f"rule           {res.rule}",
                 f"start          {start_v}",
                 f"expected_time  {float17(res.expected_time)}"]
        if res.expected_time_exact is not None:
            frac = res.expected_time_exact
            lines.append(f"exact          {frac.numerator}/{frac.denominator}")
        lines.append(f"states         {res.n_states}")
        if res.tail:
            lines.append(f"tail length    {len(res.tail)} (P(T>t) down to {res.tail[-1]:.3e})")
        _write_out("\n".join(lines) + "\n", args.out)
    return 0


def _parse_range(text, cap, what):
    lo, sep, hi = text.partition(":")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise ValueError(f"bad {what} range {text!r}; use LO:HI") from None
    if hi > cap:
        raise ValueError(f"{what} range exceeds cap {cap}")
    return range(lo, hi + 1)


def cmd_table(args):
    if args.family == "grid":
        m_range = _parse_range(args.m, TABLE_GRID_DIM_CAP, "m")
        n_range = _parse_range(args.n, TABLE_GRID_DIM_CAP, "n")
        if any(v < 1 for v in (*m_range, *n_range)):
            raise ValueError("grid dimensions must be >= 1")
        summaries = {}
        for m in m_range:
            for n in n_range:
                g = make_named_graph(f"grid:{m},{n}")
                start = resolve_start_vertex(g, args.start)
                summaries[(m, n)] = estimate_ept(
                    g, start, parse_rule(args.rule), args.trials, args.seed,
                    workers=args.threads)
        means = {key: s.mean for key, s in summaries.items()}
        _write_out(format_grid_table(means, list(m_range), list(n_range)), args.out)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(grid_table_csv(summaries))
        if args.plot:
            from .figures import save_grid_heatmap
            save_grid_heatmap(summaries, list(m_range), list(n_range), args.plot)
    else:
        dims = _parse_range(args.dims, TABLE_HYPERCUBE_DIM_CAP, "dimension")
        if any(d < 1 for d in dims):
            raise ValueError("hypercube dimension must be >= 1")
        summaries = {}
        for dim in dims:
            g = make_named_graph(f"hypercube:{dim}")
            summaries[dim] = estimate_ept(
                g, 0, parse_rule(args.rule), args.trials, args.seed,
                workers=args.threads)
        means = {dim: s.mean for dim, s in summaries.items()}
        _write_out(format_hypercube_table(means, list(dims)), args.out)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(hypercube_table_csv(summaries))
        if args.plot:
            from .figures import save_hypercube_curve
            save_hypercube_curve(summaries, list(dims), args.plot)
    return 0


def _profile_level_bounds(g):
    if g.family != "hypercube":
        return None
    dim = g.params[0]
    return {k: 131.0 * dim / (dim - k - 1) for k in range(max(dim - 1, 0))}


def cmd_profile(args):
    g = make_named_graph(args.graph)
    rule = parse_rule(args.rule)
    start = resolve_start_vertex(g, args.start)
    if start is None:
        raise ValueError("profile needs a concrete start vertex, not 'min'")
    profile = doubling_profile(g, start, rule, args.trials, args.seed,
                               args.max_steps)
    payload = profile_to_dict(profile, _profile_level_bounds(g))
    _write_out(json_dumps(payload) + "\n", args.out)
    if args.plot:
        from .figures import save_profile_figure
        save_profile_figure(profile, args.plot, _profile_level_bounds(g))
    return 0


def cmd_bounds(args):
    g = make_named_graph(args.graph)
    start = resolve_start_vertex(g, args.start)
    if start is None:
        start = 0
    reports = bounds_mod.bound_reports(g, start, args.t)
    if args.format == "json":
        payload = [{"name": r.name, "value": r.value, "applicable": r.applicable,
                    "note": r.note} for r in reports]
        _write_out(json_dumps(payload) + "\n", args.out)
    elif args.format == "csv":
        lines = [BOUNDS_CSV_HEADER]
        for r in reports:
            note = r.note.replace(",", ";")
            lines.append(f"{r.name},{float17(r.value)},{int(r.applicable)},{note}")
        _write_out("\n".join(lines) + "\n", args.out)
    else:
        width = max(len(r.name) for r in reports)
        lines = []
        for r in reports:
            flag = "" if r.applicable else "  [not applicable]"
            note = f"  ({r.note})" if r.note else ""
            lines.append(f"{r.name:<{width}}  {r.value:.6g}{flag}{note}")
        _write_out("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="pzf",
        description="Probabilistic zero-forcing: simulation, exact analysis, bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, trials_default=1000):
        p.add_argument("--graph", required=True,
                       help="family:params, e.g. grid:4,5 hypercube:8 cliquering:5,60 file:PATH")
        p.add_argument("--rule", default="standard",
                       help="standard | constant:P | push | pull | pushpull | classic")
        p.add_argument("--seed", type=int, default=0, help="64-bit master seed")
        p.add_argument("--out", default=None, help="write output to a file")

    run_p = sub.add_parser("run", help="Monte Carlo estimate of expected propagation time")
    add_common(run_p)
    run_p.add_argument("--start", default="0",
                       help="vertex index | corner | center | min-over-all")
    run_p.add_argument("--trials", type=int, default=1000)
    run_p.add_argument("--max-steps", type=int, default=None)
    run_p.add_argument("--format", choices=("csv", "json", "table"), default="table")
    run_p.add_argument("--tail", type=int, default=None,
                       help="also report empirical P(T > tail)")
    run_p.add_argument("--threads", type=int, default=None,
                       help="worker processes (capped by PZF_THREADS)")
    run_p.set_defaults(func=cmd_run)

    exact_p = sub.add_parser("exact", help="exact expected propagation time (small graphs)")
    add_common(exact_p)
    exact_p.add_argument("--start", default="0",
                         help="vertex index | corner | center | min-over-all")
    exact_p.add_argument("--rational", action="store_true",
                         help="exact fraction arithmetic (graphs up to 6 vertices)")
    exact_p.add_argument("--no-tail", action="store_true",
                         help="skip the tail distribution")
    exact_p.add_argument("--format", choices=("csv", "json", "table"), default="table")
    exact_p.set_defaults(func=cmd_exact)

    table_p = sub.add_parser("table", help="mean-propagation-time tables (grid / hypercube)")
    table_p.add_argument("family", choices=("grid", "hypercube"))
    table_p.add_argument("--m", default="2:14", help="grid row range LO:HI")
    table_p.add_argument("--n", default="2:14", help="grid column range LO:HI")
    table_p.add_argument("--dims", default="1:16", help="hypercube dimension range LO:HI")
    table_p.add_argument("--rule", default="standard")
    table_p.add_argument("--start", default="corner",
                         help="grid start policy (corner | center | vertex index)")
    table_p.add_argument("--trials", type=int, default=1000)
    table_p.add_argument("--seed", type=int, default=0)
    table_p.add_argument("--csv", default=None, help="also write a CSV twin with"
                         " std errors and bound columns")
    table_p.add_argument("--plot", default=None, help="also render a figure (PNG)")
    table_p.add_argument("--threads", type=int, default=None)
    table_p.add_argument("--out", default=None)
    table_p.set_defaults(func=cmd_table)

    prof_p = sub.add_parser("profile", help="dyadic doubling-time profile")
    add_common(prof_p)
    prof_p.add_argument("--start", default="0")
    prof_p.add_argument("--trials", type=int, default=1000)
    prof_p.add_argument("--max-steps", type=int, default=None)
    prof_p.add_argument("--plot", default=None, help="also render a figure (PNG)")
    prof_p.set_defaults(func=cmd_profile)

    bounds_p = sub.add_parser("bounds", help="closed-form bound reports for a graph")
    add_common(bounds_p)
    bounds_p.add_argument("--start", default="0")
    bounds_p.add_argument("--t", type=int, default=None,
                          help="step count for tail bounds")
    bounds_p.add_argument("--format", choices=("csv", "json", "table"), default="table")
    bounds_p.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
