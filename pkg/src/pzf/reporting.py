"""Result serialization: stable CSV, schema-validated JSON, fixed tables.

Floats in JSON are written with 17 significant digits so re-parsing
recovers the in-memory value exactly; NaN statistics (e.g. every trial hit
the cutoff) become null. The summary CSV schema is frozen:

    graph,rule,start,trials,seed,mean,variance,std_error,min,max,lower_bound,upper_bound
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import jsonschema

from .forcing import parse_rule
from .graphs import parse_graph_spec

SUMMARY_CSV_HEADER = ("graph,rule,start,trials,seed,mean,variance,std_error,"
                      "min,max,lower_bound,upper_bound")

START_POLICIES = ("corner", "center", "min")


def float17(x):
    """17-significant-digit decimal form; round-trips float64 exactly."""
    return format(float(x), ".17g")


def _num(x):
    """Finite float for serialization; None for NaN/inf/None."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return None
    return x


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return "nan" if math.isnan(x) else float17(x)
    return csv_quote(str(x))


def csv_quote(text):
    """Minimal CSV quoting for fields containing separators or quotes."""
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def json_dumps(obj, indent=0):
    """JSON with deterministic key order and 17-digit floats."""
    parts = []
    _emit(obj, parts)
    text = "".join(parts)
    if indent:
        return json.dumps(json.loads(text), indent=indent)
    return text


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append("null" if (math.isnan(obj) or math.isinf(obj)) else float17(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _emit(v, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# JSON schemas
# ---------------------------------------------------------------------------

_NUM_OR_NULL = {"type": ["number", "null"]}
_INT_OR_NULL = {"type": ["integer", "null"]}

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["graph", "rule", "start", "trials", "seed", "mean", "variance",
                 "std_error", "min", "max", "cutoff_trials", "eccentricity",
                 "lower_bound", "upper_bound"],
    "properties": {
        "graph": {"type": "string"},
        "rule": {"type": "string"},
        "start": {"type": "integer"},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "mean": _NUM_OR_NULL,
        "variance": _NUM_OR_NULL,
        "std_error": _NUM_OR_NULL,
        "min": _INT_OR_NULL,
        "max": _INT_OR_NULL,
        "cutoff_trials": {"type": "integer", "minimum": 0},
        "eccentricity": {"type": "integer", "minimum": 0},
        "lower_bound": _NUM_OR_NULL,
        "upper_bound": _NUM_OR_NULL,
        "tail": {
            "type": "object",
            "required": ["t", "probability", "std_error", "exceed_count"],
            "properties": {
                "t": {"type": "integer"},
                "probability": {"type": "number"},
                "std_error": {"type": "number"},
                "exceed_count": {"type": "integer"},
            },
        },
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["start", "mean", "std_error"],
            },
        },
    },
    "additionalProperties": False,
}

EXACT_SCHEMA = {
    "type": "object",
    "required": ["graph", "rule", "start", "expected_time", "expected_time_exact",
                 "t_max", "tail", "n_states", "n_transitions"],
    "properties": {
        "graph": {"type": "string"},
        "rule": {"type": "string"},
        "start": {"type": "array", "items": {"type": "integer"}},
        "expected_time": {"type": "number"},
        "expected_time_exact": {"type": ["string", "null"]},
        "t_max": {"type": "integer"},
        "tail": {"type": "array", "items": {"type": "number"}},
        "n_states": {"type": "integer"},
        "n_transitions": {"type": "integer"},
    },
    "additionalProperties": False,
}

PROFILE_SCHEMA = {
    "type": "object",
    "required": ["graph", "rule", "start", "trials", "seed", "levels",
                 "final_white_mean", "mean_time", "cutoff_trials"],
    "properties": {
        "graph": {"type": "string"},
        "rule": {"type": "string"},
        "start": {"type": "integer"},
        "trials": {"type": "integer"},
        "seed": {"type": "integer"},
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "blue_mean", "white_mean"],
                "properties": {
                    "k": {"type": "integer"},
                    "blue_mean": _NUM_OR_NULL,
                    "white_mean": _NUM_OR_NULL,
                    "blue_bound": _NUM_OR_NULL,
                },
                "additionalProperties": False,
            },
        },
        "final_white_mean": _NUM_OR_NULL,
        "mean_time": _NUM_OR_NULL,
        "cutoff_trials": {"type": "integer"},
    },
    "additionalProperties": False,
}


def validate(payload, schema):
    jsonschema.validate(payload, schema)
    return payload


# ---------------------------------------------------------------------------
# Record -> dict / CSV
# ---------------------------------------------------------------------------

def summary_to_dict(s, lower=None, upper=None, tail=None, candidates=None):
    payload = {
        "graph": s.graph,
        "rule": s.rule,
        "start": s.start,
        "trials": s.trials,
        "seed": s.seed,
        "mean": _num(s.mean),
        "variance": _num(s.variance),
        "std_error": _num(s.std_error),
        "min": s.min_time,
        "max": s.max_time,
        "cutoff_trials": s.cutoff_trials,
        "eccentricity": s.eccentricity,
        "lower_bound": _num(lower),
        "upper_bound": _num(upper),
    }
    if tail is not None:
        payload["tail"] = {
            "t": tail.t,
            "probability": tail.probability,
            "std_error": tail.std_error,
            "exceed_count": tail.exceed_count,
        }
    if candidates is not None:
        payload["candidates"] = [
            {"start": c.start, "mean": _num(c.mean), "std_error": _num(c.std_error)}
            for c in candidates]
    return validate(payload, SUMMARY_SCHEMA)


def summary_csv_row(s, lower=None, upper=None):
    cells = [s.graph, s.rule, s.start, s.trials, s.seed, s.mean, s.variance,
             s.std_error, s.min_time, s.max_time,
             _num(lower), _num(upper)]
    return ",".join(_cell(c) for c in cells)


def summary_csv(s, lower=None, upper=None):
    return SUMMARY_CSV_HEADER + "\n" + summary_csv_row(s, lower, upper) + "\n"


def exact_to_dict(res, graph_label):
    frac = res.expected_time_exact
    payload = {
        "graph": graph_label,
        "rule": res.rule,
        "start": list(res.start),
        "expected_time": res.expected_time,
        "expected_time_exact": None if frac is None else f"{frac.numerator}/{frac.denominator}",
        "t_max": res.t_max,
        "tail": [float(x) for x in res.tail],
        "n_states": res.n_states,
        "n_transitions": res.n_transitions,
    }
    return validate(payload, EXACT_SCHEMA)


def profile_to_dict(p, level_bounds=None):
    levels = []
    for ls in p.levels:
        entry = {"k": ls.k, "blue_mean": _num(ls.blue_mean),
                 "white_mean": _num(ls.white_mean)}
        if level_bounds is not None and ls.k in level_bounds:
            entry["blue_bound"] = level_bounds[ls.k]
        levels.append(entry)
    payload = {
        "graph": p.graph,
        "rule": p.rule,
        "start": p.start,
        "trials": p.trials,
        "seed": p.seed,
        "levels": levels,
        "final_white_mean": _num(p.final_white_mean),
        "mean_time": _num(p.mean_time),
        "cutoff_trials": p.cutoff_trials,
    }
    return validate(payload, PROFILE_SCHEMA)


# ---------------------------------------------------------------------------
# Tables (two decimals, round-half-even like the reference tables)
# ---------------------------------------------------------------------------

def format_summary_table(s, lower=None, upper=None):
    rows = [
        ("graph", s.graph), ("rule", s.rule), ("start", s.start),
        ("trials", s.trials), ("seed", s.seed),
        ("mean", _fmt2(s.mean)), ("variance", _fmt2(s.variance)),
        ("std_error", "nan" if _num(s.std_error) is None else f"{s.std_error:.4f}"),
        ("min", s.min_time), ("max", s.max_time),
        ("cutoff_trials", s.cutoff_trials), ("eccentricity", s.eccentricity),
        ("lower_bound", _fmt2(lower)), ("upper_bound", _fmt2(upper)),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


def _fmt2(x):
    return "" if _num(x) is None else f"{float(x):.2f}"


def format_grid_table(means, m_values, n_values):
    """Two-decimal table of grid means: rows m, columns n."""
    header = ["ept"] + [str(n) for n in n_values]
    body = []
    for m in m_values:
        body.append([str(m)] + [_fmt2(means.get((m, n))) for n in n_values])
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(f"{cell:>{widths[i]}}" for i, cell in enumerate(row))
             for row in [header] + body]
    return "\n".join(lines) + "\n"


def format_hypercube_table(means, dims):
    header = ["n", "ept"]
    body = [[str(d), _fmt2(means.get(d))] for d in dims]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(2)]
    lines = ["  ".join(f"{cell:>{widths[i]}}" for i, cell in enumerate(row))
             for row in [header] + body]
    return "\n".join(lines) + "\n"


GRID_TABLE_CSV_HEADER = ("m,n,start,trials,seed,mean,variance,std_error,"
                         "lower_bound,upper_bound,mean_over_m_plus_n")

HYPERCUBE_TABLE_CSV_HEADER = ("dim,start,trials,seed,mean,variance,std_error,"
                              "upper_bound,mean_minus_dim")


def grid_table_csv(summaries):
    """CSV twin of the grid table; summaries maps (m, n) -> EptSummary."""
    from .bounds import grid_bounds
    lines = [GRID_TABLE_CSV_HEADER]
    for (m, n), s in sorted(summaries.items()):
        lo, hi = grid_bounds(m, n)
        advisory = s.mean / (m + n) if _num(s.mean) is not None else None
        cells = [m, n, s.start, s.trials, s.seed, s.mean, s.variance, s.std_error,
                 lo, hi, advisory]
        lines.append(",".join(_cell(c) for c in cells))
    return "\n".join(lines) + "\n"


def hypercube_table_csv(summaries):
    """CSV twin of the hypercube table; summaries maps dim -> EptSummary."""
    from .bounds import hypercube_upper_bound
    lines = [HYPERCUBE_TABLE_CSV_HEADER]
    for dim, s in sorted(summaries.items()):
        advisory = s.mean - dim if _num(s.mean) is not None else None
        cells = [dim, s.start, s.trials, s.seed, s.mean, s.variance, s.std_error,
                 hypercube_upper_bound(dim), advisory]
        lines.append(",".join(_cell(c) for c in cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """One command invocation, normalizable to canonical strings."""

    graph: str
    rule: str = "standard"
    start: str = "0"
    trials: int = 1000
    seed: int = 0
    max_steps: int | None = None
    fmt: str = "table"
    tail_t: int | None = None

    def normalized(self):
        graph = parse_graph_spec(self.graph).canonical()
        rule = parse_rule(self.rule).canonical()
        start = normalize_start_policy(self.start)
        if self.fmt not in ("csv", "json", "table"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        return RunConfig(graph, rule, start, int(self.trials), int(self.seed),
                         self.max_steps, self.fmt, self.tail_t)

    def to_dict(self):
        return {
            "graph": self.graph, "rule": self.rule, "start": self.start,
            "trials": self.trials, "seed": self.seed, "max_steps": self.max_steps,
            "format": self.fmt, "tail_t": self.tail_t,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["graph"], d.get("rule", "standard"), d.get("start", "0"),
                   d.get("trials", 1000), d.get("seed", 0), d.get("max_steps"),
                   d.get("format", "table"), d.get("tail_t"))


def normalize_start_policy(text):
    text = str(text).strip().lower()
    if text in ("min", "min-over-all", "minoverall", "min_over_all"):
        return "min"
    if text in START_POLICIES:
        return text
    try:
        return str(int(text))
    except ValueError:
        raise ValueError(
            f"start must be a vertex index, 'corner', 'center', or 'min-over-all'; "
            f"got {text!r}") from None
