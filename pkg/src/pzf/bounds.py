"""Closed-form propagation-time bounds for annotating experiment output.

Logarithm conventions: the hypercube edge-isoperimetric bound uses log2 as
stated; the star-tail threshold, the regular-graph upper bound, and the
hypercube upper bound use natural logs (their constants are e-based).
Asymptotic slack (o(1), additive O(log n)) is never folded into numbers;
bounds carrying it are flagged as asymptotic in their report note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import eccentricity


@dataclass(frozen=True)
class BoundReport:
    """A named numeric bound plus its applicability condition."""

    name: str
    value: float
    applicable: bool = True
    note: str = ""


def grid_bounds(m, n):
    """(lower, upper) for the m x n grid: exact corner-distance lower bound
    (m+n-2)/2 and asymptotic upper bound 4(m+n)."""
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be >= 1")
    return (m + n - 2) / 2, 4.0 * (m + n)


def diameter_bound(n, d):
    """Diameter bound 3n/(d+1) for connected d-regular graphs on n vertices."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return 3.0 * n / (d + 1)


def regular_upper_bound(n, d):
    """Leading term 60 log((d+1)/3)/(d+1) * n of the d-regular upper bound.

    Natural log. The additive O(log n) term is not quantifiable and is
    omitted; callers get a degenerate-leading-term flag via
    regular_bound_report when log((d+1)/3) <= 1.
    """
    if d < 2:
        raise ValueError("regular upper bound needs d >= 2")
    if n < d + 1:
        raise ValueError("a d-regular graph needs n >= d+1")
    return 60.0 * math.log((d + 1) / 3.0) / (d + 1) * n


def hypercube_upper_bound(dim):
    """Upper bound 2 * 131 dim (1 + log dim) + e/(e-1) for the dim-cube."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return 2.0 * 131.0 * dim * (1.0 + math.log(dim)) + math.e / (math.e - 1.0)


def star_tail_bound(leaves, t):
    """Failure-probability bound 0.97^t for a center-started star.

    Applicable only for t > 12 log(leaves + 1) (natural log); below the
    threshold the value is reported but flagged inapplicable.
    """
    if leaves < 1:
        raise ValueError("star needs at least 1 leaf")
    threshold = 12.0 * math.log(leaves + 1)
    applicable = t > threshold
    note = "" if applicable else f"requires t > 12 log(leaves+1) = {threshold:.3f}"
    return BoundReport("star_tail", 0.97 ** t, applicable, note)


def isoperimetric_lower(dim, set_size):
    """Hypercube edge-boundary lower bound |S| (dim - log2 |S|)."""
    if not 1 <= set_size <= (1 << dim):
        raise ValueError("set size must be in [1, 2^dim]")
    return set_size * (dim - math.log2(set_size))


def summary_bounds(g, start):
    """(lower, upper) annotations for an ept estimate; upper may be None.

    The lower bound is family-aware: (m+n-2)/2 on grids, otherwise the
    start vertex's eccentricity (a universal per-trial floor). Upper bounds
    exist for grids, hypercubes, and the d-regular families and carry
    asymptotic slack.
    """
    ecc = eccentricity(g, start)
    lower = float(ecc) if ecc != math.inf else math.inf
    upper = None
    if g.family == "grid":
        m, n = g.params
        lower, upper = grid_bounds(m, n)
    elif g.family == "hypercube":
        upper = hypercube_upper_bound(g.params[0])
    elif g.family == "cliquering":
        d, nv = g.params
        if math.log((d + 1) / 3.0) > 0:
            upper = regular_upper_bound(nv, d)
    elif g.family == "complete":
        nv = g.params[0]
        if nv >= 4 and math.log(nv / 3.0) > 0:
            upper = regular_upper_bound(nv, nv - 1)
    # cycles are 2-regular but their leading term degenerates (log 1 = 0),
    # so no meaningful upper bound is attached
    return lower, upper


def bound_reports(g, start=0, t=None):
    """All bounds applicable to a graph, as BoundReport rows for the CLI."""
    reports = []
    if g.family == "grid":
        m, n = g.params
        lo, hi = grid_bounds(m, n)
        reports.append(BoundReport("grid_lower", lo, True, "exact corner-distance bound"))
        reports.append(BoundReport("grid_upper", hi, True, "asymptotic: o(1)(m+n) slack dropped"))
    if g.family == "hypercube":
        dim = g.params[0]
        reports.append(BoundReport("hypercube_upper", hypercube_upper_bound(dim), True,
                                   "asymptotic additive terms retained"))
        reports.append(BoundReport("isoperimetric_single_vertex",
                                   isoperimetric_lower(dim, 1), True,
                                   "edge boundary of a one-vertex set"))
    if g.family in ("cliquering", "complete"):
        if g.family == "cliquering":
            d, n = g.params
        else:
            n = g.params[0]
            d = n - 1
        reports.append(BoundReport("diameter_bound", diameter_bound(n, d), True,
                                   "3n/(d+1) for connected d-regular graphs"))
        if d >= 2:
            value = regular_upper_bound(n, d)
            lead = math.log((d + 1) / 3.0)
            note = "leading term only; additive O(log n) omitted"
            if lead <= 1.0:
                note += "; weak leading term for d+1 <= 3e"
            reports.append(BoundReport("regular_upper", value, lead > 0.0, note))
    if g.family == "star":
        leaves = g.params[0]
        if t is not None:
            reports.append(star_tail_bound(leaves, t))
        else:
            threshold = 12.0 * math.log(leaves + 1)
            reports.append(BoundReport("star_tail_threshold", threshold, True,
                                       "tail bound 0.97^t applies for t above this"))
    ecc = eccentricity(g, start)
    if ecc != math.inf:
        reports.append(BoundReport("eccentricity_lower", float(ecc), True,
                                   f"hop distance floor from start {start}"))
    return reports
