"""Exact expected propagation time via the absorbing chain over blue sets.

Because blue sets only grow, the chain on subsets is acyclic apart from
self-loops, so expectations solve in one sweep over states in decreasing
cardinality order:

    E[all blue] = 0
    E[B] = (1 + sum over nonempty S of P(S | B) * E[B u S]) / (1 - P(0 | B))

where the frontier F(B) is the set of white vertices with a blue neighbor
and P(S | B) is the product of per-vertex absorption probabilities --
frontier vertices turn blue independently because their coin sets are
disjoint. The self-loop division is exact: every frontier vertex has
positive absorption probability for the supported rules.

Tail probabilities P(T > t) come from forward propagation of the state
distribution over the same chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .forcing import STANDARD
from .graphs import GraphError, bfs_distances, is_connected

DEFAULT_MAX_VERTICES = 20
DEFAULT_MAX_FRONTIER = 20
DEFAULT_TRANSITION_BUDGET = 10 ** 8
DEFAULT_TAIL_TOL = 1e-12
DEFAULT_T_MAX_CAP = 10 ** 4
RATIONAL_MAX_VERTICES = 6


class BudgetExceeded(RuntimeError):
    """State-space enumeration would blow the configured budget."""


@dataclass
class ExactResult:
    """Exact expectation and tail distribution of the propagation time."""

    expected_time: float
    tail: list
    start: tuple
    rule: str
    expected_time_exact: Fraction | None = None
    n_states: int = 0
    n_transitions: int = 0

    @property
    def t_max(self):
        return len(self.tail) - 1


def _absorption_probs(g, blue_mask, frontier, rule, exact):
    """Per-frontier-vertex absorption probabilities for one state."""
    probs = []
    for v in frontier:
        if rule.kind == "constant":
            p_edge = Fraction(rule.p).limit_denominator(10 ** 9) if exact else rule.p
            k = sum(1 for u in g.neighbors(v) if blue_mask >> int(u) & 1)
            stay = (1 - p_edge) ** k
        else:
            stay = Fraction(1) if exact else 1.0
            for u in g.neighbors(v):
                u = int(u)
                if blue_mask >> u & 1:
                    c = 1 + sum(1 for w in g.neighbors(u) if blue_mask >> int(w) & 1)
                    if exact:
                        stay *= 1 - Fraction(c, g.degree(u))
                    else:
                        stay *= 1.0 - c / g.degree(u)
        probs.append(1 - stay)
    return probs


def exact_ept(g, initial, rule=STANDARD, *, rational=False, compute_tail=True,
              max_vertices=DEFAULT_MAX_VERTICES, max_frontier=DEFAULT_MAX_FRONTIER,
              transition_budget=DEFAULT_TRANSITION_BUDGET,
              tail_tol=DEFAULT_TAIL_TOL, t_max_cap=DEFAULT_T_MAX_CAP):
    """Exact expected propagation time from an initial blue set.

    Supports the standard and constant(p) rules (p > 0). Raises
    BudgetExceeded when the subset chain is too large; use the Monte Carlo
    estimator in that case. ``rational=True`` switches the expectation to
    exact Fraction arithmetic (small graphs only).
    """
    if rule.kind not in ("standard", "constant"):
        raise ValueError(f"exact analysis supports standard/constant rules, not {rule.kind!r}")
    if rule.kind == "constant" and rule.p == 0.0:
        raise ValueError("constant(0) never terminates; expected time is infinite")
    initial = frozenset(int(v) for v in initial)
    if not initial:
        raise ValueError("initial blue set must be nonempty")
    for v in initial:
        if not 0 <= v < g.n:
            raise GraphError(f"initial vertex {v} out of range")
    if g.n > max_vertices:
        raise BudgetExceeded(
            f"graph has {g.n} vertices, exact oracle capped at {max_vertices}; "
            "use the Monte Carlo estimator instead")
    if rational and g.n > RATIONAL_MAX_VERTICES:
        raise BudgetExceeded(
            f"rational mode capped at {RATIONAL_MAX_VERTICES} vertices (got {g.n})")
    if not is_connected(g):
        raise GraphError("exact oracle requires a connected graph")

    n = g.n
    full = (1 << n) - 1
    init_mask = 0
    for v in initial:
        init_mask |= 1 << v

    # Discover reachable states and their frontiers.
    frontiers = {}  # mask -> (frontier tuple, probs list)
    order = []
    stack = [init_mask]
    seen = {init_mask}
    n_transitions = 0
    while stack:
        mask = stack.pop()
        order.append(mask)
        if mask == full:
            continue
        frontier = tuple(
            v for v in range(n)
            if not mask >> v & 1 and any(mask >> int(u) & 1 for u in g.neighbors(v)))
        if len(frontier) > max_frontier:
            raise BudgetExceeded(
                f"frontier of size {len(frontier)} exceeds cap {max_frontier}; "
                "use the Monte Carlo estimator instead")
        n_transitions += 1 << len(frontier)
        if n_transitions > transition_budget:
            raise BudgetExceeded(
                f"transition count exceeds budget {transition_budget}; "
                "use the Monte Carlo estimator instead")
        probs = _absorption_probs(g, mask, frontier, rule, exact=rational)
        frontiers[mask] = (frontier, probs)
        for sm in range(1, 1 << len(frontier)):
            succ = mask
            for i in range(len(frontier)):
                if sm >> i & 1:
                    succ |= 1 << frontier[i]
            if succ not in seen:
                seen.add(succ)
                stack.append(succ)

    # Solve expectations in decreasing-cardinality order.
    expect = {full: Fraction(0) if rational else 0.0}
    for mask in sorted(frontiers, key=lambda m: -bin(m).count("1")):
        frontier, probs = frontiers[mask]
        f = len(frontier)
        succ_masks = []
        for i in range(f):
            succ_masks.append(1 << frontier[i])
        p_empty = None
        terms = [Fraction(1) if rational else 1.0]
        for sm in range(1 << f):
            pr = Fraction(1) if rational else 1.0
            succ = mask
            for i in range(f):
                if sm >> i & 1:
                    pr *= probs[i]
                    succ |= succ_masks[i]
                else:
                    pr *= 1 - probs[i]
            if sm == 0:
                p_empty = pr
            else:
                terms.append(pr * expect[succ])
        total = sum(terms) if rational else math.fsum(terms)
        expect[mask] = total / (1 - p_empty)

    value = expect[init_mask]
    exact_value = value if rational else None
    value_f = float(value)

    # Tail by forward distribution propagation (always in floats).
    tail = []
    if compute_tail:
        float_probs = {}
        for mask, (frontier, probs) in frontiers.items():
            float_probs[mask] = (frontier, [float(p) for p in probs])
        dist = {init_mask: 1.0}
        absorbed = 1.0 if init_mask == full else 0.0
        if init_mask == full:
            dist = {}
        t = 0
        while True:
            tail_t = max(1.0 - absorbed, 0.0)
            tail.append(tail_t)
            if tail_t < tail_tol or t >= t_max_cap:
                break
            new = {}
            for mask, weight in dist.items():
                frontier, probs = float_probs[mask]
                f = len(frontier)
                for sm in range(1 << f):
                    pr = weight
                    succ = mask
                    for i in range(f):
                        if sm >> i & 1:
                            pr *= probs[i]
                            succ |= 1 << frontier[i]
                        else:
                            pr *= 1.0 - probs[i]
                    if succ == full:
                        absorbed += pr
                    else:
                        new[succ] = new.get(succ, 0.0) + pr
            dist = new
            t += 1

    assert value_f >= _set_eccentricity(g, initial) - 1e-9, \
        "expected time below start eccentricity"

    return ExactResult(
        expected_time=value_f,
        tail=tail,
        start=tuple(sorted(initial)),
        rule=rule.canonical(),
        expected_time_exact=exact_value,
        n_states=len(order),
        n_transitions=n_transitions,
    )


def _set_eccentricity(g, vertices):
    """Max over v of the distance from the set (min over members) to v."""
    best = [math.inf] * g.n
    for s in vertices:
        for v, d in enumerate(bfs_distances(g, s)):
            if d < best[v]:
                best[v] = d
    return max(best)


def exact_ept_min_over_starts(g, rule=STANDARD, **kwargs):
    """Argmin single-vertex start and its exact result (ties: lowest index)."""
    best_v, best = None, None
    for v in range(g.n):
        res = exact_ept(g, {v}, rule, **kwargs)
        if best is None or res.expected_time < best.expected_time:
            best_v, best = v, res
    return best_v, best
