"""Forcing rules, one synchronous step, and full simulated trials.

Rule semantics (one step, always synchronous against the start-of-step
blue set; blue vertices never revert):

  standard    for each blue u and white neighbor v, an independent coin
              succeeds with probability C[u]/deg(u), where C[u] counts the
              blue vertices in the closed neighborhood of u; v turns blue
              if any of its coins succeeds.
  constant:p  same coin structure with every per-edge probability equal
              to p.
  push        each blue vertex picks one neighbor uniformly at random;
              picked white vertices turn blue.
  pull        each white vertex picks one neighbor uniformly at random and
              turns blue if the pick is blue.
  pushpull    both effects in one step; a vertex turns blue once.
  classic     deterministic: every blue vertex with exactly one white
              neighbor forces it.

Because the per-edge coins aimed at one white vertex v touch no other
vertex, each step is equivalent to drawing a single uniform per frontier
vertex against its union probability 1 - prod(1 - coin). That is how both
the compiled kernels and the reference ``step`` sample, one lane per
vertex, so replayed trajectories are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import GraphError
from .rng import SEED_MASK, CounterRng, _split_seed, _split_trial

RULE_KINDS = ("standard", "constant", "push", "pull", "push_pull", "classic")

MAX_STEP_CAP = 2 ** 31 - 1  # step index must fit the 32-bit counter word


@dataclass(frozen=True)
class ForcingRule:
    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "constant":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("constant rule needs a probability in [0, 1]")
        elif self.p is not None:
            raise ValueError(f"rule {self.kind!r} takes no probability")

    def canonical(self):
        if self.kind == "constant":
            return f"constant:{self.p:g}"
        return "pushpull" if self.kind == "push_pull" else self.kind


STANDARD = ForcingRule("standard")
PUSH = ForcingRule("push")
PULL = ForcingRule("pull")
PUSH_PULL = ForcingRule("push_pull")
CLASSIC = ForcingRule("classic")


def constant_rule(p):
    return ForcingRule("constant", float(p))


def parse_rule(text):
    """Parse a rule string: standard | constant:P | push | pull | pushpull | classic."""
    text = text.strip().lower()
    name, sep, rest = text.partition(":")
    name = name.replace("-", "").replace("_", "")
    if name == "standard":
        rule = STANDARD
    elif name == "push":
        rule = PUSH
    elif name == "pull":
        rule = PULL
    elif name == "pushpull":
        rule = PUSH_PULL
    elif name == "classic":
        rule = CLASSIC
    elif name == "constant":
        if not sep or not rest:
            raise ValueError("constant rule needs a probability, e.g. constant:0.25")
        try:
            p = float(rest)
        except ValueError:
            raise ValueError(f"bad probability {rest!r} in rule string") from None
        return constant_rule(p)
    else:
        raise ValueError(f"unknown rule {text!r}")
    if sep:
        raise ValueError(f"rule {name!r} takes no parameter")
    return rule


def _as_blue_set(blue):
    return blue if isinstance(blue, (set, frozenset)) else set(int(v) for v in blue)


# ---------------------------------------------------------------------------
# Scalar probability operations
# ---------------------------------------------------------------------------

def closed_blue_count(g, blue, u):
    """Number of blue vertices in the closed neighborhood of blue vertex u."""
    blue = _as_blue_set(blue)
    if u not in blue:
        raise ValueError(f"closed_blue_count requires a blue vertex, {u} is white")
    return 1 + sum(1 for w in g.neighbors(u) if int(w) in blue)


def force_probability(g, blue, u, v, rule=STANDARD):
    """Probability that blue u forces white neighbor v in one step."""
    if rule.kind not in ("standard", "constant"):
        raise ValueError(f"rule {rule.kind!r} has no per-edge forcing probability")
    blue = _as_blue_set(blue)
    if u not in blue:
        raise ValueError(f"forcing vertex {u} is not blue")
    if v in blue:
        raise ValueError(f"target vertex {v} is already blue")
    if not g.has_edge(u, v):
        raise ValueError(f"vertices {u} and {v} are not adjacent")
    if rule.kind == "constant":
        return rule.p
    return closed_blue_count(g, blue, u) / g.degree(u)


def vertex_absorption_prob(g, blue, v, rule=STANDARD):
    """Probability that white v turns blue in one step: 1 - prod(1 - coin).

    Zero when v has no blue neighbor. Multiplication runs over sorted blue
    neighbors, matching the compiled kernels bit for bit.
    """
    if rule.kind not in ("standard", "constant"):
        raise ValueError(f"rule {rule.kind!r} has no closed-form absorption probability")
    blue = _as_blue_set(blue)
    if v in blue:
        raise ValueError(f"vertex {v} is already blue")
    prod = 1.0
    for u in g.neighbors(v):
        u = int(u)
        if u in blue:
            if rule.kind == "constant":
                prod *= 1.0 - rule.p
            else:
                bc = sum(1 for w in g.neighbors(u) if int(w) in blue)
                prod *= 1.0 - (bc + 1.0) / g.degree(u)
    return 1.0 - prod


# ---------------------------------------------------------------------------
# One synchronous step (reference implementation)
# ---------------------------------------------------------------------------

def step(g, blue, rule, rng):
    """Advance one synchronous step; returns the new blue set.

    ``rng`` is a CounterRng; each call consumes exactly one step of its
    stream regardless of rule, keeping replay aligned with run_trial.
    """
    blue = _as_blue_set(blue)
    if not blue:
        raise ValueError("step requires at least one blue vertex")
    n = g.n
    new = set(blue)

    if rule.kind in ("standard", "constant"):
        frontier = [v for v in range(n)
                    if v not in blue and any(int(w) in blue for w in g.neighbors(v))]
        draws = rng.uniforms(np.asarray(frontier, dtype=np.int64))
        for v, u in zip(frontier, draws):
            if u < vertex_absorption_prob(g, blue, v, rule):
                new.add(v)
    elif rule.kind in ("push", "pull", "push_pull"):
        do_push = rule.kind in ("push", "push_pull")
        do_pull = rule.kind in ("pull", "push_pull")
        draws = rng.uniforms(np.arange(n, dtype=np.int64))
        for v in range(n):
            deg = g.degree(v)
            if deg == 0:
                continue
            if v in blue:
                if do_push:
                    pick = int(g.neighbors(v)[min(int(draws[v] * deg), deg - 1)])
                    if pick not in blue:
                        new.add(pick)
            elif do_pull:
                pick = int(g.neighbors(v)[min(int(draws[v] * deg), deg - 1)])
                if pick in blue:
                    new.add(v)
    elif rule.kind == "classic":
        rng.skip()
        for u in blue:
            whites = [int(w) for w in g.neighbors(u) if int(w) not in blue]
            if len(whites) == 1:
                new.add(whites[0])
    else:  # pragma: no cover
        raise ValueError(f"unhandled rule {rule.kind!r}")
    return frozenset(new)


# ---------------------------------------------------------------------------
# Full trials
# ---------------------------------------------------------------------------

@dataclass
class TrialRecord:
    """One simulated run: time, per-step blue counts, and seed identity."""

    propagation_time: int | None
    blue_counts: list
    trial_index: int
    seed: int
    states: list | None = None

    @property
    def terminated(self):
        return self.propagation_time is not None


def default_max_steps(g):
    return min(1000 * g.n, MAX_STEP_CAP)


def run_trial(g, initial, rule, seed, trial_index=0, max_steps=None,
              record_states=False):
    """Run one trial to completion or cutoff; fully determined by (seed, trial).

    Non-termination (cutoff hit, or a frozen state no rule can leave) gives
    ``propagation_time = None``. ``record_states`` switches to the slower
    reference loop and attaches the per-step blue sets.
    """
    initial = frozenset(int(v) for v in initial)
    if not initial:
        raise ValueError("initial blue set must be nonempty")
    for v in initial:
        if not 0 <= v < g.n:
            raise GraphError(f"initial vertex {v} out of range")
    seed = int(seed) & SEED_MASK
    if max_steps is None:
        max_steps = default_max_steps(g)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    max_steps = min(max_steps, MAX_STEP_CAP)

    if record_states:
        return _run_trial_reference(g, initial, rule, seed, trial_index, max_steps)

    from . import _kernels

    n = g.n
    blue = np.zeros(n, dtype=np.uint8)
    blue[list(initial)] = 1
    cnt = np.zeros(n, dtype=np.int64)
    _kernels.init_blue_neighbor_counts(g.indptr, g.indices, blue, cnt)
    nblue = len(initial)
    counts = [nblue]
    buf = np.empty(min(max_steps, 4096) + 1, dtype=np.int64)
    s_lo, s_hi = _split_seed(seed)
    t_lo, t_hi = _split_trial(trial_index)
    steps_done = 0
    remaining = max_steps
    frozen = False

    while nblue < n and remaining > 0 and not frozen:
        budget = min(remaining, buf.size - 1)
        if rule.kind in ("standard", "constant"):
            p_const = rule.p if rule.kind == "constant" else -1.0
            taken, nblue, frozen = _kernels.run_absorb(
                g.indptr, g.indices, g.degrees, blue, cnt, nblue,
                s_lo, s_hi, t_lo, t_hi, steps_done, budget, p_const, buf)
        elif rule.kind in ("push", "pull", "push_pull"):
            taken, nblue, frozen = _kernels.run_pushpull(
                g.indptr, g.indices, blue, cnt, nblue,
                s_lo, s_hi, t_lo, t_hi, steps_done, budget,
                rule.kind != "pull", rule.kind != "push", buf)
        elif rule.kind == "classic":
            taken, nblue, frozen = _kernels.run_classic(
                g.indptr, g.indices, blue, cnt, nblue, steps_done, budget, buf)
        else:  # pragma: no cover
            raise ValueError(f"unhandled rule {rule.kind!r}")
        counts.extend(int(c) for c in buf[1:taken + 1])
        steps_done += taken
        remaining -= taken

    time = steps_done if nblue == n else None
    return TrialRecord(time, counts, trial_index, seed)


def _run_trial_reference(g, initial, rule, seed, trial_index, max_steps):
    rng = CounterRng(seed, trial_index)
    state = initial
    counts = [len(state)]
    states = [state]
    steps = 0
    while len(state) < g.n and steps < max_steps:
        has_frontier = any(
            int(w) not in state for v in state for w in g.neighbors(v))
        if not has_frontier:
            break
        new = step(g, state, rule, rng)
        if rule.kind == "classic" and new == state:
            break
        state = new
        steps += 1
        counts.append(len(state))
        states.append(state)
    time = steps if len(state) == g.n else None
    return TrialRecord(time, counts, trial_index, seed, states=states)
