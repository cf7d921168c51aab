"""Seeded trial ensembles: mean estimates, dyadic-level profiles, tails.

All statistics are aggregated from integer per-trial outcomes using exact
integer sums, so results are bit-identical no matter how trials are
chunked across worker processes. Each trial's randomness is fixed by
(master seed, trial index) alone; see rng.py.

The PZF_THREADS environment variable caps (and, when set, defaults) the
worker-process count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from multiprocessing import get_context

from .forcing import STANDARD, default_max_steps, run_trial
from .graphs import GraphError, eccentricity

_CHUNKS_PER_WORKER = 4


@dataclass
class EptSummary:
    """Aggregated propagation-time statistics for one (graph, start, rule)."""

    graph: str
    rule: str
    start: int
    trials: int
    seed: int
    mean: float
    variance: float
    std_error: float
    min_time: int | None
    max_time: int | None
    cutoff_trials: int
    eccentricity: int


@dataclass
class LevelStat:
    """Mean steps spent per dyadic level of the blue / white counts."""

    k: int
    blue_mean: float
    white_mean: float


@dataclass
class DoublingProfile:
    graph: str
    rule: str
    start: int
    trials: int
    seed: int
    levels: list
    final_white_mean: float
    mean_time: float
    cutoff_trials: int


@dataclass
class TailEstimate:
    graph: str
    rule: str
    start: int
    trials: int
    seed: int
    t: int
    probability: float
    std_error: float
    exceed_count: int


@dataclass
class MinStartsResult:
    best_vertex: int
    best: EptSummary
    candidates: list


def resolve_workers(workers=None):
    """Effective worker count: explicit request capped by PZF_THREADS."""
    env = os.environ.get("PZF_THREADS")
    cap = None
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ValueError(f"PZF_THREADS must be an integer, got {env!r}") from None
    if workers is None:
        workers = cap if cap is not None else 1
    workers = max(1, int(workers))
    if cap is not None:
        workers = min(workers, cap)
    return workers


# ---------------------------------------------------------------------------
# Trial execution
# ---------------------------------------------------------------------------

def _times_for_range(g, start, rule, seed, max_steps, ecc, lo, hi):
    out = []
    for idx in range(lo, hi):
        rec = run_trial(g, {start}, rule, seed, idx, max_steps)
        t = rec.propagation_time
        if t is not None and t < ecc:
            raise AssertionError(
                f"trial {idx}: propagation time {t} below start eccentricity {ecc}")
        out.append(-1 if t is None else t)
    return out


_WORKER_CTX = None


def _worker_init(g, start, rule, seed, max_steps, ecc):
    global _WORKER_CTX
    _WORKER_CTX = (g, start, rule, seed, max_steps, ecc)


def _worker_range(bounds):
    g, start, rule, seed, max_steps, ecc = _WORKER_CTX
    return _times_for_range(g, start, rule, seed, max_steps, ecc, *bounds)


def _simulate_times(g, start, rule, trials, seed, max_steps, workers):
    """Propagation time per trial index (-1 for cutoff), order-stable."""
    ecc = eccentricity(g, start)
    if ecc == math.inf:
        raise GraphError("start vertex cannot reach the whole graph")
    if workers <= 1 or trials < 2 * workers:
        return _times_for_range(g, start, rule, seed, max_steps, ecc, 0, trials), ecc

    n_chunks = min(trials, workers * _CHUNKS_PER_WORKER)
    bounds = []
    base = trials // n_chunks
    extra = trials % n_chunks
    lo = 0
    for i in range(n_chunks):
        hi = lo + base + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    ctx = get_context("fork")
    with ctx.Pool(processes=workers, initializer=_worker_init,
                  initargs=(g, start, rule, seed, max_steps, ecc)) as pool:
        chunks = pool.map(_worker_range, bounds)
    times = []
    for chunk in chunks:
        times.extend(chunk)
    return times, ecc


def _int_stats(times):
    """Exact integer-sum statistics over terminated trials."""
    term = [t for t in times if t >= 0]
    nt = len(term)
    cutoff = len(times) - nt
    if nt == 0:
        return nt, cutoff, math.nan, math.nan, math.nan, None, None
    s1 = sum(term)
    mean = s1 / nt
    if nt == 1:
        return nt, cutoff, mean, math.nan, math.nan, term[0], term[0]
    s2 = sum(t * t for t in term)
    var_num = nt * s2 - s1 * s1
    variance = var_num / (nt * (nt - 1))
    std_error = math.sqrt(variance / nt)
    return nt, cutoff, mean, variance, std_error, min(term), max(term)


def estimate_ept(g, start, rule=STANDARD, trials=1000, seed=0, max_steps=None,
                 workers=None):
    """Monte Carlo estimate of the expected propagation time from one start.

    Runs trial indices 0..trials-1; deterministic given the seed. Trials
    that hit the step cutoff are excluded from the statistics and counted
    in ``cutoff_trials``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    start = int(start)
    if not 0 <= start < g.n:
        raise GraphError(f"start vertex {start} out of range")
    if max_steps is None:
        max_steps = default_max_steps(g)
    workers = resolve_workers(workers)
    times, ecc = _simulate_times(g, start, rule, trials, seed, max_steps, workers)
    nt, cutoff, mean, variance, std_error, tmin, tmax = _int_stats(times)
    return EptSummary(
        graph=g.label or f"n={g.n}", rule=rule.canonical(), start=start,
        trials=trials, seed=int(seed), mean=mean, variance=variance,
        std_error=std_error, min_time=tmin, max_time=tmax,
        cutoff_trials=cutoff, eccentricity=ecc)


def default_start_candidates(g):
    """Start-vertex candidates: grid corner/edge-midpoint/center classes,
    every vertex on small graphs, otherwise vertex 0 plus a graph center."""
    if g.family == "grid":
        m, n = g.params
        corner = 0
        edge_mid = (m - 1) // 2
        center = (m - 1) // 2 + m * ((n - 1) // 2)
        return sorted(set((corner, edge_mid, center)))
    if g.n <= 12:
        return list(range(g.n))
    if g.n <= 2048:
        eccs = [eccentricity(g, v) for v in range(g.n)]
        best = min(range(g.n), key=lambda v: (eccs[v], v))
        return sorted({0, best})
    return [0]


def estimate_ept_min_over_starts(g, candidates=None, rule=STANDARD, trials=1000,
                                 seed=0, max_steps=None, workers=None):
    """Estimate each candidate start and pick the minimizer by mean
    (ties: lowest vertex index). Candidates share the seed, so comparisons
    use common random numbers."""
    if candidates is None:
        candidates = default_start_candidates(g)
    candidates = sorted(set(int(v) for v in candidates))
    if not candidates:
        raise ValueError("candidate start list must be nonempty")
    summaries = [estimate_ept(g, v, rule, trials, seed, max_steps, workers)
                 for v in candidates]
    best = min(range(len(candidates)),
               key=lambda i: (summaries[i].mean, candidates[i]))
    return MinStartsResult(candidates[best], summaries[best], summaries)


def doubling_profile(g, start, rule=STANDARD, trials=1000, seed=0, max_steps=None):
    """Mean steps spent per dyadic blue-count and white-count level.

    Level k counts steps taken while the blue count lies in [2^k, 2^(k+1)),
    respectively while the white count lies in (2^k, 2^(k+1)]; steps with a
    single white vertex left are reported separately. Both decompositions
    partition every terminated trial, so level sums reconcile exactly with
    the mean propagation time.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    start = int(start)
    if max_steps is None:
        max_steps = default_max_steps(g)
    n = g.n
    n_levels = max(1, (n - 1).bit_length())
    blue_steps = [0] * n_levels
    white_steps = [0] * n_levels
    final_steps = 0
    total_time = 0
    nt = 0
    cutoff = 0
    ecc = eccentricity(g, start)
    for idx in range(trials):
        rec = run_trial(g, {start}, rule, seed, idx, max_steps)
        if rec.propagation_time is None:
            cutoff += 1
            continue
        if rec.propagation_time < ecc:
            raise AssertionError(
                f"trial {idx}: propagation time below start eccentricity")
        nt += 1
        total_time += rec.propagation_time
        for t in range(rec.propagation_time):
            b = rec.blue_counts[t]
            w = n - b
            blue_steps[b.bit_length() - 1] += 1
            if w == 1:
                final_steps += 1
            else:
                white_steps[(w - 1).bit_length() - 1] += 1
    if nt == 0:
        levels = [LevelStat(k, math.nan, math.nan) for k in range(n_levels)]
        return DoublingProfile(g.label or f"n={n}", rule.canonical(), start,
                               trials, int(seed), levels, math.nan, math.nan, cutoff)
    levels = [LevelStat(k, blue_steps[k] / nt, white_steps[k] / nt)
              for k in range(n_levels)]
    return DoublingProfile(
        graph=g.label or f"n={n}", rule=rule.canonical(), start=start,
        trials=trials, seed=int(seed), levels=levels,
        final_white_mean=final_steps / nt, mean_time=total_time / nt,
        cutoff_trials=cutoff)


def tail_estimate(g, start, rule=STANDARD, trials=1000, seed=0, t=0,
                  max_steps=None, workers=None):
    """Empirical P(propagation time > t) with its binomial standard error.

    Cutoff trials count as exceeding (their time is beyond the cutoff, and
    t must lie below it).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t = int(t)
    if max_steps is None:
        max_steps = default_max_steps(g)
    if t >= max_steps:
        raise ValueError(f"t={t} must be below max_steps={max_steps}")
    workers = resolve_workers(workers)
    times, _ = _simulate_times(g, start, rule, trials, seed, max_steps, workers)
    exceed = sum(1 for x in times if x < 0 or x > t)
    p = exceed / trials
    se = math.sqrt(p * (1.0 - p) / trials)
    return TailEstimate(
        graph=g.label or f"n={g.n}", rule=rule.canonical(), start=int(start),
        trials=trials, seed=int(seed), t=t, probability=p, std_error=se,
        exceed_count=exceed)
