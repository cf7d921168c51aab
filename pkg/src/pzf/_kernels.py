"""Compiled per-trial simulation loops.

Each kernel advances one trial from its current state for up to ``budget``
synchronous steps, mutating the ``blue`` / ``cnt`` arrays in place and
recording the blue count after every step in ``counts`` (``counts[0]`` is
the count on entry). Kernels return ``(steps_taken, n_blue, frozen)``;
``frozen`` means no white vertex has a blue neighbor (or, for the classic
rule, no vertex can force), so the process can never finish.

Randomness: ``_lane_uniform`` must produce bit-identical values to
``rng.lane_uniforms`` -- the scalar twin of the vectorized Philox path.
"""

import numpy as np
from numba import njit

_TWO_NEG53 = 2.0 ** -53


@njit(cache=True, inline="always")
def _philox_block(k0, k1, c0, c1, c2, c3):
    M0 = np.uint64(0xD2511F53)
    M1 = np.uint64(0xCD9E8D57)
    W0 = np.uint32(0x9E3779B9)
    W1 = np.uint32(0xBB67AE85)
    mask = np.uint64(0xFFFFFFFF)
    x0, x1, x2, x3 = c0, c1, c2, c3
    key0, key1 = k0, k1
    for _ in range(10):
        p0 = M0 * np.uint64(x0)
        p1 = M1 * np.uint64(x2)
        hi0 = np.uint32(p0 >> np.uint64(32))
        lo0 = np.uint32(p0 & mask)
        hi1 = np.uint32(p1 >> np.uint64(32))
        lo1 = np.uint32(p1 & mask)
        x0 = hi1 ^ x1 ^ key0
        x1 = lo1
        x2 = hi0 ^ x3 ^ key1
        x3 = lo0
        key0 = np.uint32(key0 + W0)
        key1 = np.uint32(key1 + W1)
    return x0, x1, x2, x3


@njit(cache=True, inline="always")
def _lane_uniform(s_lo, s_hi, t_lo, t_hi, step, lane):
    w0, w1, w2, w3 = _philox_block(
        np.uint32(s_lo), np.uint32(s_hi),
        np.uint32(lane >> 1), np.uint32(step), np.uint32(t_lo), np.uint32(t_hi))
    if lane & 1 == 0:
        bits = (np.uint64(w0) << np.uint64(32)) | np.uint64(w1)
    else:
        bits = (np.uint64(w2) << np.uint64(32)) | np.uint64(w3)
    return np.float64(bits >> np.uint64(11)) * _TWO_NEG53


@njit(cache=True)
def init_blue_neighbor_counts(indptr, indices, blue, cnt):
    n = blue.shape[0]
    for u in range(n):
        if blue[u] == 1:
            for j in range(indptr[u], indptr[u + 1]):
                cnt[indices[j]] += 1


@njit(cache=True)
def run_absorb(indptr, indices, degrees, blue, cnt, nblue,
               s_lo, s_hi, t_lo, t_hi, step0, budget, p_const, counts):
    """Standard rule (p_const < 0) or per-edge constant rule (p_const in [0,1]).

    A white frontier vertex v becomes blue with the union probability
    1 - prod over blue neighbors u of (1 - r(u, v)), where r is
    C[u]/deg(u) for the standard rule and p_const otherwise; one uniform
    per frontier vertex decides.
    """
    n = blue.shape[0]
    step = step0
    taken = 0
    counts[0] = nblue
    frozen = False
    newly = np.empty(n, np.int64)
    while nblue < n and taken < budget:
        nnew = 0
        frontier_seen = False
        for v in range(n):
            if blue[v] == 0 and cnt[v] > 0:
                frontier_seen = True
                prod = 1.0
                if p_const >= 0.0:
                    q = 1.0 - p_const
                    for _ in range(cnt[v]):
                        prod *= q
                else:
                    for j in range(indptr[v], indptr[v + 1]):
                        u = indices[j]
                        if blue[u] == 1:
                            prod *= 1.0 - (cnt[u] + 1.0) / degrees[u]
                p = 1.0 - prod
                if p > 0.0 and _lane_uniform(s_lo, s_hi, t_lo, t_hi, step, v) < p:
                    newly[nnew] = v
                    nnew += 1
        if not frontier_seen:
            frozen = True
            break
        for i in range(nnew):
            blue[newly[i]] = 1
        for i in range(nnew):
            v = newly[i]
            for j in range(indptr[v], indptr[v + 1]):
                cnt[indices[j]] += 1
        nblue += nnew
        step += 1
        taken += 1
        counts[taken] = nblue
    return taken, nblue, frozen


@njit(cache=True)
def run_pushpull(indptr, indices, blue, cnt, nblue,
                 s_lo, s_hi, t_lo, t_hi, step0, budget, do_push, do_pull, counts):
    """Push and/or pull rounds: each chooser picks one uniform neighbor."""
    n = blue.shape[0]
    step = step0
    taken = 0
    counts[0] = nblue
    frozen = False
    newly = np.empty(n, np.int64)
    mark = np.zeros(n, np.uint8)
    while nblue < n and taken < budget:
        frontier_seen = False
        for v in range(n):
            if blue[v] == 0 and cnt[v] > 0:
                frontier_seen = True
                break
        if not frontier_seen:
            frozen = True
            break
        nnew = 0
        for v in range(n):
            deg = indptr[v + 1] - indptr[v]
            if deg == 0:
                continue
            if blue[v] == 1:
                if do_push:
                    u = _lane_uniform(s_lo, s_hi, t_lo, t_hi, step, v)
                    k = np.int64(u * deg)
                    if k >= deg:
                        k = deg - 1
                    pick = indices[indptr[v] + k]
                    if blue[pick] == 0 and mark[pick] == 0:
                        mark[pick] = 1
                        newly[nnew] = pick
                        nnew += 1
            elif do_pull:
                u = _lane_uniform(s_lo, s_hi, t_lo, t_hi, step, v)
                k = np.int64(u * deg)
                if k >= deg:
                    k = deg - 1
                pick = indices[indptr[v] + k]
                if blue[pick] == 1 and mark[v] == 0:
                    mark[v] = 1
                    newly[nnew] = v
                    nnew += 1
        for i in range(nnew):
            v = newly[i]
            mark[v] = 0
            blue[v] = 1
        for i in range(nnew):
            v = newly[i]
            for j in range(indptr[v], indptr[v + 1]):
                cnt[indices[j]] += 1
        nblue += nnew
        step += 1
        taken += 1
        counts[taken] = nblue
    return taken, nblue, frozen


@njit(cache=True)
def run_classic(indptr, indices, blue, cnt, nblue, step0, budget, counts):
    """Deterministic rule: a blue vertex with a unique white neighbor forces it."""
    n = blue.shape[0]
    taken = 0
    counts[0] = nblue
    frozen = False
    newly = np.empty(n, np.int64)
    mark = np.zeros(n, np.uint8)
    while nblue < n and taken < budget:
        nnew = 0
        for u in range(n):
            if blue[u] == 1:
                deg = indptr[u + 1] - indptr[u]
                if deg - cnt[u] == 1:
                    for j in range(indptr[u], indptr[u + 1]):
                        w = indices[j]
                        if blue[w] == 0:
                            if mark[w] == 0:
                                mark[w] = 1
                                newly[nnew] = w
                                nnew += 1
                            break
        if nnew == 0:
            frozen = True
            break
        for i in range(nnew):
            v = newly[i]
            mark[v] = 0
            blue[v] = 1
        for i in range(nnew):
            v = newly[i]
            for j in range(indptr[v], indptr[v + 1]):
                cnt[indices[j]] += 1
        nblue += nnew
        taken += 1
        counts[taken] = nblue
    return taken, nblue, frozen
