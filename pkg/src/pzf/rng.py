"""Counter-based random streams for reproducible, order-independent trials.

Every random draw in a simulation is a pure function of
``(master seed, trial index, step number, lane)``, where the lane is the
index of the vertex the draw belongs to. The generator is Philox4x32-10
(Salmon et al., "Parallel random numbers: as easy as 1, 2, 3"), a
crush-resistant counter-mode block cipher, so draws are random-access:
trials can run in any order, on any number of workers, or be replayed one
step at a time, and always see identical bits.

Layout of one block:
    key     = (seed lo32, seed hi32)
    counter = (lane >> 1, step, trial lo32, trial hi32)
Each 128-bit output block yields two float64 uniforms in [0, 1); the low
bit of the lane selects the half.
"""

from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9  # key schedule increments
_W1 = 0xBB67AE85
_ROUNDS = 10
_U32 = 0xFFFFFFFF
_TWO_NEG53 = 2.0 ** -53


def philox4x32(key, counter):
    """Philox4x32-10 block function, vectorized over counters.

    key: pair of uint32-compatible ints. counter: 4-tuple of uint32 arrays
    (or scalars) broadcast together. Returns four uint32 arrays.
    """
    k0, k1 = int(key[0]) & _U32, int(key[1]) & _U32
    x0, x1, x2, x3 = (np.asarray(c, dtype=np.uint32) for c in counter)
    for r in range(_ROUNDS):
        p0 = _M0 * x0.astype(np.uint64)
        p1 = _M1 * x2.astype(np.uint64)
        hi0 = (p0 >> np.uint64(32)).astype(np.uint32)
        lo0 = p0.astype(np.uint32)
        hi1 = (p1 >> np.uint64(32)).astype(np.uint32)
        lo1 = p1.astype(np.uint32)
        rk0 = np.uint32((k0 + r * _W0) & _U32)
        rk1 = np.uint32((k1 + r * _W1) & _U32)
        x0 = hi1 ^ x1 ^ rk0
        x1 = lo1
        x2 = hi0 ^ x3 ^ rk1
        x3 = lo0
    return x0, x1, x2, x3


def _split_seed(seed):
    seed = int(seed) & SEED_MASK
    return seed & _U32, (seed >> 32) & _U32


def _split_trial(trial_index):
    trial_index = int(trial_index)
    if trial_index < 0:
        raise ValueError("trial index must be non-negative")
    return trial_index & _U32, (trial_index >> 32) & _U32


def lane_uniforms(seed, trial_index, step, lanes):
    """Float64 uniforms in [0, 1) for the given vertex lanes of one step."""
    lanes = np.asarray(lanes, dtype=np.int64)
    s_lo, s_hi = _split_seed(seed)
    t_lo, t_hi = _split_trial(trial_index)
    c0 = (lanes >> 1).astype(np.uint32)
    c1 = np.full(lanes.shape, int(step) & _U32, dtype=np.uint32)
    c2 = np.full(lanes.shape, t_lo, dtype=np.uint32)
    c3 = np.full(lanes.shape, t_hi, dtype=np.uint32)
    w0, w1, w2, w3 = philox4x32((s_lo, s_hi), (c0, c1, c2, c3))
    hi = np.where(lanes & 1 == 0, w0, w2).astype(np.uint64)
    lo = np.where(lanes & 1 == 0, w1, w3).astype(np.uint64)
    bits = ((hi << np.uint64(32)) | lo) >> np.uint64(11)
    return bits.astype(np.float64) * _TWO_NEG53


class CounterRng:
    """Per-trial random stream, advancing one step per draw call.

    Wraps the pure lane function with a step counter so that replaying a
    trial via repeated ``step()`` calls consumes exactly the bits the batch
    engine would.
    """

    def __init__(self, seed, trial_index=0, step=0):
        self.seed = int(seed) & SEED_MASK
        self.trial_index = int(trial_index)
        self.step = int(step)

    def uniforms(self, lanes):
        """Uniforms for the current step's lanes; advances the step counter."""
        out = lane_uniforms(self.seed, self.trial_index, self.step, lanes)
        self.step += 1
        return out

    def skip(self):
        """Advance the step counter without drawing (rule consumed no bits)."""
        self.step += 1
