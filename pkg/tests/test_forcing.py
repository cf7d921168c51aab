"""Rule semantics, one-step behavior, and trial execution."""

import math

import pytest

from pzf.forcing import (CLASSIC, PUSH, PUSH_PULL, PULL, STANDARD, ForcingRule,
                         closed_blue_count, constant_rule, force_probability,
                         parse_rule, run_trial, step, vertex_absorption_prob)
from pzf.graphs import make_complete, make_cycle, make_grid, make_hypercube, \
    make_path, make_star, eccentricity
from pzf.rng import CounterRng


# -- rule parsing -----------------------------------------------------------

@pytest.mark.parametrize("text,canonical", [
    ("standard", "standard"),
    ("constant:0.25", "constant:0.25"),
    ("push", "push"),
    ("pull", "pull"),
    ("pushpull", "pushpull"),
    ("push_pull", "pushpull"),
    ("push-pull", "pushpull"),
    ("classic", "classic"),
])
def test_parse_rule_canonical(text, canonical):
    assert parse_rule(text).canonical() == canonical


@pytest.mark.parametrize("text", ["nosuch", "constant", "constant:x",
                                  "constant:1.5", "constant:-0.1", "push:3"])
def test_parse_rule_rejections(text):
    with pytest.raises(ValueError):
        parse_rule(text)


def test_rule_dataclass_validation():
    with pytest.raises(ValueError):
        ForcingRule("standard", 0.5)
    with pytest.raises(ValueError):
        ForcingRule("constant")


# -- closed neighborhood count ----------------------------------------------

def test_closed_blue_count_triangle():
    g = make_complete(3)
    assert closed_blue_count(g, {0}, 0) == 1
    assert closed_blue_count(g, {0, 1}, 0) == 2


def test_closed_blue_count_star():
    g = make_star(4)
    assert closed_blue_count(g, {0, 1, 2}, 0) == 3


def test_closed_blue_count_requires_blue():
    with pytest.raises(ValueError):
        closed_blue_count(make_path(2), {0}, 1)


# -- force probability ------------------------------------------------------

def test_force_probability_triangle():
    g = make_complete(3)
    assert force_probability(g, {0}, 0, 1) == 0.5


def test_force_probability_unique_white_neighbor_is_one():
    g = make_star(3)
    blue = {0, 1, 2}  # center plus two leaves; leaf 3 is the only white
    assert force_probability(g, blue, 0, 3) == 1.0


def test_force_probability_constant():
    g = make_cycle(5)
    assert force_probability(g, {0}, 0, 1, constant_rule(0.25)) == 0.25


def test_force_probability_contract_violations():
    g = make_path(3)
    with pytest.raises(ValueError):
        force_probability(g, {0}, 0, 2)  # not adjacent
    with pytest.raises(ValueError):
        force_probability(g, {0}, 1, 2)  # u white
    with pytest.raises(ValueError):
        force_probability(g, {0, 1}, 0, 1)  # v blue
    with pytest.raises(ValueError):
        force_probability(g, {0}, 0, 1, PUSH)  # edge-probability undefined


def test_force_probability_bounds_on_random_states():
    g = make_grid(3, 3)
    blue = {0, 1, 4}
    for u in blue:
        for v in (int(w) for w in g.neighbors(u)):
            if v in blue:
                continue
            p = force_probability(g, blue, u, v)
            assert 0.0 < p <= 1.0
            if closed_blue_count(g, blue, u) == g.degree(u):
                assert p == 1.0


# -- absorption probability -------------------------------------------------

def test_absorption_forced_corner():
    g = make_cycle(4)
    # blue {0,1}: vertex 3 sees only blue neighbor 0, whose closed count
    # equals its degree, so absorption is certain
    assert vertex_absorption_prob(g, {0, 1}, 3) == 1.0


def test_absorption_no_blue_neighbor_is_zero():
    g = make_path(3)
    assert vertex_absorption_prob(g, {0}, 2) == 0.0


def test_absorption_union_matches_brute_force():
    g = make_grid(3, 3)
    blue = {0, 1, 3}
    v = 4
    probs = [force_probability(g, blue, u, v) for u in (1, 3)]
    expected = 1.0 - (1.0 - probs[0]) * (1.0 - probs[1])
    assert vertex_absorption_prob(g, blue, v) == pytest.approx(expected, abs=1e-15)


def test_absorption_hypercube_lower_bound():
    # white vertex with d blue neighbors has absorption >= 1 - ((n-1)/n)^d
    g = make_hypercube(4)
    blue = {1, 2, 4, 8}
    p = vertex_absorption_prob(g, blue, 0)
    assert p >= 1.0 - ((4 - 1) / 4) ** 4 - 1e-12


def test_absorption_constant_rule():
    g = make_star(4)
    blue = {1, 2, 3}
    p = vertex_absorption_prob(g, blue, 0, constant_rule(0.25))
    assert p == pytest.approx(1.0 - 0.75 ** 3, abs=1e-15)


# -- one step ---------------------------------------------------------------

def test_step_classic_path():
    g = make_path(3)
    out = step(g, {0}, CLASSIC, CounterRng(0))
    assert out == {0, 1}


def test_step_all_blue_fixed_point():
    g = make_complete(4)
    full = frozenset(range(4))
    assert step(g, full, STANDARD, CounterRng(3)) == full


def test_step_monotone():
    g = make_grid(3, 3)
    for rule in (STANDARD, constant_rule(0.3), PUSH, PULL, PUSH_PULL):
        rng = CounterRng(11, 0)
        state = frozenset({4})
        for _ in range(6):
            new = step(g, state, rule, rng)
            assert state <= new
            state = new


def test_step_requires_blue():
    with pytest.raises(ValueError):
        step(make_path(2), set(), STANDARD, CounterRng(0))


def test_k3_one_step_distribution():
    """From one blue vertex on K3 the new blue count is 1/2/3 w.p. 1/4, 1/2, 1/4."""
    g = make_complete(3)
    n_samples = 100_000
    hits = {1: 0, 2: 0, 3: 0}
    for t in range(n_samples):
        rec = run_trial(g, {0}, STANDARD, seed=606, trial_index=t, max_steps=1)
        hits[rec.blue_counts[1]] += 1
    for size, p in ((1, 0.25), (2, 0.5), (3, 0.25)):
        se = math.sqrt(p * (1 - p) / n_samples)
        assert abs(hits[size] / n_samples - p) <= 3 * se, (size, hits)


# -- trials -----------------------------------------------------------------

def test_trial_p2_always_one_step():
    g = make_path(2)
    for t in range(50):
        rec = run_trial(g, {0}, STANDARD, seed=5, trial_index=t)
        assert rec.propagation_time == 1
        assert rec.blue_counts == [1, 2]


def test_trial_deterministic_replay():
    g = make_grid(4, 4)
    a = run_trial(g, {0}, STANDARD, seed=123, trial_index=9)
    b = run_trial(g, {0}, STANDARD, seed=123, trial_index=9)
    assert a == b


def test_trial_classic_cycle_freezes():
    rec = run_trial(make_cycle(4), {0}, CLASSIC, seed=0)
    assert rec.propagation_time is None
    assert rec.blue_counts == [1]


def test_trial_cutoff_sentinel():
    g = make_path(4)
    rec = run_trial(g, {0}, constant_rule(1e-9), seed=1, max_steps=5)
    assert rec.propagation_time is None
    assert len(rec.blue_counts) <= 6


def test_trial_record_invariants():
    g = make_grid(3, 4)
    ecc = eccentricity(g, 0)
    for t in range(200):
        rec = run_trial(g, {0}, STANDARD, seed=77, trial_index=t)
        counts = rec.blue_counts
        assert all(a <= b for a, b in zip(counts, counts[1:]))
        assert counts[-1] == g.n
        assert rec.propagation_time == counts.index(g.n)
        assert rec.propagation_time >= ecc


@pytest.mark.parametrize("rule", [STANDARD, constant_rule(0.25), PUSH, PULL,
                                  PUSH_PULL, CLASSIC])
def test_kernel_matches_reference_loop(rule):
    """Compiled trials and the pure-python step loop replay identically."""
    for g in (make_grid(3, 3), make_star(5), make_hypercube(3)):
        for t in range(25):
            fast = run_trial(g, {0}, rule, seed=2024, trial_index=t)
            slow = run_trial(g, {0}, rule, seed=2024, trial_index=t,
                             record_states=True)
            assert fast.propagation_time == slow.propagation_time
            assert fast.blue_counts == slow.blue_counts


def test_reference_states_are_monotone():
    g = make_grid(3, 3)
    rec = run_trial(g, {4}, STANDARD, seed=3, trial_index=0, record_states=True)
    for a, b in zip(rec.states, rec.states[1:]):
        assert a <= b


def test_trial_multi_vertex_initial():
    g = make_path(5)
    rec = run_trial(g, {0, 4}, STANDARD, seed=8)
    assert rec.blue_counts[0] == 2
    assert rec.terminated


def test_trial_validates_input():
    g = make_path(3)
    with pytest.raises(ValueError):
        run_trial(g, set(), STANDARD, seed=0)
    with pytest.raises(Exception):
        run_trial(g, {9}, STANDARD, seed=0)
    with pytest.raises(ValueError):
        run_trial(g, {0}, STANDARD, seed=0, max_steps=0)
