import math
import random

import pytest

from heuforge.llm import Strategy
from heuforge.scheduler import (
    SchedulerState,
    reward_from_fitness,
    select,
    snapshot,
    update,
)


def test_fresh_state_plays_arms_in_fixed_order():
    state = SchedulerState()
    seen = []
    for _ in range(5):
        arm = select(state)
        seen.append(arm)
        update(state, arm, 0.0)
    assert seen == [Strategy.E1, Strategy.E2, Strategy.M1, Strategy.M2, Strategy.M3]


def test_every_arm_pulled_once_before_any_twice():
    state = SchedulerState()
    rng = random.Random(0)
    pulls = []
    for _ in range(5):
        arm = select(state)
        pulls.append(arm)
        update(state, arm, rng.random())
    assert len(set(pulls)) == 5


def test_ucb_prefers_uncertain_arm_exact_arithmetic():
    # arms (Q, n) = {A: (0.9, 10), B: (0.1, 1)}, C = sqrt(2), N = 11
    state = SchedulerState()
    for strategy in Strategy.M1, Strategy.M2, Strategy.M3:
        update(state, strategy, 0.0)
        state.arms[strategy].n = 10**9  # park the remaining arms far away
    a, b = state.arms[Strategy.E1], state.arms[Strategy.E2]
    a.q, a.n = 0.9, 10
    b.q, b.n = 0.1, 1
    state.total = 11
    bonus = lambda n: math.sqrt(2) * math.sqrt(2 * math.log(11) / n)
    assert b.q + bonus(1) > a.q + bonus(10)
    assert 0.1 + bonus(1) == pytest.approx(3.20, abs=0.05)
    assert 0.9 + bonus(10) == pytest.approx(1.88, abs=0.05)
    assert select(state) is Strategy.E2


def test_ties_break_in_fixed_order():
    state = SchedulerState()
    for strategy in state.arms:
        state.arms[strategy].q = 0.5
        state.arms[strategy].n = 4
    state.total = 20
    assert select(state) is Strategy.E1


def test_reward_examples():
    assert reward_from_fitness(10.0, 9.0) == pytest.approx(0.1)
    assert reward_from_fitness(10.0, 11.0) == 0.0
    assert reward_from_fitness(10.0, math.inf) == 0.0
    assert reward_from_fitness(10.0, -5.0) == 1.0  # clamped above
    assert reward_from_fitness(-10.0, -11.0) == pytest.approx(0.1)
    assert reward_from_fitness(0.0, -1.0) == 1.0
    assert reward_from_fitness(0.0, 1.0) == 0.0


def test_update_running_mean():
    state = SchedulerState()
    update(state, Strategy.E1, 0.5)
    assert state.arms[Strategy.E1].q == 0.5 and state.arms[Strategy.E1].n == 1
    update(state, Strategy.E1, 0.0)
    assert state.arms[Strategy.E1].q == 0.25 and state.arms[Strategy.E1].n == 2
    for _ in range(100):
        update(state, Strategy.E2, 1.0)
    assert state.arms[Strategy.E2].q == 1.0
    assert state.total == 102


def test_q_stays_in_unit_interval_under_random_updates():
    state = SchedulerState()
    rng = random.Random(3)
    for _ in range(500):
        arm = select(state)
        update(state, arm, rng.random())
    for arm in state.arms.values():
        assert 0.0 <= arm.q <= 1.0
    assert state.total == sum(a.n for a in state.arms.values())


def test_snapshot_shape():
    state = SchedulerState()
    update(state, Strategy.E1, 1.0)
    snap = snapshot(state)
    assert snap["E1"] == {"q": 1.0, "n": 1}
    assert set(snap) == {"E1", "E2", "M1", "M2", "M3"}


def test_bandit_competence_bernoulli():
    # stationary 3-arm Bernoulli bandit; the 0.8 arm must dominate pull counts
    means = {Strategy.E1: 0.2, Strategy.E2: 0.5, Strategy.M1: 0.8}
    wins = 0
    for seed in range(100):
        rng = random.Random(seed)
        state = SchedulerState()
        state.arms = {s: state.arms[s] for s in means}  # restrict to 3 arms
        for _ in range(1000):
            arm = select(state)
            update(state, arm, 1.0 if rng.random() < means[arm] else 0.0)
        counts = {s: state.arms[s].n for s in means}
        if counts[Strategy.M1] > max(counts[Strategy.E1], counts[Strategy.E2]):
            wins += 1
    assert wins >= 95
