import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from attraction.equilibrium import (
    better_response_dynamics,
    best_response,
    enumerate_nash,
    greedy_order,
    greedy_schedule,
    has_density_ties,
    homogeneous_occupancy,
    is_pure_nash,
)
from attraction.errors import InstanceTooLargeError
from attraction.game import Game, occupancy_counts

EX = Game((12, 9), (4, 3, 2), exact=True)
HOMO = Game((12, 9), (1, 1, 1), exact=True)


def test_best_response_examples():
    assert best_response(EX, (1, 1, 1), 2) == (2, 9)
    assert best_response(EX, (1, 2, 2), 3) == (1, 4)
    assert best_response(Game((3,), (1, 2)), (1, 1), 2) == (1, 2)


def test_lowest_slot_wins_ties():
    assert best_response(Game((5, 5), (1,)), (2,), 1)[0] == 1


def test_is_pure_nash_examples():
    assert is_pure_nash(EX, (1, 2, 1)).is_equilibrium
    report = is_pure_nash(EX, (1, 1, 1))
    dev = report.deviation
    assert (dev.player, dev.from_slot, dev.to_slot, dev.gain) == (1, 1, 2, 9 - Fraction(16, 3))
    assert is_pure_nash(Game((4,), (1,)), (1,)).is_equilibrium


def test_witness_is_lowest_deviator_against_brute_force():
    moves = oracles.profitable_moves((12, 9), (4, 3, 2), (1, 1, 1))
    assert {i for i, _, _ in moves} == {0, 1, 2}


def test_greedy_examples():
    profile, report = greedy_schedule(EX)
    assert profile == (1, 2, 1) and report.utilities == (8, 9, 4)
    assert greedy_schedule(HOMO)[0] == (1, 2, 1)
    assert greedy_schedule(Game((3, 8, 8), (5,)))[0] == (2,)


def test_greedy_order_breaks_ties_by_index():
    assert greedy_order(Game((1,), (2, 5, 2, 5))) == [2, 4, 1, 3]


def test_enumerate_examples():
    found = [r.profile for r in enumerate_nash(EX)]
    assert found == [(1, 2, 1), (2, 1, 1)]
    assert found == [p for p in oracles.nash_set((12, 9), (4, 3, 2))]
    assert {occupancy_counts(r.profile, 2) for r in enumerate_nash(HOMO)} == {(2, 1)}
    assert [r.profile for r in enumerate_nash(Game((5, 5), (1,)))] == [(1,), (2,)]


def test_enumerate_cap():
    with pytest.raises(InstanceTooLargeError, match="81"):
        enumerate_nash(Game((1, 1, 1), (1,) * 4), cap=80)


def test_parallel_enumeration_matches_serial():
    g = Game((7, 5, 3), (4, 3, 3, 2, 1), exact=True)
    assert enumerate_nash(g, workers=3) == enumerate_nash(g)


def test_dynamics_examples():
    trace = better_response_dynamics(EX, (1, 1, 1))
    assert trace.converged and is_pure_nash(EX, trace.terminal).is_equilibrium
    assert trace.steps[0].player == 1
    still = better_response_dynamics(EX, (1, 2, 1))
    assert still.converged and still.steps == ()
    g = Game((10, 10), (1, 1, 1, 1), exact=True)
    for start in [(1, 1, 1, 1), (2, 2, 2, 1), (1, 2, 2, 2)]:
        assert occupancy_counts(better_response_dynamics(g, start).terminal, 2) == (2, 2)


def test_dynamics_random_order_is_seeded():
    g = Game((9, 7, 4), (5, 4, 3, 2, 2, 1), exact=True)
    a = better_response_dynamics(g, (1,) * 6, order="random", seed=3)
    b = better_response_dynamics(g, (1,) * 6, order="random", seed=3)
    assert a == b and a.converged
    with pytest.raises(ValueError):
        better_response_dynamics(g, (1,) * 6, order="sideways")


def test_dynamics_step_budget():
    trace = better_response_dynamics(EX, (1, 1, 1), max_steps=0)
    assert not trace.converged and trace.terminal == (1, 1, 1)


def test_homogeneous_occupancy_examples():
    assert homogeneous_occupancy(3, (12, 9)) == (2, 1)
    assert homogeneous_occupancy(1, (12, 9)) == (1, 0)
    assert homogeneous_occupancy(2, (10, 10)) == (1, 1)


def test_density_ties():
    assert has_density_ties(4, (10, 10))
    assert not has_density_ties(3, (12, 9))
    assert has_density_ties(4, (12, 9))  # 12/4 == 9/3


@st.composite
def small_games(draw, homogeneous=False):
    m = draw(st.integers(1, 3))
    n = draw(st.integers(1, 5))
    d = tuple(draw(st.integers(1, 20)) for _ in range(m))
    theta = (1,) * n if homogeneous else tuple(draw(st.integers(1, 20)) for _ in range(n))
    return d, theta


@given(small_games())
def test_greedy_soundness(case):
    d, theta = case
    profile, report = greedy_schedule(Game(d, theta, exact=True))
    assert report.is_equilibrium and oracles.is_nash(d, theta, profile)


@given(small_games())
def test_enumeration_matches_brute_force(case):
    d, theta = case
    assert [r.profile for r in enumerate_nash(Game(d, theta, exact=True))] == oracles.nash_set(d, theta)


@given(small_games(), st.integers(1, 50))
def test_best_response_slot_is_scale_invariant(case, c):
    d, theta = case
    g = Game(d, theta, exact=True)
    profile = tuple((i % len(d)) + 1 for i in range(len(theta)))
    for i in range(1, len(theta) + 1):
        assert best_response(g, profile, i)[0] == best_response(g.scaled(c), profile, i)[0]


@given(small_games(homogeneous=True))
def test_homogeneous_uniqueness_when_tie_free(case):
    d, theta = case
    n = len(theta)
    assume(not has_density_ties(n, d))
    seen = {oracles.counts(p, len(d)) for p in oracles.nash_set(d, theta)}
    assert seen == {homogeneous_occupancy(n, d)}


@settings(max_examples=60)
@given(small_games(), st.integers(0, 10**6))
def test_dynamics_steps_strictly_improve(case, seed):
    d, theta = case
    rng = random.Random(seed)
    g = Game(d, theta, exact=True)
    start = tuple(rng.randint(1, len(d)) for _ in theta)
    trace = better_response_dynamics(g, start, order="random", seed=seed)
    profile = start
    for step in trace.steps:
        assert step.utility_after > step.utility_before
        assert step.from_slot == profile[step.player - 1]
        profile = oracles.moved(profile, step.player - 1, step.to_slot)
    assert profile == trace.terminal
    if trace.converged:
        assert oracles.is_nash(d, theta, profile)
