import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from attraction.carryover import (
    CarryoverGame,
    carryover_best_response,
    carryover_dynamics,
    carryover_utilities,
    carryover_utility,
    enumerate_carryover_nash,
    homogeneous_potential,
    is_carryover_nash,
)
from attraction.errors import UnsupportedInstanceError
from attraction.game import Game

G = Game((12, 9), (1, 1), exact=True)


def test_utility_examples():
    assert carryover_utilities(G, (1, 1)) == (Fraction(21, 2), Fraction(21, 2))
    assert carryover_utilities(G, (1, 2)) == (Fraction(33, 2), Fraction(9, 2))
    assert carryover_utility(Game((12, 9), (1,)), (2,), 1) == 9


def test_potential_examples():
    assert homogeneous_potential(G, (1, 1)) == Fraction(63, 2)
    assert homogeneous_potential(G, (1, 2)) == Fraction(51, 2)
    delta_phi = homogeneous_potential(G, (1, 1)) - homogeneous_potential(G, (1, 2))
    assert delta_phi == carryover_utility(G, (1, 1), 2) - carryover_utility(G, (1, 2), 2) == 6
    assert homogeneous_potential(Game((12, 9), (1,), exact=True), (1,)) == 21


def test_potential_rejects_heterogeneous():
    with pytest.raises(UnsupportedInstanceError):
        homogeneous_potential(Game((1, 1), (1, 2)), (1, 1))


def test_dynamics_examples():
    trace = carryover_dynamics(G, (1, 2))
    assert len(trace.steps) == 1 and trace.steps[0].player == 2 and trace.steps[0].to_slot == 1
    assert trace.terminal == (1, 1) and trace.converged
    assert is_carryover_nash(G, (1, 1)).is_equilibrium
    assert carryover_dynamics(G, (1, 1)).steps == ()
    assert [p for p in enumerate_carryover_nash(G)] == [(1, 1)]


def test_best_response():
    assert carryover_best_response(G, (1, 2), 2) == (1, Fraction(21, 2))


def test_carryover_game_is_a_game():
    cg = CarryoverGame((12, 9), (1, 1), exact=True)
    assert carryover_utilities(cg, (1, 2)) == carryover_utilities(G, (1, 2))


@st.composite
def instances(draw, homogeneous=True):
    m = draw(st.integers(1, 4))
    n = draw(st.integers(1, 5))
    d = tuple(draw(st.integers(1, 30)) for _ in range(m))
    theta = (1,) * n if homogeneous else tuple(draw(st.integers(1, 9)) for _ in range(n))
    profile = tuple(draw(st.integers(1, m)) for _ in range(n))
    return d, theta, profile


@given(instances(homogeneous=False))
def test_utility_matches_brute_force(case):
    d, theta, profile = case
    g = Game(d, theta, exact=True)
    assert carryover_utilities(g, profile) == tuple(
        oracles.carry_share(d, theta, profile, i) for i in range(len(theta))
    )


@given(instances())
def test_exact_potential(case):
    d, theta, profile = case
    g = Game(d, theta, exact=True)
    assert homogeneous_potential(g, profile) == oracles.carry_potential(d, profile)
    for i in range(len(theta)):
        for j in range(1, len(d) + 1):
            q = oracles.moved(profile, i, j)
            du = carryover_utility(g, q, i + 1) - carryover_utility(g, profile, i + 1)
            assert du == homogeneous_potential(g, q) - homogeneous_potential(g, profile)


@given(instances(homogeneous=False))
def test_conservation(case):
    d, theta, profile = case
    g = Game(d, theta, exact=True)
    live = [j for j in range(1, len(d) + 1) if any(a in (j, j - 1) for a in profile)]
    assert sum(carryover_utilities(g, profile)) == sum(d[j - 1] for j in live)


@settings(max_examples=80)
@given(instances(), st.integers(0, 1000))
def test_dynamics_raise_potential_and_settle(case, seed):
    d, theta, profile = case
    g = Game(d, theta, exact=True)
    trace = carryover_dynamics(g, profile, order="random", seed=seed)
    assert trace.converged
    p = profile
    for step in trace.steps:
        q = oracles.moved(p, step.player - 1, step.to_slot)
        assert homogeneous_potential(g, q) > homogeneous_potential(g, p)
        p = q
    assert not oracles.carry_profitable_moves(d, theta, trace.terminal)


def test_heterogeneous_dynamics_are_reported():
    rng = random.Random(0)
    g = Game((5, 9, 4), (3, 1, 2, 2), exact=True)
    trace = carryover_dynamics(g, tuple(rng.randint(1, 3) for _ in range(4)), max_steps=50)
    if trace.converged:
        assert is_carryover_nash(g, trace.terminal).is_equilibrium
