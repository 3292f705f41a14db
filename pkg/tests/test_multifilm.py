from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from attraction.equilibrium import best_response, enumerate_nash
from attraction.errors import InstanceTooLargeError, InvalidGameError, InvalidProfileError
from attraction.game import Game
from attraction.multifilm import (
    StudioGame,
    check_assignment,
    enumerate_joint_nash,
    exact_best_response,
    find_pure_nash,
    has_equal_partition,
    joint_profiles,
    partition_gadget,
    studio_utilities,
    studio_utility,
)

AB = StudioGame((1, 1), ((1, 2), (1,)), exact=True)


def test_studio_utility_examples():
    assert studio_utility(AB, ((2, 1), (1,)), 1) == Fraction(5, 3)
    assert studio_utilities(AB, ((1, 1), (1,))) == (Fraction(3, 4), Fraction(1, 4))
    assert studio_utility(StudioGame((4, 6), ((3,),)), ((2,),), 1) == 6


def test_best_response_example():
    assert exact_best_response(AB, ((1, 1), (1,)), 1) == ((2, 1), Fraction(5, 3))
    values = {
        slots: studio_utility(AB, (slots, (1,)), 1) for slots in product((1, 2), repeat=2)
    }
    assert sorted(values.values()) == [Fraction(3, 4), 1, Fraction(3, 2), Fraction(5, 3)]


def test_single_film_studios_reduce_to_base_game():
    sg = StudioGame((12, 9), ((4,), (3,), (2,)), exact=True)
    base = Game((12, 9), (4, 3, 2), exact=True)
    joint = ((1,), (1,), (1,))
    for i in (1, 2, 3):
        slots, value = exact_best_response(sg, joint, i)
        assert (slots[0], value) == best_response(base, (1, 1, 1), i)
    assert [tuple(s[0] for s in j) for j in enumerate_joint_nash(sg)] == [
        r.profile for r in enumerate_nash(base)
    ]


def test_nonexistence_certificate():
    search = find_pure_nash(AB)
    assert not search.exists and search.profiles_checked == 8
    assert {d.profile for d in search.certificate} == set(joint_profiles(AB))
    for dev in search.certificate:
        trial = list(dev.profile)
        trial[dev.studio - 1] = dev.better
        here = oracles.studio_payoff(AB.demands, AB.studios, dev.profile, dev.studio - 1)
        there = oracles.studio_payoff(AB.demands, AB.studios, trial, dev.studio - 1)
        assert there - here == dev.gain > 0


def test_symmetric_pair_has_equilibrium():
    search = find_pure_nash(StudioGame((10, 10), ((1,), (1,)), exact=True))
    assert search.exists
    (a,), (b,) = search.equilibrium
    assert a != b and search.utilities == (10, 10)


def test_gadget_examples():
    yes = partition_gadget([1, 2, 3])
    assert yes.threshold == Fraction(3, 2) and yes.optimum == Fraction(3, 2)
    assert yes.verdict and yes.partition_exists
    assert sorted(w for w, s in zip([1, 2, 3], yes.placement) if s == 1) in ([1, 2], [3])
    no = partition_gadget([1, 1, 3])
    assert no.threshold == Fraction(10, 7) and no.optimum == Fraction(17, 12)
    assert not no.verdict and not no.partition_exists
    assert not partition_gadget([5]).verdict


def test_gadget_pins_rivals():
    g = partition_gadget([2, 2])
    assert g.game.demands == (1, 1)
    assert g.game.studios == ((1,), (1,), (2, 2))
    assert g.fixed[:2] == ((1,), (2,))


def test_gadget_rejects_bad_weights():
    for bad in ([], [0], [1.5], [True]):
        with pytest.raises(InvalidGameError):
            partition_gadget(bad)


def test_validation_and_caps():
    with pytest.raises(InvalidProfileError):
        check_assignment(AB, ((1,), (1,)))
    with pytest.raises(InvalidProfileError):
        check_assignment(AB, ((1, 3), (1,)))
    with pytest.raises(InvalidGameError):
        StudioGame((1,), ((),))
    with pytest.raises(InstanceTooLargeError):
        exact_best_response(StudioGame((1, 1), ((1,) * 8,)), ((1,) * 8,), 1, cap=100)
    with pytest.raises(InstanceTooLargeError):
        find_pure_nash(StudioGame((1, 1), ((1,) * 8,)), cap=100)


def test_partition_oracle():
    assert has_equal_partition([1, 5, 11, 5])
    assert not has_equal_partition([1, 2, 5])
    assert has_equal_partition([]) == oracles.subset_sum_split([])


@st.composite
def studio_games(draw):
    m = draw(st.integers(1, 3))
    studios = draw(st.lists(st.lists(st.integers(1, 9), min_size=1, max_size=3), min_size=1, max_size=3))
    d = tuple(draw(st.integers(1, 12)) for _ in range(m))
    joint = tuple(tuple(draw(st.integers(1, m)) for _ in films) for films in studios)
    return d, tuple(map(tuple, studios)), joint


@settings(max_examples=80)
@given(studio_games())
def test_best_response_matches_independent_search(case):
    d, studios, joint = case
    sg = StudioGame(d, studios, exact=True)
    for i in range(len(studios)):
        assert exact_best_response(sg, joint, i + 1) == oracles.studio_best_response(d, studios, joint, i)


@settings(max_examples=80)
@given(studio_games())
def test_studio_utility_matches_brute_force(case):
    d, studios, joint = case
    sg = StudioGame(d, studios, exact=True)
    for i in range(len(studios)):
        assert studio_utility(sg, joint, i + 1) == oracles.studio_payoff(d, studios, joint, i)


@given(st.lists(st.integers(1, 12), min_size=1, max_size=7))
def test_partition_matches_brute_force(weights):
    assert has_equal_partition(weights) == oracles.subset_sum_split(weights)
    assert partition_gadget(weights).verdict == oracles.subset_sum_split(weights)
