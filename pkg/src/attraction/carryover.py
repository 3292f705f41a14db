"""Two-slot runs: each film earns in its release slot and the one after.

A film released in slot ``j`` competes in slot ``j`` with everything
released in ``j`` or ``j-1``, and in slot ``j+1`` with everything released
in ``j`` or ``j+1``. Edges: nothing is released before slot 1, and a film
released in the last slot earns nothing past the horizon (the demand of slot
``m+1`` is zero). These edges change which profiles are equilibria near the
horizon.

For equal popularities the game has the exact potential

    phi(a) = sum_j d_j * H(L_j),   L_j = |C_j| + |C_{j-1}|,

with ``H`` the harmonic number: the films live during slot ``j`` share it
like a fair cost-sharing resource. Better-response dynamics ascend ``phi``
and must stop at an equilibrium.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from attraction.equilibrium import Deviation, DynamicsTrace, EquilibriumReport, Move, run_dynamics
from attraction.errors import InstanceTooLargeError, UnsupportedInstanceError
from attraction.game import (
    Game,
    Number,
    Profile,
    all_profiles,
    check_profile,
    occupancy_counts,
    strictly_greater,
)


class CarryoverGame(Game):
    """Same data as :class:`Game`; popularity is constant across both live slots."""


def _live_loads(game: Game, p: Profile) -> list[Number]:
    # Popularity live during slot j: released in j or j-1 (0-based list).
    placed: list[Number] = [0] * game.m
    for a, theta in zip(p, game.popularity):
        placed[a - 1] += theta
    return [placed[j] + (placed[j - 1] if j else 0) for j in range(game.m)]


def _value(game: Game, live: Sequence[Number], j: int, theta: Number) -> Number:
    # Earnings of a film of popularity theta released in 0-based slot j,
    # given live loads that already include it.
    total = game.demands[j] * theta / live[j]
    if j + 1 < game.m:
        total += game.demands[j + 1] * theta / live[j + 1]
    return total


def carryover_utility(game: Game, profile: Sequence[int], i: int) -> Number:
    p = check_profile(profile, game.n, game.m)
    return _value(game, _live_loads(game, p), p[i - 1] - 1, game.popularity[i - 1])


def carryover_utilities(game: Game, profile: Sequence[int]) -> tuple[Number, ...]:
    p = check_profile(profile, game.n, game.m)
    live = _live_loads(game, p)
    return tuple(_value(game, live, a - 1, t) for a, t in zip(p, game.popularity))


def _moved(p: Profile, i: int, slot: int) -> Profile:
    return p[: i - 1] + (slot,) + p[i:]


def carryover_values(game: Game, profile: Sequence[int], i: int) -> list[Number]:
    """What player ``i`` would earn in each slot, everyone else fixed."""
    p = check_profile(profile, game.n, game.m)
    theta = game.popularity[i - 1]
    out = []
    for j in range(1, game.m + 1):
        q = _moved(p, i, j)
        out.append(_value(game, _live_loads(game, q), j - 1, theta))
    return out


def carryover_best_response(game: Game, profile: Sequence[int], i: int) -> tuple[int, Number]:
    values = carryover_values(game, profile, i)
    best = 0
    for j in range(1, len(values)):
        if strictly_greater(values[j], values[best]):
            best = j
    return best + 1, values[best]


def _improving_moves(game: Game):
    def moves(p: Profile) -> Iterable[Move]:
        for i, a in enumerate(p, start=1):
            slot, value = carryover_best_response(game, p, i)
            current = carryover_values(game, p, i)[a - 1]
            if strictly_greater(value, current):
                yield i, slot, current, value

    return moves


def is_carryover_nash(game: Game, profile: Sequence[int]) -> EquilibriumReport:
    p = check_profile(profile, game.n, game.m)
    for i, slot, before, after in _improving_moves(game)(p):
        return EquilibriumReport(
            p, carryover_utilities(game, p), Deviation(i, p[i - 1], slot, after - before)
        )
    return EquilibriumReport(p, carryover_utilities(game, p))


def homogeneous_potential(game: Game, profile: Sequence[int]) -> Number:
    """Exact potential of a homogeneous carryover game.

    Raises:
        UnsupportedInstanceError: if popularities differ.
    """
    if not game.is_homogeneous():
        raise UnsupportedInstanceError("the potential is only defined for equal popularities")
    p = check_profile(profile, game.n, game.m)
    counts = occupancy_counts(p, game.m)
    phi: Number = 0
    for j, d in enumerate(game.demands):
        live = counts[j] + (counts[j - 1] if j else 0)
        for k in range(1, live + 1):
            phi += d / k
    return phi


def carryover_dynamics(
    game: Game,
    initial: Sequence[int],
    max_steps: int = 10_000,
    order: str = "lowest",
    seed: int = 0,
) -> DynamicsTrace:
    """Better-response dynamics under carryover payoffs.

    Termination is guaranteed for equal popularities. Other instances are
    run as an experiment and may stop with ``converged=False``.
    """
    start = check_profile(initial, game.n, game.m)
    return run_dynamics(start, _improving_moves(game), max_steps, order, seed)


def enumerate_carryover_nash(game: Game, cap: int = 10**6) -> list[Profile]:
    """Exhaustive equilibrium search, for exploring heterogeneous instances."""
    if game.m**game.n > cap:
        raise InstanceTooLargeError(game.m**game.n, cap)
    return [p for p in all_profiles(game.n, game.m) if is_carryover_nash(game, p).is_equilibrium]
