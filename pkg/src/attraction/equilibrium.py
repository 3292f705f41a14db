"""Pure Nash equilibria of the single-film release game.

Every comparison between two utilities goes through
:func:`attraction.game.strictly_greater`, so exact games compare exactly and
float games ignore gains below a relative ``1e-12``. Ties always resolve to
the lowest slot index.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from attraction.errors import InstanceTooLargeError, TheoremViolation
from attraction.game import (
    Game,
    Number,
    Profile,
    check_profile,
    occupancy_counts,
    slot_loads,
    strictly_greater,
    utilities,
)

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class Deviation:
    player: int
    from_slot: int
    to_slot: int
    gain: Number


@dataclass(frozen=True)
class EquilibriumReport:
    """A profile, its utilities, and either no deviation or a witness."""

    profile: Profile
    utilities: tuple[Number, ...]
    deviation: Deviation | None = None

    @property
    def is_equilibrium(self) -> bool:
        return self.deviation is None


@dataclass(frozen=True)
class Step:
    player: int
    from_slot: int
    to_slot: int
    utility_before: Number
    utility_after: Number


@dataclass(frozen=True)
class DynamicsTrace:
    steps: tuple[Step, ...]
    terminal: Profile
    converged: bool


def _values(game: Game, loads: Sequence[Number], current: int, i: int) -> list[Number]:
    # Utility player i would get in each slot, others fixed.
    theta = game.popularity[i - 1]
    out = []
    for j, (d, load) in enumerate(zip(game.demands, loads), start=1):
        out.append(d * theta / (load if j == current else load + theta))
    return out


def _argmax(values: Sequence[Number]) -> int:
    best = 0
    for j in range(1, len(values)):
        if strictly_greater(values[j], values[best]):
            best = j
    return best


def best_response(game: Game, profile: Sequence[int], i: int) -> tuple[int, Number]:
    """Best slot for player ``i`` against the others' choices in ``profile``.

    Returns:
        ``(slot, utility)`` with ties going to the lowest slot.
    """
    p = check_profile(profile, game.n, game.m)
    values = _values(game, slot_loads(game, p), p[i - 1], i)
    j = _argmax(values)
    return j + 1, values[j]


def _first_deviation(game: Game, p: Profile) -> Deviation | None:
    loads = slot_loads(game, p)
    for i, a in enumerate(p, start=1):
        values = _values(game, loads, a, i)
        j = _argmax(values)
        if strictly_greater(values[j], values[a - 1]):
            return Deviation(i, a, j + 1, values[j] - values[a - 1])
    return None


def is_pure_nash(game: Game, profile: Sequence[int]) -> EquilibriumReport:
    """Check for a profitable unilateral deviation.

    The witness, when there is one, is the lowest-indexed deviating player
    moving to its best response.
    """
    p = check_profile(profile, game.n, game.m)
    return EquilibriumReport(p, utilities(game, p), _first_deviation(game, p))


def greedy_order(game: Game) -> list[int]:
    """Players by decreasing popularity, ties by ascending index."""
    return sorted(range(1, game.n + 1), key=lambda i: (-game.popularity[i - 1], i))


def greedy_schedule(game: Game) -> tuple[Profile, EquilibriumReport]:
    """Place players one at a time, most popular first, each at its best slot.

    Raises:
        TheoremViolation: if the final schedule is not a Nash equilibrium.
    """
    loads: list[Number] = [0] * game.m
    choice = [0] * game.n
    for i in greedy_order(game):
        theta = game.popularity[i - 1]
        values = [d * theta / (load + theta) for d, load in zip(game.demands, loads)]
        j = _argmax(values)
        choice[i - 1] = j + 1
        loads[j] += theta
    profile = tuple(choice)
    report = is_pure_nash(game, profile)
    if not report.is_equilibrium:
        raise TheoremViolation(f"greedy schedule {profile} admits {report.deviation}")
    return profile, report


def _scan(game: Game, prefix: tuple[int, ...]) -> list[EquilibriumReport]:
    found = []
    d, pop, m = game.demands, game.popularity, game.m
    for rest in product(range(1, m + 1), repeat=game.n - len(prefix)):
        p = prefix + rest
        loads = [0] * m
        for a, theta in zip(p, pop):
            loads[a - 1] += theta
        stable = True
        for a, theta in zip(p, pop):
            here = d[a - 1] * theta / loads[a - 1]
            for j in range(m):
                if j != a - 1 and strictly_greater(d[j] * theta / (loads[j] + theta), here):
                    stable = False
                    break
            if not stable:
                break
        if stable:
            found.append(EquilibriumReport(p, utilities(game, p)))
    return found


def enumerate_nash(
    game: Game, cap: int = DEFAULT_CAP, workers: int = 1
) -> list[EquilibriumReport]:
    """All pure equilibria, in lexicographic profile order.

    With ``workers > 1`` the profile space is split on player 1's slot and
    scanned in separate processes; the merged result is identical.

    Raises:
        InstanceTooLargeError: if ``m**n`` exceeds ``cap``.
    """
    size = game.m**game.n
    if size > cap:
        raise InstanceTooLargeError(size, cap)
    if workers <= 1 or game.m == 1:
        return _scan(game, ())
    prefixes = [(j,) for j in range(1, game.m + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan, [game] * len(prefixes), prefixes))
    return [r for part in parts for r in part]


Move = tuple[int, int, Number, Number]


def run_dynamics(
    initial: Profile,
    improving_moves: Callable[[Profile], Iterable[Move]],
    max_steps: int,
    order: str = "lowest",
    seed: int = 0,
) -> DynamicsTrace:
    """Generic better-response loop.

    ``improving_moves(profile)`` yields ``(player, to_slot, before, after)``
    for every player with a strictly improving best response, in player
    order. ``order`` picks which one moves: the lowest index, or a uniformly
    random one drawn from ``random.Random(seed)``.
    """
    if order not in ("lowest", "random"):
        raise ValueError(f"unknown revision order {order!r}")
    rng = random.Random(seed)
    profile = tuple(initial)
    steps: list[Step] = []
    while True:
        moves = list(improving_moves(profile))
        if not moves:
            return DynamicsTrace(tuple(steps), profile, True)
        if len(steps) >= max_steps:
            return DynamicsTrace(tuple(steps), profile, False)
        player, to_slot, before, after = moves[0] if order == "lowest" else rng.choice(moves)
        steps.append(Step(player, profile[player - 1], to_slot, before, after))
        profile = profile[: player - 1] + (to_slot,) + profile[player:]


def _improving_moves(game: Game) -> Callable[[Profile], Iterable[Move]]:
    def moves(p: Profile) -> Iterable[Move]:
        loads = slot_loads(game, p)
        for i, a in enumerate(p, start=1):
            values = _values(game, loads, a, i)
            j = _argmax(values)
            if strictly_greater(values[j], values[a - 1]):
                yield i, j + 1, values[a - 1], values[j]

    return moves


def better_response_dynamics(
    game: Game,
    initial: Sequence[int],
    max_steps: int = 10_000,
    order: str = "lowest",
    seed: int = 0,
) -> DynamicsTrace:
    """Move one improving player at a time to its best response.

    Convergence is observed, not promised: a trace that hits ``max_steps``
    comes back with ``converged=False``.
    """
    start = check_profile(initial, game.n, game.m)
    return run_dynamics(start, _improving_moves(game), max_steps, order, seed)


def homogeneous_occupancy(n: int, demands: Sequence[Number]) -> tuple[int, ...]:
    """Equilibrium number of films per slot when all popularities are equal."""
    game = Game(tuple(demands), (1,) * n, exact=True)
    profile, _ = greedy_schedule(game)
    return occupancy_counts(profile, game.m)


def has_density_ties(n: int, demands: Sequence[Number]) -> bool:
    """True if two different slots can offer a homogeneous film the same share.

    Checks every pair ``d_j / k == d_l / k'`` with ``1 <= k, k' <= n``; when
    none exists, no player is ever indifferent between two slots.
    """
    game = Game(tuple(demands), (1,), exact=True)
    seen: dict = {}
    for j, d in enumerate(game.demands):
        for k in range(1, n + 1):
            owner = seen.setdefault(d / k, j)
            if owner != j:
                return True
    return False
