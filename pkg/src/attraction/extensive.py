"""Sequential release: players move one after another with full information.

:func:`spe` runs backward induction over the depth-``n`` tree. A subtree's
continuation depends only on how deep it is and how much popularity already
sits in each slot, so solved states are memoised on ``(depth, loads)``.
Every mover breaks ties toward the lowest slot index, which makes the
subgame-perfect equilibrium unique.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Sequence

from attraction.equilibrium import (
    DEFAULT_CAP,
    EquilibriumReport,
    homogeneous_occupancy,
    is_pure_nash,
)
from attraction.errors import InstanceTooLargeError, InvalidProfileError, TheoremViolation
from attraction.game import Game, Number, Profile, strictly_greater, utilities

MoveOrder = tuple[int, ...]


@dataclass(frozen=True)
class SpeResult:
    outcome: Profile
    utilities: tuple[Number, ...]
    path: tuple[tuple[int, int], ...]  # (mover, slot) in move order


def check_order(order: Sequence[int], n: int) -> MoveOrder:
    order = tuple(order)
    if sorted(order) != list(range(1, n + 1)):
        raise InvalidProfileError(f"move order {order} is not a permutation of 1..{n}")
    return order


def descending_order(game: Game) -> MoveOrder:
    """Most popular player first, ties by index."""
    return tuple(sorted(range(1, game.n + 1), key=lambda i: (-game.popularity[i - 1], i)))


def is_popularity_ordered(game: Game, order: Sequence[int]) -> bool:
    """True when no mover is more popular than the one before it."""
    thetas = [game.popularity[i - 1] for i in order]
    return all(a >= b for a, b in zip(thetas, thetas[1:]))


class _Solver:
    def __init__(self, game: Game, order: MoveOrder) -> None:
        self.game = game
        self.order = order
        self.memo: dict[tuple, tuple[tuple[Number, ...], int]] = {}

    def final_loads(self, depth: int, loads: tuple[Number, ...]) -> tuple[Number, ...]:
        """Slot loads at the leaf reached by equilibrium play from this state."""
        if depth == len(self.order):
            return loads
        return self.solve(depth, loads)[0]

    def solve(self, depth: int, loads: tuple[Number, ...]) -> tuple[tuple[Number, ...], int]:
        key = (depth, loads)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        game = self.game
        theta = game.popularity[self.order[depth] - 1]
        best_final = None
        best_value = None
        best_slot = 0
        for j in range(game.m):
            child = loads[:j] + (loads[j] + theta,) + loads[j + 1 :]
            final = self.final_loads(depth + 1, child)
            value = game.demands[j] * theta / final[j]
            if best_value is None or strictly_greater(value, best_value):
                best_final, best_value, best_slot = final, value, j + 1
        result = (best_final, best_slot)
        self.memo[key] = result
        return result

    def choice(self, history: Sequence[int]) -> int:
        loads = [0] * self.game.m
        for mover, slot in zip(self.order, history):
            loads[slot - 1] += self.game.popularity[mover - 1]
        return self.solve(len(history), tuple(loads))[1]


def _check_size(game: Game, cap: int) -> None:
    size = game.m**game.n
    if size > cap:
        raise InstanceTooLargeError(size, cap, what="leaves")


def spe(game: Game, order: Sequence[int] | None = None, cap: int = DEFAULT_CAP) -> SpeResult:
    """Subgame-perfect equilibrium path for the given move order.

    Args:
        game: the release game.
        order: players from first mover to last; defaults to ``1..n``.
        cap: largest tree (``m**n`` leaves) accepted.

    Raises:
        InstanceTooLargeError: if the tree exceeds ``cap``.
    """
    order = check_order(order if order is not None else range(1, game.n + 1), game.n)
    _check_size(game, cap)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * game.n + 100))
    solver = _Solver(game, order)
    history: list[int] = []
    for _ in order:
        history.append(solver.choice(history))
    outcome = [0] * game.n
    for mover, slot in zip(order, history):
        outcome[mover - 1] = slot
    outcome_t = tuple(outcome)
    return SpeResult(outcome_t, utilities(game, outcome_t), tuple(zip(order, history)))


def spe_strategy(
    game: Game, order: Sequence[int] | None = None, cap: int = DEFAULT_CAP
) -> dict[tuple[int, ...], int]:
    """Full equilibrium strategy: the slot chosen at every decision node.

    Keys are histories (slots chosen so far, in move order). The table has
    ``(m**n - 1) / (m - 1)`` entries, so it is only practical for small trees.
    """
    order = check_order(order if order is not None else range(1, game.n + 1), game.n)
    _check_size(game, cap)
    solver = _Solver(game, order)
    strategy = {}
    for depth in range(game.n):
        for history in product(range(1, game.m + 1), repeat=depth):
            strategy[history] = solver.choice(history)
    return strategy


@dataclass(frozen=True)
class HomogeneousPrediction:
    """Closed-form equilibrium path for equal popularities.

    ``assignment[p]`` is the slot taken by the ``p+1``-th mover. ``tied`` is
    set when two occupied slots share a density, which voids the
    uniqueness the prediction relies on.
    """

    occupancy: tuple[int, ...]
    slot_order: tuple[int, ...]
    assignment: tuple[int, ...]
    tied: bool


def homogeneous_spe_prediction(n: int, demands: Sequence[Number]) -> HomogeneousPrediction:
    counts = homogeneous_occupancy(n, demands)
    dens = Game(tuple(demands), (1,), exact=True).demands
    occupied = [j for j in range(len(counts)) if counts[j]]
    density = {j: dens[j] / counts[j] for j in occupied}
    slot_order = sorted(occupied, key=lambda j: (-density[j], j))
    tied = len(set(density.values())) < len(occupied)
    assignment: list[int] = []
    for j in slot_order:
        assignment.extend([j + 1] * counts[j])
    return HomogeneousPrediction(
        counts, tuple(j + 1 for j in slot_order), tuple(assignment), tied
    )


def spe_outcome_is_nash(
    game: Game, order: Sequence[int] | None = None, cap: int = DEFAULT_CAP
) -> EquilibriumReport:
    """Normal-form equilibrium check of the SPE outcome.

    With two slots and movers in non-increasing popularity the outcome is
    always an equilibrium, and a failure raises :class:`TheoremViolation`.
    Any other combination is exploratory: two-slot games with a more popular
    player moving late do have non-equilibrium outcomes, e.g. demands
    ``(15, 16)``, popularities ``(13, 7, 4, 16)``, order ``(3, 2, 1, 4)``.
    """
    order = check_order(order if order is not None else range(1, game.n + 1), game.n)
    result = spe(game, order, cap)
    report = is_pure_nash(game, result.outcome)
    if game.m == 2 and is_popularity_ordered(game, order) and not report.is_equilibrium:
        raise TheoremViolation(
            f"two-slot SPE outcome {result.outcome} admits {report.deviation}"
        )
    return report


def find_spe_non_nash(
    games: Iterable[Game], all_orders: bool = True
) -> list[tuple[Game, MoveOrder, EquilibriumReport]]:
    """Search for SPE outcomes that are not normal-form equilibria.

    Only meaningful for three or more slots; returns every counterexample
    found among ``games`` (all move orders, or identity order only).
    """
    found = []
    for game in games:
        orders = permutations(range(1, game.n + 1)) if all_orders else [tuple(range(1, game.n + 1))]
        for order in orders:
            report = is_pure_nash(game, spe(game, order).outcome)
            if not report.is_equilibrium:
                found.append((game, tuple(order), report))
    return found

