"""Game instances and the proportional-share utility model.

Players and slots are numbered from 1 in every public function: a profile
``(1, 2, 1)`` puts players 1 and 3 in slot 1 and player 2 in slot 2. Values
are plain tuples indexed by position, so ``utilities(game, p)[0]`` is
player 1's utility.

A game built with ``exact=True`` stores its demands as ``Fraction`` and its
popularity degrees as ``int`` or ``Fraction``, so every utility it produces
is an exact rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Sequence, Union

from attraction.errors import InvalidGameError, InvalidProfileError

Number = Union[int, float, Fraction]
Profile = tuple[int, ...]

# Relative margin a float gain must clear before it counts as strict.
REL_TOL = 1e-12


def strictly_greater(a: Number, b: Number) -> bool:
    """Return True when ``a > b`` by more than rounding noise.

    Rationals compare exactly. If either side is a float the difference must
    exceed ``REL_TOL`` times the larger magnitude.
    """
    if isinstance(a, float) or isinstance(b, float):
        return a - b > REL_TOL * max(abs(a), abs(b))
    return a > b


def nearly_equal(a: Number, b: Number) -> bool:
    return not strictly_greater(a, b) and not strictly_greater(b, a)


def to_number(value, exact: bool) -> Number:
    """Coerce ``value`` to the game's numeric representation."""
    if isinstance(value, bool):
        raise InvalidGameError(f"expected a number, got {value!r}")
    if exact:
        try:
            q = value if isinstance(value, Fraction) else Fraction(value)
        except (TypeError, ValueError) as exc:
            raise InvalidGameError(f"expected a number, got {value!r}") from exc
        return q
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidGameError(f"expected a number, got {value!r}") from exc
    if not math.isfinite(x):
        raise InvalidGameError(f"non-finite value {value!r}")
    return x


def to_weight(value, exact: bool) -> Number:
    # Integral exact weights stay ints: int sums are much cheaper than
    # Fraction sums, and a Fraction demand keeps every quotient exact.
    x = to_number(value, exact)
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _positive(values: Iterable[Number], label: str) -> None:
    for k, x in enumerate(values, start=1):
        if not x > 0:
            raise InvalidGameError(f"{label} {k} must be positive, got {x}")


@dataclass(frozen=True)
class Game:
    """Slot demands plus one popularity degree per player."""

    demands: tuple[Number, ...]
    popularity: tuple[Number, ...]
    exact: bool = False

    def __post_init__(self) -> None:
        demands = tuple(to_number(d, self.exact) for d in self.demands)
        popularity = tuple(to_weight(t, self.exact) for t in self.popularity)
        if not demands:
            raise InvalidGameError("a game needs at least one slot")
        if not popularity:
            raise InvalidGameError("a game needs at least one player")
        _positive(demands, "demand of slot")
        _positive(popularity, "popularity of player")
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "popularity", popularity)

    @property
    def m(self) -> int:
        return len(self.demands)

    @property
    def n(self) -> int:
        return len(self.popularity)

    def as_exact(self) -> Game:
        return Game(self.demands, self.popularity, exact=True)

    def scaled(self, factor: Number) -> Game:
        """Copy with every popularity degree multiplied by ``factor``."""
        return Game(self.demands, tuple(t * factor for t in self.popularity), self.exact)

    def is_homogeneous(self) -> bool:
        return len(set(self.popularity)) == 1

    @classmethod
    def from_dict(cls, data: dict, exact: bool = False) -> Game:
        try:
            return cls(tuple(data["demands"]), tuple(data["popularity"]), exact=exact)
        except (KeyError, TypeError) as exc:
            raise InvalidGameError(f"malformed game description: {exc}") from exc

    def to_dict(self) -> dict:
        return {"demands": list(self.demands), "popularity": list(self.popularity)}


def check_profile(profile: Sequence[int], n: int, m: int) -> Profile:
    """Validate a 1-based profile for ``n`` players and ``m`` slots."""
    try:
        choices = tuple(profile)
    except TypeError as exc:
        raise InvalidProfileError(f"profile must be a sequence, got {profile!r}") from exc
    if len(choices) != n:
        raise InvalidProfileError(f"profile has {len(choices)} entries, expected {n}")
    for i, a in enumerate(choices, start=1):
        if isinstance(a, bool) or not isinstance(a, (int, Rational)) or int(a) != a:
            raise InvalidProfileError(f"player {i} has non-integer slot {a!r}")
        if not 1 <= a <= m:
            raise InvalidProfileError(f"player {i} chose slot {a}, outside 1..{m}")
    return tuple(int(a) for a in choices)


def occupancy(profile: Sequence[int], m: int) -> dict[int, frozenset[int]]:
    """Map each slot ``1..m`` to the set of players choosing it."""
    choices = check_profile(profile, len(tuple(profile)), m)
    slots: dict[int, set[int]] = {j: set() for j in range(1, m + 1)}
    for i, a in enumerate(choices, start=1):
        slots[a].add(i)
    return {j: frozenset(s) for j, s in slots.items()}


def occupancy_counts(profile: Sequence[int], m: int) -> tuple[int, ...]:
    counts = [0] * m
    for a in profile:
        counts[a - 1] += 1
    return tuple(counts)


def slot_loads(game: Game, profile: Profile) -> list[Number]:
    """Total popularity placed in each slot (0-based list)."""
    loads: list[Number] = [0] * game.m
    for a, theta in zip(profile, game.popularity):
        loads[a - 1] += theta
    return loads


def utility(game: Game, profile: Sequence[int], i: int) -> Number:
    """Audience won by player ``i``: its popularity share of its slot's demand."""
    p = check_profile(profile, game.n, game.m)
    if not 1 <= i <= game.n:
        raise InvalidProfileError(f"no player {i} in a {game.n}-player game")
    a = p[i - 1]
    load = sum(t for b, t in zip(p, game.popularity) if b == a)
    return game.demands[a - 1] * game.popularity[i - 1] / load


def utilities(game: Game, profile: Sequence[int]) -> tuple[Number, ...]:
    p = check_profile(profile, game.n, game.m)
    loads = slot_loads(game, p)
    return tuple(
        game.demands[a - 1] * theta / loads[a - 1]
        for a, theta in zip(p, game.popularity)
    )


def utility_density(game: Game, profile: Sequence[int]) -> tuple[Number | None, ...]:
    """Demand per unit of placed popularity in each slot.

    Unoccupied slots are reported as ``None`` rather than infinity.
    """
    p = check_profile(profile, game.n, game.m)
    loads = slot_loads(game, p)
    return tuple(
        d / load if load else None for d, load in zip(game.demands, loads)
    )


def all_profiles(n: int, m: int) -> Iterable[Profile]:
    """Every profile in lexicographic order."""
    return product(range(1, m + 1), repeat=n)
