"""Studios releasing several films each.

A studio's payoff is the sum of its films' proportional shares. Choosing
where to put one studio's films is a partition-type problem, so the best
response here is exhaustive and guarded by a size cap. Joint equilibria need
not exist; :func:`find_pure_nash` either returns one or a certificate pairing
every joint profile with a profitable studio deviation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from attraction.equilibrium import DEFAULT_CAP
from attraction.errors import InstanceTooLargeError, InvalidGameError, InvalidProfileError
from attraction.game import Number, strictly_greater, to_number, to_weight

JointAssignment = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class StudioGame:
    demands: tuple[Number, ...]
    studios: tuple[tuple[Number, ...], ...]
    exact: bool = False

    def __post_init__(self) -> None:
        demands = tuple(to_number(d, self.exact) for d in self.demands)
        try:
            studios = tuple(tuple(to_weight(t, self.exact) for t in films) for films in self.studios)
        except TypeError as exc:
            raise InvalidGameError("studios must be a list of popularity lists") from exc
        if not demands or not studios:
            raise InvalidGameError("need at least one slot and one studio")
        if any(not films for films in studios):
            raise InvalidGameError("every studio needs at least one film")
        if any(not d > 0 for d in demands) or any(not t > 0 for f in studios for t in f):
            raise InvalidGameError("demands and popularities must be positive")
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "studios", studios)

    @property
    def m(self) -> int:
        return len(self.demands)

    @property
    def film_count(self) -> int:
        return sum(len(f) for f in self.studios)

    @classmethod
    def from_dict(cls, data: dict, exact: bool = False) -> StudioGame:
        try:
            return cls(tuple(data["demands"]), tuple(tuple(s) for s in data["studios"]), exact)
        except (KeyError, TypeError) as exc:
            raise InvalidGameError(f"malformed studio game: {exc}") from exc


def check_assignment(sg: StudioGame, assign: Sequence[Sequence[int]]) -> JointAssignment:
    try:
        joint = tuple(tuple(int(a) for a in films) for films in assign)
    except (TypeError, ValueError) as exc:
        raise InvalidProfileError(f"malformed assignment {assign!r}") from exc
    if len(joint) != len(sg.studios):
        raise InvalidProfileError(f"assignment covers {len(joint)} studios, expected {len(sg.studios)}")
    for s, (films, slots) in enumerate(zip(sg.studios, joint), start=1):
        if len(films) != len(slots):
            raise InvalidProfileError(f"studio {s} has {len(films)} films, got {len(slots)} slots")
        if any(not 1 <= a <= sg.m for a in slots):
            raise InvalidProfileError(f"studio {s} uses a slot outside 1..{sg.m}")
    return joint


def _loads(sg: StudioGame, joint: JointAssignment, skip: int | None = None) -> list[Number]:
    loads: list[Number] = [0] * sg.m
    for s, (films, slots) in enumerate(zip(sg.studios, joint)):
        if s == skip:
            continue
        for theta, a in zip(films, slots):
            loads[a - 1] += theta
    return loads


def studio_utility(sg: StudioGame, assign: Sequence[Sequence[int]], i: int) -> Number:
    """Total audience of studio ``i`` (1-based) under a joint assignment."""
    joint = check_assignment(sg, assign)
    loads = _loads(sg, joint)
    return sum(
        sg.demands[a - 1] * theta / loads[a - 1]
        for theta, a in zip(sg.studios[i - 1], joint[i - 1])
    )


def studio_utilities(sg: StudioGame, assign: Sequence[Sequence[int]]) -> tuple[Number, ...]:
    return tuple(studio_utility(sg, assign, i) for i in range(1, len(sg.studios) + 1))


def _responder(sg: StudioGame, joint: JointAssignment, i: int):
    # Value of studio i as a function of its own slot tuple, others fixed.
    films = sg.studios[i - 1]
    background = _loads(sg, joint, skip=i - 1)
    cache: dict[tuple, Number] = {}

    def value(slots: tuple[int, ...]) -> Number:
        own = [0] * sg.m
        for theta, a in zip(films, slots):
            own[a - 1] += theta
        key = tuple(own)
        v = cache.get(key)
        if v is None:
            v = sum(
                d * o / (b + o) for d, o, b in zip(sg.demands, own, background) if o
            )
            cache[key] = v
        return v

    return value


def exact_best_response(
    sg: StudioGame, assign: Sequence[Sequence[int]], i: int, cap: int = DEFAULT_CAP
) -> tuple[tuple[int, ...], Number]:
    """Best placement of studio ``i``'s films with every other film fixed.

    Tries all ``m**k`` placements of the studio's ``k`` films; among equal
    values the lexicographically smallest slot tuple wins.

    Raises:
        InstanceTooLargeError: if ``m**k`` exceeds ``cap``.
    """
    joint = check_assignment(sg, assign)
    k = len(sg.studios[i - 1])
    if sg.m**k > cap:
        raise InstanceTooLargeError(sg.m**k, cap, what="placements")
    value = _responder(sg, joint, i)
    best = None
    best_value = None
    for slots in product(range(1, sg.m + 1), repeat=k):
        v = value(slots)
        if best_value is None or strictly_greater(v, best_value):
            best, best_value = slots, v
    return best, best_value


@dataclass(frozen=True)
class StudioDeviation:
    profile: JointAssignment
    studio: int
    better: tuple[int, ...]
    gain: Number


@dataclass(frozen=True)
class JointNashSearch:
    """Outcome of an exhaustive joint-equilibrium scan.

    Exactly one of ``equilibrium`` and ``certificate`` is meaningful: when no
    equilibrium exists, ``certificate`` holds one profitable deviation for
    every joint profile, in scan order.
    """

    equilibrium: JointAssignment | None
    utilities: tuple[Number, ...] | None
    certificate: tuple[StudioDeviation, ...]
    profiles_checked: int

    @property
    def exists(self) -> bool:
        return self.equilibrium is not None


def joint_profiles(sg: StudioGame) -> Iterator[JointAssignment]:
    sizes = [len(f) for f in sg.studios]
    for flat in product(range(1, sg.m + 1), repeat=sum(sizes)):
        out, pos = [], 0
        for k in sizes:
            out.append(flat[pos : pos + k])
            pos += k
        yield tuple(out)


def first_deviation(sg: StudioGame, joint: JointAssignment, cap: int = DEFAULT_CAP):
    for i in range(1, len(sg.studios) + 1):
        current = studio_utility(sg, joint, i)
        better, value = exact_best_response(sg, joint, i, cap)
        if strictly_greater(value, current):
            return StudioDeviation(joint, i, better, value - current)
    return None


def _check_joint_size(sg: StudioGame, cap: int) -> None:
    size = sg.m**sg.film_count
    if size > cap:
        raise InstanceTooLargeError(size, cap, what="joint profiles")


def enumerate_joint_nash(sg: StudioGame, cap: int = DEFAULT_CAP) -> list[JointAssignment]:
    """Every joint assignment at which no studio can improve."""
    _check_joint_size(sg, cap)
    return [j for j in joint_profiles(sg) if first_deviation(sg, j, cap) is None]


def find_pure_nash(sg: StudioGame, cap: int = DEFAULT_CAP) -> JointNashSearch:
    """First joint equilibrium in lexicographic order, or a nonexistence certificate."""
    _check_joint_size(sg, cap)
    certificate = []
    for count, joint in enumerate(joint_profiles(sg), start=1):
        dev = first_deviation(sg, joint, cap)
        if dev is None:
            return JointNashSearch(joint, studio_utilities(sg, joint), (), count)
        certificate.append(dev)
    return JointNashSearch(None, None, tuple(certificate), len(certificate))


def has_equal_partition(weights: Sequence[int]) -> bool:
    """Subset-sum check: can ``weights`` split into two halves of equal sum?"""
    total = sum(weights)
    if total % 2:
        return False
    reachable = 1  # bit s set <=> some subset sums to s
    for w in weights:
        reachable |= reachable << w
    return bool(reachable >> (total // 2) & 1)


@dataclass(frozen=True)
class GadgetResult:
    """Best-response instance built from a list of integer weights.

    Two rival studios hold one film of popularity 1 each, pinned to slots 1
    and 2 of a two-slot game with unit demands. The free studio (studio 3)
    owns one film per weight. If ``s`` is the weight it places in slot 1 and
    ``S`` the total, its payoff is ``s/(1+s) + (S-s)/(1+S-s)``: strictly
    concave in ``s`` and maximal at ``s = S/2``. Its best response therefore
    reaches ``threshold = 2S/(2+S)`` exactly when the weights split evenly.
    """

    game: StudioGame
    fixed: JointAssignment
    threshold: Fraction
    optimum: Fraction
    placement: tuple[int, ...]
    verdict: bool
    partition_exists: bool


def partition_gadget(weights: Sequence[int], cap: int = DEFAULT_CAP) -> GadgetResult:
    weights = tuple(weights)
    if not weights:
        raise InvalidGameError("gadget needs at least one weight")
    if any(isinstance(w, bool) or int(w) != w or w <= 0 for w in weights):
        raise InvalidGameError("gadget weights must be positive integers")
    weights = tuple(int(w) for w in weights)
    sg = StudioGame((1, 1), ((1,), (1,), weights), exact=True)
    fixed = ((1,), (2,), (1,) * len(weights))
    total = sum(weights)
    threshold = Fraction(2 * total, 2 + total)
    placement, optimum = exact_best_response(sg, fixed, 3, cap)
    verdict = optimum >= threshold
    exists = has_equal_partition(weights)
    if total % 2 and verdict:
        raise AssertionError(f"odd total {total} cannot reach the balanced threshold")
    return GadgetResult(sg, fixed, threshold, optimum, placement, verdict, exists)
