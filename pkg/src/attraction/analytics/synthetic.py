"""Synthetic panels with known ground truth, for closed-loop checks.

In slot ``k`` every film still showing takes a share of the demand ``D_k``
proportional to ``gamma**age * theta``. A film released in slot ``r`` shows
for ``lifetime`` slots. Holdovers are films already showing before the panel
opens; they run for the whole horizon and age from slot 1, which is how the
inference side dates films released before its first day. Takings are spread
evenly over the slot's seven days and optionally multiplied by mean-one
log-normal noise. With zero noise the slot aggregates reproduce the
generating shares exactly, so inference recovers ``theta`` up to scale.

With ``lifetime=1`` the release films play the plain release game against a
fixed background of decayed holdovers, and placing them greedily by
decreasing popularity already gives an equilibrium.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Sequence

from attraction.analytics.records import DailyRecord
from attraction.game import strictly_greater

DAYS_PER_SLOT = 7
SCREENING_PRICE = 1000.0  # box office per screening at full noise-free rate


@dataclass(frozen=True)
class SyntheticSpec:
    demands: tuple[float, ...]
    theta: tuple[float, ...]
    release_slots: tuple[int, ...]
    gamma: float = 0.8
    lifetime: int = 1
    holdovers: tuple[float, ...] = ()
    noise: float = 0.0
    start: date = date(2018, 1, 5)
    attendance: float = 0.3

    def __post_init__(self) -> None:
        object.__setattr__(self, "demands", tuple(float(d) for d in self.demands))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "release_slots", tuple(int(r) for r in self.release_slots))
        object.__setattr__(self, "holdovers", tuple(float(h) for h in self.holdovers))
        if isinstance(self.start, str):
            object.__setattr__(self, "start", date.fromisoformat(self.start))
        if len(self.theta) != len(self.release_slots):
            raise ValueError("need one release slot per film")
        if any(not 1 <= r <= len(self.demands) for r in self.release_slots):
            raise ValueError("release slot outside the horizon")
        if any(d <= 0 for d in self.demands) or any(t <= 0 for t in self.theta + self.holdovers):
            raise ValueError("demands and popularities must be positive")
        if not 0 < self.gamma <= 1 or self.lifetime < 1 or self.noise < 0:
            raise ValueError("need 0 < gamma <= 1, lifetime >= 1, noise >= 0")
        if self.start.weekday() != 4:
            raise ValueError("synthetic panels start on a Friday")

    @classmethod
    def from_dict(cls, data: dict) -> SyntheticSpec:
        return cls(**data)

    def movie_id(self, i: int) -> str:
        return f"m{i + 1:03d}"

    def holdover_id(self, h: int) -> str:
        return f"h{h + 1:03d}"

    def background(self) -> tuple[float, ...]:
        """Decayed holdover popularity in each slot."""
        return tuple(
            sum(self.gamma ** (k - 1) * t for t in self.holdovers)
            for k in range(1, len(self.demands) + 1)
        )


def live_weight(
    theta: Sequence[float],
    slots: Sequence[int],
    gamma: float,
    lifetime: int,
    k: int,
    exclude: int | None = None,
    background: Sequence[float] = (),
) -> float:
    """Decayed popularity showing in slot ``k`` (1-based), film ``exclude`` left out.

    Films whose slot is ``None`` are not placed yet.
    """
    total = background[k - 1] if background else 0.0
    for j, (t, r) in enumerate(zip(theta, slots)):
        if j != exclude and r is not None and 0 <= k - r < lifetime:
            total += gamma ** (k - r) * t
    return total


def release_value(
    demands: Sequence[float],
    theta: Sequence[float],
    slots: Sequence[int],
    gamma: float,
    lifetime: int,
    i: int,
    k: int,
    background: Sequence[float] = (),
) -> float:
    """Release-slot takings of film ``i`` (0-based) if it opened in slot ``k``."""
    t = theta[i]
    rivals = live_weight(theta, slots, gamma, lifetime, k, exclude=i, background=background)
    return demands[k - 1] * t / (t + rivals)


@dataclass(frozen=True)
class ReleasePlan:
    slots: tuple[int, ...]
    greedy_was_equilibrium: bool
    repair_steps: int
    converged: bool


def _best_slot(demands, theta, slots, gamma, lifetime, background, i) -> tuple[int, float]:
    best_k, best_v = 1, release_value(demands, theta, slots, gamma, lifetime, i, 1, background)
    for k in range(2, len(demands) + 1):
        v = release_value(demands, theta, slots, gamma, lifetime, i, k, background)
        if strictly_greater(v, best_v):
            best_k, best_v = k, v
    return best_k, best_v


def _deviator(demands, theta, slots, gamma, lifetime, background) -> tuple[int, int] | None:
    for i in range(len(theta)):
        k, v = _best_slot(demands, theta, slots, gamma, lifetime, background, i)
        here = release_value(demands, theta, slots, gamma, lifetime, i, slots[i], background)
        if strictly_greater(v, here):
            return i, k
    return None


def equilibrium_release_slots(
    demands: Sequence[float],
    theta: Sequence[float],
    gamma: float = 0.8,
    lifetime: int = 1,
    holdovers: Sequence[float] = (),
    max_steps: int = 10_000,
) -> ReleasePlan:
    """Release calendar at which no film gains by opening elsewhere.

    Films are placed greedily, most popular first, each at the slot where it
    would take the most given the holdovers and the films already placed.
    For ``lifetime=1`` that calendar is an equilibrium. Longer runs crowd
    later slots, so the greedy calendar can leave a profitable move; then
    better-response repair moves the lowest-indexed such film until none is
    left or ``max_steps`` is hit. Repair is not guaranteed to settle.
    """
    background = tuple(
        sum(gamma ** (k - 1) * t for t in holdovers) for k in range(1, len(demands) + 1)
    )
    n = len(theta)
    args = (demands, theta)
    order = sorted(range(n), key=lambda i: (-theta[i], i))
    slots: list = [None] * n
    for i in order:
        slots[i] = _best_slot(*args, slots, gamma, lifetime, background, i)[0]
    greedy_ok = _deviator(*args, slots, gamma, lifetime, background) is None
    steps = 0
    while steps < max_steps:
        move = _deviator(*args, slots, gamma, lifetime, background)
        if move is None:
            return ReleasePlan(tuple(slots), greedy_ok, steps, True)
        slots[move[0]] = move[1]
        steps += 1
    converged = _deviator(*args, slots, gamma, lifetime, background) is None
    return ReleasePlan(tuple(slots), greedy_ok, steps, converged)


def slot_takings(spec: SyntheticSpec) -> list[dict[str, float]]:
    """Noise-free takings per slot: ``out[k-1][movie_id] = B``."""
    out = []
    for k in range(1, len(spec.demands) + 1):
        weights = {
            spec.holdover_id(h): spec.gamma ** (k - 1) * t for h, t in enumerate(spec.holdovers)
        }
        weights.update(
            (spec.movie_id(i), spec.gamma ** (k - r) * t)
            for i, (t, r) in enumerate(zip(spec.theta, spec.release_slots))
            if 0 <= k - r < spec.lifetime
        )
        total = sum(weights.values())
        out.append({m: spec.demands[k - 1] * w / total for m, w in weights.items()})
    return out


def _release_date(spec: SyntheticSpec, movie: str) -> date:
    if movie.startswith("h"):
        return spec.start - timedelta(DAYS_PER_SLOT)
    r = spec.release_slots[int(movie[1:]) - 1]
    return spec.start + timedelta(DAYS_PER_SLOT * (r - 1))


def generate_synthetic_panel(spec: SyntheticSpec, seed: int = 0) -> list[DailyRecord]:
    rng = random.Random(seed)
    sigma = spec.noise
    records = []
    for k, takes in enumerate(slot_takings(spec), start=1):
        first_day = spec.start + timedelta(DAYS_PER_SLOT * (k - 1))
        for day in range(DAYS_PER_SLOT):
            when = first_day + timedelta(day)
            for mid, b in sorted(takes.items()):
                factor = rng.lognormvariate(-sigma * sigma / 2, sigma) if sigma else 1.0
                box = b / DAYS_PER_SLOT * factor
                records.append(
                    DailyRecord(
                        date=when,
                        movie_id=mid,
                        title=f"Film {mid}",
                        daily_box_office=box,
                        screenings=box / SCREENING_PRICE,
                        attendance_rate=spec.attendance,
                        release_date=_release_date(spec, mid),
                    )
                )
    return records


def generate_theater_panel(
    n_movies: int = 6,
    days: int = 30,
    responsiveness: float = 0.5,
    start: date = date(2018, 1, 5),
    seed: int = 0,
) -> list[DailyRecord]:
    """Panel whose theaters always shift screenings toward above-average films.

    Tomorrow's screenings are ``beta * (1 + responsiveness * (alpha - avg) / avg)``,
    so every day with unequal attendance scores positive.
    """
    rng = random.Random(seed)
    screenings = [100.0] * n_movies
    records = []
    for d in range(days):
        when = start + timedelta(d)
        alpha = [rng.uniform(0.1, 0.6) for _ in range(n_movies)]
        avg = sum(alpha) / n_movies
        for i in range(n_movies):
            records.append(
                DailyRecord(
                    date=when,
                    movie_id=f"t{i + 1:02d}",
                    title=f"Film {i + 1}",
                    daily_box_office=screenings[i] * alpha[i] * 100,
                    screenings=screenings[i],
                    attendance_rate=alpha[i],
                    release_date=start,
                )
            )
        screenings = [
            b * (1 + responsiveness * (a - avg) / avg) for b, a in zip(screenings, alpha)
        ]
    return records
