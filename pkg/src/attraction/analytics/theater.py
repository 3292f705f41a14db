"""Do theaters move screenings toward well-attended films?

For day ``t`` the score is

    sum_i (alpha_{i,t} - avg_t) * (beta_{i,t+1} - beta_{i,t})

over regular films (attendance above ``tau`` on day ``t``) shown on both
``t`` and ``t+1``, where ``alpha`` is attendance, ``beta`` screenings and
``avg_t`` the mean attendance of those films. A day is rational when the
score is strictly positive: screenings flowed toward above-average films.
``printed_sign=True`` uses ``beta_t - beta_{t+1}`` instead.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Sequence

from attraction.analytics.records import DailyRecord


@dataclass(frozen=True)
class TheaterReport:
    scores: dict[date, float | None]
    rational_days: int
    defined_days: int

    @property
    def rational_ratio(self) -> float | None:
        return self.rational_days / self.defined_days if self.defined_days else None


def day_score(
    attendance: Sequence[float], today: Sequence[float], tomorrow: Sequence[float], sign: int = 1
) -> float:
    if min(attendance) == max(attendance):
        return 0.0
    avg = math.fsum(attendance) / len(attendance)
    return sign * sum((a - avg) * (b1 - b0) for a, b0, b1 in zip(attendance, today, tomorrow))


def theater_rationality(
    records: Sequence[DailyRecord], tau: float = 0.05, printed_sign: bool = False
) -> TheaterReport:
    """Score every day that has a following day in the panel.

    Days with fewer than two qualifying films score ``None`` and are left
    out of the ratio.
    """
    by_day: dict[date, dict[str, DailyRecord]] = defaultdict(dict)
    for r in records:
        by_day[r.date][r.movie_id] = r
    sign = -1 if printed_sign else 1
    scores: dict[date, float | None] = {}
    rational = defined = 0
    for day in sorted(by_day):
        nxt = by_day.get(day + timedelta(1))
        if nxt is None:
            continue
        films = [
            m
            for m, r in sorted(by_day[day].items())
            if r.attendance_rate is not None and r.attendance_rate > tau and m in nxt
        ]
        if len(films) < 2:
            scores[day] = None
            continue
        today = by_day[day]
        score = day_score(
            [today[m].attendance_rate for m in films],
            [today[m].screenings for m in films],
            [nxt[m].screenings for m in films],
            sign,
        )
        scores[day] = score
        defined += 1
        rational += score > 0
    return TheaterReport(scores, rational, defined)
