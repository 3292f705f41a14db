"""How fast a film's takings fall off after release."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from attraction.analytics.records import DailyRecord

# Shares within this of a grid point count as reaching it.
GRID_SLACK = 1e-12


@dataclass(frozen=True)
class DecayCurves:
    """Survival curves over ``grid``.

    ``first_week[k]`` is the fraction of films whose first-week share of
    lifetime box office is at least ``grid[k]``; ``second_over_first[k]`` is
    the same for the ratio of week-two to week-one takings.
    """

    grid: tuple[float, ...]
    first_week: tuple[float, ...]
    second_over_first: tuple[float, ...]
    films: int

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["x", "first_week_share", "second_over_first"])
        for row in zip(self.grid, self.first_week, self.second_over_first):
            writer.writerow([repr(v) for v in row])
        return out.getvalue()


def _survival(values: Sequence[float], grid: Sequence[float]) -> tuple[float, ...]:
    if not values:
        return tuple(0.0 for _ in grid)
    return tuple(sum(v >= x - GRID_SLACK for v in values) / len(values) for x in grid)


def decay_stats(records: Sequence[DailyRecord], step: Fraction = Fraction(1, 20)) -> DecayCurves:
    """First-week share and week-two/week-one ratio survival curves.

    Weeks are counted from each film's release date. Films with no takings
    are skipped for the share; films with no first-week takings are skipped
    for the ratio.
    """
    total: dict[str, float] = defaultdict(float)
    week1: dict[str, float] = defaultdict(float)
    week2: dict[str, float] = defaultdict(float)
    for r in records:
        age = (r.date - r.release_date).days
        total[r.movie_id] += r.daily_box_office
        if age < 7:
            week1[r.movie_id] += r.daily_box_office
        elif age < 14:
            week2[r.movie_id] += r.daily_box_office
    shares = [week1[m] / t for m, t in total.items() if t > 0]
    ratios = [week2[m] / week1[m] for m in total if week1[m] > 0]
    steps = int(1 / Fraction(step))
    grid = tuple(float(Fraction(k, steps)) for k in range(steps + 1))
    return DecayCurves(grid, _survival(shares, grid), _survival(ratios, grid), len(total))
