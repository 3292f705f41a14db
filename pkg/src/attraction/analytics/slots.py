"""Cutting a daily panel into release slots.

The default calendar starts a slot every Friday. A listed holiday opens a
slot of its own on its first day, and Fridays falling inside the holiday do
not cut it. The alternative ``screenings`` mode opens a slot on any day when
films released that day take more than ``threshold`` of all screenings.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Iterable, Sequence

from attraction.analytics.records import DailyRecord

FRIDAY = 4


@dataclass(frozen=True)
class Holiday:
    start: date
    end: date

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError(f"holiday ends {self.end} before it starts {self.start}")


@dataclass(frozen=True)
class Slot:
    """One slot of the panel.

    ``new`` maps each film released in this slot to its box office here;
    ``old`` maps each film released earlier and still earning to
    ``(box office, age in slots)``.
    """

    index: int
    start: date
    end: date
    demand: float
    new: dict[str, float] = field(default_factory=dict, hash=False)
    old: dict[str, tuple[float, int]] = field(default_factory=dict, hash=False)

    @property
    def days(self) -> int:
        return (self.end - self.start).days + 1


@dataclass(frozen=True)
class SlotPanel:
    """Slot-aggregated panel.

    Films released before the first covered day are counted as released in
    slot 1 and listed in ``carried_in``; they anchor the normalisation but
    are left out of best-response statistics.
    """

    slots: tuple[Slot, ...]
    release_slot: dict[str, int] = field(default_factory=dict, hash=False)
    carried_in: frozenset[str] = frozenset()

    def __len__(self) -> int:
        return len(self.slots)

    def slot(self, k: int) -> Slot:
        return self.slots[k - 1]

    @property
    def total_box_office(self) -> float:
        return sum(s.demand for s in self.slots)


def _days(first: date, last: date) -> list[date]:
    return [first + timedelta(d) for d in range((last - first).days + 1)]


def friday_starts(first: date, last: date, holidays: Iterable[Holiday] = ()) -> list[date]:
    holidays = list(holidays)
    starts = {first}
    for day in _days(first, last):
        if day.weekday() == FRIDAY and not any(h.start < day <= h.end for h in holidays):
            starts.add(day)
    starts.update(h.start for h in holidays if first <= h.start <= last)
    return sorted(starts)


def screening_starts(records: Sequence[DailyRecord], threshold: float = 0.10) -> list[date]:
    by_day_all: dict[date, float] = defaultdict(float)
    by_day_new: dict[date, float] = defaultdict(float)
    for r in records:
        by_day_all[r.date] += r.screenings
        if r.release_date == r.date:
            by_day_new[r.date] += r.screenings
    first = min(by_day_all)
    starts = [first]
    for day in sorted(by_day_all):
        total = by_day_all[day]
        if day != first and total > 0 and by_day_new[day] > threshold * total:
            starts.append(day)
    return starts


def partition_slots(
    records: Sequence[DailyRecord],
    holidays: Iterable[Holiday] = (),
    mode: str = "friday",
    threshold: float = 0.10,
) -> SlotPanel:
    """Aggregate daily records into slots.

    Args:
        records: daily rows, any order.
        holidays: spans that open their own slot (``friday`` mode only).
        mode: ``"friday"`` or ``"screenings"``.
        threshold: new-release screening share that opens a slot in
            ``screenings`` mode.
    """
    records = sorted(records, key=lambda r: r.date)
    if not records:
        return SlotPanel(())
    first, last = records[0].date, records[-1].date
    if mode == "friday":
        starts = friday_starts(first, last, holidays)
    elif mode == "screenings":
        starts = screening_starts(records, threshold)
    else:
        raise ValueError(f"unknown partition mode {mode!r}")

    def slot_of(day: date) -> int:
        return bisect.bisect_right(starts, day)

    release: dict[str, int] = {}
    carried = set()
    for r in records:
        if r.movie_id in release:
            continue
        if r.release_date < first:
            release[r.movie_id] = 1
            carried.add(r.movie_id)
        else:
            release[r.movie_id] = slot_of(r.release_date)

    box: dict[int, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    for r in records:
        box[slot_of(r.date)][r.movie_id] += r.daily_box_office

    slots = []
    for k, start in enumerate(starts, start=1):
        end = starts[k] - timedelta(1) if k < len(starts) else last
        takes = box.get(k, {})
        new = {m: b for m, b in sorted(takes.items()) if release[m] == k}
        old = {m: (b, k - release[m]) for m, b in sorted(takes.items()) if release[m] < k}
        slots.append(Slot(k, start, end, sum(takes.values()), new, old))
    return SlotPanel(tuple(slots), release, frozenset(carried))
