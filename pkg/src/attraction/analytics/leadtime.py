"""How far ahead of release each film's date was fixed, by box-office bucket."""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Mapping, Sequence, TextIO, Union

from attraction.analytics.records import DailyRecord, RecordError

# Lower bounds of the buckets, in millions of currency units, largest first.
BUCKETS = ((100.0, "[100, inf)"), (10.0, "[10, 100)"), (1.0, "[1, 10)"), (0.0, "[0, 1)"))


@dataclass(frozen=True)
class LeadTimeRow:
    bucket: str
    films: int
    mean_days: float | None


def read_decisions(source: Union[str, Path, TextIO]) -> dict[str, date]:
    """Parse a ``movie_id,decision_date`` CSV."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_decisions(fh)
    out = {}
    for line, row in enumerate(csv.DictReader(source), start=2):
        try:
            out[row["movie_id"].strip()] = date.fromisoformat(row["decision_date"].strip())
        except (KeyError, AttributeError, ValueError) as exc:
            raise RecordError(f"decisions line {line}: {exc}") from exc
    return out


def bucket_of(total_millions: float) -> str:
    for low, label in BUCKETS:
        if total_millions >= low:
            return label
    return BUCKETS[-1][1]


def lead_time_table(
    records: Sequence[DailyRecord], decisions: Mapping[str, date], unit: float = 1e6
) -> list[LeadTimeRow]:
    """Average days between decision and release for each box-office bucket.

    Films without a decision date are ignored. ``unit`` converts the raw
    box-office figures to millions.
    """
    total: dict[str, float] = defaultdict(float)
    release: dict[str, date] = {}
    for r in records:
        total[r.movie_id] += r.daily_box_office
        release[r.movie_id] = r.release_date
    leads: dict[str, list[int]] = defaultdict(list)
    for movie, decided in decisions.items():
        if movie in total:
            leads[bucket_of(total[movie] / unit)].append((release[movie] - decided).days)
    return [
        LeadTimeRow(label, len(leads[label]), sum(leads[label]) / len(leads[label]) if leads[label] else None)
        for _, label in BUCKETS
    ]
