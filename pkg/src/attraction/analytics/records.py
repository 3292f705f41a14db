"""Daily box-office records and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, TextIO, Union

FIELDS = (
    "date",
    "movie_id",
    "title",
    "daily_box_office",
    "screenings",
    "attendance_rate",
    "release_date",
)


class RecordError(ValueError):
    """A record, or a CSV row, violates the panel schema."""


@dataclass(frozen=True)
class DailyRecord:
    date: date
    movie_id: str
    daily_box_office: float
    screenings: float
    release_date: date
    attendance_rate: float | None = None
    title: str = ""

    def __post_init__(self) -> None:
        if self.release_date > self.date:
            raise RecordError(
                f"{self.movie_id}: record on {self.date} precedes release {self.release_date}"
            )
        for name in ("daily_box_office", "screenings"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise RecordError(f"{self.movie_id} on {self.date}: {name} must be >= 0")
        rate = self.attendance_rate
        if rate is not None and not 0 <= rate <= 1:
            raise RecordError(f"{self.movie_id} on {self.date}: attendance rate {rate} outside [0, 1]")


def _parse_row(row: dict) -> DailyRecord:
    try:
        rate = row.get("attendance_rate", "")
        return DailyRecord(
            date=date.fromisoformat(row["date"].strip()),
            movie_id=row["movie_id"].strip(),
            title=(row.get("title") or "").strip(),
            daily_box_office=float(row["daily_box_office"]),
            screenings=float(row["screenings"]),
            attendance_rate=float(rate) if rate not in (None, "") else None,
            release_date=date.fromisoformat(row["release_date"].strip()),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, RecordError):
            raise
        raise RecordError(f"malformed row {row!r}: {exc}") from exc


Source = Union[str, Path, TextIO]


def read_records(source: Source, on_invalid: str = "raise") -> list[DailyRecord]:
    """Load records from a CSV path or open text stream, sorted by date.

    ``on_invalid="skip"`` drops rows that break the schema (for instance
    preview screenings dated before the official release) instead of raising.
    """
    if on_invalid not in ("raise", "skip"):
        raise ValueError(f"on_invalid must be 'raise' or 'skip', not {on_invalid!r}")
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_records(fh, on_invalid)
    reader = csv.DictReader(source)
    missing = set(FIELDS) - {"title", "attendance_rate"} - set(reader.fieldnames or ())
    if missing:
        raise RecordError(f"CSV is missing columns: {', '.join(sorted(missing))}")
    records = []
    for line, row in enumerate(reader, start=2):
        try:
            records.append(_parse_row(row))
        except RecordError as exc:
            if on_invalid == "raise":
                raise RecordError(f"line {line}: {exc}") from exc
    records.sort(key=lambda r: (r.date, r.movie_id))
    return records


def write_records(records: Iterable[DailyRecord], target: TextIO | None = None) -> str:
    """Write records as CSV; returns the text when no stream is given."""
    out = target if target is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in records:
        writer.writerow(
            [
                r.date.isoformat(),
                r.movie_id,
                r.title,
                repr(r.daily_box_office),
                repr(r.screenings),
                "" if r.attendance_rate is None else repr(r.attendance_rate),
                r.release_date.isoformat(),
            ]
        )
    return out.getvalue() if target is None else ""
