"""Cohort data model and CSV ingestion.

A cohort is a set of subjects, each carrying a right-censored follow-up
time, an event indicator (1 = event observed, 0 = censored), and one or
two risk scores.  Higher scores always mean higher predicted risk.  A
cohort with two scores per subject is *paired* and supports head-to-head
accuracy comparisons.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    EmptyCohortError,
    InvalidStatusError,
    MissingColumnError,
    NoEventsBeforeT0Error,
    NonNumericCellError,
    NonPositiveTimeError,
    NotPairedError,
    T0BeyondSupportError,
)

__all__ = [
    "SubjectRecord",
    "CohortSample",
    "ColumnMap",
    "read_cohort_csv",
    "write_cohort_csv",
    "validate_horizon",
]


@dataclass(frozen=True)
class SubjectRecord:
    """One subject: follow-up time, event indicator, and score(s)."""

    time: float
    status: int
    score1: float
    score2: float | None = None

    def __post_init__(self):
        if not (isinstance(self.time, (int, float)) and math.isfinite(self.time)):
            raise NonNumericCellError(None, "time", repr(self.time))
        if self.time <= 0:
            raise NonPositiveTimeError(None, self.time)
        if self.status not in (0, 1):
            raise InvalidStatusError(None, self.status)
        if not (isinstance(self.score1, (int, float)) and math.isfinite(self.score1)):
            raise NonNumericCellError(None, "score1", repr(self.score1))
        if self.score2 is not None and not (
            isinstance(self.score2, (int, float)) and math.isfinite(self.score2)
        ):
            raise NonNumericCellError(None, "score2", repr(self.score2))


@dataclass(frozen=True)
class ColumnMap:
    """Names of the CSV columns holding each field.

    ``score2`` has a twist: when left as None, a column literally named
    ``score2`` is picked up automatically if present; naming a column
    explicitly makes it required.
    """

    time: str = "time"
    status: str = "status"
    score1: str = "score1"
    score2: str | None = None


class CohortSample:
    """Immutable columnar view of a cohort.

    Parameters
    ----------
    times, status, score1 : array-like, one value per subject
    score2 : array-like or None
        Second score for paired cohorts.

    All arrays are validated (finite, times > 0, status in {0, 1}) and
    stored as read-only float64 arrays.
    """

    __slots__ = ("times", "status", "score1", "score2")

    def __init__(self, times, status, score1, score2=None, _rows=None):
        # copy so freezing the arrays never mutates caller-owned buffers
        times = np.array(times, dtype=float)
        status_arr = np.array(status, dtype=float)
        score1 = np.array(score1, dtype=float)
        score2 = None if score2 is None else np.array(score2, dtype=float)
        if times.size == 0:
            raise EmptyCohortError()
        n = times.size
        for name, arr in (("time", times), ("status", status_arr), ("score1", score1)):
            if arr.shape != (n,):
                raise ValueError(f"{name} has shape {arr.shape}, expected ({n},)")
        if score2 is not None and score2.shape != (n,):
            raise ValueError(f"score2 has shape {score2.shape}, expected ({n},)")

        def _line(i: int) -> int | None:
            return None if _rows is None else _rows[i]

        bad = ~np.isfinite(times)
        if bad.any():
            i = int(np.argmax(bad))
            raise NonNumericCellError(_line(i), "time", repr(times[i]))
        bad = times <= 0
        if bad.any():
            i = int(np.argmax(bad))
            raise NonPositiveTimeError(_line(i), float(times[i]))
        with np.errstate(invalid="ignore"):
            bad = ~((status_arr == 0.0) | (status_arr == 1.0))
        if bad.any():
            i = int(np.argmax(bad))
            raise InvalidStatusError(_line(i), status_arr[i])
        for name, arr in (("score1", score1),) + (
            () if score2 is None else (("score2", score2),)
        ):
            bad = ~np.isfinite(arr)
            if bad.any():
                i = int(np.argmax(bad))
                raise NonNumericCellError(_line(i), name, repr(arr[i]))

        for arr in (times, status_arr, score1, score2):
            if arr is not None:
                arr.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "status", status_arr)
        object.__setattr__(self, "score1", score1)
        object.__setattr__(self, "score2", score2)

    def __setattr__(self, name, value):
        raise AttributeError("CohortSample is immutable")

    @property
    def n(self) -> int:
        return self.times.size

    @property
    def paired(self) -> bool:
        return self.score2 is not None

    def scores(self, which: int = 1) -> np.ndarray:
        """Return the score column (1 or 2); 2 requires a paired cohort."""
        if which == 1:
            return self.score1
        if which == 2:
            if self.score2 is None:
                raise NotPairedError()
            return self.score2
        raise ValueError(f"score selector must be 1 or 2, got {which!r}")

    def take(self, indices) -> "CohortSample":
        """Row subset/resample; keeps score pairs attached to their subject."""
        idx = np.asarray(indices, dtype=np.intp)
        return CohortSample(
            self.times[idx],
            self.status[idx],
            self.score1[idx],
            None if self.score2 is None else self.score2[idx],
        )

    def records(self) -> Iterator[SubjectRecord]:
        for i in range(self.n):
            yield SubjectRecord(
                float(self.times[i]),
                int(self.status[i]),
                float(self.score1[i]),
                None if self.score2 is None else float(self.score2[i]),
            )

    @classmethod
    def from_records(cls, records: Sequence[SubjectRecord]) -> "CohortSample":
        records = list(records)
        if not records:
            raise EmptyCohortError()
        paired = records[0].score2 is not None
        if any((r.score2 is not None) != paired for r in records):
            raise ValueError("records mix paired and unpaired subjects")
        return cls(
            [r.time for r in records],
            [r.status for r in records],
            [r.score1 for r in records],
            [r.score2 for r in records] if paired else None,
        )

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohortSample):
            return NotImplemented
        if self.paired != other.paired or self.n != other.n:
            return False
        same = (
            np.array_equal(self.times, other.times)
            and np.array_equal(self.status, other.status)
            and np.array_equal(self.score1, other.score1)
        )
        if same and self.paired:
            same = np.array_equal(self.score2, other.score2)
        return same

    def __repr__(self) -> str:
        kind = "paired" if self.paired else "single-score"
        return f"CohortSample(n={self.n}, {kind})"


def _parse_float(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise NonNumericCellError(line, column, text) from None
    if not math.isfinite(value):
        raise NonNumericCellError(line, column, text)
    return value


def _open_text(source):
    """Normalize path / text stream / binary stream into a text stream."""
    if isinstance(source, (str, Path)):
        return open(source, "r", newline="", encoding="utf-8"), True
    if isinstance(source, io.TextIOBase):
        return source, False
    if hasattr(source, "read"):
        return io.TextIOWrapper(source, encoding="utf-8", newline=""), False
    raise TypeError(f"cannot read cohort from {type(source).__name__}")


def read_cohort_csv(source, columns: ColumnMap | None = None) -> CohortSample:
    """Parse a CSV file (path or stream) into a CohortSample.

    The header row must name every mapped column.  Cell errors report the
    1-based file line (header is line 1).  Parsing is lossless: values
    round-trip through ``write_cohort_csv`` bit for bit.

    Raises
    ------
    MissingColumnError, NonNumericCellError, NonPositiveTimeError,
    InvalidStatusError, EmptyCohortError
    """
    columns = columns or ColumnMap()
    stream, owned = _open_text(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyCohortError("input has no header row") from None
        header = [h.strip() for h in header]
        positions: dict[str, int] = {}
        for name in (columns.time, columns.status, columns.score1):
            if name not in header:
                raise MissingColumnError(name)
            positions[name] = header.index(name)
        score2_name = columns.score2
        if score2_name is not None:
            if score2_name not in header:
                raise MissingColumnError(score2_name)
        elif "score2" in header:
            score2_name = "score2"
        if score2_name is not None:
            positions[score2_name] = header.index(score2_name)

        times: list[float] = []
        status: list[float] = []
        score1: list[float] = []
        score2: list[float] | None = [] if score2_name is not None else None
        rows: list[int] = []

        def cell(row: list[str], name: str, line: int) -> str:
            pos = positions[name]
            if pos >= len(row):
                raise NonNumericCellError(line, name, "<missing>")
            return row[pos].strip()

        for line, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            t = _parse_float(cell(row, columns.time, line), line, columns.time)
            if t <= 0:
                raise NonPositiveTimeError(line, t)
            s_text = cell(row, columns.status, line)
            try:
                s = float(s_text)
            except ValueError:
                raise InvalidStatusError(line, s_text) from None
            if s not in (0.0, 1.0):
                raise InvalidStatusError(line, s_text)
            z1 = _parse_float(cell(row, columns.score1, line), line, columns.score1)
            times.append(t)
            status.append(s)
            score1.append(z1)
            if score2 is not None:
                score2.append(
                    _parse_float(cell(row, score2_name, line), line, score2_name)
                )
            rows.append(line)

        if not times:
            raise EmptyCohortError()
        return CohortSample(times, status, score1, score2, _rows=rows)
    finally:
        if owned:
            stream.close()


def write_cohort_csv(cohort: CohortSample, destination) -> None:
    """Write a cohort back to CSV with full-precision floats."""
    stream, owned = (
        (open(destination, "w", newline="", encoding="utf-8"), True)
        if isinstance(destination, (str, Path))
        else (destination, False)
    )
    try:
        writer = csv.writer(stream)
        header = ["time", "status", "score1"] + (["score2"] if cohort.paired else [])
        writer.writerow(header)
        for i in range(cohort.n):
            row = [
                repr(float(cohort.times[i])),
                str(int(cohort.status[i])),
                repr(float(cohort.score1[i])),
            ]
            if cohort.paired:
                row.append(repr(float(cohort.score2[i])))
            writer.writerow(row)
    finally:
        if owned:
            stream.close()


def validate_horizon(cohort: CohortSample, t0: float) -> None:
    """Check that accuracy at horizon ``t0`` is estimable from this cohort.

    Requires at least one observed event strictly before ``t0`` and that
    ``t0`` does not exceed the largest observed follow-up time.
    """
    if not (isinstance(t0, (int, float)) and math.isfinite(t0) and t0 > 0):
        raise ValueError(f"t0 must be a positive finite number, got {t0!r}")
    max_time = float(cohort.times.max())
    if t0 > max_time:
        raise T0BeyondSupportError(t0, max_time)
    if not bool(((cohort.times < t0) & (cohort.status == 1.0)).any()):
        raise NoEventsBeforeT0Error(t0)
