"""Event-driven checkpoint sensor logs: parsing, densification, serialization.

A log row is written only when an input sensor bit changes; between rows every
signal holds its last value (zero-order hold). ``densify`` realizes the dense
per-frame view, ``sparsify`` is its minimal inverse on the input channels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

HEADER = "frame,shield,loop,cor,basic,ref"

#: dense channel names, in CSV column order
CHANNELS = ("shield", "loop", "cor", "basic_clf", "ref_pass")

#: channels the event-driven invariant is checked on
INPUT_CHANNELS = ("shield", "loop", "cor")


class LogFormatError(ValueError):
    """Malformed log text (bad header, row shape, or non-bit value)."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class LogOrderError(LogFormatError):
    """frame_no not strictly increasing."""


class EmptyLogError(ValueError):
    """Operation requires at least one record."""


def _check_bit(value: int, name: str) -> int:
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")
    return value


@dataclass(frozen=True)
class EventRecord:
    """One log row: frame index plus the five binary signals."""

    frame_no: int
    shield: int
    loop: int
    cor: int
    basic_clf: int
    ref_pass: int

    def __post_init__(self):
        if not isinstance(self.frame_no, (int, np.integer)) or self.frame_no < 0:
            raise ValueError(f"frame_no must be a non-negative integer, got {self.frame_no!r}")
        for name in CHANNELS:
            _check_bit(getattr(self, name), name)

    def inputs(self) -> tuple[int, int, int]:
        return (self.shield, self.loop, self.cor)


@dataclass(frozen=True)
class EventLog:
    """Ordered event records from one log file.

    ``invariant_warnings`` lists indices of records that do not change any of
    the input channels relative to their predecessor.  Such rows are accepted
    on parse (real logs may re-record on label changes) but flagged.
    """

    records: tuple[EventRecord, ...]
    source_id: str = ""
    invariant_warnings: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        frames = [r.frame_no for r in self.records]
        for a, b in zip(frames, frames[1:]):
            if b <= a:
                raise LogOrderError(f"frame_no not strictly increasing: {a} then {b}")

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class FrameSeries:
    """Dense per-frame multichannel binary signal starting at ``first_frame``."""

    first_frame: int
    channels: Mapping[str, np.ndarray]

    def __post_init__(self):
        if not self.channels:
            raise ValueError("FrameSeries needs at least one channel")
        lengths = set()
        frozen = {}
        for name, vec in self.channels.items():
            arr = np.asarray(vec, dtype=np.uint8)
            if arr.ndim != 1 or arr.size < 1:
                raise ValueError(f"channel {name!r} must be a non-empty 1-d vector")
            if not np.all((arr == 0) | (arr == 1)):
                raise ValueError(f"channel {name!r} contains non-bit values")
            arr.setflags(write=False)
            frozen[name] = arr
            lengths.add(arr.size)
        if len(lengths) != 1:
            raise ValueError(f"channel lengths differ: {sorted(lengths)}")
        object.__setattr__(self, "channels", frozen)

    def __len__(self) -> int:
        return next(iter(self.channels.values())).size

    @property
    def last_frame(self) -> int:
        return self.first_frame + len(self) - 1

    def channel(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            raise KeyError(f"unknown channel {name!r}; have {sorted(self.channels)}") from None

    def with_channel(self, name: str, values: np.ndarray) -> "FrameSeries":
        chans = dict(self.channels)
        if name not in chans:
            raise KeyError(f"unknown channel {name!r}; have {sorted(chans)}")
        chans[name] = np.asarray(values, dtype=np.uint8)
        return FrameSeries(self.first_frame, chans)


def _invariant_warnings(records: Iterable[EventRecord]) -> tuple[int, ...]:
    warnings = []
    prev = None
    for i, rec in enumerate(records):
        if prev is not None and rec.inputs() == prev.inputs():
            warnings.append(i)
        prev = rec
    return tuple(warnings)


def parse_log(text: str | Iterable[str], source_id: str = "") -> EventLog:
    """Parse CSV log text (header ``frame,shield,loop,cor,basic,ref``)."""
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = [ln.rstrip("\r\n") for ln in text]
    if not lines:
        raise LogFormatError("empty input, expected header", line_no=1)
    if lines[0].strip() != HEADER:
        raise LogFormatError(f"bad header {lines[0]!r}, expected {HEADER!r}", line_no=1)

    records = []
    last_frame = -1
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise LogFormatError(f"expected 6 columns, got {len(parts)}", line_no=line_no)
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise LogFormatError(f"non-integer field in {line!r}", line_no=line_no) from None
        frame = values[0]
        if frame < 0:
            raise LogFormatError(f"negative frame number {frame}", line_no=line_no)
        for name, v in zip(CHANNELS, values[1:]):
            if v not in (0, 1):
                raise LogFormatError(f"{name} must be 0 or 1, got {v}", line_no=line_no)
        if frame <= last_frame:
            raise LogOrderError(
                f"frame {frame} not greater than previous {last_frame}", line_no=line_no
            )
        last_frame = frame
        records.append(EventRecord(frame, *values[1:]))

    return EventLog(tuple(records), source_id=source_id,
                    invariant_warnings=_invariant_warnings(records))


def write_log(log: EventLog) -> str:
    """Serialize to the CSV format accepted by :func:`parse_log` (LF endings)."""
    lines = [HEADER]
    for r in log.records:
        lines.append(f"{r.frame_no},{r.shield},{r.loop},{r.cor},{r.basic_clf},{r.ref_pass}")
    return "\n".join(lines) + "\n"


def densify(log: EventLog) -> FrameSeries:
    """Dense per-frame view from first to last recorded frame, zero-order hold."""
    if not log.records:
        raise EmptyLogError(f"cannot densify empty log {log.source_id!r}")
    first = log.records[0].frame_no
    n = log.records[-1].frame_no - first + 1
    out = {name: np.zeros(n, dtype=np.uint8) for name in CHANNELS}
    frames = np.array([r.frame_no for r in log.records]) - first
    for name in CHANNELS:
        vals = np.array([getattr(r, name) for r in log.records], dtype=np.uint8)
        # hold each value until the next record
        bounds = np.append(frames, n)
        for (a, b), v in zip(zip(bounds[:-1], bounds[1:]), vals):
            out[name][a:b] = v
    return FrameSeries(first, out)


def sparsify(series: FrameSeries, source_id: str = "") -> EventLog:
    """Minimal event log whose densify matches ``series`` on the input channels.

    A record is emitted at the first frame and wherever any of shield/loop/cor
    changes; channels absent from the series are written as 0.
    """
    n = len(series)
    if n == 0:
        raise EmptyLogError("cannot sparsify empty series")

    def chan(name):
        return series.channels.get(name, np.zeros(n, dtype=np.uint8))

    inputs = np.stack([chan(c) for c in INPUT_CHANNELS])
    change = np.zeros(n, dtype=bool)
    change[0] = True
    change[1:] = np.any(inputs[:, 1:] != inputs[:, :-1], axis=0)
    idx = np.flatnonzero(change)
    records = tuple(
        EventRecord(
            int(series.first_frame + i),
            *(int(chan(c)[i]) for c in CHANNELS),
        )
        for i in idx
    )
    return EventLog(records, source_id=source_id,
                    invariant_warnings=_invariant_warnings(records))
