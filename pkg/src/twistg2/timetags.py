"""Time-tag data model and file I/O.

A detection event is a (channel, integer picosecond timestamp) pair.  Streams
keep all three channels interleaved, sorted by time with ties broken by
channel code, which makes every downstream counting pass a single forward
sweep.

File formats:

* TTAG (binary, little-endian): magic ``b"TTAG"``, ``u16`` version ``1``,
  ``u64`` duration in ps (14-byte header), then 9-byte records
  ``{channel u8, time_ps i64}``.
* CSV: ``channel,time_ps`` with a header row, selected by a ``.csv`` suffix.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import FormatError

TTAG_MAGIC = b"TTAG"
TTAG_VERSION = 1
HEADER_SIZE = 14
RECORD_SIZE = 9

_HEADER_STRUCT = struct.Struct("<4sHQ")
_RECORD_DTYPE = np.dtype([("channel", "u1"), ("time_ps", "<i8")])
assert _RECORD_DTYPE.itemsize == RECORD_SIZE


class ChannelId(enum.IntEnum):
    """The three detector arms; numeric codes are part of the file format."""

    IDLER = 0
    SIGNAL1 = 1
    SIGNAL2 = 2


class TimeTag(NamedTuple):
    channel: ChannelId
    time_ps: int


@dataclass(frozen=True)
class TagStream:
    """Immutable multi-channel event stream.

    ``channels`` and ``times_ps`` are parallel arrays sorted by
    (time_ps, channel); every time lies in ``[0, duration_ps)``.
    """

    duration_ps: int
    channels: np.ndarray = field(default_factory=lambda: np.empty(0, np.uint8))
    times_ps: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))

    def __post_init__(self):
        object.__setattr__(self, "channels", np.asarray(self.channels, np.uint8))
        object.__setattr__(self, "times_ps", np.asarray(self.times_ps, np.int64))
        _validate_arrays(self.channels, self.times_ps, self.duration_ps)

    @classmethod
    def from_tags(cls, duration_ps: int, tags: Sequence[TimeTag]) -> "TagStream":
        channels = np.fromiter((t[0] for t in tags), np.uint8, len(tags))
        times = np.fromiter((t[1] for t in tags), np.int64, len(tags))
        return cls.from_unsorted(duration_ps, channels, times)

    @classmethod
    def from_unsorted(cls, duration_ps, channels, times_ps) -> "TagStream":
        """Canonicalize arbitrary ordering into the stream sort order."""
        channels = np.asarray(channels, np.uint8)
        times_ps = np.asarray(times_ps, np.int64)
        order = np.lexsort((channels, times_ps))
        return cls(duration_ps, channels[order], times_ps[order])

    def __len__(self) -> int:
        return len(self.times_ps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TagStream):
            return NotImplemented
        return (
            self.duration_ps == other.duration_ps
            and np.array_equal(self.channels, other.channels)
            and np.array_equal(self.times_ps, other.times_ps)
        )

    @property
    def tags(self) -> list[TimeTag]:
        return [
            TimeTag(ChannelId(int(c)), int(t))
            for c, t in zip(self.channels, self.times_ps)
        ]

    def channel_times(self, channel: ChannelId) -> np.ndarray:
        """Sorted times of one channel."""
        return self.times_ps[self.channels == int(channel)]


def _validate_arrays(channels, times, duration_ps, offset_base=None):
    """Raise FormatError on any invariant violation.

    ``offset_base`` switches error messages to byte offsets for file parsing.
    """
    if channels.shape != times.shape:
        raise FormatError("channel/time arrays differ in length")

    def _off(i):
        return -1 if offset_base is None else offset_base + i * RECORD_SIZE

    bad = np.flatnonzero(channels > max(ChannelId))
    if bad.size:
        i = int(bad[0])
        raise FormatError(f"unknown channel code {channels[i]}", _off(i))
    if duration_ps < 0:
        raise FormatError("negative duration")
    if times.size:
        if times[0] < 0:
            raise FormatError("negative timestamp", _off(0))
        high = np.flatnonzero(times >= duration_ps)
        if high.size:
            i = int(high[0])
            raise FormatError(
                f"timestamp {times[i]} outside duration {duration_ps}", _off(i)
            )
        dt = np.diff(times)
        bad = np.flatnonzero(dt < 0)
        if bad.size:
            i = int(bad[0]) + 1
            raise FormatError("tags not sorted by time", _off(i))
        ties = np.flatnonzero(dt == 0)
        if ties.size and np.any(np.diff(channels.astype(np.int16))[ties] < 0):
            i = int(ties[np.diff(channels.astype(np.int16))[ties] < 0][0]) + 1
            raise FormatError("tie-break order violated (channel codes)", _off(i))


def merge_streams(a: TagStream, b: TagStream) -> TagStream:
    """Merge two streams of equal duration into one sorted stream."""
    if a.duration_ps != b.duration_ps:
        raise ValueError(
            f"duration mismatch: {a.duration_ps} != {b.duration_ps}"
        )
    channels = np.concatenate([a.channels, b.channels])
    times = np.concatenate([a.times_ps, b.times_ps])
    return TagStream.from_unsorted(a.duration_ps, channels, times)


def write_tags(stream: TagStream, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        _write_csv(stream, path)
        return
    records = np.empty(len(stream), _RECORD_DTYPE)
    records["channel"] = stream.channels
    records["time_ps"] = stream.times_ps
    with open(path, "wb") as fh:
        fh.write(_HEADER_STRUCT.pack(TTAG_MAGIC, TTAG_VERSION, stream.duration_ps))
        fh.write(records.tobytes())


def read_tags(path) -> TagStream:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _read_csv(path)
    raw = path.read_bytes()
    if len(raw) < HEADER_SIZE:
        raise FormatError("file shorter than 14-byte header", 0)
    magic, version, duration_ps = _HEADER_STRUCT.unpack_from(raw, 0)
    if magic != TTAG_MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != TTAG_VERSION:
        raise FormatError(f"unsupported format version {version}", 4)
    body = len(raw) - HEADER_SIZE
    if body % RECORD_SIZE:
        raise FormatError("truncated record", HEADER_SIZE + body - body % RECORD_SIZE)
    records = np.frombuffer(raw, _RECORD_DTYPE, offset=HEADER_SIZE)
    channels = records["channel"].copy()
    times = records["time_ps"].copy()
    _validate_arrays(channels, times, duration_ps, offset_base=HEADER_SIZE)
    return TagStream(duration_ps, channels, times)


def _write_csv(stream: TagStream, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("channel,time_ps\n")
        for c, t in zip(stream.channels, stream.times_ps):
            fh.write(f"{c},{t}\n")


def _read_csv(path: Path) -> TagStream:
    with open(path) as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "channel,time_ps":
            raise FormatError(f"bad CSV header {header!r}", 0)
        channels, times = [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                c_s, t_s = line.split(",")
                channels.append(int(c_s))
                times.append(int(t_s))
            except ValueError:
                raise FormatError(f"bad CSV record on line {lineno}") from None
    channels = np.asarray(channels, np.uint8)
    times = np.asarray(times, np.int64)
    # duration is not stored in CSV; use max+1 as the tightest valid value
    duration = int(times.max()) + 1 if times.size else 0
    _validate_arrays(channels, times, duration)
    return TagStream(duration, channels, times)
