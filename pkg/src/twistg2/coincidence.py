"""Two-fold and heralded three-fold coincidence counting.

Matching is greedy one-to-one in time order, mirroring hardware logic that
consumes events; on sorted streams this is a single linear sweep and (for
two-fold) attains the maximum one-to-one matching.  ``window_ps`` is the
full width of the coincidence window: tags at ``t_a`` and ``t_b`` coincide
when ``2*|t_a - t_b| <= window_ps``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._kernels import count_threefold_kernel, count_twofold_kernel, is_sorted
from .errors import ConfigError
from .timetags import ChannelId, TagStream


@dataclass(frozen=True)
class CoincidenceSpec:
    window_ps: int = 410
    delay_s1_ps: int = 0
    delay_s2_ps: int = 0

    def __post_init__(self):
        if self.window_ps <= 0:
            raise ConfigError("window_ps must be > 0")


@dataclass(frozen=True)
class CountSummary:
    """The six raw counts entering both g2 estimators."""

    duration_ps: int
    n_i: int
    n_s1: int
    n_s2: int
    n_is1: int
    n_is2: int
    n_is1s2: int

    def __post_init__(self):
        ok = (
            self.n_is1 <= min(self.n_i, self.n_s1)
            and self.n_is2 <= min(self.n_i, self.n_s2)
            and self.n_is1s2 <= min(self.n_is1, self.n_is2)
        )
        if not ok:
            raise ValueError(f"inconsistent coincidence counts: {self}")

    def rate_hz(self, count: int) -> float:
        return count * 1e12 / self.duration_ps


def _check_sorted(name, a):
    a = np.ascontiguousarray(a, np.int64)
    if not is_sorted(a):
        raise ValueError(f"{name} stream is not sorted")
    return a


def count_twofold(a, b, window_ps: int) -> int:
    """Greedy one-to-one coincidences between two sorted time arrays."""
    a = _check_sorted("a", a)
    b = _check_sorted("b", b)
    return int(count_twofold_kernel(a, b, window_ps))


def count_threefold(idler, s1, s2, window_ps: int) -> int:
    """Triples where both signal arms fall inside the window of one idler tag."""
    idler = _check_sorted("idler", idler)
    s1 = _check_sorted("s1", s1)
    s2 = _check_sorted("s2", s2)
    return int(count_threefold_kernel(idler, s1, s2, window_ps))


def _shift(times: np.ndarray, delay_ps: int, duration_ps: int) -> np.ndarray:
    """Shift a sorted channel; events pushed outside [0, duration) are dropped."""
    if delay_ps == 0:
        return times
    shifted = times + delay_ps
    return shifted[(shifted >= 0) & (shifted < duration_ps)]


def apply_delays(stream: TagStream, spec: CoincidenceSpec) -> TagStream:
    """Apply the per-arm electronic delays to the signal channels."""
    if spec.delay_s1_ps == 0 and spec.delay_s2_ps == 0:
        return stream
    d = stream.duration_ps
    i = stream.channel_times(ChannelId.IDLER)
    s1 = _shift(stream.channel_times(ChannelId.SIGNAL1), spec.delay_s1_ps, d)
    s2 = _shift(stream.channel_times(ChannelId.SIGNAL2), spec.delay_s2_ps, d)
    channels = np.concatenate(
        [
            np.zeros(i.size, np.uint8),
            np.ones(s1.size, np.uint8),
            np.full(s2.size, 2, np.uint8),
        ]
    )
    return TagStream.from_unsorted(d, channels, np.concatenate([i, s1, s2]))


def summarize(stream: TagStream, spec: CoincidenceSpec) -> CountSummary:
    """All singles, two-fold and three-fold counts after applying delays."""
    d = stream.duration_ps
    i = stream.channel_times(ChannelId.IDLER)
    s1 = _shift(stream.channel_times(ChannelId.SIGNAL1), spec.delay_s1_ps, d)
    s2 = _shift(stream.channel_times(ChannelId.SIGNAL2), spec.delay_s2_ps, d)
    return CountSummary(
        duration_ps=d,
        n_i=int(i.size),
        n_s1=int(s1.size),
        n_s2=int(s2.size),
        n_is1=count_twofold(i, s1, spec.window_ps),
        n_is2=count_twofold(i, s2, spec.window_ps),
        n_is1s2=count_threefold(i, s1, s2, spec.window_ps),
    )
