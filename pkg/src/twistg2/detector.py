"""Single-photon detector realism: efficiency, dark counts, jitter, dead time.

The pipeline order is fixed and load-bearing: (1) Bernoulli thinning by
quantum efficiency, (2) dark counts as an independent Poisson process,
(3) Gaussian timing jitter rounded to integer picoseconds, (4) time sort,
(5) non-paralyzable dead time.  Reordering these stages changes the output
statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import dead_time_filter
from .errors import ConfigError
from .source import PS_PER_SECOND
from .timetags import ChannelId, TagStream


@dataclass(frozen=True)
class DetectorParams:
    # Defaults follow actively quenched silicon avalanche modules; the 150 ps
    # sigma corresponds to the ~350 ps FWHM these modules are specified at.
    efficiency: float = 0.6
    dark_rate_hz: float = 25.0
    jitter_sigma_ps: float = 150.0
    dead_time_ps: int = 22_000

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ConfigError("efficiency must lie in [0, 1]")
        if self.dark_rate_hz < 0:
            raise ConfigError("dark_rate_hz must be >= 0")
        if self.jitter_sigma_ps < 0:
            raise ConfigError("jitter_sigma_ps must be >= 0")
        if self.dead_time_ps < 0:
            raise ConfigError("dead_time_ps must be >= 0")


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0, np.floor(x + 0.5), np.ceil(x - 0.5)).astype(np.int64)


def detect(
    arrivals: np.ndarray,
    params: DetectorParams,
    duration_ps: int,
    channel: ChannelId,
    seed,
) -> TagStream:
    """Turn ideal arrival times into the tag stream of one detector channel."""
    arrivals = np.asarray(arrivals, np.int64)
    rng = np.random.default_rng(seed)

    times = arrivals[rng.random(arrivals.size) < params.efficiency]

    n_dark = rng.poisson(params.dark_rate_hz * duration_ps / PS_PER_SECOND)
    if n_dark:
        dark = rng.integers(0, duration_ps, int(n_dark), dtype=np.int64)
        times = np.concatenate([times, dark])

    if params.jitter_sigma_ps > 0 and times.size:
        times = times + _round_half_away(
            rng.normal(0.0, params.jitter_sigma_ps, times.size)
        )
        np.clip(times, 0, duration_ps - 1, out=times)

    times = np.sort(times)
    if params.dead_time_ps > 0 and times.size:
        times = times[dead_time_filter(times, params.dead_time_ps)]

    channels = np.full(times.size, int(channel), np.uint8)
    return TagStream(duration_ps, channels, times)
