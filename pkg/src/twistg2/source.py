"""Correlated pair generation for a CW-pumped down-conversion source.

Emission is a homogeneous Poisson process whose rate scales linearly with
pump power.  Projecting the idler onto the fundamental fiber mode
post-selects signal photons whose orbital angular momentum equals the pump
order, so every surviving pair carries a single ``oam_l`` value.  Fiber
coupling of the signal falls off with mode order as ``eta0 / (l+1)**p``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConfigError

PS_PER_SECOND = 1_000_000_000_000

# Hard cap on the expected number of generated pairs per run.
MAX_EXPECTED_EVENTS = 1_000_000_000


@dataclass(frozen=True)
class SourceParams:
    pump_power_mw: float = 7.0
    pair_rate_per_mw_hz: float = 1e4
    pump_oam_l: int = 0
    duration_ps: int = PS_PER_SECOND
    seed: int = 1

    def __post_init__(self):
        if self.pump_power_mw < 0 or not np.isfinite(self.pump_power_mw):
            raise ConfigError("pump_power_mw must be finite and >= 0")
        if self.pair_rate_per_mw_hz < 0 or not np.isfinite(self.pair_rate_per_mw_hz):
            raise ConfigError("pair_rate_per_mw_hz must be finite and >= 0")
        if self.pump_oam_l < 0:
            raise ConfigError("pump_oam_l must be >= 0")
        if self.duration_ps < 0:
            raise ConfigError("duration_ps must be >= 0")

    @property
    def pair_rate_hz(self) -> float:
        return self.pump_power_mw * self.pair_rate_per_mw_hz


@dataclass(frozen=True)
class CouplingModel:
    """Fiber-coupling efficiencies of the two arms.

    ``eta_signal_base / (l+1)**order_falloff`` gives the signal-arm coupling
    of the heralded mode.  With ``multimode_background`` enabled, the light
    that the heralded mode loses at higher orders reappears on the signal
    side as uncorrelated events: a multimode fiber keeps collecting roughly
    the same total down-converted flux regardless of which single mode is
    being heralded, so signal singles stay flat while heralded coincidences
    drop.  Leave it off to model coupling as pure loss.
    """

    eta_idler_smf: float = 0.3
    eta_signal_base: float = 0.8
    order_falloff: float = 1.0
    multimode_background: bool = False

    def __post_init__(self):
        if not 0.0 <= self.eta_idler_smf <= 1.0:
            raise ConfigError("eta_idler_smf must lie in [0, 1]")
        if not 0.0 <= self.eta_signal_base <= 1.0:
            raise ConfigError("eta_signal_base must lie in [0, 1]")
        if self.order_falloff < 0:
            raise ConfigError("order_falloff must be >= 0")


@dataclass(frozen=True)
class PairEvents:
    """Emission times of surviving pairs; the signal of each carries ``oam_l``."""

    duration_ps: int
    times_ps: np.ndarray
    oam_l: int = 0

    def __len__(self):
        return len(self.times_ps)


@dataclass(frozen=True)
class RoutedArrivals:
    """Ideal (pre-detector) arrival times per arm."""

    duration_ps: int
    idler: np.ndarray
    signal1: np.ndarray
    signal2: np.ndarray


def coupling_efficiency(model: CouplingModel, l: int) -> float:
    """Signal-arm coupling of the heralded mode at OAM order ``l``."""
    if l < 0:
        raise ValueError("OAM order must be >= 0")
    return model.eta_signal_base / (l + 1) ** model.order_falloff


def generate_pairs(params: SourceParams, seed=None) -> PairEvents:
    """Homogeneous Poisson pair emission over ``[0, duration_ps)``.

    Deterministic for a fixed seed (``params.seed`` unless overridden).
    """
    rate_hz = params.pair_rate_hz
    duration_s = params.duration_ps / PS_PER_SECOND
    expected = rate_hz * duration_s
    if expected > MAX_EXPECTED_EVENTS:
        raise CapacityError(
            f"expected {expected:.3g} pairs exceeds the {MAX_EXPECTED_EVENTS:.0e} cap"
        )
    if rate_hz == 0.0 or params.duration_ps == 0:
        return PairEvents(params.duration_ps, np.empty(0, np.int64), params.pump_oam_l)

    rng = np.random.default_rng(params.seed if seed is None else seed)
    mean_gap_ps = PS_PER_SECOND / rate_hz
    chunk = max(1024, int(expected + 6.0 * np.sqrt(expected) + 16))
    pieces = []
    t_last = 0.0
    while t_last < params.duration_ps:
        gaps = rng.exponential(mean_gap_ps, chunk)
        np.cumsum(gaps, out=gaps)
        gaps += t_last
        t_last = float(gaps[-1])
        pieces.append(gaps)
        chunk = max(1024, chunk // 4)
    times = np.concatenate(pieces) if len(pieces) > 1 else pieces[0]
    times = times[times < params.duration_ps].astype(np.int64)
    return PairEvents(params.duration_ps, times, params.pump_oam_l)


def generate_pair_train(
    spacing_ps: int, count: int, oam_l: int = 0, duration_ps=None
) -> PairEvents:
    """Deterministic equally spaced pairs, for exact zero-accidental tests."""
    if spacing_ps <= 0:
        raise ValueError("spacing_ps must be > 0")
    if count < 0:
        raise ValueError("count must be >= 0")
    if duration_ps is None:
        duration_ps = spacing_ps * count if count else 0
    times = np.arange(count, dtype=np.int64) * spacing_ps
    if times.size and times[-1] >= duration_ps:
        raise ValueError("duration_ps too short for the requested train")
    return PairEvents(duration_ps, times, oam_l)


def route_pairs(pairs: PairEvents, model: CouplingModel, seed: int) -> RoutedArrivals:
    """Thin by coupling and split the signal 50:50.

    The idler survives with probability ``eta_idler_smf``; the signal with
    ``coupling_efficiency(model, pairs.oam_l)`` and is then routed to one of
    the two output ports with equal probability.  Thinning draws are indexed
    per pair, so for a fixed seed the survivor set at order ``l+1`` is a
    subset of the survivor set at order ``l``.
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng_i, rng_s, rng_r, rng_bg = (np.random.default_rng(c) for c in ss.spawn(4))
    n = len(pairs)
    eta_s = coupling_efficiency(model, pairs.oam_l)

    idler = pairs.times_ps[rng_i.random(n) < model.eta_idler_smf]

    sig_mask = rng_s.random(n) < eta_s
    to_s2 = rng_r.random(n) < 0.5  # drawn for all pairs: routing stable across l
    sig_times = pairs.times_ps[sig_mask]
    sig_to_s2 = to_s2[sig_mask]
    s1 = sig_times[~sig_to_s2]
    s2 = sig_times[sig_to_s2]

    if model.multimode_background and n:
        # Uncollected heralded-mode flux re-enters as uncorrelated multimode
        # light, keeping total signal-side collection at eta_signal_base.
        mean_bg = n * (model.eta_signal_base - eta_s)
        k = int(rng_bg.poisson(mean_bg)) if mean_bg > 0 else 0
        if k:
            bg_times = rng_bg.integers(0, pairs.duration_ps, k, dtype=np.int64)
            bg_to_s2 = rng_bg.random(k) < 0.5
            s1 = np.sort(np.concatenate([s1, bg_times[~bg_to_s2]]))
            s2 = np.sort(np.concatenate([s2, bg_times[bg_to_s2]]))

    return RoutedArrivals(pairs.duration_ps, idler, s1, s2)
