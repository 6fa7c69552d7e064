"""End-to-end wiring: source -> routing -> detectors -> counting -> estimates.

Every run is fully determined by the experiment config: sub-seeds for the
generator, the router and the three detectors are spawned from the master
seed (and the sweep index for sweep points), so sweep rows are independent
of evaluation order.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .coincidence import CoincidenceSpec, CountSummary, summarize
from .config import ExperimentConfig, with_oam, with_power
from .errors import InsufficientDataError
from .estimators import g2_accidental, g2_direct
from .detector import detect
from .source import generate_pairs, route_pairs
from .timetags import ChannelId, TagStream, read_tags, write_tags


def _sub_seeds(master_seed: int, sweep_index=None):
    entropy = [int(master_seed)]
    if sweep_index is not None:
        entropy.append(int(sweep_index))
    ss = np.random.SeedSequence(entropy)
    pairs, route, det_i, det_s1, det_s2 = ss.spawn(5)
    return pairs, route, {
        ChannelId.IDLER: det_i,
        ChannelId.SIGNAL1: det_s1,
        ChannelId.SIGNAL2: det_s2,
    }


def simulate_stream(config: ExperimentConfig, sweep_index=None) -> TagStream:
    """Run the full simulated experiment and return one merged tag stream."""
    seed_pairs, seed_route, det_seeds = _sub_seeds(config.seed, sweep_index)
    pairs = generate_pairs(config.source, seed=seed_pairs)
    routed = route_pairs(pairs, config.coupling, seed_route)
    arrivals = {
        ChannelId.IDLER: routed.idler,
        ChannelId.SIGNAL1: routed.signal1,
        ChannelId.SIGNAL2: routed.signal2,
    }
    fragments = [
        detect(
            arrivals[ch],
            config.detectors[ch],
            config.source.duration_ps,
            ch,
            det_seeds[ch],
        )
        for ch in ChannelId
    ]
    return TagStream.from_unsorted(
        config.source.duration_ps,
        np.concatenate([f.channels for f in fragments]),
        np.concatenate([f.times_ps for f in fragments]),
    )


def analyze_stream(stream: TagStream, spec: CoincidenceSpec) -> dict:
    """One result row: the six counts plus both estimates."""
    counts = summarize(stream, spec)
    direct = g2_direct(counts)
    accidental = g2_accidental(counts, spec.window_ps)
    return _row(counts, direct, accidental)


def _row(counts: CountSummary, direct, accidental) -> dict:
    return {
        "duration_ps": counts.duration_ps,
        "n_i": counts.n_i,
        "n_s1": counts.n_s1,
        "n_s2": counts.n_s2,
        "n_is1": counts.n_is1,
        "n_is2": counts.n_is2,
        "n_is1s2": counts.n_is1s2,
        "g2_direct": direct.value,
        "g2_direct_err": direct.std_err,
        "g2_direct_insufficient": direct.insufficient_triples,
        "g2_accidental": accidental.value,
        "g2_accidental_err": accidental.std_err,
    }


def run_simulate(config: ExperimentConfig, out_path) -> TagStream:
    stream = simulate_stream(config)
    write_tags(stream, out_path)
    return stream


def run_analyze(input_path, spec: CoincidenceSpec) -> dict:
    return analyze_stream(read_tags(input_path), spec)


def run_sweep(config: ExperimentConfig, kind: str, values) -> tuple[list, bool]:
    """One simulated run per sweep value.

    Returns (rows, aborted).  A point whose estimate is undefined stops the
    sweep; the rows gathered so far are kept and the bad point is flagged.
    """
    vary = with_power if kind == "power" else with_oam
    param = "pump_power_mw" if kind == "power" else "pump_oam_l"
    rows = []
    for index, value in enumerate(values):
        point = vary(config, value)
        stream = simulate_stream(point, sweep_index=index)
        try:
            row = analyze_stream(stream, point.spec)
        except InsufficientDataError as exc:
            rows.append({"param_name": param, "param_value": value, "error": str(exc)})
            return rows, True
        rows.append({"param_name": param, "param_value": value, **row})
    return rows, False


def run_delay_scan(
    config: ExperimentConfig, stream: TagStream = None
) -> tuple[list, bool]:
    """Direct g2 versus extra delay on the second signal arm.

    ``stream`` may be provided (e.g. read from a file) to scan recorded data
    instead of simulating.
    """
    if stream is None:
        stream = simulate_stream(config)
    step = config.sweep.step_ps
    rows = []
    for k in range(-config.sweep.n_steps_each_side, config.sweep.n_steps_each_side + 1):
        tau = k * step
        spec = replace(config.spec, delay_s2_ps=config.spec.delay_s2_ps + tau)
        counts = summarize(stream, spec)
        try:
            direct = g2_direct(counts)
            accidental = g2_accidental(counts, spec.window_ps)
        except InsufficientDataError as exc:
            rows.append({"param_name": "tau_ps", "param_value": tau, "error": str(exc)})
            return rows, True
        rows.append({"param_name": "tau_ps", "param_value": tau,
                     **_row(counts, direct, accidental)})
    return rows, False
