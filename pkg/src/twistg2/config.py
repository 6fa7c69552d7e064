"""Experiment configuration: dataclasses plus a TOML loader.

See ``docs/config.md`` (repo root) for the documented file schema.  Every
field has a default, so an empty file is a valid 7 mW working-point
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

try:
    import tomllib as tomli  # Python >= 3.11
except ModuleNotFoundError:
    import tomli

from .coincidence import CoincidenceSpec
from .detector import DetectorParams
from .errors import ConfigError
from .source import CouplingModel, SourceParams
from .timetags import ChannelId

SWEEP_KINDS = ("none", "power", "oam", "delay")

_CHANNEL_KEYS = {
    "idler": ChannelId.IDLER,
    "signal1": ChannelId.SIGNAL1,
    "signal2": ChannelId.SIGNAL2,
}


@dataclass(frozen=True)
class SweepSpec:
    kind: str = "none"
    values: tuple = ()
    step_ps: int = 500
    n_steps_each_side: int = 10

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ConfigError(f"unknown sweep kind {self.kind!r}")
        if self.kind in ("power", "oam"):
            if not self.values:
                raise ConfigError("sweep values must be non-empty")
            if any(b <= a for a, b in zip(self.values, self.values[1:])):
                raise ConfigError("sweep values must be strictly increasing")
        if self.step_ps <= 0 or self.n_steps_each_side < 0:
            raise ConfigError("invalid delay-scan geometry")


def default_coupling() -> CouplingModel:
    # Experiments run with the multimode background on: a multimode signal
    # fiber keeps collecting the non-heralded modes at every pump order.
    return CouplingModel(multimode_background=True)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 1
    source: SourceParams = field(default_factory=SourceParams)
    coupling: CouplingModel = field(default_factory=default_coupling)
    detectors: dict = field(
        default_factory=lambda: {ch: DetectorParams() for ch in ChannelId}
    )
    spec: CoincidenceSpec = field(default_factory=CoincidenceSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)


def _build(cls, table, what):
    try:
        return cls(**table)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [{what}] section: {exc}") from exc


def _source_from_table(table, seed) -> SourceParams:
    table = dict(table)
    if "duration_s" in table:
        if "duration_ps" in table:
            raise ConfigError("give duration_s or duration_ps, not both")
        table["duration_ps"] = int(round(table.pop("duration_s") * 1e12))
    table.setdefault("seed", seed)
    return _build(SourceParams, table, "source")


def _detectors_from_table(table) -> dict:
    table = dict(table)
    overrides = {
        key: table.pop(key) for key in list(table) if key in _CHANNEL_KEYS
    }
    base = _build(DetectorParams, table, "detectors")
    detectors = {ch: base for ch in ChannelId}
    for key, sub in overrides.items():
        merged = {**table, **sub}
        detectors[_CHANNEL_KEYS[key]] = _build(DetectorParams, merged, f"detectors.{key}")
    return detectors


def load_config(path, seed_override=None) -> ExperimentConfig:
    """Load a TOML config file; missing sections fall back to defaults."""
    try:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return config_from_dict(raw, seed_override=seed_override)


def config_from_dict(raw: dict, seed_override=None) -> ExperimentConfig:
    known = {"seed", "source", "coupling", "detectors", "coincidence", "sweep"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    seed = int(raw.get("seed", 1)) if seed_override is None else int(seed_override)

    coupling_table = dict(raw.get("coupling", {}))
    coupling_table.setdefault("multimode_background", True)

    sweep_table = dict(raw.get("sweep", {}))
    if "values" in sweep_table:
        sweep_table["values"] = tuple(sweep_table["values"])

    return ExperimentConfig(
        seed=seed,
        source=_source_from_table(raw.get("source", {}), seed),
        coupling=_build(CouplingModel, coupling_table, "coupling"),
        detectors=_detectors_from_table(raw.get("detectors", {})),
        spec=_build(CoincidenceSpec, raw.get("coincidence", {}), "coincidence"),
        sweep=_build(SweepSpec, sweep_table, "sweep"),
    )


def with_power(config: ExperimentConfig, power_mw: float) -> ExperimentConfig:
    return replace(config, source=replace(config.source, pump_power_mw=power_mw))


def with_oam(config: ExperimentConfig, l: int) -> ExperimentConfig:
    return replace(config, source=replace(config.source, pump_oam_l=int(l)))
