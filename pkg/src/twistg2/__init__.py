"""Heralded twisted-photon source simulation and g2(0) analysis toolkit."""

from .coincidence import (
    CoincidenceSpec,
    CountSummary,
    apply_delays,
    count_threefold,
    count_twofold,
    summarize,
)
from .config import ExperimentConfig, SweepSpec, load_config
from .detector import DetectorParams, detect
from .errors import (
    CapacityError,
    ConfigError,
    FormatError,
    InsufficientDataError,
    TwistG2Error,
)
from .estimators import (
    ACCIDENTAL,
    DIRECT,
    G2Curve,
    G2Estimate,
    g2_accidental,
    g2_delay_scan,
    g2_direct,
)
from .source import (
    CouplingModel,
    PairEvents,
    RoutedArrivals,
    SourceParams,
    coupling_efficiency,
    generate_pair_train,
    generate_pairs,
    route_pairs,
)
from .timetags import (
    ChannelId,
    TagStream,
    TimeTag,
    merge_streams,
    read_tags,
    write_tags,
)

__version__ = "0.1.0"
