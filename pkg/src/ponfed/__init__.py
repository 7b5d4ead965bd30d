"""Deterministic simulator of federated learning rounds over a PON slice.

Compares classical per-client model upload against split aggregation, where
each ONU combines its clients' models and sends a single model upstream.
"""

from .aggregation import cps_aggregate_one_step, cps_aggregate_two_step, onu_aggregate
from .core import (
    ClientUpdate,
    GlobalModel,
    ModelParams,
    OnuAggregate,
    TimingSample,
    Topology,
)
from .errors import PonFedError
from .orchestrator import (
    ExperimentConfig,
    ModeComparison,
    RoundRecord,
    compare_modes,
    init_state,
    run_experiment,
    run_round,
    select_clients,
)
from .ponsim import (
    NetworkConfig,
    UploadOutcome,
    round_bandwidth_saving,
    simulate_upstream_classical,
    simulate_upstream_sfl,
)
from .training import (
    HyperParams,
    LocalDataset,
    PartitionConfig,
    evaluate,
    local_train,
    synth_partition,
)

__version__ = "0.1.0"

__all__ = [
    "ClientUpdate",
    "ExperimentConfig",
    "GlobalModel",
    "HyperParams",
    "LocalDataset",
    "ModeComparison",
    "ModelParams",
    "NetworkConfig",
    "OnuAggregate",
    "PartitionConfig",
    "PonFedError",
    "RoundRecord",
    "TimingSample",
    "Topology",
    "UploadOutcome",
    "compare_modes",
    "cps_aggregate_one_step",
    "cps_aggregate_two_step",
    "evaluate",
    "init_state",
    "local_train",
    "onu_aggregate",
    "round_bandwidth_saving",
    "run_experiment",
    "run_round",
    "select_clients",
    "simulate_upstream_classical",
    "simulate_upstream_sfl",
    "synth_partition",
    "__version__",
]
