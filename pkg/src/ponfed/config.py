"""Loading, validating and echoing experiment configuration files.

The on-disk format is a JSON object checked against the packaged schema;
every field is optional, so an empty object runs the default setup. The two
unbounded-time fields accept the string "inf" as a portable spelling of
infinity.
"""
from __future__ import annotations

import functools
import json
import math
from importlib import resources

import jsonschema

from .core import Topology
from .errors import InvalidConfig
from .orchestrator import ExperimentConfig
from .ponsim import NetworkConfig
from .training import HyperParams, PartitionConfig


@functools.cache
def schema() -> dict:
    """The published config schema, as shipped with the package."""
    text = resources.files("ponfed").joinpath("config.schema.json").read_text("utf-8")
    return json.loads(text)


def _maybe_inf(value):
    return math.inf if value == "inf" else value


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a validated ExperimentConfig from plain nested dicts."""
    try:
        jsonschema.validate(raw, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidConfig(f"config field {where}: {exc.message}") from exc

    topology = Topology(**raw.get("topology", {}))

    net_raw = dict(raw.get("network", {}))
    for key in ("sync_threshold_s", "local_cutoff_s"):
        if key in net_raw:
            net_raw[key] = _maybe_inf(net_raw[key])
    for key in ("t_train_range_s", "t_wireless_range_s"):
        if key in net_raw:
            net_raw[key] = tuple(net_raw[key])
    network = NetworkConfig(**net_raw)

    part_raw = dict(raw.get("partition", {}))
    part_raw.setdefault("n_clients", topology.n_clients)
    partition = PartitionConfig(**part_raw)

    hyper = HyperParams(**raw.get("hyper", {}))

    scalars = {
        key: raw[key]
        for key in ("mode", "n_selected_per_round", "n_rounds", "seed")
        if key in raw
    }
    return ExperimentConfig(
        topology=topology,
        network=network,
        partition=partition,
        hyper=hyper,
        **scalars,
    )


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Echo a config as plain JSON-safe dicts; inverse of config_from_dict."""

    def clean(value):
        return "inf" if value == math.inf else value

    return {
        "topology": {
            "n_onus": cfg.topology.n_onus,
            "clients_per_onu": cfg.topology.clients_per_onu,
            "distance_km": cfg.topology.distance_km,
        },
        "network": {
            "slice_rate_bps": cfg.network.slice_rate_bps,
            "model_bits": cfg.network.model_bits,
            "t_download_s": cfg.network.t_download_s,
            "t_train_range_s": list(cfg.network.t_train_range_s),
            "t_wireless_range_s": list(cfg.network.t_wireless_range_s),
            "sync_threshold_s": clean(cfg.network.sync_threshold_s),
            "t_agg_s": cfg.network.t_agg_s,
            "propagation_velocity_m_per_s": cfg.network.propagation_velocity_m_per_s,
            "onu_wait_policy": cfg.network.onu_wait_policy,
            "local_cutoff_s": clean(cfg.network.local_cutoff_s),
        },
        "partition": {
            "n_clients": cfg.partition.n_clients,
            "n_classes": cfg.partition.n_classes,
            "feature_dim": cfg.partition.feature_dim,
            "k_min": cfg.partition.k_min,
            "k_max": cfg.partition.k_max,
            "skew": cfg.partition.skew,
            "seed": cfg.partition.seed,
        },
        "hyper": {
            "learning_rate": cfg.hyper.learning_rate,
            "batch_size": cfg.hyper.batch_size,
            "local_epochs": cfg.hyper.local_epochs,
            "l2_penalty": cfg.hyper.l2_penalty,
        },
        "mode": cfg.mode,
        "n_selected_per_round": cfg.n_selected_per_round,
        "n_rounds": cfg.n_rounds,
        "seed": cfg.seed,
    }


def load_config(path: str) -> dict:
    """Read a config file into a raw dict, without building objects yet.

    Kept separate from config_from_dict so CLI flag overrides can edit the
    raw dict before validation sees it.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InvalidConfig(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InvalidConfig(f"config file {path} must hold a JSON object")
    return raw
