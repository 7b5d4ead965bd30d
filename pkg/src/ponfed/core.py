"""Shared value types for the federated-PON simulator.

Every type validates its invariants at construction time and is immutable
afterwards, so instances can be shared freely between threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidConfig, NonFiniteWeight, ZeroSamples

ClientId = tuple[int, int]  # (onu_index, client_index), both 1-based


def _as_frozen_f64(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Flat vector of 64-bit model coordinates."""

    weights: np.ndarray

    def __post_init__(self):
        arr = _as_frozen_f64(self.weights)
        if arr.size < 1:
            raise DimensionMismatch("model must have at least one weight")
        if not np.isfinite(arr).all():
            raise NonFiniteWeight("model weights must be finite")
        object.__setattr__(self, "weights", arr)

    @property
    def dim(self) -> int:
        return int(self.weights.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.dim, self.weights.tobytes()))


@dataclass(frozen=True)
class ClientUpdate:
    """A trained local model together with the client's sample count."""

    client_id: ClientId
    params: ModelParams
    sample_count: int

    def __post_init__(self):
        onu, cli = self.client_id
        if onu < 1 or cli < 1:
            raise InvalidConfig(f"client id must be 1-based, got {self.client_id}")
        if self.sample_count < 1:
            raise ZeroSamples(f"sample_count must be >= 1, got {self.sample_count}")


@dataclass(frozen=True)
class OnuAggregate:
    """Weighted sum of one ONU's client models (a sum, not an average)."""

    onu_index: int
    theta: ModelParams
    k_total: int
    client_count: int

    def __post_init__(self):
        if self.client_count < 1:
            raise ZeroSamples("an aggregate needs at least one contributing client")
        if self.k_total < self.client_count:
            raise ZeroSamples(
                f"k_total ({self.k_total}) cannot be below client_count ({self.client_count})"
            )


@dataclass(frozen=True)
class GlobalModel:
    """Global model state after a given number of completed rounds."""

    params: ModelParams
    round: int = 0
    k_total: int = 0

    def __post_init__(self):
        if self.round < 0:
            raise InvalidConfig(f"round must be non-negative, got {self.round}")

    def advanced(self, params: ModelParams, k_total: int) -> "GlobalModel":
        """Next-round model; the round counter moves forward by exactly one."""
        return GlobalModel(params=params, round=self.round + 1, k_total=k_total)


@dataclass(frozen=True)
class Topology:
    """Access-network layout: ONUs behind one OLT, clients behind each ONU."""

    n_onus: int = 16
    clients_per_onu: int = 20
    distance_km: float = 20.0

    def __post_init__(self):
        if self.n_onus < 1 or self.clients_per_onu < 1:
            raise InvalidConfig("topology needs at least one ONU and one client per ONU")
        if self.distance_km < 0:
            raise InvalidConfig("distance_km must be non-negative")

    @property
    def n_clients(self) -> int:
        return self.n_onus * self.clients_per_onu

    def client_ids(self) -> list[ClientId]:
        return [
            (i, j)
            for i in range(1, self.n_onus + 1)
            for j in range(1, self.clients_per_onu + 1)
        ]


@dataclass(frozen=True)
class TimingSample:
    """One client's one-round latency decomposition, all in seconds."""

    t_download: float
    t_train: float
    t_wireless: float
    t_pon: float
    t_agg: float = 0.0

    def __post_init__(self):
        for name in ("t_download", "t_train", "t_wireless", "t_pon", "t_agg"):
            if getattr(self, name) < 0:
                raise InvalidConfig(f"{name} must be non-negative")

    def total(self) -> float:
        return self.t_download + self.t_train + self.t_wireless + self.t_pon + self.t_agg


def validate_update(update: ClientUpdate, expected_dim: int) -> None:
    """Check an incoming update against the aggregation contract.

    Raises DimensionMismatch, NonFiniteWeight or ZeroSamples; returns None
    when the update is acceptable.
    """
    if update.params.dim != expected_dim:
        raise DimensionMismatch(
            f"update from {update.client_id} has dim {update.params.dim}, expected {expected_dim}"
        )
    if not np.isfinite(update.params.weights).all():
        raise NonFiniteWeight(f"update from {update.client_id} carries non-finite weights")
    if update.sample_count < 1:
        raise ZeroSamples(f"update from {update.client_id} reports zero samples")
