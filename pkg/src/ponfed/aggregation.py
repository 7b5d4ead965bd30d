"""Model aggregation kernels.

Two equivalent routes to the same global model:

* one step  -- the parameter server averages every client update directly,
  weighting each by its sample count;
* two steps -- each ONU first forms the weighted *sum* of its clients'
  models, then the parameter server adds the per-ONU sums and divides by
  the total sample count.

Inputs are canonically sorted by (onu_index, client_index) before any
accumulation, so results are reproducible bit-for-bit regardless of the
order callers supply them in.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import ClientUpdate, GlobalModel, ModelParams, OnuAggregate
from .errors import DimensionMismatch, EmptyInput, MixedOnu


def _check_common_dim(dims: Sequence[int], what: str) -> int:
    first = dims[0]
    for d in dims[1:]:
        if d != first:
            raise DimensionMismatch(f"{what} mix model dimensions {first} and {d}")
    return first


def onu_aggregate(updates: Sequence[ClientUpdate]) -> OnuAggregate:
    """Weighted addition of one ONU's client models: theta = sum_j k_j * w_j."""
    if not updates:
        raise EmptyInput("onu_aggregate needs at least one update")
    onus = {u.client_id[0] for u in updates}
    if len(onus) != 1:
        raise MixedOnu(f"updates span ONUs {sorted(onus)}; aggregate one ONU at a time")
    _check_common_dim([u.params.dim for u in updates], "updates")

    ordered = sorted(updates, key=lambda u: u.client_id)
    stacked = np.stack([u.params.weights for u in ordered])
    counts = np.array([u.sample_count for u in ordered], dtype=np.float64)
    theta = counts @ stacked
    return OnuAggregate(
        onu_index=next(iter(onus)),
        theta=ModelParams(theta),
        k_total=int(sum(u.sample_count for u in ordered)),
        client_count=len(ordered),
    )


def cps_aggregate_two_step(aggs: Sequence[OnuAggregate], round: int) -> GlobalModel:
    """Second aggregation step: w_g = (sum_i theta_i) / K over the ONU sums."""
    if not aggs:
        raise EmptyInput("cps_aggregate_two_step needs at least one ONU aggregate")
    _check_common_dim([a.theta.dim for a in aggs], "ONU aggregates")

    ordered = sorted(aggs, key=lambda a: a.onu_index)
    total = np.sum(np.stack([a.theta.weights for a in ordered]), axis=0)
    k_total = int(sum(a.k_total for a in ordered))
    params = total / float(k_total)
    return GlobalModel(params=ModelParams(params), round=round + 1, k_total=k_total)


def cps_aggregate_one_step(updates: Sequence[ClientUpdate], round: int) -> GlobalModel:
    """Classical sample-count-weighted averaging: w_g = sum (k_c / K) * w_c."""
    if not updates:
        raise EmptyInput("cps_aggregate_one_step needs at least one update")
    _check_common_dim([u.params.dim for u in updates], "updates")

    ordered = sorted(updates, key=lambda u: u.client_id)
    stacked = np.stack([u.params.weights for u in ordered])
    k_total = int(sum(u.sample_count for u in ordered))
    fractions = np.array([u.sample_count for u in ordered], dtype=np.float64) / float(k_total)
    params = fractions @ stacked
    return GlobalModel(params=ModelParams(params), round=round + 1, k_total=k_total)
