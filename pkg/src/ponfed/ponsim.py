"""Timing model of one upload phase over a shared PON slice.

The FL task owns a fixed upstream slice, modeled as a single serial server:
transmissions are granted strictly in readiness order and never overlap, so
a burst of simultaneous arrivals drains one model at a time. Two upload
shapes are simulated. In the classical shape every selected client sends its
own model through the slice. In the split shape each ONU first combines the
models of its attached clients locally and sends a single model upstream,
which keeps slice usage proportional to the number of ONUs instead of the
cohort size.

Per-client latency before the slice is t_download + t_train + t_wireless.
Training time is an affine function of the client's sample count; wireless
time is drawn uniformly per client per round.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ClientId, TimingSample, Topology
from .errors import EmptySelection, InvalidConfig, InvalidCounts


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and scheduling parameters of the access network."""

    slice_rate_bps: float = 1e8
    model_bits: float = 26.416e6
    t_download_s: float = 2.0
    t_train_range_s: tuple[float, float] = (3.0, 20.0)
    t_wireless_range_s: tuple[float, float] = (1.0, 5.0)
    sync_threshold_s: float = 25.0
    t_agg_s: float = 0.1
    propagation_velocity_m_per_s: float = 2e8
    onu_wait_policy: str = "cutoff"
    local_cutoff_s: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "t_train_range_s", tuple(self.t_train_range_s))
        object.__setattr__(self, "t_wireless_range_s", tuple(self.t_wireless_range_s))
        if self.slice_rate_bps <= 0:
            raise InvalidConfig("slice_rate_bps must be positive")
        if self.model_bits <= 0:
            raise InvalidConfig("model_bits must be positive")
        if self.t_download_s < 0 or self.t_agg_s < 0:
            raise InvalidConfig("fixed delays must be non-negative")
        for name in ("t_train_range_s", "t_wireless_range_s"):
            lo, hi = getattr(self, name)
            if not (0 <= lo <= hi):
                raise InvalidConfig(f"{name} must be an ordered non-negative pair")
        if not self.sync_threshold_s > 0:
            raise InvalidConfig("sync_threshold_s must be positive (math.inf disables it)")
        if not self.local_cutoff_s > 0:
            raise InvalidConfig("local_cutoff_s must be positive (math.inf disables it)")
        if self.propagation_velocity_m_per_s <= 0:
            raise InvalidConfig("propagation_velocity_m_per_s must be positive")
        if self.onu_wait_policy not in ("all", "cutoff"):
            raise InvalidConfig(
                f"onu_wait_policy must be 'all' or 'cutoff', got {self.onu_wait_policy!r}"
            )

    @property
    def transmit_time_s(self) -> float:
        """Serialization time of one model on the slice."""
        return self.model_bits / self.slice_rate_bps


@dataclass(frozen=True)
class UploadOutcome:
    """What one upload phase produced.

    timings and completion_s cover every client that reached the slice
    (directly or through its ONU); dropped holds clients cut at their ONU
    before aggregation and therefore absent from both. involved is the
    subset whose round time beat the synchronization threshold.
    """

    timings: dict[ClientId, TimingSample]
    completion_s: dict[ClientId, float]
    involved: frozenset[ClientId]
    upstream_bits: float
    onu_completion_s: dict[int, float] = field(default_factory=dict)
    dropped: frozenset[ClientId] = frozenset()

    def __post_init__(self):
        if not self.involved <= set(self.completion_s):
            raise InvalidConfig("involved clients must carry a completion time")
        if self.upstream_bits < 0:
            raise InvalidConfig("upstream_bits must be non-negative")


def propagation_delay(topology: Topology, cfg: NetworkConfig) -> float:
    """One-way fiber delay between ONUs and the OLT, in seconds."""
    return topology.distance_km * 1000.0 / cfg.propagation_velocity_m_per_s


def sample_latencies(
    selected: list[ClientId],
    counts: dict[ClientId, int],
    k_min: int,
    k_max: int,
    cfg: NetworkConfig,
    rng: np.random.Generator,
) -> dict[ClientId, tuple[float, float]]:
    """Draw per-client (t_train, t_wireless) for one round.

    t_train maps the sample count affinely onto cfg.t_train_range_s; a
    degenerate k_min == k_max range pins every client to the midpoint.
    Draws happen in canonical (onu, client) order, so the result depends
    only on the stream state and the selected set, not on caller order.
    """
    if not (1 <= k_min <= k_max):
        raise InvalidCounts(f"need 1 <= k_min <= k_max, got [{k_min}, {k_max}]")
    lo, hi = cfg.t_train_range_s
    wlo, whi = cfg.t_wireless_range_s
    out: dict[ClientId, tuple[float, float]] = {}
    for cid in sorted(selected):
        k = counts[cid]
        if not (k_min <= k <= k_max):
            raise InvalidCounts(f"client {cid} has {k} samples outside [{k_min}, {k_max}]")
        if k_min == k_max:
            t_train = (lo + hi) / 2.0
        else:
            t_train = lo + (hi - lo) * (k - k_min) / (k_max - k_min)
        t_wireless = float(rng.uniform(wlo, whi))
        out[cid] = (t_train, t_wireless)
    return out


def _serve_serially(jobs, tx: float, prop: float):
    """Run (ready_time, key) jobs through the one-at-a-time slice.

    Grant order is readiness, ties broken by key. Returns key -> completion,
    where completion includes the fiber propagation delay.
    """
    server_free = 0.0
    completions = {}
    for ready, key in sorted(jobs):
        start = max(ready, server_free)
        server_free = start + tx
        completions[key] = server_free + prop
    return completions


def simulate_upstream_classical(
    selected: list[ClientId],
    latencies: dict[ClientId, tuple[float, float]],
    cfg: NetworkConfig,
    topology: Topology,
) -> UploadOutcome:
    """Every selected client pushes its own model through the slice.

    All selected clients transmit and consume bandwidth; the threshold only
    decides who still counts toward aggregation afterwards.
    """
    if not selected:
        raise EmptySelection("classical upload needs at least one selected client")
    prop = propagation_delay(topology, cfg)
    tx = cfg.transmit_time_s

    ready = {cid: cfg.t_download_s + latencies[cid][0] + latencies[cid][1] for cid in selected}
    completions = _serve_serially([(ready[cid], cid) for cid in selected], tx, prop)

    timings = {}
    for cid in selected:
        t_train, t_wireless = latencies[cid]
        timings[cid] = TimingSample(
            t_download=cfg.t_download_s,
            t_train=t_train,
            t_wireless=t_wireless,
            t_pon=completions[cid] - ready[cid],
        )
    return UploadOutcome(
        timings=timings,
        completion_s=completions,
        involved=filter_stragglers(completions, cfg.sync_threshold_s),
        upstream_bits=len(selected) * cfg.model_bits,
    )


def simulate_upstream_sfl(
    selected: list[ClientId],
    latencies: dict[ClientId, tuple[float, float]],
    cfg: NetworkConfig,
    topology: Topology,
) -> UploadOutcome:
    """ONUs combine their clients' models and send one model each.

    Under the 'cutoff' wait policy an ONU stops waiting for clients whose
    arrival exceeds local_cutoff_s and aggregates without them; under 'all'
    it waits for every attached selected client. The ONU becomes ready
    t_agg_s after its last retained arrival. Clients of one ONU share that
    ONU's completion as their round time.
    """
    if not selected:
        raise EmptySelection("split upload needs at least one selected client")
    prop = propagation_delay(topology, cfg)
    tx = cfg.transmit_time_s

    by_onu: dict[int, list[ClientId]] = {}
    for cid in sorted(selected):
        by_onu.setdefault(cid[0], []).append(cid)

    arrival = {cid: cfg.t_download_s + latencies[cid][0] + latencies[cid][1] for cid in selected}

    retained: dict[int, list[ClientId]] = {}
    dropped = []
    for onu, members in by_onu.items():
        if cfg.onu_wait_policy == "cutoff":
            keep = [cid for cid in members if arrival[cid] <= cfg.local_cutoff_s]
        else:
            keep = list(members)
        if keep:
            retained[onu] = keep
        dropped.extend(cid for cid in members if cid not in keep)

    onu_ready = {
        onu: max(arrival[cid] for cid in members) + cfg.t_agg_s
        for onu, members in retained.items()
    }
    onu_completions = _serve_serially(list((t, onu) for onu, t in onu_ready.items()), tx, prop)

    timings = {}
    completions = {}
    involved = []
    for onu, members in retained.items():
        done = onu_completions[onu]
        ok = done <= cfg.sync_threshold_s
        for cid in members:
            t_train, t_wireless = latencies[cid]
            timings[cid] = TimingSample(
                t_download=cfg.t_download_s,
                t_train=t_train,
                t_wireless=t_wireless,
                t_pon=done - arrival[cid] - cfg.t_agg_s,
                t_agg=cfg.t_agg_s,
            )
            completions[cid] = done
            if ok:
                involved.append(cid)
    return UploadOutcome(
        timings=timings,
        completion_s=completions,
        involved=frozenset(involved),
        upstream_bits=len(retained) * cfg.model_bits,
        onu_completion_s=onu_completions,
        dropped=frozenset(dropped),
    )


def round_bandwidth_saving(n_onus: int, n_selected: int, model_bits: float) -> float:
    """Fractional upstream saving of one-model-per-ONU over one-per-client.

    Valid for the nominal case where every ONU hosts at least one selected
    client, so the split mode sends exactly n_onus models.
    """
    if model_bits <= 0:
        raise InvalidCounts(f"model_bits must be positive, got {model_bits}")
    if not (1 <= n_onus <= n_selected):
        raise InvalidCounts(
            f"need 1 <= n_onus <= n_selected, got n_onus={n_onus}, n_selected={n_selected}"
        )
    return 1.0 - (n_onus * model_bits) / (n_selected * model_bits)


def filter_stragglers(completions: dict, threshold_s: float) -> frozenset:
    """Keys whose completion time is within the threshold (inclusive)."""
    return frozenset(k for k, t in completions.items() if t <= threshold_s)
