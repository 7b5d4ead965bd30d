"""Round loop: selection, local training, upload simulation, aggregation.

All randomness flows from the experiment seed through named substreams
(partition, selection, wireless, batching), each derived with SeedSequence
so the same config replays bit-for-bit and no consumer can perturb another.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .aggregation import cps_aggregate_one_step, cps_aggregate_two_step, onu_aggregate
from .core import ClientId, GlobalModel, Topology
from .errors import InvalidConfig, TooManyRequested
from .ponsim import (
    NetworkConfig,
    sample_latencies,
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
    zero_model,
)

MODES = ("classical", "sfl")

# Substream tags mixed into SeedSequence entropy, one per purpose.
_PARTITION, _SELECTION, _WIRELESS, _BATCH = 1, 2, 3, 4


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run depends on."""

    topology: Topology = Topology()
    network: NetworkConfig = NetworkConfig()
    partition: PartitionConfig = PartitionConfig(n_clients=320)
    hyper: HyperParams = HyperParams()
    mode: str = "sfl"
    n_selected_per_round: int = 48
    n_rounds: int = 10
    seed: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n_rounds < 1:
            raise InvalidConfig(f"n_rounds must be >= 1, got {self.n_rounds}")
        if self.n_selected_per_round < 1:
            raise InvalidConfig("n_selected_per_round must be >= 1")
        if self.n_selected_per_round > self.topology.n_clients:
            raise TooManyRequested(
                f"cannot select {self.n_selected_per_round} of "
                f"{self.topology.n_clients} clients"
            )
        if self.partition.n_clients != self.topology.n_clients:
            raise InvalidConfig(
                f"partition covers {self.partition.n_clients} clients but the "
                f"topology has {self.topology.n_clients}"
            )
        if self.seed < 0:
            raise InvalidConfig("seed must be non-negative")


@dataclass(frozen=True)
class RoundRecord:
    """One row of experiment output (mirrors the records CSV)."""

    round: int
    mode: str
    n_selected: int
    n_involved: int
    upstream_bits: float
    saving_fraction: float
    accuracy: float
    t_total_min_s: float
    t_total_mean_s: float
    t_total_max_s: float

    def __post_init__(self):
        if self.n_involved > self.n_selected:
            raise InvalidConfig("n_involved cannot exceed n_selected")
        if self.upstream_bits < 0:
            raise InvalidConfig("upstream_bits must be non-negative")
        if not 0.0 <= self.accuracy <= 1.0:
            raise InvalidConfig(f"accuracy must lie in [0, 1], got {self.accuracy}")


@dataclass
class ExperimentState:
    """Mutable loop state; build with init_state, advance with run_round."""

    cfg: ExperimentConfig
    datasets: dict[ClientId, LocalDataset]
    test_set: LocalDataset
    model: GlobalModel


def select_clients(rng: np.random.Generator, n: int, topology: Topology) -> list[ClientId]:
    """Uniform sample of n distinct clients, in canonical (onu, client) order.

    The sample is the prefix of one full permutation, so with a fixed stream
    state the cohort at a smaller n nests inside the cohort at a larger n.
    """
    if n < 1:
        raise InvalidConfig(f"must select at least one client, got {n}")
    population = topology.client_ids()
    if n > len(population):
        raise TooManyRequested(f"asked for {n} of {len(population)} clients")
    picked = rng.permutation(len(population))[:n]
    return sorted(population[i] for i in picked)


def init_state(cfg: ExperimentConfig) -> ExperimentState:
    """Partition data, build the round-zero model, and wrap them as state."""
    mixed = int(
        np.random.SeedSequence(
            [cfg.seed, _PARTITION, cfg.partition.seed]
        ).generate_state(1, np.uint64)[0]
    )
    datasets, test_set = synth_partition(replace(cfg.partition, seed=mixed))
    by_id = dict(zip(cfg.topology.client_ids(), datasets))
    model = zero_model(cfg.partition.feature_dim, cfg.partition.n_classes)
    return ExperimentState(cfg=cfg, datasets=by_id, test_set=test_set, model=model)


def run_round(state: ExperimentState) -> RoundRecord:
    """Advance the experiment by one round and report what happened.

    Selected clients all train and upload; the straggler filter then decides
    whose updates reach aggregation. An empty involved set carries the
    model forward unchanged.
    """
    cfg = state.cfg
    rnd = state.model.round

    sel_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, _SELECTION, rnd]))
    selected = select_clients(sel_rng, cfg.n_selected_per_round, cfg.topology)

    updates = {}
    for cid in selected:
        batch_rng = np.random.default_rng(
            np.random.SeedSequence([cfg.seed, _BATCH, rnd, cid[0], cid[1]])
        )
        updates[cid] = local_train(
            state.model, state.datasets[cid], cfg.hyper, batch_rng, client_id=cid
        )

    counts = {cid: state.datasets[cid].sample_count for cid in selected}
    wireless_rng = np.random.default_rng(
        np.random.SeedSequence([cfg.seed, _WIRELESS, rnd])
    )
    latencies = sample_latencies(
        selected, counts, cfg.partition.k_min, cfg.partition.k_max, cfg.network, wireless_rng
    )

    if cfg.mode == "classical":
        outcome = simulate_upstream_classical(selected, latencies, cfg.network, cfg.topology)
    else:
        outcome = simulate_upstream_sfl(selected, latencies, cfg.network, cfg.topology)

    involved = sorted(outcome.involved)
    if not involved:
        new_model = GlobalModel(
            params=state.model.params, round=rnd + 1, k_total=state.model.k_total
        )
    elif cfg.mode == "classical":
        new_model = cps_aggregate_one_step([updates[c] for c in involved], round=rnd)
    else:
        by_onu: dict[int, list] = {}
        for c in involved:
            by_onu.setdefault(c[0], []).append(updates[c])
        aggs = [onu_aggregate(group) for _, group in sorted(by_onu.items())]
        new_model = cps_aggregate_two_step(aggs, round=rnd)

    state.model = new_model
    accuracy = evaluate(new_model, state.test_set)

    totals = [t.total() for t in outcome.timings.values()]
    if cfg.mode == "classical":
        saving = 0.0
    else:
        saving = 1.0 - outcome.upstream_bits / (len(selected) * cfg.network.model_bits)
    return RoundRecord(
        round=rnd + 1,
        mode=cfg.mode,
        n_selected=len(selected),
        n_involved=len(involved),
        upstream_bits=outcome.upstream_bits,
        saving_fraction=saving,
        accuracy=accuracy,
        t_total_min_s=min(totals) if totals else 0.0,
        t_total_mean_s=float(np.mean(totals)) if totals else 0.0,
        t_total_max_s=max(totals) if totals else 0.0,
    )


def run_experiment(cfg: ExperimentConfig) -> list[RoundRecord]:
    """Run cfg.n_rounds rounds from a fresh state; pure in cfg."""
    state = init_state(cfg)
    return [run_round(state) for _ in range(cfg.n_rounds)]


@dataclass(frozen=True)
class ModeComparison:
    """Paired runs of both modes under one seed, plus headline gaps."""

    classical: list[RoundRecord]
    sfl: list[RoundRecord]

    @property
    def saving_fractions(self) -> list[float]:
        """Per-round upstream saving of the split mode over the classical one."""
        return [
            1.0 - s.upstream_bits / c.upstream_bits
            for c, s in zip(self.classical, self.sfl)
        ]

    def summary(self) -> dict:
        savings = self.saving_fractions
        return {
            "mean_saving": float(np.mean(savings)),
            "mean_involved_gap": float(
                np.mean([s.n_involved - c.n_involved for c, s in zip(self.classical, self.sfl)])
            ),
            "final_accuracy_gap": self.sfl[-1].accuracy - self.classical[-1].accuracy,
        }


def compare_modes(cfg: ExperimentConfig) -> ModeComparison:
    """Run both modes under identical seeds so all draws coincide."""
    return ModeComparison(
        classical=run_experiment(replace(cfg, mode="classical")),
        sfl=run_experiment(replace(cfg, mode="sfl")),
    )
