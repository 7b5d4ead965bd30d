"""Local training: a linear softmax classifier trained with mini-batch SGD,
plus a synthetic label-skewed data generator.

Parameter layout is a single flat vector of length n_classes * (feature_dim
+ 1): class-major blocks of feature weights first, then one bias per class.
Keeping models as plain vectors lets the aggregation and network layers stay
agnostic about what is being learned.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ClientId, ClientUpdate, GlobalModel, ModelParams
from .errors import DimensionMismatch, EmptyBatch, InvalidConfig

# Spread of the class-conditional cluster centres (cluster variance is 1).
# Chosen so the toy task neither saturates at 1.0 nor stays at chance:
# accuracy keeps responding to model quality instead of flattening out.
CLASS_MEAN_SCALE = 0.4
TEST_SET_SIZE = 2000


@dataclass(frozen=True)
class LocalDataset:
    """One client's private samples."""

    features: np.ndarray  # (sample_count, feature_dim) float64
    labels: np.ndarray  # (sample_count,) class indices

    def __post_init__(self):
        feats = np.array(self.features, dtype=np.float64, copy=True)
        labs = np.array(self.labels, dtype=np.int64, copy=True).reshape(-1)
        if feats.ndim != 2:
            raise InvalidConfig("features must be a 2-d array of shape (samples, features)")
        if feats.shape[0] != labs.shape[0]:
            raise InvalidConfig(
                f"{feats.shape[0]} feature rows but {labs.shape[0]} labels"
            )
        if feats.shape[0] < 1:
            raise InvalidConfig("a dataset needs at least one sample")
        if not np.isfinite(feats).all():
            raise InvalidConfig("features must be finite")
        if (labs < 0).any():
            raise InvalidConfig("labels must be non-negative class indices")
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)

    @property
    def sample_count(self) -> int:
        return int(self.features.shape[0])

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])


@dataclass(frozen=True)
class HyperParams:
    learning_rate: float = 0.05
    batch_size: int = 10
    local_epochs: int = 1
    l2_penalty: float = 0.0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise InvalidConfig("learning_rate must be positive")
        if self.batch_size < 1:
            raise InvalidConfig("batch_size must be >= 1")
        if self.local_epochs < 1:
            raise InvalidConfig("local_epochs must be >= 1")
        if self.l2_penalty < 0:
            raise InvalidConfig("l2_penalty must be non-negative")


@dataclass(frozen=True)
class PartitionConfig:
    """Knobs of the synthetic per-client data generator."""

    n_clients: int
    n_classes: int = 5
    feature_dim: int = 16
    k_min: int = 100
    k_max: int = 100
    skew: float = 0.5
    seed: int = 1

    def __post_init__(self):
        if self.n_clients < 1:
            raise InvalidConfig("n_clients must be >= 1")
        if self.n_classes < 2:
            raise InvalidConfig("n_classes must be >= 2")
        if self.feature_dim < 1:
            raise InvalidConfig("feature_dim must be >= 1")
        if not (1 <= self.k_min <= self.k_max):
            raise InvalidConfig("need 1 <= k_min <= k_max")
        if not (0.0 <= self.skew <= 1.0):
            raise InvalidConfig("skew must lie in [0, 1]")
        if self.seed < 0:
            raise InvalidConfig("seed must be non-negative")


def model_dim(feature_dim: int, n_classes: int) -> int:
    return n_classes * (feature_dim + 1)


def zero_model(feature_dim: int, n_classes: int) -> GlobalModel:
    """Round-zero global model: all-zero weights (uniform class scores)."""
    return GlobalModel(params=ModelParams(np.zeros(model_dim(feature_dim, n_classes))))


def _split_params(params: ModelParams, feature_dim: int):
    dim = params.dim
    if dim % (feature_dim + 1) != 0:
        raise DimensionMismatch(
            f"model dim {dim} does not fit feature_dim {feature_dim} plus per-class bias"
        )
    n_classes = dim // (feature_dim + 1)
    flat = params.weights
    weights = flat[: n_classes * feature_dim].reshape(n_classes, feature_dim)
    bias = flat[n_classes * feature_dim :]
    return weights, bias, n_classes


def _class_probs(params: ModelParams, features: np.ndarray):
    weights, bias, n_classes = _split_params(params, features.shape[1])
    logits = features @ weights.T + bias
    logits -= logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    return exp / exp.sum(axis=1, keepdims=True), weights, n_classes


def softmax_loss(params: ModelParams, features: np.ndarray, labels: np.ndarray, l2: float = 0.0) -> float:
    """Mean cross-entropy over the batch plus (l2/2) * ||weights||^2 (biases unpenalized)."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] == 0:
        raise EmptyBatch("cannot evaluate loss on an empty batch")
    probs, weights, n_classes = _class_probs(params, features)
    if labels.max(initial=0) >= n_classes:
        raise DimensionMismatch(f"label {labels.max()} out of range for {n_classes} classes")
    picked = probs[np.arange(features.shape[0]), labels]
    ce = float(-np.mean(np.log(np.maximum(picked, 1e-300))))
    return ce + 0.5 * l2 * float(np.sum(weights * weights))


def grad_softmax(params: ModelParams, features: np.ndarray, labels: np.ndarray, l2: float = 0.0) -> np.ndarray:
    """Gradient of softmax_loss with respect to the flat parameter vector."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n = features.shape[0]
    if n == 0:
        raise EmptyBatch("cannot take a gradient over an empty batch")
    probs, weights, n_classes = _class_probs(params, features)
    if labels.max(initial=0) >= n_classes:
        raise DimensionMismatch(f"label {labels.max()} out of range for {n_classes} classes")
    delta = probs
    delta[np.arange(n), labels] -= 1.0
    grad_w = delta.T @ features / n + l2 * weights
    grad_b = delta.mean(axis=0)
    return np.concatenate([grad_w.ravel(), grad_b])


def sgd_step(params: ModelParams, grad: np.ndarray, eta: float) -> ModelParams:
    """One descent step: w <- w - eta * grad."""
    grad = np.asarray(grad, dtype=np.float64).reshape(-1)
    if eta <= 0:
        raise InvalidConfig(f"learning rate must be positive, got {eta}")
    if grad.size != params.dim:
        raise DimensionMismatch(f"gradient dim {grad.size} != model dim {params.dim}")
    return ModelParams(params.weights - eta * grad)


def local_train(
    global_model: GlobalModel,
    data: LocalDataset,
    hp: HyperParams,
    rng: np.random.Generator,
    client_id: ClientId = (1, 1),
) -> ClientUpdate:
    """Run local mini-batch SGD starting from the global model.

    Batches are drawn by shuffling the local sample indices with the given
    stream once per epoch; a short final batch is kept. Identical data and
    stream state produce a bit-identical update.
    """
    params = global_model.params
    n = data.sample_count
    for _ in range(hp.local_epochs):
        order = rng.permutation(n)
        for start in range(0, n, hp.batch_size):
            idx = order[start : start + hp.batch_size]
            grad = grad_softmax(params, data.features[idx], data.labels[idx], hp.l2_penalty)
            params = sgd_step(params, grad, hp.learning_rate)
    return ClientUpdate(client_id=client_id, params=params, sample_count=n)


def synth_partition(cfg: PartitionConfig) -> tuple[list[LocalDataset], LocalDataset]:
    """Generate per-client datasets plus a held-out IID test set.

    Features are unit-variance Gaussian clusters around per-class mean
    vectors drawn once from the seed. Each client's class mix interpolates
    between uniform and a client-specific concentration on two classes:
    p = (1 - skew)/C + skew * concentration. Sample counts are uniform
    integers in [k_min, k_max].
    """
    c, f = cfg.n_classes, cfg.feature_dim
    means_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0]))
    means = means_rng.normal(0.0, CLASS_MEAN_SCALE, size=(c, f))

    datasets = []
    for idx in range(cfg.n_clients):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 1, idx]))
        focus = rng.choice(c, size=2, replace=False)
        probs = np.full(c, (1.0 - cfg.skew) / c)
        probs[focus] += cfg.skew / 2.0
        k = int(rng.integers(cfg.k_min, cfg.k_max + 1))
        labels = rng.choice(c, size=k, p=probs)
        features = means[labels] + rng.standard_normal((k, f))
        datasets.append(LocalDataset(features=features, labels=labels))

    test_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2]))
    test_labels = test_rng.integers(0, c, size=TEST_SET_SIZE)
    test_features = means[test_labels] + test_rng.standard_normal((TEST_SET_SIZE, f))
    test_set = LocalDataset(features=test_features, labels=test_labels)
    return datasets, test_set


def evaluate(model: GlobalModel, test: LocalDataset) -> float:
    """Top-1 accuracy; score ties resolve to the lowest class index."""
    weights, bias, n_classes = _split_params(model.params, test.feature_dim)
    if test.labels.max(initial=0) >= n_classes:
        raise DimensionMismatch(
            f"test label {test.labels.max()} out of range for {n_classes} classes"
        )
    scores = test.features @ weights.T + bias
    predicted = np.argmax(scores, axis=1)
    return float(np.mean(predicted == test.labels))
