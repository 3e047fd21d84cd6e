"""Classifier-based utility comparison: train-synthetic versus train-real.

Two dependency-free learners (full-batch logistic regression and k-NN)
are trained once on real data and once on synthetic data, then scored
on the same held-out real test split.  Close TSTR and TRTR metrics mean
the synthetic table supports the same downstream model.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .tabular import (
    CATEGORICAL,
    Dataset,
    dynamic_train_test_split,
    sample_rows,
)

LEARNER_KINDS = ("logistic_regression", "k_nearest_neighbors")
METRIC_NAMES = ("accuracy", "f1", "auc")


@dataclass(frozen=True)
class Learner:
    """Configuration of one built-in classifier."""

    kind: str = "logistic_regression"
    learning_rate: float = 0.1
    iterations: int = 1000
    regularization: float = 1e-4
    k: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in LEARNER_KINDS:
            raise ValueError(f"kind must be one of {LEARNER_KINDS}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.regularization < 0:
            raise ValueError("regularization must be non-negative")


class FeatureEncoder:
    """Feature matrix builder fitted on the training table.

    Numeric columns are min-max scaled to the training ranges (clamped on
    unseen data); categorical columns are one-hot expanded over the
    training vocabulary, so categories never seen in training encode as
    all zeros.
    """

    def __init__(self, train: Dataset, feature_names: list[str]):
        if not feature_names:
            raise ValueError("no feature columns left after removing the target")
        self.feature_names = list(feature_names)
        self._ranges: dict[str, tuple[float, float]] = {}
        self._vocab: dict[str, list] = {}
        for name in feature_names:
            col = train.column(name)
            if train.schema[name].kind == CATEGORICAL:
                self._vocab[name] = list(np.unique(col))
            else:
                self._ranges[name] = (float(col.min()), float(col.max()))

    @property
    def width(self) -> int:
        return sum(
            len(self._vocab[n]) if n in self._vocab else 1 for n in self.feature_names
        )

    def transform(self, dataset: Dataset) -> np.ndarray:
        blocks = []
        for name in self.feature_names:
            col = dataset.column(name)
            if name in self._vocab:
                vocab = self._vocab[name]
                block = np.zeros((len(col), len(vocab)))
                for j, level in enumerate(vocab):
                    block[:, j] = col == level
                blocks.append(block)
            else:
                lo, hi = self._ranges[name]
                if hi > lo:
                    blocks.append(np.clip((col - lo) / (hi - lo), 0.0, 1.0)[:, None])
                else:
                    blocks.append(np.zeros((len(col), 1)))
        return np.hstack(blocks)


def _class_labels(train: Dataset, target: str) -> list:
    if target not in train.schema.names:
        raise ValueError(f"target column {target!r} not in dataset")
    return list(np.unique(train.column(target)))


def _with_bias(features: np.ndarray) -> np.ndarray:
    return np.hstack([np.ones((features.shape[0], 1)), features])


def loss_and_gradient(
    weights: np.ndarray, features: np.ndarray, labels: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean L2-regularized log-loss and its gradient.

    ``features`` must already carry the bias column; the bias weight is
    excluded from the penalty.  Exposed so the gradient can be validated
    against finite differences.
    """
    z = features @ weights
    # log(1 + e^z) - y z, computed stably
    loss = float(np.mean(np.logaddexp(0.0, z) - labels * z))
    penalty = weights.copy()
    penalty[0] = 0.0
    loss += 0.5 * l2 * float(penalty @ penalty)
    prob = 1.0 / (1.0 + np.exp(-z))
    grad = features.T @ (prob - labels) / features.shape[0] + l2 * penalty
    return loss, grad


@dataclass(frozen=True)
class _BinaryLogistic:
    weights: np.ndarray
    loss_trace: tuple[float, ...] = field(repr=False)

    def scores(self, features: np.ndarray) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-(_with_bias(features) @ self.weights)))


def _fit_binary_logistic(
    features: np.ndarray, labels: np.ndarray, hp: Learner
) -> _BinaryLogistic:
    X = _with_bias(features)
    w = np.zeros(X.shape[1])
    # gradient Lipschitz bound of the regularized mean log-loss; below
    # 1/L each full-batch step provably cannot increase the loss
    lipschitz = 0.25 * float(np.mean(np.einsum("ij,ij->i", X, X))) + hp.regularization
    guard = hp.learning_rate <= 1.0 / lipschitz
    trace = []
    loss, grad = loss_and_gradient(w, X, labels, hp.regularization)
    for _ in range(hp.iterations):
        trace.append(loss)
        w = w - hp.learning_rate * grad
        new_loss, grad = loss_and_gradient(w, X, labels, hp.regularization)
        if guard and new_loss > loss + 1e-12:
            raise RuntimeError(
                "logistic loss increased under a provably stable learning rate"
            )
        loss = new_loss
    trace.append(loss)
    return _BinaryLogistic(weights=w, loss_trace=tuple(trace))


class Classifier:
    """A fitted model carrying its own feature encoding and class list.

    For two training classes a single binary model scores the second
    (``classes[1]``); more classes get one-vs-rest binary models and an
    argmax decision.
    """

    def __init__(self, encoder: FeatureEncoder, classes: list, target: str):
        if len(classes) < 2:
            raise ValueError(
                f"target column {target!r} needs at least two classes, got {len(classes)}"
            )
        self.encoder = encoder
        self.classes = classes
        self.target = target

    def class_scores(self, dataset: Dataset) -> np.ndarray:
        """Per-class score matrix (rows: records, columns: self.classes)."""
        raise NotImplementedError

    def predict(self, dataset: Dataset) -> np.ndarray:
        picks = np.argmax(self.class_scores(dataset), axis=1)
        return np.asarray(self.classes, dtype=object)[picks]


class LogisticClassifier(Classifier):
    def __init__(self, encoder, classes, target, models: list[_BinaryLogistic]):
        super().__init__(encoder, classes, target)
        self.models = models

    @property
    def loss_trace(self) -> tuple[float, ...]:
        return self.models[0].loss_trace

    def class_scores(self, dataset: Dataset) -> np.ndarray:
        features = self.encoder.transform(dataset)
        if len(self.classes) == 2:
            pos = self.models[0].scores(features)
            return np.column_stack([1.0 - pos, pos])
        return np.column_stack([m.scores(features) for m in self.models])


class KnnClassifier(Classifier):
    def __init__(self, encoder, classes, target, features, labels, k: int):
        super().__init__(encoder, classes, target)
        if k > len(labels):
            raise ValueError(f"k={k} exceeds the {len(labels)} training records")
        self.features = features
        self.labels = labels
        self.k = k

    _SCORE_CHUNK = 256  # test rows per block, bounds the distance matrix

    def class_scores(self, dataset: Dataset) -> np.ndarray:
        test = self.encoder.transform(dataset)
        train_sq = np.sum(self.features * self.features, axis=1)[None, :]
        blocks = []
        for start in range(0, len(test), self._SCORE_CHUNK):
            part = test[start : start + self._SCORE_CHUNK]
            # squared Euclidean on the encoded features; ties resolved by
            # training-row order for determinism
            d2 = (
                np.sum(part * part, axis=1)[:, None]
                - 2.0 * part @ self.features.T
                + train_sq
            )
            neighbors = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
            picked = self.labels[neighbors]
            blocks.append(
                np.stack(
                    [(picked == idx).mean(axis=1) for idx in range(len(self.classes))],
                    axis=1,
                )
            )
        return np.concatenate(blocks, axis=0)


def train_logistic(train: Dataset, target: str, hp: Learner) -> LogisticClassifier:
    """Gradient-descent logistic regression; binary targets train one
    model, multi-class targets one per class (one-vs-rest)."""
    classes = _class_labels(train, target)
    encoder = FeatureEncoder(train, [n for n in train.schema.names if n != target])
    features = encoder.transform(train)
    labels = train.column(target)
    if len(classes) == 2:
        models = [_fit_binary_logistic(features, (labels == classes[1]).astype(float), hp)]
    elif len(classes) > 2:
        models = [
            _fit_binary_logistic(features, (labels == c).astype(float), hp)
            for c in classes
        ]
    else:
        raise ValueError(f"target column {target!r} needs at least two classes")
    return LogisticClassifier(encoder, classes, target, models)


def train_knn(train: Dataset, target: str, hp: Learner) -> KnnClassifier:
    classes = _class_labels(train, target)
    encoder = FeatureEncoder(train, [n for n in train.schema.names if n != target])
    features = encoder.transform(train)
    raw = train.column(target)
    index_of = {c: i for i, c in enumerate(classes)}
    label_idx = np.array([index_of[v] for v in raw])
    return KnnClassifier(encoder, classes, target, features, label_idx, hp.k)


def train_classifier(train: Dataset, target: str, learner: Learner) -> Classifier:
    if learner.kind == "logistic_regression":
        return train_logistic(train, target, learner)
    return train_knn(train, target, learner)


# -------------------------------------------------------------- evaluation


def _binary_metrics(y_true: np.ndarray, scores: np.ndarray, threshold: float = 0.5):
    pred = scores >= threshold
    accuracy = float(np.mean(pred == y_true))
    tp = float(np.sum(pred & y_true))
    fp = float(np.sum(pred & ~y_true))
    fn = float(np.sum(~pred & y_true))
    denom = 2.0 * tp + fp + fn
    f1 = 2.0 * tp / denom if denom > 0 else 0.0
    return accuracy, f1


def _auc_rank_sum(y_true: np.ndarray, scores: np.ndarray) -> float | None:
    """Mann-Whitney AUC with average ranks on tied scores; None when the
    labels are single-class."""
    n_pos = int(y_true.sum())
    n_neg = len(y_true) - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    sorted_scores = scores[order]
    i = 0
    rank_pos = 1.0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (rank_pos + rank_pos + (j - i))
        rank_pos += j - i + 1
        i = j + 1
    rank_sum = float(ranks[y_true].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate_classifier(model: Classifier, test: Dataset, target: str) -> dict:
    """Accuracy at the 0.5 threshold, positive-class F1, and rank-sum AUC.

    Multi-class models report macro-averaged F1/AUC over their one-vs-rest
    problems.  AUC is None (with a warning) when the test labels cannot
    support it.
    """
    if test.n_rows == 0:
        raise ValueError("test dataset is empty")
    if target not in test.schema.names:
        raise ValueError(f"target column {target!r} not in test dataset")
    labels = test.column(target)
    score_matrix = model.class_scores(test)
    if len(model.classes) == 2:
        y = labels == model.classes[1]
        accuracy, f1 = _binary_metrics(y, score_matrix[:, 1])
        auc = _auc_rank_sum(y, score_matrix[:, 1])
        if auc is None:
            warnings.warn("single-class test labels: AUC undefined, reported as None")
    else:
        pred = model.predict(test)
        accuracy = float(np.mean(pred == labels))
        f1_parts, auc_parts = [], []
        for idx, cls in enumerate(model.classes):
            y = labels == cls
            f1_parts.append(_binary_metrics(y, score_matrix[:, idx])[1])
            part = _auc_rank_sum(y, score_matrix[:, idx])
            if part is not None:
                auc_parts.append(part)
        f1 = float(np.mean(f1_parts))
        auc = float(np.mean(auc_parts)) if auc_parts else None
        if auc is None:
            warnings.warn("no class has both positives and negatives in the test labels")
    return {"accuracy": accuracy, "f1": f1, "auc": auc}


# -------------------------------------------------------------------- TSTR


@dataclass(frozen=True)
class UtilityReport:
    """TRTR/TSTR metric pair for one learner, with per-metric deltas."""

    model_name: str
    trtr: dict
    tstr: dict
    deltas: dict
    n_train: int
    n_test: int

    def to_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "trtr": dict(self.trtr),
            "tstr": dict(self.tstr),
            "deltas": dict(self.deltas),
            "n_train": self.n_train,
            "n_test": self.n_test,
        }


def _size_matched(synthetic: Dataset, n_train: int, seed: int) -> Dataset:
    """Synthetic training table with exactly ``n_train`` rows.

    An exact-size table is used verbatim (so a copied training split
    reproduces TRTR bit for bit); larger tables are subsampled without
    replacement, smaller ones resampled with replacement under a warning.
    """
    if synthetic.n_rows == n_train:
        return synthetic
    if synthetic.n_rows > n_train:
        return sample_rows(synthetic, n_train, seed=seed)
    warnings.warn(
        f"synthetic table has {synthetic.n_rows} rows, fewer than the {n_train} "
        "training rows; sampling with replacement"
    )
    return sample_rows(synthetic, n_train, with_replacement=True, seed=seed)


def _derived_seeds(seed: int) -> tuple[int, int]:
    return tuple(
        int(child.generate_state(1)[0])
        for child in np.random.SeedSequence(seed).spawn(2)
    )


def training_split(original: Dataset, target: str, *, seed: int):
    """The exact stratified train/test split ``tstr_compare`` uses for a
    given seed, exposed so callers can hand the training half back in as
    a synthetic table (reproducing TRTR exactly)."""
    split_seed, _ = _derived_seeds(seed)
    return dynamic_train_test_split(original, seed=split_seed, stratify_on=target)


def tstr_compare(
    original: Dataset,
    synthetic: Dataset,
    target: str,
    learner: Learner,
    *,
    seed: int,
) -> UtilityReport:
    """Train the learner on real and on synthetic data, score both on the
    same held-out real split, and report the metric deltas (TRTR - TSTR)."""
    for ds, label in ((original, "original"), (synthetic, "synthetic")):
        if target not in ds.schema.names:
            raise ValueError(f"target column {target!r} missing from {label} dataset")
    _, sample_seed = _derived_seeds(seed)
    split = training_split(original, target, seed=seed)
    trtr_model = train_classifier(split.train, target, learner)
    trtr = evaluate_classifier(trtr_model, split.test, target)

    syn_train = _size_matched(synthetic, split.train.n_rows, sample_seed)
    tstr_model = train_classifier(syn_train, target, learner)
    tstr = evaluate_classifier(tstr_model, split.test, target)

    deltas = {
        name: (trtr[name] - tstr[name])
        if trtr[name] is not None and tstr[name] is not None
        else None
        for name in METRIC_NAMES
    }
    return UtilityReport(
        model_name=learner.kind,
        trtr=trtr,
        tstr=tstr,
        deltas=deltas,
        n_train=split.train.n_rows,
        n_test=split.test.n_rows,
    )
