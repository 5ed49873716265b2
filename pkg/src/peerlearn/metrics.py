"""Evaluation helpers shared by the run loops and the experiment harness."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ShapeError
from .tasks import ProblemInstance, train_solitary


def per_agent_distance(models, targets) -> np.ndarray:
    """Euclidean distance between each agent's model and its target."""
    models = np.asarray(models, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if models.shape != targets.shape:
        raise ShapeError(f"shape mismatch: {models.shape} vs {targets.shape}")
    return np.linalg.norm(models - targets, axis=1)


def mean_distance(models, targets) -> float:
    return float(per_agent_distance(models, targets).mean())


def per_agent_accuracy(models, test_features, test_labels) -> np.ndarray:
    """Fraction of correctly signed test predictions, one entry per agent."""
    models = np.asarray(models, dtype=np.float64)
    out = np.empty(models.shape[0])
    for i in range(models.shape[0]):
        scores = test_features[i] @ models[i]
        pred = np.where(scores >= 0.0, 1.0, -1.0)
        out[i] = float(np.mean(pred == test_labels[i]))
    return out


def mean_accuracy(models, test_features, test_labels) -> float:
    return float(per_agent_accuracy(models, test_features, test_labels).mean())


def distance_metric(targets) -> Callable[[np.ndarray], float]:
    """Closure reporting the mean per-agent distance to fixed targets."""
    targets = np.asarray(targets, dtype=np.float64)
    return lambda models: mean_distance(models, targets)


def accuracy_metric(instance: ProblemInstance) -> Callable[[np.ndarray], float]:
    """Closure reporting mean per-agent test accuracy for an instance."""
    feats, labs = instance.test_features, instance.test_labels
    return lambda models: mean_accuracy(models, feats, labs)


def consensus_baseline(instance: ProblemInstance) -> np.ndarray:
    """Single shared model trained on the union of all local datasets.

    Every agent is assigned the same pooled model, which is what a
    network that forces full agreement would converge to.
    """
    feats = [np.asarray(f, dtype=np.float64).reshape(-1, instance.p)
             for f in instance.features]
    pooled_x = np.vstack(feats)
    if instance.loss_kind == "quadratic":
        pooled_y = None
    else:
        pooled_y = np.concatenate([np.asarray(l, dtype=np.float64)
                                   for l in instance.labels])
    shared = train_solitary(pooled_x, pooled_y, instance.loss_kind, instance.p)
    return np.tile(shared, (instance.n, 1))
