"""Synthetic problem instances: local datasets, confidences, solitary models.

Two families are provided: a mean-estimation task whose agents sit on a
two-moons layout, and a linear classification task whose agents have
low-rank target models.  Every per-agent quantity is drawn from that
agent's own random sub-stream, so regenerating one agent's data can never
disturb another's.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .errors import InvalidInstanceError, ParameterError, ShapeError
from .losses import get_loss


@dataclass
class ProblemInstance:
    """One network-wide learning problem.

    ``features[i]`` is an ``(m_i, p)`` array; ``labels[i]`` is ``(m_i,)``
    with values in {-1, +1} for classification and ``None`` for the
    label-free quadratic task.  ``test_features`` / ``test_labels`` follow
    the same layout when present.
    """

    n: int
    p: int
    loss_kind: str
    features: list
    labels: list
    confidences: np.ndarray
    solitary_models: np.ndarray
    target_models: np.ndarray
    test_features: list | None = None
    test_labels: list | None = None
    auxiliary_points: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def loss(self):
        return get_loss(self.loss_kind)

    def sizes(self) -> np.ndarray:
        return np.array([f.shape[0] for f in self.features], dtype=np.int64)

    def validate(self) -> None:
        if self.n < 2:
            raise InvalidInstanceError(f"need at least 2 agents, got n={self.n}")
        if self.p < 1:
            raise InvalidInstanceError(f"model dimension must be >= 1, got {self.p}")
        if len(self.features) != self.n or len(self.labels) != self.n:
            raise InvalidInstanceError("one dataset per agent required")
        c = np.asarray(self.confidences, float)
        if c.shape != (self.n,) or np.any(c <= 0) or np.any(c > 1):
            raise InvalidInstanceError("confidences must lie in (0, 1], one per agent")
        for arrs, name in ((self.solitary_models, "solitary_models"),
                           (self.target_models, "target_models")):
            if np.shape(arrs) != (self.n, self.p):
                raise ShapeError(f"{name} must have shape ({self.n}, {self.p})")
        for i, f in enumerate(self.features):
            if f.ndim != 2 or f.shape[1] != self.p:
                raise ShapeError(f"agent {i}: features must be (m_i, {self.p})")
            lab = self.labels[i]
            if lab is not None and len(lab) != f.shape[0]:
                raise ShapeError(f"agent {i}: labels misaligned with features")
        get_loss(self.loss_kind)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        def arr(a):
            return None if a is None else np.asarray(a).tolist()

        doc = {
            "n": self.n,
            "p": self.p,
            "loss_kind": self.loss_kind,
            "features": [arr(f) for f in self.features],
            "labels": [arr(l) for l in self.labels],
            "confidences": arr(self.confidences),
            "solitary_models": arr(self.solitary_models),
            "target_models": arr(self.target_models),
            "test_features": None if self.test_features is None
            else [arr(f) for f in self.test_features],
            "test_labels": None if self.test_labels is None
            else [arr(l) for l in self.test_labels],
            "auxiliary_points": arr(self.auxiliary_points),
            "metadata": self.metadata,
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "ProblemInstance":
        doc = json.loads(text)
        p = int(doc["p"])

        def feat(a):
            return np.asarray(a, dtype=np.float64).reshape(len(a), p)

        inst = cls(
            n=int(doc["n"]),
            p=p,
            loss_kind=doc["loss_kind"],
            features=[feat(f) for f in doc["features"]],
            labels=[None if l is None else np.asarray(l, dtype=np.float64)
                    for l in doc["labels"]],
            confidences=np.asarray(doc["confidences"], dtype=np.float64),
            solitary_models=np.asarray(doc["solitary_models"], dtype=np.float64),
            target_models=np.asarray(doc["target_models"], dtype=np.float64),
            test_features=None if doc["test_features"] is None
            else [feat(f) for f in doc["test_features"]],
            test_labels=None if doc["test_labels"] is None
            else [np.asarray(l, dtype=np.float64) for l in doc["test_labels"]],
            auxiliary_points=None if doc["auxiliary_points"] is None
            else np.asarray(doc["auxiliary_points"], dtype=np.float64),
            metadata=doc.get("metadata", {}),
        )
        inst.validate()
        return inst


# ---- shared pieces ---------------------------------------------------------


def confidence_from_sizes(sizes, floor: float = 0.01) -> np.ndarray:
    """Confidences proportional to dataset sizes, normalized to max 1.

    Agents with empty datasets get the small positive ``floor`` instead
    of zero so the propagation penalty never degenerates.
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    if not 0 < floor <= 1:
        raise ParameterError(f"floor must be in (0, 1], got {floor}")
    top = sizes.max() if sizes.size else 0.0
    if top <= 0:
        raise InvalidInstanceError("all datasets are empty; confidences undefined")
    c = sizes / top
    c[sizes == 0] = floor
    return c


def train_solitary(features, labels, loss_kind: str, p: int,
                   budget: int = 500) -> np.ndarray:
    """Train one agent's model on its local data alone.

    Quadratic loss has the exact minimizer (the sample mean).  Hinge loss
    runs ``budget`` subgradient steps with step size ``1/sqrt(t)`` from
    zero and returns the better of the averaged iterate and the best
    single iterate by objective value.  Empty datasets yield the zero
    vector.
    """
    X = np.asarray(features, dtype=np.float64).reshape(-1, p)
    if X.shape[0] == 0:
        return np.zeros(p)
    if loss_kind == "quadratic":
        return X.mean(axis=0)
    if loss_kind != "hinge":
        raise ParameterError(f"unknown loss kind {loss_kind!r}")
    y = np.asarray(labels, dtype=np.float64)
    if len(y) != X.shape[0]:
        raise ShapeError("labels misaligned with features")
    xy = y[:, None] * X
    theta = np.zeros(p)
    avg = np.zeros(p)
    best = theta.copy()
    best_val = float(X.shape[0])  # loss at zero: every margin is 0
    for t in range(1, budget + 1):
        margins = xy @ theta
        active = margins < 1.0
        if np.any(active):
            g = -xy[active].sum(axis=0)
            theta = theta - g / math.sqrt(t)
        val = float(np.maximum(0.0, 1.0 - xy @ theta).sum())
        if val < best_val:
            best_val = val
            best = theta.copy()
        avg += (theta - avg) / t
    avg_val = float(np.maximum(0.0, 1.0 - xy @ avg).sum())
    return avg if avg_val <= best_val else best


def _ball_uniform(rng, m: int, p: int) -> np.ndarray:
    """``m`` points uniform in the unit L2 ball of R^p."""
    g = rng.normal(size=(m, p))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    radii = rng.random(m) ** (1.0 / p)
    return g / norms * radii[:, None]


def _sign(v) -> np.ndarray:
    """Sign with the tie ``sign(0) = +1`` for deterministic labels."""
    return np.where(np.asarray(v) >= 0.0, 1.0, -1.0)


# ---- mean estimation on two moons ------------------------------------------


def generate_two_moons_instance(n: int, epsilon: float, seed,
                                samples_scale: int = 100,
                                noise_std: float = 0.08,
                                sample_variance: float = 40.0) -> ProblemInstance:
    """Mean-estimation task over a two-moons layout.

    Each agent sits on one of two interleaved half-circles of radius 1
    (centers offset by (1, 0.5), coordinate noise ``noise_std``) and must
    estimate the mean of its scalar distribution: N(+1, ``sample_variance``)
    on the upper moon, N(-1, ...) on the lower.  Confidences are uniform
    on the width-``epsilon`` interval centered at 1/2 and set dataset
    sizes via ``m_i = ceil(c_i * samples_scale)``.
    """
    if n < 2:
        raise InvalidInstanceError(f"need at least 2 agents, got n={n}")
    if not 0 <= epsilon <= 1:
        raise ParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    n_upper = n - n // 2
    seed_key = seed if isinstance(seed, tuple) else (seed,)
    ts_upper = np.linspace(0.0, np.pi, n_upper)
    ts_lower = np.linspace(0.0, np.pi, n // 2)

    points = np.empty((n, 2))
    targets = np.empty((n, 1))
    confidences = np.empty(n)
    features, labels = [], []
    sd = math.sqrt(sample_variance)
    for i in range(n):
        r = _rng.stream(seed_key[0], "instance", *seed_key[1:], i)
        if i < n_upper:
            t = ts_upper[i]
            base = np.array([math.cos(t), math.sin(t)])
            mean = 1.0
        else:
            t = ts_lower[i - n_upper]
            base = np.array([1.0 - math.cos(t), 0.5 - math.sin(t)])
            mean = -1.0
        points[i] = base + r.normal(0.0, noise_std, size=2)
        c = 0.5 + epsilon * (r.random() - 0.5)
        c = min(max(c, 1e-9), 1.0)
        confidences[i] = c
        m = int(math.ceil(c * samples_scale))
        samples = r.normal(mean, sd, size=(m, 1))
        features.append(samples)
        labels.append(None)
        targets[i, 0] = mean

    solitary = np.vstack([f.mean(axis=0) for f in features])
    inst = ProblemInstance(
        n=n, p=1, loss_kind="quadratic",
        features=features, labels=labels,
        confidences=confidences, solitary_models=solitary,
        target_models=targets, auxiliary_points=points,
        metadata={
            "task": "two_moons", "epsilon": float(epsilon),
            "seed": list(seed_key), "samples_scale": samples_scale,
            "noise_std": noise_std, "sample_variance": sample_variance,
        },
    )
    inst.validate()
    return inst


# ---- linear classification -------------------------------------------------


def generate_linear_classification_instance(
        n: int, p: int, seed, label_noise: float = 0.05,
        size_range: tuple = (1, 20), test_size: int = 100,
        solitary_budget: int = 500,
        confidence_floor: float = 0.01) -> ProblemInstance:
    """Linear classification with target models living in a 2-D subspace.

    Target models have the first two coordinates drawn from a standard
    normal and the rest zero.  Features are uniform in the unit L2 ball;
    labels are the sign of the target inner product, flipped with
    probability ``label_noise`` independently in train and test sets.
    Solitary models come from hinge subgradient descent on local data.
    """
    if n < 2:
        raise InvalidInstanceError(f"need at least 2 agents, got n={n}")
    if p < 2:
        raise ParameterError(f"model dimension must be >= 2, got p={p}")
    if not 0 <= label_noise < 1:
        raise ParameterError(f"label_noise must lie in [0, 1), got {label_noise}")
    lo, hi = size_range
    if not 1 <= lo <= hi:
        raise ParameterError(f"invalid size_range {size_range}")
    seed_key = seed if isinstance(seed, tuple) else (seed,)

    targets = np.zeros((n, p))
    features, labels, test_features, test_labels = [], [], [], []
    sizes = np.empty(n, dtype=np.int64)
    flips = 0
    total = 0
    for i in range(n):
        r = _rng.stream(seed_key[0], "instance", *seed_key[1:], i)
        targets[i, :2] = r.normal(size=2)
        m = int(r.integers(lo, hi + 1))
        sizes[i] = m
        X = _ball_uniform(r, m, p)
        y = _sign(X @ targets[i])
        flip = r.random(m) < label_noise
        y[flip] = -y[flip]
        flips += int(flip.sum())
        total += m
        features.append(X)
        labels.append(y)
        Xt = _ball_uniform(r, test_size, p)
        yt = _sign(Xt @ targets[i])
        flip_t = r.random(test_size) < label_noise
        yt[flip_t] = -yt[flip_t]
        test_features.append(Xt)
        test_labels.append(yt)

    solitary = np.vstack([
        train_solitary(features[i], labels[i], "hinge", p, budget=solitary_budget)
        for i in range(n)
    ])
    inst = ProblemInstance(
        n=n, p=p, loss_kind="hinge",
        features=features, labels=labels,
        confidences=confidence_from_sizes(sizes, floor=confidence_floor),
        solitary_models=solitary, target_models=targets,
        test_features=test_features, test_labels=test_labels,
        metadata={
            "task": "linear_classification", "seed": list(seed_key),
            "label_noise": label_noise, "size_range": list(size_range),
            "test_size": test_size, "train_flips": flips,
            "train_examples": total,
        },
    )
    inst.validate()
    return inst
