"""Convex pointwise losses with subgradients, plus vectorized local sums."""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ShapeError


def _check_same_shape(theta, x):
    if np.shape(theta) != np.shape(x):
        raise ShapeError(f"model shape {np.shape(theta)} != sample shape {np.shape(x)}")


class QuadraticLoss:
    """Squared distance ``l(theta; x) = ||theta - x||^2`` (no label)."""

    kind = "quadratic"

    def evaluate(self, theta, x, y=None) -> float:
        theta = np.asarray(theta, float)
        x = np.asarray(x, float)
        _check_same_shape(theta, x)
        d = theta - x
        return float(d @ d)

    def subgradient(self, theta, x, y=None) -> np.ndarray:
        theta = np.asarray(theta, float)
        x = np.asarray(x, float)
        _check_same_shape(theta, x)
        return 2.0 * (theta - x)

    def local(self, theta, X, y=None) -> float:
        """Sum of losses over the rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, float))
        if X.shape[0] == 0:
            return 0.0
        if X.shape[1] != len(theta):
            raise ShapeError(f"samples have dim {X.shape[1]}, model has dim {len(theta)}")
        d = X - np.asarray(theta, float)[None, :]
        return float(np.sum(d * d))

    def local_subgradient(self, theta, X, y=None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, float))
        theta = np.asarray(theta, float)
        if X.shape[0] == 0:
            return np.zeros_like(theta)
        return 2.0 * (X.shape[0] * theta - X.sum(axis=0))


class HingeLoss:
    """Binary hinge ``l(theta; x, y) = max(0, 1 - y <theta, x>)``, y in {-1, +1}.

    The subgradient is 0 when the hinge is inactive (margin >= 1) and
    ``-y x`` when it is active.
    """

    kind = "hinge"

    def evaluate(self, theta, x, y) -> float:
        theta = np.asarray(theta, float)
        x = np.asarray(x, float)
        _check_same_shape(theta, x)
        return float(max(0.0, 1.0 - y * float(theta @ x)))

    def subgradient(self, theta, x, y) -> np.ndarray:
        theta = np.asarray(theta, float)
        x = np.asarray(x, float)
        _check_same_shape(theta, x)
        if y * float(theta @ x) < 1.0:
            return -y * x
        return np.zeros_like(theta)

    def local(self, theta, X, y) -> float:
        X = np.atleast_2d(np.asarray(X, float))
        if X.shape[0] == 0:
            return 0.0
        margins = np.asarray(y, float) * (X @ np.asarray(theta, float))
        return float(np.sum(np.maximum(0.0, 1.0 - margins)))

    def local_subgradient(self, theta, X, y) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, float))
        theta = np.asarray(theta, float)
        if X.shape[0] == 0:
            return np.zeros_like(theta)
        yv = np.asarray(y, float)
        active = yv * (X @ theta) < 1.0
        if not np.any(active):
            return np.zeros_like(theta)
        return -(yv[active, None] * X[active]).sum(axis=0)


QUADRATIC = QuadraticLoss()
HINGE = HingeLoss()

_BY_KIND = {"quadratic": QUADRATIC, "hinge": HINGE}


def get_loss(kind: str):
    """Loss singleton for ``kind`` in {'quadratic', 'hinge'}."""
    try:
        return _BY_KIND[kind]
    except KeyError:
        raise ParameterError(f"unknown loss kind {kind!r}") from None
