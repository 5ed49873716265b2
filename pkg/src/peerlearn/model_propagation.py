"""Model propagation: smoothing pre-trained models over a similarity graph.

The smoothed models trade graph smoothness against staying close to each
agent's solitary model, with per-agent confidences scaling the anchor
term.  The trade-off is parameterized by ``alpha`` in (0, 1); writing
``abar = 1 - alpha`` and ``mu = abar / alpha``, the objective is

    Q_mp(T) = 1/2 ( sum_{i<j} W_ij ||t_i - t_j||^2
                    + mu * sum_i D_ii c_i ||t_i - t_i_loc||^2 )

whose unique minimizer has the closed form

    T* = abar * (I - abar (I - C) - alpha P)^-1 C T_loc,   P = D^-1 W.

Both a synchronous fixed-point iteration and an asynchronous pairwise
gossip protocol converge to ``T*`` (the latter in expectation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import (
    NumericalError,
    ParameterError,
    ProtocolViolationError,
    ShapeError,
)
from .graph import Graph, stochastic_matrix

_INIT_MODES = ("zeros", "solitary")


@dataclass(frozen=True)
class MpConfig:
    """Propagation parameters.

    ``alpha`` in (0, 1) weighs smoothing against the confidence-scaled
    anchor to the solitary models.  ``neighbor_init`` controls what an
    agent assumes about a neighbor's model before their first exchange
    in the asynchronous protocol ('zeros' or 'solitary').
    """

    alpha: float
    neighbor_init: str = "zeros"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.neighbor_init not in _INIT_MODES:
            raise ParameterError(f"neighbor_init must be one of {_INIT_MODES}")

    @property
    def mu(self) -> float:
        return (1.0 - self.alpha) / self.alpha


def _check_inputs(graph: Graph, theta, theta_loc, c):
    n = graph.n
    theta_loc = np.asarray(theta_loc, dtype=np.float64)
    if theta_loc.ndim != 2 or theta_loc.shape[0] != n:
        raise ShapeError(f"solitary models must be (n, p) with n={n}")
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (n,):
        raise ShapeError(f"confidences must have shape ({n},)")
    if np.any(c <= 0) or np.any(c > 1):
        raise ParameterError("confidences must lie in (0, 1]")
    if theta is not None:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != theta_loc.shape:
            raise ShapeError("current and solitary models must have equal shapes")
    return theta, theta_loc, c


def objective_qmp(graph: Graph, theta, theta_loc, c, config: MpConfig) -> float:
    """Value of the propagation objective at ``theta``."""
    theta, theta_loc, c = _check_inputs(graph, theta, theta_loc, c)
    ei, ej, w = graph.edge_arrays()
    diff = theta[ei] - theta[ej]
    smooth = float(np.sum(w * np.sum(diff * diff, axis=1)))
    anc = theta - theta_loc
    anchor = float(np.sum(graph.degrees * c * np.sum(anc * anc, axis=1)))
    return 0.5 * (smooth + config.mu * anchor)


def solve_closed_form(graph: Graph, theta_loc, c, config: MpConfig,
                      residual_tol: float = 1e-9) -> np.ndarray:
    """Exact minimizer of the propagation objective via one sparse solve."""
    _, theta_loc, c = _check_inputs(graph, None, theta_loc, c)
    alpha = config.alpha
    abar = 1.0 - alpha
    P = stochastic_matrix(graph)
    A = sp.diags(alpha + abar * c) - alpha * P
    rhs = abar * c[:, None] * theta_loc
    theta = splu(A.tocsc()).solve(rhs)
    residual = np.linalg.norm(A @ theta - rhs, axis=1)
    worst = float(residual.max()) if residual.size else 0.0
    if worst > residual_tol:
        raise NumericalError(
            f"closed-form solve residual {worst:.3e} exceeds {residual_tol:.1e}")
    return theta


def sync_step(graph: Graph, theta, theta_loc, c, config: MpConfig,
              P: sp.csr_matrix | None = None) -> np.ndarray:
    """One synchronous round: every agent averages neighbors and re-anchors.

    Per agent: ``t_i <- (alpha * sum_j (W_ij / D_ii) t_j
    + abar * c_i * t_i_loc) / (alpha + abar * c_i)``.
    """
    theta, theta_loc, c = _check_inputs(graph, theta, theta_loc, c)
    if P is None:
        P = stochastic_matrix(graph)
    alpha = config.alpha
    abar = 1.0 - alpha
    num = alpha * (P @ theta) + abar * c[:, None] * theta_loc
    return num / (alpha + abar * c)[:, None]


def iterate_sync(graph: Graph, theta_loc, c, config: MpConfig,
                 theta0=None, tol: float = 1e-10,
                 max_rounds: int = 200_000) -> tuple:
    """Run synchronous rounds until the relative update falls below ``tol``.

    Returns ``(theta, rounds)``.
    """
    _, theta_loc, c = _check_inputs(graph, None, theta_loc, c)
    theta = (np.array(theta0, dtype=np.float64, copy=True)
             if theta0 is not None else theta_loc.copy())
    P = stochastic_matrix(graph)
    for it in range(1, max_rounds + 1):
        new = sync_step(graph, theta, theta_loc, c, config, P=P)
        delta = np.max(np.abs(new - theta))
        scale = max(1.0, float(np.max(np.abs(new))))
        theta = new
        if delta <= tol * scale:
            return theta, it
    return theta, max_rounds


class MpState:
    """Mutable knowledge of the asynchronous gossip protocol.

    ``models[i]`` is agent i's own current model; ``neighbor_models[i]``
    stores the last model received from each neighbor (aligned with the
    graph's sorted neighbor lists) and ``last_exchange[i]`` the step at
    which it arrived (-1 before the first contact).
    """

    __slots__ = ("graph", "config", "models", "neighbor_models",
                 "last_exchange", "t", "_prows", "_anchor", "_inv_denom")

    def __init__(self, graph: Graph, theta_loc, c, config: MpConfig):
        _, theta_loc, c = _check_inputs(graph, None, theta_loc, c)
        self.graph = graph
        self.config = config
        n, p = theta_loc.shape
        self.models = theta_loc.copy()
        if config.neighbor_init == "zeros":
            self.neighbor_models = [np.zeros((len(nb), p))
                                    for nb in graph.neighbor_lists]
        else:
            self.neighbor_models = [theta_loc[nb].copy()
                                    for nb in graph.neighbor_lists]
        self.last_exchange = [np.full(len(nb), -1, dtype=np.int64)
                              for nb in graph.neighbor_lists]
        self.t = 0
        alpha = config.alpha
        abar = 1.0 - alpha
        self._prows = [w / d for w, d in zip(graph.neighbor_weights, graph.degrees)]
        self._anchor = abar * c[:, None] * theta_loc
        self._inv_denom = 1.0 / (alpha + abar * c)

    def clone(self) -> "MpState":
        other = MpState.__new__(MpState)
        other.graph = self.graph
        other.config = self.config
        other.models = self.models.copy()
        other.neighbor_models = [a.copy() for a in self.neighbor_models]
        other.last_exchange = [a.copy() for a in self.last_exchange]
        other.t = self.t
        other._prows = self._prows
        other._anchor = self._anchor
        other._inv_denom = self._inv_denom
        return other


def init_state(graph: Graph, theta_loc, c, config: MpConfig) -> MpState:
    """Fresh asynchronous state: own models start at the solitary models."""
    return MpState(graph, theta_loc, c, config)


def async_step(state: MpState, i: int, j: int) -> int:
    """One pairwise gossip event between neighbors ``i`` and ``j``.

    The two agents swap current models, then each recomputes its own
    model from its (partially stale) neighbor knowledge.  Only state
    belonging to ``i`` and ``j`` changes.  Returns the communication
    cost of the event (2 messages).
    """
    g = state.graph
    nbrs_i = g.neighbor_lists[i]
    pos_ij = int(np.searchsorted(nbrs_i, j))
    if i == j or pos_ij == len(nbrs_i) or nbrs_i[pos_ij] != j:
        raise ProtocolViolationError(f"agents {i} and {j} are not neighbors")
    pos_ji = int(np.searchsorted(g.neighbor_lists[j], i))

    state.t += 1
    alpha = state.config.alpha
    state.neighbor_models[i][pos_ij] = state.models[j]
    state.neighbor_models[j][pos_ji] = state.models[i]
    state.last_exchange[i][pos_ij] = state.t
    state.last_exchange[j][pos_ji] = state.t
    for l in (i, j):
        blend = alpha * (state._prows[l] @ state.neighbor_models[l])
        state.models[l] = (blend + state._anchor[l]) * state._inv_denom[l]
    return 2
