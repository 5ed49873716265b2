"""Collaborative learning by decentralized ADMM with partial consensus.

Agents jointly minimize

    Q_cl(T) = sum_{i<j} W_ij ||t_i - t_j||^2 + mu * sum_i D_ii L_i(t_i)

where ``L_i`` is agent i's summed local loss.  Each agent i keeps a
primal block made of its own model and one local copy per neighbor.  For
every edge e = (i, j) four consensus variables tie the two endpoint
blocks together (two estimates of model i, two of model j), and scaled
dual variables enforce the agreement.  One iteration solves the local
augmented subproblem, averages the edge estimates, then takes a dual
ascent step; the asynchronous protocol runs it on one sampled edge, the
synchronous variant on all agents and edges at once.

State is stored flat over directed edge slots: slot ``s = (i -> j)``
holds agent i's copy of j's model along with the consensus/dual pairs
agent i keeps for that edge.  ``rev[s]`` maps to the opposite slot
``(j -> i)``, which makes the two endpoints of every edge compute their
shared estimates from identical operands, in identical order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse.linalg import splu

from .errors import (
    NumericalError,
    ParameterError,
    ProtocolViolationError,
    ShapeError,
)
from .graph import Graph
from .losses import get_loss

_WARM_MODES = ("none", "solitary", "model_propagation")


@dataclass(frozen=True)
class AdmmConfig:
    """Collaborative-learning parameters.

    ``mu`` weighs local losses against smoothness (often derived from an
    ``alpha`` in (0, 1) as ``mu = (1 - alpha) / alpha``), ``rho`` is the
    augmented-Lagrangian penalty, ``subproblem_budget`` bounds the inner
    passes used when the local subproblem has no closed form.
    """

    mu: float
    rho: float = 1.0
    subproblem_budget: int = 10
    warm_start: str = "solitary"

    def __post_init__(self):
        if not self.mu > 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")
        if not self.rho > 0:
            raise ParameterError(f"rho must be positive, got {self.rho}")
        if self.subproblem_budget < 1:
            raise ParameterError("subproblem_budget must be >= 1")
        if self.warm_start not in _WARM_MODES:
            raise ParameterError(f"warm_start must be one of {_WARM_MODES}")

    @classmethod
    def from_alpha(cls, alpha: float, **kwargs) -> "AdmmConfig":
        if not 0 < alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
        return cls(mu=(1.0 - alpha) / alpha, **kwargs)


class AdmmContext:
    """Immutable per-run data: graph layout, datasets, factorizations.

    Deliberately consumes only the datasets, the loss kind and the graph;
    targets and test sets never enter the algorithm.
    """

    def __init__(self, graph: Graph, features, labels, loss_kind: str,
                 p: int, config: AdmmConfig):
        if len(features) != graph.n:
            raise ShapeError("one dataset per agent required")
        self.graph = graph
        self.config = config
        self.loss = get_loss(loss_kind)
        self.p = int(p)
        self.rho = config.rho
        self.budget = config.subproblem_budget
        self.degrees = graph.degrees
        self.mu_deg = config.mu * graph.degrees
        adj = graph.adjacency()
        self.indptr = adj.indptr
        self.dst = adj.indices
        self.src = np.repeat(np.arange(graph.n), np.diff(adj.indptr))
        rev = np.empty(len(self.dst), dtype=np.int64)
        for s in range(len(self.dst)):
            i, j = self.src[s], self.dst[s]
            rev[s] = self.indptr[j] + graph.neighbor_position(j, i)
        self.rev = rev
        self.weights = graph.neighbor_weights

        self.features = [np.asarray(f, dtype=np.float64).reshape(-1, p)
                         for f in features]
        self.labels = [None if l is None else np.asarray(l, dtype=np.float64)
                       for l in labels]
        self.sizes = np.array([f.shape[0] for f in self.features], dtype=np.int64)
        if loss_kind == "quadratic":
            self.sumx = np.vstack([
                f.sum(axis=0) if f.shape[0] else np.zeros(p)
                for f in self.features
            ])
            self.chol = [self._factor(i) for i in range(graph.n)]
        else:
            self.xy = [lab[:, None] * f if f.shape[0] else np.zeros((0, p))
                       for f, lab in zip(self.features, self.labels)]

    def _factor(self, i: int):
        w = self.weights[i]
        d = len(w)
        rho = self.rho
        M = np.zeros((d + 1, d + 1))
        M[0, 0] = self.degrees[i] + 2.0 * self.mu_deg[i] * self.sizes[i] + rho * d
        M[0, 1:] = -w
        M[1:, 0] = -w
        M[np.arange(1, d + 1), np.arange(1, d + 1)] = w + rho
        return cho_factor(M)

    def slot(self, i: int, j: int) -> int:
        """Directed slot index of ``(i -> j)``."""
        return int(self.indptr[i]) + self.graph.neighbor_position(i, j)

    def block(self, i: int) -> slice:
        return slice(int(self.indptr[i]), int(self.indptr[i + 1]))


class AdmmState:
    """Mutable network state over directed edge slots (see module doc)."""

    __slots__ = ("own", "copies", "z_own", "z_nbr", "lam_own", "lam_nbr", "t")

    def __init__(self, n: int, slots: int, p: int):
        self.own = np.zeros((n, p))
        self.copies = np.zeros((slots, p))
        self.z_own = np.zeros((slots, p))
        self.z_nbr = np.zeros((slots, p))
        self.lam_own = np.zeros((slots, p))
        self.lam_nbr = np.zeros((slots, p))
        self.t = 0

    def clone(self) -> "AdmmState":
        other = AdmmState(self.own.shape[0], self.copies.shape[0], self.own.shape[1])
        other.own = self.own.copy()
        other.copies = self.copies.copy()
        other.z_own = self.z_own.copy()
        other.z_nbr = self.z_nbr.copy()
        other.lam_own = self.lam_own.copy()
        other.lam_nbr = self.lam_nbr.copy()
        other.t = self.t
        return other

    def max_estimate_disagreement(self, ctx: AdmmContext) -> float:
        """Largest gap between the two endpoint copies of any edge estimate."""
        d1 = np.abs(self.z_own - self.z_nbr[ctx.rev]).max() if len(ctx.rev) else 0.0
        return float(d1)

    def copy_disagreement(self, ctx: AdmmContext) -> float:
        """Largest L2 gap between a neighbor copy and the owner's model."""
        diff = self.copies - self.own[ctx.dst]
        return float(np.linalg.norm(diff, axis=1).max()) if len(diff) else 0.0


def warm_start(ctx: AdmmContext, mode: str, solitary_models=None,
               mp_solution=None) -> AdmmState:
    """Fresh state: zeros, solitary models, or a propagated solution."""
    if mode not in _WARM_MODES:
        raise ParameterError(f"warm_start must be one of {_WARM_MODES}")
    state = AdmmState(ctx.graph.n, len(ctx.dst), ctx.p)
    if mode == "none":
        return state
    base = solitary_models if mode == "solitary" else mp_solution
    if base is None:
        raise ParameterError(f"warm start {mode!r} needs its model matrix")
    base = np.asarray(base, dtype=np.float64)
    if base.shape != (ctx.graph.n, ctx.p):
        raise ShapeError(f"warm-start models must be ({ctx.graph.n}, {ctx.p})")
    state.own[:] = base
    state.copies[:] = base[ctx.dst]
    state.z_own[:] = base[ctx.src]
    state.z_nbr[:] = base[ctx.dst]
    return state


# ---- objective -------------------------------------------------------------


def objective_qcl(graph: Graph, theta, instance, mu: float) -> float:
    """Collaborative objective: smoothness plus mu-weighted local losses."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (graph.n, instance.p):
        raise ShapeError(f"models must be ({graph.n}, {instance.p})")
    ei, ej, w = graph.edge_arrays()
    diff = theta[ei] - theta[ej]
    smooth = float(np.sum(w * np.sum(diff * diff, axis=1)))
    loss = instance.loss()
    local = sum(
        float(graph.degrees[i]) * loss.local(theta[i], instance.features[i],
                                             instance.labels[i])
        for i in range(graph.n)
    )
    return smooth + mu * local


def _lrho_block(ctx: AdmmContext, i: int, u, V, zo, zn, lo, ln) -> float:
    """Augmented local objective of agent i at primal block ``(u, V)``."""
    w = ctx.weights[i]
    du = u - V
    smooth = 0.5 * float(w @ np.sum(du * du, axis=1))
    local = ctx.mu_deg[i] * ctx.loss.local(u, ctx.features[i], ctx.labels[i])
    eu = u - zo
    ev = V - zn
    lag = float((lo * eu).sum() + (ln * ev).sum())
    pen = 0.5 * ctx.rho * float((eu * eu).sum() + (ev * ev).sum())
    return smooth + local + lag + pen


# ---- the three update steps -------------------------------------------------


def local_primal_update(ctx: AdmmContext, state: AdmmState, i: int):
    """Minimize agent i's augmented subproblem over its primal block.

    Quadratic losses solve the block's linear stationarity system exactly
    (one Cholesky solve per model coordinate).  Hinge losses run
    ``subproblem_budget`` passes that linearize the hinge at the current
    point and solve the remaining quadratic exactly; the result is kept
    only if it does not increase the augmented objective.

    Returns ``(u, V)`` without touching ``state``.
    """
    sl = ctx.block(i)
    zo, zn = state.z_own[sl], state.z_nbr[sl]
    lo, ln = state.lam_own[sl], state.lam_nbr[sl]
    rho = ctx.rho
    if ctx.loss.kind == "quadratic":
        d = len(ctx.weights[i])
        rhs = np.empty((d + 1, ctx.p))
        rhs[0] = 2.0 * ctx.mu_deg[i] * ctx.sumx[i] - lo.sum(axis=0) + rho * zo.sum(axis=0)
        rhs[1:] = rho * zn - ln
        sol = cho_solve(ctx.chol[i], rhs)
        return sol[0], sol[1:]

    w = ctx.weights[i]
    u = state.own[i].copy()
    V = state.copies[sl].copy()
    f_start = _lrho_block(ctx, i, u, V, zo, zn, lo, ln)
    base = rho * zo.sum(axis=0) - lo.sum(axis=0)
    kappa = ctx.degrees[i] + rho * len(w)
    muD = ctx.mu_deg[i]
    Xy = ctx.xy[i]
    v_den = (w + rho)[:, None]
    for _ in range(ctx.budget):
        if Xy.shape[0]:
            active = (Xy @ u) < 1.0
            gh = -Xy[active].sum(axis=0) if active.any() else 0.0
        else:
            gh = 0.0
        u = (w @ V + base - muD * gh) / kappa
        V = (w[:, None] * u + rho * zn - ln) / v_den
    f_end = _lrho_block(ctx, i, u, V, zo, zn, lo, ln)
    if f_end > f_start:  # never hand back a worse block
        return state.own[i].copy(), state.copies[sl].copy()
    return u, V


def consensus_estimate(lam_owner, lam_other, theta_owner, theta_other,
                       rho: float):
    """Edge-shared estimate of one model from both endpoints' views.

    ``owner`` refers to the agent whose model is being estimated; the
    other endpoint contributes its local copy and matching dual.  Both
    endpoints call this with identical operands in identical order, so
    their stored estimates agree bit for bit.
    """
    return 0.5 * ((lam_owner + lam_other) / rho + theta_owner + theta_other)


def async_admm_step(ctx: AdmmContext, state: AdmmState, i: int, j: int) -> int:
    """One edge event: both endpoints re-solve locally, exchange, agree.

    Only the primal blocks of ``i`` and ``j`` and the variables of edge
    ``(i, j)`` change.  Returns the communication cost (2 messages).
    """
    g = ctx.graph
    nbrs = g.neighbor_lists[i]
    pos = int(np.searchsorted(nbrs, j))
    if i == j or pos == len(nbrs) or nbrs[pos] != j:
        raise ProtocolViolationError(f"agents {i} and {j} are not neighbors")
    s_ij = int(ctx.indptr[i]) + pos
    s_ji = ctx.slot(j, i)
    rho = ctx.rho

    ui, Vi = local_primal_update(ctx, state, i)
    uj, Vj = local_primal_update(ctx, state, j)
    state.own[i] = ui
    state.copies[ctx.block(i)] = Vi
    state.own[j] = uj
    state.copies[ctx.block(j)] = Vj

    z_i = consensus_estimate(state.lam_own[s_ij], state.lam_nbr[s_ji],
                             state.own[i], state.copies[s_ji], rho)
    z_j = consensus_estimate(state.lam_own[s_ji], state.lam_nbr[s_ij],
                             state.own[j], state.copies[s_ij], rho)
    state.z_own[s_ij] = z_i
    state.z_nbr[s_ji] = z_i
    state.z_own[s_ji] = z_j
    state.z_nbr[s_ij] = z_j

    for s, a in ((s_ij, i), (s_ji, j)):
        state.lam_own[s] += rho * (state.own[a] - state.z_own[s])
        state.lam_nbr[s] += rho * (state.copies[s] - state.z_nbr[s])
    state.t += 1
    return 2


def sync_admm_round(ctx: AdmmContext, state: AdmmState) -> int:
    """One synchronous round over all agents and all edges.

    Every agent solves its subproblem, every edge refreshes its shared
    estimates, every dual takes its ascent step.  Returns the round's
    communication cost ``2 |E|``.
    """
    updates = [local_primal_update(ctx, state, i) for i in range(ctx.graph.n)]
    for i, (u, V) in enumerate(updates):
        state.own[i] = u
        state.copies[ctx.block(i)] = V
    rho = ctx.rho
    z = consensus_estimate(state.lam_own, state.lam_nbr[ctx.rev],
                           state.own[ctx.src], state.copies[ctx.rev], rho)
    state.z_own[:] = z
    state.z_nbr[:] = z[ctx.rev]
    state.lam_own += rho * (state.own[ctx.src] - state.z_own)
    state.lam_nbr += rho * (state.copies - state.z_nbr)
    state.t += 1
    return 2 * ctx.graph.num_edges


# ---- centralized reference --------------------------------------------------


@dataclass
class OracleResult:
    theta: np.ndarray
    value: float
    converged: bool
    diagnostic: float


def centralized_oracle(instance, graph: Graph, mu: float,
                       budget: int = 5000, tol: float = 1e-4,
                       eval_every: int = 5) -> OracleResult:
    """Centralized minimizer of the collaborative objective.

    Quadratic losses admit an exact sparse solve of the stationarity
    system.  Hinge losses fall back to long-horizon normalized
    subgradient descent; the returned value is then an upper bound on
    the optimum, with ``converged`` reporting whether the trailing
    relative improvement fell below ``tol``.
    """
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    n, p = graph.n, instance.p
    if instance.loss_kind == "quadratic":
        L = sp.diags(graph.degrees) - graph.adjacency()
        sizes = instance.sizes().astype(np.float64)
        sumx = np.vstack([
            f.sum(axis=0) if f.shape[0] else np.zeros(p)
            for f in instance.features
        ])
        A = (L + mu * sp.diags(graph.degrees * sizes)).tocsc()
        rhs = mu * graph.degrees[:, None] * sumx
        theta = splu(A).solve(rhs)
        resid = float(np.abs(A @ theta - rhs).max())
        if resid > 1e-8 * max(1.0, float(np.abs(rhs).max())):
            raise NumericalError(f"oracle solve residual {resid:.3e}")
        value = objective_qcl(graph, theta, instance, mu)
        return OracleResult(theta=theta, value=value, converged=True,
                            diagnostic=resid)

    loss = instance.loss()
    L = sp.diags(graph.degrees) - graph.adjacency()
    theta = np.asarray(instance.solitary_models, dtype=np.float64).copy()
    best = theta.copy()
    best_val = objective_qcl(graph, theta, instance, mu)
    mark = max(1, int(0.8 * budget))
    best_at_mark = best_val
    for t in range(1, budget + 1):
        g = 2.0 * (L @ theta)
        for i in range(n):
            g[i] += mu * graph.degrees[i] * loss.local_subgradient(
                theta[i], instance.features[i], instance.labels[i])
        gn = float(np.linalg.norm(g))
        if gn == 0.0:
            break
        theta = theta - g / (gn * np.sqrt(t))
        if t % eval_every == 0 or t == budget:
            val = objective_qcl(graph, theta, instance, mu)
            if val < best_val:
                best_val = val
                best = theta.copy()
        if t == mark:
            best_at_mark = best_val
    diag = (best_at_mark - best_val) / max(1.0, abs(best_val))
    return OracleResult(theta=best, value=best_val,
                        converged=bool(diag <= tol), diagnostic=float(diag))
