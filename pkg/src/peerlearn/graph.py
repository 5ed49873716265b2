"""Weighted undirected similarity graphs and neighbor-selection distributions.

The graph is the communication substrate for every protocol in this
package.  Symmetric positive weights, no self-loops, strictly positive
degrees and a single connected component are all enforced at construction
time so downstream code can rely on them unconditionally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    ConnectivityError,
    InvalidInstanceError,
    NumericalError,
    ParameterError,
)


class Graph:
    """Validated weighted graph over agents ``0 .. n-1``.

    Parameters
    ----------
    n
        Number of agents (>= 2).
    edges
        Either a mapping ``{(i, j): w}`` or an iterable of ``(i, j, w)``
        triples.  Each undirected edge appears once; orientation does not
        matter.

    Attributes
    ----------
    degrees
        ``degrees[i] = sum_j W_ij``.
    neighbor_lists
        Sorted integer array of neighbors per agent.
    neighbor_weights
        Weights aligned with ``neighbor_lists``.
    """

    def __init__(self, n: int, edges):
        if hasattr(edges, "items"):
            triples = [(i, j, w) for (i, j), w in edges.items()]
        else:
            triples = [(i, j, w) for i, j, w in edges]
        if triples:
            ei = np.array([t[0] for t in triples], dtype=np.int64)
            ej = np.array([t[1] for t in triples], dtype=np.int64)
            ew = np.array([t[2] for t in triples], dtype=np.float64)
        else:
            ei = np.empty(0, dtype=np.int64)
            ej = np.empty(0, dtype=np.int64)
            ew = np.empty(0, dtype=np.float64)
        lo, hi = np.minimum(ei, ej), np.maximum(ei, ej)
        self._init_from_arrays(int(n), lo, hi, ew, check_unique=True)

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edge_arrays(cls, n: int, ei, ej, w) -> "Graph":
        """Build from parallel arrays of endpoints and weights.

        Faster path used by the builders; the same validation runs.
        """
        g = cls.__new__(cls)
        ei = np.asarray(ei, dtype=np.int64)
        ej = np.asarray(ej, dtype=np.int64)
        w = np.asarray(w, dtype=np.float64)
        g._init_from_arrays(int(n), np.minimum(ei, ej), np.maximum(ei, ej), w,
                            check_unique=False)
        return g

    def _init_from_arrays(self, n, lo, hi, w, check_unique):
        if n < 2:
            raise ParameterError(f"a graph needs at least 2 agents, got n={n}")
        if lo.size:
            if lo.min() < 0 or hi.max() >= n:
                raise ParameterError("edge endpoint out of range")
            if np.any(lo == hi):
                raise ParameterError("self-loops are not allowed")
            if np.any(w <= 0) or not np.all(np.isfinite(w)):
                raise ParameterError("edge weights must be positive and finite")
            if check_unique:
                pair_ids = lo * n + hi
                uniq, counts = np.unique(pair_ids, return_counts=True)
                if np.any(counts > 1):
                    raise ParameterError("duplicate edge in input")
        self.n = n
        self._ei, self._ej, self._ew = lo, hi, w

        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        vals = np.concatenate([w, w])
        adj = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        adj.sort_indices()
        self._adj = adj
        self.degrees = np.asarray(adj.sum(axis=1)).ravel()

        indptr, indices = adj.indptr, adj.indices
        self.neighbor_lists = [indices[indptr[i]:indptr[i + 1]] for i in range(n)]
        self.neighbor_weights = [adj.data[indptr[i]:indptr[i + 1]] for i in range(n)]
        self._validate_connected()

    def _validate_connected(self):
        ncomp, labels = connected_components(self._adj, directed=False)
        if ncomp > 1:
            sizes = np.bincount(labels)
            smallest = int(np.argmin(sizes))
            members = np.flatnonzero(labels == smallest)
            raise ConnectivityError(
                f"graph has {ncomp} connected components; "
                f"isolated component: {members.tolist()}",
                component=members.tolist(),
            )
        # connectivity with n >= 2 implies every degree is positive
        if np.any(self.degrees <= 0):  # pragma: no cover - defensive
            raise ConnectivityError("agent with zero degree")

    # -- views ------------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self._ei.size)

    @property
    def edges(self) -> dict:
        """``{(i, j): w}`` with ``i < j``.  Built lazily."""
        if not hasattr(self, "_edge_dict"):
            self._edge_dict = {
                (int(i), int(j)): float(w)
                for i, j, w in zip(self._ei, self._ej, self._ew)
            }
        return self._edge_dict

    def edge_arrays(self):
        """``(ei, ej, w)`` with ``ei < ej``, one row per undirected edge."""
        return self._ei, self._ej, self._ew

    def adjacency(self) -> sp.csr_matrix:
        return self._adj

    def neighbors(self, i: int) -> np.ndarray:
        return self.neighbor_lists[i]

    def weight(self, i: int, j: int) -> float:
        nbrs = self.neighbor_lists[i]
        pos = np.searchsorted(nbrs, j)
        if pos == len(nbrs) or nbrs[pos] != j:
            return 0.0
        return float(self.neighbor_weights[i][pos])

    def neighbor_position(self, i: int, j: int) -> int:
        """Index of ``j`` inside ``neighbor_lists[i]``; raises if absent."""
        nbrs = self.neighbor_lists[i]
        pos = int(np.searchsorted(nbrs, j))
        if pos == len(nbrs) or nbrs[pos] != j:
            raise ParameterError(f"agents {i} and {j} are not neighbors")
        return pos


# ---- builders -----------------------------------------------------------


def build_gaussian_kernel_graph(points, sigma: float) -> Graph:
    """Complete graph with Gaussian kernel weights on point coordinates.

    ``W_ij = exp(-||v_i - v_j||^2 / (2 sigma^2))``.  Pairs whose kernel
    value underflows to zero are omitted (they carry no weight anyway).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if n < 2:
        raise InvalidInstanceError(f"need at least 2 points, got {n}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    sq = np.sum(pts ** 2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T)
    np.maximum(d2, 0.0, out=d2)
    iu, ju = np.triu_indices(n, 1)
    w = np.exp(-d2[iu, ju] / (2.0 * sigma * sigma))
    keep = w > 0.0
    return Graph.from_edge_arrays(n, iu[keep], ju[keep], w[keep])


def build_angle_kernel_graph(target_models, sigma: float,
                             prune_threshold: float = 1e-4) -> Graph:
    """Graph weighted by the angle between model vectors.

    ``W_ij = exp((cos phi_ij - 1) / sigma)`` where ``phi_ij`` is the angle
    between the two models.  Edges with weight below ``prune_threshold``
    are dropped; if pruning disconnects the graph a ``ConnectivityError``
    names an isolated component.
    """
    models = np.asarray(target_models, dtype=np.float64)
    if models.ndim == 1:
        models = models[:, None]
    n = models.shape[0]
    if n < 2:
        raise InvalidInstanceError(f"need at least 2 models, got {n}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if prune_threshold < 0:
        raise ParameterError("prune_threshold must be nonnegative")
    norms = np.linalg.norm(models, axis=1)
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0])
        raise ParameterError(f"agent {bad} has a zero-norm model; angle undefined")
    unit = models / norms[:, None]
    cos = np.clip(unit @ unit.T, -1.0, 1.0)
    iu, ju = np.triu_indices(n, 1)
    w = np.exp((cos[iu, ju] - 1.0) / sigma)
    keep = (w >= prune_threshold) & (w > 0.0)
    return Graph.from_edge_arrays(n, iu[keep], ju[keep], w[keep])


def build_knn_graph(target_models, k: int) -> Graph:
    """Binary graph linking each agent to its ``k`` most angle-similar peers.

    Directed selections are union-symmetrized, so degrees range from ``k``
    to ``2k``-ish.  Ties in similarity are broken toward the lower agent
    index.  All retained edges have weight 1.
    """
    models = np.asarray(target_models, dtype=np.float64)
    if models.ndim == 1:
        models = models[:, None]
    n = models.shape[0]
    if n < 2:
        raise InvalidInstanceError(f"need at least 2 models, got {n}")
    if not 1 <= k < n:
        raise ParameterError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    norms = np.linalg.norm(models, axis=1)
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0])
        raise ParameterError(f"agent {bad} has a zero-norm model; angle undefined")
    unit = models / norms[:, None]
    cos = np.clip(unit @ unit.T, -1.0, 1.0)
    pairs = set()
    idx = np.arange(n)
    for i in range(n):
        # sort by similarity descending, ties toward the lower index
        order = np.lexsort((idx, -cos[i]))
        order = order[order != i][:k]
        for j in order:
            pairs.add((min(i, int(j)), max(i, int(j))))
    ei = np.array([a for a, _ in sorted(pairs)], dtype=np.int64)
    ej = np.array([b for _, b in sorted(pairs)], dtype=np.int64)
    return Graph.from_edge_arrays(n, ei, ej, np.ones(len(pairs)))


# ---- derived operators ----------------------------------------------------


def stochastic_matrix(graph: Graph) -> sp.csr_matrix:
    """Row-stochastic transition matrix ``P = D^-1 W`` as sparse CSR."""
    n = graph.n
    indptr = graph.adjacency().indptr
    vals = graph.adjacency().data / np.repeat(graph.degrees, np.diff(indptr))
    P = sp.csr_matrix((vals, graph.adjacency().indices, indptr), shape=(n, n))
    rs = np.asarray(P.sum(axis=1)).ravel()
    if np.max(np.abs(rs - 1.0)) > 1e-12:
        raise NumericalError("row sums of the stochastic matrix drifted from 1")
    return P


@dataclass
class NeighborDistribution:
    """Per-agent selection probabilities supported exactly on the neighbors."""

    n: int
    neighbors: list
    probs: list
    _cums: list = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.neighbors) != self.n or len(self.probs) != self.n:
            raise ParameterError("one neighbor list and one probability vector per agent")
        self._cums = []
        for i, (nbrs, pr) in enumerate(zip(self.neighbors, self.probs)):
            pr = np.asarray(pr, dtype=np.float64)
            if len(pr) != len(nbrs):
                raise ParameterError(f"agent {i}: probabilities misaligned with neighbors")
            if np.any(pr <= 0):
                raise ParameterError(f"agent {i}: probabilities must be positive on all neighbors")
            if abs(pr.sum() - 1.0) > 1e-12:
                raise ParameterError(f"agent {i}: probabilities sum to {pr.sum()!r}, not 1")
            self.probs[i] = pr
            self._cums.append(np.cumsum(pr))

    def pi(self, i: int) -> np.ndarray:
        """Dense probability vector of agent ``i`` over all agents."""
        out = np.zeros(self.n)
        out[self.neighbors[i]] = self.probs[i]
        return out

    def pick(self, i: int, u: float) -> int:
        """Map a uniform draw ``u`` in [0, 1) to one of agent i's neighbors."""
        cums = self._cums[i]
        idx = int(np.searchsorted(cums, u, side="right"))
        if idx >= len(cums):
            idx = len(cums) - 1
        return int(self.neighbors[i][idx])


def uniform_neighbor_distribution(graph: Graph) -> NeighborDistribution:
    """Uniform selection over each agent's neighbor list."""
    probs = [np.full(len(nbrs), 1.0 / len(nbrs)) for nbrs in graph.neighbor_lists]
    return NeighborDistribution(graph.n, list(graph.neighbor_lists), probs)


def similarity_neighbor_distribution(graph: Graph) -> NeighborDistribution:
    """Selection proportional to edge weight: pi_i^j = W_ij / D_ii.

    Concentrates exchanges on the pairs that dominate each agent's
    blended update, which sharply reduces the staleness left in rarely
    refreshed low-weight knowledge slots on dense skewed graphs.
    """
    probs = [w / w.sum() for w in graph.neighbor_weights]
    return NeighborDistribution(graph.n, list(graph.neighbor_lists), probs)


def sample_neighbor(dist: NeighborDistribution, agent: int,
                    rng: np.random.Generator) -> int:
    """Draw one neighbor of ``agent`` according to ``dist``."""
    return dist.pick(agent, rng.random())


# ---- edge-list text format -------------------------------------------------


def read_edge_list(path) -> Graph:
    """Load a graph from a text file with one ``i j w`` triple per line.

    Indices are 0-based.  Lines starting with ``#`` and blank lines are
    skipped.  The symmetric closure is applied on load; giving both
    orientations with conflicting weights is an error.
    """
    seen = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParameterError(f"{path}:{lineno}: expected 'i j w', got {line!r}")
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            if i == j:
                raise ParameterError(f"{path}:{lineno}: self-loop on agent {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                if abs(seen[key] - w) > 1e-12 * max(1.0, abs(w)):
                    raise ParameterError(
                        f"{path}:{lineno}: conflicting weights for edge {key}")
                continue
            seen[key] = w
    if not seen:
        raise ParameterError(f"{path}: no edges found")
    n = max(max(i, j) for i, j in seen) + 1
    return Graph(n, {k: v for k, v in seen.items()})


def write_edge_list(graph: Graph, path) -> None:
    """Write one ``i j w`` line per undirected edge (0-based indices)."""
    ei, ej, ew = graph.edge_arrays()
    with open(path, "w") as fh:
        for i, j, w in zip(ei, ej, ew):
            fh.write(f"{int(i)} {int(j)} {float(w)!r}\n")
