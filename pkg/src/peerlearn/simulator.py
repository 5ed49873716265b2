"""Event loops that drive the learning protocols over a network.

The asynchronous loop models a global clock: at every tick one agent
wakes uniformly at random, draws one neighbor from its communication
distribution, and the pair performs a protocol step.  The synchronous
loop runs whole rounds in which every agent and every edge acts once.
Both loops account communication identically — two messages per
pairwise exchange — and sample user-supplied metrics as they go, so
methods can be compared at equal communication budgets.

Engines adapt a protocol to the loops: an async engine exposes
``step(i, j) -> messages`` and a sync engine ``round() -> messages``;
both expose ``models()``.  The activation schedule is drawn from the
dedicated schedule stream before the loop starts, which keeps it
independent of how often metrics are sampled or when a run stops early.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import model_propagation as mp
from .admm import AdmmContext, AdmmState, async_admm_step, sync_admm_round
from .errors import ParameterError
from .graph import Graph, NeighborDistribution, uniform_neighbor_distribution
from .rng import stream

Row = tuple[int, int, str, float]


@dataclass
class RunRecord:
    """Outcome of one simulated run."""

    steps: int
    comms: int
    models: np.ndarray
    rows: list[Row] = field(default_factory=list)
    stopped_early: bool = False


# ---- engines ----------------------------------------------------------------


class MpAsyncEngine:
    """Gossip model propagation: pairwise exchanges of current models."""

    def __init__(self, graph: Graph, theta_loc, confidences, config: mp.MpConfig):
        self.state = mp.init_state(graph, theta_loc, confidences, config)
        self._graph = graph

    def step(self, i: int, j: int) -> int:
        return mp.async_step(self.state, i, j)

    def models(self) -> np.ndarray:
        return self.state.models


class MpSyncEngine:
    """Round-based model propagation: every agent refreshes each round."""

    def __init__(self, graph: Graph, theta_loc, confidences, config: mp.MpConfig):
        self._graph = graph
        self._theta_loc = np.asarray(theta_loc, dtype=np.float64)
        self._c = np.asarray(confidences, dtype=np.float64)
        self._config = config
        self._P = mp.stochastic_matrix(graph)
        self._theta = self._theta_loc.copy()

    def round(self) -> int:
        self._theta = mp.sync_step(self._graph, self._theta, self._theta_loc,
                                   self._c, self._config, P=self._P)
        return 2 * self._graph.num_edges

    def models(self) -> np.ndarray:
        return self._theta


class AdmmAsyncEngine:
    """Collaborative learning driven by sampled edge events."""

    def __init__(self, ctx: AdmmContext, state: AdmmState):
        self.ctx = ctx
        self.state = state

    def step(self, i: int, j: int) -> int:
        return async_admm_step(self.ctx, self.state, i, j)

    def models(self) -> np.ndarray:
        return self.state.own


class AdmmSyncEngine:
    """Collaborative learning driven by full rounds."""

    def __init__(self, ctx: AdmmContext, state: AdmmState):
        self.ctx = ctx
        self.state = state

    def round(self) -> int:
        return sync_admm_round(self.ctx, self.state)

    def models(self) -> np.ndarray:
        return self.state.own


# ---- loops ------------------------------------------------------------------

Metrics = Optional[dict[str, Callable[[np.ndarray], float]]]
StopWhen = Optional[Callable[[dict[str, float]], bool]]


def _sample(rows: list[Row], metrics: Metrics, step: int, comms: int,
            models: np.ndarray) -> dict[str, float]:
    values: dict[str, float] = {}
    if metrics:
        for name, fn in metrics.items():
            v = float(fn(models))
            values[name] = v
            rows.append((step, comms, name, v))
    return values


def run_async(engine, graph: Graph, steps: int, seed,
              dist: Optional[NeighborDistribution] = None,
              metrics: Metrics = None, sample_every: Optional[int] = None,
              stop_when: StopWhen = None) -> RunRecord:
    """Drive ``engine`` for up to ``steps`` uniform agent activations.

    ``seed`` is an int or tuple key for the schedule stream.  Metrics are
    sampled before the first activation, every ``sample_every`` steps,
    and after the last one; ``stop_when`` sees each sample's values and
    may end the run early.
    """
    if steps < 0:
        raise ParameterError("steps must be non-negative")
    if stop_when is not None and not metrics:
        raise ParameterError("stop_when requires metrics")
    if dist is None:
        dist = uniform_neighbor_distribution(graph)
    key = seed if isinstance(seed, tuple) else (seed,)
    rng = stream(key[0], "schedule", *key[1:])
    agents = rng.integers(0, graph.n, size=steps)
    draws = rng.random(size=steps)

    rows: list[Row] = []
    comms = 0
    values = _sample(rows, metrics, 0, 0, engine.models())
    if stop_when is not None and values and stop_when(values):
        return RunRecord(steps=0, comms=0, models=engine.models().copy(),
                         rows=rows, stopped_early=True)
    done = 0
    for t in range(steps):
        i = int(agents[t])
        j = dist.pick(i, draws[t])
        comms += engine.step(i, j)
        done = t + 1
        at_sample = sample_every is not None and done % sample_every == 0
        if at_sample or done == steps:
            values = _sample(rows, metrics, done, comms, engine.models())
            if stop_when is not None and values and stop_when(values):
                return RunRecord(steps=done, comms=comms,
                                 models=engine.models().copy(), rows=rows,
                                 stopped_early=True)
    return RunRecord(steps=done, comms=comms, models=engine.models().copy(),
                     rows=rows, stopped_early=False)


def run_sync(engine, rounds: int, metrics: Metrics = None,
             sample_every: Optional[int] = None,
             stop_when: StopWhen = None) -> RunRecord:
    """Drive ``engine`` for up to ``rounds`` synchronous rounds.

    Sampling and early stopping mirror :func:`run_async`, with the round
    index in the step column.
    """
    if rounds < 0:
        raise ParameterError("rounds must be non-negative")
    if stop_when is not None and not metrics:
        raise ParameterError("stop_when requires metrics")
    rows: list[Row] = []
    comms = 0
    values = _sample(rows, metrics, 0, 0, engine.models())
    if stop_when is not None and values and stop_when(values):
        return RunRecord(steps=0, comms=0, models=engine.models().copy(),
                         rows=rows, stopped_early=True)
    done = 0
    for r in range(1, rounds + 1):
        comms += engine.round()
        done = r
        at_sample = sample_every is not None and r % sample_every == 0
        if at_sample or r == rounds:
            values = _sample(rows, metrics, r, comms, engine.models())
            if stop_when is not None and values and stop_when(values):
                return RunRecord(steps=done, comms=comms,
                                 models=engine.models().copy(), rows=rows,
                                 stopped_early=True)
    return RunRecord(steps=done, comms=comms, models=engine.models().copy(),
                     rows=rows, stopped_early=False)
