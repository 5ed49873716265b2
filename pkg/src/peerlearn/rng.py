"""Named, independent random streams derived from one master seed.

Every source of randomness (graph construction, instance generation,
activation schedules, solvers) draws from its own stream so that, e.g.,
lengthening a simulation never changes the instance it runs on.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

_STREAM_IDS = {
    "graph": 0,
    "instance": 1,
    "schedule": 2,
    "solver": 3,
    "harness": 4,
}


def stream(master_seed: int, name: str, *key: int) -> np.random.Generator:
    """Independent generator for the named stream under ``master_seed``.

    Extra ``key`` parts open reproducible sub-streams (per agent, per
    instance, per run) without any coupling between siblings.
    """
    if name not in _STREAM_IDS:
        raise ParameterError(f"unknown random stream {name!r}")
    entropy = (int(master_seed), _STREAM_IDS[name]) + tuple(int(k) for k in key)
    return np.random.default_rng(np.random.SeedSequence(entropy))
