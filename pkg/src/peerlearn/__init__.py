"""Deterministic peer-to-peer learning of personalized models.

Agents on a weighted similarity graph each hold a locally trained model
and improve it by talking to neighbors.  Two methods are provided, each
with a synchronous reference and an asynchronous gossip protocol:
confidence-weighted model propagation (smoothing pre-trained models over
the graph) and collaborative learning (joint loss minimization by
decentralized ADMM with partial consensus), plus task generators, exact
oracles, an event simulator with precise communication accounting, and
an experiment harness with a CLI.
"""

from .admm import (
    AdmmConfig,
    AdmmContext,
    AdmmState,
    OracleResult,
    async_admm_step,
    centralized_oracle,
    consensus_estimate,
    local_primal_update,
    objective_qcl,
    sync_admm_round,
    warm_start,
)
from .errors import (
    ConnectivityError,
    InvalidInstanceError,
    NumericalError,
    ParameterError,
    PeerLearnError,
    ProtocolViolationError,
    ShapeError,
)
from .graph import (
    Graph,
    NeighborDistribution,
    build_angle_kernel_graph,
    build_gaussian_kernel_graph,
    build_knn_graph,
    read_edge_list,
    sample_neighbor,
    similarity_neighbor_distribution,
    stochastic_matrix,
    uniform_neighbor_distribution,
    write_edge_list,
)
from .losses import HINGE, QUADRATIC, get_loss
from .metrics import (
    accuracy_metric,
    consensus_baseline,
    distance_metric,
    mean_accuracy,
    mean_distance,
    per_agent_accuracy,
    per_agent_distance,
)
from .model_propagation import (
    MpConfig,
    MpState,
    async_step,
    init_state,
    iterate_sync,
    objective_qmp,
    solve_closed_form,
    sync_step,
)
from .rng import stream
from .simulator import (
    AdmmAsyncEngine,
    AdmmSyncEngine,
    MpAsyncEngine,
    MpSyncEngine,
    RunRecord,
    run_async,
    run_sync,
)
from .tasks import (
    ProblemInstance,
    confidence_from_sizes,
    generate_linear_classification_instance,
    generate_two_moons_instance,
    train_solitary,
)

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig", "AdmmContext", "AdmmState", "OracleResult",
    "async_admm_step", "centralized_oracle", "consensus_estimate",
    "local_primal_update", "objective_qcl", "sync_admm_round", "warm_start",
    "ConnectivityError", "InvalidInstanceError", "NumericalError",
    "ParameterError", "PeerLearnError", "ProtocolViolationError",
    "ShapeError",
    "Graph", "NeighborDistribution", "build_angle_kernel_graph",
    "build_gaussian_kernel_graph", "build_knn_graph", "read_edge_list",
    "sample_neighbor", "similarity_neighbor_distribution",
    "stochastic_matrix", "uniform_neighbor_distribution", "write_edge_list",
    "HINGE", "QUADRATIC", "get_loss",
    "accuracy_metric", "consensus_baseline", "distance_metric",
    "mean_accuracy", "mean_distance", "per_agent_accuracy",
    "per_agent_distance",
    "MpConfig", "MpState", "async_step", "init_state", "iterate_sync",
    "objective_qmp", "solve_closed_form", "sync_step",
    "stream",
    "AdmmAsyncEngine", "AdmmSyncEngine", "MpAsyncEngine", "MpSyncEngine",
    "RunRecord", "run_async", "run_sync",
    "ProblemInstance", "confidence_from_sizes",
    "generate_linear_classification_instance",
    "generate_two_moons_instance", "train_solitary",
    "__version__",
]
