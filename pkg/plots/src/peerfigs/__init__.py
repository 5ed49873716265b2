"""Figure rendering for peer-to-peer learning experiment results.

Consumes the tidy results CSV written by the ``peerlearn`` harness (and
its problem-instance JSON dumps) and renders publication-style figures.
"""

from .io import (
    EmptyInputError,
    ParameterError,
    ResultTable,
    SchemaError,
    read_instance_json,
    read_results_csv,
)
from .figures import (
    FIGURE_IDS,
    build_classification,
    build_mean_estimation,
    build_moons_models,
    build_scalability,
    render,
    save_figure,
)

__version__ = "0.1.0"

__all__ = [
    "EmptyInputError",
    "FIGURE_IDS",
    "ParameterError",
    "ResultTable",
    "SchemaError",
    "build_classification",
    "build_mean_estimation",
    "build_moons_models",
    "build_scalability",
    "read_instance_json",
    "read_results_csv",
    "render",
    "save_figure",
]
