"""Figure builders: result tables in, matplotlib figures out.

Axis labels come from the data itself (the ``x_axis_name`` and ``metric``
columns); legends use the raw method names.  Colors are assigned
deterministically per panel so reruns cannot reshuffle them: blue marks
the confidence-weighted / collaborative variant and red its comparison
baseline, matching the point-cloud panels where blue and red mark the
two target values.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")  # file rendering only, never needs a display

import matplotlib.pyplot as plt

from .io import (
    EmptyInputError,
    ParameterError,
    ResultTable,
    SchemaError,
    read_instance_json,
    read_results_csv,
)

BLUE = "tab:blue"
RED = "tab:red"

_PALETTE = ("tab:blue", "tab:red", "tab:green", "tab:orange", "tab:purple",
            "tab:brown", "tab:gray", "tab:olive", "tab:cyan", "tab:pink")

_PREFERRED_COLOR = {
    "mp_confidence": BLUE,
    "mp_uniform": RED,
    "mp_async": BLUE,
    "mp_sync": RED,
    "mp_closed_form": "tab:gray",
    "cl": BLUE,
    "mp": RED,
    "solitary": "tab:gray",
    "consensus": "tab:orange",
    "cl_async": BLUE,
    "cl_sync": RED,
    "cl_async_mp_warm": "tab:cyan",
}


def _panel_colors(methods) -> dict:
    """Fixed color per method; first-come preference, no clash in a panel."""
    out: dict = {}
    used: set = set()
    for m in sorted(methods):
        want = _PREFERRED_COLOR.get(m)
        if want is not None and want not in used:
            out[m] = want
            used.add(want)
    for m in sorted(methods):
        if m in out:
            continue
        color = next((c for c in _PALETTE if c not in used), "black")
        out[m] = color
        used.add(color)
    return out


def _mean_by_x(rows):
    by: dict = {}
    for r in rows:
        by.setdefault(r["x_value"], []).append(r["value"])
    xs = sorted(by)
    return xs, [float(np.mean(by[x])) for x in xs]


def _label_axes(ax, rows) -> None:
    ax.set_xlabel(rows[0]["x_axis_name"])
    ax.set_ylabel(rows[0]["metric"])


def _curve_panel(ax, rows) -> None:
    """One line per method (mean over repeats at each x); a method with a
    single x renders as a horizontal reference line."""
    colors = _panel_colors({r["method"] for r in rows})
    for method in sorted(colors):
        xs, ys = _mean_by_x([r for r in rows if r["method"] == method])
        if len(xs) == 1:
            ax.axhline(ys[0], color=colors[method], linestyle="--",
                       linewidth=1.2, label=method)
        else:
            ax.plot(xs, ys, color=colors[method], marker="o",
                    markersize=3.5, linewidth=1.4, label=method)
    _label_axes(ax, rows)
    ax.legend(fontsize=8)


def _scatter_panel(ax, rows) -> None:
    colors = _panel_colors({r["method"] for r in rows})
    for method in sorted(colors):
        sel = [r for r in rows if r["method"] == method]
        ax.scatter([r["x_value"] for r in sel], [r["value"] for r in sel],
                   s=12, alpha=0.55, linewidths=0, color=colors[method],
                   label=method)
    _label_axes(ax, rows)
    ax.legend(fontsize=8)


def _rows_by_experiment(tables, figure_id: str, needed) -> dict:
    by: dict = {}
    for t in tables:
        by.setdefault(t.experiment, []).extend(t.rows)
    missing = [name for name in needed if name not in by]
    if missing:
        got = ", ".join(sorted(by)) or "none"
        raise SchemaError(
            f"{figure_id} needs result tables from: {', '.join(needed)}; "
            f"missing: {', '.join(missing)} (got: {got})")
    return by


def _metric_rows(rows, table_name: str, metric: str, **criteria):
    sel = [r for r in rows if r["metric"] == metric
           and all(r[k] == v for k, v in criteria.items())]
    if not sel:
        wanted = ", ".join([f"metric={metric!r}"]
                           + [f"{k}={v!r}" for k, v in criteria.items()])
        raise SchemaError(f"{table_name} table has no rows with {wanted}")
    return sel


def build_mean_estimation(tables) -> plt.Figure:
    """Three panels: error vs spread, win ratio vs spread, error vs
    communication budget for the asynchronous and synchronous protocols."""
    by = _rows_by_experiment(tables, "mean-estimation",
                             ("confidence-sweep", "mp-async-vs-sync"))
    fig, axes = plt.subplots(1, 3, figsize=(13.5, 4.0))
    _curve_panel(axes[0], _metric_rows(by["confidence-sweep"],
                                       "confidence-sweep", "l2_error"))
    axes[1].axhline(0.5, color="0.6", linestyle=":", linewidth=1.0)
    _curve_panel(axes[1], _metric_rows(by["confidence-sweep"],
                                       "confidence-sweep", "win"))
    axes[1].set_ylim(0.0, 1.0)
    _curve_panel(axes[2], _metric_rows(by["mp-async-vs-sync"],
                                       "mp-async-vs-sync", "l2_error"))
    fig.tight_layout()
    return fig


def build_classification(tables) -> plt.Figure:
    """Three panels: accuracy vs model dimension, per-agent accuracy vs
    local training-set size, accuracy vs communication budget."""
    by = _rows_by_experiment(tables, "classification",
                             ("cl-vs-mp", "cl-async-vs-sync"))
    fig, axes = plt.subplots(1, 3, figsize=(13.5, 4.0))
    _curve_panel(axes[0], _metric_rows(by["cl-vs-mp"], "cl-vs-mp",
                                       "test_accuracy",
                                       x_axis_name="dimension"))
    _scatter_panel(axes[1], _metric_rows(by["cl-vs-mp"], "cl-vs-mp",
                                         "test_accuracy",
                                         x_axis_name="training_size"))
    _curve_panel(axes[2], _metric_rows(by["cl-async-vs-sync"],
                                       "cl-async-vs-sync", "test_accuracy"))
    fig.tight_layout()
    return fig


def build_scalability(tables) -> plt.Figure:
    """One panel: communications needed to reach the per-method accuracy
    target, as a function of the network size."""
    by = _rows_by_experiment(tables, "scalability", ("scalability",))
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    _curve_panel(ax, _metric_rows(by["scalability"], "scalability",
                                  "comms_to_target"))
    fig.tight_layout()
    return fig


def build_moons_models(doc: dict) -> plt.Figure:
    """Four scatter panels of the agents' auxiliary positions, colored by
    model value: targets, solitary models, and the two propagated
    variants.  Blue marks the upper target value, red the lower."""
    if int(doc["p"]) != 1:
        raise SchemaError(
            "moons-models expects one-dimensional models "
            f"(instance has p={doc['p']})")
    pts = np.asarray(doc["auxiliary_points"], dtype=float)
    meta = doc["metadata"]
    panels = (
        ("targets", doc["target_models"]),
        ("solitary", doc["solitary_models"]),
        ("propagated, uniform weights", meta["mp_uniform_models"]),
        ("propagated, confidence weights", meta["mp_confidence_models"]),
    )
    targets = np.ravel(np.asarray(doc["target_models"], dtype=float))
    mid = (float(targets.max()) + float(targets.min())) / 2.0

    fig, axes = plt.subplots(1, 4, figsize=(14.4, 3.6))
    for ax, (title, models) in zip(axes, panels):
        vals = np.ravel(np.asarray(models, dtype=float))
        if vals.shape[0] != pts.shape[0]:
            raise SchemaError(
                f"moons-models: '{title}' has {vals.shape[0]} values for "
                f"{pts.shape[0]} agents")
        colors = [BLUE if v >= mid else RED for v in vals]
        ax.scatter(pts[:, 0], pts[:, 1], c=colors, s=16, linewidths=0)
        ax.set_title(title, fontsize=10)
        ax.set_aspect("equal")
        ax.set_xticks([])
        ax.set_yticks([])
    fig.tight_layout()
    return fig


_CSV_FIGURES = {
    "classification": build_classification,
    "mean-estimation": build_mean_estimation,
    "scalability": build_scalability,
}

FIGURE_IDS = tuple(sorted([*_CSV_FIGURES, "moons-models"]))


def save_figure(fig, out_path: str) -> None:
    """Write the figure; embedded timestamps are suppressed so repeated
    renders of the same inputs are byte-identical."""
    suffix = Path(out_path).suffix.lower()
    kwargs = {}
    if suffix == ".svg":
        kwargs["metadata"] = {"Date": None}
    elif suffix == ".pdf":
        kwargs["metadata"] = {"CreationDate": None}
    with matplotlib.rc_context({"svg.hashsalt": "peerfigs"}):
        fig.savefig(out_path, dpi=150, **kwargs)
    plt.close(fig)


def render(figure_id: str, input_paths, out_path: str) -> None:
    """Render one figure id from its input files to an image file."""
    if figure_id not in FIGURE_IDS:
        raise ParameterError(f"unknown figure id {figure_id!r}; known: "
                             f"{', '.join(FIGURE_IDS)}")
    paths = list(input_paths)
    if not paths:
        raise ParameterError("at least one input file is required")
    if figure_id == "moons-models":
        if len(paths) != 1:
            raise ParameterError(
                "moons-models takes exactly one instance JSON file")
        fig = build_moons_models(read_instance_json(paths[0]))
    else:
        fig = _CSV_FIGURES[figure_id]([read_results_csv(p) for p in paths])
    save_figure(fig, out_path)
