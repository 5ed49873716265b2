"""Experiment harness: canned studies, tidy result rows, CSV/JSON output.

Every experiment produces rows in one shared schema::

    experiment, seed, n, p, epsilon, method, agent_id,
    x_axis_name, x_value, metric, value

``agent_id`` is an agent index or ``"mean"`` for aggregates; ``seed`` is
the per-row run or instance index (the master seed lives in the config
snapshot embedded in every output file).  Methods are named
``mp_confidence`` / ``mp_uniform`` (closed-form propagation with and
without confidences), ``mp`` / ``cl`` / ``solitary`` / ``consensus``
(method comparison), ``mp_async`` / ``mp_sync`` / ``mp_closed_form`` and
``cl_async`` / ``cl_sync`` / ``cl_async_mp_warm`` (protocol curves).

Work fans out over a process pool when ``workers > 1``; results are
merged in task-submission order, so the output bytes never depend on the
pool size, and the pool size is deliberately left out of the config
snapshot.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .admm import AdmmConfig, AdmmContext, warm_start
from .errors import ParameterError
from .graph import (
    build_angle_kernel_graph,
    build_gaussian_kernel_graph,
    build_knn_graph,
)
from .metrics import accuracy_metric, consensus_baseline, mean_distance, \
    per_agent_accuracy
from .model_propagation import MpConfig, solve_closed_form
from .simulator import (
    AdmmAsyncEngine,
    AdmmSyncEngine,
    MpAsyncEngine,
    MpSyncEngine,
    run_async,
    run_sync,
)
from .tasks import (
    generate_linear_classification_instance,
    generate_two_moons_instance,
)

CSV_COLUMNS = ("experiment", "seed", "n", "p", "epsilon", "method",
               "agent_id", "x_axis_name", "x_value", "metric", "value")

# Defaults shared across experiments.  The mean-estimation alpha follows
# the tuned value for that task; the classification alphas come from the
# tune-alpha sweep on held-out instances.
ALPHA_MEAN_ESTIMATION = 0.99
ALPHA_MP_CLASSIFICATION = 0.8
ALPHA_CL_CLASSIFICATION = 0.5
SIGMA_MOONS = 0.1
SIGMA_ANGLE = 0.1
ANGLE_PRUNE = 1e-4


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    seed: int
    n: int
    p: int
    epsilon: float | None
    method: str
    agent_id: str
    x_axis_name: str
    x_value: float
    metric: str
    value: float


# ---- persistence -------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_rows(path, config: dict, rows: list[ResultRow],
               fmt: str = "csv") -> None:
    """Persist rows with the config snapshot embedded in the file."""
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
            fh.write(",".join(CSV_COLUMNS) + "\n")
            for r in rows:
                fh.write(",".join((
                    r.experiment, str(r.seed), str(r.n), str(r.p),
                    _fmt(r.epsilon), r.method, r.agent_id, r.x_axis_name,
                    _fmt(r.x_value), r.metric, _fmt(r.value),
                )) + "\n")
    elif fmt == "json":
        doc = {"config": config, "rows": [asdict(r) for r in rows]}
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=False)
            fh.write("\n")
    else:
        raise ParameterError(f"format must be 'csv' or 'json', got {fmt!r}")


def _map(fn, tasks, workers: int):
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    if workers == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _curve_mean(per_run: list[list[tuple[int, int, str, float]]]):
    """Average aligned (step, comms, metric, value) rows across runs."""
    base = per_run[0]
    values = np.array([[row[3] for row in run] for run in per_run])
    mean = values.mean(axis=0)
    return [(base[k][0], base[k][1], float(mean[k])) for k in range(len(base))]


# ---- confidence sweep (mean estimation, closed form) -------------------------


def _confidence_task(args):
    seed, n, eps, eps_idx, inst_idx, alpha, sigma = args
    inst = generate_two_moons_instance(n, eps, (seed, eps_idx, inst_idx))
    graph = build_gaussian_kernel_graph(inst.auxiliary_points, sigma)
    cfg = MpConfig(alpha=alpha)
    theta_c = solve_closed_form(graph, inst.solitary_models,
                                inst.confidences, cfg)
    theta_u = solve_closed_form(graph, inst.solitary_models,
                                np.ones(n), cfg)
    err_c = mean_distance(theta_c, inst.target_models)
    err_u = mean_distance(theta_u, inst.target_models)
    win = 1.0 if err_c < err_u else (0.5 if err_c == err_u else 0.0)
    return eps, inst_idx, err_c, err_u, win


def experiment_confidence_sweep(seed: int = 0, n: int = 300,
                                eps_grid=(0.0, 0.25, 0.5, 0.75, 1.0),
                                instances: int = 200,
                                alpha: float = ALPHA_MEAN_ESTIMATION,
                                sigma: float = SIGMA_MOONS,
                                workers: int = 1):
    """Closed-form propagation with vs without confidences across epsilon."""
    name = "confidence-sweep"
    config = {"experiment": name, "seed": seed, "n": n,
              "eps_grid": [float(e) for e in eps_grid],
              "instances": instances, "alpha": alpha, "sigma": sigma}
    tasks = [(seed, n, float(eps), ei, ii, alpha, sigma)
             for ei, eps in enumerate(eps_grid) for ii in range(instances)]
    rows: list[ResultRow] = []
    for eps, ii, err_c, err_u, win in _map(_confidence_task, tasks, workers):
        common = dict(experiment=name, seed=ii, n=n, p=1, epsilon=eps,
                      agent_id="mean", x_axis_name="epsilon", x_value=eps)
        rows.append(ResultRow(**common, method="mp_confidence",
                              metric="l2_error", value=err_c))
        rows.append(ResultRow(**common, method="mp_uniform",
                              metric="l2_error", value=err_u))
        rows.append(ResultRow(**common, method="mp_confidence",
                              metric="win", value=win))
    return config, rows


# ---- asynchronous vs synchronous propagation (mean estimation) ---------------


def _mp_async_run(args):
    (seed, run_idx, n, eps, alpha, sigma, budget, sample_every, init) = args
    inst = generate_two_moons_instance(n, eps, (seed, 0))
    graph = build_gaussian_kernel_graph(inst.auxiliary_points, sigma)
    cfg = MpConfig(alpha=alpha, neighbor_init=init)
    engine = MpAsyncEngine(graph, inst.solitary_models, inst.confidences, cfg)
    rec = run_async(engine, graph, budget, (seed, run_idx),
                    metrics={"l2_error": _target_distance(inst)},
                    sample_every=sample_every)
    return rec.rows


def _target_distance(inst):
    targets = inst.target_models
    return lambda models: mean_distance(models, targets)


def experiment_mp_async_vs_sync(seed: int = 0, n: int = 300,
                                epsilon: float = 1.0,
                                alpha: float = ALPHA_MEAN_ESTIMATION,
                                runs: int = 10, budget: int = 200_000,
                                sample_every: int = 2_000,
                                sigma: float = SIGMA_MOONS,
                                neighbor_init: str = "solitary",
                                workers: int = 1):
    """Error-versus-communications curves for gossip and round-based MP."""
    name = "mp-async-vs-sync"
    config = {"experiment": name, "seed": seed, "n": n, "epsilon": epsilon,
              "alpha": alpha, "runs": runs, "budget": budget,
              "sample_every": sample_every, "sigma": sigma,
              "neighbor_init": neighbor_init}
    inst = generate_two_moons_instance(n, epsilon, (seed, 0))
    graph = build_gaussian_kernel_graph(inst.auxiliary_points, sigma)
    metric = _target_distance(inst)
    cfg = MpConfig(alpha=alpha, neighbor_init=neighbor_init)

    tasks = [(seed, r, n, epsilon, alpha, sigma, budget, sample_every,
              neighbor_init) for r in range(runs)]
    per_run = _map(_mp_async_run, tasks, workers)
    rows: list[ResultRow] = []

    def add(method, x, value, seed_col=seed):
        rows.append(ResultRow(
            experiment=name, seed=seed_col, n=n, p=1, epsilon=epsilon,
            method=method, agent_id="mean", x_axis_name="communications",
            x_value=float(x), metric="l2_error", value=float(value)))

    for _, comms, value in _curve_mean(per_run):
        add("mp_async", comms, value)

    # async runs spend 2*budget messages, so give the round-based curve
    # the same span: rounds * 2|E| = 2 * budget
    sync_rounds = max(1, budget // graph.num_edges)
    engine = MpSyncEngine(graph, inst.solitary_models, inst.confidences, cfg)
    rec = run_sync(engine, sync_rounds, metrics={"l2_error": metric},
                   sample_every=1)
    for _, comms, _, value in rec.rows:
        add("mp_sync", comms, value)

    theta_star = solve_closed_form(graph, inst.solitary_models,
                                   inst.confidences, cfg)
    add("mp_closed_form", 0.0, metric(theta_star))
    return config, rows


# ---- collaborative learning vs propagation (classification) ------------------


def _methods_task(args):
    (seed, n, p, p_idx, inst_idx, alpha_mp, alpha_cl, rho, cl_rounds,
     sigma, prune, inner_budget) = args
    inst = generate_linear_classification_instance(n, p, (seed, p_idx, inst_idx))
    graph = build_angle_kernel_graph(inst.target_models, sigma,
                                     prune_threshold=prune)
    results = {"solitary": inst.solitary_models,
               "consensus": consensus_baseline(inst)}
    mp_cfg = MpConfig(alpha=alpha_mp)
    results["mp"] = solve_closed_form(graph, inst.solitary_models,
                                      inst.confidences, mp_cfg)
    cl_cfg = AdmmConfig.from_alpha(alpha_cl, rho=rho,
                                   subproblem_budget=inner_budget)
    ctx = AdmmContext(graph, inst.features, inst.labels, "hinge", p, cl_cfg)
    state = warm_start(ctx, "solitary", solitary_models=inst.solitary_models)
    run_sync(AdmmSyncEngine(ctx, state), cl_rounds)
    results["cl"] = state.own
    accs = {m: per_agent_accuracy(theta, inst.test_features, inst.test_labels)
            for m, theta in results.items()}
    return p, inst_idx, inst.sizes().tolist(), \
        {m: a.tolist() for m, a in accs.items()}


def experiment_cl_vs_mp(seed: int = 0, n: int = 100,
                        p_grid=(2, 5, 10, 20, 50, 100),
                        instances: int = 10,
                        alpha_mp: float = ALPHA_MP_CLASSIFICATION,
                        alpha_cl: float = ALPHA_CL_CLASSIFICATION,
                        rho: float = 1.0, cl_rounds: int = 100,
                        sigma: float = SIGMA_ANGLE,
                        prune: float = ANGLE_PRUNE,
                        inner_budget: int = 10,
                        per_agent_dim: int = 50,
                        workers: int = 1):
    """Accuracy of cl/mp/solitary/consensus across feature dimensions.

    Per-agent rows (accuracy against local training-set size) are emitted
    for ``per_agent_dim`` only; every dimension gets mean rows.
    """
    name = "cl-vs-mp"
    config = {"experiment": name, "seed": seed, "n": n,
              "p_grid": [int(p) for p in p_grid], "instances": instances,
              "alpha_mp": alpha_mp, "alpha_cl": alpha_cl, "rho": rho,
              "cl_rounds": cl_rounds, "sigma": sigma, "prune": prune,
              "inner_budget": inner_budget, "per_agent_dim": per_agent_dim}
    tasks = [(seed, n, int(p), pi, ii, alpha_mp, alpha_cl, rho, cl_rounds,
              sigma, prune, inner_budget)
             for pi, p in enumerate(p_grid) for ii in range(instances)]
    rows: list[ResultRow] = []
    for p, inst_idx, sizes, accs in _map(_methods_task, tasks, workers):
        for method in ("cl", "mp", "solitary", "consensus"):
            acc = accs[method]
            rows.append(ResultRow(
                experiment=name, seed=inst_idx, n=n, p=p, epsilon=None,
                method=method, agent_id="mean", x_axis_name="dimension",
                x_value=float(p), metric="test_accuracy",
                value=float(np.mean(acc))))
            if p == per_agent_dim:
                for i, a in enumerate(acc):
                    rows.append(ResultRow(
                        experiment=name, seed=inst_idx, n=n, p=p,
                        epsilon=None, method=method, agent_id=str(i),
                        x_axis_name="training_size", x_value=float(sizes[i]),
                        metric="test_accuracy", value=float(a)))
    return config, rows


# ---- asynchronous vs synchronous collaborative learning ----------------------


def _cl_async_run(args):
    (seed, run_idx, n, p, alpha_mp, alpha_cl, rho, budget, sample_every,
     warm, sigma, prune, inner_budget) = args
    inst = generate_linear_classification_instance(n, p, (seed, 0))
    graph = build_angle_kernel_graph(inst.target_models, sigma,
                                     prune_threshold=prune)
    cfg = AdmmConfig.from_alpha(alpha_cl, rho=rho,
                                subproblem_budget=inner_budget)
    ctx = AdmmContext(graph, inst.features, inst.labels, "hinge", p, cfg)
    if warm == "model_propagation":
        theta_mp = solve_closed_form(graph, inst.solitary_models,
                                     inst.confidences, MpConfig(alpha=alpha_mp))
        state = warm_start(ctx, warm, mp_solution=theta_mp)
    else:
        state = warm_start(ctx, warm, solitary_models=inst.solitary_models)
    rec = run_async(AdmmAsyncEngine(ctx, state), graph, budget,
                    (seed, 10 + run_idx),
                    metrics={"test_accuracy": accuracy_metric(inst)},
                    sample_every=sample_every)
    return rec.rows


def _mp_async_cls_run(args):
    (seed, run_idx, n, p, alpha_mp, budget, sample_every, sigma, prune) = args
    inst = generate_linear_classification_instance(n, p, (seed, 0))
    graph = build_angle_kernel_graph(inst.target_models, sigma,
                                     prune_threshold=prune)
    cfg = MpConfig(alpha=alpha_mp, neighbor_init="solitary")
    engine = MpAsyncEngine(graph, inst.solitary_models, inst.confidences, cfg)
    rec = run_async(engine, graph, budget, (seed, 50 + run_idx),
                    metrics={"test_accuracy": accuracy_metric(inst)},
                    sample_every=sample_every)
    return rec.rows


def experiment_cl_async_vs_sync(seed: int = 0, n: int = 100, p: int = 50,
                                alpha_mp: float = ALPHA_MP_CLASSIFICATION,
                                alpha_cl: float = ALPHA_CL_CLASSIFICATION,
                                rho: float = 1.0, runs: int = 3,
                                budget: int = 40_000,
                                sample_every: int = 800,
                                sigma: float = SIGMA_ANGLE,
                                prune: float = ANGLE_PRUNE,
                                inner_budget: int = 10,
                                workers: int = 1):
    """Accuracy-versus-communications curves for collaborative learning."""
    name = "cl-async-vs-sync"
    config = {"experiment": name, "seed": seed, "n": n, "p": p,
              "alpha_mp": alpha_mp, "alpha_cl": alpha_cl, "rho": rho,
              "runs": runs, "budget": budget, "sample_every": sample_every,
              "sigma": sigma, "prune": prune, "inner_budget": inner_budget}
    inst = generate_linear_classification_instance(n, p, (seed, 0))
    graph = build_angle_kernel_graph(inst.target_models, sigma,
                                     prune_threshold=prune)
    metric = accuracy_metric(inst)
    rows: list[ResultRow] = []

    def add(method, x, value, seed_col=seed):
        rows.append(ResultRow(
            experiment=name, seed=seed_col, n=n, p=p, epsilon=None,
            method=method, agent_id="mean", x_axis_name="communications",
            x_value=float(x), metric="test_accuracy", value=float(value)))

    for warm, method in (("solitary", "cl_async"),
                         ("model_propagation", "cl_async_mp_warm")):
        tasks = [(seed, r, n, p, alpha_mp, alpha_cl, rho, budget,
                  sample_every, warm, sigma, prune, inner_budget)
                 for r in range(runs)]
        for _, comms, value in _curve_mean(_map(_cl_async_run, tasks, workers)):
            add(method, comms, value)

    mp_tasks = [(seed, r, n, p, alpha_mp, budget, sample_every, sigma, prune)
                for r in range(runs)]
    for _, comms, value in _curve_mean(_map(_mp_async_cls_run, mp_tasks,
                                            workers)):
        add("mp_async", comms, value)

    cl_cfg = AdmmConfig.from_alpha(alpha_cl, rho=rho,
                                   subproblem_budget=inner_budget)
    ctx = AdmmContext(graph, inst.features, inst.labels, "hinge", p, cl_cfg)
    state = warm_start(ctx, "solitary", solitary_models=inst.solitary_models)
    sync_rounds = max(1, budget // graph.num_edges)  # same span as async
    rec = run_sync(AdmmSyncEngine(ctx, state), sync_rounds,
                   metrics={"test_accuracy": metric}, sample_every=1)
    for _, comms, _, value in rec.rows:
        add("cl_sync", comms, value)
    return config, rows


# ---- scalability over network size -------------------------------------------


def _scalability_task(args):
    (seed, n, n_idx, inst_idx, p, k, alpha_mp, alpha_cl, rho, frac,
     budget_cap, sample_every, plateau_rounds, inner_budget) = args
    inst = generate_linear_classification_instance(n, p, (seed, n_idx, inst_idx))
    graph = build_knn_graph(inst.target_models, k)
    acc = accuracy_metric(inst)
    out = {}

    mp_cfg = MpConfig(alpha=alpha_mp, neighbor_init="solitary")
    theta_star = solve_closed_form(graph, inst.solitary_models,
                                   inst.confidences, mp_cfg)
    plateau_mp = acc(theta_star)
    engine = MpAsyncEngine(graph, inst.solitary_models, inst.confidences,
                           mp_cfg)
    rec = run_async(engine, graph, budget_cap, (seed, n_idx, inst_idx, 0),
                    metrics={"acc": acc}, sample_every=sample_every,
                    stop_when=lambda v: v["acc"] >= frac * plateau_mp)
    out["mp"] = (plateau_mp, rec.comms, rec.stopped_early)

    cl_cfg = AdmmConfig.from_alpha(alpha_cl, rho=rho,
                                   subproblem_budget=inner_budget)
    ctx = AdmmContext(graph, inst.features, inst.labels, "hinge", p, cl_cfg)
    ref = warm_start(ctx, "solitary", solitary_models=inst.solitary_models)
    run_sync(AdmmSyncEngine(ctx, ref), plateau_rounds)
    plateau_cl = acc(ref.own)
    state = warm_start(ctx, "solitary", solitary_models=inst.solitary_models)
    rec = run_async(AdmmAsyncEngine(ctx, state), graph, budget_cap,
                    (seed, n_idx, inst_idx, 1),
                    metrics={"acc": acc}, sample_every=sample_every,
                    stop_when=lambda v: v["acc"] >= frac * plateau_cl)
    out["cl"] = (plateau_cl, rec.comms, rec.stopped_early)
    return n, inst_idx, out


def experiment_scalability(seed: int = 0, n_grid=(100, 200, 300),
                           p: int = 50, k: int = 10, instances: int = 3,
                           alpha_mp: float = ALPHA_MP_CLASSIFICATION,
                           alpha_cl: float = ALPHA_CL_CLASSIFICATION,
                           rho: float = 1.0, frac: float = 0.9,
                           budget_cap: int = 60_000,
                           sample_every: int = 10,
                           plateau_rounds: int = 150,
                           inner_budget: int = 10,
                           workers: int = 1):
    """Communications needed to reach 90% of each method's own plateau.

    The plateau is the accuracy of the method's converged models at that
    network size (closed form for propagation, a long synchronous run
    for collaborative learning); rows report the first sampled
    communication count whose accuracy crosses ``frac`` times it.
    """
    name = "scalability"
    config = {"experiment": name, "seed": seed,
              "n_grid": [int(n) for n in n_grid], "p": p, "k": k,
              "instances": instances, "alpha_mp": alpha_mp,
              "alpha_cl": alpha_cl, "rho": rho, "frac": frac,
              "budget_cap": budget_cap, "sample_every": sample_every,
              "plateau_rounds": plateau_rounds, "inner_budget": inner_budget}
    tasks = [(seed, int(n), ni, ii, p, k, alpha_mp, alpha_cl, rho, frac,
              budget_cap, sample_every, plateau_rounds, inner_budget)
             for ni, n in enumerate(n_grid) for ii in range(instances)]
    rows: list[ResultRow] = []
    for n, inst_idx, out in _map(_scalability_task, tasks, workers):
        for method, (plateau, comms, reached) in out.items():
            common = dict(experiment=name, seed=inst_idx, n=n, p=p,
                          epsilon=None, method=method, agent_id="mean",
                          x_axis_name="agents", x_value=float(n))
            rows.append(ResultRow(**common, metric="comms_to_target",
                                  value=float(comms)))
            rows.append(ResultRow(**common, metric="plateau_accuracy",
                                  value=float(plateau)))
            rows.append(ResultRow(**common, metric="target_reached",
                                  value=1.0 if reached else 0.0))
    return config, rows


# ---- alpha tuning -------------------------------------------------------------


def _tune_task(args):
    (seed, task, alpha, a_idx, inst_idx, n, p, rho, cl_rounds, sigma,
     prune, inner_budget) = args
    if task == "mean-estimation":
        inst = generate_two_moons_instance(n, 1.0, (seed, 100 + inst_idx))
        graph = build_gaussian_kernel_graph(inst.auxiliary_points, sigma)
        theta = solve_closed_form(graph, inst.solitary_models,
                                  inst.confidences, MpConfig(alpha=alpha))
        return alpha, inst_idx, {"mp_confidence":
                                 ("l2_error",
                                  mean_distance(theta, inst.target_models))}
    inst = generate_linear_classification_instance(n, p, (seed, 100 + inst_idx))
    graph = build_angle_kernel_graph(inst.target_models, sigma,
                                     prune_threshold=prune)
    acc = accuracy_metric(inst)
    theta_mp = solve_closed_form(graph, inst.solitary_models,
                                 inst.confidences, MpConfig(alpha=alpha))
    cl_cfg = AdmmConfig.from_alpha(alpha, rho=rho,
                                   subproblem_budget=inner_budget)
    ctx = AdmmContext(graph, inst.features, inst.labels, "hinge", p, cl_cfg)
    state = warm_start(ctx, "solitary", solitary_models=inst.solitary_models)
    run_sync(AdmmSyncEngine(ctx, state), cl_rounds)
    return alpha, inst_idx, {"mp": ("test_accuracy", acc(theta_mp)),
                             "cl": ("test_accuracy", acc(state.own))}


def experiment_tune_alpha(seed: int = 0, task: str = "classification",
                          alpha_grid=(0.5, 0.9, 0.99, 0.999),
                          instances: int = 5, n: int = 100, p: int = 50,
                          rho: float = 1.0, cl_rounds: int = 100,
                          sigma: float = SIGMA_ANGLE,
                          prune: float = ANGLE_PRUNE,
                          inner_budget: int = 10,
                          workers: int = 1):
    """Grid sweep of the smoothing trade-off on held-out instances."""
    if task not in ("classification", "mean-estimation"):
        raise ParameterError(f"unknown tuning task {task!r}")
    name = "tune-alpha"
    if task == "mean-estimation":
        p = 1
        sigma = SIGMA_MOONS
    config = {"experiment": name, "seed": seed, "task": task,
              "alpha_grid": [float(a) for a in alpha_grid],
              "instances": instances, "n": n, "p": p, "rho": rho,
              "cl_rounds": cl_rounds, "sigma": sigma, "prune": prune,
              "inner_budget": inner_budget}
    tasks = [(seed, task, float(a), ai, ii, n, p, rho, cl_rounds, sigma,
              prune, inner_budget)
             for ai, a in enumerate(alpha_grid) for ii in range(instances)]
    rows: list[ResultRow] = []
    for alpha, inst_idx, out in _map(_tune_task, tasks, workers):
        for method, (metric, value) in out.items():
            rows.append(ResultRow(
                experiment=name, seed=inst_idx, n=n, p=p, epsilon=None,
                method=method, agent_id="mean", x_axis_name="alpha",
                x_value=float(alpha), metric=metric, value=float(value)))
    return config, rows


EXPERIMENTS = {
    "confidence-sweep": experiment_confidence_sweep,
    "mp-async-vs-sync": experiment_mp_async_vs_sync,
    "cl-vs-mp": experiment_cl_vs_mp,
    "cl-async-vs-sync": experiment_cl_async_vs_sync,
    "scalability": experiment_scalability,
    "tune-alpha": experiment_tune_alpha,
}


def run_experiment(name: str, **params):
    """Dispatch one experiment by its subcommand name."""
    try:
        fn = EXPERIMENTS[name]
    except KeyError:
        raise ParameterError(f"unknown experiment {name!r}") from None
    return fn(**params)
