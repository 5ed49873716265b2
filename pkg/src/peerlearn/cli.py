"""Command-line front end for the experiment harness.

Each subcommand runs one canned experiment and writes its rows plus a
config snapshot to a CSV (default) or JSON file.  ``dump-instance``
exports one mean-estimation instance as JSON, with the propagated models
included in the metadata so plotting tools can render model layouts.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments
from .errors import PeerLearnError
from .graph import build_gaussian_kernel_graph
from .model_propagation import MpConfig, solve_closed_form
from .tasks import generate_two_moons_instance


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


# Flag vocabulary shared across subcommands: one definition per name so
# every command spells its options the same way.
_FLAGS = {
    "n": dict(type=int, help="number of agents"),
    "p": dict(type=int, help="model dimension"),
    "epsilon": dict(type=float, help="confidence spread in [0, 1]"),
    "alpha": dict(type=float, help="smoothing trade-off in (0, 1)"),
    "alpha-mp": dict(type=float, help="alpha for model propagation"),
    "alpha-cl": dict(type=float, help="alpha for collaborative learning"),
    "rho": dict(type=float, help="augmented-Lagrangian penalty"),
    "k": dict(type=int, help="neighbors per agent in the kNN graph"),
    "seed": dict(type=int, default=0, help="master seed (default 0)"),
    "instances": dict(type=int, help="instances per grid point"),
    "budget": dict(type=int, help="pairwise-activation budget"),
    "runs": dict(type=int, help="gossip runs to average"),
    "sample-every": dict(type=int, help="activation steps between samples"),
    "workers": dict(type=int, default=1,
                    help="parallel worker processes (default 1)"),
    "sigma": dict(type=float, help="kernel width for the similarity graph"),
    "prune": dict(type=float, help="edge-weight pruning threshold"),
    "cl-rounds": dict(type=int, help="synchronous rounds for collaborative runs"),
    "inner-budget": dict(type=int, help="inner passes per local subproblem"),
    "neighbor-init": dict(choices=("zeros", "solitary"),
                          help="initial neighbor knowledge for gossip"),
    "frac": dict(type=float, help="fraction of the plateau accuracy to reach"),
    "plateau-rounds": dict(type=int, help="rounds used to estimate the plateau"),
    "per-agent-dim": dict(type=int,
                          help="dimension whose per-agent rows are emitted"),
    "task": dict(choices=("classification", "mean-estimation"),
                 help="tuning task"),
    "eps-grid": dict(type=_floats, help="comma-separated epsilon grid"),
    "p-grid": dict(type=_ints, help="comma-separated dimension grid"),
    "n-grid": dict(type=_ints, help="comma-separated agent-count grid"),
    "alpha-grid": dict(type=_floats, help="comma-separated alpha grid"),
}

# flag -> experiment kwarg, where they differ
_RENAMES = {
    "scalability": {"budget": "budget_cap"},
}

_COMMANDS = {
    "confidence-sweep": ("n", "eps-grid", "instances", "alpha", "sigma",
                         "seed", "workers"),
    "mp-async-vs-sync": ("n", "epsilon", "alpha", "runs", "budget",
                         "sample-every", "sigma", "neighbor-init", "seed",
                         "workers"),
    "cl-vs-mp": ("n", "p-grid", "instances", "alpha", "alpha-mp", "alpha-cl",
                 "rho", "cl-rounds", "sigma", "prune", "inner-budget",
                 "per-agent-dim", "seed", "workers"),
    "cl-async-vs-sync": ("n", "p", "alpha", "alpha-mp", "alpha-cl", "rho",
                         "runs", "budget", "sample-every", "sigma", "prune",
                         "inner-budget", "seed", "workers"),
    "scalability": ("n-grid", "p", "k", "instances", "alpha", "alpha-mp",
                    "alpha-cl", "rho", "frac", "budget", "sample-every",
                    "plateau-rounds", "inner-budget", "seed", "workers"),
    "tune-alpha": ("task", "alpha-grid", "instances", "n", "p", "rho",
                   "cl-rounds", "sigma", "prune", "inner-budget", "seed",
                   "workers"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peerlearn",
        description="Decentralized learning experiments over peer networks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, flags in _COMMANDS.items():
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        for flag in flags:
            sp.add_argument(f"--{flag}", **_FLAGS[flag])
        sp.add_argument("--out", help=f"output path (default {name}.<format>)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")
    dump = sub.add_parser(
        "dump-instance",
        help="write one mean-estimation instance as JSON, with propagated "
             "models in the metadata")
    for flag in ("n", "epsilon", "alpha", "sigma", "seed"):
        dump.add_argument(f"--{flag}", **_FLAGS[flag])
    dump.add_argument("--out", help="output path (default instance.json)")
    return parser


def _collect_params(args: argparse.Namespace, command: str) -> dict:
    renames = _RENAMES.get(command, {})
    params = {}
    alpha = getattr(args, "alpha", None)
    for flag in _COMMANDS[command]:
        dest = flag.replace("-", "_")
        value = getattr(args, dest)
        if value is None:
            continue
        params[renames.get(flag, flag).replace("-", "_")] = value
    # --alpha is shorthand for both trade-offs where a command has two
    if alpha is not None and command in ("cl-vs-mp", "cl-async-vs-sync",
                                         "scalability"):
        params.pop("alpha", None)
        params.setdefault("alpha_mp", alpha)
        params.setdefault("alpha_cl", alpha)
    return params


def _dump_instance(args: argparse.Namespace) -> str:
    n = args.n if args.n is not None else 300
    epsilon = args.epsilon if args.epsilon is not None else 1.0
    alpha = args.alpha if args.alpha is not None else \
        experiments.ALPHA_MEAN_ESTIMATION
    sigma = args.sigma if args.sigma is not None else experiments.SIGMA_MOONS
    inst = generate_two_moons_instance(n, epsilon, (args.seed, 0))
    graph = build_gaussian_kernel_graph(inst.auxiliary_points, sigma)
    cfg = MpConfig(alpha=alpha)
    theta_c = solve_closed_form(graph, inst.solitary_models,
                                inst.confidences, cfg)
    theta_u = solve_closed_form(graph, inst.solitary_models, np.ones(n), cfg)
    inst.metadata["alpha"] = alpha
    inst.metadata["sigma"] = sigma
    inst.metadata["mp_confidence_models"] = theta_c.tolist()
    inst.metadata["mp_uniform_models"] = theta_u.tolist()
    out = args.out or "instance.json"
    with open(out, "w") as fh:
        fh.write(inst.to_json())
        fh.write("\n")
    return out


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "dump-instance":
            out = _dump_instance(args)
            print(f"wrote {out}")
            return 0
        params = _collect_params(args, args.command)
        config, rows = experiments.run_experiment(args.command, **params)
        out = args.out or f"{args.command}.{args.format}"
        experiments.write_rows(out, config, rows, fmt=args.format)
        print(f"wrote {out} ({len(rows)} rows)")
        return 0
    except PeerLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
