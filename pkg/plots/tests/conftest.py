"""Shared fixtures: real harness outputs at miniature sizes.

The renderer consumes only the harness's external formats, so the
fixtures produce genuine files through its command line rather than
hand-written approximations.
"""

import matplotlib.pyplot as plt
import pytest

from peerlearn.cli import main as harness_main

_TINY = {
    "confidence-sweep": [
        "confidence-sweep", "--n", "30", "--eps-grid", "0,1",
        "--instances", "2"],
    "mp-async-vs-sync": [
        "mp-async-vs-sync", "--n", "20", "--runs", "2", "--budget", "2000",
        "--sample-every", "500"],
    "cl-vs-mp": [
        "cl-vs-mp", "--n", "10", "--p-grid", "2,3", "--instances", "2",
        "--cl-rounds", "10", "--inner-budget", "5", "--sigma", "5.0",
        "--per-agent-dim", "3"],
    "cl-async-vs-sync": [
        "cl-async-vs-sync", "--n", "12", "--p", "3", "--runs", "2",
        "--budget", "600", "--sample-every", "200", "--sigma", "5.0",
        "--inner-budget", "3"],
    "scalability": [
        "scalability", "--n-grid", "12,16", "--p", "2", "--k", "3",
        "--instances", "1", "--budget", "400", "--sample-every", "50",
        "--plateau-rounds", "5", "--inner-budget", "3"],
}


@pytest.fixture(scope="session")
def harness_outputs(tmp_path_factory):
    root = tmp_path_factory.mktemp("results")
    paths = {}
    for name, argv in _TINY.items():
        out = root / f"{name}.csv"
        assert harness_main(argv + ["--seed", "3", "--out", str(out)]) == 0
        paths[name] = out
    instance = root / "instance.json"
    assert harness_main(["dump-instance", "--n", "20", "--seed", "3",
                         "--out", str(instance)]) == 0
    paths["instance"] = instance
    return paths


@pytest.fixture(autouse=True)
def _close_figures():
    yield
    plt.close("all")
