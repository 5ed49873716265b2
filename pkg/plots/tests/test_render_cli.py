"""Render CLI behavior: happy paths, validation, and byte stability."""

import subprocess
import sys

import pytest

from peerfigs.cli import main as render_main
from peerfigs.io import RESULT_COLUMNS


def _render(argv):
    return render_main(argv)


def test_every_figure_id_renders_an_image(harness_outputs, tmp_path, capsys):
    jobs = {
        "moons-models": [str(harness_outputs["instance"])],
        "mean-estimation": [str(harness_outputs["confidence-sweep"]),
                            str(harness_outputs["mp-async-vs-sync"])],
        "classification": [str(harness_outputs["cl-vs-mp"]),
                           str(harness_outputs["cl-async-vs-sync"])],
        "scalability": [str(harness_outputs["scalability"])],
    }
    before = {name: path.read_bytes() for name, path in
              harness_outputs.items()}
    for figure, inputs in jobs.items():
        out = tmp_path / f"{figure}.png"
        rc = _render(["--figure", figure, "--in", *inputs,
                      "--out", str(out)])
        captured = capsys.readouterr()
        assert rc == 0, captured.err
        assert f"wrote {out}" in captured.out
        assert out.stat().st_size > 0
    # rendering must never touch its inputs
    for name, path in harness_outputs.items():
        assert path.read_bytes() == before[name]


@pytest.mark.parametrize("suffix", ["png", "svg"])
def test_repeated_renders_are_byte_identical(harness_outputs, tmp_path,
                                             suffix):
    inputs = [str(harness_outputs["confidence-sweep"]),
              str(harness_outputs["mp-async-vs-sync"])]
    outs = [tmp_path / f"first.{suffix}", tmp_path / f"second.{suffix}"]
    for out in outs:
        assert _render(["--figure", "mean-estimation", "--in", *inputs,
                        "--out", str(out)]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_empty_csv_exits_nonzero(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(RESULT_COLUMNS) + "\n")
    rc = _render(["--figure", "scalability", "--in", str(empty),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "no data rows" in capsys.readouterr().err


def test_blank_file_exits_nonzero(tmp_path, capsys):
    blank = tmp_path / "blank.csv"
    blank.write_text("")
    rc = _render(["--figure", "scalability", "--in", str(blank),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_missing_column_is_named(harness_outputs, tmp_path, capsys):
    lines = harness_outputs["scalability"].read_text().splitlines()
    header = lines[1].split(",")
    drop = header.index("x_value")
    mangled = [lines[0]] + [",".join(row.split(",")[:drop]
                                     + row.split(",")[drop + 1:])
                            for row in lines[1:]]
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(mangled) + "\n")
    rc = _render(["--figure", "scalability", "--in", str(bad),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 1
    err = capsys.readouterr().err
    assert "x_value" in err and "missing required column" in err


def test_unknown_figure_id_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        _render(["--figure", "mystery", "--in", "a.csv",
                 "--out", str(tmp_path / "x.png")])
    assert exc.value.code == 2


def test_moons_figure_requires_exactly_one_input(harness_outputs, tmp_path,
                                                 capsys):
    rc = _render(["--figure", "moons-models",
                  "--in", str(harness_outputs["instance"]),
                  str(harness_outputs["scalability"]),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "exactly one" in capsys.readouterr().err


def test_missing_input_file_exits_nonzero(tmp_path, capsys):
    rc = _render(["--figure", "scalability",
                  "--in", str(tmp_path / "nope.csv"),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_module_help_lists_figure_ids():
    proc = subprocess.run(
        [sys.executable, "-m", "peerfigs.cli", "--help"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    for figure in ("moons-models", "mean-estimation", "classification",
                   "scalability"):
        assert figure in proc.stdout
