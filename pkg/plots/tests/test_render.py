"""Rendering runs against real CLI outputs and is deterministic.

The datasets are produced by invoking the primary package's command line
(its public interface), never by importing its internals: a bright-soliton
trajectory, a collision-region sweep, a head-on bright-dark collision, and
a step-front trajectory.
"""

import json
import subprocess
import sys

import pytest

from gardnerplots.render import main

SOLITON = {
    "family": "one_soliton",
    "params": {"a": 1.0, "b": -1.0, "sigma": -1},
    "eigenvalues": [{"lambda": 2.718281828459045, "C0": 1.0}],
    "window": [-30, 30],
    "times": {"t0": -0.5, "t1": 0.5, "samples": 21},
}
HEAD_ON = {
    "family": "two_soliton",
    "params": {"a": 1.0, "b": -1.0, "sigma": -1},
    "eigenvalues": [{"lambda": 1.5, "C0": 1.0}, {"lambda": 2.0, "C0": -1.0}],
    "window": [-40, 30],
    "times": {"t0": -4.0, "t1": 4.0, "samples": 81},
}
KINK = {
    "family": "kink",
    "params": {"a": 1.0, "b": 1.0, "sigma": 1},
    "boundary": {"c0": 0.7, "C0": 0.5},
    "window": [-40, 40],
    "times": {"t0": -1.0, "t1": 1.0, "samples": 5},
}
SWEEP = {
    "params": {"a": 1.0, "b": -1.0, "sigma": -1},
    "sweep": {"a": [-3.0, 3.0, 40], "b": [-3.0, -0.05, 40],
              "lambda1_sq": 2.0, "lambda2_sq": 4.0},
}


def run_cli(tmp_path, name, command, doc):
    cfg = tmp_path / f"{name}.json"
    cfg.write_text(json.dumps(doc))
    out = tmp_path / name
    proc = subprocess.run(
        [sys.executable, "-m", "gardnerlattice.cli", command,
         "--config", str(cfg), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(scope="module")
def datasets(tmp_path_factory):
    base = tmp_path_factory.mktemp("cli_outputs")
    return {
        "soliton": run_cli(base, "soliton", "evaluate", SOLITON) / "trajectory.csv",
        "head_on": run_cli(base, "head_on", "evaluate", HEAD_ON) / "trajectory.csv",
        "kink": run_cli(base, "kink", "evaluate", KINK) / "trajectory.csv",
        "regions": run_cli(base, "regions", "sweep", SWEEP) / "region_map.csv",
    }


@pytest.mark.parametrize(
    "dataset,kind",
    [
        ("soliton", "profile"),
        ("soliton", "heatmap"),
        ("soliton", "waterfall"),
        ("head_on", "heatmap"),
        ("head_on", "waterfall"),
        ("kink", "profile"),
        ("kink", "heatmap"),
        ("regions", "region_map"),
    ],
)
def test_render_kinds_and_determinism(datasets, tmp_path, dataset, kind):
    first = tmp_path / f"{dataset}_{kind}_1.png"
    second = tmp_path / f"{dataset}_{kind}_2.png"
    assert main(["--in", str(datasets[dataset]), "--out", str(first), "--kind", kind]) == 0
    assert main(["--in", str(datasets[dataset]), "--out", str(second), "--kind", kind]) == 0
    assert first.stat().st_size > 5000
    assert first.read_bytes() == second.read_bytes()


def test_empty_csv_fails_without_output(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("t,n,u\n")
    out = tmp_path / "never.png"
    assert main(["--in", str(bad), "--out", str(out), "--kind", "profile"]) == 2
    assert not out.exists()


def test_schema_mismatch_fails(tmp_path, datasets):
    bad = tmp_path / "columns.csv"
    bad.write_text("x,y\n1,2\n")
    out = tmp_path / "never.png"
    assert main(["--in", str(bad), "--out", str(out), "--kind", "heatmap"]) == 2
    assert not out.exists()
    # trajectory data fed to the region-map renderer is also rejected
    assert main(["--in", str(datasets["soliton"]), "--out", str(out), "--kind", "region_map"]) == 2
    assert not out.exists()


def test_profile_draws_background_reference(datasets, tmp_path):
    # the meta.json sidecar sits next to the CSV; rendering must consume it
    # without error (reference lines at the far-field levels)
    out = tmp_path / "with_meta.png"
    assert main(["--in", str(datasets["kink"]), "--out", str(out), "--kind", "profile"]) == 0
    assert out.exists()
