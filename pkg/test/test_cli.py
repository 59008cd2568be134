# Copyright 2026 The lambdachd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Tests configurations, presets, runners, and the command line."""
import io
import logging
import math
import os
from collections.abc import Iterator
from pathlib import Path
from test.util import HALF_PI

import pytest

from lambdachd.__main__ import main
from lambdachd.cli.config import default_config, load_config, parse_config
from lambdachd.cli.csvout import (
    Dataset,
    format_cell,
    read_dataset,
    write_dataset,
)
from lambdachd.cli.presets import expand_target, list_presets, load_preset
from lambdachd.cli.runs import execute
from lambdachd.cli.sweep import run_points
from lambdachd.errors import ConfigError
from lambdachd.model import GAMMA_A_MHZ, WORKING_POINT


SMALL_SPECTRUM = """
command = "spectrum"
kinds = ["incoherent", "squeezing"]

[grid]
omega_count = 11

[sweep]
omega_a = [0.5, 1.12]
"""


@pytest.mark.parametrize("text, match", [
    ("phi = []", "phi must not be empty"),
    ("foo = 1", "unknown key 'foo'"),
    ("[params]\nomega_x = 1.0", "unknown key 'params.omega_x'"),
    ("[params]\ngamma_a = 0.0", "params: gamma_a must be positive"),
    (
        "[sweep]\nomega_a = [1.0]\nomega_b = [1.0]\ndelta_a = [1.0]",
        "at most 2 parameters",
    ),
    (
        "[sweep]\ndelta_a = {start = 0.0, stop = 1.0, count = 0}",
        "count must be at least 1",
    ),
    ("[sweep]\ndelta_a = {start = 0.0, stop = 1.0}", "is missing"),
    ("[sweep]\ndelta_a = []", "sweep.delta_a is empty"),
    ("eta = 1.5", "eta must be in"),
    ("command = \"fly\"", "command must be one of"),
    ("kinds = [\"bogus\"]", "kinds:"),
    ("units = \"ghz\"", "units must be one of"),
    ("[grid]\ntau_step = 0.0", "tau_step must be positive"),
    ("[grid]\nomega_min = 1.0\nomega_max = 0.0", "omega_max"),
    ("phi = [", "<config>"),
])
def test_config_errors(text: str, match: str) -> None:
    """
    Tests that invalid configurations are rejected.

    Args:
        text (str): The configuration.

        match (str): The expected error message.
    """
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_config_defaults() -> None:
    """Tests the configuration used without a file."""
    config = default_config()
    assert config.command is None
    assert config.units == "scaled"
    assert config.params == WORKING_POINT
    assert config.phi == (0.0, HALF_PI)
    assert config.eta == 1.0
    assert config.kinds == ("incoherent",)
    assert config.grid.tau_grid() is None
    points = config.points()
    assert len(points) == 1
    assert points[0].coords == ()
    assert points[0].params == WORKING_POINT
    default_hash = parse_config("").config_hash
    assert default_hash != parse_config("eta = 0.5").config_hash


def test_units() -> None:
    """Tests parameters given in MHz."""
    config = parse_config("[params]\ndelta_a = 20.0", units="mhz")
    assert config.units == "mhz"
    assert config.params.delta_a == 20.0
    scaled = config.point_params(())
    assert abs(scaled.delta_a - 20.0 / GAMMA_A_MHZ) < 1e-12
    assert scaled.gamma_a == 1.0
    assert abs(scaled.omega_b - WORKING_POINT.omega_b) < 1e-12
    same = parse_config("units = \"mhz\"\n[params]\ndelta_a = 20.0")
    assert same.point_params(()) == scaled
    assert parse_config("units = \"mhz\"", units="scaled").units == "scaled"


def test_points() -> None:
    """Tests the expansion of a two dimensional sweep."""
    config = parse_config(
        "[sweep]\nomega_a = [1.0, 2.0]\n"
        "delta_a = {start = 3.0, stop = 5.0, count = 3}")
    assert config.axis_names == ("omega_a", "delta_a")
    coords = [point.coords for point in config.points()]
    assert coords == [
        (1.0, 3.0),
        (1.0, 4.0),
        (1.0, 5.0),
        (2.0, 3.0),
        (2.0, 4.0),
        (2.0, 5.0),
    ]
    assert config.points()[4].params == WORKING_POINT.replace(
        omega_a=2.0, delta_a=4.0)
    invalid = parse_config("[sweep]\nomega_a = [1.0, -1.0]")
    with pytest.raises(ConfigError, match="invalid sweep point"):
        invalid.points()


def test_load_config(tmp_path: Path) -> None:
    """
    Tests loading configuration files.

    Args:
        tmp_path (Path): A temporary folder.
    """
    path = tmp_path / "scan.toml"
    path.write_text("command = \"chd\"\neta = 0.5\n", encoding="utf-8")
    config = load_config(path)
    assert config.command == "chd"
    assert config.eta == 0.5
    assert config.source == os.fspath(path)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.toml")


def test_presets() -> None:
    """Tests the bundled presets."""
    names = list_presets()
    assert names[:2] == ["fig2-lower", "fig2-upper"]
    assert names.index("fig9-upper") < names.index("fig10")
    assert names.index("fig6") < names.index("fig6-omega")
    assert expand_target("fig2") == ["fig2-lower", "fig2-upper"]
    assert expand_target("fig6") == ["fig6", "fig6-omega"]
    assert expand_target("fig4") == ["fig4"]
    assert expand_target("fig9-lower") == ["fig9-lower"]
    assert expand_target("all") == names
    with pytest.raises(ConfigError, match="unknown target"):
        expand_target("fig1")
    with pytest.raises(ConfigError, match="unknown preset"):
        load_preset("fig1")
    for name in names:
        config = load_preset(name)
        assert config.command is not None, name
        assert config.description, name
        assert config.source == f"preset:{name}"
        assert config.points(), name


def test_steady_scan() -> None:
    """Tests that the detuning scan finds the trapping dip."""
    config = load_preset("fig2-lower")
    dataset = execute(
        "steady-scan", config, "test", threads=2, progress=False)
    assert dataset.columns == (
        "delta_a",
        "alpha_ee",
        "alpha_aa",
        "alpha_bb",
        "saturation_a",
        "dark_population",
    )
    assert len(dataset.rows) == 1001
    lowest = min(dataset.rows, key=lambda row: float(row[1]))
    assert abs(float(lowest[0]) - WORKING_POINT.delta_b) < 0.01
    assert float(lowest[1]) < 1e-6
    for row in dataset.rows:
        total = float(row[1]) + float(row[2]) + float(row[3])
        assert abs(total - 1.0) < 1e-10


def _csv_text(dataset: Dataset) -> str:
    fout = io.StringIO()
    write_dataset(dataset, fout)
    return fout.getvalue()


def test_spectrum_csv() -> None:
    """Tests that the output does not depend on the thread count."""
    config = parse_config(SMALL_SPECTRUM, "small")
    single = _csv_text(
        execute("spectrum", config, "test", threads=1, progress=False))
    multi = _csv_text(
        execute("spectrum", config, "test", threads=3, progress=False))
    assert single == multi
    metadata, rows = read_dataset(io.StringIO(single))
    assert metadata["quantity"] == "spectrum"
    assert metadata["version"] == "test"
    assert metadata["sweep"] == "omega_a[2]"
    assert metadata["kinds"] == "incoherent squeezing"
    assert metadata["config"].startswith("small ")
    assert len(rows) == 2 * (11 + 2 * 11)
    incoherent = [row for row in rows if row["kind"] == "incoherent"]
    assert len(incoherent) == 22
    assert all(row["phi"] == "nan" for row in incoherent)
    assert all(float(row["coherent_weight"]) > 0.0 for row in incoherent)
    squeezing = [row for row in rows if row["kind"] == "squeezing"]
    assert {row["phi"] for row in squeezing} == {"0", format_cell(HALF_PI)}
    assert all(row["coherent_weight"] == "nan" for row in squeezing)
    assert rows[0]["omega_a"] == "0.5"


def test_chd_run() -> None:
    """Tests the correlation runner on and off two-photon resonance."""
    config = parse_config(
        "phi = [0.0]\n[grid]\ntau_step = 0.1\ntau_max = 1.0\n"
        "[sweep]\ndelta_a = [2.38, 3.4]")
    dataset = execute("chd", config, "test", threads=1, progress=False)
    assert len(dataset.rows) == 2 * 21
    trapped = dataset.rows[:21]
    regular = dataset.rows[21:]
    assert all(row[-1] == 0 for row in trapped)
    assert all(row[-1] == 1 for row in regular)
    assert all(math.isnan(float(row[4])) for row in regular[:10])
    assert all(not math.isnan(float(row[4])) for row in regular[10:])
    assert float(regular[10][2]) == 0.0
    taus = [float(row[2]) for row in regular]
    assert taus == sorted(taus)


def test_variance_map_run() -> None:
    """Tests the variance map runner."""
    config = parse_config(
        "phi = [1.5707963267948966]\n[sweep]\n"
        "omega_a = [0.1, 1.0]\ndelta_a = [2.0, 2.4, 3.0]")
    dataset = execute(
        "variance-map", config, "test", threads=1, progress=False)
    assert dataset.columns == ("omega_a", "delta_a", "phi", "variance")
    assert [row[:2] for row in dataset.rows] == [
        (0.1, 2.0),
        (0.1, 2.4),
        (0.1, 3.0),
        (1.0, 2.0),
        (1.0, 2.4),
        (1.0, 3.0),
    ]
    single = parse_config("[sweep]\nomega_a = [0.1, 1.0]")
    with pytest.raises(ConfigError, match="exactly two"):
        execute("variance-map", single, "test", progress=False)
    with pytest.raises(ConfigError, match="cannot be used with"):
        execute("chd", load_preset("fig2-lower"), "test", progress=False)


def test_run_points() -> None:
    """Tests that parallel evaluation keeps the order of the points."""
    points = list(range(50))
    assert run_points(
        lambda val: val * val, points, threads=4, progress=False) == [
            val * val for val in points
        ]
    assert run_points(lambda val: val, [], threads=2, progress=False) == []
    with pytest.raises(ValueError, match="must be positive"):
        run_points(lambda val: val, points, threads=0, progress=False)
    with pytest.raises(ValueError, match="2 cells"):
        Dataset("x", ("a",)).add_rows([(1, 2)])


@pytest.fixture
def cli_logging() -> Iterator[None]:
    """
    Removes the handlers the command line installs.

    Yields:
        None: Nothing.
    """
    yield
    logging.getLogger("lambdachd").handlers.clear()


@pytest.mark.usefixtures("cli_logging")
def test_main(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """
    Tests the exit codes of the command line.

    Args:
        tmp_path (Path): A temporary folder.

        capsys (pytest.CaptureFixture[str]): Captures the output.
    """
    out = tmp_path / "out"
    config = tmp_path / "scan.toml"
    config.write_text(
        "command = \"steady-scan\"\n[sweep]\ndelta_a = [2.0, 3.0]\n",
        encoding="utf-8")
    assert main([
        "steady-scan",
        "--config",
        os.fspath(config),
        "--out",
        os.fspath(out),
        "--threads",
        "1",
    ]) == 0
    with open(out / "scan.csv", "r", encoding="utf-8") as fin:
        metadata, rows = read_dataset(fin)
    assert metadata["quantity"] == "steady_state"
    assert [row["delta_a"] for row in rows] == ["2", "3"]

    assert main(["chd", "--config", os.fspath(config)]) == 2
    assert "cannot be used with" in capsys.readouterr().err
    broken = tmp_path / "broken.toml"
    broken.write_text("eta = 2.0\n", encoding="utf-8")
    assert main(["squeezing", "--config", os.fspath(broken)]) == 2
    assert main(["steady-scan", "--threads", "0"]) == 2
    assert main(["reproduce", "fig1"]) == 2
    capsys.readouterr()

    assert main(["steady-scan", "--units", "mhz", "--threads", "1"]) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("# quantity: steady_state\n")
    assert "# units: mhz\n" in captured

    assert main([
        "reproduce", "fig4", "--out", os.fspath(out), "--threads", "1",
    ]) == 0
    assert (out / "fig4.csv").exists()

    assert main(["validate", "--fast", "--random", "0"]) == 0
    assert "checks passed" in capsys.readouterr().out
    assert main(["validate", "--random", "-1"]) == 2
