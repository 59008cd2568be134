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
"""Tests the brute force oracle and its cross-checks."""
import math
from pathlib import Path
from test.util import HALF_PI, max_abs_diff, random_param_sets

import numpy as np
import pytest

from lambdachd.chd import chd_signal
from lambdachd.errors import InvalidParams, StepTooLarge, TruncationWarning
from lambdachd.model import (
    generator_eigenvalues,
    OperatorIndex,
    stationary,
    WORKING_POINT,
)
from lambdachd.oracle.fixture import (
    FIXTURE_HEADER,
    format_fixture,
    parse_fixture,
    read_fixture,
    write_fixture,
)
from lambdachd.oracle.master import (
    DensityMatrix,
    evolve_master_equation,
    evolve_operator,
    master_terms,
    max_step,
    sigma,
    spectral_gap,
)
from lambdachd.oracle.moments import direct_moment, factor_matrix
from lambdachd.oracle.quadrature import as_kernel, quadrature_transform
from lambdachd.oracle.suite import (
    check_chd,
    check_generator,
    check_moments,
    check_spectra,
    parameter_sets,
    quadrature_phases,
    reference_values,
    settle_time,
)
from lambdachd.regression import (
    CorrelationTrace,
    InitialConditionKind,
    uniform_grid,
)
from lambdachd.spectra import SPECTRUM_KINDS


def test_generator() -> None:
    """Tests the Bloch generator against the master equation."""
    for params in parameter_sets(20, seed=3):
        result = check_generator(params)
        assert result.passed, result
        gap = generator_eigenvalues(stationary(params).gen)[1].real
        assert spectral_gap(params) == pytest.approx(gap, abs=1e-8)
        assert spectral_gap(params) < 0.0


def test_moments() -> None:
    """Tests the equal-time moments against explicit operator algebra."""
    for params in parameter_sets(100, seed=4):
        for result in check_moments(params):
            assert result.passed, result
    ss = stationary(WORKING_POINT).ss
    assert abs(direct_moment(ss, ["ee"]) - ss.ee) < 1e-14
    assert abs(direct_moment(ss, ["ea"]) - ss.ea) < 1e-14
    assert abs(direct_moment(ss, ["dea"])) < 1e-14
    with pytest.raises(ValueError, match="invalid factor"):
        factor_matrix("ex", ss.density_matrix())
    with pytest.raises(ValueError, match="invalid factor"):
        factor_matrix("xea", ss.density_matrix())


def test_chd_oracle() -> None:
    """Tests both correlation branches against the master equation."""
    for phi in quadrature_phases(WORKING_POINT):
        result = check_chd(WORKING_POINT, phi, tau_max=4.0)
        assert result.passed, result
    for params in random_param_sets(2, seed=5):
        result = check_chd(
            params, quadrature_phases(params)[1], tau_max=2.0)
        assert result.passed, result


def test_spectra_oracle() -> None:
    """Tests the resolvent spectra against trapezoid transforms."""
    for params in parameter_sets(3, seed=6):
        for phi in quadrature_phases(params):
            results = check_spectra(params, phi)
            assert {result.name for result in results} == {
                f"spectrum_{kind}" for kind in SPECTRUM_KINDS
            }
            for result in results:
                assert result.passed, result


def test_quadrature_transform() -> None:
    """Tests trapezoid transforms of an exponential decay."""
    taus = uniform_grid(0.001, 40.0)
    trace = CorrelationTrace(
        taus,
        np.exp(-taus),
        InitialConditionKind.SECOND_ORDER,
        WORKING_POINT)
    omegas = np.array([0.0, 0.5, 2.0])
    cos = quadrature_transform(trace, omegas, "cosine")
    assert np.isrealobj(cos)
    assert max_abs_diff(cos, 1.0 / (1.0 + omegas ** 2)) < 1e-6
    full = quadrature_transform(trace, omegas, as_kernel("complex"))
    assert max_abs_diff(full, 1.0 / (1.0 + 1j * omegas)) < 1e-6
    short = CorrelationTrace(
        taus[:1001],
        np.exp(-taus[:1001]),
        InitialConditionKind.SECOND_ORDER,
        WORKING_POINT)
    with pytest.warns(TruncationWarning, match="truncated"):
        quadrature_transform(short, 0.0, "cosine")
    with pytest.raises(ValueError, match="unknown kernel"):
        as_kernel("sine")


def test_density_matrix() -> None:
    """Tests density matrix validation."""
    rho = DensityMatrix.pure("e")
    assert rho.population("e") == 1.0
    assert rho.population("a") == 0.0
    mixed = DensityMatrix(np.diag([0.2, 0.3, 0.5]).astype(np.complex128))
    assert abs(mixed.population("b") - 0.5) < 1e-15
    with pytest.raises(InvalidParams, match="3x3"):
        DensityMatrix(np.eye(2) / 2.0)
    with pytest.raises(InvalidParams, match="Hermitian"):
        DensityMatrix(np.eye(3) / 3.0 + 0.1j * sigma("e", "a"))
    with pytest.raises(InvalidParams, match="unit trace"):
        DensityMatrix(np.eye(3))
    with pytest.raises(InvalidParams, match="positive"):
        DensityMatrix(np.diag([1.5, -0.5, 0.0]).astype(np.complex128))


def test_evolution() -> None:
    """Tests the step control of the master equation integration."""
    limit = max_step(WORKING_POINT)
    assert abs(limit - 0.01 / 3.4) < 1e-15
    rho = evolve_master_equation(WORKING_POINT, DensityMatrix.pure("a"), 1.0)
    assert abs(np.trace(rho.matrix) - 1.0) < 1e-10
    assert rho.population("e") > 0.0
    with pytest.raises(ValueError, match="exceeds the largest step"):
        evolve_master_equation(
            WORKING_POINT, DensityMatrix.pure("a"), 1.0, 2.0 * limit)
    terms = master_terms(WORKING_POINT)
    with pytest.raises(ValueError, match="invalid integration window"):
        evolve_operator(terms, sigma("a", "a"), 1.0, 0.0)
    with pytest.raises(StepTooLarge, match="trace drifted"):
        evolve_operator(terms, sigma("a", "a"), 20.0, 2.0)


def test_fixture_text() -> None:
    """Tests the fixture file format."""
    values: dict[str, float | complex] = {
        "steady.ee": 0.125,
        "steady.ea": complex(0.25, -1.0 / 3.0),
        "h.phi0.pos.0.5": -0.75,
    }
    text = format_fixture(values, comment="working point")
    lines = text.splitlines()
    assert lines[0] == FIXTURE_HEADER
    assert lines[1] == "# working point"
    assert lines[2] == "h.phi0.pos.0.5 = -0.75"
    assert parse_fixture(text) == values
    with pytest.raises(ValueError, match="missing fixture header"):
        parse_fixture("steady.ee = 0.1\n")
    with pytest.raises(ValueError, match="expected 'key = value'"):
        parse_fixture(f"{FIXTURE_HEADER}\nsteady.ee 0.1\n")
    with pytest.raises(ValueError, match="duplicate key"):
        parse_fixture(f"{FIXTURE_HEADER}\na = 1\na = 2\n")
    with pytest.raises(ValueError, match="invalid fixture key"):
        format_fixture({"a b": 1.0})


def test_reference_values(tmp_path: Path) -> None:
    """
    Tests that oracle reference values agree with the main computation path.

    Args:
        tmp_path (Path): A temporary folder.
    """
    values = reference_values(WORKING_POINT)
    path = tmp_path / "reference.txt"
    write_fixture(path, values)
    assert read_fixture(path) == values
    assert values["params.delta_a"] == 3.4
    ss = stationary(WORKING_POINT).ss
    tolerance = max(
        1e-8,
        10.0 * math.exp(
            spectral_gap(WORKING_POINT) * settle_time(WORKING_POINT)))
    for op in OperatorIndex:
        assert abs(values[f"steady.{op.label}"] - ss[op]) < tolerance
    taus = uniform_grid(0.01, 2.0)
    for phi_name, phi in (("0", 0.0), ("pi2", HALF_PI)):
        signal = chd_signal(WORKING_POINT, phi, taus)
        for tau in (0.5, 1.0, 2.0):
            ix = int(round(tau / 0.01))
            pos = values[f"h.phi{phi_name}.pos.{tau:g}"]
            neg = values[f"h.phi{phi_name}.neg.{tau:g}"]
            assert abs(pos - signal.h_positive[ix]) < 1e-6
            assert abs(neg - signal.h_negative[ix]) < 1e-6
