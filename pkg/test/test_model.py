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
"""Tests the atom model and its steady state."""
import math
from test.util import (
    max_abs_diff,
    random_param_sets,
    trapping_point,
    working_point,
)

import numpy as np
import pytest

from lambdachd.errors import InvalidParams, NonUniqueSteadyState
from lambdachd.model import (
    ADJOINT,
    as_transition,
    build_bloch_generator,
    dark_state,
    generator_eigenvalues,
    LambdaParams,
    OPERATOR_COUNT,
    OperatorIndex,
    POPULATIONS,
    saturation_parameter,
    solve_steady_state,
    stationary,
    SteadyState,
    trapping_fidelity,
    TRACE_ROW,
    WORKING_POINT,
)


def test_params_validation() -> None:
    """Tests the parameter invariants."""
    params = LambdaParams(
        omega_a=1,
        omega_b="2.5",  # type: ignore[arg-type]
        delta_a=0,
        delta_b=-1,
        gamma_a=1,
        gamma_b=0)
    assert params.omega_b == 2.5
    assert isinstance(params.omega_a, float)
    assert params.gamma == 1.0
    with pytest.raises(InvalidParams, match="gamma_a must be positive"):
        WORKING_POINT.replace(gamma_a=0.0)
    with pytest.raises(InvalidParams, match="gamma_b must be non-negative"):
        WORKING_POINT.replace(gamma_b=-0.1)
    with pytest.raises(InvalidParams, match="Rabi frequencies"):
        WORKING_POINT.replace(omega_a=-1.0)
    with pytest.raises(InvalidParams, match="finite"):
        WORKING_POINT.replace(delta_a=math.inf)
    with pytest.raises(InvalidParams, match="must be a number"):
        WORKING_POINT.replace(delta_b="x")  # type: ignore[arg-type]
    with pytest.raises(ValueError, match="unknown transition"):
        as_transition("c")


def test_units() -> None:
    """Tests the conversion from MHz."""
    params = LambdaParams.from_mhz(
        omega_a=1.12 * 14.7,
        omega_b=2.15 * 14.7,
        delta_a=3.4 * 14.7,
        delta_b=2.38 * 14.7)
    assert params.gamma_a == 1.0
    for name in ("omega_a", "omega_b", "delta_a", "delta_b", "gamma_b"):
        assert getattr(params, name) == pytest.approx(
            getattr(WORKING_POINT, name), rel=1e-12)
    assert WORKING_POINT.gamma_b == pytest.approx(0.367, abs=1e-3)
    doubled = WORKING_POINT.replace(
        omega_a=2.24, omega_b=4.3, delta_a=6.8, delta_b=4.76, gamma_a=2.0,
        gamma_b=2.0 * WORKING_POINT.gamma_b)
    assert doubled.scaled() == WORKING_POINT


def test_operator_index() -> None:
    """Tests the operator ordering."""
    labels = [op.label for op in OperatorIndex]
    assert labels == ["ee", "ae", "be", "ea", "aa", "ba", "eb", "ab", "bb"]
    assert OPERATOR_COUNT == 9
    assert POPULATIONS == (
        OperatorIndex.EE, OperatorIndex.AA, OperatorIndex.BB)
    assert OperatorIndex.AE.adjoint() is OperatorIndex.EA
    assert OperatorIndex.BB.adjoint() is OperatorIndex.BB
    assert OperatorIndex.from_levels("a", "b") is OperatorIndex.AB
    assert OperatorIndex.AB.levels == ("a", "b")
    assert list(ADJOINT[ADJOINT]) == list(range(OPERATOR_COUNT))
    assert list(TRACE_ROW.real) == [1, 0, 0, 0, 1, 0, 0, 0, 1]
    with pytest.raises(ValueError, match="unknown operator label"):
        OperatorIndex.from_label("ex")
    with pytest.raises(ValueError):
        TRACE_ROW[0] = 2.0


def test_generator_entries() -> None:
    """Tests selected entries of the Bloch generator."""
    gen = build_bloch_generator(WORKING_POINT)
    m = gen.m
    ae, ab, ee, aa = (
        OperatorIndex.AE, OperatorIndex.AB, OperatorIndex.EE, OperatorIndex.AA)
    assert m[ae, ab] == -1.075j
    assert m[ae, ee] == 0.56j
    assert m[ae, aa] == -0.56j
    assert m[ae, ae] == pytest.approx(-(0.5 * WORKING_POINT.gamma + 3.4j))
    assert m[ab, ab] == pytest.approx(-1j * (3.4 - 2.38))
    assert m[aa, ee] == 1.0
    assert m[OperatorIndex.BB, ee] == WORKING_POINT.gamma_b
    # conjugate rows
    for row in OperatorIndex:
        np.testing.assert_array_equal(
            m[row.adjoint(), ADJOINT], np.conj(m[row, :]))
    with pytest.raises(ValueError):
        m[0, 0] = 1.0


def test_generator_undriven() -> None:
    """Tests the generator without lasers."""
    params = LambdaParams(
        omega_a=0, omega_b=0, delta_a=0, delta_b=0, gamma_a=1, gamma_b=0.4)
    m = build_bloch_generator(params).m
    half = -0.5 * params.gamma
    for op in (
            OperatorIndex.AE,
            OperatorIndex.BE,
            OperatorIndex.EA,
            OperatorIndex.EB):
        assert m[op, op] == half
        row = np.delete(m[op], int(op))
        assert np.all(row == 0.0)
    assert np.all(m[OperatorIndex.AB] == 0.0)
    assert m[OperatorIndex.EE, OperatorIndex.EE] == -params.gamma
    with pytest.raises(NonUniqueSteadyState, match="not unique"):
        solve_steady_state(build_bloch_generator(params))


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_generator_properties(seed: int) -> None:
    """Tests trace preservation and the spectrum of the generator."""
    for params in random_param_sets(10, seed):
        gen = build_bloch_generator(params)
        assert gen.trace_defect() < 1e-14
        evals = generator_eigenvalues(gen)
        assert abs(evals[0]) < 1e-9
        assert float(np.max(evals[1:].real)) < -1e-10


@pytest.mark.parametrize("seed", [4, 5])
def test_steady_state(seed: int) -> None:
    """Tests the steady state on random parameters."""
    for params in [WORKING_POINT] + random_param_sets(10, seed):
        gen, ss = stationary(params)
        assert ss.trace() == pytest.approx(1.0, abs=1e-13)
        assert max_abs_diff(gen.m @ ss.alpha, 0.0) < 1e-10
        rho = ss.density_matrix()
        assert max_abs_diff(rho, rho.conj().T) < 1e-15
        assert float(np.min(np.linalg.eigvalsh(rho))) > -1e-12
        assert min(ss.populations) >= -1e-14
        assert ss.dipole == ss.ea == ss["ea"]
        assert ss.ae == pytest.approx(ss.ea.conjugate())
        restored = SteadyState.from_density_matrix(rho)
        np.testing.assert_array_equal(restored.alpha, ss.alpha)


def test_steady_state_invalid() -> None:
    """Tests the validation of steady state vectors."""
    with pytest.raises(InvalidParams, match="9 entries"):
        SteadyState(alpha=np.zeros(3))
    with pytest.raises(InvalidParams, match="finite"):
        SteadyState(alpha=np.full(OPERATOR_COUNT, np.nan))


def test_dark_state() -> None:
    """Tests the exact trapping state at two-photon resonance."""
    params = trapping_point()
    ss = stationary(params).ss
    assert ss.ee < 1e-10
    dark = dark_state(params)
    assert max_abs_diff(ss.density_matrix(), np.outer(dark, dark.conj())) \
        < 1e-10
    total = params.omega_a ** 2 + params.omega_b ** 2
    assert ss.aa == pytest.approx(params.omega_b ** 2 / total, abs=1e-10)
    assert ss.bb == pytest.approx(params.omega_a ** 2 / total, abs=1e-10)
    assert abs(ss["ab"]) == pytest.approx(
        params.omega_a * params.omega_b / total, abs=1e-10)
    assert trapping_fidelity(ss, params) == pytest.approx(1.0, abs=1e-10)
    assert trapping_fidelity(stationary(WORKING_POINT).ss, WORKING_POINT) \
        < 1.0 - 1e-3
    with pytest.raises(InvalidParams, match="non-zero Rabi frequency"):
        dark_state(params.replace(omega_a=0.0, omega_b=0.0))


@pytest.mark.parametrize("seed", [6, 7])
def test_dark_state_random(seed: int) -> None:
    """Tests trapping for random Rabi frequencies."""
    rng = np.random.default_rng(seed)
    for _ in range(50):
        omega_a, omega_b = rng.uniform(0.1, 5.0, size=2)
        delta = float(rng.uniform(-5.0, 5.0))
        params = working_point(
            omega_a=float(omega_a),
            omega_b=float(omega_b),
            delta_a=delta,
            delta_b=delta)
        ss = stationary(params).ss
        dark = dark_state(params)
        assert max_abs_diff(
            ss.density_matrix(), np.outer(dark, dark.conj())) < 1e-10


def test_trapping_dip() -> None:
    """Tests that the excitation vanishes at two-photon resonance."""
    deltas = np.linspace(-2.0, 8.0, 1001)
    pops = [stationary(working_point(delta_a=float(delta))).ss.ee
            for delta in deltas]
    assert abs(float(deltas[int(np.argmin(pops))]) - 2.38) <= 0.01
    assert min(pops) < 1e-10


def test_saturation() -> None:
    """Tests the saturation parameters of the working point."""
    assert saturation_parameter(WORKING_POINT, "a") == pytest.approx(
        0.1, abs=1e-3)
    assert saturation_parameter(WORKING_POINT, "b") == pytest.approx(
        0.8, abs=5e-3)
    assert saturation_parameter(working_point(omega_a=0.0), "a") == 0.0
