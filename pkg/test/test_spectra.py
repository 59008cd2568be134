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
"""Tests the emission, CHD, and squeezing spectra."""
import cmath
import math
from test.util import (
    HALF_PI,
    max_abs_diff,
    random_param_sets,
    trapping_point,
    working_point,
)

import numpy as np
import pytest

from lambdachd.errors import InvalidParams, VanishingExcitation
from lambdachd.model import stationary, WORKING_POINT
from lambdachd.oracle.suite import check_sum_rules, quadrature_phases
from lambdachd.regression import second_order_initial
from lambdachd.spectra import (
    as_spectrum_kind,
    BRANCHES,
    chd_spectrum,
    chd_spectrum_split,
    coherent_weight,
    Efficiency,
    full_line_grid,
    incoherent_spectrum,
    integrate_spectrum,
    omega_grid,
    resolvent_solve,
    squeezing_spectrum,
    variance,
    variance_map,
)


def test_grids() -> None:
    """Tests the frequency grids."""
    grid = omega_grid()
    assert grid.size == 2001
    assert grid[0] == -8.0 and grid[-1] == 8.0
    assert omega_grid(0.0, 1.0, 3).tolist() == [0.0, 0.5, 1.0]
    with pytest.raises(ValueError, match="count"):
        omega_grid(0.0, 1.0, 0)
    with pytest.raises(ValueError, match="empty"):
        omega_grid(1.0, 0.0)
    line = full_line_grid()
    assert line.size == 8001
    assert np.all(np.diff(line) > 0.0)
    assert line[0] < -1e3 and line[-1] > 1e3
    half = full_line_grid(positive_only=True)
    assert half[0] == 0.0
    assert np.all(np.diff(half) > 0.0)
    refined = full_line_grid(resonances=[0.0j, complex(-0.001, 5.0)])
    assert refined.size == 8001 + 2 * 401
    assert np.all(np.diff(refined) > 0.0)
    assert np.sum(np.abs(refined - 5.0) < 0.01) > 300
    assert np.sum(np.abs(refined + 5.0) < 0.01) > 300
    refined_half = full_line_grid(
        positive_only=True, resonances=[complex(-0.001, 5.0)])
    assert refined_half[0] == 0.0
    assert refined_half.size == 8001 + 401
    with pytest.raises(ValueError, match="unknown spectrum kind"):
        as_spectrum_kind("mollow")


def test_resolvent() -> None:
    """Tests the resolvent solve against its defining equation."""
    gen, ss = stationary(WORKING_POINT)
    v = second_order_initial(ss)
    for omega in (0.0, 0.7, -3.0):
        x = resolvent_solve(gen, omega, v)
        assert x.shape == (9,)
        lhs = 1j * omega * x - gen.m @ x
        assert max_abs_diff(lhs, v) < 1e-12
    batch = resolvent_solve(gen, np.array([0.0, 0.7]), v)
    assert batch.shape == (2, 9)
    assert max_abs_diff(batch[1], resolvent_solve(gen, 0.7, v)) < 1e-14


@pytest.mark.parametrize("phi", [0.0, 0.5, HALF_PI])
def test_spectrum_split(phi: float) -> None:
    """Tests that the parts add up to the positive branch spectrum."""
    second, third = chd_spectrum_split(WORKING_POINT, phi)
    total = chd_spectrum(WORKING_POINT, phi, "positive")
    assert second.kind == "chd_second"
    assert third.kind == "chd_third"
    assert total.kind == "chd_positive"
    assert max_abs_diff(second.values + third.values, total.values) < 1e-9
    negative = chd_spectrum(WORKING_POINT, phi, "negative")
    assert negative.kind == "chd_negative"
    assert np.all(np.isfinite(negative.values))
    with pytest.raises(ValueError, match="unknown branch"):
        chd_spectrum(WORKING_POINT, phi, "both")  # type: ignore[arg-type]


def test_even_spectra() -> None:
    """Tests that the quadrature spectra are even in frequency."""
    grid = omega_grid()
    np.testing.assert_allclose(grid, -grid[::-1], atol=1e-14)
    for spec in (
            chd_spectrum(WORKING_POINT, 0.0, "positive", grid),
            chd_spectrum(WORKING_POINT, HALF_PI, "negative", grid),
            squeezing_spectrum(WORKING_POINT, HALF_PI, 1.0, grid)):
        assert max_abs_diff(spec.values[::-1], spec.values) < 1e-10


def test_in_phase_reconciliation() -> None:
    """Tests that the second-order CHD spectrum of the in-phase quadrature
    is the spectrum of squeezing without detector losses."""
    for params in [WORKING_POINT] + random_param_sets(3, 31):
        phi = cmath.phase(stationary(params).ss.ea)
        second, _ = chd_spectrum_split(params, phi)
        for eta in (1.0, 0.25):
            sqz = squeezing_spectrum(params, phi, eta)
            scale = max(1.0, float(np.max(np.abs(second.values))))
            assert max_abs_diff(second.values, sqz.values / eta) \
                < 1e-9 * scale


def test_squeezing_efficiency() -> None:
    """Tests the detection efficiency."""
    full = squeezing_spectrum(WORKING_POINT, HALF_PI, 1.0)
    half = squeezing_spectrum(WORKING_POINT, HALF_PI, Efficiency(0.5))
    assert max_abs_diff(half.values, 0.5 * full.values) < 1e-14
    assert full.phi == pytest.approx(HALF_PI)
    zero = squeezing_spectrum(WORKING_POINT, HALF_PI, 0.0)
    assert np.all(zero.values == 0.0)
    with pytest.raises(InvalidParams, match="efficiency"):
        squeezing_spectrum(WORKING_POINT, HALF_PI, 1.5)
    with pytest.raises(InvalidParams):
        Efficiency(-0.1)


@pytest.mark.parametrize("seed", [32, 33])
def test_sum_rules(seed: int) -> None:
    """Tests the integrals of the incoherent and squeezing spectra."""
    for params in [WORKING_POINT] + random_param_sets(2, seed):
        for phi in quadrature_phases(params):
            for result in check_sum_rules(params, phi):
                assert result.passed, result


def test_coherent_weight() -> None:
    """Tests that the elastic peak completes the emission spectrum."""
    ss = stationary(WORKING_POINT).ss
    spec = incoherent_spectrum(WORKING_POINT, full_line_grid())
    assert spec.coherent_weight == pytest.approx(
        abs(ss.ea) ** 2 / (math.pi * ss.ee))
    assert coherent_weight(ss) == spec.coherent_weight
    total = integrate_spectrum(spec, include_coherent=True)
    assert total == pytest.approx(1.0, rel=1e-3)
    assert integrate_spectrum(spec) < total


def test_negative_spectra() -> None:
    """Tests sign features of the spectra at the working point."""
    positive = chd_spectrum(WORKING_POINT, HALF_PI, "positive")
    assert float(np.min(positive.values)) < 0.0
    _, third = chd_spectrum_split(WORKING_POINT, 0.0)
    central = third.values[np.abs(third.omega_grid) < 2.0]
    assert central.size > 400
    assert float(np.mean(central < 0.0)) > 0.75
    assert float(np.min(central)) < 0.0
    assert float(np.max(central)) < 0.01


def test_high_frequency_decay() -> None:
    """Tests that the spectra vanish far from the atomic resonances."""
    omegas = np.array([-50.0, 50.0])
    for spec in (
            incoherent_spectrum(WORKING_POINT, omegas),
            chd_spectrum(WORKING_POINT, 0.0, "positive", omegas),
            chd_spectrum(WORKING_POINT, 0.0, "negative", omegas),
            squeezing_spectrum(WORKING_POINT, 0.0, 1.0, omegas)):
        assert float(np.max(np.abs(spec.values))) < 1e-4, spec.kind
    # the one-sided transform falls off as -f'(0) / w^2
    far = np.array([50.0, 100.0])
    for branch in BRANCHES:
        spec = chd_spectrum(WORKING_POINT, HALF_PI, branch, far)
        assert float(np.max(np.abs(spec.values))) < 1e-2
        scaled = spec.values * far ** 2
        assert scaled[1] == pytest.approx(scaled[0], rel=0.1)


def test_trapping() -> None:
    """Tests the spectra at exact coherent population trapping."""
    params = trapping_point()
    with pytest.raises(VanishingExcitation):
        incoherent_spectrum(params)
    with pytest.raises(VanishingExcitation):
        chd_spectrum(params, HALF_PI, "negative")
    with pytest.raises(VanishingExcitation):
        chd_spectrum_split(params, 0.0)
    sqz = squeezing_spectrum(params, HALF_PI, 1.0)
    assert max_abs_diff(sqz.values, 0.0) < 1e-12
    assert abs(variance(params, HALF_PI)) < 1e-12


@pytest.mark.parametrize("seed", [34, 35])
def test_variance(seed: int) -> None:
    """Tests the variance against its closed form."""
    for params in [WORKING_POINT] + random_param_sets(5, seed):
        ss = stationary(params).ss
        incoherent = ss.ee - abs(ss.ea) ** 2
        for phi in (0.0, 0.8, HALF_PI):
            rotated = (cmath.exp(-2j * phi) * ss.ea ** 2).real
            expected = 0.5 * (incoherent - rotated)
            assert variance(params, phi) == pytest.approx(
                expected, abs=1e-14)


def test_variance_map() -> None:
    """Tests the variance map over the probe field and detuning."""
    omegas = np.linspace(0.05, 3.0, 60)
    deltas = np.linspace(-2.0, 8.0, 201)
    vmap = variance_map(
        WORKING_POINT, HALF_PI, {"omega_a": omegas, "delta_a": deltas})
    assert vmap.shape == (60, 201)
    assert vmap[10, 50] == variance(
        working_point(omega_a=float(omegas[10]), delta_a=float(deltas[50])),
        HALF_PI)
    assert float(np.min(vmap)) < 0.0
    near = variance(working_point(omega_a=0.1, delta_a=2.38), HALF_PI)
    assert abs(near) < 0.01
    close = variance(working_point(omega_a=0.1, delta_a=2.4), HALF_PI)
    assert abs(close) < 0.01
    ix, jx = np.unravel_index(int(np.argmin(vmap)), vmap.shape)
    squeezed = working_point(
        omega_a=float(omegas[ix]), delta_a=float(deltas[jx]))
    sqz = squeezing_spectrum(
        squeezed, HALF_PI, 1.0, full_line_grid(positive_only=True))
    assert float(np.min(sqz.values)) < 0.0
    assert integrate_spectrum(sqz, tail_correction=True) < 0.0
    with pytest.raises(ValueError, match="two axes"):
        variance_map(WORKING_POINT, 0.0, {"omega_a": omegas})
    with pytest.raises(ValueError, match="unknown parameter"):
        variance_map(WORKING_POINT, 0.0, {"omega_a": omegas, "x": deltas})
