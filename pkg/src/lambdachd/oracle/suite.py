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
"""Cross-checks of the main computation path against the oracle."""
import cmath
import dataclasses
import logging
import math
from collections.abc import Callable, Iterable

import numpy as np

from lambdachd.chd import chd_signal, h_numerator
from lambdachd.model import (
    generator_eigenvalues,
    LambdaParams,
    OperatorIndex,
    stationary,
    SteadyState,
    WORKING_POINT,
)
from lambdachd.oracle.master import (
    chd_reference,
    DensityMatrix,
    evolve_master_equation,
    heisenberg_generator,
    master_terms,
    spectral_gap,
)
from lambdachd.oracle.moments import second_order_direct, third_order_direct
from lambdachd.oracle.quadrature import quadrature_transform
from lambdachd.regression import (
    auto_tau_grid,
    correlation,
    InitialConditionKind,
    second_order_initial,
    third_order_initial,
    uniform_grid,
)
from lambdachd.spectra import (
    chd_spectrum,
    chd_spectrum_split,
    full_line_grid,
    incoherent_spectrum,
    integrate_spectrum,
    squeezing_spectrum,
    variance,
)


logger = logging.getLogger(__name__)


ORACLE_DT = 0.001
"""The Runge-Kutta step used for correlations."""
CHECK_OMEGAS = np.array([0.0, 0.5, 2.0])
"""The frequencies of the spectrum cross-checks."""
REFERENCE_TAUS = (0.5, 1.0, 2.0)
"""The times at which fixture values of the correlation are recorded."""


def random_params(rng: np.random.Generator) -> LambdaParams:
    """
    Draws random parameters with `Omega` in `[0.1, 5]`, `Delta` in
    `[-5, 5]`, and `gamma_b` in `[0.1, 1]`. Draws closer than 0.5 to
    two-photon resonance are rejected.

    Args:
        rng (np.random.Generator): The random number generator.

    Returns:
        LambdaParams: The parameters.
    """
    while True:
        delta_a, delta_b = rng.uniform(-5.0, 5.0, size=2)
        if abs(delta_a - delta_b) >= 0.5:
            break
    omega_a, omega_b = rng.uniform(0.1, 5.0, size=2)
    return LambdaParams(
        omega_a=float(omega_a),
        omega_b=float(omega_b),
        delta_a=float(delta_a),
        delta_b=float(delta_b),
        gamma_a=1.0,
        gamma_b=float(rng.uniform(0.1, 1.0)))


def parameter_sets(count: int, seed: int) -> list[LambdaParams]:
    """
    Creates the working point followed by seeded random parameters.

    Args:
        count (int): The number of random sets.

        seed (int): The seed.

    Returns:
        list[LambdaParams]: The parameter sets.
    """
    rng = np.random.default_rng(seed)
    return [WORKING_POINT] + [random_params(rng) for _ in range(count)]


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """The outcome of a single cross-check."""
    name: str
    """The name of the check."""
    params: LambdaParams
    """The parameters."""
    error: float
    """The largest deviation found."""
    tolerance: float
    """The accepted deviation."""

    @property
    def passed(self) -> bool:
        """
        Whether the deviation is within the tolerance.

        Returns:
            bool: True if the check passed.
        """
        return bool(self.error <= self.tolerance)


def _max_abs(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(lhs) - np.asarray(rhs))))


def settle_time(params: LambdaParams) -> float:
    """
    Chooses a relaxation time for the steady state comparison.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        float: A time after which transients have decayed by about `e^-30`,
        clamped to `[50, 400]`.
    """
    gap = abs(spectral_gap(params))
    if gap == 0.0:
        return 400.0
    return min(400.0, max(50.0, 30.0 / gap))


def check_generator(params: LambdaParams) -> CheckResult:
    """
    Compares the Bloch generator with the one derived from the master
    equation.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        CheckResult: The result.
    """
    gen = stationary(params).gen
    error = _max_abs(gen.m, heisenberg_generator(master_terms(params)))
    return CheckResult("generator", params, error, 1e-12)


def check_steady_state(params: LambdaParams) -> CheckResult:
    """
    Compares the steady state with a long master equation integration.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        CheckResult: The result. The tolerance accounts for the remaining
        transient.
    """
    t_final = settle_time(params)
    rho = evolve_master_equation(params, DensityMatrix.pure("a"), t_final)
    error = _max_abs(stationary(params).ss.density_matrix(), rho.matrix)
    tolerance = max(1e-8, 10.0 * math.exp(spectral_gap(params) * t_final))
    return CheckResult("steady_state", params, error, tolerance)


def check_moments(params: LambdaParams) -> list[CheckResult]:
    """
    Compares the equal-time fluctuation moments with explicit operator
    algebra.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        list[CheckResult]: The results for second and third order.
    """
    ss = stationary(params).ss
    return [
        CheckResult(
            "moments_second",
            params,
            _max_abs(second_order_initial(ss), second_order_direct(ss)),
            1e-12),
        CheckResult(
            "moments_third",
            params,
            _max_abs(third_order_initial(ss), third_order_direct(ss)),
            1e-12),
    ]


def quadrature_phases(params: LambdaParams) -> tuple[float, float]:
    """
    Chooses two quadrature phases with a well defined normalization.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        tuple[float, float]: The in-phase angle of the dipole and the angle
        rotated by `pi / 3`.
    """
    arg = cmath.phase(stationary(params).ss.ea)
    return arg, arg + math.pi / 3.0


def check_chd(
        params: LambdaParams,
        phi: float,
        *,
        tau_max: float = 10.0,
        tau_step: float = 0.01,
        dt: float = ORACLE_DT) -> CheckResult:
    """
    Compares the amplitude-intensity correlation on both branches with the
    master equation evaluation of its defining averages.

    Args:
        params (LambdaParams): The parameters.

        phi (float): The quadrature phase.

        tau_max (float, optional): The end of the time grid. Defaults to
        10.0.

        tau_step (float, optional): The time step. Defaults to 0.01.

        dt (float, optional): The Runge-Kutta step. Defaults to ORACLE_DT.

    Returns:
        CheckResult: The result.
    """
    taus = uniform_grid(tau_step, tau_max)
    signal = chd_signal(params, phi, taus)
    rho = stationary(params).ss.density_matrix()
    ref_pos, ref_neg = chd_reference(params, phi, rho, taus, dt)
    error = max(
        _max_abs(signal.h_positive, ref_pos),
        _max_abs(signal.h_negative, ref_neg))
    return CheckResult(f"chd_phi={phi:.4f}", params, error, 1e-6)


def check_spectra(
        params: LambdaParams,
        phi: float,
        *,
        tau_step: float = 0.005) -> list[CheckResult]:
    """
    Compares resolvent spectra with trapezoid transforms of their time
    domain correlations.

    Args:
        params (LambdaParams): The parameters.

        phi (float): The quadrature phase.

        tau_step (float, optional): The time step of the correlations.
        Defaults to 0.005.

    Returns:
        list[CheckResult]: The results.
    """
    gen, ss = stationary(params)
    rotor = cmath.exp(-1j * phi)
    taus = auto_tau_grid(
        gen,
        [second_order_initial(ss), third_order_initial(ss)],
        step=tau_step)
    g2 = correlation(gen, ss, InitialConditionKind.SECOND_ORDER, taus)
    num = h_numerator(params, phi, g2.tau_grid)
    amp = (rotor * ss.ea).real
    pref = 4.0 * params.gamma_a / amp

    def chd_transform(values: np.ndarray) -> np.ndarray:
        trace = dataclasses.replace(g2, values=values)
        return pref * quadrature_transform(trace, CHECK_OMEGAS, "cosine")

    second, third = chd_spectrum_split(params, phi, CHECK_OMEGAS)
    expected: list[tuple[str, np.ndarray, np.ndarray]] = []
    inc = quadrature_transform(g2, CHECK_OMEGAS, "complex")
    expected.append((
        "incoherent",
        incoherent_spectrum(params, CHECK_OMEGAS).values,
        inc[:, OperatorIndex.AE].real / (math.pi * ss.ee)))
    expected.append((
        "chd_positive",
        chd_spectrum(params, phi, "positive", CHECK_OMEGAS).values,
        chd_transform(num.h2 + num.h3)))
    expected.append((
        "chd_negative",
        chd_spectrum(params, phi, "negative", CHECK_OMEGAS).values,
        chd_transform(num.h_negative - ss.ee * amp)))
    expected.append((
        "chd_second", second.values, chd_transform(num.h2)))
    expected.append((
        "chd_third", third.values, chd_transform(num.h3)))
    cos2 = quadrature_transform(g2, CHECK_OMEGAS, "cosine")
    c2 = 0.5 * (
        rotor * cos2[:, OperatorIndex.EA]
        + rotor.conjugate() * cos2[:, OperatorIndex.AE])
    expected.append((
        "squeezing",
        squeezing_spectrum(params, phi, 1.0, CHECK_OMEGAS).values,
        8.0 * params.gamma_a * (rotor * c2).real))
    res = []
    for name, main, oracle in expected:
        tolerance = 1e-4 * max(1.0, float(np.max(np.abs(oracle))))
        res.append(CheckResult(
            f"spectrum_{name}", params, _max_abs(main, oracle), tolerance))
    return res


def check_sum_rules(params: LambdaParams, phi: float) -> list[CheckResult]:
    """
    Checks the integrals of the incoherent and the squeezing spectrum.

    Args:
        params (LambdaParams): The parameters.

        phi (float): The quadrature phase.

    Returns:
        list[CheckResult]: The relative deviations.
    """
    gen, ss = stationary(params)
    resonances = list(generator_eigenvalues(gen))
    inc = incoherent_spectrum(
        params, full_line_grid(resonances=resonances))
    inc_expect = 1.0 - abs(ss.ea) ** 2 / ss.ee
    inc_total = integrate_spectrum(inc, tail_correction=True)
    inc_err = abs(inc_total - inc_expect) / abs(inc_expect)
    sqz = squeezing_spectrum(
        params,
        phi,
        1.0,
        full_line_grid(positive_only=True, resonances=resonances))
    sqz_expect = 4.0 * math.pi * params.gamma_a * variance(params, phi)
    sqz_total = integrate_spectrum(sqz, tail_correction=True)
    sqz_err = abs(sqz_total - sqz_expect) / max(abs(sqz_expect), 1e-3)
    return [
        CheckResult("sum_rule_incoherent", params, inc_err, 1e-3),
        CheckResult("sum_rule_squeezing", params, sqz_err, 1e-3),
    ]


def run_checks(
        params_list: Iterable[LambdaParams],
        *,
        with_master: bool = True,
        progress: Callable[[CheckResult], None] | None = None,
        ) -> list[CheckResult]:
    """
    Runs all cross-checks.

    Args:
        params_list (Iterable[LambdaParams]): The parameter sets.

        with_master (bool, optional): Whether to include the slow master
        equation integrations. Defaults to True.

        progress (Callable[[CheckResult], None] | None, optional): Called
        after every check. Defaults to None.

    Returns:
        list[CheckResult]: The results in execution order.
    """
    res: list[CheckResult] = []

    def add(results: Iterable[CheckResult]) -> None:
        for result in results:
            logger.info(
                "%s %s error=%g tolerance=%g",
                "PASS" if result.passed else "FAIL",
                result.name,
                result.error,
                result.tolerance)
            res.append(result)
            if progress is not None:
                progress(result)

    for params in params_list:
        add([check_generator(params)])
        add(check_moments(params))
        phases = quadrature_phases(params)
        add(check_spectra(params, phases[1]))
        add(check_sum_rules(params, phases[1]))
        if with_master:
            add([check_steady_state(params)])
            add(check_chd(params, phi) for phi in phases)
    return res


def reference_values(
        params: LambdaParams = WORKING_POINT,
        *,
        dt: float = ORACLE_DT) -> dict[str, float | complex]:
    """
    Computes oracle reference values for a fixture file.

    Args:
        params (LambdaParams, optional): The parameters. Defaults to
        WORKING_POINT.

        dt (float, optional): The Runge-Kutta step of the correlations.
        Defaults to ORACLE_DT.

    Returns:
        dict[str, float | complex]: The values by key.
    """
    res: dict[str, float | complex] = {}
    for name in ("omega_a", "omega_b", "delta_a", "delta_b", "gamma_b"):
        res[f"params.{name}"] = float(getattr(params, name))
    rho = evolve_master_equation(
        params, DensityMatrix.pure("a"), settle_time(params))
    relaxed = SteadyState.from_density_matrix(rho.matrix)
    for op in OperatorIndex:
        res[f"steady.{op.label}"] = relaxed[op]
    taus = uniform_grid(0.01, max(REFERENCE_TAUS))
    for phi_name, phi in (("0", 0.0), ("pi2", 0.5 * math.pi)):
        pos, neg = chd_reference(params, phi, rho.matrix, taus, dt)
        for tau in REFERENCE_TAUS:
            ix = int(round(tau / 0.01))
            res[f"h.phi{phi_name}.pos.{tau:g}"] = float(pos[ix])
            res[f"h.phi{phi_name}.neg.{tau:g}"] = float(neg[ix])
    return res
