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
"""
Brute force integration of the master equation on 3x3 operators. Nothing in
this module uses the Bloch generator, which makes it an independent check of
the main computation path.

Two-time correlations are computed in the Schroedinger picture:
`<A(0) B(tau) C(0)> = Tr[B exp(L tau)(C rho A)]`.
"""
import dataclasses
import logging
import math
from typing import NamedTuple

import numpy as np

from lambdachd.errors import InvalidParams, StepTooLarge
from lambdachd.model import (
    BlochGenerator,
    generator_eigenvalues,
    LambdaParams,
    LEVEL_INDEX,
    LEVELS,
    OPERATOR_COUNT,
    OperatorIndex,
)


logger = logging.getLogger(__name__)


STEP_FRACTION = 0.01
"""The largest allowed step as a fraction of the fastest time scale."""
TRACE_DRIFT = 1e-8
"""The largest tolerated change of the trace during an integration."""
DENSITY_TOLERANCE = 1e-10
"""Tolerance of the hermiticity and trace checks of a density matrix."""
POSITIVITY_TOLERANCE = 1e-8
"""The most negative eigenvalue accepted in a density matrix."""


def sigma(ket: str, bra: str) -> np.ndarray:
    """
    Creates the operator `|ket><bra|`.

    Args:
        ket (str): The ket level.

        bra (str): The bra level.

    Returns:
        np.ndarray: The 3x3 matrix in `LEVELS` order.
    """
    res = np.zeros((len(LEVELS), len(LEVELS)), dtype=np.complex128)
    res[LEVEL_INDEX[ket], LEVEL_INDEX[bra]] = 1.0
    return res


def basis_operator(op: OperatorIndex) -> np.ndarray:
    """
    Creates the matrix of an operator of the Bloch basis.

    Args:
        op (OperatorIndex): The operator.

    Returns:
        np.ndarray: The 3x3 matrix.
    """
    ket, bra = op.levels
    return sigma(ket, bra)


def quadrature_operator(phi: float) -> np.ndarray:
    """
    Creates `sigma_phi = (sigma_ea exp(-i phi) + sigma_ae exp(i phi)) / 2`.

    Args:
        phi (float): The quadrature phase.

    Returns:
        np.ndarray: The 3x3 Hermitian matrix.
    """
    rotor = complex(math.cos(phi), -math.sin(phi))
    return 0.5 * (
        rotor * sigma("e", "a") + rotor.conjugate() * sigma("a", "e"))


@dataclasses.dataclass(frozen=True)
class DensityMatrix:
    """A 3x3 density matrix over the levels `e`, `a`, and `b`."""
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.shape != (len(LEVELS), len(LEVELS)):
            raise InvalidParams(f"density matrix must be 3x3: {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > DENSITY_TOLERANCE:
            raise InvalidParams("density matrix must be Hermitian")
        if abs(np.trace(mat) - 1.0) > DENSITY_TOLERANCE:
            raise InvalidParams(
                f"density matrix must have unit trace: {np.trace(mat)}")
        lowest = float(np.min(np.linalg.eigvalsh(mat)))
        if lowest < -POSITIVITY_TOLERANCE:
            raise InvalidParams(
                f"density matrix must be positive: eigenvalue {lowest:.3g}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @staticmethod
    def pure(level: str) -> "DensityMatrix":
        """
        Creates the projector onto a level.

        Args:
            level (str): The level.

        Returns:
            DensityMatrix: `|level><level|`.
        """
        return DensityMatrix(sigma(level, level))

    def population(self, level: str) -> float:
        """
        Reads the population of a level.

        Args:
            level (str): The level.

        Returns:
            float: The diagonal entry.
        """
        ix = LEVEL_INDEX[level]
        return float(self.matrix[ix, ix].real)


class MasterTerms(NamedTuple):
    """The Hamiltonian and the jump operators of the master equation."""
    hamiltonian: np.ndarray
    """The Hamiltonian in the frame rotating with both lasers."""
    jumps: tuple[np.ndarray, ...]
    """The jump operators including the square roots of the rates."""


def master_terms(params: LambdaParams) -> MasterTerms:
    """
    Builds the Hamiltonian
    `-Delta_a |a><a| - Delta_b |b><b| + Omega_j / 2 (|e><j| + |j><e|)` and
    the jump operators `sqrt(gamma_j) |j><e|`.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        MasterTerms: The terms.
    """
    ham = (
        -params.delta_a * sigma("a", "a")
        - params.delta_b * sigma("b", "b")
        + 0.5 * params.omega_a * (sigma("e", "a") + sigma("a", "e"))
        + 0.5 * params.omega_b * (sigma("e", "b") + sigma("b", "e")))
    jumps = (
        math.sqrt(params.gamma_a) * sigma("a", "e"),
        math.sqrt(params.gamma_b) * sigma("b", "e"),
    )
    return MasterTerms(hamiltonian=ham, jumps=jumps)


def lindblad_rhs(terms: MasterTerms, op: np.ndarray) -> np.ndarray:
    """
    Applies the Liouvillian `-i[H, X] + sum_L (L X L^+ - {L^+ L, X} / 2)`.
    It preserves the trace of any operator `X`, not only of density
    matrices.

    Args:
        terms (MasterTerms): The terms of the master equation.

        op (np.ndarray): The operator `X`.

    Returns:
        np.ndarray: The time derivative of `X`.
    """
    ham = terms.hamiltonian
    res = -1j * (ham @ op - op @ ham)
    for jump in terms.jumps:
        jdag = jump.conj().T
        jdj = jdag @ jump
        res += jump @ op @ jdag - 0.5 * (jdj @ op + op @ jdj)
    return res


def rk4_step(terms: MasterTerms, op: np.ndarray, dt: float) -> np.ndarray:
    """
    Performs one classic fourth order Runge-Kutta step.

    Args:
        terms (MasterTerms): The terms of the master equation.

        op (np.ndarray): The current operator.

        dt (float): The step.

    Returns:
        np.ndarray: The operator after the step.
    """
    k1 = lindblad_rhs(terms, op)
    k2 = lindblad_rhs(terms, op + 0.5 * dt * k1)
    k3 = lindblad_rhs(terms, op + 0.5 * dt * k2)
    k4 = lindblad_rhs(terms, op + dt * k3)
    return op + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_operator(
        terms: MasterTerms,
        op0: np.ndarray,
        t_final: float,
        dt: float) -> np.ndarray:
    """
    Integrates `dX/dt = L(X)` with fixed steps of at most `dt`.

    Args:
        terms (MasterTerms): The terms of the master equation.

        op0 (np.ndarray): The initial operator.

        t_final (float): The integration time.

        dt (float): The largest step. The actual step divides `t_final`
        evenly.

    Raises:
        StepTooLarge: If the trace drifts by more than `TRACE_DRIFT`.

    Returns:
        np.ndarray: The operator at `t_final`.
    """
    if t_final < 0.0 or not dt > 0.0:
        raise ValueError(f"invalid integration window: {t_final} {dt}")
    steps = max(1, math.ceil(t_final / dt - 1e-9))
    step = t_final / steps
    cur = np.array(op0, dtype=np.complex128)
    start = complex(np.trace(cur))
    for _ in range(steps):
        cur = rk4_step(terms, cur, step)
    drift = abs(complex(np.trace(cur)) - start)
    if drift > TRACE_DRIFT:
        raise StepTooLarge(
            f"trace drifted by {drift:.3g} with step {step:g}")
    return cur


def max_step(params: LambdaParams) -> float:
    """
    Computes the largest step accepted by `evolve_master_equation`.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        float: `0.01 / max(gamma, Omega_a, Omega_b, |Delta_a|, |Delta_b|)`.
    """
    fastest = max(
        params.gamma,
        params.omega_a,
        params.omega_b,
        abs(params.delta_a),
        abs(params.delta_b))
    return STEP_FRACTION / fastest


def evolve_master_equation(
        params: LambdaParams,
        rho0: DensityMatrix,
        t_final: float,
        dt: float | None = None) -> DensityMatrix:
    """
    Integrates the master equation with fourth order Runge-Kutta steps.

    Args:
        params (LambdaParams): The parameters.

        rho0 (DensityMatrix): The initial state.

        t_final (float): The integration time.

        dt (float | None, optional): The step. Defaults to `max_step`.

    Raises:
        ValueError: If the step exceeds `max_step`.

    Returns:
        DensityMatrix: The state at `t_final`.
    """
    limit = max_step(params)
    if dt is None:
        dt = limit
    elif dt > limit * (1.0 + 1e-12):
        raise ValueError(f"step {dt:g} exceeds the largest step {limit:g}")
    logger.debug("evolving %s to t=%g with dt=%g", params, t_final, dt)
    rho = evolve_operator(master_terms(params), rho0.matrix, t_final, dt)
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def correlation_trace(
        terms: MasterTerms,
        rho: np.ndarray,
        left: np.ndarray,
        middle: np.ndarray,
        right: np.ndarray,
        tau_grid: np.ndarray,
        dt: float) -> np.ndarray:
    """
    Computes `<left(0) middle(tau) right(0)>` by evolving
    `right rho left` and reading it out with `middle`.

    Args:
        terms (MasterTerms): The terms of the master equation.

        rho (np.ndarray): The stationary density matrix.

        left (np.ndarray): The operator applied last at time zero.

        middle (np.ndarray): The operator at time `tau`.

        right (np.ndarray): The operator applied first at time zero.

        tau_grid (np.ndarray): A uniform grid starting at zero.

        dt (float): The largest integration step.

    Returns:
        np.ndarray: The complex correlation on the grid.
    """
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    res = np.empty(tau_grid.size, dtype=np.complex128)
    cur = right @ rho @ left
    res[0] = np.trace(middle @ cur)
    if tau_grid.size == 1:
        return res
    interval = float(tau_grid[1] - tau_grid[0])
    steps = max(1, math.ceil(interval / dt - 1e-9))
    step = interval / steps
    for ix in range(1, tau_grid.size):
        for _ in range(steps):
            cur = rk4_step(terms, cur, step)
        res[ix] = np.trace(middle @ cur)
    return res


def chd_reference(
        params: LambdaParams,
        phi: float,
        rho: np.ndarray,
        tau_grid: np.ndarray,
        dt: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Evaluates the amplitude-intensity correlation from its defining three
    operator averages.

    Args:
        params (LambdaParams): The parameters.

        phi (float): The quadrature phase.

        rho (np.ndarray): The stationary density matrix.

        tau_grid (np.ndarray): The non-negative times.

        dt (float): The largest integration step.

    Returns:
        tuple[np.ndarray, np.ndarray]: The correlation on the photon-first
        branch and on the quadrature-first branch, both indexed by `|tau|`.
    """
    terms = master_terms(params)
    sig_ea = sigma("e", "a")
    sig_ae = sigma("a", "e")
    sig_phi = quadrature_operator(phi)
    pop_e = float(np.trace(sigma("e", "e") @ rho).real)
    amp = float(np.trace(sig_phi @ rho).real)
    norm = pop_e * amp
    eye = np.eye(len(LEVELS), dtype=np.complex128)
    positive = correlation_trace(
        terms, rho, sig_ea, sig_phi, sig_ae, tau_grid, dt)
    negative = correlation_trace(
        terms, rho, sig_ea, sigma("e", "e"), eye, tau_grid, dt)
    rotor = complex(math.cos(phi), -math.sin(phi))
    return positive.real / norm, (rotor * negative).real / norm


def heisenberg_generator(terms: MasterTerms) -> np.ndarray:
    """
    Builds the Bloch generator numerically from the master equation using
    `M[r, c] = Tr[s_r L(s_c^+)]`.

    Args:
        terms (MasterTerms): The terms of the master equation.

    Returns:
        np.ndarray: The 9x9 generator in `OperatorIndex` order.
    """
    res = np.zeros((OPERATOR_COUNT, OPERATOR_COUNT), dtype=np.complex128)
    for col in OperatorIndex:
        image = lindblad_rhs(terms, basis_operator(col).conj().T)
        for row in OperatorIndex:
            res[row, col] = np.trace(basis_operator(row) @ image)
    return res


def spectral_gap(params: LambdaParams) -> float:
    """
    Computes the slowest decay rate of the Liouvillian, i.e., the largest
    real part of its non-zero eigenvalues, which is negative.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        float: The largest real part among the non-stationary eigenvalues.
    """
    gen = BlochGenerator(
        m=heisenberg_generator(master_terms(params)), params=params)
    return float(generator_eigenvalues(gen)[1].real)
