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
"""This module defines the driven Λ three-level atom. It contains the laser
and decay parameters, the fixed ordering of the nine atomic operators, the
Bloch generator `M` of the linear equations of motion `ds/dt = M s`, and the
stationary solution of those equations.

The excited state is `e`, the probe laser couples `a <-> e` and the control
laser couples `b <-> e`. All rates and frequencies are in units of the probe
decay rate unless stated otherwise."""
import dataclasses
import enum
import functools
import logging
import math
from typing import cast, get_args, Literal, NamedTuple

import numpy as np
import scipy.linalg

from lambdachd.errors import (
    InvalidParams,
    NonUniqueSteadyState,
    NumericalError,
)


logger = logging.getLogger(__name__)


GAMMA_A_MHZ = 14.7
"""Probe transition decay rate of the reference ion in MHz."""
GAMMA_B_MHZ = 5.4
"""Control transition decay rate of the reference ion in MHz."""


Transition = Literal["a", "b"]
"""The two laser driven transitions: probe (`a <-> e`) and control
(`b <-> e`)."""
TRANSITIONS: set[Transition] = set(get_args(Transition))


def as_transition(text: str) -> Transition:
    """
    Converts a string into a transition.

    Args:
        text (str): The string.

    Raises:
        ValueError: If the string does not name a transition.

    Returns:
        Transition: The transition.
    """
    if text not in TRANSITIONS:
        raise ValueError(
            f"unknown transition: {text}. Only {TRANSITIONS} are supported.")
    return cast(Transition, text)


LEVELS: tuple[str, str, str] = ("e", "a", "b")
"""The basis order of state vectors and density matrices."""
LEVEL_INDEX: dict[str, int] = {
    level: ix for ix, level in enumerate(LEVELS)
}


PARAM_FIELDS: tuple[str, ...] = (
    "omega_a",
    "omega_b",
    "delta_a",
    "delta_b",
    "gamma_a",
    "gamma_b",
)
"""The names of all `LambdaParams` fields in declaration order."""


@dataclasses.dataclass(frozen=True)
class LambdaParams:
    """
    The laser and decay parameters of the driven atom. Rabi frequencies are
    real and non-negative, i.e., laser phases are absorbed into the phase of
    the local oscillator.
    """
    omega_a: float
    """Rabi frequency of the probe laser."""
    omega_b: float
    """Rabi frequency of the control laser."""
    delta_a: float
    """Detuning of the probe laser."""
    delta_b: float
    """Detuning of the control laser."""
    gamma_a: float
    """Decay rate of the probe transition."""
    gamma_b: float
    """Decay rate of the control transition."""

    def __post_init__(self) -> None:
        for name in PARAM_FIELDS:
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as exc:
                raise InvalidParams(
                    f"{name} must be a number, got {value!r}") from exc
            if not math.isfinite(value):
                raise InvalidParams(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.gamma_a <= 0.0:
            raise InvalidParams(f"gamma_a must be positive: {self.gamma_a}")
        if self.gamma_b < 0.0:
            raise InvalidParams(
                f"gamma_b must be non-negative: {self.gamma_b}")
        if self.omega_a < 0.0 or self.omega_b < 0.0:
            raise InvalidParams(
                "Rabi frequencies must be non-negative: "
                f"omega_a={self.omega_a} omega_b={self.omega_b}")

    @property
    def gamma(self) -> float:
        """
        The total decay rate of the excited state.

        Returns:
            float: `gamma_a + gamma_b`.
        """
        return self.gamma_a + self.gamma_b

    def replace(self, **changes: float) -> "LambdaParams":
        """
        Creates a copy with some fields replaced.

        Args:
            **changes (float): The new field values.

        Returns:
            LambdaParams: The new parameters. The invariants are checked
            again.
        """
        return dataclasses.replace(self, **changes)

    def scaled(self) -> "LambdaParams":
        """
        Expresses the parameters in units of the probe decay rate.

        Returns:
            LambdaParams: Parameters with `gamma_a == 1`.
        """
        scale = self.gamma_a
        return LambdaParams(
            omega_a=self.omega_a / scale,
            omega_b=self.omega_b / scale,
            delta_a=self.delta_a / scale,
            delta_b=self.delta_b / scale,
            gamma_a=1.0,
            gamma_b=self.gamma_b / scale)

    @staticmethod
    def from_mhz(
            *,
            omega_a: float,
            omega_b: float,
            delta_a: float,
            delta_b: float,
            gamma_a: float = GAMMA_A_MHZ,
            gamma_b: float = GAMMA_B_MHZ) -> "LambdaParams":
        """
        Creates scaled parameters from values given in MHz.

        Args:
            omega_a (float): Probe Rabi frequency in MHz.

            omega_b (float): Control Rabi frequency in MHz.

            delta_a (float): Probe detuning in MHz.

            delta_b (float): Control detuning in MHz.

            gamma_a (float, optional): Probe decay rate in MHz. Defaults to
            `GAMMA_A_MHZ`.

            gamma_b (float, optional): Control decay rate in MHz. Defaults to
            `GAMMA_B_MHZ`.

        Returns:
            LambdaParams: The parameters in units of `gamma_a`.
        """
        return LambdaParams(
            omega_a=omega_a,
            omega_b=omega_b,
            delta_a=delta_a,
            delta_b=delta_b,
            gamma_a=gamma_a,
            gamma_b=gamma_b).scaled()


WORKING_POINT = LambdaParams(
    omega_a=1.12,
    omega_b=2.15,
    delta_a=3.4,
    delta_b=2.38,
    gamma_a=1.0,
    gamma_b=GAMMA_B_MHZ / GAMMA_A_MHZ)
"""The default operating point: probe saturation parameter of about 0.1,
control saturation parameter of about 0.8, off two-photon resonance."""


class OperatorIndex(enum.IntEnum):
    """
    The fixed ordering of the nine atomic operators `sigma_jk = |j><k|` in
    the vector `s`. The member name spells `jk`.
    """
    EE = 0
    AE = 1
    BE = 2
    EA = 3
    AA = 4
    BA = 5
    EB = 6
    AB = 7
    BB = 8

    @property
    def label(self) -> str:
        """
        The operator label.

        Returns:
            str: The two level letters `jk` of `sigma_jk`.
        """
        return self.name.lower()

    @property
    def levels(self) -> tuple[str, str]:
        """
        The levels of the operator.

        Returns:
            tuple[str, str]: The ket level `j` and the bra level `k`.
        """
        label = self.label
        return label[0], label[1]

    @property
    def is_population(self) -> bool:
        """
        Whether the operator is a projector onto a level.

        Returns:
            bool: True for `sigma_ee`, `sigma_aa`, and `sigma_bb`.
        """
        ket, bra = self.levels
        return ket == bra

    def adjoint(self) -> "OperatorIndex":
        """
        The index of the conjugate operator `sigma_kj`.

        Returns:
            OperatorIndex: The adjoint index. Populations are self-paired.
        """
        ket, bra = self.levels
        return OperatorIndex.from_levels(bra, ket)

    @staticmethod
    def from_levels(ket: str, bra: str) -> "OperatorIndex":
        """
        Looks up the index of `sigma_jk`.

        Args:
            ket (str): The level `j`.

            bra (str): The level `k`.

        Raises:
            ValueError: If a level is unknown.

        Returns:
            OperatorIndex: The index.
        """
        return OperatorIndex.from_label(f"{ket}{bra}")

    @staticmethod
    def from_label(label: str) -> "OperatorIndex":
        """
        Looks up the index of an operator label such as `"ae"`.

        Args:
            label (str): The label.

        Raises:
            ValueError: If the label does not name one of the operators.

        Returns:
            OperatorIndex: The index.
        """
        try:
            return OperatorIndex[label.upper()]
        except KeyError as exc:
            raise ValueError(f"unknown operator label: {label}") from exc


OPERATOR_COUNT = len(OperatorIndex)
POPULATIONS: tuple[OperatorIndex, ...] = tuple(
    op for op in OperatorIndex if op.is_population)
ADJOINT: np.ndarray = np.array(
    [int(op.adjoint()) for op in OperatorIndex], dtype=np.intp)
"""Permutation mapping every index to the index of its adjoint."""
TRACE_ROW: np.ndarray = np.array(
    [1.0 if op.is_population else 0.0 for op in OperatorIndex],
    dtype=np.complex128)
"""The left null vector `u` of every Bloch generator."""
ADJOINT.flags.writeable = False
TRACE_ROW.flags.writeable = False


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclasses.dataclass(frozen=True)
class BlochGenerator:
    """The matrix `M` of the equations of motion `ds/dt = M s`."""
    m: np.ndarray
    """The 9x9 complex matrix in `OperatorIndex` order."""
    params: LambdaParams
    """The parameters the matrix was built from."""

    def trace_defect(self) -> float:
        """
        Measures the violation of trace preservation.

        Returns:
            float: The largest magnitude of `u^T M`.
        """
        return float(np.max(np.abs(TRACE_ROW @ self.m)))


def build_bloch_generator(params: LambdaParams) -> BlochGenerator:
    """
    Builds the Bloch generator. Every entry is read off the equations of
    motion of the populations and the coherences. The rows of `sigma_ea`,
    `sigma_eb`, and `sigma_ba` are the complex conjugates of the rows of
    their adjoints.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        BlochGenerator: The generator.
    """
    hoa = 0.5 * params.omega_a
    hob = 0.5 * params.omega_b
    gam = params.gamma
    ee, ae, be, ea, aa, ba, eb, ab, bb = OperatorIndex
    m = np.zeros((OPERATOR_COUNT, OPERATOR_COUNT), dtype=np.complex128)

    # populations
    m[ee, ae] = 1j * hoa
    m[ee, ea] = -1j * hoa
    m[ee, be] = 1j * hob
    m[ee, eb] = -1j * hob
    m[ee, ee] = -gam

    m[aa, ae] = -1j * hoa
    m[aa, ea] = 1j * hoa
    m[aa, ee] = params.gamma_a

    m[bb, be] = -1j * hob
    m[bb, eb] = 1j * hob
    m[bb, ee] = params.gamma_b

    # coherences
    m[ab, eb] = 1j * hoa
    m[ab, ae] = -1j * hob
    m[ab, ab] = -1j * (params.delta_a - params.delta_b)

    m[ae, ee] = 1j * hoa
    m[ae, aa] = -1j * hoa
    m[ae, ab] = -1j * hob
    m[ae, ae] = -(0.5 * gam + 1j * params.delta_a)

    m[be, ba] = -1j * hoa
    m[be, ee] = 1j * hob
    m[be, bb] = -1j * hob
    m[be, be] = -(0.5 * gam + 1j * params.delta_b)

    # d<sigma_kj>/dt is the conjugate of d<sigma_jk>/dt
    for row in (ab, ae, be):
        adj_row = ADJOINT[row]
        m[adj_row, ADJOINT] = np.conj(m[row, :])
    return BlochGenerator(m=_frozen(m), params=params)


def generator_eigenvalues(gen: BlochGenerator) -> np.ndarray:
    """
    Computes the eigenvalues of the generator sorted by decreasing real part.

    Args:
        gen (BlochGenerator): The generator.

    Returns:
        np.ndarray: The nine eigenvalues. The first one is the stationary
        eigenvalue zero for a generic driven atom.
    """
    evals = scipy.linalg.eigvals(gen.m)
    return evals[np.argsort(-evals.real, kind="stable")]


@dataclasses.dataclass(frozen=True)
class SteadyState:
    """The stationary moments `alpha_jk = <sigma_jk>_ss`."""
    alpha: np.ndarray
    """The nine moments in `OperatorIndex` order."""

    def __post_init__(self) -> None:
        alpha = np.asarray(self.alpha, dtype=np.complex128)
        if alpha.shape != (OPERATOR_COUNT,):
            raise InvalidParams(
                f"steady state must have {OPERATOR_COUNT} entries: "
                f"{alpha.shape}")
        if not np.all(np.isfinite(alpha)):
            raise InvalidParams(f"steady state must be finite: {alpha}")
        object.__setattr__(self, "alpha", _frozen(alpha.copy()))

    def __getitem__(self, key: OperatorIndex | str) -> complex:
        if isinstance(key, str):
            key = OperatorIndex.from_label(key)
        return complex(self.alpha[key])

    @property
    def ee(self) -> float:
        """
        The excited state population.

        Returns:
            float: `alpha_ee`.
        """
        return float(self.alpha[OperatorIndex.EE].real)

    @property
    def aa(self) -> float:
        """
        The population of the probe ground state.

        Returns:
            float: `alpha_aa`.
        """
        return float(self.alpha[OperatorIndex.AA].real)

    @property
    def bb(self) -> float:
        """
        The population of the control ground state.

        Returns:
            float: `alpha_bb`.
        """
        return float(self.alpha[OperatorIndex.BB].real)

    @property
    def ea(self) -> complex:
        """
        The stationary probe dipole.

        Returns:
            complex: `alpha_ea`.
        """
        return complex(self.alpha[OperatorIndex.EA])

    @property
    def ae(self) -> complex:
        """
        The conjugate stationary probe dipole.

        Returns:
            complex: `alpha_ae`.
        """
        return complex(self.alpha[OperatorIndex.AE])

    @property
    def dipole(self) -> complex:
        """
        Alias of `ea`.

        Returns:
            complex: `alpha_ea`.
        """
        return self.ea

    @property
    def populations(self) -> tuple[float, float, float]:
        """
        The level populations in `LEVELS` order.

        Returns:
            tuple[float, float, float]: `alpha_ee`, `alpha_aa`, and
            `alpha_bb`.
        """
        return self.ee, self.aa, self.bb

    def trace(self) -> complex:
        """
        The sum of the populations.

        Returns:
            complex: `alpha_ee + alpha_aa + alpha_bb`.
        """
        return complex(TRACE_ROW @ self.alpha)

    def density_matrix(self) -> np.ndarray:
        """
        Reconstructs the density matrix using `rho_kj = alpha_jk`.

        Returns:
            np.ndarray: The 3x3 density matrix in `LEVELS` order.
        """
        rho = np.zeros((len(LEVELS), len(LEVELS)), dtype=np.complex128)
        for op in OperatorIndex:
            ket, bra = op.levels
            rho[LEVEL_INDEX[bra], LEVEL_INDEX[ket]] = self.alpha[op]
        return rho

    @staticmethod
    def from_density_matrix(rho: np.ndarray) -> "SteadyState":
        """
        Reads the moments off a density matrix.

        Args:
            rho (np.ndarray): The 3x3 density matrix in `LEVELS` order.

        Returns:
            SteadyState: The moments `alpha_jk = rho_kj`.
        """
        alpha = np.array([
            rho[LEVEL_INDEX[op.levels[1]], LEVEL_INDEX[op.levels[0]]]
            for op in OperatorIndex
        ], dtype=np.complex128)
        return SteadyState(alpha=alpha)


STEADY_RESIDUAL = 1e-10
"""Maximum residual `|M alpha|` relative to `|M|` of an accepted steady
state."""
DEGENERACY_RATIO = 1e-10
"""A second singular value below this fraction of the largest one signals a
non-unique steady state."""


def solve_steady_state(gen: BlochGenerator) -> SteadyState:
    """
    Solves `M alpha = 0` with unit trace. The `sigma_ee` equation is
    redundant (the populations sum to a constant) and is replaced by the trace
    condition, which makes the system non-singular.

    Args:
        gen (BlochGenerator): The generator.

    Raises:
        NonUniqueSteadyState: If the null space of `M` is more than one
            dimensional, e.g., when neither laser drives the atom.
        NumericalError: If the solution does not satisfy `M alpha = 0`.

    Returns:
        SteadyState: The stationary moments.
    """
    m = gen.m
    svals = scipy.linalg.svdvals(m)
    scale = float(svals[0])
    logger.debug(
        "singular values of M: smallest=%g second=%g largest=%g",
        svals[-1],
        svals[-2],
        scale)
    if svals[-2] < DEGENERACY_RATIO * scale:
        raise NonUniqueSteadyState(
            "the steady state is not unique: second smallest singular value "
            f"{svals[-2]:.3g} of M is below {DEGENERACY_RATIO:g} * {scale:.3g}"
            f" for {gen.params}")
    deflated = m.copy()
    deflated[OperatorIndex.EE, :] = TRACE_ROW
    rhs = np.zeros(OPERATOR_COUNT, dtype=np.complex128)
    rhs[OperatorIndex.EE] = 1.0
    alpha = scipy.linalg.solve(deflated, rhs)
    # enforce alpha_jk = conj(alpha_kj) and real populations exactly
    alpha = 0.5 * (alpha + np.conj(alpha[ADJOINT]))
    alpha /= TRACE_ROW @ alpha
    residual = float(np.linalg.norm(m @ alpha))
    logger.debug("steady state residual %g", residual)
    if residual > STEADY_RESIDUAL * max(1.0, scale):
        raise NumericalError(
            f"steady state residual {residual:.3g} exceeds "
            f"{STEADY_RESIDUAL:g} for {gen.params}")
    return SteadyState(alpha=alpha)


class Stationary(NamedTuple):
    """A generator together with its steady state."""
    gen: BlochGenerator
    """The Bloch generator."""
    ss: SteadyState
    """The steady state of the generator."""


@functools.lru_cache(maxsize=1024)
def stationary(params: LambdaParams) -> Stationary:
    """
    Builds the generator and solves for the steady state. Results are cached
    per parameter set.

    Args:
        params (LambdaParams): The parameters.

    Returns:
        Stationary: The generator and its steady state.
    """
    gen = build_bloch_generator(params)
    return Stationary(gen=gen, ss=solve_steady_state(gen))


def saturation_parameter(
        params: LambdaParams,
        transition: Transition) -> float:
    """
    Computes the saturation parameter `Omega_j^2 / (gamma_j^2 + Delta_j^2)`.

    Args:
        params (LambdaParams): The parameters.

        transition (Transition): The transition `j`.

    Returns:
        float: The saturation parameter.
    """
    if transition == "a":
        omega, gamma, delta = params.omega_a, params.gamma_a, params.delta_a
    else:
        omega, gamma, delta = params.omega_b, params.gamma_b, params.delta_b
    if omega == 0.0:
        return 0.0
    denom = gamma * gamma + delta * delta
    if denom == 0.0:
        return math.inf
    return omega * omega / denom


def dark_state(params: LambdaParams) -> np.ndarray:
    """
    Computes the trapping state `(Omega_b |a> - Omega_a |b>) / norm` which
    is decoupled from both lasers.

    Args:
        params (LambdaParams): The parameters.

    Raises:
        InvalidParams: If both Rabi frequencies are zero.

    Returns:
        np.ndarray: The normalized state vector in `LEVELS` order.
    """
    norm = math.hypot(params.omega_a, params.omega_b)
    if norm == 0.0:
        raise InvalidParams(
            "the dark state requires at least one non-zero Rabi frequency")
    res = np.zeros(len(LEVELS), dtype=np.complex128)
    res[LEVEL_INDEX["a"]] = params.omega_b / norm
    res[LEVEL_INDEX["b"]] = -params.omega_a / norm
    return res


def trapping_fidelity(ss: SteadyState, params: LambdaParams) -> float:
    """
    Computes the population of the dark state `<u|rho_ss|u>`.

    Args:
        ss (SteadyState): The steady state.

        params (LambdaParams): The parameters defining the dark state.

    Returns:
        float: The dark state population. It is one at two-photon resonance.
    """
    dark = dark_state(params)
    return float((np.conj(dark) @ ss.density_matrix() @ dark).real)
