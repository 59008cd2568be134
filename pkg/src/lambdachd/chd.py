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
The amplitude-intensity correlation `h_phi(tau)` measured by conditional
homodyne detection. For `tau >= 0` a photon detection is followed by a
quadrature measurement and the correlation splits into a second-order and a
third-order part in the dipole fluctuations. For `tau <= 0` the order is
reversed and only second-order fluctuations contribute.
"""
import dataclasses
import math
from typing import cast, get_args, Literal, NamedTuple

import numpy as np

from lambdachd.errors import DegenerateQuadrature, VanishingExcitation
from lambdachd.model import (
    LambdaParams,
    OperatorIndex,
    stationary,
    SteadyState,
)
from lambdachd.regression import (
    auto_tau_grid,
    CorrelationTrace,
    DEFAULT_TAU_STEP,
    full_correlation,
    InitialConditionKind,
    propagate,
    propagate_values,
    second_order_initial,
    third_order_initial,
)


EXCITATION_THRESHOLD = 1e-12
"""Excited state populations below this are treated as exact trapping."""
QUADRATURE_THRESHOLD = 1e-12
"""Quadrature amplitudes below this make the normalization undefined."""
VIOLATION_TOLERANCE = 1e-9
"""A classical bound counts as violated only beyond this band."""


@dataclasses.dataclass(frozen=True)
class QuadraturePhase:
    """The phase of the local oscillator selecting the quadrature
    `sigma_phi = (sigma_ea exp(-i phi) + sigma_ae exp(i phi)) / 2`."""
    phi: float
    """The phase in radians, canonicalized to `[0, 2 pi)`."""

    def __post_init__(self) -> None:
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValueError(f"phase must be finite: {phi}")
        phi = math.fmod(phi, 2.0 * math.pi)
        if phi < 0.0:
            phi += 2.0 * math.pi
        if phi >= 2.0 * math.pi:
            phi = 0.0
        object.__setattr__(self, "phi", phi)

    @property
    def rotor(self) -> complex:
        """
        The phase factor applied to `sigma_ea`.

        Returns:
            complex: `exp(-i phi)`.
        """
        return complex(math.cos(self.phi), -math.sin(self.phi))

    def amplitude(self, ss: SteadyState) -> float:
        """
        The stationary quadrature amplitude.

        Args:
            ss (SteadyState): The steady state.

        Returns:
            float: `alpha_phi = Re[alpha_ea exp(-i phi)]`.
        """
        return (self.rotor * ss.ea).real

    def project(self, values: np.ndarray) -> np.ndarray:
        """
        Projects vectors in `OperatorIndex` order on the quadrature.

        Args:
            values (np.ndarray): Vectors along the last axis.

        Returns:
            np.ndarray: `(exp(-i phi) v_ea + exp(i phi) v_ae) / 2`.
        """
        rotor = self.rotor
        return 0.5 * (
            rotor * values[..., OperatorIndex.EA]
            + rotor.conjugate() * values[..., OperatorIndex.AE])


def as_phase(phi: float | QuadraturePhase) -> QuadraturePhase:
    """
    Converts a phase in radians into a quadrature phase.

    Args:
        phi (float | QuadraturePhase): The phase.

    Returns:
        QuadraturePhase: The quadrature phase.
    """
    if isinstance(phi, QuadraturePhase):
        return phi
    return QuadraturePhase(phi)


def normalization(ss: SteadyState, phase: QuadraturePhase) -> float:
    """
    Computes the normalization `alpha_ee alpha_phi` of the correlation.

    Args:
        ss (SteadyState): The steady state.

        phase (QuadraturePhase): The quadrature phase.

    Raises:
        VanishingExcitation: If the excited state is empty.
        DegenerateQuadrature: If the quadrature amplitude vanishes.

    Returns:
        float: The normalization.
    """
    if ss.ee < EXCITATION_THRESHOLD:
        raise VanishingExcitation(
            f"excited state population {ss.ee:.3g} vanishes "
            "(coherent population trapping): the normalized CHD correlation "
            "is undefined")
    amp = phase.amplitude(ss)
    if abs(amp) < QUADRATURE_THRESHOLD:
        raise DegenerateQuadrature(
            f"quadrature amplitude {amp:.3g} vanishes for "
            f"phi={phase.phi:g}: the normalized CHD correlation is undefined")
    return ss.ee * amp


class _Numerators(NamedTuple):
    tau_grid: np.ndarray
    base: float
    second: np.ndarray
    third: np.ndarray
    negative: np.ndarray


def _numerators(
        params: LambdaParams,
        phase: QuadraturePhase,
        tau_grid: np.ndarray | None,
        step: float) -> _Numerators:
    gen, ss = stationary(params)
    g2_0 = second_order_initial(ss)
    g3_0 = third_order_initial(ss)
    if tau_grid is None:
        tau_grid = auto_tau_grid(gen, [g2_0, g3_0], step=step)
    g2 = propagate_values(gen, g2_0, tau_grid)
    g3 = propagate_values(gen, g3_0, tau_grid)
    return _Numerators(
        tau_grid=np.asarray(tau_grid, dtype=np.float64),
        base=ss.ee * phase.amplitude(ss),
        second=2.0 * (ss.ae * phase.project(g2)).real,
        third=phase.project(g3).real,
        negative=(phase.rotor * g2[:, OperatorIndex.EE]).real)


def _magnitudes(tau_grid: np.ndarray | None) -> np.ndarray | None:
    if tau_grid is None:
        return None
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    if np.any(tau_grid > 0.0):
        raise ValueError("negative branch times must be non-positive")
    return -tau_grid


def h_positive(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP) -> CorrelationTrace:
    """
    Computes `h_phi(tau)` for `tau >= 0`, where the photon is detected
    first, as `1 + h2 + h3`.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        tau_grid (np.ndarray | None, optional): A uniform grid starting at
        zero. If None it is sized to the decay of the correlations. Defaults
        to None.

        step (float, optional): The step of an automatic grid. Defaults to
        DEFAULT_TAU_STEP.

    Returns:
        CorrelationTrace: The real correlation on the grid. `h(0) = 0`.
    """
    phase = as_phase(phi)
    nums = _numerators(params, phase, tau_grid, step)
    norm = normalization(stationary(params).ss, phase)
    values = 1.0 + (nums.second + nums.third) / norm
    return CorrelationTrace(
        tau_grid=nums.tau_grid,
        values=values,
        kind=InitialConditionKind.THIRD_ORDER,
        params=params)


def h_negative(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP) -> CorrelationTrace:
    """
    Computes `h_phi(tau)` for `tau <= 0`, where the quadrature is measured
    first, as `1 + Re[exp(-i phi) <d sigma_ea(0) d sigma_ee(|tau|)>] /
    (alpha_ee alpha_phi)`.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        tau_grid (np.ndarray | None, optional): Non-positive times
        `0, -step, -2 step, ...`. If None the grid is sized automatically.
        Defaults to None.

        step (float, optional): The step of an automatic grid. Defaults to
        DEFAULT_TAU_STEP.

    Raises:
        ValueError: If the grid contains positive times.

    Returns:
        CorrelationTrace: The real correlation. Its grid holds the
        non-positive times.
    """
    phase = as_phase(phi)
    nums = _numerators(params, phase, _magnitudes(tau_grid), step)
    norm = normalization(stationary(params).ss, phase)
    return CorrelationTrace(
        tau_grid=-nums.tau_grid,
        values=1.0 + nums.negative / norm,
        kind=InitialConditionKind.INTENSITY_BRANCH,
        params=params)


def h_negative_full(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP) -> CorrelationTrace:
    """
    Evaluates the negative branch from the full operators, i.e., as
    `Re[exp(-i phi) <sigma_ea(0) sigma_ee(|tau|)>] / (alpha_ee alpha_phi)`
    without subtracting the means. It agrees with `h_negative`.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        tau_grid (np.ndarray | None, optional): Non-positive times. Defaults
        to None.

        step (float, optional): The step of an automatic grid. Defaults to
        DEFAULT_TAU_STEP.

    Returns:
        CorrelationTrace: The real correlation on the non-positive times.
    """
    phase = as_phase(phi)
    gen, ss = stationary(params)
    mags = _magnitudes(tau_grid)
    if mags is None:
        mags = auto_tau_grid(gen, [second_order_initial(ss)], step=step)
    trace = propagate(gen, second_order_initial(ss), mags)
    full = full_correlation(ss, trace)[:, OperatorIndex.EE]
    norm = normalization(ss, phase)
    return CorrelationTrace(
        tau_grid=-trace.tau_grid,
        values=(phase.rotor * full).real / norm,
        kind=InitialConditionKind.INTENSITY_BRANCH,
        params=params)


def h_split(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP,
        ) -> tuple[CorrelationTrace, CorrelationTrace]:
    """
    Splits the positive branch into its parts of second and third order in
    the dipole fluctuations.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        tau_grid (np.ndarray | None, optional): A uniform grid starting at
        zero. Defaults to None.

        step (float, optional): The step of an automatic grid. Defaults to
        DEFAULT_TAU_STEP.

    Returns:
        tuple[CorrelationTrace, CorrelationTrace]: `h2` and `h3`. At zero
        `h3(0) = 2 (|alpha_ea|^2 - alpha_ee) / alpha_ee`.
    """
    phase = as_phase(phi)
    nums = _numerators(params, phase, tau_grid, step)
    norm = normalization(stationary(params).ss, phase)
    h2 = CorrelationTrace(
        tau_grid=nums.tau_grid,
        values=nums.second / norm,
        kind=InitialConditionKind.SECOND_ORDER,
        params=params)
    h3 = CorrelationTrace(
        tau_grid=nums.tau_grid,
        values=nums.third / norm,
        kind=InitialConditionKind.THIRD_ORDER,
        params=params)
    return h2, h3


@dataclasses.dataclass(frozen=True)
class ChdSignal:
    """The amplitude-intensity correlation on both time branches."""
    tau_grid: np.ndarray
    """Symmetric times from `-tau_max` to `tau_max`."""
    h: np.ndarray
    """The correlation on `tau_grid`."""
    h2: np.ndarray
    """The second-order part on the non-negative times."""
    h3: np.ndarray
    """The third-order part on the non-negative times."""
    phase: QuadraturePhase
    """The quadrature phase."""
    params: LambdaParams
    """The parameters."""
    normalized: bool = True
    """Whether the values are divided by `alpha_ee alpha_phi`. Without
    normalization `h` on the positive branch is `alpha_ee alpha_phi + h2 +
    h3`."""

    def __post_init__(self) -> None:
        if self.h.shape != self.tau_grid.shape:
            raise ValueError(
                f"shape mismatch: {self.h.shape} != {self.tau_grid.shape}")
        if self.h2.shape != self.h3.shape:
            raise ValueError(
                f"shape mismatch: {self.h2.shape} != {self.h3.shape}")
        if self.h2.size > self.tau_grid.size or self.h2.size == 0:
            raise ValueError("the split must cover the non-negative times")

    @property
    def zero_index(self) -> int:
        """
        The position of `tau = 0` in the grid.

        Returns:
            int: The index.
        """
        return self.tau_grid.size - self.h2.size

    @property
    def tau_positive(self) -> np.ndarray:
        """
        The non-negative times.

        Returns:
            np.ndarray: The times on which `h2` and `h3` are defined.
        """
        return self.tau_grid[self.zero_index:]

    @property
    def h_positive(self) -> np.ndarray:
        """
        The correlation on the non-negative times.

        Returns:
            np.ndarray: The values aligned with `h2` and `h3`.
        """
        return self.h[self.zero_index:]

    @property
    def h_negative(self) -> np.ndarray:
        """
        The correlation on the non-positive times ordered by `|tau|`.

        Returns:
            np.ndarray: The values starting at `tau = 0`.
        """
        return self.h[:self.zero_index + 1][::-1]

    def asymmetry(self) -> float:
        """
        Measures the time asymmetry of the correlation.

        Returns:
            float: `max |h(tau) - h(-tau)|`.
        """
        pos = self.h_positive
        neg = self.h_negative
        size = min(pos.size, neg.size)
        return float(np.max(np.abs(pos[:size] - neg[:size])))


def chd_signal(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP,
        normalized: bool = True) -> ChdSignal:
    """
    Computes the correlation on both branches over `[-tau_max, tau_max]`.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        tau_grid (np.ndarray | None, optional): The non-negative times,
        mirrored for the negative branch. Defaults to None.

        step (float, optional): The step of an automatic grid. Defaults to
        DEFAULT_TAU_STEP.

        normalized (bool, optional): Whether to divide by `alpha_ee
        alpha_phi`. The unnormalized numerators stay finite at exact
        trapping. Defaults to True.

    Returns:
        ChdSignal: The signal. The value at `tau = 0` is taken from the
        positive branch.
    """
    phase = as_phase(phi)
    nums = _numerators(params, phase, tau_grid, step)
    if normalized:
        norm = normalization(stationary(params).ss, phase)
        second = nums.second / norm
        third = nums.third / norm
        positive = 1.0 + second + third
        negative = 1.0 + nums.negative / norm
    else:
        second = nums.second
        third = nums.third
        positive = nums.base + second + third
        negative = nums.base + nums.negative
    full_grid = np.concatenate([-nums.tau_grid[:0:-1], nums.tau_grid])
    full_h = np.concatenate([negative[:0:-1], positive])
    return ChdSignal(
        tau_grid=full_grid,
        h=full_h,
        h2=second,
        h3=third,
        phase=phase,
        params=params,
        normalized=normalized)


def h_numerator(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP) -> ChdSignal:
    """
    Computes the unnormalized correlation `<sigma_ea(0) sigma_phi(tau)
    sigma_ae(0)>` for `tau >= 0` and `Re[exp(-i phi) <sigma_ea(0)
    sigma_ee(|tau|)>]` for `tau <= 0`. It is defined at exact trapping.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        tau_grid (np.ndarray | None, optional): The non-negative times.
        Defaults to None.

        step (float, optional): The step of an automatic grid. Defaults to
        DEFAULT_TAU_STEP.

    Returns:
        ChdSignal: The unnormalized signal.
    """
    return chd_signal(params, phi, tau_grid, step=step, normalized=False)


ClassicalBound = Literal["intensity", "second_order", "coherent"]
"""The classical inequalities of the correlation:
`intensity`: `0 <= h(tau) - 1 <= 1`;
`second_order`: `|h2(tau)| <= |h2(0)| <= 1`;
`coherent`: `-1 <= h(tau) <= 1`."""
CLASSICAL_BOUNDS: tuple[ClassicalBound, ...] = get_args(ClassicalBound)


def as_classical_bound(text: str) -> ClassicalBound:
    """
    Converts a string into a classical bound.

    Args:
        text (str): The string.

    Raises:
        ValueError: If the string is not a bound name.

    Returns:
        ClassicalBound: The bound.
    """
    if text not in CLASSICAL_BOUNDS:
        raise ValueError(
            f"unknown bound: {text}. Only {CLASSICAL_BOUNDS} are supported.")
    return cast(ClassicalBound, text)


Edge = Literal["lower", "upper"]


@dataclasses.dataclass(frozen=True)
class Violation:
    """The times at which one edge of a classical bound is crossed."""
    bound: ClassicalBound
    """The bound."""
    edge: Edge
    """Which edge of the bound is crossed."""
    taus: np.ndarray
    """The times of the crossing."""
    extreme: float
    """The value furthest beyond the edge."""


@dataclasses.dataclass(frozen=True)
class ViolationReport:
    """All classical bounds crossed by a signal."""
    violations: tuple[Violation, ...]
    """The violations in `CLASSICAL_BOUNDS` order."""
    tolerance: float
    """The tolerance band that was applied."""

    @property
    def is_classical(self) -> bool:
        """
        Whether the signal obeys every bound.

        Returns:
            bool: True if there are no violations.
        """
        return not self.violations

    def by_bound(self, bound: ClassicalBound) -> list[Violation]:
        """
        Selects the violations of one bound.

        Args:
            bound (ClassicalBound): The bound.

        Returns:
            list[Violation]: The violations of that bound.
        """
        return [vio for vio in self.violations if vio.bound == bound]

    def violated(self, bound: ClassicalBound) -> bool:
        """
        Whether a bound is violated.

        Args:
            bound (ClassicalBound): The bound.

        Returns:
            bool: True if any edge of the bound is crossed.
        """
        return bool(self.by_bound(bound))


def _check(
        out: list[Violation],
        bound: ClassicalBound,
        taus: np.ndarray,
        values: np.ndarray,
        lower: float | None,
        upper: float | None,
        tolerance: float) -> None:
    if lower is not None:
        mask = values < lower - tolerance
        if np.any(mask):
            out.append(Violation(
                bound=bound,
                edge="lower",
                taus=taus[mask],
                extreme=float(np.min(values[mask]))))
    if upper is not None:
        mask = values > upper + tolerance
        if np.any(mask):
            out.append(Violation(
                bound=bound,
                edge="upper",
                taus=taus[mask],
                extreme=float(np.max(values[mask]))))


def classify_nonclassical(
        signal: ChdSignal,
        *,
        tolerance: float = VIOLATION_TOLERANCE) -> ViolationReport:
    """
    Checks the signal against the inequalities obeyed by classical light.

    Args:
        signal (ChdSignal): A normalized signal.

        tolerance (float, optional): The band around each bound within which
        crossings are ignored. Defaults to VIOLATION_TOLERANCE.

    Raises:
        ValueError: If the signal is not normalized.

    Returns:
        ViolationReport: The report.
    """
    if not signal.normalized:
        raise ValueError("only normalized signals can be classified")
    out: list[Violation] = []
    _check(
        out,
        "intensity",
        signal.tau_grid,
        signal.h - 1.0,
        0.0,
        1.0,
        tolerance)
    abs_h2 = np.abs(signal.h2)
    taus = signal.tau_positive
    _check(
        out, "second_order", taus, abs_h2, None, float(abs_h2[0]), tolerance)
    if abs_h2[0] > 1.0 + tolerance:
        out.append(Violation(
            bound="second_order",
            edge="upper",
            taus=taus[:1],
            extreme=float(abs_h2[0])))
    _check(
        out, "coherent", signal.tau_grid, signal.h, -1.0, 1.0, tolerance)
    return ViolationReport(violations=tuple(out), tolerance=tolerance)
