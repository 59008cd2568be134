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
Frequency domain quantities. One-sided Fourier transforms of the propagated
correlations are evaluated as resolvent solves
`x(omega) = (i omega - M)^-1 g(0) = int_0^inf exp(-i omega tau) g(tau) dtau`
and cosine transforms as `(x(omega) + x(-omega)) / 2`.

Frequencies are in units of `gamma_a` and relative to the probe laser.
"""
import dataclasses
import math
from collections.abc import Mapping, Sequence
from typing import cast, get_args, Literal

import numpy as np
from scipy.integrate import trapezoid

from lambdachd.chd import (
    as_phase,
    EXCITATION_THRESHOLD,
    normalization,
    QuadraturePhase,
)
from lambdachd.errors import (
    InvalidParams,
    SingularResolvent,
    VanishingExcitation,
)
from lambdachd.model import (
    BlochGenerator,
    LambdaParams,
    OPERATOR_COUNT,
    OperatorIndex,
    PARAM_FIELDS,
    stationary,
    SteadyState,
    TRACE_ROW,
)
from lambdachd.regression import second_order_initial, third_order_initial


DEFAULT_OMEGA_MIN = -8.0
"""The lower end of the default frequency grid."""
DEFAULT_OMEGA_MAX = 8.0
"""The upper end of the default frequency grid."""
DEFAULT_OMEGA_COUNT = 2001
"""The number of points of the default frequency grid."""
RESONANCE_COUNT = 401
"""The number of points added around a resonance by `full_line_grid`."""
RESONANCE_SPAN = 1.5
"""The largest angle of the local grid around a resonance. The local grid
reaches `tan(1.5)`, about 14 line widths."""
RESOLVENT_RESIDUAL = 1e-8
"""Maximum residual of a resolvent solve relative to its right hand side."""


SpectrumKind = Literal[
    "incoherent",
    "chd_positive",
    "chd_negative",
    "chd_second",
    "chd_third",
    "squeezing",
]
"""The computed spectra:
`incoherent`: the incoherent part of the emission spectrum;
`chd_positive`: the CHD spectrum of the photon-first branch;
`chd_negative`: the CHD spectrum of the quadrature-first branch;
`chd_second`: the second-order part of `chd_positive`;
`chd_third`: the third-order part of `chd_positive`;
`squeezing`: the normally ordered spectrum of squeezing."""
SPECTRUM_KINDS: tuple[SpectrumKind, ...] = get_args(SpectrumKind)


def as_spectrum_kind(text: str) -> SpectrumKind:
    """
    Converts a string into a spectrum kind.

    Args:
        text (str): The string.

    Raises:
        ValueError: If the string is not a spectrum kind.

    Returns:
        SpectrumKind: The kind.
    """
    if text not in SPECTRUM_KINDS:
        raise ValueError(
            f"unknown spectrum kind: {text}. "
            f"Only {SPECTRUM_KINDS} are supported.")
    return cast(SpectrumKind, text)


Branch = Literal["positive", "negative"]
BRANCHES: tuple[Branch, ...] = get_args(Branch)


@dataclasses.dataclass(frozen=True)
class Efficiency:
    """The combined collection and detection efficiency."""
    eta: float

    def __post_init__(self) -> None:
        eta = float(self.eta)
        if not 0.0 <= eta <= 1.0:
            raise InvalidParams(f"efficiency must be in [0, 1]: {eta}")
        object.__setattr__(self, "eta", eta)


@dataclasses.dataclass(frozen=True)
class Spectrum:
    """A real spectral density on a frequency grid."""
    omega_grid: np.ndarray
    """The frequencies."""
    values: np.ndarray
    """The spectral density."""
    kind: SpectrumKind
    """The kind of the spectrum."""
    params: LambdaParams
    """The parameters."""
    phi: float | None = None
    """The quadrature phase if the spectrum depends on it."""
    coherent_weight: float | None = None
    """The weight of the elastic delta peak. Only set for the incoherent
    spectrum and never added into `values`."""


def omega_grid(
        omega_min: float = DEFAULT_OMEGA_MIN,
        omega_max: float = DEFAULT_OMEGA_MAX,
        count: int = DEFAULT_OMEGA_COUNT) -> np.ndarray:
    """
    Creates a uniform frequency grid.

    Args:
        omega_min (float, optional): The lowest frequency. Defaults to
        DEFAULT_OMEGA_MIN.

        omega_max (float, optional): The highest frequency. Defaults to
        DEFAULT_OMEGA_MAX.

        count (int, optional): The number of points. Defaults to
        DEFAULT_OMEGA_COUNT.

    Raises:
        ValueError: If the grid would be empty or reversed.

    Returns:
        np.ndarray: The grid.
    """
    if count < 1:
        raise ValueError(f"count must be positive: {count}")
    if omega_max < omega_min:
        raise ValueError(f"empty frequency range: {omega_min} {omega_max}")
    return np.linspace(omega_min, omega_max, count)


def full_line_grid(
        scale: float = 2.0,
        count: int = 8001,
        *,
        positive_only: bool = False,
        resonances: Sequence[complex] = ()) -> np.ndarray:
    """
    Creates a grid reaching far into the tails by mapping a uniform grid of
    angles through `omega = scale * tan(theta)`. The poles are excluded.
    Lines narrower than the grid spacing are resolved by adding a local grid
    of the same shape around every resonance.

    Args:
        scale (float, optional): The frequency around which points are
        densest. Defaults to 2.0.

        count (int, optional): The number of points. Defaults to 8001.

        positive_only (bool, optional): Whether the grid covers `[0, inf)`
        instead of the whole line. Defaults to False.

        resonances (Sequence[complex], optional): Eigenvalues of the
        generator. Each one adds `RESONANCE_COUNT` points centered at
        `+-Im` with its decay rate as width. Defaults to ().

    Returns:
        np.ndarray: The increasing grid.
    """
    if positive_only:
        theta = np.arange(count) * (0.5 * math.pi / count)
    else:
        theta = (np.arange(count) + 0.5) * (math.pi / count) - 0.5 * math.pi
    res = scale * np.tan(theta)
    local = np.tan(
        np.linspace(-RESONANCE_SPAN, RESONANCE_SPAN, RESONANCE_COUNT))
    extra = [res]
    for eig in resonances:
        width = abs(eig.real)
        if abs(eig) < 1e-12 or width == 0.0:
            continue
        for center in (eig.imag, -eig.imag):
            extra.append(center + width * local)
    res = np.unique(np.concatenate(extra))
    if positive_only:
        res = res[res >= 0.0]
    return res


def resolvent_solve(
        gen: BlochGenerator,
        omega: float | np.ndarray,
        v: np.ndarray) -> np.ndarray:
    """
    Solves `(i omega - M) x = v` for a vector without trace. The `sigma_ee`
    equation is replaced by `u x = 0`, which keeps the system regular at
    `omega = 0` where `M` itself is singular.

    Args:
        gen (BlochGenerator): The generator.

        omega (float | np.ndarray): A frequency or a grid of frequencies.

        v (np.ndarray): The right hand side.

    Raises:
        SingularResolvent: If the solution does not reproduce `v`.

    Returns:
        np.ndarray: The solution, with a leading frequency axis if `omega` is
        an array.
    """
    omegas = np.asarray(omega, dtype=np.float64)
    scalar = omegas.ndim == 0
    omegas = np.atleast_1d(omegas)
    v = np.asarray(v, dtype=np.complex128)
    eye = np.eye(OPERATOR_COUNT, dtype=np.complex128)
    system = 1j * omegas[:, np.newaxis, np.newaxis] * eye - gen.m
    deflated = system.copy()
    deflated[:, OperatorIndex.EE, :] = TRACE_ROW
    rhs = np.broadcast_to(v, (omegas.size, OPERATOR_COUNT)).copy()
    rhs[:, OperatorIndex.EE] = 0.0
    try:
        res = np.linalg.solve(deflated, rhs[..., np.newaxis])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent(
            f"singular resolvent for {gen.params}") from exc
    residual = np.linalg.norm(
        np.einsum("wij,wj->wi", system, res) - v, axis=1)
    limit = RESOLVENT_RESIDUAL * float(np.linalg.norm(v))
    if np.any(residual > limit):
        bad = int(np.argmax(residual))
        raise SingularResolvent(
            f"resolvent residual {residual[bad]:.3g} at "
            f"omega={omegas[bad]:g} exceeds {limit:.3g} for {gen.params}")
    return res[0] if scalar else res


def cosine_transform(
        gen: BlochGenerator,
        omega: float | np.ndarray,
        v: np.ndarray) -> np.ndarray:
    """
    Computes `int_0^inf cos(omega tau) exp(M tau) v dtau`.

    Args:
        gen (BlochGenerator): The generator.

        omega (float | np.ndarray): A frequency or a grid of frequencies.

        v (np.ndarray): The initial vector without trace.

    Returns:
        np.ndarray: The transform. It is even in `omega` exactly.
    """
    omegas = np.asarray(omega, dtype=np.float64)
    return 0.5 * (
        resolvent_solve(gen, omegas, v) + resolvent_solve(gen, -omegas, v))


def _grid(omegas: np.ndarray | None) -> np.ndarray:
    if omegas is None:
        return omega_grid()
    return np.asarray(omegas, dtype=np.float64)


def coherent_weight(ss: SteadyState) -> float:
    """
    Computes the weight of the elastically scattered delta peak.

    Args:
        ss (SteadyState): The steady state.

    Raises:
        VanishingExcitation: If the excited state is empty.

    Returns:
        float: `|alpha_ea|^2 / (pi alpha_ee)`.
    """
    if ss.ee < EXCITATION_THRESHOLD:
        raise VanishingExcitation(
            f"excited state population {ss.ee:.3g} vanishes: the emission "
            "spectrum is undefined")
    return abs(ss.ea) ** 2 / (math.pi * ss.ee)


def incoherent_spectrum(
        params: LambdaParams,
        omegas: np.ndarray | None = None) -> Spectrum:
    """
    Computes the incoherent part of the emission spectrum
    `Re[x(omega)_ae] / (pi alpha_ee)` of the dipole fluctuations.

    Args:
        params (LambdaParams): The parameters.

        omegas (np.ndarray | None, optional): The frequency grid. Defaults to
        the default grid.

    Returns:
        Spectrum: The spectrum including the coherent weight. Its integral
        over the whole line is `1 - |alpha_ea|^2 / alpha_ee`.
    """
    gen, ss = stationary(params)
    weight = coherent_weight(ss)
    grid = _grid(omegas)
    sol = resolvent_solve(gen, grid, second_order_initial(ss))
    return Spectrum(
        omega_grid=grid,
        values=sol[:, OperatorIndex.AE].real / (math.pi * ss.ee),
        kind="incoherent",
        params=params,
        coherent_weight=weight)


def _second_order_part(
        gen: BlochGenerator,
        ss: SteadyState,
        phase: QuadraturePhase,
        grid: np.ndarray) -> np.ndarray:
    """Computes `int cos(omega tau) 2 Re[alpha_ae c2(tau)] dtau`."""
    trans = phase.project(
        cosine_transform(gen, grid, second_order_initial(ss)))
    return 2.0 * (ss.ae * trans).real


def _third_order_part(
        gen: BlochGenerator,
        ss: SteadyState,
        phase: QuadraturePhase,
        grid: np.ndarray) -> np.ndarray:
    """Computes `int cos(omega tau) c3(tau) dtau`."""
    trans = cosine_transform(gen, grid, third_order_initial(ss))
    return phase.project(trans).real


def chd_spectrum_split(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        omegas: np.ndarray | None = None) -> tuple[Spectrum, Spectrum]:
    """
    Computes the CHD spectra of the second and third order fluctuations,
    `4 gamma_a alpha_ee int_0^inf cos(omega tau) h_N(tau) dtau`.

    The second-order part multiplies the whole cosine transform of
    `<d sigma_ea(0) d sigma_phi(tau)>` with `alpha_ae`, which matches the
    time domain definition of `h2`.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        omegas (np.ndarray | None, optional): The frequency grid. Defaults to
        the default grid.

    Returns:
        tuple[Spectrum, Spectrum]: The second and the third order spectrum.
    """
    phase = as_phase(phi)
    gen, ss = stationary(params)
    norm = normalization(ss, phase)
    pref = 4.0 * params.gamma_a * ss.ee / norm
    grid = _grid(omegas)
    second = Spectrum(
        omega_grid=grid,
        values=pref * _second_order_part(gen, ss, phase, grid),
        kind="chd_second",
        params=params,
        phi=phase.phi)
    third = Spectrum(
        omega_grid=grid,
        values=pref * _third_order_part(gen, ss, phase, grid),
        kind="chd_third",
        params=params,
        phi=phase.phi)
    return second, third


def chd_spectrum(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        branch: Branch,
        omegas: np.ndarray | None = None) -> Spectrum:
    """
    Computes the CHD spectrum `4 gamma_a alpha_ee int_0^inf cos(omega tau)
    [h(tau) - 1] dtau` of one time branch.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        branch (Branch): `positive` for photon-first or `negative` for
        quadrature-first ordering.

        omegas (np.ndarray | None, optional): The frequency grid. Defaults to
        the default grid.

    Raises:
        ValueError: If the branch is unknown.

    Returns:
        Spectrum: The spectrum.
    """
    phase = as_phase(phi)
    if branch == "positive":
        second, third = chd_spectrum_split(params, phase, omegas)
        return Spectrum(
            omega_grid=second.omega_grid,
            values=second.values + third.values,
            kind="chd_positive",
            params=params,
            phi=phase.phi)
    if branch != "negative":
        raise ValueError(f"unknown branch: {branch}. Only {BRANCHES}.")
    gen, ss = stationary(params)
    norm = normalization(ss, phase)
    grid = _grid(omegas)
    trans = cosine_transform(gen, grid, second_order_initial(ss))
    values = (phase.rotor * trans[:, OperatorIndex.EE]).real
    return Spectrum(
        omega_grid=grid,
        values=4.0 * params.gamma_a * ss.ee / norm * values,
        kind="chd_negative",
        params=params,
        phi=phase.phi)


def squeezing_spectrum(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        eta: float | Efficiency,
        omegas: np.ndarray | None = None) -> Spectrum:
    """
    Computes the normally ordered spectrum of squeezing
    `8 gamma_a eta int_0^inf cos(omega tau)
    Re[exp(-i phi) <d sigma_ea(0) d sigma_phi(tau)>] dtau`.
    Negative values indicate squeezing.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

        eta (float | Efficiency): The detection efficiency.

        omegas (np.ndarray | None, optional): The frequency grid. Defaults to
        the default grid.

    Returns:
        Spectrum: The spectrum. Its integral over `omega >= 0` is
        `4 pi gamma_a eta V_phi`.
    """
    phase = as_phase(phi)
    if not isinstance(eta, Efficiency):
        eta = Efficiency(eta)
    gen, ss = stationary(params)
    grid = _grid(omegas)
    trans = phase.project(
        cosine_transform(gen, grid, second_order_initial(ss)))
    return Spectrum(
        omega_grid=grid,
        values=8.0 * params.gamma_a * eta.eta * (phase.rotor * trans).real,
        kind="squeezing",
        params=params,
        phi=phase.phi)


def variance(params: LambdaParams, phi: float | QuadraturePhase) -> float:
    """
    Computes the normally ordered quadrature variance
    `V_phi = Re[exp(-i phi) <d sigma_ea d sigma_phi>]`. Negative values
    indicate a squeezed quadrature.

    Args:
        params (LambdaParams): The parameters.

        phi (float | QuadraturePhase): The quadrature phase.

    Returns:
        float: The variance.
    """
    phase = as_phase(phi)
    ss = stationary(params).ss
    moment = phase.project(second_order_initial(ss))
    return float((phase.rotor * moment).real)


def variance_map(
        params: LambdaParams,
        phi: float | QuadraturePhase,
        axes: Mapping[str, np.ndarray]) -> np.ndarray:
    """
    Evaluates the variance over a two dimensional parameter grid.

    Args:
        params (LambdaParams): The parameters that are not swept.

        phi (float | QuadraturePhase): The quadrature phase.

        axes (Mapping[str, np.ndarray]): Exactly two parameter names with
        their values.

    Raises:
        ValueError: If there are not exactly two valid axes.

    Returns:
        np.ndarray: The variance with one dimension per axis in the order of
        the mapping.
    """
    if len(axes) != 2:
        raise ValueError(f"variance map requires two axes: {list(axes)}")
    (x_name, x_values), (y_name, y_values) = axes.items()
    for name in (x_name, y_name):
        if name not in PARAM_FIELDS:
            raise ValueError(f"unknown parameter: {name}")
    phase = as_phase(phi)
    res = np.empty((len(x_values), len(y_values)), dtype=np.float64)
    for ix, x_val in enumerate(x_values):
        for jx, y_val in enumerate(y_values):
            cur = params.replace(**{x_name: x_val, y_name: y_val})
            res[ix, jx] = variance(cur, phase)
    return res


def integrate_spectrum(
        spectrum: Spectrum,
        *,
        include_coherent: bool = False,
        tail_correction: bool = False) -> float:
    """
    Integrates a spectrum over its grid with the trapezoid rule.

    Args:
        spectrum (Spectrum): The spectrum.

        include_coherent (bool, optional): Whether to add the integral of the
        elastic delta peak. Defaults to False.

        tail_correction (bool, optional): Whether to add `S(w) |w|` at both
        ends of the grid, which is the integral of a `1 / omega^2` tail
        beyond the grid. Use it with `full_line_grid`. Defaults to False.

    Returns:
        float: The integral.
    """
    grid = spectrum.omega_grid
    values = spectrum.values
    res = float(trapezoid(values, grid))
    if tail_correction:
        res += float(values[0] * abs(grid[0]) + values[-1] * abs(grid[-1]))
    if include_coherent and spectrum.coherent_weight is not None:
        res += math.pi * spectrum.coherent_weight
    return res
