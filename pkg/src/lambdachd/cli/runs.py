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
The computations behind the CLI commands. Every runner expands the sweep of
a configuration, evaluates the points in parallel, and collects the rows in
sweep order into a single long format dataset.
"""
import logging
import math
from collections.abc import Callable

import numpy as np

from lambdachd.chd import (
    chd_signal,
    ChdSignal,
    classify_nonclassical,
    h_numerator,
    QuadraturePhase,
)
from lambdachd.cli.config import CommandName, RunConfig, SweepPoint
from lambdachd.cli.csvout import Cell, config_metadata, Dataset
from lambdachd.cli.sweep import run_points
from lambdachd.errors import ConfigError, VanishingExcitation
from lambdachd.model import (
    LambdaParams,
    saturation_parameter,
    stationary,
    trapping_fidelity,
)
from lambdachd.spectra import (
    chd_spectrum,
    chd_spectrum_split,
    incoherent_spectrum,
    Spectrum,
    SpectrumKind,
    squeezing_spectrum,
    variance_map,
)
from lambdachd.util import fmt_float


logger = logging.getLogger(__name__)


Rows = list[tuple[Cell, ...]]
Runner = Callable[[RunConfig, str, int | None, bool], Dataset]


def _grid_metadata(config: RunConfig, *, tau: bool, omega: bool) -> str:
    grid = config.grid
    parts = []
    if tau:
        tau_max = fmt_float(grid.tau_max) if grid.tau_max > 0.0 else "auto"
        parts.append(f"tau_step={fmt_float(grid.tau_step)}")
        parts.append(f"tau_max={tau_max}")
    if omega:
        parts.append(f"omega_min={fmt_float(grid.omega_min)}")
        parts.append(f"omega_max={fmt_float(grid.omega_max)}")
        parts.append(f"omega_count={grid.omega_count}")
    return " ".join(parts)


def _dataset(
        config: RunConfig,
        version: str,
        quantity: str,
        columns: tuple[str, ...],
        **extra: str) -> Dataset:
    metadata = config_metadata(config, version)
    metadata.update(extra)
    return Dataset(
        quantity=quantity,
        columns=config.axis_names + columns,
        metadata=metadata)


def _phi_metadata(config: RunConfig) -> str:
    return " ".join(fmt_float(phi) for phi in config.phi)


def run_steady_scan(
        config: RunConfig,
        version: str,
        threads: int | None = None,
        progress: bool = True) -> Dataset:
    """
    Computes the steady state populations for every sweep point.

    Args:
        config (RunConfig): The configuration.

        version (str): The package version written into the metadata.

        threads (int | None, optional): The number of worker threads.
        Defaults to None.

        progress (bool, optional): Whether to show a progress bar. Defaults
        to True.

    Returns:
        Dataset: The populations, the saturation parameter of the probe
        transition, and the population of the trapping state.
    """
    dataset = _dataset(
        config,
        version,
        "steady_state",
        (
            "alpha_ee",
            "alpha_aa",
            "alpha_bb",
            "saturation_a",
            "dark_population",
        ))

    def compute(point: SweepPoint) -> Rows:
        ss = stationary(point.params).ss
        return [point.coords + (
            ss.ee,
            ss.aa,
            ss.bb,
            saturation_parameter(point.params, "a"),
            trapping_fidelity(ss, point.params),
        )]

    points = config.points()
    for rows in run_points(
            compute, points, threads=threads, desc="steady-scan",
            progress=progress):
        dataset.add_rows(rows)
    if len(config.sweep) == 1 and dataset.rows:
        lowest = min(dataset.rows, key=lambda row: float(row[1]))
        logger.info(
            "lowest excitation %g at %s=%g",
            lowest[1],
            config.axis_names[0],
            lowest[0])
    return dataset


def _nan_spectrum(
        kind: SpectrumKind,
        params: LambdaParams,
        omegas: np.ndarray,
        phi: float | None) -> Spectrum:
    return Spectrum(
        omega_grid=omegas,
        values=np.full(omegas.shape, np.nan),
        kind=kind,
        params=params,
        phi=phi)


def _point_spectra(
        config: RunConfig,
        params: LambdaParams,
        omegas: np.ndarray) -> list[Spectrum]:
    res: list[Spectrum] = []
    kinds = config.kinds
    if "incoherent" in kinds:
        try:
            res.append(incoherent_spectrum(params, omegas))
        except VanishingExcitation as exc:
            logger.warning("%s", exc)
            res.append(_nan_spectrum("incoherent", params, omegas, None))
    for phi in config.phi:
        phase = QuadraturePhase(phi)
        for kind in kinds:
            if kind == "incoherent":
                continue
            try:
                if kind == "squeezing":
                    res.append(squeezing_spectrum(
                        params, phase, config.eta, omegas))
                elif kind == "chd_positive":
                    res.append(chd_spectrum(
                        params, phase, "positive", omegas))
                elif kind == "chd_negative":
                    res.append(chd_spectrum(
                        params, phase, "negative", omegas))
                else:
                    second, third = chd_spectrum_split(params, phase, omegas)
                    res.append(second if kind == "chd_second" else third)
            except VanishingExcitation as exc:
                logger.warning("%s", exc)
                res.append(_nan_spectrum(kind, params, omegas, phase.phi))
    return res


def run_spectrum(
        config: RunConfig,
        version: str,
        threads: int | None = None,
        progress: bool = True) -> Dataset:
    """
    Computes the requested spectra for every sweep point and quadrature
    phase. The incoherent spectrum does not depend on the phase and is
    written once per point with `phi = nan`. Spectra that are undefined at
    a trapping point are written as `nan`.

    Args:
        config (RunConfig): The configuration.

        version (str): The package version written into the metadata.

        threads (int | None, optional): The number of worker threads.
        Defaults to None.

        progress (bool, optional): Whether to show a progress bar. Defaults
        to True.

    Returns:
        Dataset: The spectra in long format. The weight of the elastic peak
        is a separate column that is only set for the incoherent spectrum.
    """
    omegas = config.grid.omega_grid()
    dataset = _dataset(
        config,
        version,
        "spectrum",
        ("kind", "phi", "omega", "value", "coherent_weight"),
        kinds=" ".join(config.kinds),
        phi=_phi_metadata(config),
        eta=fmt_float(config.eta),
        grid=_grid_metadata(config, tau=False, omega=True))

    def compute(point: SweepPoint) -> Rows:
        rows: Rows = []
        for spec in _point_spectra(config, point.params, omegas):
            phi = math.nan if spec.phi is None else spec.phi
            weight = (
                math.nan
                if spec.coherent_weight is None
                else spec.coherent_weight)
            for omega, value in zip(spec.omega_grid, spec.values):
                rows.append(point.coords + (
                    spec.kind, phi, float(omega), float(value), weight))
        return rows

    for rows in run_points(
            compute, config.points(), threads=threads, desc="spectrum",
            progress=progress):
        dataset.add_rows(rows)
    return dataset


def _point_signal(
        params: LambdaParams,
        phase: QuadraturePhase,
        tau_grid: np.ndarray | None,
        step: float) -> ChdSignal:
    try:
        signal = chd_signal(params, phase, tau_grid, step=step)
    except VanishingExcitation as exc:
        logger.warning("%s: writing the unnormalized numerator", exc)
        return h_numerator(params, phase, tau_grid, step=step)
    report = classify_nonclassical(signal)
    if not report.is_classical:
        logger.info(
            "phi=%g violates %s",
            phase.phi,
            ", ".join(sorted({vio.bound for vio in report.violations})))
    return signal


def run_chd(
        config: RunConfig,
        version: str,
        threads: int | None = None,
        progress: bool = True) -> Dataset:
    """
    Computes the amplitude-intensity correlation on both time branches for
    every sweep point and quadrature phase. At trapping points the
    unnormalized numerator is written instead and `normalized` is 0.

    Args:
        config (RunConfig): The configuration.

        version (str): The package version written into the metadata.

        threads (int | None, optional): The number of worker threads.
        Defaults to None.

        progress (bool, optional): Whether to show a progress bar. Defaults
        to True.

    Returns:
        Dataset: The correlation over `[-tau_max, tau_max]`. The second and
        third order parts are only defined for `tau >= 0` and are `nan`
        otherwise.
    """
    tau_grid = config.grid.tau_grid()
    step = config.grid.tau_step
    dataset = _dataset(
        config,
        version,
        "chd",
        ("phi", "tau", "h", "h2", "h3", "normalized"),
        phi=_phi_metadata(config),
        grid=_grid_metadata(config, tau=True, omega=False))

    def compute(point: SweepPoint) -> Rows:
        rows: Rows = []
        for phi in config.phi:
            signal = _point_signal(
                point.params, QuadraturePhase(phi), tau_grid, step)
            zero = signal.zero_index
            for ix, (tau, val) in enumerate(zip(signal.tau_grid, signal.h)):
                if ix >= zero:
                    h2 = float(signal.h2[ix - zero])
                    h3 = float(signal.h3[ix - zero])
                else:
                    h2 = math.nan
                    h3 = math.nan
                rows.append(point.coords + (
                    signal.phase.phi,
                    float(tau),
                    float(val),
                    h2,
                    h3,
                    int(signal.normalized),
                ))
        return rows

    for rows in run_points(
            compute, config.points(), threads=threads, desc="chd",
            progress=progress):
        dataset.add_rows(rows)
    return dataset


def run_squeezing(
        config: RunConfig,
        version: str,
        threads: int | None = None,
        progress: bool = True) -> Dataset:
    """
    Computes the spectrum of squeezing for every sweep point and quadrature
    phase.

    Args:
        config (RunConfig): The configuration.

        version (str): The package version written into the metadata.

        threads (int | None, optional): The number of worker threads.
        Defaults to None.

        progress (bool, optional): Whether to show a progress bar. Defaults
        to True.

    Returns:
        Dataset: The spectra in long format.
    """
    omegas = config.grid.omega_grid()
    dataset = _dataset(
        config,
        version,
        "squeezing",
        ("phi", "omega", "value"),
        phi=_phi_metadata(config),
        eta=fmt_float(config.eta),
        grid=_grid_metadata(config, tau=False, omega=True))

    def compute(point: SweepPoint) -> Rows:
        rows: Rows = []
        for phi in config.phi:
            spec = squeezing_spectrum(point.params, phi, config.eta, omegas)
            phi_val = spec.phi if spec.phi is not None else phi
            for omega, value in zip(spec.omega_grid, spec.values):
                rows.append(
                    point.coords + (phi_val, float(omega), float(value)))
        return rows

    for rows in run_points(
            compute, config.points(), threads=threads, desc="squeezing",
            progress=progress):
        dataset.add_rows(rows)
    return dataset


def run_variance_map(
        config: RunConfig,
        version: str,
        threads: int | None = None,
        progress: bool = True) -> Dataset:
    """
    Computes the normally ordered quadrature variance over a two
    dimensional sweep.

    Args:
        config (RunConfig): The configuration. It must sweep exactly two
        parameters.

        version (str): The package version written into the metadata.

        threads (int | None, optional): The number of worker threads.
        Defaults to None.

        progress (bool, optional): Whether to show a progress bar. Defaults
        to True.

    Raises:
        ConfigError: If the configuration does not sweep two parameters.

    Returns:
        Dataset: The variance with the first axis varying slowest.
    """
    if len(config.sweep) != 2:
        raise ConfigError(
            f"{config.source}: variance-map requires exactly two swept "
            f"parameters: {list(config.axis_names)}")
    # validates every point
    config.points()
    # the variance only depends on rate ratios so the configuration units
    # can be used directly
    axes = {
        axis.name: np.array(axis.values, dtype=np.float64)
        for axis in config.sweep
    }
    x_axis, y_axis = config.sweep
    dataset = _dataset(
        config,
        version,
        "variance",
        ("phi", "variance"),
        phi=_phi_metadata(config))

    def compute(phi: float) -> Rows:
        phase = QuadraturePhase(phi)
        values = variance_map(config.params, phase, axes)
        rows: Rows = []
        for ix, x_val in enumerate(x_axis.values):
            for jx, y_val in enumerate(y_axis.values):
                rows.append((x_val, y_val, phase.phi, float(values[ix, jx])))
        return rows

    for rows in run_points(
            compute, list(config.phi), threads=threads, desc="variance-map",
            progress=progress):
        dataset.add_rows(rows)
    return dataset


RUNNERS: dict[CommandName, Runner] = {
    "steady-scan": run_steady_scan,
    "spectrum": run_spectrum,
    "chd": run_chd,
    "squeezing": run_squeezing,
    "variance-map": run_variance_map,
}
"""The runner of every command."""


def execute(
        command: CommandName,
        config: RunConfig,
        version: str,
        *,
        threads: int | None = None,
        progress: bool = True) -> Dataset:
    """
    Runs a command on a configuration.

    Args:
        command (CommandName): The command.

        config (RunConfig): The configuration.

        version (str): The package version written into the metadata.

        threads (int | None, optional): The number of worker threads.
        Defaults to None.

        progress (bool, optional): Whether to show a progress bar. Defaults
        to True.

    Raises:
        ConfigError: If the configuration is meant for another command.

    Returns:
        Dataset: The result.
    """
    if config.command is not None and config.command != command:
        raise ConfigError(
            f"{config.source}: configuration is for '{config.command}' and "
            f"cannot be used with '{command}'")
    return RUNNERS[command](config, version, threads, progress)
