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
Run configurations. A configuration is a TOML file:

```toml
command = "chd"
description = "amplitude-intensity correlation at the working point"
units = "scaled"
phi = [0.0, 1.5707963267948966]
eta = 1.0
kinds = ["chd_positive", "chd_negative"]

[params]
omega_a = 1.12

[sweep]
delta_a = {start = -2.0, stop = 8.0, count = 1001}
omega_a = [0.1, 1.12, 5.0]

[grid]
tau_step = 0.01
tau_max = 0.0
omega_min = -8.0
omega_max = 8.0
omega_count = 2001
```

All keys are optional. Parameters default to the working point. With
`units = "mhz"` parameters and sweep values are given in MHz and divided by
`gamma_a` for every sweep point. Grids are always in units of `gamma_a`.
"""
import dataclasses
import itertools
import math
import os
import tomllib
from typing import Any, cast, get_args, Literal

import numpy as np

from lambdachd.errors import ConfigError, InvalidParams
from lambdachd.model import (
    GAMMA_A_MHZ,
    GAMMA_B_MHZ,
    LambdaParams,
    PARAM_FIELDS,
    WORKING_POINT,
)
from lambdachd.regression import DEFAULT_TAU_STEP, uniform_grid
from lambdachd.spectra import (
    as_spectrum_kind,
    DEFAULT_OMEGA_COUNT,
    DEFAULT_OMEGA_MAX,
    DEFAULT_OMEGA_MIN,
    omega_grid,
    SpectrumKind,
)
from lambdachd.util import get_short_hash


Units = Literal["scaled", "mhz"]
"""How parameters are given: `scaled` in units of `gamma_a` or `mhz`."""
UNITS: tuple[Units, ...] = get_args(Units)


def as_units(text: str) -> Units:
    """
    Converts a string into a unit mode.

    Args:
        text (str): The string.

    Raises:
        ValueError: If the string is not a unit mode.

    Returns:
        Units: The unit mode.
    """
    if text not in UNITS:
        raise ValueError(f"unknown units: {text}. Only {UNITS} are supported.")
    return cast(Units, text)


CommandName = Literal[
    "steady-scan",
    "spectrum",
    "chd",
    "squeezing",
    "variance-map",
]
"""The computations a configuration can describe."""
COMMANDS: tuple[CommandName, ...] = get_args(CommandName)


MAX_SWEEP_AXES = 2
TOP_KEYS = {
    "command",
    "description",
    "units",
    "params",
    "sweep",
    "phi",
    "eta",
    "kinds",
    "grid",
}
GRID_KEYS = {"tau_step", "tau_max", "omega_min", "omega_max", "omega_count"}
RANGE_KEYS = {"start", "stop", "count"}
DEFAULT_PHI: tuple[float, ...] = (0.0, 0.5 * math.pi)


def default_params(units: Units) -> LambdaParams:
    """
    The default parameters in the given units.

    Args:
        units (Units): The unit mode.

    Returns:
        LambdaParams: The working point, in MHz for `mhz`.
    """
    if units == "scaled":
        return WORKING_POINT
    return LambdaParams(
        omega_a=WORKING_POINT.omega_a * GAMMA_A_MHZ,
        omega_b=WORKING_POINT.omega_b * GAMMA_A_MHZ,
        delta_a=WORKING_POINT.delta_a * GAMMA_A_MHZ,
        delta_b=WORKING_POINT.delta_b * GAMMA_A_MHZ,
        gamma_a=GAMMA_A_MHZ,
        gamma_b=GAMMA_B_MHZ)


@dataclasses.dataclass(frozen=True)
class SweepAxis:
    """A swept parameter."""
    name: str
    """The parameter name."""
    values: tuple[float, ...]
    """The values in configuration units."""


@dataclasses.dataclass(frozen=True)
class GridConfig:
    """The time and frequency grids."""
    tau_step: float = DEFAULT_TAU_STEP
    """The time step."""
    tau_max: float = 0.0
    """The end of the time grid. Zero sizes the grid to the decay."""
    omega_min: float = DEFAULT_OMEGA_MIN
    """The lowest frequency."""
    omega_max: float = DEFAULT_OMEGA_MAX
    """The highest frequency."""
    omega_count: int = DEFAULT_OMEGA_COUNT
    """The number of frequencies."""

    def tau_grid(self) -> np.ndarray | None:
        """
        The time grid.

        Returns:
            np.ndarray | None: The grid or None if it is sized automatically.
        """
        if self.tau_max <= 0.0:
            return None
        return uniform_grid(self.tau_step, self.tau_max)

    def omega_grid(self) -> np.ndarray:
        """
        The frequency grid.

        Returns:
            np.ndarray: The grid.
        """
        return omega_grid(self.omega_min, self.omega_max, self.omega_count)


@dataclasses.dataclass(frozen=True)
class SweepPoint:
    """A single point of a sweep."""
    coords: tuple[float, ...]
    """The values of the swept parameters in configuration units."""
    params: LambdaParams
    """The scaled parameters of the point."""


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """A parsed run configuration."""
    source: str
    """Where the configuration came from."""
    config_hash: str
    """A short hash of the configuration text."""
    command: CommandName | None
    """The command the configuration is meant for."""
    description: str
    """A free text description."""
    units: Units
    """The unit mode of `params` and `sweep`."""
    params: LambdaParams
    """The base parameters in configuration units."""
    sweep: tuple[SweepAxis, ...]
    """The swept parameters."""
    phi: tuple[float, ...]
    """The quadrature phases."""
    eta: float
    """The detection efficiency."""
    kinds: tuple[SpectrumKind, ...]
    """The requested spectra."""
    grid: GridConfig
    """The grids."""

    @property
    def axis_names(self) -> tuple[str, ...]:
        """
        The names of the swept parameters.

        Returns:
            tuple[str, ...]: The names in sweep order.
        """
        return tuple(axis.name for axis in self.sweep)

    def point_params(self, coords: tuple[float, ...]) -> LambdaParams:
        """
        Computes the scaled parameters of a sweep point.

        Args:
            coords (tuple[float, ...]): The swept values.

        Returns:
            LambdaParams: The parameters in units of `gamma_a`.
        """
        changes = dict(zip(self.axis_names, coords))
        return self.params.replace(**changes).scaled()

    def points(self) -> list[SweepPoint]:
        """
        Expands the sweep. The first axis varies slowest.

        Raises:
            ConfigError: If a sweep point violates a parameter invariant.

        Returns:
            list[SweepPoint]: The points in output order.
        """
        res = []
        for coords in itertools.product(
                *(axis.values for axis in self.sweep)):
            try:
                params = self.point_params(coords)
            except InvalidParams as exc:
                raise ConfigError(
                    f"{self.source}: invalid sweep point "
                    f"{dict(zip(self.axis_names, coords))}: {exc}") from exc
            res.append(SweepPoint(coords=tuple(coords), params=params))
        return res


def _number(source: str, path: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{source}: {path} must be a number: {value!r}")
    res = float(value)
    if not math.isfinite(res):
        raise ConfigError(f"{source}: {path} must be finite: {value!r}")
    return res


def _table(source: str, path: str, value: Any) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(f"{source}: {path} must be a table")
    return value


def _check_keys(
        source: str,
        prefix: str,
        obj: dict[str, Any],
        allowed: set[str] | tuple[str, ...]) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{source}: unknown key '{prefix}{key}'")


def _axis_values(source: str, name: str, value: Any) -> tuple[float, ...]:
    path = f"sweep.{name}"
    if isinstance(value, list):
        res = tuple(
            _number(source, f"{path}[{ix}]", val)
            for ix, val in enumerate(value))
    elif isinstance(value, dict):
        _check_keys(source, f"{path}.", value, RANGE_KEYS)
        missing = RANGE_KEYS.difference(value)
        if missing:
            raise ConfigError(
                f"{source}: {path} is missing {sorted(missing)}")
        start = _number(source, f"{path}.start", value["start"])
        stop = _number(source, f"{path}.stop", value["stop"])
        count = value["count"]
        if isinstance(count, bool) or not isinstance(count, int):
            raise ConfigError(f"{source}: {path}.count must be an integer")
        if count < 1:
            raise ConfigError(f"{source}: {path}.count must be at least 1")
        res = tuple(float(val) for val in np.linspace(start, stop, count))
    else:
        raise ConfigError(
            f"{source}: {path} must be an array or a table with "
            f"{sorted(RANGE_KEYS)}")
    if not res:
        raise ConfigError(f"{source}: {path} is empty")
    return res


def _parse_grid(source: str, obj: dict[str, Any]) -> GridConfig:
    _check_keys(source, "grid.", obj, GRID_KEYS)
    defaults = GridConfig()
    tau_step = _number(
        source, "grid.tau_step", obj.get("tau_step", defaults.tau_step))
    tau_max = _number(
        source, "grid.tau_max", obj.get("tau_max", defaults.tau_max))
    omega_min = _number(
        source, "grid.omega_min", obj.get("omega_min", defaults.omega_min))
    omega_max = _number(
        source, "grid.omega_max", obj.get("omega_max", defaults.omega_max))
    omega_count = obj.get("omega_count", defaults.omega_count)
    if tau_step <= 0.0:
        raise ConfigError(f"{source}: grid.tau_step must be positive")
    if tau_max < 0.0:
        raise ConfigError(f"{source}: grid.tau_max must be non-negative")
    if omega_max < omega_min:
        raise ConfigError(
            f"{source}: grid.omega_max must not be below grid.omega_min")
    if (isinstance(omega_count, bool)
            or not isinstance(omega_count, int)
            or omega_count < 1):
        raise ConfigError(
            f"{source}: grid.omega_count must be a positive integer")
    return GridConfig(
        tau_step=tau_step,
        tau_max=tau_max,
        omega_min=omega_min,
        omega_max=omega_max,
        omega_count=omega_count)


def parse_config(
        text: str,
        source: str = "<config>",
        *,
        units: Units | None = None) -> RunConfig:
    """
    Parses and validates a configuration.

    Args:
        text (str): The TOML text.

        source (str, optional): The name used in error messages. Defaults to
        "<config>".

        units (Units | None, optional): Overrides the unit mode of the file.
        Defaults to None.

    Raises:
        ConfigError: If the configuration is invalid.

    Returns:
        RunConfig: The configuration.
    """
    try:
        obj = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    _check_keys(source, "", obj, TOP_KEYS)

    command = obj.get("command")
    if command is not None and command not in COMMANDS:
        raise ConfigError(
            f"{source}: command must be one of {COMMANDS}: {command!r}")
    description = obj.get("description", "")
    if not isinstance(description, str):
        raise ConfigError(f"{source}: description must be a string")

    if units is None:
        unit_text = obj.get("units", "scaled")
        if not isinstance(unit_text, str) or unit_text not in UNITS:
            raise ConfigError(
                f"{source}: units must be one of {UNITS}: {unit_text!r}")
        units = as_units(unit_text)

    params_obj = _table(source, "params", obj.get("params", {}))
    _check_keys(source, "params.", params_obj, PARAM_FIELDS)
    changes = {
        name: _number(source, f"params.{name}", value)
        for name, value in params_obj.items()
    }
    try:
        params = default_params(units).replace(**changes)
    except InvalidParams as exc:
        raise ConfigError(f"{source}: params: {exc}") from exc

    sweep_obj = _table(source, "sweep", obj.get("sweep", {}))
    _check_keys(source, "sweep.", sweep_obj, PARAM_FIELDS)
    if len(sweep_obj) > MAX_SWEEP_AXES:
        raise ConfigError(
            f"{source}: at most {MAX_SWEEP_AXES} parameters can be swept: "
            f"{list(sweep_obj)}")
    sweep = tuple(
        SweepAxis(name=name, values=_axis_values(source, name, value))
        for name, value in sweep_obj.items())

    phi_obj = obj.get("phi", list(DEFAULT_PHI))
    if not isinstance(phi_obj, list):
        raise ConfigError(f"{source}: phi must be an array of radians")
    if not phi_obj:
        raise ConfigError(f"{source}: phi must not be empty")
    phi = tuple(
        _number(source, f"phi[{ix}]", val) for ix, val in enumerate(phi_obj))

    eta = _number(source, "eta", obj.get("eta", 1.0))
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"{source}: eta must be in [0, 1]: {eta}")

    kinds_obj = obj.get("kinds", ["incoherent"])
    if not isinstance(kinds_obj, list) or not kinds_obj:
        raise ConfigError(f"{source}: kinds must be a non-empty array")
    try:
        kinds = tuple(as_spectrum_kind(str(kind)) for kind in kinds_obj)
    except ValueError as exc:
        raise ConfigError(f"{source}: kinds: {exc}") from exc

    grid = _parse_grid(source, _table(source, "grid", obj.get("grid", {})))
    return RunConfig(
        source=source,
        config_hash=get_short_hash(f"{units}\n{text}"),
        command=cast(CommandName | None, command),
        description=description,
        units=units,
        params=params,
        sweep=sweep,
        phi=phi,
        eta=eta,
        kinds=kinds,
        grid=grid)


def load_config(
        path: str | os.PathLike[str],
        *,
        units: Units | None = None) -> RunConfig:
    """
    Loads a configuration file.

    Args:
        path (str | os.PathLike[str]): The file.

        units (Units | None, optional): Overrides the unit mode of the file.
        Defaults to None.

    Raises:
        ConfigError: If the file cannot be read or is invalid.

    Returns:
        RunConfig: The configuration.
    """
    try:
        with open(path, "r", encoding="utf-8") as fin:
            text = fin.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read configuration: {exc}") from exc
    return parse_config(text, os.fspath(path), units=units)


def default_config(*, units: Units | None = None) -> RunConfig:
    """
    Creates the configuration used when no file is given.

    Args:
        units (Units | None, optional): The unit mode. Defaults to None.

    Returns:
        RunConfig: The default configuration.
    """
    return parse_config("", "<default>", units=units)
