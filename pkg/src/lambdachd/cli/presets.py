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
"""Bundled run configurations reproducing the published figures."""
import re
from importlib import resources
from importlib.resources.abc import Traversable

from lambdachd.cli.config import parse_config, RunConfig, Units
from lambdachd.errors import ConfigError


PRESET_SUFFIX = ".toml"
ALL_PRESETS = "all"


def _natural_key(name: str) -> list[int | str]:
    return [
        int(part) if part.isdigit() else part
        for part in re.split(r"(\d+)", name)
    ]


def _preset_dir() -> Traversable:
    return resources.files("lambdachd").joinpath("presets")


def list_presets() -> list[str]:
    """
    Lists the bundled presets.

    Returns:
        list[str]: The preset names in natural order, i.e., `fig2` comes
        before `fig10`.
    """
    names = [
        entry.name[:-len(PRESET_SUFFIX)]
        for entry in _preset_dir().iterdir()
        if entry.name.endswith(PRESET_SUFFIX)
    ]
    return sorted(names, key=_natural_key)


def load_preset(name: str, *, units: Units | None = None) -> RunConfig:
    """
    Loads a bundled preset.

    Args:
        name (str): The preset name.

        units (Units | None, optional): Overrides the unit mode of the
        preset. Defaults to None.

    Raises:
        ConfigError: If the preset does not exist.

    Returns:
        RunConfig: The configuration.
    """
    if name not in list_presets():
        raise ConfigError(
            f"unknown preset: {name}. Available: {list_presets()}")
    text = _preset_dir().joinpath(f"{name}{PRESET_SUFFIX}").read_text(
        encoding="utf-8")
    return parse_config(text, f"preset:{name}", units=units)


def expand_target(target: str) -> list[str]:
    """
    Resolves a reproduction target into preset names. `all` selects every
    preset. Otherwise the exact name and every preset named `<target>-*`
    are selected, so `fig2` selects both panels of that figure.

    Args:
        target (str): The target.

    Raises:
        ConfigError: If no preset matches.

    Returns:
        list[str]: The preset names in natural order.
    """
    names = list_presets()
    if target == ALL_PRESETS:
        return names
    res = [
        name
        for name in names
        if name == target or name.startswith(f"{target}-")
    ]
    if not res:
        raise ConfigError(
            f"unknown target: {target}. Use '{ALL_PRESETS}' or one of "
            f"{names}")
    return res
