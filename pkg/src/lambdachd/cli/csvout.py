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
Long format CSV output. Every file starts with `#` metadata lines describing
the quantity, the configuration, and the package version, followed by a
header row and one row per grid point. Floats are written with full
precision so that reruns of the same configuration are byte-identical.
"""
import csv
import dataclasses
import os
from collections.abc import Iterable, Sequence
from typing import IO

from lambdachd.cli.config import RunConfig
from lambdachd.model import PARAM_FIELDS
from lambdachd.util import fmt_float


Cell = float | int | str


@dataclasses.dataclass
class Dataset:
    """A table of results."""
    quantity: str
    """What the values are."""
    columns: tuple[str, ...]
    """The column names."""
    rows: list[tuple[Cell, ...]] = dataclasses.field(default_factory=list)
    """The rows."""
    metadata: dict[str, str] = dataclasses.field(default_factory=dict)
    """Further metadata lines in insertion order."""

    def add_rows(self, rows: Iterable[Sequence[Cell]]) -> None:
        """
        Appends rows.

        Args:
            rows (Iterable[Sequence[Cell]]): The rows.

        Raises:
            ValueError: If a row does not match the columns.
        """
        for row in rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row has {len(row)} cells but there are "
                    f"{len(self.columns)} columns: {self.columns}")
            self.rows.append(tuple(row))


def format_cell(value: Cell) -> str:
    """
    Formats a single cell.

    Args:
        value (Cell): The value.

    Returns:
        str: Integers and strings verbatim, floats via `fmt_float`.
    """
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, str)):
        return str(value)
    return fmt_float(float(value))


def config_metadata(config: RunConfig, version: str) -> dict[str, str]:
    """
    Describes a configuration as metadata lines.

    Args:
        config (RunConfig): The configuration.

        version (str): The package version.

    Returns:
        dict[str, str]: The metadata.
    """
    params = " ".join(
        f"{name}={fmt_float(getattr(config.params, name))}"
        for name in PARAM_FIELDS)
    sweep = " ".join(
        f"{axis.name}[{len(axis.values)}]" for axis in config.sweep)
    res = {
        "version": version,
        "config": f"{config.source} {config.config_hash}",
        "units": config.units,
        "params": params,
        "sweep": sweep or "none",
    }
    if config.description:
        res["description"] = config.description
    return res


def write_dataset(dataset: Dataset, fout: IO[str]) -> None:
    """
    Writes a dataset as CSV.

    Args:
        dataset (Dataset): The dataset.

        fout (IO[str]): The output stream.
    """
    fout.write(f"# quantity: {dataset.quantity}\n")
    for key, value in dataset.metadata.items():
        fout.write(f"# {key}: {value}\n")
    writer = csv.writer(fout, lineterminator="\n")
    writer.writerow(dataset.columns)
    for row in dataset.rows:
        writer.writerow([format_cell(cell) for cell in row])


def write_dataset_file(
        dataset: Dataset, path: str | os.PathLike[str]) -> None:
    """
    Writes a dataset to a file creating parent folders as necessary.

    Args:
        dataset (Dataset): The dataset.

        path (str | os.PathLike[str]): The file.
    """
    folder = os.path.dirname(os.fspath(path))
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fout:
        write_dataset(dataset, fout)


def read_dataset(fin: IO[str]) -> tuple[dict[str, str], list[dict[str, str]]]:
    """
    Reads a dataset written by `write_dataset`.

    Args:
        fin (IO[str]): The input stream.

    Returns:
        tuple[dict[str, str], list[dict[str, str]]]: The metadata including
        the quantity and the rows keyed by column.
    """
    metadata: dict[str, str] = {}
    lines = []
    for line in fin:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            metadata[key.strip()] = value.strip()
        else:
            lines.append(line)
    return metadata, list(csv.DictReader(lines))
