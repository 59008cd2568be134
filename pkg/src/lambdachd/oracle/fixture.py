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
Plain text fixture files holding oracle reference values. The first line is
`FIXTURE_HEADER`, further lines starting with `#` are comments, and every
other non-empty line is `key = value`. Real values are written with
`util.fmt_float` and complex values as `re,im`.
"""
import os
from collections.abc import Mapping

from lambdachd.util import fmt_complex, fmt_float, parse_complex


FIXTURE_HEADER = "# lambdachd-fixture v1"
"""The first line of every fixture file."""


FixtureValue = float | complex


def format_fixture(
        values: Mapping[str, FixtureValue],
        *,
        comment: str | None = None) -> str:
    """
    Formats reference values as fixture text.

    Args:
        values (Mapping[str, FixtureValue]): The values. Keys are written in
        sorted order.

        comment (str | None, optional): A comment line written after the
        header. Defaults to None.

    Raises:
        ValueError: If a key contains whitespace or `=`.

    Returns:
        str: The text.
    """
    lines = [FIXTURE_HEADER]
    if comment is not None:
        lines.append(f"# {comment}")
    for key in sorted(values):
        if not key or "=" in key or any(char.isspace() for char in key):
            raise ValueError(f"invalid fixture key: {key!r}")
        value = values[key]
        if isinstance(value, complex):
            text = fmt_complex(value)
        else:
            text = fmt_float(float(value))
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def parse_fixture(text: str) -> dict[str, FixtureValue]:
    """
    Parses fixture text.

    Args:
        text (str): The text.

    Raises:
        ValueError: If the header is missing or a line is malformed.

    Returns:
        dict[str, FixtureValue]: The values. Entries written as `re,im` are
        complex.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != FIXTURE_HEADER:
        raise ValueError(f"missing fixture header {FIXTURE_HEADER!r}")
    res: dict[str, FixtureValue] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ValueError(f"line {lineno}: expected 'key = value': {line}")
        if key in res:
            raise ValueError(f"line {lineno}: duplicate key {key}")
        res[key] = parse_complex(value) if "," in value else float(value)
    return res


def write_fixture(
        path: str | os.PathLike[str],
        values: Mapping[str, FixtureValue],
        *,
        comment: str | None = None) -> None:
    """
    Writes a fixture file.

    Args:
        path (str | os.PathLike[str]): The file.

        values (Mapping[str, FixtureValue]): The values.

        comment (str | None, optional): A comment line. Defaults to None.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fout:
        fout.write(format_fixture(values, comment=comment))


def read_fixture(path: str | os.PathLike[str]) -> dict[str, FixtureValue]:
    """
    Reads a fixture file.

    Args:
        path (str | os.PathLike[str]): The file.

    Returns:
        dict[str, FixtureValue]: The values.
    """
    with open(path, "r", encoding="utf-8") as fin:
        return parse_fixture(fin.read())
