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
This module contains various useful functions. The functions in this module are
not necessarily be considered part of the package API and might change or
disappear in the future. Use with caution outside of the package internals.
"""
import hashlib
import math
import os


FLOAT_DIGITS = 17
"""The number of significant digits used when serializing floats. 17 digits
are enough to round-trip any double."""
SHORT_HASH_BYTES = 4
"""The digest size of `get_short_hash`. The hex string has twice as many
characters."""


def fmt_float(value: float) -> str:
    """
    Formats a float losslessly and deterministically.

    Args:
        value (float): The value.

    Returns:
        str: The value with `FLOAT_DIGITS` significant digits. Non-finite
        values are written as `nan`, `inf`, or `-inf`.
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    res = f"{value:.{FLOAT_DIGITS}g}"
    if res == "-0":
        return "0"
    return res


def fmt_complex(value: complex) -> str:
    """
    Formats a complex number as `re,im`.

    Args:
        value (complex): The value.

    Returns:
        str: The real and imaginary parts formatted by `fmt_float`.
    """
    return f"{fmt_float(value.real)},{fmt_float(value.imag)}"


def parse_complex(text: str) -> complex:
    """
    Parses a complex number formatted by `fmt_complex`.

    Args:
        text (str): The text.

    Raises:
        ValueError: If the text is not of the form `re,im`.

    Returns:
        complex: The value.
    """
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 're,im' but got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def get_short_hash(text: str) -> str:
    """
    Computes a short blake2b hash of the given string.

    Args:
        text (str): The string.

    Returns:
        str: The hex digest of `SHORT_HASH_BYTES` bytes.
    """
    blake = hashlib.blake2b(digest_size=SHORT_HASH_BYTES)
    blake.update(text.encode("utf-8"))
    return blake.hexdigest()


ELAPSED_UNITS: list[tuple[int, str]] = [
    (1, "s"),
    (60, "m"),
    (60*60, "h"),
    (60*60*24, "d"),
]
"""Unit conversions for time durations."""


def elapsed_time_string(elapsed: float) -> str:
    """Convert elapsed time into a readable string."""
    cur = ""
    for (conv, unit) in ELAPSED_UNITS:
        if elapsed / conv >= 1 or not cur:
            cur = f"{elapsed / conv:8.3f}{unit}"
        else:
            break
    return cur


def ideal_thread_count() -> int:
    """
    Computes the ideal thread count for the given machine.

    Returns:
        int: The ideal number of threads.
    """
    res = os.cpu_count()
    if res is None:
        return 4
    return res
