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
"""Lambdachd simulates the resonance fluorescence of a Λ-type three-level atom
driven by two lasers near coherent population trapping. The `model` module
defines the atom and its steady state, `regression` propagates two-time
correlations, `chd` computes the conditional homodyne amplitude-intensity
correlation, and `spectra` computes emission, CHD, and squeezing spectra.

The most common symbols of lambdachd are reexported at the top level for easy
access."""
import functools
import importlib.metadata
from typing import Any

from lambdachd.chd import (
    chd_signal,
    ChdSignal,
    classify_nonclassical,
    h_negative,
    h_positive,
    h_split,
    QuadraturePhase,
)
from lambdachd.errors import (
    ConfigError,
    InvalidParams,
    LambdaChdError,
    NumericalError,
)
from lambdachd.model import (
    build_bloch_generator,
    dark_state,
    LambdaParams,
    OperatorIndex,
    saturation_parameter,
    solve_steady_state,
    SteadyState,
    WORKING_POINT,
)
from lambdachd.regression import (
    CorrelationTrace,
    propagate,
    second_order_initial,
    third_order_initial,
)
from lambdachd.spectra import (
    chd_spectrum,
    chd_spectrum_split,
    incoherent_spectrum,
    Spectrum,
    squeezing_spectrum,
    variance,
)


UNKNOWN_VERSION = "unknown"
"""The version reported when lambdachd runs from a source tree without
being installed."""


@functools.cache
def _get_version() -> str:
    try:
        return importlib.metadata.version("lambdachd")
    except importlib.metadata.PackageNotFoundError:
        return UNKNOWN_VERSION


def __getattr__(name: str) -> Any:
    if name in ("version", "__version__"):
        return _get_version()
    raise AttributeError(f"No attribute {name} in module {__name__}.")


__all__ = [
    "build_bloch_generator",
    "chd_signal",
    "chd_spectrum",
    "chd_spectrum_split",
    "ChdSignal",
    "classify_nonclassical",
    "ConfigError",
    "CorrelationTrace",
    "dark_state",
    "h_negative",
    "h_positive",
    "h_split",
    "incoherent_spectrum",
    "InvalidParams",
    "LambdaChdError",
    "LambdaParams",
    "NumericalError",
    "OperatorIndex",
    "propagate",
    "QuadraturePhase",
    "saturation_parameter",
    "second_order_initial",
    "solve_steady_state",
    "Spectrum",
    "squeezing_spectrum",
    "SteadyState",
    "third_order_initial",
    "variance",
    "WORKING_POINT",
]
