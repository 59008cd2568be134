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
"""Trapezoid rule transforms of time domain correlations."""
import warnings
from typing import cast, get_args, Literal

import numpy as np
from scipy.integrate import trapezoid

from lambdachd.errors import TruncationWarning
from lambdachd.regression import CorrelationTrace


TAIL_THRESHOLD = 1e-6
"""A correlation whose last value exceeds this is considered truncated."""


Kernel = Literal["cosine", "complex"]
"""The transform kernels: `cosine` is `cos(omega tau)` and `complex` is
`exp(-i omega tau)`."""
KERNELS: tuple[Kernel, ...] = get_args(Kernel)


def as_kernel(text: str) -> Kernel:
    """
    Converts a string into a kernel.

    Args:
        text (str): The string.

    Raises:
        ValueError: If the string is not a kernel.

    Returns:
        Kernel: The kernel.
    """
    if text not in KERNELS:
        raise ValueError(
            f"unknown kernel: {text}. Only {KERNELS} are supported.")
    return cast(Kernel, text)


def quadrature_transform(
        trace: CorrelationTrace,
        omegas: np.ndarray | float,
        kernel: Kernel) -> np.ndarray:
    """
    Computes `int_0^tau_max kernel(omega tau) f(tau) dtau` with the
    trapezoid rule on the grid of the trace.

    Args:
        trace (CorrelationTrace): The correlation `f`. Scalar and vector
        valued traces are supported.

        omegas (np.ndarray | float): The frequencies.

        kernel (Kernel): The kernel.

    Returns:
        np.ndarray: The transform with a leading frequency axis followed by
        the value axes of the trace.
    """
    tail = float(np.max(np.abs(trace.values[-1])))
    if tail > TAIL_THRESHOLD:
        warnings.warn(
            f"correlation is truncated at tau={trace.tau_grid[-1]:g} with "
            f"magnitude {tail:.3g}",
            TruncationWarning,
            stacklevel=2)
    taus = trace.tau_grid
    values = trace.values
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.float64))
    res = np.empty((omegas.size,) + values.shape[1:], dtype=np.complex128)
    for ix, omega in enumerate(omegas):
        if kernel == "cosine":
            weights = np.cos(omega * taus).astype(np.complex128)
        else:
            weights = np.exp(-1j * omega * taus)
        weights = weights.reshape((-1,) + (1,) * (values.ndim - 1))
        res[ix] = trapezoid(weights * values, taus, axis=0)
    if kernel == "cosine" and np.isrealobj(values):
        return res.real
    return res
