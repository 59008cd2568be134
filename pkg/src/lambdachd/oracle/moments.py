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
"""Equal-time moments by explicit operator algebra. A factor is an operator
label such as `ea`. A `d` prefix (`dea`) marks the fluctuation
`sigma_ea - <sigma_ea>`."""
from collections.abc import Sequence

import numpy as np

from lambdachd.model import (
    LEVELS,
    OPERATOR_COUNT,
    OperatorIndex,
    SteadyState,
)
from lambdachd.oracle.master import DensityMatrix, sigma


FLUCTUATION_PREFIX = "d"


def _as_matrix(state: SteadyState | DensityMatrix | np.ndarray) -> np.ndarray:
    if isinstance(state, SteadyState):
        return state.density_matrix()
    if isinstance(state, DensityMatrix):
        return state.matrix
    return np.asarray(state, dtype=np.complex128)


def factor_matrix(factor: str, rho: np.ndarray) -> np.ndarray:
    """
    Creates the matrix of a single factor.

    Args:
        factor (str): An operator label, optionally with fluctuation prefix.

        rho (np.ndarray): The state defining the means.

    Raises:
        ValueError: If the label is malformed.

    Returns:
        np.ndarray: The 3x3 matrix.
    """
    label = factor
    fluct = False
    if len(label) == 3 and label.startswith(FLUCTUATION_PREFIX):
        label = label[1:]
        fluct = True
    if len(label) != 2 or any(level not in LEVELS for level in label):
        raise ValueError(f"invalid factor: {factor}")
    res = sigma(label[0], label[1])
    if fluct:
        res = res - np.trace(res @ rho) * np.eye(len(LEVELS))
    return res


def direct_moment(
        state: SteadyState | DensityMatrix | np.ndarray,
        factors: Sequence[str]) -> complex:
    """
    Evaluates `<f_1 f_2 ... f_n>` as `Tr[f_1 f_2 ... f_n rho]`.

    Args:
        state (SteadyState | DensityMatrix | np.ndarray): The state.

        factors (Sequence[str]): The factors from left to right, e.g.,
        `["dea", "dee", "dae"]`.

    Returns:
        complex: The moment.
    """
    rho = _as_matrix(state)
    prod = np.eye(len(LEVELS), dtype=np.complex128)
    for factor in factors:
        prod = prod @ factor_matrix(factor, rho)
    return complex(np.trace(prod @ rho))


def second_order_direct(
        state: SteadyState | DensityMatrix | np.ndarray) -> np.ndarray:
    """
    Evaluates `<d sigma_ea d s_k>` for every operator of the Bloch basis.

    Args:
        state (SteadyState | DensityMatrix | np.ndarray): The state.

    Returns:
        np.ndarray: The nine moments in `OperatorIndex` order.
    """
    res = np.empty(OPERATOR_COUNT, dtype=np.complex128)
    for op in OperatorIndex:
        res[op] = direct_moment(state, ["dea", f"d{op.label}"])
    return res


def third_order_direct(
        state: SteadyState | DensityMatrix | np.ndarray) -> np.ndarray:
    """
    Evaluates `<d sigma_ea d s_k d sigma_ae>` for every operator of the
    Bloch basis.

    Args:
        state (SteadyState | DensityMatrix | np.ndarray): The state.

    Returns:
        np.ndarray: The nine moments in `OperatorIndex` order.
    """
    res = np.empty(OPERATOR_COUNT, dtype=np.complex128)
    for op in OperatorIndex:
        res[op] = direct_moment(state, ["dea", f"d{op.label}", "dae"])
    return res
