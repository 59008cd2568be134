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
"""Utilities for the test module."""
import math

import numpy as np

from lambdachd.model import LambdaParams, WORKING_POINT
from lambdachd.oracle.suite import random_params


HALF_PI = 0.5 * math.pi
"""The out-of-phase quadrature."""


def working_point(**changes: float) -> LambdaParams:
    """
    The working point with some fields replaced.

    Args:
        **changes (float): The new field values.

    Returns:
        LambdaParams: The parameters.
    """
    return WORKING_POINT.replace(**changes)


def trapping_point() -> LambdaParams:
    """
    The working point at two-photon resonance.

    Returns:
        LambdaParams: Parameters with `delta_a == delta_b`.
    """
    return working_point(delta_a=WORKING_POINT.delta_b)


def random_param_sets(count: int, seed: int) -> list[LambdaParams]:
    """
    Draws reproducible random parameter sets away from two-photon
    resonance.

    Args:
        count (int): The number of sets.

        seed (int): The seed.

    Returns:
        list[LambdaParams]: The parameter sets.
    """
    rng = np.random.default_rng(seed)
    return [random_params(rng) for _ in range(count)]


def max_abs_diff(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """
    The largest absolute entrywise difference.

    Args:
        lhs (np.ndarray): The first array.

        rhs (np.ndarray): The second array.

    Returns:
        float: The difference.
    """
    return float(np.max(np.abs(np.asarray(lhs) - np.asarray(rhs))))
