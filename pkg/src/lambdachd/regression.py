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
"""Two-time correlations by quantum regression. The fluctuation moments
`g(0) = <dA s dB>` at equal times are propagated with the same generator as
the single time averages: `g(tau) = exp(M tau) g(0)`."""
import dataclasses
import enum
import logging
from collections.abc import Sequence

import numpy as np
import scipy.linalg

from lambdachd.errors import PropagationDiverged
from lambdachd.model import (
    BlochGenerator,
    LambdaParams,
    OPERATOR_COUNT,
    OperatorIndex,
    SteadyState,
)


logger = logging.getLogger(__name__)


DEFAULT_TAU_STEP = 0.01
"""The default time step in units of `1 / gamma_a`."""
DEFAULT_TAU_CAP = 200.0
"""The largest time an automatically sized grid may reach."""
DECAY_THRESHOLD = 1e-8
"""An automatically sized grid ends once every vector norm is below this."""
DIVERGENCE_FACTOR = 1e6
"""Growth factor of a propagated vector that counts as divergence."""


class InitialConditionKind(enum.Enum):
    """The equal-time moment a correlation starts from."""
    SECOND_ORDER = "second"
    """`g(0) = <d sigma_ea d s>`."""
    THIRD_ORDER = "third"
    """`g(0) = <d sigma_ea d s d sigma_ae>`."""
    INTENSITY_BRANCH = "intensity"
    """The negative time branch of the amplitude-intensity correlation. It
    starts from the same moments as `SECOND_ORDER`."""


@dataclasses.dataclass(frozen=True)
class CorrelationTrace:
    """A propagated correlation vector on a uniform time grid."""
    tau_grid: np.ndarray
    """The times, starting at zero."""
    values: np.ndarray
    """The vectors `g(tau)` with shape `(len(tau_grid), 9)` or a scalar
    projection with shape `(len(tau_grid),)`."""
    kind: InitialConditionKind
    """The initial condition."""
    params: LambdaParams
    """The parameters of the generator."""

    def component(self, op: OperatorIndex | str) -> np.ndarray:
        """
        Projects the trace on a single operator.

        Args:
            op (OperatorIndex | str): The operator or its label.

        Returns:
            np.ndarray: The complex time series of that component.
        """
        if isinstance(op, str):
            op = OperatorIndex.from_label(op)
        return self.values[:, op]

    def tail_norm(self) -> float:
        """
        The norm of the last vector.

        Returns:
            float: `|g(tau_max)|`.
        """
        return float(np.linalg.norm(self.values[-1]))


def second_order_initial(ss: SteadyState) -> np.ndarray:
    """
    Computes the second-order fluctuation moments
    `<d sigma_ea d sigma_jk> = delta_aj alpha_ek - alpha_ea alpha_jk`.

    Args:
        ss (SteadyState): The steady state.

    Returns:
        np.ndarray: The nine moments in `OperatorIndex` order.
    """
    res = -ss.ea * ss.alpha
    for op in OperatorIndex:
        ket, bra = op.levels
        if ket == "a":
            res[op] += ss[OperatorIndex.from_levels("e", bra)]
    return res


def third_order_initial(ss: SteadyState) -> np.ndarray:
    """
    Computes the third-order fluctuation moments
    `<d sigma_ea d s d sigma_ae>`.

    Args:
        ss (SteadyState): The steady state.

    Returns:
        np.ndarray: The nine moments in `OperatorIndex` order.
    """
    ea = ss.ea
    ae = ss.ae
    pop_e = ss.ee
    dip2 = abs(ea) ** 2
    common = 2.0 * dip2 - pop_e
    res = common * ss.alpha
    res[OperatorIndex.AE] = -2.0 * ae * (pop_e - dip2)
    res[OperatorIndex.EA] = 2.0 * ea * (dip2 - pop_e)
    res[OperatorIndex.AA] = (ss.aa - 1.0) * common
    res[OperatorIndex.BA] -= ea * ss["be"]
    res[OperatorIndex.AB] -= ae * ss["eb"]
    return res


def initial_vector(ss: SteadyState, kind: InitialConditionKind) -> np.ndarray:
    """
    Computes the equal-time moments of the given kind.

    Args:
        ss (SteadyState): The steady state.

        kind (InitialConditionKind): The kind.

    Returns:
        np.ndarray: The initial vector.
    """
    if kind is InitialConditionKind.THIRD_ORDER:
        return third_order_initial(ss)
    return second_order_initial(ss)


def uniform_grid(step: float, tau_max: float) -> np.ndarray:
    """
    Creates a uniform grid from zero.

    Args:
        step (float): The step.

        tau_max (float): The end of the grid. It is rounded to the nearest
        multiple of the step.

    Raises:
        ValueError: If the step is not positive or the end is negative.

    Returns:
        np.ndarray: The grid.
    """
    if not step > 0.0:
        raise ValueError(f"step must be positive: {step}")
    if tau_max < 0.0:
        raise ValueError(f"tau_max must be non-negative: {tau_max}")
    count = int(round(tau_max / step))
    return np.arange(count + 1, dtype=np.float64) * step


def _grid_step(tau_grid: np.ndarray) -> float:
    if tau_grid.ndim != 1 or tau_grid.size == 0:
        raise ValueError(f"invalid tau grid of shape {tau_grid.shape}")
    if tau_grid[0] != 0.0:
        raise ValueError(f"tau grid must start at 0: {tau_grid[0]}")
    if tau_grid.size == 1:
        return 0.0
    diffs = np.diff(tau_grid)
    step = float(diffs[0])
    if step <= 0.0 or not np.allclose(diffs, step, rtol=1e-9, atol=1e-12):
        raise ValueError("tau grid must be uniform and strictly increasing")
    return step


def step_propagator(gen: BlochGenerator, step: float) -> np.ndarray:
    """
    Computes the one step propagator `exp(M step)` by scaling and squaring.

    Args:
        gen (BlochGenerator): The generator.

        step (float): The time step.

    Returns:
        np.ndarray: The 9x9 propagator.
    """
    return scipy.linalg.expm(gen.m * step)


def propagate_values(
        gen: BlochGenerator,
        g0: np.ndarray,
        tau_grid: np.ndarray) -> np.ndarray:
    """
    Propagates an initial vector over a uniform grid.

    Args:
        gen (BlochGenerator): The generator.

        g0 (np.ndarray): The initial vector.

        tau_grid (np.ndarray): The uniform grid starting at zero.

    Raises:
        ValueError: If the grid is not uniform or the vector is invalid.
        PropagationDiverged: If the vector grows beyond `DIVERGENCE_FACTOR`
            times its initial norm.

    Returns:
        np.ndarray: The vectors with shape `(len(tau_grid), 9)`.
    """
    g0 = np.asarray(g0, dtype=np.complex128)
    if g0.shape != (OPERATOR_COUNT,) or not np.all(np.isfinite(g0)):
        raise ValueError(f"invalid initial vector: {g0}")
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    step = _grid_step(tau_grid)
    values = np.empty((tau_grid.size, OPERATOR_COUNT), dtype=np.complex128)
    values[0] = g0
    if tau_grid.size > 1:
        prop = step_propagator(gen, step)
        for ix in range(1, tau_grid.size):
            values[ix] = prop @ values[ix - 1]
    limit = DIVERGENCE_FACTOR * float(np.linalg.norm(g0))
    norms = np.linalg.norm(values, axis=1)
    if np.any(norms > limit) or not np.all(np.isfinite(norms)):
        bad = int(np.argmax(~(norms <= limit)))
        raise PropagationDiverged(
            f"correlation vector diverged at tau={tau_grid[bad]:g}: "
            f"norm {norms[bad]:.3g} exceeds {limit:.3g} for {gen.params}")
    return values


def propagate(
        gen: BlochGenerator,
        g0: np.ndarray,
        tau_grid: np.ndarray,
        *,
        kind: InitialConditionKind = InitialConditionKind.SECOND_ORDER,
        ) -> CorrelationTrace:
    """
    Propagates an initial vector with the quantum regression formula.

    Args:
        gen (BlochGenerator): The generator.

        g0 (np.ndarray): The initial vector.

        tau_grid (np.ndarray): The uniform grid starting at zero.

        kind (InitialConditionKind, optional): The kind of the initial vector
        recorded in the result. Defaults to SECOND_ORDER.

    Returns:
        CorrelationTrace: The propagated correlation.
    """
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    values = propagate_values(gen, g0, tau_grid)
    return CorrelationTrace(
        tau_grid=tau_grid, values=values, kind=kind, params=gen.params)


def auto_tau_grid(
        gen: BlochGenerator,
        vectors: Sequence[np.ndarray],
        *,
        step: float = DEFAULT_TAU_STEP,
        cap: float = DEFAULT_TAU_CAP,
        threshold: float = DECAY_THRESHOLD) -> np.ndarray:
    """
    Sizes a grid such that all given vectors have decayed at its end.

    Args:
        gen (BlochGenerator): The generator.

        vectors (Sequence[np.ndarray]): The initial vectors.

        step (float, optional): The time step. Defaults to DEFAULT_TAU_STEP.

        cap (float, optional): The largest allowed end of the grid. Defaults
        to DEFAULT_TAU_CAP.

        threshold (float, optional): The norm below which a vector counts as
        decayed. Defaults to DECAY_THRESHOLD.

    Returns:
        np.ndarray: The grid. If the cap is reached before the vectors decay
        the grid ends at the cap and a warning is logged.
    """
    max_count = int(round(cap / step))
    cur = np.stack(
        [np.asarray(vec, dtype=np.complex128) for vec in vectors], axis=1)
    prop = step_propagator(gen, step)
    count = 0
    while np.max(np.linalg.norm(cur, axis=0)) >= threshold:
        if count >= max_count:
            logger.warning(
                "correlation has not decayed below %g at the tau cap %g "
                "for %s",
                threshold,
                cap,
                gen.params)
            break
        cur = prop @ cur
        count += 1
    return np.arange(count + 1, dtype=np.float64) * step


def correlation(
        gen: BlochGenerator,
        ss: SteadyState,
        kind: InitialConditionKind,
        tau_grid: np.ndarray | None = None,
        *,
        step: float = DEFAULT_TAU_STEP) -> CorrelationTrace:
    """
    Computes a fluctuation correlation starting from the steady state.

    Args:
        gen (BlochGenerator): The generator.

        ss (SteadyState): The steady state of the generator.

        kind (InitialConditionKind): The kind of the correlation.

        tau_grid (np.ndarray | None, optional): The grid. If None the grid is
        sized automatically. Defaults to None.

        step (float, optional): The step of an automatically sized grid.
        Defaults to DEFAULT_TAU_STEP.

    Returns:
        CorrelationTrace: The correlation.
    """
    g0 = initial_vector(ss, kind)
    if tau_grid is None:
        tau_grid = auto_tau_grid(gen, [g0], step=step)
    return propagate(gen, g0, tau_grid, kind=kind)


def full_correlation(ss: SteadyState, trace: CorrelationTrace) -> np.ndarray:
    """
    Adds the means back to a second-order fluctuation correlation, i.e.,
    computes `<sigma_ea(0) s(tau)> = <d sigma_ea(0) d s(tau)> + alpha_ea
    alpha`.

    Args:
        ss (SteadyState): The steady state.

        trace (CorrelationTrace): A second-order correlation.

    Raises:
        ValueError: If the correlation is not of second order.

    Returns:
        np.ndarray: The full correlation with the shape of `trace.values`.
    """
    if trace.kind is not InitialConditionKind.SECOND_ORDER:
        raise ValueError(
            f"only second-order correlations have means: {trace.kind}")
    return trace.values + ss.ea * ss.alpha[np.newaxis, :]
