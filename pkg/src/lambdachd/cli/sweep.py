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
"""Parallel evaluation of sweep points."""
import logging
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from tqdm import tqdm

from lambdachd.util import elapsed_time_string, ideal_thread_count


logger = logging.getLogger(__name__)


PT = TypeVar('PT')
RT = TypeVar('RT')


def run_points(
        func: Callable[[PT], RT],
        points: Sequence[PT],
        *,
        threads: int | None = None,
        desc: str | None = None,
        progress: bool = True) -> list[RT]:
    """
    Evaluates a function for every point. The results keep the order of the
    points regardless of the number of threads.

    Args:
        func (Callable[[PT], RT]): The function. It must not share mutable
        state between calls.

        points (Sequence[PT]): The points.

        threads (int | None, optional): The number of worker threads. None
        uses one thread per core. Defaults to None.

        desc (str | None, optional): The label of the progress bar. Defaults
        to None.

        progress (bool, optional): Whether to show a progress bar on
        terminals. Defaults to True.

    Raises:
        ValueError: If the thread count is not positive.

    Returns:
        list[RT]: The results in point order.
    """
    if threads is None:
        threads = ideal_thread_count()
    if threads < 1:
        raise ValueError(f"thread count must be positive: {threads}")
    threads = min(threads, max(1, len(points)))
    start_time = time.monotonic()
    pbar = tqdm(
        total=len(points),
        desc=desc,
        disable=None if progress else True,
        leave=False)
    try:
        if threads == 1:
            res = []
            for point in points:
                res.append(func(point))
                pbar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                res = []
                for result in pool.map(func, points):
                    res.append(result)
                    pbar.update(1)
    finally:
        pbar.close()
    logger.debug(
        "evaluated %d points on %d threads in %s",
        len(points),
        threads,
        elapsed_time_string(time.monotonic() - start_time).strip())
    return res
