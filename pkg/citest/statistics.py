"""G-squared and Pearson statistics of a table against expected frequencies.

Zero cells: N = 0 contributes nothing to G-squared and E = 0 contributes
nothing to chi-squared. N > 0 with E = 0 is an error.
"""
import logging
import math
from typing import Sequence, Union

import numpy as np

from core.models import ContingencyTable
from tabulate.tables import SliceMarginals, SparseExpected

LOG = logging.getLogger(__name__)

Expected = Union[np.ndarray, SparseExpected]


def _observed_and_expected(
    observed: ContingencyTable, expected: Expected
) -> tuple[np.ndarray, np.ndarray]:
    """Counts and E over the occupied cells of ``observed``"""
    if isinstance(expected, SparseExpected):
        if expected.dims != observed.dims:
            raise ValueError(
                f"expected frequencies have dims {expected.dims}, "
                f"table has {observed.dims}"
            )
        keys, values = observed.occupied()
        return values.astype(np.float64), expected.at(keys)
    expected = np.asarray(expected, dtype=np.float64)
    if expected.shape != observed.dims:
        raise ValueError(
            f"expected frequencies have shape {expected.shape}, "
            f"table has {observed.dims}"
        )
    keys, values = observed.occupied()
    return values.astype(np.float64), expected.ravel(order="F")[keys]


def _check_support(expected_cells: np.ndarray) -> None:
    if np.any(expected_cells <= 0):
        raise ValueError("a cell with observations has zero expected frequency")


def g2_statistic(observed: ContingencyTable, expected: Expected) -> float:
    """2 * sum N ln(N / E) over cells with N > 0"""
    counts, expect = _observed_and_expected(observed, expected)
    _check_support(expect)
    g2 = 2.0 * float(np.sum(counts * np.log(counts / expect)))
    # rounding can leave a tiny negative when N == E
    return max(g2, 0.0)


def chi2_statistic(observed: ContingencyTable, expected: Expected) -> float:
    """sum (N - E)^2 / E over cells with E > 0"""
    if isinstance(expected, SparseExpected):
        counts, expect = _observed_and_expected(observed, expected)
        _check_support(expect)
        occupied = float(np.sum((counts - expect) ** 2 / expect))
        # every unoccupied cell adds (0 - E)^2 / E = E
        return max(occupied + expected.total - float(expect.sum()), 0.0)
    expected = np.asarray(expected, dtype=np.float64)
    counts, expect = _observed_and_expected(observed, expected)
    _check_support(expect)
    table = observed.to_dense().astype(np.float64)
    positive = expected > 0
    diff = table[positive] - expected[positive]
    return float(np.sum(diff * diff / expected[positive]))


def dof(levels_x: int, levels_y: int, levels_cs: Sequence[int] = ()) -> int:
    """(|X| - 1)(|Y| - 1) prod |Z_i|"""
    for count in (levels_x, levels_y, *levels_cs):
        if count < 1:
            raise ValueError(f"level counts must be >= 1, got {count}")
    return (levels_x - 1) * (levels_y - 1) * math.prod(levels_cs)


def dof_adjusted(levels_x: int, levels_y: int, marginals: SliceMarginals) -> int:
    """Nominal dof with only the occupied strata counted"""
    return (levels_x - 1) * (levels_y - 1) * marginals.occupied_strata
