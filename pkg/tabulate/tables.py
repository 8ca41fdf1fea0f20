"""Contingency tables and the per-stratum quantities of a CI test.

A table over (x, y, z_1..z_k) is built once from the dataset; every marginal
used downstream is reduced from it. Cells are addressed mixed-radix with x
fastest, so the flat index of a cell is ``x + |X| * (y + |Y| * s)`` where ``s``
is the stratum (z-combination) index.
"""
from dataclasses import dataclass
import logging
import math
from typing import Sequence

import numpy as np

from core.exceptions import DataError, SpecError
from core.models import DENSE_THRESHOLD, ContingencyTable, Dataset

LOG = logging.getLogger(__name__)


def build_table(
    data: Dataset,
    variables: Sequence[int],
    dense_threshold: int = DENSE_THRESHOLD,
) -> ContingencyTable:
    """Cross-tabulate the given columns in a single pass over the rows"""
    variables = [int(i) for i in variables]
    if len(set(variables)) != len(variables):
        raise SpecError(f"variables {variables} are not distinct")
    for index in variables:
        if not 0 <= index < len(data.columns):
            raise SpecError(f"column index {index} out of range", index=index)
    if not variables:
        return ContingencyTable(
            dims=(), total=data.n_rows, counts=np.array(data.n_rows)
        )
    columns = [data.columns[i] for i in variables]
    dims = tuple(col.levels for col in columns)
    ncells = math.prod(dims)
    if ncells >= 2**62:
        raise DataError(f"table with dims {dims} is too large to index")

    flat = np.zeros(data.n_rows, dtype=np.int64)
    stride = 1
    for col in columns:
        flat += col.codes * stride
        stride *= col.levels

    if ncells <= dense_threshold:
        LOG.debug("Dense table over %s (%s cells)", variables, ncells)
        counts = np.bincount(flat, minlength=ncells).reshape(dims, order="F")
        return ContingencyTable(dims=dims, total=data.n_rows, counts=counts)
    keys, values = np.unique(flat, return_counts=True)
    LOG.debug(
        "Sparse table over %s (%s of %s cells occupied)",
        variables,
        keys.size,
        ncells,
    )
    return ContingencyTable(dims=dims, total=data.n_rows, keys=keys, values=values)


@dataclass(frozen=True, eq=False)
class SliceMarginals:
    """N_{x+z}, N_{+yz} and N_{++z} for each stratum z.

    Dense tables list every stratum (``strata`` is ``0..n_strata-1``); sparse
    tables list only the occupied ones, ascending.
    """

    dims: tuple[int, ...]
    strata: np.ndarray
    n_xz: np.ndarray
    n_yz: np.ndarray
    n_z: np.ndarray
    n_strata: int
    sparse: bool = False

    @property
    def levels_x(self) -> int:
        return self.dims[0]

    @property
    def levels_y(self) -> int:
        return self.dims[1]

    @property
    def occupied_strata(self) -> int:
        return int(np.count_nonzero(self.n_z))

    @property
    def empty_strata(self) -> int:
        return self.n_strata - self.occupied_strata

    @property
    def total(self) -> int:
        return int(self.n_z.sum())


def slice_marginals(table: ContingencyTable) -> SliceMarginals:
    if len(table.dims) < 2:
        raise ValueError(f"need at least x and y dims, got {table.dims}")
    levels_x, levels_y = table.dims[:2]
    n_strata = math.prod(table.dims[2:])
    if not table.is_sparse:
        cube = table.counts.reshape((levels_x, levels_y, n_strata), order="F")
        return SliceMarginals(
            dims=table.dims,
            strata=np.arange(n_strata),
            n_xz=cube.sum(axis=1).T,
            n_yz=cube.sum(axis=0).T,
            n_z=cube.sum(axis=(0, 1)),
            n_strata=n_strata,
        )
    keys, values = table.occupied()
    x = keys % levels_x
    y = (keys // levels_x) % levels_y
    strata, slot = np.unique(keys // (levels_x * levels_y), return_inverse=True)
    slot = slot.reshape(-1)
    size = strata.size
    n_xz = np.bincount(slot * levels_x + x, weights=values, minlength=size * levels_x)
    n_yz = np.bincount(slot * levels_y + y, weights=values, minlength=size * levels_y)
    return SliceMarginals(
        dims=table.dims,
        strata=strata,
        n_xz=n_xz.astype(np.int64).reshape(size, levels_x),
        n_yz=n_yz.astype(np.int64).reshape(size, levels_y),
        n_z=np.bincount(slot, weights=values, minlength=size).astype(np.int64),
        n_strata=n_strata,
        sparse=True,
    )


@dataclass(frozen=True, eq=False)
class SparseExpected:
    """Expected frequencies of a sparse table, evaluated on demand per cell"""

    marginals: SliceMarginals

    @property
    def dims(self) -> tuple[int, ...]:
        return self.marginals.dims

    @property
    def total(self) -> float:
        return float(self.marginals.total)

    def at(self, keys: np.ndarray) -> np.ndarray:
        """E at the given flat cell indices (0 for cells of empty strata)"""
        marginals = self.marginals
        levels_x, levels_y = marginals.levels_x, marginals.levels_y
        keys = np.asarray(keys, dtype=np.int64)
        x = keys % levels_x
        y = (keys // levels_x) % levels_y
        stratum = keys // (levels_x * levels_y)
        slot = np.searchsorted(marginals.strata, stratum)
        slot = np.minimum(slot, max(marginals.strata.size - 1, 0))
        found = marginals.strata[slot] == stratum if marginals.strata.size else slot < 0
        n_z = np.where(found, marginals.n_z[slot], 0).astype(np.float64)
        numerator = (
            marginals.n_xz[slot, x].astype(np.float64)
            * marginals.n_yz[slot, y].astype(np.float64)
        )
        return np.divide(
            numerator, n_z, out=np.zeros_like(n_z), where=found & (n_z > 0)
        )


def expected_ci(marginals: SliceMarginals):
    """Expected cell counts under X independent of Y within every stratum.

    Returns an array shaped like the source table, or a ``SparseExpected`` for
    sparse tables. Strata without observations get E = 0.
    """
    if marginals.sparse:
        return SparseExpected(marginals)
    n_xz = marginals.n_xz.astype(np.float64)
    n_yz = marginals.n_yz.astype(np.float64)
    n_z = marginals.n_z.astype(np.float64)
    # (strata, x, y)
    outer = n_xz[:, :, None] * n_yz[:, None, :]
    scale = np.divide(1.0, n_z, out=np.zeros_like(n_z), where=n_z > 0)
    expected = outer * scale[:, None, None]
    return np.transpose(expected, (1, 2, 0)).reshape(marginals.dims, order="F")
