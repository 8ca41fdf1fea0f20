"""Domain types shared by every engine app.

These are plain frozen dataclasses, not Django models: the engine keeps no
persistent state. Arrays are made read-only on construction so the objects
can be shared with worker processes without copies going stale.
"""
from dataclasses import dataclass, field
import enum
import logging
import math
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .exceptions import DataError

LOG = logging.getLogger(__name__)

# tables with more cells than this are stored sparse
DENSE_THRESHOLD = 2**24


def _frozen(array, dtype) -> np.ndarray:
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    IPF = "ipf"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class CategoricalColumn:
    name: str
    levels: int
    codes: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "codes", _frozen(self.codes, np.int64))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(i) for i in self.labels))
        if self.codes.ndim != 1:
            raise DataError(f"column {self.name}: codes must be one-dimensional")
        if self.levels < 1:
            raise DataError(f"column {self.name}: needs at least one level")
        if self.codes.size:
            low, high = int(self.codes.min()), int(self.codes.max())
            if low < 0 or high >= self.levels:
                raise DataError(
                    f"column {self.name}: code {low if low < 0 else high} "
                    f"outside [0, {self.levels})"
                )
            if self.labels is None and high != self.levels - 1:
                # unused top codes need explicit labels
                raise DataError(
                    f"column {self.name}: {self.levels} levels declared but "
                    f"highest code is {high}"
                )
        if self.labels is not None and len(self.labels) != self.levels:
            raise DataError(
                f"column {self.name}: {len(self.labels)} labels "
                f"for {self.levels} levels"
            )

    @classmethod
    def factorize(cls, name: str, tokens: Sequence[str]) -> "CategoricalColumn":
        """Code tokens 0, 1, ... in order of first appearance"""
        values = np.asarray(tokens, dtype=object).astype(str)
        if not values.size:
            return cls(name=name, levels=1, codes=values.astype(np.int64), labels=("",))
        uniques, first_seen, inverse = np.unique(
            values, return_index=True, return_inverse=True
        )
        order = np.argsort(first_seen, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        return cls(
            name=name,
            levels=int(uniques.size),
            codes=rank[inverse.reshape(-1)],
            labels=tuple(uniques[order]),
        )

    def decode(self) -> list[str]:
        """Labels by code, or the codes themselves rendered as text"""
        if self.labels is None:
            return [str(i) for i in self.codes.tolist()]
        labels = np.asarray(self.labels, dtype=object)
        return labels[self.codes].tolist()

    def __len__(self):
        return int(self.codes.size)

    def __eq__(self, other):
        if not isinstance(other, CategoricalColumn):
            return NotImplemented
        return (
            self.name == other.name
            and self.levels == other.levels
            and self.labels == other.labels
            and np.array_equal(self.codes, other.codes)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Dataset:
    columns: tuple[CategoricalColumn, ...]
    n_rows: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        lengths = {len(col) for col in self.columns}
        if len(lengths) > 1:
            raise DataError(f"columns have different lengths: {sorted(lengths)}")
        object.__setattr__(self, "n_rows", lengths.pop() if lengths else 0)

    @classmethod
    def from_codes(
        cls,
        codes: dict[str, Iterable[int]],
        levels: Optional[dict[str, int]] = None,
    ) -> "Dataset":
        """Build a dataset from coded columns (levels default to max code + 1)"""
        levels = levels or {}
        columns = []
        for name, column_codes in codes.items():
            array = np.asarray(list(column_codes), dtype=np.int64)
            count = levels.get(name, int(array.max()) + 1 if array.size else 1)
            labels = None
            if array.size and count != int(array.max()) + 1:
                labels = tuple(str(i) for i in range(count))
            columns.append(
                CategoricalColumn(name=name, levels=count, codes=array, labels=labels)
            )
        return cls(columns=tuple(columns))

    @property
    def names(self) -> list[str]:
        return [col.name for col in self.columns]

    @property
    def levels(self) -> list[int]:
        return [col.levels for col in self.columns]

    def column_index(self, ref: Union[str, int]) -> int:
        """Resolve a column by name, falling back to a 0-based index"""
        if isinstance(ref, str):
            names = self.names
            if ref in names:
                return names.index(ref)
            if not ref.strip().isdigit():
                raise KeyError(ref)
            ref = int(ref)
        if not 0 <= ref < len(self.columns):
            raise KeyError(ref)
        return ref

    def __len__(self):
        return self.n_rows

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.columns == other.columns

    __hash__ = None


@dataclass(frozen=True)
class TestSpec:
    x: int
    y: int
    cs: tuple[int, ...] = ()

    # keep unittest from collecting this as a test case
    __test__ = False

    def __post_init__(self):
        object.__setattr__(self, "cs", tuple(int(i) for i in self.cs))

    @property
    def variables(self) -> tuple[int, ...]:
        return (self.x, self.y, *self.cs)


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Multi-way cell counts, indexed mixed-radix with the first variable fastest.

    Dense tables keep ``counts`` with shape ``dims`` (so ``counts[x, y, z...]``).
    Sparse tables keep the occupied flat cell indices in ascending ``keys`` and
    their counts in ``values``.
    """

    dims: tuple[int, ...]
    total: int
    counts: Optional[np.ndarray] = None
    keys: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.counts is not None:
            object.__setattr__(self, "counts", _frozen(self.counts, np.int64))
            if self.counts.shape != self.dims:
                raise DataError(
                    f"cell array has shape {self.counts.shape}, expected {self.dims}"
                )
            cells = self.counts
        else:
            if self.keys is None or self.values is None:
                raise DataError("a table needs dense counts or sparse keys/values")
            object.__setattr__(self, "keys", _frozen(self.keys, np.int64))
            object.__setattr__(self, "values", _frozen(self.values, np.int64))
            cells = self.values
        if cells.size and int(cells.min()) < 0:
            raise DataError("cell counts must be nonnegative")
        if int(cells.sum()) != self.total:
            raise DataError(f"cell counts sum to {int(cells.sum())}, not {self.total}")

    @property
    def is_sparse(self) -> bool:
        return self.counts is None

    @property
    def ncells(self) -> int:
        return math.prod(self.dims)

    def flat_index(self, index: Sequence[int]) -> int:
        flat = 0
        for position, size in reversed(list(zip(index, self.dims))):
            if not 0 <= position < size:
                raise IndexError(f"cell {tuple(index)} outside {self.dims}")
            flat = flat * size + position
        return flat

    def cell(self, index: Sequence[int]) -> int:
        if len(index) != len(self.dims):
            raise IndexError(f"cell {tuple(index)} does not match {self.dims}")
        if not self.is_sparse:
            return int(self.counts[tuple(index)])
        flat = self.flat_index(index)
        slot = int(np.searchsorted(self.keys, flat))
        if slot < self.keys.size and self.keys[slot] == flat:
            return int(self.values[slot])
        return 0

    def occupied(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat indices and counts of the nonzero cells, ascending by index"""
        if self.is_sparse:
            return self.keys, self.values
        flat = self.counts.ravel(order="F")
        keys = np.flatnonzero(flat)
        return keys, flat[keys]

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        keys, values = self.occupied()
        for key, value in zip(keys.tolist(), values.tolist()):
            cell = np.unravel_index(key, self.dims, order="F")
            yield tuple(int(i) for i in cell), value

    def to_dense(self) -> np.ndarray:
        if not self.is_sparse:
            return self.counts
        flat = np.zeros(self.ncells, dtype=np.int64)
        flat[self.keys] = self.values
        return flat.reshape(self.dims, order="F")

    def __eq__(self, other):
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        if self.dims != other.dims or self.total != other.total:
            return False
        mine, theirs = self.occupied(), other.occupied()
        return np.array_equal(mine[0], theirs[0]) and np.array_equal(
            mine[1], theirs[1]
        )

    __hash__ = None


@dataclass(frozen=True)
class TestResult:
    spec: TestSpec
    g2: float
    chi2: float
    dof: int
    dof_adjusted: int
    log_p_g2: float
    log_p_chi2: float
    empty_strata: int
    method: Method
    degenerate: bool = False
    ipf_iterations: Optional[int] = None
    converged: Optional[bool] = None

    __test__ = False

    @property
    def p_value(self) -> float:
        return math.exp(self.log_p_g2)


@dataclass(frozen=True)
class LogLinearModel:
    """Hierarchical log-linear model given by its maximal generating classes"""

    generating_classes: tuple[frozenset[int], ...]
    dims: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        classes = tuple(
            frozenset(int(i) for i in cls) for cls in self.generating_classes
        )
        object.__setattr__(self, "generating_classes", classes)
        for first in classes:
            for second in classes:
                if first is not second and first <= second:
                    raise ValueError(
                        f"generating class {sorted(first)} is contained in "
                        f"{sorted(second)}"
                    )
        if self.dims is not None:
            object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
            self.check(self.dims)

    def check(self, dims: Sequence[int]) -> None:
        for cls in self.generating_classes:
            bad = [i for i in cls if not 0 <= i < len(dims)]
            if bad:
                raise ValueError(
                    f"generating class {sorted(cls)} names variable {bad[0]} "
                    f"but the table has {len(dims)} dims"
                )


@dataclass(frozen=True, eq=False)
class FitResult:
    fitted: np.ndarray
    deviance: float
    pearson: float
    iterations: int
    converged: bool
    model_dof: int

    def __post_init__(self):
        object.__setattr__(self, "fitted", _frozen(self.fitted, np.float64))
