"""Synthetic datasets laid out as (X, Y, Z1..Zk).

Each Zi is uniform. Within every realized z-combination X and Y are drawn
independently from seed-derived conditional distributions, so X and Y are
conditionally independent given Z while both depend on Z. The dependent
variant replaces Y, with probability ``DEPENDENCE_WEIGHT``, by a function of
X.

Draws come from numpy's PCG64 generator (``numpy.random.default_rng``), whose
stream is fixed for a given seed across platforms.

Columns come out coded by first appearance with labels "0", "1", ... naming
the drawn values, the same coding read_delimited gives their written form.
"""
from dataclasses import dataclass
import enum
import logging

import numpy as np

from core.exceptions import DataError
from core.models import CategoricalColumn, Dataset

LOG = logging.getLogger(__name__)

DEPENDENCE_WEIGHT = 0.3


class Dependence(str, enum.Enum):
    NULL_CI = "null_ci"
    DEPENDENT = "dependent"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GenConfig:
    n: int
    levels: tuple[int, ...]
    dependence: Dependence = Dependence.NULL_CI
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(i) for i in self.levels))
        object.__setattr__(self, "dependence", Dependence(self.dependence))
        if self.n < 1:
            raise DataError(f"sample size must be >= 1, got {self.n}")
        if len(self.levels) < 2:
            raise DataError(f"need levels for at least X and Y, got {self.levels}")
        if any(count < 2 for count in self.levels):
            raise DataError(f"every variable needs >= 2 levels, got {self.levels}")
        if not 0 <= self.seed < 2**64:
            raise DataError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def names(self) -> list[str]:
        return ["X", "Y"] + [f"Z{i}" for i in range(1, len(self.levels) - 1)]


def _draw(rng: np.random.Generator, probabilities: np.ndarray, slot: np.ndarray):
    """One categorical draw per row from the distribution in probabilities[slot]"""
    cumulative = np.cumsum(probabilities, axis=1)
    uniform = rng.random(slot.size)
    codes = (uniform[:, None] >= cumulative[slot]).sum(axis=1)
    return np.minimum(codes, probabilities.shape[1] - 1)


def _conditionals(rng: np.random.Generator, strata: int, levels: int) -> np.ndarray:
    weights = rng.random((strata, levels))
    return weights / weights.sum(axis=1, keepdims=True)


def _first_appearance(name: str, count: int, codes: np.ndarray) -> CategoricalColumn:
    """Recode to first-appearance order, the coding read_delimited produces.

    Levels that never occur keep their slots at the end, in ascending order,
    so the column still declares the configured level count.
    """
    realized, first_seen = np.unique(codes, return_index=True)
    order = realized[np.argsort(first_seen, kind="stable")]
    order = np.concatenate([order, np.setdiff1d(np.arange(count), realized)])
    rank = np.empty(count, dtype=np.int64)
    rank[order] = np.arange(count)
    return CategoricalColumn(
        name=name,
        levels=count,
        codes=rank[codes],
        labels=tuple(str(i) for i in order.tolist()),
    )


def generate(config: GenConfig) -> Dataset:
    rng = np.random.default_rng(config.seed)
    levels_x, levels_y, *levels_z = config.levels

    stratum = np.zeros(config.n, dtype=np.int64)
    conditioning = []
    stride = 1
    for count in levels_z:
        codes = rng.integers(0, count, size=config.n)
        conditioning.append(codes)
        stratum += codes * stride
        stride *= count
    realized, slot = np.unique(stratum, return_inverse=True)
    slot = slot.reshape(-1)

    x = _draw(rng, _conditionals(rng, realized.size, levels_x), slot)
    y = _draw(rng, _conditionals(rng, realized.size, levels_y), slot)
    if config.dependence is Dependence.DEPENDENT:
        replace = rng.random(config.n) < DEPENDENCE_WEIGHT
        y = np.where(replace, x % levels_y, y)

    columns = tuple(
        _first_appearance(name, count, codes)
        for name, count, codes in zip(
            config.names, config.levels, [x, y, *conditioning]
        )
    )
    LOG.debug(
        "Generated %s rows, levels %s, %s (seed %s)",
        config.n,
        config.levels,
        config.dependence,
        config.seed,
    )
    return Dataset(columns=columns)
