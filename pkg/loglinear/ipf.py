"""Hierarchical Poisson log-linear models fitted by iterative proportional fitting.

A model is given by its maximal generating classes. The conditional
independence model for a table laid out as (x, y, z_1..z_k) has the two
classes {x, z_1..z_k} and {y, z_1..z_k}; every lower-order interaction in
the long-hand model formula is implied by hierarchy.
"""
from itertools import combinations
import logging
import math
from typing import Sequence

import numpy as np

from citest.statistics import chi2_statistic, g2_statistic
from core.exceptions import DataError
from core.models import ContingencyTable, FitResult, LogLinearModel

LOG = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITERATIONS = 50


def ci_model(k: int) -> LogLinearModel:
    """X and Y independent given Z_1..Z_k; k = 0 is the main-effects model"""
    if k < 0:
        raise ValueError(f"conditioning set size must be >= 0, got {k}")
    conditioning = set(range(2, k + 2))
    return LogLinearModel(
        generating_classes=(
            frozenset({0} | conditioning),
            frozenset({1} | conditioning),
        )
    )


def independence_model(ndim: int) -> LogLinearModel:
    return LogLinearModel(generating_classes=tuple(frozenset({i}) for i in range(ndim)))


def saturated_model(ndim: int) -> LogLinearModel:
    return LogLinearModel(generating_classes=(frozenset(range(ndim)),))


def model_dof(dims: Sequence[int], model: LogLinearModel) -> int:
    """Residual degrees of freedom: cells minus free parameters.

    Each distinct subset S of a generating class (the empty set included,
    for the intercept) carries prod_{i in S} (d_i - 1) parameters.
    """
    model.check(dims)
    terms = set()
    for cls in model.generating_classes:
        members = sorted(cls)
        for size in range(len(members) + 1):
            terms.update(frozenset(term) for term in combinations(members, size))
    parameters = sum(math.prod(dims[i] - 1 for i in term) for term in terms)
    return math.prod(dims) - parameters


def _margin(array: np.ndarray, cls: frozenset) -> np.ndarray:
    axes = tuple(i for i in range(array.ndim) if i not in cls)
    return array.sum(axis=axes, keepdims=True)


def ipf_fit(
    table: ContingencyTable,
    model: LogLinearModel,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITERATIONS,
) -> FitResult:
    """Fit ``model`` to ``table`` by cyclic margin rescaling.

    Stops once every class margin of the fit is within ``tol`` (max absolute
    difference) of the observed one. Decomposable models, the CI model among
    them, are exact after one cycle.
    """
    if table.is_sparse:
        raise DataError(f"IPF needs a dense table; dims {table.dims} are stored sparse")
    if table.total == 0:
        raise DataError("cannot fit a model to an empty table")
    model.check(table.dims)
    observed = table.counts.astype(np.float64)
    margins = [(cls, _margin(observed, cls)) for cls in model.generating_classes]

    fitted = np.ones_like(observed)
    for _, margin in margins:
        # cells in a zero margin are structurally zero
        fitted = np.where(np.broadcast_to(margin, fitted.shape) > 0, fitted, 0.0)

    converged = False
    discrepancy = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        for cls, margin in margins:
            current = _margin(fitted, cls)
            ratio = np.divide(
                margin, current, out=np.zeros_like(current), where=current > 0
            )
            fitted = fitted * ratio
        discrepancy = max(
            float(np.max(np.abs(_margin(fitted, cls) - margin)))
            for cls, margin in margins
        )
        LOG.debug("IPF cycle %s: max margin discrepancy %.3g", iterations, discrepancy)
        if discrepancy < tol:
            converged = True
            break
    if not converged:
        LOG.warning(
            "IPF did not converge in %s cycles (discrepancy %.3g, tol %.3g)",
            max_iter,
            discrepancy,
            tol,
        )

    return FitResult(
        fitted=fitted,
        deviance=g2_statistic(table, fitted),
        pearson=chi2_statistic(table, fitted),
        iterations=iterations,
        converged=converged,
        model_dof=model_dof(table.dims, model),
    )
