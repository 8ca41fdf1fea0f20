"""Single conditional-independence tests and batch screening.

``ci_test`` is the one entry point every caller goes through: the CLI, the
batch screener, the Celery task and the benchmark harness.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
import logging
import math
import multiprocessing as mp
from typing import Optional, Sequence

import numpy as np

from core.exceptions import DataError, SpecError
from core.models import DENSE_THRESHOLD, Dataset, Method, TestResult, TestSpec
from core.validation import validate_spec
from loglinear.ipf import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE, ci_model, ipf_fit
from tabulate.tables import build_table, expected_ci, slice_marginals

from .distributions import log_sf_chisq
from .statistics import chi2_statistic, dof, dof_adjusted, g2_statistic

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestOptions:
    method: Method = Method.CLOSED_FORM
    adjust_dof: bool = False
    dense_threshold: int = DENSE_THRESHOLD
    ipf_tol: float = DEFAULT_TOLERANCE
    ipf_max_iter: int = DEFAULT_MAX_ITERATIONS

    __test__ = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))

    @classmethod
    def from_settings(cls, **overrides) -> "TestOptions":
        """Options with engine defaults taken from the Django settings"""
        from django.conf import settings

        defaults = {
            "dense_threshold": settings.DENSE_TABLE_THRESHOLD,
            "ipf_tol": settings.IPF_TOLERANCE,
            "ipf_max_iter": settings.IPF_MAX_ITERATIONS,
        }
        defaults.update({key: val for key, val in overrides.items() if val is not None})
        return cls(**defaults)


def ci_test(
    data: Dataset, spec: TestSpec, options: Optional[TestOptions] = None
) -> TestResult:
    """Test X independent of Y given cs (unconditional when cs is empty)"""
    options = options or TestOptions()
    validate_spec(spec, data)
    if data.n_rows == 0:
        raise DataError("dataset is empty")

    table = build_table(data, spec.variables, options.dense_threshold)
    marginals = slice_marginals(table)
    levels_x, levels_y = table.dims[:2]

    iterations = converged = None
    if options.method is Method.IPF:
        fit = ipf_fit(
            table,
            ci_model(len(spec.cs)),
            tol=options.ipf_tol,
            max_iter=options.ipf_max_iter,
        )
        expected = fit.fitted
        iterations, converged = fit.iterations, fit.converged
    else:
        expected = expected_ci(marginals)

    nominal = dof(levels_x, levels_y, table.dims[2:])
    adjusted = dof_adjusted(levels_x, levels_y, marginals)
    selected = adjusted if options.adjust_dof else nominal

    if levels_x == 1 or levels_y == 1:
        g2 = chi2 = 0.0
    else:
        g2 = g2_statistic(table, expected)
        chi2 = chi2_statistic(table, expected)

    if selected == 0:
        LOG.debug("Degenerate test %s: zero degrees of freedom", spec)
        log_p_g2 = log_p_chi2 = 0.0
    else:
        log_p_g2 = log_sf_chisq(g2, selected)
        log_p_chi2 = log_sf_chisq(chi2, selected)

    return TestResult(
        spec=spec,
        g2=g2,
        chi2=chi2,
        dof=nominal,
        dof_adjusted=adjusted,
        log_p_g2=log_p_g2,
        log_p_chi2=log_p_chi2,
        empty_strata=marginals.empty_strata,
        method=options.method,
        degenerate=selected == 0,
        ipf_iterations=iterations,
        converged=converged,
    )


# per-process state for batch workers
_WORKER_DATA: Optional[Dataset] = None
_WORKER_OPTIONS: Optional[TestOptions] = None


def _init_worker(data: Dataset, options: TestOptions) -> None:
    global _WORKER_DATA, _WORKER_OPTIONS  # pylint: disable=global-statement
    _WORKER_DATA = data
    _WORKER_OPTIONS = options


def _run_worker(spec: TestSpec) -> TestResult:
    return ci_test(_WORKER_DATA, spec, _WORKER_OPTIONS)


def batch_screen(
    data: Dataset,
    specs: Sequence[TestSpec],
    workers: int = 1,
    options: Optional[TestOptions] = None,
) -> list[TestResult]:
    """Run many tests; results come back in input order whatever ``workers`` is"""
    options = options or TestOptions()
    specs = list(specs)
    for position, spec in enumerate(specs):
        try:
            validate_spec(spec, data)
        except SpecError as exc:
            raise SpecError(str(exc), index=exc.index, position=position) from exc
    if data.n_rows == 0:
        raise DataError("dataset is empty")

    workers = max(1, min(int(workers), len(specs) or 1))
    if workers == 1:
        results = [ci_test(data, spec, options) for spec in specs]
    else:
        chunksize = max(1, math.ceil(len(specs) / (workers * 4)))
        LOG.debug(
            "Screening %s specs on %s workers (chunks of %s)",
            len(specs),
            workers,
            chunksize,
        )
        ctx = mp.get_context("spawn")
        with ProcessPoolExecutor(
            max_workers=workers,
            mp_context=ctx,
            initializer=_init_worker,
            initargs=(data, options),
        ) as pool:
            # map preserves input order
            results = list(pool.map(_run_worker, specs, chunksize=chunksize))
    degenerate = sum(result.degenerate for result in results)
    if degenerate:
        LOG.warning(
            "%s of %s tests were degenerate (dof = 0)", degenerate, len(results)
        )
    return results


def pairwise_specs(data: Dataset, cs: Sequence[int] = ()) -> list[TestSpec]:
    """Every pair i < j of columns outside cs, conditioned on cs"""
    cs = tuple(cs)
    candidates = [i for i in range(len(data.columns)) if i not in set(cs)]
    return [TestSpec(x=i, y=j, cs=cs) for i, j in combinations(candidates, 2)]


def association_matrix(data: Dataset, results: Sequence[TestResult]) -> np.ndarray:
    """Symmetric matrix of logged G-squared p-values.

    The diagonal and untested pairs are 0.
    """
    ncols = len(data.columns)
    matrix = np.zeros((ncols, ncols))
    for result in results:
        matrix[result.spec.x, result.spec.y] = result.log_p_g2
        matrix[result.spec.y, result.spec.x] = result.log_p_g2
    return matrix


def with_method(options: TestOptions, method: Method) -> TestOptions:
    return replace(options, method=Method(method))
