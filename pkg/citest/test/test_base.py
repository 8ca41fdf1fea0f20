import math
from unittest import TestCase

from hypothesis import given, settings, strategies as st
import numpy as np
from scipy import stats

from citest.base import (
    TestOptions,
    association_matrix,
    batch_screen,
    ci_test,
    pairwise_specs,
)
from core.exceptions import DataError, SpecError
from core.models import CategoricalColumn, Dataset, Method, TestSpec
from datasets.test.factories import CodedDatasetFactory, DatasetFactory

IPF = TestOptions(method=Method.IPF)


def stratum_subset(data, variable, level):
    """Rows where ``variable == level``, every column keeping its level count"""
    mask = data.columns[variable].codes == level
    return Dataset(
        columns=tuple(
            CategoricalColumn(
                name=col.name,
                levels=col.levels,
                codes=col.codes[mask],
                labels=tuple(str(i) for i in range(col.levels)),
            )
            for col in data.columns
        )
    )


class CITestTestCase(TestCase):
    def test_diagonal_table(self):
        codes = [0, 1, 2] * 100
        data = Dataset.from_codes({"x": codes, "y": codes})
        result = ci_test(data, TestSpec(x=0, y=1))
        self.assertAlmostEqual(result.chi2, 600.0)
        self.assertAlmostEqual(result.g2, 2 * 300 * math.log(3))
        self.assertEqual(result.dof, 4)
        self.assertEqual(result.empty_strata, 0)
        self.assertLess(result.log_p_g2, math.log(1e-100))
        self.assertFalse(result.degenerate)
        self.assertIs(result.method, Method.CLOSED_FORM)

    def test_three_variable_conditioning_dof(self):
        data = DatasetFactory(config__n=3000, config__levels=(3, 4, 2, 4, 4))
        result = ci_test(data, TestSpec(x=0, y=1, cs=(2, 3, 4)))
        self.assertEqual(result.dof, 192)
        self.assertLessEqual(result.dof_adjusted, 192)

    def test_adjust_dof(self):
        data = Dataset.from_codes(
            {"x": [0, 1, 0, 1, 1], "y": [0, 1, 1, 0, 1], "z": [0, 0, 0, 3, 3]},
            levels={"z": 4},
        )
        spec = TestSpec(x=0, y=1, cs=(2,))
        nominal = ci_test(data, spec)
        adjusted = ci_test(data, spec, TestOptions(adjust_dof=True))
        self.assertEqual(nominal.dof, 4)
        self.assertEqual(nominal.dof_adjusted, 2)
        self.assertEqual(nominal.empty_strata, 2)
        self.assertEqual(adjusted.g2, nominal.g2)
        self.assertAlmostEqual(
            adjusted.log_p_g2, float(stats.chi2.logsf(adjusted.g2, 2))
        )

    def test_single_level_is_degenerate(self):
        data = Dataset.from_codes({"x": [0, 0, 0], "y": [0, 1, 1]})
        result = ci_test(data, TestSpec(x=0, y=1))
        self.assertTrue(result.degenerate)
        self.assertEqual(result.dof, 0)
        self.assertEqual((result.g2, result.chi2), (0.0, 0.0))
        self.assertEqual(result.log_p_g2, 0.0)
        self.assertEqual(result.p_value, 1.0)

    def test_overlap(self):
        data = DatasetFactory()
        with self.assertRaises(SpecError):
            ci_test(data, TestSpec(x=0, y=0))
        with self.assertRaises(SpecError):
            ci_test(data, TestSpec(x=0, y=1, cs=(1,)))

    def test_empty_dataset(self):
        data = Dataset.from_codes({"x": [], "y": []})
        with self.assertRaises(DataError):
            ci_test(data, TestSpec(x=0, y=1))

    def test_methods_agree(self):
        data = DatasetFactory(config__n=2000, config__levels=(3, 4, 2, 4))
        spec = TestSpec(x=0, y=1, cs=(2, 3))
        closed = ci_test(data, spec)
        fitted = ci_test(data, spec, IPF)
        self.assertAlmostEqual(closed.g2, fitted.g2, places=8)
        self.assertAlmostEqual(closed.chi2, fitted.chi2, places=8)
        self.assertEqual(closed.dof, fitted.dof)
        self.assertIs(fitted.method, Method.IPF)
        self.assertTrue(fitted.converged)
        self.assertEqual(fitted.ipf_iterations, 1)
        self.assertIsNone(closed.converged)

    def test_ipf_needs_dense_table(self):
        data = DatasetFactory(config__n=100, config__levels=(3, 4, 2))
        options = TestOptions(method=Method.IPF, dense_threshold=4)
        with self.assertRaises(DataError):
            ci_test(data, TestSpec(x=0, y=1, cs=(2,)), options)

    def test_sparse_table_same_result(self):
        data = DatasetFactory(config__n=500, config__levels=(3, 4, 2, 4, 4))
        spec = TestSpec(x=0, y=1, cs=(2, 3, 4))
        dense = ci_test(data, spec)
        sparse = ci_test(data, spec, TestOptions(dense_threshold=8))
        self.assertAlmostEqual(dense.g2, sparse.g2, places=9)
        self.assertAlmostEqual(dense.chi2, sparse.chi2, places=9)
        self.assertEqual(dense.dof_adjusted, sparse.dof_adjusted)

    def test_slice_additivity(self):
        data = DatasetFactory(config__n=3000, config__levels=(3, 4, 3))
        conditional = ci_test(data, TestSpec(x=0, y=1, cs=(2,)))
        slices = [
            ci_test(stratum_subset(data, 2, level), TestSpec(x=0, y=1))
            for level in range(3)
        ]
        self.assertAlmostEqual(
            conditional.g2,
            sum(result.g2 for result in slices),
            delta=1e-9 * conditional.g2,
        )
        self.assertAlmostEqual(
            conditional.chi2,
            sum(result.chi2 for result in slices),
            delta=1e-9 * conditional.chi2,
        )

    def test_role_rotation(self):
        data = DatasetFactory(config__n=1000, config__levels=(3, 4, 2))
        forward = ci_test(data, TestSpec(x=0, y=2, cs=(1,)))
        backward = ci_test(data, TestSpec(x=2, y=0, cs=(1,)))
        self.assertAlmostEqual(forward.g2, backward.g2, places=9)
        self.assertEqual(forward.dof, backward.dof)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31), data=st.data())
    def test_relabeling_invariance(self, seed, data):
        dataset = CodedDatasetFactory(n=150, levels=(3, 4, 2), seed=seed)
        permutations = [
            data.draw(st.permutations(range(col.levels))) for col in dataset.columns
        ]
        relabeled = Dataset(
            columns=tuple(
                CategoricalColumn(
                    name=col.name,
                    levels=col.levels,
                    codes=np.asarray(perm)[col.codes],
                    labels=tuple(str(i) for i in range(col.levels)),
                )
                for col, perm in zip(dataset.columns, permutations)
            )
        )
        spec = TestSpec(x=0, y=1, cs=(2,))
        before, after = ci_test(dataset, spec), ci_test(relabeled, spec)
        self.assertAlmostEqual(before.g2, after.g2, places=9)
        self.assertAlmostEqual(before.chi2, after.chi2, places=9)
        self.assertEqual(before.dof_adjusted, after.dof_adjusted)


class BatchScreenTestCase(TestCase):
    def setUp(self):
        self.data = CodedDatasetFactory(n=400, levels=(3, 2, 4, 2, 3, 2), seed=11)

    def test_singleton(self):
        spec = TestSpec(x=0, y=1, cs=(2,))
        self.assertEqual(batch_screen(self.data, [spec]), [ci_test(self.data, spec)])

    def test_matches_loop(self):
        specs = pairwise_specs(self.data, cs=(5,))
        self.assertEqual(len(specs), 10)
        self.assertEqual(
            batch_screen(self.data, specs),
            [ci_test(self.data, spec) for spec in specs],
        )

    def test_workers_do_not_change_results(self):
        specs = pairwise_specs(self.data)
        self.assertEqual(len(specs), 15)
        sequential = batch_screen(self.data, specs, workers=1)
        parallel = batch_screen(self.data, specs, workers=3)
        self.assertEqual(sequential, parallel)

    def test_error_names_position(self):
        specs = [TestSpec(x=0, y=1), TestSpec(x=2, y=2)]
        with self.assertRaises(SpecError) as ctx:
            batch_screen(self.data, specs)
        self.assertEqual(ctx.exception.position, 1)
        self.assertIn("spec #1", str(ctx.exception))

    def test_empty_batch(self):
        self.assertEqual(batch_screen(self.data, []), [])


class PairwiseTestCase(TestCase):
    def test_pair_order(self):
        data = CodedDatasetFactory(n=20, levels=(2, 2, 2, 2), seed=1)
        specs = pairwise_specs(data, cs=(1,))
        self.assertEqual(
            [(spec.x, spec.y) for spec in specs], [(0, 2), (0, 3), (2, 3)]
        )
        self.assertTrue(all(spec.cs == (1,) for spec in specs))

    def test_association_matrix(self):
        data = CodedDatasetFactory(n=300, levels=(3, 3, 2, 2), seed=5)
        results = batch_screen(data, pairwise_specs(data))
        matrix = association_matrix(data, results)
        np.testing.assert_array_equal(matrix, matrix.T)
        np.testing.assert_array_equal(np.diag(matrix), np.zeros(4))
        self.assertEqual(matrix[0, 2], results[1].log_p_g2)
