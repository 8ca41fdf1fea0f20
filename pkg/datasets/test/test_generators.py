import math
from unittest import TestCase

from django.test import tag
import numpy as np

from citest.base import ci_test
from core.exceptions import DataError
from core.models import TestSpec
from datasets.generators import Dependence, GenConfig, generate

from .factories import DatasetFactory, GenConfigFactory


class GenerateTestCase(TestCase):
    def test_same_seed_same_data(self):
        config = GenConfigFactory(seed=42, levels=(3, 4, 2, 4))
        self.assertEqual(generate(config), generate(config))

    def test_different_seeds(self):
        first = DatasetFactory(config__seed=1)
        second = DatasetFactory(config__seed=2)
        self.assertNotEqual(first, second)

    def test_layout(self):
        data = DatasetFactory(config__n=1000, config__levels=(3, 4, 2, 4, 4))
        self.assertEqual(data.names, ["X", "Y", "Z1", "Z2", "Z3"])
        self.assertEqual(data.levels, [3, 4, 2, 4, 4])
        self.assertEqual(data.n_rows, 1000)
        for col in data.columns:
            self.assertEqual(len(np.unique(col.codes)), col.levels)

    def test_small_n_keeps_configured_levels(self):
        data = DatasetFactory(config__n=3, config__levels=(3, 4, 5))
        self.assertEqual(data.levels, [3, 4, 5])
        for col in data.columns:
            self.assertLess(int(col.codes.max()), col.levels)

    def test_first_appearance_coding(self):
        data = DatasetFactory(config__n=500, config__levels=(3, 4, 2, 4))
        for col in data.columns:
            first = [col.codes.tolist().index(code) for code in range(col.levels)]
            self.assertEqual(first, sorted(first))
            self.assertEqual(sorted(col.labels), [str(i) for i in range(col.levels)])

    def test_unrealized_levels_come_last(self):
        data = DatasetFactory(config__n=2, config__levels=(2, 5))
        col = data.columns[1]
        self.assertEqual(col.levels, 5)
        realized = np.unique(col.codes).tolist()
        self.assertEqual(realized, list(range(len(realized))))
        unrealized = col.labels[len(realized) :]
        self.assertEqual(list(unrealized), sorted(unrealized, key=int))

    def test_bad_config(self):
        for kwargs in (
            {"n": 0, "levels": (2, 2)},
            {"n": 10, "levels": (2,)},
            {"n": 10, "levels": (2, 1)},
            {"n": 10, "levels": (2, 2), "seed": -1},
        ):
            with self.subTest(**kwargs), self.assertRaises(DataError):
                GenConfig(**kwargs)

    def test_dependence_from_string(self):
        config = GenConfig(n=5, levels=(2, 2), dependence="dependent")
        self.assertIs(config.dependence, Dependence.DEPENDENT)


@tag("slow")
class CalibrationTestCase(TestCase):
    def test_null_rejection_rate(self):
        spec = TestSpec(x=0, y=1, cs=(2,))
        rejections = 0
        seeds = 1000
        for seed in range(seeds):
            data = generate(GenConfig(n=50000, levels=(3, 4, 2), seed=seed))
            rejections += ci_test(data, spec).log_p_g2 < math.log(0.05)
        self.assertAlmostEqual(rejections / seeds, 0.05, delta=0.02)

    def _rejection_rates(self, seeds):
        spec = TestSpec(x=0, y=1, cs=(2, 3))
        g2 = chi2 = 0
        for seed in seeds:
            data = generate(GenConfig(n=5000, levels=(3, 4, 2, 4), seed=seed))
            result = ci_test(data, spec)
            g2 += result.log_p_g2 < math.log(0.05)
            chi2 += result.log_p_chi2 < math.log(0.05)
        return g2 / len(seeds), chi2 / len(seeds)

    def test_two_conditioning_variables(self):
        # 96 cells at n=5000 leave some expected counts small; G² runs a
        # little hot on individual 1000-seed blocks, see DESIGN.md
        g2, chi2 = self._rejection_rates(range(1000))
        self.assertGreaterEqual(chi2, 0.03)
        self.assertLessEqual(chi2, 0.07)
        pooled, _ = self._rejection_rates(range(1000, 4000))
        pooled = (3 * pooled + g2) / 4
        self.assertGreaterEqual(pooled, 0.03)
        self.assertLessEqual(pooled, 0.07)

    def test_dependent_power(self):
        spec = TestSpec(x=0, y=1, cs=(2,))
        seeds = 200
        detected = sum(
            ci_test(
                generate(
                    GenConfig(
                        n=5000,
                        levels=(3, 4, 2),
                        dependence=Dependence.DEPENDENT,
                        seed=seed,
                    )
                ),
                spec,
            ).log_p_g2
            < math.log(1e-6)
            for seed in range(seeds)
        )
        self.assertGreater(detected / seeds, 0.99)
