"""Timing harness: T back-to-back tests per scenario, sample size and method.

Dataset generation stays outside the timed region. Before measuring, each
(scenario, n) gets one untimed full pass over all methods and test counts on
the first repetition's dataset.
"""
from dataclasses import dataclass
import logging
from statistics import fmean
import time
from typing import Callable, Optional

from citest.base import TestOptions, batch_screen, ci_test, with_method
from core.models import Dataset, Method, TestSpec
from datasets.generators import Dependence, GenConfig, generate

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    """Level counts laid out (|X|, |Y|, |Z1|, ..., |Zk|)"""

    name: str
    levels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(i) for i in self.levels))
        if len(self.levels) < 2 or any(count < 2 for count in self.levels):
            raise ValueError(f"scenario {self.name}: bad levels {self.levels}")

    @property
    def spec(self) -> TestSpec:
        return TestSpec(x=0, y=1, cs=tuple(range(2, len(self.levels))))


DEFAULT_SCENARIOS = (
    Scenario("cs1", (3, 4, 2)),
    Scenario("cs2", (3, 4, 2, 4)),
    Scenario("cs3", (3, 4, 2, 4, 4)),
)


@dataclass(frozen=True)
class BenchConfig:
    test_counts: tuple[int, ...] = (500, 1000, 2000, 3000, 5000)
    sample_sizes: tuple[int, ...] = (3000, 5000, 10000)
    scenarios: tuple[Scenario, ...] = DEFAULT_SCENARIOS
    repetitions: int = 50
    methods: tuple[Method, ...] = (Method.CLOSED_FORM, Method.IPF)
    batch_workers: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(Method(i) for i in self.methods))
        for name in ("test_counts", "sample_sizes", "scenarios", "methods"):
            values = tuple(getattr(self, name))
            object.__setattr__(self, name, values)
            if not values:
                raise ValueError(f"{name} must not be empty")
        if any(count < 1 for count in self.test_counts + self.sample_sizes):
            raise ValueError("test counts and sample sizes must be positive")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be positive, got {self.repetitions}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError(f"duplicate methods: {self.methods}")
        if self.batch_workers is not None and self.batch_workers < 1:
            raise ValueError(
                f"batch workers must be positive, got {self.batch_workers}"
            )

    @property
    def method_labels(self) -> list[str]:
        labels = [method.value for method in self.methods]
        if self.batch_workers:
            labels.append(f"batch_w{self.batch_workers}")
        return labels


@dataclass(frozen=True)
class BenchRecord:
    scenario: str
    n: int
    tests: int
    method: str
    mean_seconds: float
    normalized: float = 1.0


Runner = Callable[[Dataset, int], object]


def _runners(config: BenchConfig, spec: TestSpec, options: TestOptions) -> dict:
    runners: dict[str, Runner] = {}
    for method in config.methods:
        method_options = with_method(options, method)

        def run(data, tests, method_options=method_options):
            for _ in range(tests):
                ci_test(data, spec, method_options)

        runners[method.value] = run
    if config.batch_workers:
        batch_options = with_method(options, Method.CLOSED_FORM)

        def run_batch(data, tests):
            batch_screen(data, [spec] * tests, config.batch_workers, batch_options)

        runners[f"batch_w{config.batch_workers}"] = run_batch
    return runners


def run_bench(
    config: BenchConfig,
    options: Optional[TestOptions] = None,
    clock: Callable[[], float] = time.perf_counter,
) -> list[BenchRecord]:
    options = options or TestOptions()
    resolution = time.get_clock_info("perf_counter").resolution
    records = []
    for scenario in config.scenarios:
        spec = scenario.spec
        runners = _runners(config, spec, options)
        for n in config.sample_sizes:
            datasets = [
                generate(
                    GenConfig(
                        n=n,
                        levels=scenario.levels,
                        dependence=Dependence.NULL_CI,
                        seed=config.seed + repetition,
                    )
                )
                for repetition in range(config.repetitions)
            ]
            for run in runners.values():
                for tests in config.test_counts:
                    run(datasets[0], tests)

            for tests in config.test_counts:
                means = {}
                for label, run in runners.items():
                    elapsed = []
                    for data in datasets:
                        start = clock()
                        run(data, tests)
                        elapsed.append(clock() - start)
                    means[label] = max(fmean(elapsed), resolution)
                baseline = means.get(
                    Method.CLOSED_FORM.value, next(iter(means.values()))
                )
                for label, mean in means.items():
                    records.append(
                        BenchRecord(
                            scenario=scenario.name,
                            n=n,
                            tests=tests,
                            method=label,
                            mean_seconds=mean,
                            normalized=mean / baseline,
                        )
                    )
                LOG.info(
                    "%s n=%s T=%s: %s",
                    scenario.name,
                    n,
                    tests,
                    ", ".join(f"{label} {mean:.4f}s" for label, mean in means.items()),
                )
    return records
