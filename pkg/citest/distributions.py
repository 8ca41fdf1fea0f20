"""Chi-squared upper tail in log space.

ln P(chi2_dof > stat) = ln Q(dof/2, stat/2), where Q is the regularized upper
incomplete gamma function. Below x = a + 1 the lower series for P converges
fast and Q = 1 - P is well conditioned; above it the continued fraction for Q
converges fast and is evaluated entirely in logs, so tails far past float
underflow stay finite.
"""
from dataclasses import dataclass
import math

from scipy.special import gammaln

from core.exceptions import DegenerateTestError

MAX_ITERATIONS = 10_000
EPSILON = 1e-16
# smallest magnitude allowed for Lentz's method intermediates
TINY = 1e-300


def _log_lower_series(a: float, x: float) -> float:
    """ln P(a, x) by the power series; use for x < a + 1"""
    term = 1.0 / a
    total = term
    denominator = a
    for _ in range(MAX_ITERATIONS):
        denominator += 1.0
        term *= x / denominator
        total += term
        if abs(term) < abs(total) * EPSILON:
            break
    return math.log(total) - x + a * math.log(x) - gammaln(a)


def _log_upper_fraction(a: float, x: float) -> float:
    """ln Q(a, x) by the modified Lentz continued fraction; use for x >= a + 1"""
    b = x + 1.0 - a
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITERATIONS):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPSILON:
            break
    return math.log(h) - x + a * math.log(x) - gammaln(a)


def log_sf_chisq(stat: float, dof: int) -> float:
    """Natural log of the chi-squared survival function"""
    if dof < 1:
        raise DegenerateTestError(f"chi-squared distribution needs dof >= 1, got {dof}")
    if stat < 0 or math.isnan(stat):
        raise ValueError(f"statistic must be nonnegative, got {stat}")
    if stat == 0:
        return 0.0
    if math.isinf(stat):
        return -math.inf
    if dof == 2:
        # Q(1, x) = exp(-x)
        return -stat / 2.0
    a = dof / 2.0
    x = stat / 2.0
    if x < a + 1.0:
        lower = math.exp(_log_lower_series(a, x))
        return math.log1p(-min(lower, 1.0))
    return min(_log_upper_fraction(a, x), 0.0)


@dataclass(frozen=True)
class ChiSquaredDist:
    dof: int

    def __post_init__(self):
        if self.dof < 1:
            raise DegenerateTestError(
                f"chi-squared distribution needs dof >= 1, got {self.dof}"
            )

    def log_sf(self, stat: float) -> float:
        return log_sf_chisq(stat, self.dof)

    def sf(self, stat: float) -> float:
        return math.exp(self.log_sf(stat))
