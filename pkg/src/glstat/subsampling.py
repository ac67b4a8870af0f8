"""Blockwise subsampling confidence intervals.

The estimator is recomputed on every window of ``b`` consecutive
observations; the empirical law L_n of sqrt(b) (estimate_i - estimate)
supplies the quantiles of the interval.
"""

from dataclasses import dataclass
import math

import numpy as np

from ._errors import GLStatError, WindowEstimatorError
from .empirical_u import as_sample, quantile_rank

__all__ = [
    "SubsamplingConfig",
    "SubsampleResult",
    "subsample_estimates",
    "l_n_quantile",
    "confidence_interval",
]


@dataclass(frozen=True)
class SubsamplingConfig:
    block_length: int
    gamma: float = 0.10

    def __post_init__(self):
        if self.block_length < 1:
            raise GLStatError("block length must be positive")
        if not 0.0 < self.gamma < 1.0:
            raise GLStatError(f"gamma must lie in (0, 1), got {self.gamma}")


@dataclass(frozen=True)
class SubsampleResult:
    block_estimates: np.ndarray
    full_estimate: float
    q_lo: float
    q_hi: float
    ci: tuple
    n: int
    b: int

    @property
    def length(self):
        return self.ci[1] - self.ci[0]

    def covers(self, value):
        return self.ci[0] <= value <= self.ci[1]


def subsample_estimates(sample, b, estimator):
    """Estimates on the n - b + 1 overlapping windows, in temporal order.

    Estimators exposing ``windows(sample, b)`` compute all windows in one
    call; anything else is called once per window.
    """
    sample = as_sample(sample)
    n = sample.n
    if not 1 <= b <= n:
        raise GLStatError(f"block length must lie in 1..{n}, got {b}")
    fast = getattr(estimator, "windows", None)
    if fast is not None:
        return np.asarray(fast(sample, b), dtype=np.float64)
    out = np.empty(n - b + 1)
    for i in range(n - b + 1):
        try:
            out[i] = estimator(sample.window(i, b))
        except WindowEstimatorError:
            raise
        except Exception as exc:
            raise WindowEstimatorError(i, exc) from exc
    return out


def l_n_quantile(block_estimates, full_estimate, b, level):
    """L_n^{-1}(level) for the centred, sqrt(b)-scaled block estimates."""
    est = np.asarray(block_estimates, dtype=np.float64)
    if est.size == 0:
        raise GLStatError("no block estimates")
    if not 0.0 < level < 1.0:
        raise GLStatError(f"level must lie in (0, 1), got {level}")
    centred = np.sort(math.sqrt(b) * (est - full_estimate))
    return float(centred[quantile_rank(level, centred.size) - 1])


def interval_from_blocks(block_estimates, full_estimate, n, b, gamma):
    q_lo = l_n_quantile(block_estimates, full_estimate, b, gamma / 2)
    q_hi = l_n_quantile(block_estimates, full_estimate, b, 1 - gamma / 2)
    root_n = math.sqrt(n)
    ci = (full_estimate - q_hi / root_n, full_estimate - q_lo / root_n)
    return q_lo, q_hi, ci


def confidence_interval(sample, estimator, config):
    """Subsampling CI [est - q_{1-gamma/2}/sqrt(n), est - q_{gamma/2}/sqrt(n)]."""
    sample = as_sample(sample)
    b = config.block_length
    blocks = subsample_estimates(sample, b, estimator)
    full = float(estimator(sample))
    q_lo, q_hi, ci = interval_from_blocks(blocks, full, sample.n, b, config.gamma)
    blocks.setflags(write=False)
    return SubsampleResult(blocks, full, q_lo, q_hi, ci, sample.n, b)
