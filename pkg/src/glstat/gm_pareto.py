"""Generalized median (GM) estimation of the Pareto tail index."""

from dataclasses import dataclass
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._backend import core
from ._errors import (
    DegenerateKernelError,
    GLStatError,
    InsufficientSampleError,
    KernelDomainError,
    WindowEstimatorError,
)
from ._special import chi_square_median
from .empirical_u import DEFAULT_BUDGET, as_sample, quantile_rank, u_quantile, _subset_count
from .kernels import gm_pareto_kernel
from .subsampling import confidence_interval

__all__ = [
    "GMConfig",
    "GMEstimator",
    "MLEstimator",
    "make_estimator",
    "gm_estimate",
    "ml_estimate",
    "hill_estimate",
    "coverage_curve",
]


@dataclass(frozen=True)
class GMConfig:
    """Kernel dimension ``m`` (an integer >= 2, or ``"n"`` for the ML comparator).

    ``ties_to_inf`` maps subsets of identical values to +inf instead of
    raising; only relevant when data can contain exact duplicates.
    """

    m: int | str = 2
    budget: int | None = DEFAULT_BUDGET
    ties_to_inf: bool = False

    def __post_init__(self):
        if self.m != "n" and (isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 2):
            raise GLStatError(f"GM kernel dimension must be an integer >= 2 or 'n', got {self.m!r}")

    @property
    def label(self):
        return str(self.m)


def _positive_logs(x):
    if not np.all(x > 0):
        raise KernelDomainError("the tail-index estimators need strictly positive data")
    return np.log(x)


class GMEstimator:
    """Median of the GM kernel over all m-subsets; also evaluates all windows at once."""

    def __init__(self, config):
        self.config = config if isinstance(config, GMConfig) else GMConfig(config)
        self.m = self.config.m
        self.kernel = gm_pareto_kernel(self.m)

    def __call__(self, sample):
        return u_quantile(sample, self.kernel, 0.5, self.config.budget, self.config.ties_to_inf)

    def windows(self, sample, b):
        x = as_sample(sample).values
        count = _subset_count(b, self.m, self.config.budget)
        lg = _positive_logs(x)
        return core.gm_window_quantiles(
            lg, b, self.m, self.kernel.params["scale"], self.config.ties_to_inf,
            count, quantile_rank(0.5, count),
        )

    def __repr__(self):
        return f"GMEstimator(m={self.m})"


def _ml_rows(lg_rows):
    # the m = n kernel on each row of a log-array
    rows = np.sort(lg_rows, axis=1)
    n = rows.shape[1]
    if n < 2:
        raise InsufficientSampleError("the ML estimator needs at least 2 observations")
    lo = rows[:, 0]
    total = lo.copy()
    for t in range(1, n):
        total += rows[:, t]
    d = total / n - lo
    bad = np.flatnonzero((rows[:, -1] == lo) | ~(d > 0))
    scale = chi_square_median(2 * n - 2) / (2 * n)
    with np.errstate(divide="ignore"):
        return scale / d, bad


class MLEstimator:
    """The m = n member of the GM family (modified maximum likelihood)."""

    m = "n"

    def __call__(self, sample):
        x = as_sample(sample).values
        vals, bad = _ml_rows(_positive_logs(x)[None, :])
        if bad.size:
            raise DegenerateKernelError("ML estimator undefined for an all-equal sample")
        return float(vals[0])

    def windows(self, sample, b):
        x = as_sample(sample).values
        vals, bad = _ml_rows(sliding_window_view(_positive_logs(x), b))
        if bad.size:
            raise WindowEstimatorError(int(bad[0]), DegenerateKernelError("all-equal window"))
        return vals

    def __repr__(self):
        return "MLEstimator()"


def make_estimator(config):
    config = config if isinstance(config, GMConfig) else GMConfig(config)
    return MLEstimator() if config.m == "n" else GMEstimator(config)


def gm_estimate(sample, config=2):
    """GM estimate: H_n^{-1}(1/2) of the GM kernel values."""
    config = config if isinstance(config, GMConfig) else GMConfig(config)
    sample = as_sample(sample)
    if config.m == "n":
        return ml_estimate(sample)
    return GMEstimator(config)(sample)


def ml_estimate(sample):
    return MLEstimator()(sample)


def hill_estimate(sample):
    """Classical Pareto ML estimate n / sum(log(X_i / min X))."""
    x = as_sample(sample).values
    lg = _positive_logs(x)
    s = float(np.sum(lg - lg.min()))
    if s <= 0:
        raise DegenerateKernelError("Hill estimator undefined for an all-equal sample")
    return x.shape[0] / s


def coverage_curve(base_samples, y, config, sub, alpha=1.0, base_cis=None):
    """Average of 1[alpha in CI_j] - 1[alpha in CI_j(y)] over the base samples.

    CI_j(y) is the interval from sample j with ``y`` appended at the end.
    ``base_cis`` may carry the uncontaminated intervals when evaluating many y.
    """
    if not y > 0:
        raise GLStatError(f"contaminant must be positive, got {y}")
    est = make_estimator(config)
    total = 0
    for j, s in enumerate(base_samples):
        s = as_sample(s)
        base = base_cis[j] if base_cis is not None else confidence_interval(s, est, sub).ci
        cont = confidence_interval(s.append(y), est, sub).ci
        total += int(base[0] <= alpha <= base[1]) - int(cont[0] <= alpha <= cont[1])
    return total / len(base_samples)
