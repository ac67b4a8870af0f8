"""U-statistics, the empirical U-distribution function and U-quantiles.

Everything here works by full enumeration of the C(n, m) index subsets
i_1 < ... < i_m. Built-in kernels are evaluated by the compiled core (see
``_backend``); arbitrary kernels fall back to ``Kernel.vectorized`` or to
a plain Python loop.
"""

from dataclasses import dataclass
from itertools import combinations, product
import math

import numpy as np

from ._backend import core
from ._enumerate_python import _combination_index
from ._errors import (
    EnumerationBudgetError,
    GLStatError,
    InsufficientSampleError,
    KernelDomainError,
    QuantileDomainError,
    SupportLookupError,
)

__all__ = [
    "DEFAULT_BUDGET",
    "Sample",
    "as_sample",
    "kernel_values",
    "EmpiricalUDist",
    "build_empirical_udist",
    "u_statistic",
    "u_quantile",
    "h_n",
    "h_n_inverse",
    "quantile_rank",
    "DiscreteLaw",
    "HoeffdingDecomposition",
    "hoeffding_decompose",
    "hoeffding_projection_sum",
]

DEFAULT_BUDGET = 2 ** 26


@dataclass(frozen=True)
class Sample:
    """An observed series X_1..X_n; the order is kept as given."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise GLStatError("a sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise GLStatError("sample values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self):
        return self.values.shape[0]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def append(self, y):
        return Sample(np.append(self.values, float(y)))

    def window(self, start, length):
        return Sample(self.values[start:start + length])


def as_sample(data):
    return data if isinstance(data, Sample) else Sample(data)


def _subset_count(n, m, budget):
    if n < m:
        raise InsufficientSampleError(f"need at least {m} observations, got {n}")
    count = math.comb(n, m)
    if budget is not None and count > budget:
        raise EnumerationBudgetError(count, budget)
    return count


def kernel_values(sample, kernel, budget=DEFAULT_BUDGET, ties_to_inf=False):
    """All C(n, m) kernel values, in no particular order.

    ``ties_to_inf`` only affects the GM kernel: subsets of equal values are
    then mapped to +inf (the limit of the kernel) instead of raising.
    """
    x = as_sample(sample).values
    m = kernel.m
    count = _subset_count(x.shape[0], m, budget)
    xs = np.sort(x)
    if kernel.family == "sum":
        return core.sum_kernel_values(xs, m, kernel.params["divisor"], count)
    if kernel.family == "gm":
        if not np.all(xs > 0):
            raise KernelDomainError("GM kernel needs strictly positive data")
        return core.gm_kernel_values(np.log(xs), m, kernel.params["scale"], ties_to_inf, count)
    if kernel.vectorized is not None:
        idx = _combination_index(x.shape[0], m)
        return np.asarray(kernel.vectorized(x[idx]), dtype=np.float64).reshape(count)
    return np.fromiter(
        (kernel.func(*c) for c in combinations(x.tolist(), m)), dtype=np.float64, count=count
    )


def quantile_rank(p, count):
    """Smallest 1-based rank k with k / count >= p."""
    if not (0.0 < p <= 1.0):
        raise QuantileDomainError(f"quantile level must lie in (0, 1], got {p}")
    k = max(1, min(count, math.ceil(p * count)))
    while k > 1 and (k - 1) / count >= p:
        k -= 1
    while k < count and k / count < p:
        k += 1
    return k


@dataclass(frozen=True)
class EmpiricalUDist:
    """Sorted multiset of kernel values; H_n and its generalized inverse."""

    kernel_values: np.ndarray
    n: int
    m: int

    @property
    def count(self):
        return self.kernel_values.shape[0]

    def cdf(self, t):
        return np.searchsorted(self.kernel_values, t, side="right") / self.count

    def quantile(self, p):
        return float(self.kernel_values[quantile_rank(p, self.count) - 1])


def build_empirical_udist(sample, kernel, budget=DEFAULT_BUDGET, ties_to_inf=False):
    sample = as_sample(sample)
    vals = np.sort(kernel_values(sample, kernel, budget, ties_to_inf))
    vals.setflags(write=False)
    return EmpiricalUDist(vals, sample.n, kernel.m)


def h_n(dist, t):
    """H_n(t): fraction of kernel values not exceeding ``t``."""
    out = dist.cdf(t)
    return float(out) if np.ndim(out) == 0 else out


def h_n_inverse(dist, p):
    """H_n^{-1}(p) = inf{x : H_n(x) >= p}."""
    return dist.quantile(p)


def u_statistic(sample, kernel, budget=DEFAULT_BUDGET):
    return float(np.mean(kernel_values(sample, kernel, budget)))


def u_quantile(sample, kernel, p, budget=DEFAULT_BUDGET, ties_to_inf=False):
    """H_n^{-1}(p) by selection, without sorting all kernel values."""
    vals = kernel_values(sample, kernel, budget, ties_to_inf)
    return float(core.select_rank(vals, quantile_rank(p, vals.shape[0])))


# Exact Hoeffding decomposition on finite-support laws


@dataclass(frozen=True)
class DiscreteLaw:
    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(v), float(q)) for v, q in self.atoms)
        if not atoms:
            raise GLStatError("a discrete law needs at least one atom")
        values = [v for v, _ in atoms]
        if len(set(values)) != len(values):
            raise GLStatError("atom values must be distinct")
        if any(not q > 0 for _, q in atoms):
            raise GLStatError("atom probabilities must be positive")
        if abs(math.fsum(q for _, q in atoms) - 1.0) > 1e-12:
            raise GLStatError("atom probabilities must sum to 1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def uniform(cls, values):
        values = list(values)
        return cls(tuple((v, 1.0 / len(values)) for v in values))

    @property
    def values(self):
        return np.array([v for v, _ in self.atoms])

    @property
    def probs(self):
        return np.array([q for _, q in self.atoms])


@dataclass(frozen=True)
class HoeffdingDecomposition:
    """theta and the tables g[j-1][i_1, ..., i_j] indexed by atom position."""

    theta: float
    g: tuple
    law: DiscreteLaw

    @property
    def m(self):
        return len(self.g)

    def _index(self, xs):
        lookup = {v: i for i, (v, _) in enumerate(self.law.atoms)}
        try:
            return tuple(lookup[float(x)] for x in xs)
        except KeyError as exc:
            raise SupportLookupError(f"value {exc.args[0]} is not an atom of the law") from None

    def g_value(self, j, *xs):
        if len(xs) != j:
            raise GLStatError(f"g_{j} takes {j} arguments")
        return float(self.g[j - 1][self._index(xs)])

    def reconstruct(self, *xs):
        """theta + sum over all nonempty subsets S of g_|S|(x_S)."""
        total = self.theta
        for j in range(1, len(xs) + 1):
            for sub in combinations(xs, j):
                total += self.g_value(j, *sub)
        return total


def hoeffding_decompose(kernel, law, budget=DEFAULT_BUDGET):
    m = kernel.m
    vals, probs = law.values, law.probs
    s = vals.shape[0]
    if budget is not None and s ** m > budget:
        raise EnumerationBudgetError(s ** m, budget)
    full = np.empty((s,) * m)
    for idx in product(range(s), repeat=m):
        full[idx] = kernel.func(*vals[list(idx)])

    # conditional expectations E h(x_1..x_j, Y_{j+1}..Y_m), j = m..0
    cond = [None] * (m + 1)
    cond[m] = full
    for j in range(m - 1, -1, -1):
        cond[j] = cond[j + 1] @ probs
    theta = float(cond[0])

    g = []
    for j in range(1, m + 1):
        table = cond[j] - theta
        for k in range(1, j):
            for axes in combinations(range(j), k):
                shape = [s if a in axes else 1 for a in range(j)]
                table = table - g[k - 1].reshape(shape)
        table.setflags(write=False)
        g.append(table)
    return HoeffdingDecomposition(theta, tuple(g), law)


def hoeffding_projection_sum(sample, decomp, j):
    """S_jn: sum of g_j over all j-subsets of the sample."""
    if not 1 <= j <= decomp.m:
        raise GLStatError(f"projection order must lie in 1..{decomp.m}, got {j}")
    idx = decomp._index(as_sample(sample).values)
    table = decomp.g[j - 1]
    return math.fsum(float(table[c]) for c in combinations(idx, j))
