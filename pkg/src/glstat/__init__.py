"""GL-statistics of dependent data.

U-statistics and U-quantiles over all m-subsets, GL-statistic functionals,
the generalized median estimator of the Pareto tail index and blockwise
subsampling confidence intervals.
"""

__version__ = "0.1.0"

from ._backend import NAME as backend
from ._errors import (
    DegenerateDensityError,
    DegenerateKernelError,
    EnumerationBudgetError,
    GLStatError,
    InsufficientSampleError,
    InvalidDimensionError,
    KernelDomainError,
    QuantileDomainError,
    SupportLookupError,
    WindowEstimatorError,
)
from .empirical_u import (
    DiscreteLaw,
    EmpiricalUDist,
    HoeffdingDecomposition,
    Sample,
    build_empirical_udist,
    h_n,
    h_n_inverse,
    hoeffding_decompose,
    hoeffding_projection_sum,
    u_quantile,
    u_statistic,
)
from .gl_statistics import GLSpec, InfluenceKernelA, WeightFunction, gl_statistic, influence_kernel_a, sigma_squared_iid
from .gm_pareto import GMConfig, coverage_curve, gm_estimate, hill_estimate, ml_estimate
from .kernels import (
    Kernel,
    KernelLaw,
    gm_pareto_kernel,
    gm_pareto_kernel_law,
    hodges_lehmann_kernel,
    identity_kernel,
    kernel_from_name,
    mean_of_m_kernel,
)
from .processes import ParetoParams, ProcessConfig, chi_square_median, generate, pareto_cdf, pareto_inverse
from .subsampling import SubsampleResult, SubsamplingConfig, confidence_interval, l_n_quantile, subsample_estimates
