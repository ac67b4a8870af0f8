"""Exception types raised across the package."""


class GLStatError(ValueError):
    """Base class for all domain errors raised by glstat."""


class InvalidDimensionError(GLStatError):
    pass


class KernelDomainError(GLStatError):
    """Kernel evaluated outside its domain (e.g. non-positive input to the GM kernel)."""


class DegenerateKernelError(GLStatError):
    """The GM kernel denominator vanished because all inputs are equal."""


class InsufficientSampleError(GLStatError):
    pass


class EnumerationBudgetError(GLStatError):
    """Raised instead of silently approximating when C(n, m) exceeds the budget."""

    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(
            f"full enumeration needs {count} kernel evaluations, "
            f"budget is {budget}"
        )


class QuantileDomainError(GLStatError):
    pass


class SupportLookupError(GLStatError, KeyError):
    """A sample value is not an atom of the finite-support law."""

    def __str__(self):
        return ValueError.__str__(self)


class DegenerateDensityError(GLStatError):
    pass


class WindowEstimatorError(GLStatError):
    """An estimator failed on one subsampling window."""

    def __init__(self, index, cause):
        self.index = index
        self.cause = cause
        super().__init__(f"estimator failed on window {index}: {cause}")
