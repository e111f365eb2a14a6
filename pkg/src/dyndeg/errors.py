"""Exception types shared across the toolkit."""


class AdmissibilityError(ValueError):
    """The Gaussian parameter has a real power, so the construction degenerates."""


class DegenerateMatrix(ValueError):
    """An exponent matrix with zero determinant defines no dominant map."""


class PrecisionError(ArithmeticError):
    """The working-precision cap was reached before the request could be certified."""


class ReductionFailure(ArithmeticError):
    """Internal consistency check failed while removing common polynomial factors."""


class ResourceExhausted(RuntimeError):
    """A configured degree or term budget was exceeded."""


class OracleInconsistency(RuntimeError):
    """Independent randomized trials disagreed; indicates a non-generic sample or a bug."""


class CheckFailed(RuntimeError):
    """A named geometric identity check did not hold."""


class InconsistencyError(RuntimeError):
    """Two independent evaluation routes produced disjoint enclosures."""
