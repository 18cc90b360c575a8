"""Exception hierarchy."""


class SwDecayError(Exception):
    """Base class for all package errors."""


class ConvergenceError(SwDecayError, RuntimeError):
    """A numerical procedure hit its refinement limit."""


class QuadratureNotConverged(ConvergenceError):
    pass


class GridNotConverged(ConvergenceError):
    pass


class TailNotConverged(ConvergenceError):
    pass


class StepSizeUnderflow(ConvergenceError):
    pass


class TruncationExceeded(ConvergenceError):
    pass


class BranchDegenerate(SwDecayError, ValueError):
    """Eigenvector coefficients requested too close to a branch point."""


class AnalysisError(SwDecayError, ValueError):
    pass


class InsufficientData(AnalysisError):
    pass


class NonPositiveValues(AnalysisError):
    pass


class TooFewPeaks(AnalysisError):
    pass
