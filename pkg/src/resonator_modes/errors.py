"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid physical or numerical parameter."""


class TruncationError(ParameterError):
    """A profile is not negligible at the edge of its grid."""


class DataError(ValueError):
    """Non-finite input data."""


class NumericalResolutionError(RuntimeError):
    """A numerical result misses its declared tolerance."""


class ConvergenceError(NumericalResolutionError):
    """Step refinement did not converge."""


class OrthogonalityError(ParameterError):
    """Pump envelopes that should be orthogonal are not."""
