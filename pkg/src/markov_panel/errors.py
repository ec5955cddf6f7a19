"""Exception types shared across the package.

Input/format problems and domain problems are kept distinct so callers
(notably the command line front end) can map them to different exit codes.
"""

__all__ = [
    "MarkovPanelError",
    "ConstraintViolation",
    "PanelFormatError",
    "UnknownSymbol",
    "RaggedRows",
    "EmptyPanel",
    "DegenerateCounts",
    "BoundaryTheta",
    "NonFiniteStart",
    "EmptyTrace",
    "EmptySample",
    "Unreachable",
    "DegenerateBlock",
]


class MarkovPanelError(Exception):
    """Base class for all package-specific errors."""


class ConstraintViolation(MarkovPanelError, ValueError):
    """A parameter vector or matrix violates a structural constraint."""


class PanelFormatError(MarkovPanelError, ValueError):
    """Base class for malformed panel input (text grid or CSV)."""


class UnknownSymbol(PanelFormatError):
    """A panel cell holds a symbol outside the state alphabet."""

    def __init__(self, symbol, line, column):
        self.symbol = symbol
        self.line = line
        self.column = column
        super().__init__(f"unknown state symbol {symbol!r} at line {line}, token {column}")


class RaggedRows(PanelFormatError):
    """Panel rows do not all have the same number of parcels."""


class EmptyPanel(PanelFormatError):
    """Panel input contains no usable rows."""


class DegenerateCounts(MarkovPanelError):
    """A maximum-likelihood denominator is zero, leaving components unidentifiable.

    Attributes
    ----------
    unidentifiable : tuple of str
        Names of the parameters that cannot be estimated (e.g. ``("theta3", "theta4")``).
    partial_theta : numpy.ndarray or None
        Estimates for the identifiable components, ``nan`` elsewhere.
    """

    def __init__(self, message, unidentifiable=(), partial_theta=None):
        super().__init__(message)
        self.unidentifiable = tuple(unidentifiable)
        self.partial_theta = partial_theta


class BoundaryTheta(MarkovPanelError, ValueError):
    """The Jeffreys prior is evaluated on the boundary of the parameter set."""


class NonFiniteStart(MarkovPanelError, ValueError):
    """The sampler was started at a point where the target is not finite."""


class EmptyTrace(MarkovPanelError, ValueError):
    """A posterior summary was requested from a trace with no samples."""


class EmptySample(MarkovPanelError, ValueError):
    """A duration sample is empty."""


class Unreachable(MarkovPanelError):
    """The target state is not reached with probability one from the source.

    Attributes
    ----------
    absorption_prob : float or None
        Probability of ever reaching the target from the source, when computable.
    """

    def __init__(self, message, absorption_prob=None):
        super().__init__(message)
        self.absorption_prob = absorption_prob


class DegenerateBlock(MarkovPanelError):
    """The leading eigenvalue of the transient block is not simple, so the
    quasi-stationary distribution is not uniquely defined."""
