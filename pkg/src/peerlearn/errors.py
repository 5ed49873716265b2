"""Exception types shared across the package."""


class PeerLearnError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PeerLearnError, ValueError):
    """A configuration value or builder parameter is out of range."""


class InvalidInstanceError(PeerLearnError, ValueError):
    """A problem instance violates its invariants (sizes, confidences, ...)."""


class ConnectivityError(PeerLearnError, ValueError):
    """The graph is not a single connected component.

    ``component`` holds the agent indices of one isolated component.
    """

    def __init__(self, message: str, component=None):
        super().__init__(message)
        self.component = list(component) if component is not None else None


class ProtocolViolationError(PeerLearnError, RuntimeError):
    """A protocol step was asked to act on a non-edge or unknown agent."""


class ShapeError(PeerLearnError, ValueError):
    """Array arguments have inconsistent dimensions."""


class NumericalError(PeerLearnError, RuntimeError):
    """A linear solve or iterative method failed its residual check."""
