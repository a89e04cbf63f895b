"""Exception types raised across the package."""


class ClusterDistError(Exception):
    """Base class for all package errors."""


class DimensionError(ClusterDistError, ValueError):
    """Operands act on different numbers of qubits, or an index is out of range."""


class LimitError(ClusterDistError, ValueError):
    """A qubit count exceeds the configured symbolic or dense limit."""


class NotHermitianError(ClusterDistError, ValueError):
    pass


class NotPSDError(ClusterDistError, ValueError):
    """A matrix has an eigenvalue below the negativity tolerance."""


class NotDensityError(ClusterDistError, ValueError):
    """A matrix is not a valid density operator (trace, hermiticity, positivity)."""


class ConvergenceError(ClusterDistError, RuntimeError):
    pass


class GraphError(ClusterDistError, ValueError):
    """Malformed graph: self-loop, duplicate edge, or vertex out of range."""


class ErrorSpecError(ClusterDistError, ValueError):
    """Invalid error specification (bad letter, index, non-unitary, non-CPTP)."""


class MetricError(ClusterDistError, ValueError):
    pass
