"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all simulator-specific failures."""


class InvalidParameterError(SimulationError, ValueError):
    """A model parameter violates its documented range."""


class InvalidStateError(SimulationError, ValueError):
    """A population state violates a structural invariant."""


class NumericInstabilityError(SimulationError, ArithmeticError):
    """An integration step left the admissible region."""


class AlignmentError(SimulationError, ValueError):
    """Two trajectories share no common (day, phase) grid point."""


class ConfigError(SimulationError, ValueError):
    """A run configuration is malformed or inconsistent."""


class SchemaError(SimulationError, ValueError):
    """A data file does not match its expected column layout."""
