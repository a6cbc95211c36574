"""Exception types raised across the package."""


class SizingError(Exception):
    """Base class for all package errors."""


class MalformedCycle(SizingError, ValueError):
    """Drive-cycle data violates the sampling or sign invariants."""


class InvalidControl(SizingError, ValueError):
    """A control input (e.g. the axle torque split) is outside its domain."""


class InfeasibleOperatingPoint(SizingError, ValueError):
    """Requested motor torque exceeds the envelope at the given speed."""


class NumericalDivergence(SizingError, ArithmeticError):
    """A time integration produced non-finite values."""


class InvalidStart(SizingError, ValueError):
    """The optimizer start point has a non-finite objective."""


class ConfigError(SizingError, ValueError):
    """A configuration or data file failed validation."""
