"""Exception types raised by the toolkit."""


class KerrGravError(Exception):
    """Base class for all toolkit errors."""


class TruncationError(KerrGravError, ValueError):
    """Fock cutoff too small to hold the state to the requested tolerance."""

    def __init__(self, message, achieved_norm):
        super().__init__(message)
        self.achieved_norm = achieved_norm


class ConvergenceError(KerrGravError, ArithmeticError):
    """A finite-difference estimate failed to converge across step sizes."""

    def __init__(self, message, estimates):
        super().__init__(message)
        self.estimates = tuple(estimates)


class HorizonError(KerrGravError, ValueError):
    """An arm radius lies at or inside the Schwarzschild radius."""


class ValidityError(KerrGravError, ValueError):
    """The linearised Kerr model is used outside its stated regime."""

    def __init__(self, message, metric):
        super().__init__(message)
        self.metric = metric


class EstimationError(KerrGravError, ArithmeticError):
    """A bound or estimator is undefined (zero information, zero slope, r_s = 0)."""


class ConfigError(KerrGravError, ValueError):
    """Malformed or unknown configuration input."""
