"""Exception hierarchy shared by all modules."""


class KeplerError(Exception):
    """Base class for every error raised by o1kepler."""


class ParameterError(KeplerError, ValueError):
    """A parameter lies outside its allowed range."""


class DomainError(KeplerError, ValueError):
    """An evaluation point lies outside the function's domain."""


class InvariantError(KeplerError, ValueError):
    """A domain-type invariant (e.g. the parity constraint) is violated."""


class NumericalError(KeplerError, ArithmeticError):
    """A numerical routine failed (eigen-decomposition, overflow, ...)."""


class AccuracyError(NumericalError):
    """A computation cannot meet its accuracy contract as configured."""


class BoxSizeError(AccuracyError):
    """The discretization box holds fewer bound states than requested."""


class ResourceError(KeplerError, RuntimeError):
    """A configured resource budget (e.g. Fock basis size) would be exceeded."""


class GuardError(KeplerError, ValueError):
    """The guard subspace of a truncated Fock computation is empty."""


class AccuracyWarning(UserWarning):
    """Extrapolation did not converge to the requested accuracy."""
