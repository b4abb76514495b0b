"""Exception types shared across the package."""


class GardnerError(Exception):
    """Base class for all package errors."""


class RegimeError(GardnerError, ValueError):
    """Parameters violate the validity regime of the requested solution family."""


class SingularPointError(GardnerError, ValueError):
    """Evaluation requested at (or too close to) a pole or branch point."""


class SingularSystemError(GardnerError, ArithmeticError):
    """A reconstruction linear system is numerically singular."""

    def __init__(self, message: str, condition: float = float("inf")):
        super().__init__(message)
        self.condition = condition


class NonFiniteStateError(GardnerError, ArithmeticError):
    """Time integration produced a non-finite state."""

    def __init__(self, message: str, last_good_time: float):
        super().__init__(message)
        self.last_good_time = last_good_time


class FrontWindowError(GardnerError, ValueError):
    """The tracked front (or the solitons) never appear inside the sampled window."""
