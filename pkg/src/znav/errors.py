"""Exception hierarchy for the navigation engine."""


class NavigationError(Exception):
    """Base class for all engine errors."""


class PoleSingularity(NavigationError):
    """Chart-based operation requested inside the polar guard band."""


class NotMild(NavigationError):
    """Wind norm reaches or exceeds the unit own-speed somewhere.

    Carries the offending point and norm when known.
    """

    def __init__(self, message: str, point=None, norm: float | None = None):
        super().__init__(message)
        self.point = point
        self.norm = norm


class DegenerateHessian(NavigationError):
    """Velocity Hessian of the Lagrangian is numerically singular."""


class ZeroRelativeVelocity(NavigationError):
    """Heading undefined: velocity relative to the medium vanishes."""


class ZeroVelocity(NavigationError):
    """Course undefined: resulting velocity vanishes."""


class StepFailure(NavigationError):
    """Adaptive step size underflowed; carries the last good state."""

    def __init__(self, message: str, t: float, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


class EmptyData(NavigationError):
    """Plot data insufficient for the requested figure kind."""
