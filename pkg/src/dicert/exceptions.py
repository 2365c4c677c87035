"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Subsystem dimensions are inconsistent with an operator or with each other."""


class NotHermitianError(ValueError):
    pass


class InvalidStateError(ValueError):
    """Matrix is not a valid density matrix (trace, Hermiticity or positivity)."""


class PPTInputError(ValueError):
    """No witness can be built from a state with positive partial transpose."""


class SignalingError(RuntimeError):
    """A probability table violates no-signaling; indicates a broken engine."""
