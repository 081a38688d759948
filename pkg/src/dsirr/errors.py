"""Exception types.  Every numerical failure derives from NumericError."""

from __future__ import annotations


class NumericError(RuntimeError):
    """A computation could not deliver its stated accuracy or precondition."""


class QuadratureError(NumericError):
    def __init__(self, message: str, error_estimate: float = float("nan")):
        super().__init__(message)
        self.error_estimate = error_estimate


class ExtentError(NumericError):
    """Integration range too short to reach the requested tail mass."""

    def __init__(self, message: str, tail_mass: float):
        super().__init__(message)
        self.tail_mass = tail_mass


class NonUnimodalError(NumericError):
    pass


class DegenerateFitError(NumericError):
    pass
