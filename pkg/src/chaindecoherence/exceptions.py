class ConfigError(ValueError):
    """Invalid parameter value.

    ``field`` names the offending parameter so front ends can map it back
    to whatever the user typed (a CLI flag, a keyword argument).
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DegenerateModeError(ValueError):
    """Both components of a mode's Bogoliubov vector vanish, so its angle is undefined."""


class PositivityError(ValueError):
    """An evolved two-qubit state has a negative eigenvalue beyond tolerance."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ConsistencyError(RuntimeError):
    """A per-mode overlap came out negative beyond rounding; points to a branch or parameter bug."""
