"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical/regime problems with 3.
"""


class LsimError(Exception):
    """Base class for all package errors."""


class ConfigError(LsimError):
    """Bad configuration: unknown key, unparseable value, step-size guard."""


class RegimeError(LsimError):
    """Inputs outside the validity regime of the requested operation."""


class InputStateError(LsimError):
    """A density matrix failed validation on entry to an operation."""


class GridResolutionError(LsimError):
    """A frequency/time grid is too coarse for the requested derivative."""


class PulseDetectionError(LsimError):
    """No dominant pulse found in a series handed to delay extraction."""


class DecayNotFoundError(LsimError):
    """A channel never reached the 1/e level within the supplied series."""


class FitError(LsimError):
    """Degenerate data handed to a least-squares fit."""


class SchemaError(LsimError):
    """A required named channel is missing from a time series."""


class RenderError(LsimError):
    """Nothing to draw."""
