"""Error taxonomy shared by the library and the command line.

Three families, matching the CLI exit codes: bad configuration (2),
numerical failure (3), input/output failure (4).
"""


class QuasispecError(Exception):
    """Base class for all package errors."""


class ConfigError(QuasispecError):
    """Invalid parameters, malformed state strings, degenerate grids."""

    exit_code = 2


class NumericalError(QuasispecError):
    """A computation could not be carried out or trusted."""

    exit_code = 3


class EigensolverError(NumericalError):
    """The tridiagonal or dense eigensolver failed to converge."""


class CapExceededError(NumericalError):
    """A configured size cap (tensor dimension, atom count, degree) was hit."""


class LightConeError(NumericalError):
    """Truncation too small for the requested evolution time."""


class OutputError(QuasispecError):
    """Output location missing or unwritable."""

    exit_code = 4
