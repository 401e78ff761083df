"""Exception hierarchy shared by all psynorms modules.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
NumericalError -> 4.
"""


class PsynormsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PsynormsError):
    """Invalid or incomplete run configuration."""


class DataError(PsynormsError):
    """Malformed or inconsistent input data (reports file and line where known)."""


class NumericalError(PsynormsError):
    """A linear-algebra or numeric failure (rank deficiency, non-finite values)."""
