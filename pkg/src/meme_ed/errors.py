"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: usage errors exit 1, ``DataError``
subclasses exit 2, ``NumericalError`` subclasses exit 3.
"""


class MemeError(Exception):
    """Base class for all pipeline errors."""


class DataError(MemeError):
    """Invalid or inconsistent input data or configuration."""


class NumericalError(MemeError):
    """Numerical failure (non-finite values, divergence)."""
