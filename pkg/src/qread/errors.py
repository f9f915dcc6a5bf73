"""Exception types shared across the package.

Invalid user input raises ``ValueError`` (or a subclass below); numerical
failures raise ``NumericalError``. The CLI maps the former to exit code 2
and the latter to exit code 3.
"""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or lost required accuracy."""


class OracleAccuracyError(NumericalError):
    """The Fock-space oracle could not reach its accuracy budget."""


class CutoffTooSmallError(ValueError):
    """The requested Fock cutoff cannot hold the state within the tail budget."""


class ModelRegimeError(ValueError):
    """Inputs fall outside the regime where the receiver model applies."""
