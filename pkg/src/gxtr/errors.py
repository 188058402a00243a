"""Exception taxonomy shared by every module.

The CLI maps these onto exit codes: validation-type failures exit 2,
numerical failures exit 3.
"""


class GxtrError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GxtrError, ValueError):
    """A parameter violates its documented domain."""


class ConfigError(ParameterError):
    """A config file or CLI invocation is malformed."""


class ModelError(GxtrError, ValueError):
    """A model callable misbehaves (non-finite, asymmetric, wrong normalization)."""


class SizeError(GxtrError, ValueError):
    """A grid, window, or subregion has an unusable extent."""


class NumericalError(GxtrError, ArithmeticError):
    """A numerical routine failed (factorization, overflow, non-convergent quadrature)."""


class UnresolvedConstantError(ParameterError):
    """Evaluation needs a constant the provider cannot resolve.

    ``constant`` carries a printable name of the missing constant.
    """

    def __init__(self, constant: str):
        self.constant = constant
        super().__init__(f"unresolved constant: {constant}; "
                         "inject an estimate before evaluating")


class ReportIOError(GxtrError, OSError):
    """An I/O failure while writing a report; message names the path."""


class ConfigurationWarning(UserWarning):
    """A configuration is usable but statistically dubious."""
