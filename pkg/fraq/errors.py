"""Exceptions raised by fraq."""


class FraqError(Exception):
    """Base class for all fraq errors."""


class ParameterError(FraqError, ValueError):
    """An argument is outside its admissible range."""


class SingularParameterError(ParameterError):
    """A parameter value makes the model itself degenerate (e.g. m = 1/2)."""


class SingularSystemError(FraqError, RuntimeError):
    """The implicit block system could not be factorised or solved."""


class SequencingError(FraqError, RuntimeError):
    """A history state was used out of time order."""


class ConfigError(FraqError, ValueError):
    """A configuration file or override could not be parsed."""
