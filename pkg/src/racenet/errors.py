"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter, configuration value, or data structure failed validation.

    The message always names the offending field or quantity."""


class SingularBoundaryError(ValidationError):
    """A closed-form boundary is undefined at the requested parameters."""


class ParseError(ValueError):
    """A data file could not be parsed.  Message carries path and line number."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno


class ConfigError(ValidationError):
    """An experiment configuration file is malformed or inconsistent."""
