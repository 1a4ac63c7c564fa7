class ParameterError(ValueError):
    """Invalid argument or configuration value.

    ``key`` names the offending parameter or config key when known.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class SizeError(ParameterError):
    """Instance too large for exhaustive enumeration."""
