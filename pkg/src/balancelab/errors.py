"""Exception hierarchy shared across the toolkit."""


class BalanceLabError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(BalanceLabError):
    """Invalid configuration value; ``field`` names the offending key."""

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class DataError(BalanceLabError):
    """Input data violates an operation's contract (sizing, degeneracy)."""


class SchemaError(BalanceLabError):
    """Column/covariate naming mismatch between inputs."""


class CollinearityError(BalanceLabError):
    """Design matrix is rank deficient; ``columns`` lists dependent column indices."""

    def __init__(self, columns, message=None):
        self.columns = list(columns)
        super().__init__(message or f"rank-deficient design, dependent columns: {self.columns}")
