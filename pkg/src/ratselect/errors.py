class ConfigurationError(ValueError):
    """Raised when a config file, metric range table, or network architecture is invalid."""
