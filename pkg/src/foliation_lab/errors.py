"""Exception types raised across the package."""


class FoliationLabError(Exception):
    pass


class DomainError(FoliationLabError, ValueError):
    """Argument outside the domain of a closed-form profile."""


class ConfigError(FoliationLabError, ValueError):
    """Invalid grid or run configuration."""


class OperandError(FoliationLabError, ValueError):
    """Operands live on incompatible grids."""


class ParameterError(FoliationLabError, ValueError):
    """Invalid model parameter (codimension, dimension, ...)."""
