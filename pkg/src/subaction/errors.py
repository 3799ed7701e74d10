"""Exception types raised across the package."""


class SubactionError(Exception):
    """Base class for all package errors."""


class DomainError(SubactionError, ValueError):
    """A point lies outside the domain of a function."""


class ShapeError(SubactionError, ValueError):
    """Grid functions with mismatched resolution or mode were combined."""


class ParameterError(SubactionError, ValueError):
    """An argument is out of its admissible range."""


class CatalogError(SubactionError, KeyError):
    """Unknown potential name."""


class ConstructionError(SubactionError, ValueError):
    """A dynamical system or potential could not be built from its inputs."""


class CoverageError(SubactionError, RuntimeError):
    """No inverse branch is admissible at some grid point."""


class NumericError(SubactionError, FloatingPointError):
    """A non-finite value appeared during an iteration or a series sum."""


class UnsupportedParameterError(SubactionError, ValueError):
    """A closed form was requested outside its validity window."""
