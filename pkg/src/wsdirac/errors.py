"""Exception hierarchy.

Every failure raised by the library derives from :class:`WsDiracError`.
Two subclasses group the errors for the command line: configuration
problems (:class:`ConfigError`) map to exit status 2, numerical failures
(:class:`NumericError`) map to exit status 3.
"""

from __future__ import annotations


class WsDiracError(Exception):
    """Base class for all library errors."""


class ConfigError(WsDiracError):
    """Invalid input supplied by the caller."""


class NumericError(WsDiracError, ArithmeticError):
    """A computation could not produce a meaningful result."""


# -- configuration ---------------------------------------------------------


class ParameterError(ConfigError, ValueError):
    """A parameter violates its documented bound."""


class ParseError(ConfigError):
    """The configuration document is not well-formed JSON."""


class ValidationError(ConfigError, ValueError):
    """A configuration field failed validation.

    Parameters
    ----------
    pointer : str
        JSON pointer to the offending field, e.g. ``/potential/q``.
    message : str
        Human-readable description of the violated bound.
    """

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        self.message = message
        super().__init__(f"{pointer or '/'}: {message}")


# -- numerical -------------------------------------------------------------


class NegativeDiscriminant(NumericError):
    """c8 or c9 is negative, so the NU square roots are not real."""


class DomainError(NumericError, ValueError):
    """An argument lies outside the domain of a closed form."""


class PoleError(DomainError):
    """Evaluation point sits on the pole of a q < 0 potential."""


class SingularSystem(NumericError):
    """The Pekeris matching system cannot be solved (q = -1)."""


class NoRealRoots(NumericError):
    """The quadratic energy equation has a negative discriminant."""


class ImaginaryXi(NumericError):
    """The radicand defining xi is negative."""


class NoValidRoot(NumericError):
    """Real roots exist but none yields a positive epsilon."""


class NoBoundState(NumericError):
    """No bound state exists for the requested quantum numbers."""


class ComplexEpsilon(NumericError):
    """The radicand defining epsilon is negative at this energy."""


class PoleInC(NumericError):
    """A denominator Pochhammer symbol of a hypergeometric sum vanishes."""


class SpinSingularity(NumericError):
    """The lower-component denominator mc^2 + E - A vanishes."""


class NonConvergence(NumericError):
    """Adaptive quadrature missed its tolerance."""


class SeriesDivergence(NumericError):
    """An infinite series failed its truncation test."""


class UnsupportedN(NumericError):
    """The requested radial quantum number is outside the method's reach."""


class NoSignChange(NumericError):
    """The shooting mismatch does not change sign inside the bracket."""


class StiffFailure(NumericError):
    """The adaptive integrator could not keep its step size above zero."""
