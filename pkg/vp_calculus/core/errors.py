"""
Error Types

This module defines the exceptions raised by the symbolic and numeric layers.
All of them derive from ValueError so callers that only care about bad input
can keep catching ValueError.
"""

from typing import Iterable, Optional


class VPCalculusError(ValueError):
    """
    Base class for every error raised by vp_calculus.
    """


class SingularEvaluation(VPCalculusError):
    """A pole or log argument vanished at a pointwise evaluation."""


class DeltaNotEvaluable(VPCalculusError):
    """A delta factor was left in an expression that must be evaluated pointwise."""


class IdenticalCenters(VPCalculusError):
    """Two poles handed to a pair reduction share the same center."""


class StepError(VPCalculusError):
    """
    Error attached to one step of a repeated integration.
    """

    def __init__(self, message: str, step: Optional[int] = None):
        self.message = message
        self.step = step
        if step is not None:
            message = f"{message} (integration step {step})"
        super().__init__(message)

    def at_step(self, step: int) -> "StepError":
        """
        Return a copy of this error tagged with a step index.

        Args:
            step (int): Index of the integration step

        Returns:
            StepError: The tagged error
        """
        return type(self)(self.message, step)


class PoleAtEndpoint(StepError):
    """A pole center coincides structurally with an integration limit."""


class DeltaAtEndpoint(StepError):
    """A delta support coincides structurally with an integration limit."""


class MissingDerivatives(VPCalculusError):
    """A test function cannot supply the derivative order that was requested."""


class NotSeparable(VPCalculusError):
    """A weight does not factor into an x-part and a pole-variable part."""


class PoleOutsideInterval(VPCalculusError):
    """A principal-value pole lies outside the open integration interval."""


class NonConvergent(VPCalculusError):
    """A quadrature or extrapolation sequence failed its convergence test."""


class DomainError(VPCalculusError):
    """A special function was called outside its real domain."""


class ThresholdUndefined(VPCalculusError):
    """A Heaviside guard was evaluated exactly at its jump."""


class UnsupportedIntegrand(VPCalculusError):
    """The integrand is outside what the integration engine can rewrite."""


class SpecError(VPCalculusError):
    """An integration spec or command argument is malformed."""


class ParseError(VPCalculusError):
    """
    Syntax error in the expression language.
    """

    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f"; expected one of: {', '.join(self.expected)}"
        super().__init__(detail)
