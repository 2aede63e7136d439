"""Exception taxonomy shared across the package.

Callers can distinguish bad parameters (caller error), inputs that are
syntactically fine but outside what the implementation can handle
(capability), inconsistent data, and explicit search/size caps.
"""

from __future__ import annotations


class HFreeError(Exception):
    """Base class for all package errors."""


class ParameterError(HFreeError, ValueError):
    """A parameter violates a documented precondition."""


class DataError(HFreeError, ValueError):
    """Input data is inconsistent (missing birthtimes, duplicate values, ...)."""


class CapabilityError(HFreeError, RuntimeError):
    """The request is valid but exceeds what this implementation supports."""


class NumericRangeError(HFreeError, ArithmeticError):
    """A closed-form evaluation left the representable floating range."""


class NodeCapExceeded(HFreeError, RuntimeError):
    """A bounded search hit its node cap.

    ``partial`` carries whatever structure was built before the cap hit, so
    callers that asked for a capped exploration can still inspect it.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
