"""Exceptions raised by the verifier library."""


class VerifierError(Exception):
    """Base class for all verifier errors."""


class DomainMismatchError(VerifierError):
    """A value is outside the active quantale's carrier, or two quantales are mixed."""


class UnsupportedOperationError(VerifierError):
    """The quantale cannot represent the result of the requested operation."""


class CompositionTypeError(VerifierError):
    """Source/target types or matrix shapes do not line up."""


class DivergenceError(VerifierError):
    """A stabilizing iteration did not reach a fixpoint within its bound."""


class ResolutionError(VerifierError):
    """A program refers to an atom or predicate the environment does not define."""


class InvalidTripleError(VerifierError):
    """A Hoare triple used as an input does not hold."""


class DocumentError(VerifierError):
    """A verification document is malformed; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message
