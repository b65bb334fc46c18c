"""Exception hierarchy shared by every module."""


class WelldocError(Exception):
    """Base class for all errors raised by this package."""


class InputError(WelldocError, ValueError):
    """Malformed input: bad letters, shapes, unparseable morphisms."""


class DomainError(WelldocError, ValueError):
    """Well-formed input outside an operation's domain."""


class PreconditionError(DomainError):
    """A documented precondition of the operation does not hold."""


class NotInvertibleError(DomainError):
    """Matrix is singular modulo m; ``gcd`` is the offending common factor."""

    def __init__(self, message, gcd):
        super().__init__(message)
        self.gcd = gcd


class UnboundedReturnsError(DomainError):
    """The return words to a letter do not close up under expansion.

    Raised when the set of concrete return words looks infinite (for
    instance ``0->010, 1->11``), so no finite certified list exists.
    """


class InternalError(WelldocError, RuntimeError):
    """An invariant that the theory guarantees was violated."""
