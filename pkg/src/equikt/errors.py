"""Exception hierarchy shared by all modules."""


class KTError(Exception):
    """Base class for every error raised by equikt."""


class DomainError(KTError, ValueError):
    """An argument lies outside the domain of an operation."""


class RingMismatch(KTError, ValueError):
    """Operands live in incompatible rings."""


class ZeroSubstitution(DomainError):
    """Zero was substituted for an invertible (torus) variable."""


class NotDivisible(KTError, ArithmeticError):
    """An exact division was requested but does not exist."""


class UnknownVariable(KTError, KeyError):
    pass


class RaggedMatrix(KTError, ValueError):
    pass


class DegreeOverflow(KTError, RuntimeError):
    """A search exceeded its configured degree cap."""


class NotImplementedCase(KTError, NotImplementedError):
    """The requested combinatorial case is outside the implemented range."""


class FanError(KTError, ValueError):
    pass


class InvalidHom(KTError, ValueError):
    """A proposed algebra homomorphism does not respect the relations."""
