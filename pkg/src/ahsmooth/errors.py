"""Exception hierarchy shared by all modules."""


class AHError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AHError, ValueError):
    """An argument lies outside the domain of an operation."""


class DimensionError(DomainError):
    """Ambient ranks or matrix shapes do not agree."""


class NoSectionError(DomainError):
    """The weight vector has non-coprime entries, so no integer section exists."""


class CaseMismatchError(DomainError):
    """A weight vector does not have the sign pattern of the requested case."""


class SectionMismatchError(DomainError):
    """A supplied section does not satisfy s.F = 1."""


class IncompleteIncidenceError(DomainError):
    """Incidence or multiplicity data needed by an operation was not declared."""


class EvaluationDomainError(DomainError):
    """An evaluation direction lies outside the dual of the tail cone."""


class NotPDivisorError(DomainError):
    """A polyhedral divisor on a curve fails semi-ampleness or bigness."""


class MinimalityError(DomainError):
    """A polyhedral divisor on a blow-up is the total transform of one downstairs."""


class PointNotOnVarietyError(DomainError):
    """A point does not lie on the zero locus of the given polynomials."""


class DocumentError(AHError, ValueError):
    """A p-divisor document could not be parsed."""
