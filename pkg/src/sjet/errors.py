"""Exception hierarchy for the engine."""


class SjetError(Exception):
    """Base class for every error raised by the engine."""


class DeclarationError(SjetError):
    """A symbol was used outside the scope it was declared in."""


class AlgebraError(SjetError):
    """Operands live over incompatible charts or coordinate algebras."""


class ParityError(SjetError):
    """A Grassmann parity constraint was violated."""


class CoverageError(SjetError):
    """A substitution, point or morphism is missing a required assignment."""


class OrderError(SjetError):
    """Truncation orders disagree or exceed what is stored."""


class DomainError(SjetError):
    """An integer argument lies outside its allowed range."""


class CompositionError(SjetError):
    """The charts of two morphisms do not line up for composition."""


class ComparisonError(SjetError):
    """Two objects cannot be compared (different chart or parameters)."""
