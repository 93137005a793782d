"""Exception types shared across the workbench.

Class names double as the error names printed by the CLI, so they use
bare UpperCamelCase nouns instead of the usual ``*Error`` suffix.
"""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class LangError(WorkbenchError):
    """Evaluation of a concatenative program failed.

    ``position`` is the index of the offending top-level token, when
    known.  ``partial_trace`` holds the stack states observed before the
    failure; it is filled in by :func:`catena.lang.trace`.
    """

    def __init__(self, message: str = "", position: int | None = None):
        super().__init__(message)
        self.position = position
        self.partial_trace = None


class StackUnderflow(LangError):
    pass


class StackOverflow(LangError):
    pass


class UnknownWord(LangError):
    pass


class UnbalancedBracket(LangError):
    pass


class TypeMismatch(LangError):
    pass


class MalformedDefinition(LangError):
    pass


class DuplicateName(LangError):
    pass


class ExtractionError(WorkbenchError):
    """State-space extraction was asked something it cannot represent."""


class CombinatorExcluded(ExtractionError):
    pass


class EmptyGenerators(ExtractionError):
    pass


class LengthMismatch(ExtractionError):
    pass


class AlgebraError(WorkbenchError):
    """A semigroupoid-level operation received incompatible input."""


class NotComposable(AlgebraError):
    pass


class TableIncomplete(AlgebraError):
    pass


class InconsistentSemantics(AlgebraError):
    pass


class IncompatiblePartition(AlgebraError):
    def __init__(self, message: str = "", label: str | None = None,
                 block: tuple[int, ...] | None = None):
        super().__init__(message)
        self.label = label
        self.block = block


class NotSurjective(AlgebraError):
    pass


class NotAMorphism(AlgebraError):
    pass


class SchemaError(WorkbenchError):
    """A JSON document does not match the interchange schema."""
