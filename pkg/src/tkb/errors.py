"""Domain errors raised by knowledge-base operations.

Every error carries the ids of the entities involved so callers (CLI, HTTP
service) can surface them; the error code exposed on the wire is the class
name.
"""

from __future__ import annotations


class TkbError(Exception):
    """Base class for knowledge-base domain errors."""

    def __init__(self, message: str, entities: tuple | list = ()):
        super().__init__(message)
        self.entities: list[str] = [str(e) for e in entities]

    @property
    def code(self) -> str:
        return type(self).__name__


class UnknownEntity(TkbError):
    pass


class UnknownTerm(UnknownEntity):
    pass


class UnknownConcept(UnknownEntity):
    pass


class UnknownViewpoint(UnknownEntity):
    pass


class UnknownParent(UnknownEntity):
    pass


class EmptySurface(TkbError):
    pass


class EmptyName(TkbError):
    pass


class DuplicateSurface(TkbError):
    pass


class DuplicateName(TkbError):
    pass


class DuplicateAttributeKey(TkbError):
    pass


class CycleWouldForm(TkbError):
    pass


class ViewpointConflict(TkbError):
    """The term already designates a different concept under this viewpoint."""

    def __init__(self, message, entities=(), existing_concept: str | None = None):
        super().__init__(message, entities)
        self.existing_concept = existing_concept


class SpanOutOfBounds(TkbError):
    pass


class SpanMismatch(TkbError):
    pass


class LabelInUse(TkbError):
    pass


class UnregisteredTypeWithoutDefinition(TkbError):
    pass


class EmptyDocument(TkbError):
    pass


class EmptyQuery(TkbError):
    pass


class ParseError(TkbError):
    pass


class VersionUnsupported(TkbError):
    pass


class IntegrityError(TkbError):
    """A persisted file violates a structural invariant; names the rule."""

    def __init__(self, rule: str, message: str, entities=()):
        super().__init__(message, entities)
        self.rule = rule

    def __str__(self):
        return f"{self.rule}: {super().__str__()}"
