"""Terminological knowledge base engine.

Three linked kinds of entities — terms, concepts, texts — with the
term-concept designation reified as a viewpoint-scoped link anchored into
textual units. Concepts are normalized frames organized by est-un inheritance;
synonymy and polysemy are computed from the links, never stored.
"""

from . import corpus, inference, store, views
from .errors import (
    CycleWouldForm,
    DuplicateAttributeKey,
    DuplicateName,
    DuplicateSurface,
    EmptyDocument,
    EmptyName,
    EmptyQuery,
    EmptySurface,
    IntegrityError,
    LabelInUse,
    ParseError,
    SpanMismatch,
    SpanOutOfBounds,
    TkbError,
    UnknownConcept,
    UnknownEntity,
    UnknownParent,
    UnknownTerm,
    UnknownViewpoint,
    UnregisteredTypeWithoutDefinition,
    VersionUnsupported,
    ViewpointConflict,
)
from .kb import KnowledgeBase

__version__ = "0.1.0"

__all__ = [
    "KnowledgeBase",
    "corpus",
    "inference",
    "store",
    "views",
    "TkbError",
    "UnknownEntity",
    "UnknownTerm",
    "UnknownConcept",
    "UnknownViewpoint",
    "UnknownParent",
    "EmptySurface",
    "EmptyName",
    "EmptyQuery",
    "EmptyDocument",
    "DuplicateSurface",
    "DuplicateName",
    "DuplicateAttributeKey",
    "CycleWouldForm",
    "ViewpointConflict",
    "SpanOutOfBounds",
    "SpanMismatch",
    "LabelInUse",
    "UnregisteredTypeWithoutDefinition",
    "ParseError",
    "VersionUnsupported",
    "IntegrityError",
    "__version__",
]
