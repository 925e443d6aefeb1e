"""Entity records of the knowledge base.

Records are immutable values: mutations replace whole records in the store,
so a reader holding a record never observes a partial update. A term carries
only linguistic information; everything conceptual lives on Concept, and the
designation of a concept by a term is reified as TermConceptLink, scoped by
viewpoints and anchored into text units by usages.
"""

from __future__ import annotations

from dataclasses import dataclass

TERM_SOURCES = ("corpus", "interview")
DECOMPOSITION_ROLES = ("head", "expansion")


def normalize_surface(surface: str) -> str:
    """Identity form of a syntagm: case-folded, whitespace collapsed, trimmed."""
    return " ".join(surface.casefold().split())


def collapse_spaces(s: str) -> str:
    """Display form: whitespace collapsed and trimmed, casing preserved."""
    return " ".join(s.split())


@dataclass(frozen=True)
class DecompositionPart:
    role: str  # "head" | "expansion"
    term: str


@dataclass(frozen=True)
class Term:
    id: str
    surface: str  # display form (collapsed); uniqueness uses normalize_surface
    language: str
    grammatical_category: str = ""
    gender: str | None = None
    number: str | None = None
    form_variants: tuple[str, ...] = ()
    decomposition: tuple[DecompositionPart, ...] | None = None
    source: str = "corpus"

    @property
    def normalized_surface(self) -> str:
        return normalize_surface(self.surface)


@dataclass(frozen=True)
class AssertionalRelation:
    relation_type: str
    target: str  # concept id
    definition_text: str = ""


@dataclass(frozen=True)
class Concept:
    id: str
    label: str  # term id, the "terme-vedette"
    description: str = ""
    attributes: tuple[tuple[str, str], ...] = ()  # ordered (key, value) pairs
    assertional_relations: tuple[AssertionalRelation, ...] = ()
    parents: frozenset[str] = frozenset()

    def attribute_map(self) -> dict[str, str]:
        return dict(self.attributes)


@dataclass(frozen=True)
class Viewpoint:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class UsageAnchor:
    unit: str  # text unit id
    start: int
    end: int


@dataclass(frozen=True)
class TermConceptLink:
    id: str
    term: str
    concept: str
    viewpoints: frozenset[str]
    usages: frozenset[UsageAnchor] = frozenset()


@dataclass(frozen=True)
class TextUnit:
    id: str
    document: str
    ordinal: int
    content: str


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    source_note: str
    text: str
    units: tuple[str, ...] = ()


@dataclass(frozen=True)
class Occurrence:
    """One whole-word match of a term's surface or variant in a text unit."""

    term: str
    text_unit: str
    start: int
    end: int
    matched_form: str


@dataclass(frozen=True)
class Context:
    """Keyword-in-context excerpt around a usage anchor."""

    link: str
    text_unit: str
    start: int
    end: int
    left: str
    match: str
    right: str


@dataclass(frozen=True)
class Annotation:
    start: int
    end: int
    term: str
    links: tuple[str, ...]  # links whose usages cover this span


@dataclass(frozen=True)
class HighlightedUnit:
    unit: str
    content: str
    annotations: tuple[Annotation, ...]
