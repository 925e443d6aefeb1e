"""The knowledge base: entity tables and constraint-enforcing mutations.

No sequence of mutations can produce a state that violates the structural
rules: surfaces stay unique per language, the est-un graph stays acyclic, a
term designates at most one concept per viewpoint, and rejected mutations
leave the store observably unchanged (every mutation validates fully before
touching any table).

Concurrency contract: single writer, multiple readers. Mutations must be
serialized by the caller; reads are safe against a consistent snapshot
because entity records are immutable and replaced wholesale.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable, Mapping

from . import corpus
from .errors import (
    CycleWouldForm,
    DuplicateAttributeKey,
    DuplicateName,
    DuplicateSurface,
    EmptyDocument,
    EmptyName,
    EmptySurface,
    LabelInUse,
    SpanMismatch,
    SpanOutOfBounds,
    UnknownConcept,
    UnknownEntity,
    UnknownParent,
    UnknownTerm,
    UnknownViewpoint,
    UnregisteredTypeWithoutDefinition,
    ViewpointConflict,
)
from .model import (
    DECOMPOSITION_ROLES,
    TERM_SOURCES,
    AssertionalRelation,
    Concept,
    DecompositionPart,
    Document,
    Term,
    TermConceptLink,
    TextUnit,
    UsageAnchor,
    Viewpoint,
    collapse_spaces,
    normalize_surface,
)


class KnowledgeBase:
    """In-memory terminological knowledge base."""

    def __init__(self, usage_span_mode: str = "strict"):
        if usage_span_mode not in ("strict", "permissive"):
            raise ValueError(f"bad usage_span_mode: {usage_span_mode!r}")
        self.usage_span_mode = usage_span_mode

        self.terms: dict[str, Term] = {}
        self.concepts: dict[str, Concept] = {}
        self.viewpoints: dict[str, Viewpoint] = {}
        self.links: dict[str, TermConceptLink] = {}
        self.documents: dict[str, Document] = {}
        self.units: dict[str, TextUnit] = {}
        self.relation_types: dict[str, str] = {}  # name -> default definition

        self._counters: dict[str, int] = {}
        # (language, normalized surface) -> term id
        self._surface_index: dict[tuple[str, str], str] = {}
        self._tc_index: dict[tuple[str, str], str] = {}  # (term, concept) -> link
        self._tv_index: dict[tuple[str, str], str] = {}  # (term, viewpoint) -> link
        self._links_by_term: dict[str, set[str]] = {}
        self._links_by_concept: dict[str, set[str]] = {}

    # ------------------------------------------------------------------ ids

    def _new_id(self, prefix: str, table: dict) -> str:
        n = self._counters.get(prefix, 0)
        while True:
            n += 1
            candidate = f"{prefix}{n:04d}"
            if candidate not in table:
                break
        self._counters[prefix] = n
        return candidate

    # -------------------------------------------------------------- lookups

    def term(self, term_id: str) -> Term:
        try:
            return self.terms[term_id]
        except KeyError:
            raise UnknownTerm(f"unknown term: {term_id}", [term_id]) from None

    def concept(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise UnknownConcept(f"unknown concept: {concept_id}", [concept_id]) from None

    def viewpoint(self, viewpoint_id: str) -> Viewpoint:
        try:
            return self.viewpoints[viewpoint_id]
        except KeyError:
            raise UnknownViewpoint(
                f"unknown viewpoint: {viewpoint_id}", [viewpoint_id]) from None

    def link_record(self, link_id: str) -> TermConceptLink:
        try:
            return self.links[link_id]
        except KeyError:
            raise UnknownEntity(f"unknown link: {link_id}", [link_id]) from None

    def text_unit(self, unit_id: str) -> TextUnit:
        try:
            return self.units[unit_id]
        except KeyError:
            raise UnknownEntity(f"unknown text unit: {unit_id}", [unit_id]) from None

    def document(self, document_id: str) -> Document:
        try:
            return self.documents[document_id]
        except KeyError:
            raise UnknownEntity(
                f"unknown document: {document_id}", [document_id]) from None

    def term_by_surface(self, surface: str, language: str) -> Term | None:
        tid = self._surface_index.get((language, normalize_surface(surface)))
        return self.terms[tid] if tid else None

    def viewpoint_by_name(self, name: str) -> Viewpoint | None:
        for v in self.viewpoints.values():
            if v.name == name:
                return v
        return None

    def designation(self, term_id: str, viewpoint_id: str) -> str | None:
        """Link id under which the term designates a concept for this
        viewpoint, or None."""
        return self._tv_index.get((term_id, viewpoint_id))

    def links_of_term(self, term_id: str) -> list[TermConceptLink]:
        return [self.links[i] for i in sorted(self._links_by_term.get(term_id, ()))]

    def links_of_concept(self, concept_id: str) -> list[TermConceptLink]:
        return [self.links[i] for i in sorted(self._links_by_concept.get(concept_id, ()))]

    # ------------------------------------------------------------ mutations

    def create_term(self, surface: str, language: str, *,
                    grammatical_category: str = "",
                    gender: str | None = None,
                    number: str | None = None,
                    variants: Iterable[str] = (),
                    decomposition=None,
                    source: str = "corpus") -> str:
        normalized = normalize_surface(surface)
        if not normalized:
            raise EmptySurface("term surface is empty after normalization")
        if source not in TERM_SOURCES:
            raise ValueError(f"bad term source: {source!r}")
        key = (language, normalized)
        if key in self._surface_index:
            raise DuplicateSurface(
                f"a term with surface {normalized!r} already exists for "
                f"language {language!r}",
                [self._surface_index[key]])
        parts = self._checked_decomposition(decomposition, exclude=None)
        clean_variants = tuple(sorted({collapse_spaces(v) for v in variants
                                       if collapse_spaces(v)}))
        term_id = self._new_id("t", self.terms)
        self.terms[term_id] = Term(
            id=term_id,
            surface=collapse_spaces(surface),
            language=language,
            grammatical_category=grammatical_category,
            gender=gender,
            number=number,
            form_variants=clean_variants,
            decomposition=parts,
            source=source,
        )
        self._surface_index[key] = term_id
        return term_id

    def _checked_decomposition(self, decomposition, exclude: str | None):
        if decomposition is None:
            return None
        parts = []
        for item in decomposition:
            role, term_id = (item.role, item.term) if isinstance(
                item, DecompositionPart) else item
            if role not in DECOMPOSITION_ROLES:
                raise ValueError(f"bad decomposition role: {role!r}")
            if term_id == exclude:
                raise ValueError("decomposition references the term itself")
            if term_id not in self.terms:
                raise UnknownTerm(
                    f"decomposition references unknown term: {term_id}", [term_id])
            parts.append(DecompositionPart(role, term_id))
        return tuple(parts)

    def set_decomposition(self, term_id: str, decomposition) -> None:
        term = self.term(term_id)
        parts = self._checked_decomposition(decomposition, exclude=term_id)
        self.terms[term_id] = replace(term, decomposition=parts)

    def create_viewpoint(self, name: str, description: str = "") -> str:
        name = collapse_spaces(name)
        if not name:
            raise EmptyName("viewpoint name is empty")
        for v in self.viewpoints.values():
            if v.name == name:
                raise DuplicateName(f"viewpoint named {name!r} already exists", [v.id])
        viewpoint_id = self._new_id("v", self.viewpoints)
        self.viewpoints[viewpoint_id] = Viewpoint(viewpoint_id, name, description)
        return viewpoint_id

    def create_concept(self, label: str, description: str = "",
                       attributes: Mapping[str, str] | Iterable[tuple[str, str]] | None = None,
                       parents: Iterable[str] = ()) -> str:
        if label not in self.terms:
            raise UnknownTerm(f"label references unknown term: {label}", [label])
        parent_ids = frozenset(parents)
        for p in parent_ids:
            if p not in self.concepts:
                raise UnknownParent(f"unknown parent concept: {p}", [p])
        attr_pairs = self._checked_attributes(attributes)
        concept_id = self._new_id("c", self.concepts)
        self.concepts[concept_id] = Concept(
            id=concept_id,
            label=label,
            description=description,
            attributes=attr_pairs,
            parents=parent_ids,
        )
        return concept_id

    @staticmethod
    def _checked_attributes(attributes) -> tuple[tuple[str, str], ...]:
        if attributes is None:
            return ()
        pairs = list(attributes.items()) if isinstance(attributes, Mapping) \
            else [tuple(p) for p in attributes]
        seen = set()
        for k, _v in pairs:
            if k in seen:
                raise DuplicateAttributeKey(f"attribute key repeated: {k!r}")
            seen.add(k)
        return tuple((str(k), str(v)) for k, v in pairs)

    def add_parent(self, child_id: str, parent_id: str) -> None:
        child = self.concept(child_id)
        self.concept(parent_id)
        if parent_id in child.parents:
            return  # duplicate edge is a no-op
        if child_id == parent_id or self._reaches(parent_id, child_id):
            raise CycleWouldForm(
                f"making {child_id} est-un {parent_id} would create a cycle",
                [child_id, parent_id])
        self.concepts[child_id] = replace(child, parents=child.parents | {parent_id})

    def _reaches(self, src: str, dst: str) -> bool:
        """True if dst is reachable from src along est-un edges (upward)."""
        seen = set()
        stack = [src]
        while stack:
            node = stack.pop()
            if node == dst:
                return True
            for p in self.concepts[node].parents:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return False

    def register_relation_type(self, name: str, definition: str) -> None:
        name = collapse_spaces(name)
        if not name:
            raise EmptyName("relation type name is empty")
        self.relation_types[name] = definition

    def add_assertional_relation(self, src_id: str, relation_type: str,
                                 dst_id: str, definition_text: str = "") -> None:
        src = self.concept(src_id)
        self.concept(dst_id)
        relation_type = collapse_spaces(relation_type)
        if not relation_type:
            raise EmptyName("relation type is empty")
        if not definition_text and relation_type not in self.relation_types:
            raise UnregisteredTypeWithoutDefinition(
                f"relation type {relation_type!r} is not registered and no "
                f"definition text was given")
        # the same (src, type, dst) triple collapses to the first insertion
        if any(r.relation_type == relation_type and r.target == dst_id
               for r in src.assertional_relations):
            return
        rel = AssertionalRelation(relation_type, dst_id, definition_text)
        self.concepts[src_id] = replace(
            src, assertional_relations=src.assertional_relations + (rel,))

    def link(self, term_id: str, concept_id: str, viewpoint_id: str) -> str:
        term = self.term(term_id)
        self.concept(concept_id)
        vp = self.viewpoint(viewpoint_id)

        holder = self._tv_index.get((term_id, viewpoint_id))
        if holder is not None:
            held = self.links[holder]
            if held.concept != concept_id:
                other = self.concepts[held.concept]
                other_surface = self.terms[other.label].surface \
                    if other.label in self.terms else held.concept
                raise ViewpointConflict(
                    f"term {term.surface!r} already designates concept "
                    f"{held.concept} ({other_surface}) under viewpoint "
                    f"{vp.name!r}",
                    [term_id, viewpoint_id, held.concept],
                    existing_concept=held.concept)
            return holder  # identical (term, concept, viewpoint): no-op

        existing = self._tc_index.get((term_id, concept_id))
        if existing is not None:  # viewpoints accumulate on the one link
            lk = self.links[existing]
            self.links[existing] = replace(
                lk, viewpoints=lk.viewpoints | {viewpoint_id})
            self._tv_index[(term_id, viewpoint_id)] = existing
            return existing

        link_id = self._new_id("l", self.links)
        self.links[link_id] = TermConceptLink(
            id=link_id, term=term_id, concept=concept_id,
            viewpoints=frozenset({viewpoint_id}))
        self._tc_index[(term_id, concept_id)] = link_id
        self._tv_index[(term_id, viewpoint_id)] = link_id
        self._links_by_term.setdefault(term_id, set()).add(link_id)
        self._links_by_concept.setdefault(concept_id, set()).add(link_id)
        return link_id

    def add_usage(self, link_id: str, unit_id: str, start: int, end: int) -> None:
        lk = self.link_record(link_id)
        unit = self.text_unit(unit_id)
        if not (0 <= start <= end <= len(unit.content)):
            raise SpanOutOfBounds(
                f"span {start}..{end} outside unit {unit_id} "
                f"(length {len(unit.content)})",
                [unit_id])
        if self.usage_span_mode == "strict":
            occ_spans = {(o.start, o.end)
                         for o in corpus.occurrences_in_unit(self, lk.term, unit_id)}
            if (start, end) not in occ_spans:
                term = self.terms[lk.term]
                raise SpanMismatch(
                    f"span {start}..{end} ({unit.content[start:end]!r}) is not "
                    f"an indexed occurrence of term {term.surface!r}",
                    [link_id, unit_id])
        anchor = UsageAnchor(unit_id, start, end)
        self.links[link_id] = replace(lk, usages=lk.usages | {anchor})

    def ingest_document(self, title: str, source_note: str, text: str) -> str:
        if text == "":
            raise EmptyDocument("document text is empty")
        _prefix, contents, _seps, _suffix = corpus.segment_text(text)
        document_id = self._new_id("d", self.documents)
        unit_ids = []
        for ordinal, content in enumerate(contents):
            unit_id = self._new_id("u", self.units)
            self.units[unit_id] = TextUnit(unit_id, document_id, ordinal, content)
            unit_ids.append(unit_id)
        self.documents[document_id] = Document(
            document_id, title, source_note, text, tuple(unit_ids))
        return document_id

    # -------------------------------------------------------------- deletes

    def delete_entity(self, entity_id: str) -> None:
        if entity_id in self.terms:
            self._delete_term(entity_id)
        elif entity_id in self.concepts:
            self._delete_concept(entity_id)
        elif entity_id in self.viewpoints:
            self._delete_viewpoint(entity_id)
        elif entity_id in self.links:
            self._delete_link(entity_id)
        elif entity_id in self.documents:
            self._delete_document(entity_id)
        elif entity_id in self.units:
            raise UnknownEntity(
                f"{entity_id} is a text unit; delete its document instead",
                [entity_id])
        else:
            raise UnknownEntity(f"unknown entity: {entity_id}", [entity_id])

    def _delete_term(self, term_id: str) -> None:
        for c in self.concepts.values():
            if c.label == term_id:
                raise LabelInUse(
                    f"term {term_id} is the label of concept {c.id}",
                    [term_id, c.id])
        for link_id in list(self._links_by_term.get(term_id, ())):
            self._delete_link(link_id)
        for other in list(self.terms.values()):
            if other.decomposition and any(p.term == term_id
                                           for p in other.decomposition):
                # a partial decomposition would misdescribe the compound
                self.terms[other.id] = replace(other, decomposition=None)
        term = self.terms.pop(term_id)
        del self._surface_index[(term.language, term.normalized_surface)]
        self._links_by_term.pop(term_id, None)

    def _delete_concept(self, concept_id: str) -> None:
        for link_id in list(self._links_by_concept.get(concept_id, ())):
            self._delete_link(link_id)
        for other in list(self.concepts.values()):
            if other.id == concept_id:
                continue
            changed = other
            if concept_id in changed.parents:
                changed = replace(changed, parents=changed.parents - {concept_id})
            if any(r.target == concept_id for r in changed.assertional_relations):
                changed = replace(changed, assertional_relations=tuple(
                    r for r in changed.assertional_relations
                    if r.target != concept_id))
            if changed is not other:
                self.concepts[other.id] = changed
        del self.concepts[concept_id]
        self._links_by_concept.pop(concept_id, None)

    def _delete_viewpoint(self, viewpoint_id: str) -> None:
        for lk in list(self.links.values()):
            if viewpoint_id not in lk.viewpoints:
                continue
            remaining = lk.viewpoints - {viewpoint_id}
            if remaining:
                self.links[lk.id] = replace(lk, viewpoints=remaining)
                del self._tv_index[(lk.term, viewpoint_id)]
            else:
                self._delete_link(lk.id)
        del self.viewpoints[viewpoint_id]

    def _delete_link(self, link_id: str) -> None:
        lk = self.links.pop(link_id)
        del self._tc_index[(lk.term, lk.concept)]
        for v in lk.viewpoints:
            self._tv_index.pop((lk.term, v), None)
        self._links_by_term.get(lk.term, set()).discard(link_id)
        self._links_by_concept.get(lk.concept, set()).discard(link_id)

    def _delete_document(self, document_id: str) -> None:
        doc = self.documents.pop(document_id)
        removed = set(doc.units)
        for unit_id in doc.units:
            del self.units[unit_id]
        for lk in list(self.links.values()):
            if any(u.unit in removed for u in lk.usages):
                self.links[lk.id] = replace(lk, usages=frozenset(
                    u for u in lk.usages if u.unit not in removed))
