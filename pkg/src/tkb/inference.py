"""Derived knowledge: inherited frames, lexical relations, diagnostics.

Everything here is a pure read over a knowledge-base snapshot. Synonymy and
polysemy are never stored: they are computed from the term-concept links.
A concept's effective frame merges the attributes and assertional relations
of all its subsumers; a locally defined attribute key shadows every inherited
entry, and among inherited entries for one key the closest origin wins
(minimum est-un distance, ties broken by lexicographic origin id).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import CycleWouldForm
from .model import normalize_surface

# Diagnostic rules in report order; severity is fixed per rule.
RULE_CYCLE = "Cycle"
RULE_VIEWPOINT_CONFLICT = "ViewpointConflict"
RULE_LABEL_NOT_LINKED = "LabelNotLinked"
RULE_UNANCHORED_CORPUS_TERM = "UnanchoredCorpusTerm"
RULE_UNDIFFERENTIATED_SIBLINGS = "UndifferentiatedSiblings"
RULE_DANGLING_REFERENCE = "DanglingReference"
RULE_SPAN_MISMATCH = "SpanMismatch"

RULE_ORDER = (
    RULE_CYCLE,
    RULE_VIEWPOINT_CONFLICT,
    RULE_LABEL_NOT_LINKED,
    RULE_UNANCHORED_CORPUS_TERM,
    RULE_UNDIFFERENTIATED_SIBLINGS,
    RULE_DANGLING_REFERENCE,
    RULE_SPAN_MISMATCH,
)

SEVERITY = {
    RULE_CYCLE: "error",
    RULE_VIEWPOINT_CONFLICT: "error",
    RULE_LABEL_NOT_LINKED: "warning",
    RULE_UNANCHORED_CORPUS_TERM: "warning",
    RULE_UNDIFFERENTIATED_SIBLINGS: "warning",
    RULE_DANGLING_REFERENCE: "error",
    RULE_SPAN_MISMATCH: "warning",
}


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    severity: str
    entities: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class FrameAttribute:
    key: str
    value: str
    origin: str  # concept the entry comes from
    shadowed: bool


@dataclass(frozen=True)
class FrameRelation:
    relation_type: str
    target: str
    definition_text: str
    origin: str


@dataclass(frozen=True)
class EffectiveFrame:
    concept: str
    attributes: tuple[FrameAttribute, ...]
    relations: tuple[FrameRelation, ...]
    subsumers: tuple[str, ...]


# ------------------------------------------------------------- subsumption


def subsumers(kb, concept_id: str) -> list[str]:
    """Reflexive-transitive est-un closure, topologically ordered (the concept
    first, every concept before its own subsumers; ties by id)."""
    kb.concept(concept_id)
    closure = {concept_id}
    stack = [concept_id]
    while stack:
        for p in kb.concepts[stack.pop()].parents:
            if p not in closure:
                closure.add(p)
                stack.append(p)

    # Kahn over child->parent edges restricted to the closure
    indeg = {node: 0 for node in closure}
    for node in closure:
        for p in kb.concepts[node].parents:
            if p in closure:
                indeg[p] += 1
    ready = [node for node in closure if indeg[node] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for p in kb.concepts[node].parents:
            if p in closure:
                indeg[p] -= 1
                if indeg[p] == 0:
                    heapq.heappush(ready, p)
    if len(order) != len(closure):
        raise CycleWouldForm(
            f"est-un hierarchy above {concept_id} contains a cycle", [concept_id])
    return order


def _distances(kb, concept_id: str) -> dict[str, int]:
    """Minimum est-un path length from the concept to each subsumer."""
    dist = {concept_id: 0}
    frontier = [concept_id]
    while frontier:
        nxt = []
        for node in frontier:
            for p in kb.concepts[node].parents:
                if p not in dist:
                    dist[p] = dist[node] + 1
                    nxt.append(p)
        frontier = nxt
    return dist


def effective_frame(kb, concept_id: str) -> EffectiveFrame:
    subs = subsumers(kb, concept_id)
    dist = _distances(kb, concept_id)

    entries: list[tuple[str, str, str]] = []  # (key, value, origin)
    for s in subs:
        for key, value in kb.concepts[s].attributes:
            entries.append((key, value, s))

    # local definitions shadow everything; otherwise closest origin wins
    effective_origin: dict[str, tuple[tuple, str]] = {}
    for key, _value, origin in entries:
        rank = (0,) if origin == concept_id else (1, dist[origin], origin)
        cur = effective_origin.get(key)
        if cur is None or rank < cur[0]:
            effective_origin[key] = (rank, origin)

    attributes = []
    for key in sorted(effective_origin):
        winner = effective_origin[key][1]
        key_entries = sorted(
            (e for e in entries if e[0] == key),
            key=lambda e: (e[2] != winner, dist[e[2]], e[2]))
        for _k, value, origin in key_entries:
            attributes.append(FrameAttribute(key, value, origin, origin != winner))

    # relations accumulate; only exact duplicate triples collapse
    rels: dict[tuple[str, str, str], tuple[tuple[int, str], str]] = {}
    for s in subs:
        for r in kb.concepts[s].assertional_relations:
            triple = (r.relation_type, r.target, r.definition_text)
            rank = (dist[s], s)
            if triple not in rels or rank < rels[triple][0]:
                rels[triple] = (rank, s)
    relations = tuple(
        FrameRelation(t, target, definition, rels[(t, target, definition)][1])
        for t, target, definition in sorted(rels))

    return EffectiveFrame(concept_id, tuple(attributes), relations, tuple(subs))


# -------------------------------------------------------- lexical relations


def synonyms(kb, term_id: str, viewpoint_id: str) -> set[str]:
    """Other terms designating, under the same viewpoint, the concept this term
    designates under it. Empty when the term has no link for the viewpoint."""
    kb.term(term_id)
    kb.viewpoint(viewpoint_id)
    link_id = kb.designation(term_id, viewpoint_id)
    if link_id is None:
        return set()
    concept_id = kb.links[link_id].concept
    return {
        lk.term for lk in kb.links_of_concept(concept_id)
        if viewpoint_id in lk.viewpoints and lk.term != term_id
    }


def meanings(kb, term_id: str) -> list[tuple[str, str]]:
    """(viewpoint, concept) pairs over all the term's links; more than one
    distinct concept means the term is polysemous."""
    kb.term(term_id)
    pairs = []
    for lk in kb.links_of_term(term_id):
        for v in lk.viewpoints:
            pairs.append((v, lk.concept))
    return sorted(pairs)


def designators(kb, concept_id: str) -> list[tuple[str, set[str]]]:
    """Terms designating the concept, each with the viewpoints under which the
    designation holds; inverse of meanings."""
    kb.concept(concept_id)
    pairs = [(lk.term, set(lk.viewpoints)) for lk in kb.links_of_concept(concept_id)]
    return sorted(pairs, key=lambda p: p[0])


def grammatical_relations(kb, term_id: str) -> list[tuple[str, str]]:
    """Compositional relations read from decompositions: a component is
    est-en-tête-de (head) or est-en-expansion-de (expansion) of the compound."""
    kb.term(term_id)
    out = set()
    for other_id in sorted(kb.terms):
        parts = kb.terms[other_id].decomposition or ()
        for part in parts:
            if part.term == term_id:
                rel = "est-en-tête-de" if part.role == "head" else "est-en-expansion-de"
                out.add((rel, other_id))
    return sorted(out)


# ------------------------------------------------------------- diagnostics


def check_consistency(kb) -> list[Diagnostic]:
    """All findings over the stored state, deterministically ordered by rule
    then entities. A pure function: identical states yield identical lists.

    Cycle / ViewpointConflict / DanglingReference cannot arise through the
    mutation API; they are checked as a defense for imported or hand-edited
    data.
    """
    diags: list[Diagnostic] = []
    diags.extend(_check_cycles(kb))
    diags.extend(_check_viewpoint_conflicts(kb))
    diags.extend(_check_labels(kb))
    diags.extend(_check_unanchored(kb))
    dangling = _check_dangling(kb)
    if not any(d.rule == RULE_CYCLE for d in diags) and not dangling:
        # effective frames are only computable on sound hierarchies
        diags.extend(_check_siblings(kb))
    diags.extend(dangling)
    diags.extend(_check_span_mismatches(kb))
    return sorted(diags, key=lambda d: (RULE_ORDER.index(d.rule), d.entities))


def _check_cycles(kb):
    # iterative Tarjan over est-un edges; a cycle is an SCC of size > 1 or a
    # self-loop
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    sccs: list[list[str]] = []

    def strongconnect(root):
        work = [(root, iter(sorted(kb.concepts[root].parents)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for p in it:
                if p not in kb.concepts:
                    continue
                if p not in index:
                    index[p] = low[p] = counter[0]
                    counter[0] += 1
                    stack.append(p)
                    on_stack.add(p)
                    work.append((p, iter(sorted(kb.concepts[p].parents))))
                    advanced = True
                    break
                if p in on_stack:
                    low[node] = min(low[node], index[p])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                scc = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    scc.append(member)
                    if member == node:
                        break
                sccs.append(scc)

    for cid in sorted(kb.concepts):
        if cid not in index:
            strongconnect(cid)

    out = []
    for scc in sccs:
        is_self_loop = len(scc) == 1 and scc[0] in kb.concepts[scc[0]].parents
        if len(scc) > 1 or is_self_loop:
            members = tuple(sorted(scc))
            out.append(Diagnostic(
                RULE_CYCLE, SEVERITY[RULE_CYCLE], members,
                f"est-un cycle through {', '.join(members)}"))
    return out


def _check_viewpoint_conflicts(kb):
    by_tv: dict[tuple[str, str], list] = {}
    for lk in kb.links.values():
        for v in lk.viewpoints:
            by_tv.setdefault((lk.term, v), []).append(lk)
    out = []
    for (term_id, viewpoint_id), lks in sorted(by_tv.items()):
        concepts = {lk.concept for lk in lks}
        if len(concepts) > 1:
            entities = (term_id, viewpoint_id, *sorted(l.id for l in lks))
            out.append(Diagnostic(
                RULE_VIEWPOINT_CONFLICT, SEVERITY[RULE_VIEWPOINT_CONFLICT],
                entities,
                f"term {term_id} designates {len(concepts)} concepts under "
                f"viewpoint {viewpoint_id}"))
    return out


def _check_labels(kb):
    out = []
    for cid in sorted(kb.concepts):
        c = kb.concepts[cid]
        if c.label not in kb.terms:
            continue  # reported as a dangling reference
        if not any(lk.term == c.label and lk.concept == cid
                   for lk in kb.links.values()):
            out.append(Diagnostic(
                RULE_LABEL_NOT_LINKED, SEVERITY[RULE_LABEL_NOT_LINKED],
                (cid, c.label),
                f"label term {c.label} of concept {cid} is not linked to it"))
    return out


def _check_unanchored(kb):
    out = []
    for tid in sorted(kb.terms):
        term = kb.terms[tid]
        if term.source != "corpus":
            continue  # interview-sourced terms need no corpus attestation
        anchored = any(lk.term == tid and lk.usages for lk in kb.links.values())
        if not anchored:
            out.append(Diagnostic(
                RULE_UNANCHORED_CORPUS_TERM, SEVERITY[RULE_UNANCHORED_CORPUS_TERM],
                (tid,),
                f"corpus term {term.surface!r} has no usage anchor on any link"))
    return out


def _check_siblings(kb):
    def signature(cid):
        frame = effective_frame(kb, cid)
        attrs = frozenset((a.key, a.value) for a in frame.attributes
                          if not a.shadowed)
        rels = frozenset((r.relation_type, r.target, r.definition_text)
                         for r in frame.relations)
        return attrs, rels

    signatures: dict[str, tuple] = {}
    flagged: set[tuple[str, str]] = set()
    out = []
    parents = sorted({p for c in kb.concepts.values() for p in c.parents})
    for parent in parents:
        children = sorted(c.id for c in kb.concepts.values()
                          if parent in c.parents)
        for i, a in enumerate(children):
            for b in children[i + 1:]:
                if (a, b) in flagged:
                    continue
                for cid in (a, b):
                    if cid not in signatures:
                        signatures[cid] = signature(cid)
                if signatures[a] == signatures[b]:
                    flagged.add((a, b))
                    out.append(Diagnostic(
                        RULE_UNDIFFERENTIATED_SIBLINGS,
                        SEVERITY[RULE_UNDIFFERENTIATED_SIBLINGS],
                        (a, b),
                        f"sibling concepts {a} and {b} have identical "
                        f"effective attributes and relations"))
    return out


def _check_dangling(kb):
    refs: list[tuple[str, str]] = []
    for tid, term in kb.terms.items():
        for part in term.decomposition or ():
            if part.term not in kb.terms:
                refs.append((tid, part.term))
    for cid, c in kb.concepts.items():
        if c.label not in kb.terms:
            refs.append((cid, c.label))
        for p in c.parents:
            if p not in kb.concepts:
                refs.append((cid, p))
        for r in c.assertional_relations:
            if r.target not in kb.concepts:
                refs.append((cid, r.target))
    for lid, lk in kb.links.items():
        if lk.term not in kb.terms:
            refs.append((lid, lk.term))
        if lk.concept not in kb.concepts:
            refs.append((lid, lk.concept))
        for v in lk.viewpoints:
            if v not in kb.viewpoints:
                refs.append((lid, v))
        for u in lk.usages:
            if u.unit not in kb.units:
                refs.append((lid, u.unit))
    for did, doc in kb.documents.items():
        for uid in doc.units:
            if uid not in kb.units:
                refs.append((did, uid))
    for uid, unit in kb.units.items():
        if unit.document not in kb.documents:
            refs.append((uid, unit.document))
    return [
        Diagnostic(RULE_DANGLING_REFERENCE, SEVERITY[RULE_DANGLING_REFERENCE],
                   (owner, missing),
                   f"{owner} references missing entity {missing}")
        for owner, missing in sorted(set(refs))
    ]


def _check_span_mismatches(kb):
    out = []
    for lid in sorted(kb.links):
        lk = kb.links[lid]
        if lk.term not in kb.terms:
            continue  # dangling, reported separately
        term = kb.terms[lk.term]
        accepted = {normalize_surface(term.surface)}
        accepted.update(normalize_surface(v) for v in term.form_variants)
        for u in sorted(lk.usages, key=lambda u: (u.unit, u.start, u.end)):
            if u.unit not in kb.units:
                continue
            content = kb.units[u.unit].content
            in_bounds = 0 <= u.start <= u.end <= len(content)
            text = content[u.start:u.end] if in_bounds else ""
            if not in_bounds or normalize_surface(text) not in accepted:
                out.append(Diagnostic(
                    RULE_SPAN_MISMATCH, SEVERITY[RULE_SPAN_MISMATCH],
                    (lid, u.unit),
                    f"anchor {u.start}..{u.end} on {lid} does not match term "
                    f"{term.surface!r} (found {text!r})"))
    return out
