"""Payload builders shared by the CLI and the HTTP service.

Both front ends render exactly these structures (the CLI prints them as JSON,
the service wraps them in its envelope), which is what keeps their results
identical by construction. Listings are alphabetical by normalized surface,
ties broken by id, stable across runs.
"""

from __future__ import annotations

from . import corpus, inference
from .kb import KnowledgeBase


def _surface_key(kb: KnowledgeBase, term_id: str) -> tuple[str, str]:
    return (kb.terms[term_id].normalized_surface, term_id)


def term_summary(kb: KnowledgeBase, term_id: str) -> dict:
    t = kb.term(term_id)
    return {
        "id": t.id,
        "surface": t.surface,
        "language": t.language,
        "grammatical_category": t.grammatical_category,
        "gender": t.gender,
        "number": t.number,
        "form_variants": list(t.form_variants),
        "decomposition": None if t.decomposition is None else [
            {"role": p.role, "term": p.term} for p in t.decomposition
        ],
        "source": t.source,
    }


def term_list(kb: KnowledgeBase) -> list[dict]:
    ordered = sorted(kb.terms, key=lambda tid: _surface_key(kb, tid))
    return [term_summary(kb, tid) for tid in ordered]


def concept_summary(kb: KnowledgeBase, concept_id: str) -> dict:
    c = kb.concept(concept_id)
    surface = kb.terms[c.label].surface if c.label in kb.terms else None
    return {
        "id": c.id,
        "label": c.label,
        "surface": surface,
        "description": c.description,
        "parents": sorted(c.parents),
    }


def concept_list(kb: KnowledgeBase) -> list[dict]:
    def key(cid):
        c = kb.concepts[cid]
        if c.label in kb.terms:
            return (kb.terms[c.label].normalized_surface, cid)
        return (cid, cid)
    return [concept_summary(kb, cid) for cid in sorted(kb.concepts, key=key)]


def frame(kb: KnowledgeBase, concept_id: str) -> dict:
    c = kb.concept(concept_id)
    ef = inference.effective_frame(kb, concept_id)
    return {
        "concept": concept_id,
        "label": c.label,
        "surface": kb.terms[c.label].surface if c.label in kb.terms else None,
        "description": c.description,
        "subsumers": list(ef.subsumers),
        "attributes": [
            {"key": a.key, "value": a.value, "origin": a.origin,
             "shadowed": a.shadowed}
            for a in ef.attributes
        ],
        "relations": [
            {"relation_type": r.relation_type, "target": r.target,
             "definition_text": r.definition_text, "origin": r.origin}
            for r in ef.relations
        ],
    }


def designators(kb: KnowledgeBase, concept_id: str) -> list[dict]:
    out = []
    for term_id, viewpoints in inference.designators(kb, concept_id):
        out.append({
            "term": term_id,
            "surface": kb.terms[term_id].surface,
            "link": kb.links[kb._tc_index[(term_id, concept_id)]].id,
            "viewpoints": sorted(viewpoints),
            "viewpoint_names": [kb.viewpoints[v].name for v in sorted(viewpoints)],
        })
    return out


def meanings(kb: KnowledgeBase, term_id: str) -> list[dict]:
    out = []
    for viewpoint_id, concept_id in inference.meanings(kb, term_id):
        c = kb.concepts[concept_id]
        out.append({
            "viewpoint": viewpoint_id,
            "viewpoint_name": kb.viewpoints[viewpoint_id].name,
            "concept": concept_id,
            "concept_surface": kb.terms[c.label].surface
            if c.label in kb.terms else None,
            "link": kb.designation(term_id, viewpoint_id),
        })
    return out


def synonyms(kb: KnowledgeBase, term_id: str, viewpoint_id: str) -> list[dict]:
    found = inference.synonyms(kb, term_id, viewpoint_id)
    ordered = sorted(found, key=lambda tid: _surface_key(kb, tid))
    return [{"term": tid, "surface": kb.terms[tid].surface} for tid in ordered]


def grammatical_relations(kb: KnowledgeBase, term_id: str) -> list[dict]:
    return [
        {"relation_type": rel, "term": tid,
         "surface": kb.terms[tid].surface}
        for rel, tid in inference.grammatical_relations(kb, term_id)
    ]


def diagnostics(kb: KnowledgeBase) -> list[dict]:
    return [
        {"rule": d.rule, "severity": d.severity,
         "entities": list(d.entities), "message": d.message}
        for d in inference.check_consistency(kb)
    ]


def graph(kb: KnowledgeBase, mode: str) -> dict:
    from . import store
    return {"mode": mode, "dot": store.export_graph(kb, mode)}


def network(kb: KnowledgeBase, mode: str) -> dict:
    """The concept network as plain data for interactive rendering.

    Nodes carry their layer (est-un depth: roots at 0, children below every
    parent), so a client can lay the hierarchy out without recomputing it.
    """
    if mode not in ("hierarchy", "assertional", "full"):
        raise ValueError(f"bad graph mode: {mode!r}")

    depth: dict[str, int] = {}

    def depth_of(cid):
        if cid not in depth:
            parents = kb.concepts[cid].parents
            depth[cid] = 0 if not parents else \
                1 + max(depth_of(p) for p in parents)
        return depth[cid]

    nodes = [
        {"id": cid,
         "surface": kb.terms[kb.concepts[cid].label].surface
         if kb.concepts[cid].label in kb.terms else cid,
         "depth": depth_of(cid)}
        for cid in sorted(kb.concepts)
    ]
    edges = []
    if mode in ("hierarchy", "full"):
        for cid in sorted(kb.concepts):
            for p in sorted(kb.concepts[cid].parents):
                edges.append({"source": cid, "target": p,
                              "kind": "est-un", "label": "est-un"})
    if mode in ("assertional", "full"):
        for cid in sorted(kb.concepts):
            for r in kb.concepts[cid].assertional_relations:
                edges.append({"source": cid, "target": r.target,
                              "kind": "assertional",
                              "label": r.relation_type})
    edges.sort(key=lambda e: (e["source"], e["target"], e["kind"], e["label"]))
    return {"mode": mode, "nodes": nodes, "edges": edges}


def viewpoint_list(kb: KnowledgeBase) -> list[dict]:
    ordered = sorted(kb.viewpoints.values(), key=lambda v: (v.name, v.id))
    return [{"id": v.id, "name": v.name, "description": v.description}
            for v in ordered]


def document_list(kb: KnowledgeBase) -> list[dict]:
    return [
        {"id": d.id, "title": d.title, "source_note": d.source_note,
         "units": list(d.units)}
        for d in (kb.documents[k] for k in sorted(kb.documents))
    ]


def document_detail(kb: KnowledgeBase, document_id: str) -> dict:
    d = kb.document(document_id)
    return {
        "id": d.id,
        "title": d.title,
        "source_note": d.source_note,
        "units": [
            {"id": uid, "ordinal": kb.units[uid].ordinal,
             "content": kb.units[uid].content}
            for uid in d.units
        ],
    }


def link_detail(kb: KnowledgeBase, link_id: str) -> dict:
    lk = kb.link_record(link_id)
    return {
        "id": lk.id,
        "term": lk.term,
        "concept": lk.concept,
        "viewpoints": sorted(lk.viewpoints),
        "usages": [
            {"unit": u.unit, "start": u.start, "end": u.end}
            for u in sorted(lk.usages, key=lambda u: (u.unit, u.start, u.end))
        ],
    }


def highlighted(kb: KnowledgeBase, unit_id: str) -> dict:
    hu = corpus.highlighted_unit(kb, unit_id)
    unit = kb.units[unit_id]
    return {
        "unit": hu.unit,
        "document": unit.document,
        "ordinal": unit.ordinal,
        "content": hu.content,
        "annotations": [
            {"start": a.start, "end": a.end, "term": a.term,
             "surface": kb.terms[a.term].surface, "links": list(a.links)}
            for a in hu.annotations
        ],
    }


def contexts(kb: KnowledgeBase, link_id: str, window: int) -> list[dict]:
    return [
        {"link": c.link, "unit": c.text_unit, "start": c.start, "end": c.end,
         "left": c.left, "match": c.match, "right": c.right}
        for c in corpus.contexts_of(kb, link_id, window)
    ]


def search(kb: KnowledgeBase, query: str) -> list[dict]:
    return [{"unit": uid, "start": start, "end": end}
            for uid, start, end in corpus.keyword_search(kb, query)]


def relation_type_list(kb: KnowledgeBase) -> list[dict]:
    return [{"name": name, "definition": kb.relation_types[name]}
            for name in sorted(kb.relation_types)]
