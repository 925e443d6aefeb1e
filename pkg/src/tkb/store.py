"""Persistence and interchange.

The whole knowledge base is one human-readable JSON document, format version
"tkb/1", written canonically (sorted object keys, entity tables sorted by id,
two-space indent, UTF-8, trailing newline) so that observably equal bases
serialize byte-identically. Spans count Unicode scalar positions, not bytes.
Loading validates referential integrity and every structural invariant before
handing the base out; no invalid state is constructible through import.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from . import corpus, inference
from .errors import DuplicateSurface, IntegrityError, ParseError, VersionUnsupported
from .kb import KnowledgeBase
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
    normalize_surface,
)

FORMAT_VERSION = "tkb/1"


# ---------------------------------------------------------------- writing


def kb_to_document(kb: KnowledgeBase) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "relation_types": [
            {"name": name, "definition": kb.relation_types[name]}
            for name in sorted(kb.relation_types)
        ],
        "viewpoints": [
            {"id": v.id, "name": v.name, "description": v.description}
            for v in _by_id(kb.viewpoints)
        ],
        "terms": [
            {
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
            for t in _by_id(kb.terms)
        ],
        "concepts": [
            {
                "id": c.id,
                "label": c.label,
                "description": c.description,
                "attributes": [
                    {"key": k, "value": v} for k, v in c.attributes
                ],
                "assertional_relations": [
                    {
                        "relation_type": r.relation_type,
                        "target": r.target,
                        "definition_text": r.definition_text,
                    }
                    for r in c.assertional_relations
                ],
                "parents": sorted(c.parents),
            }
            for c in _by_id(kb.concepts)
        ],
        "links": [
            {
                "id": l.id,
                "term": l.term,
                "concept": l.concept,
                "viewpoints": sorted(l.viewpoints),
                "usages": [
                    {"unit": u.unit, "start": u.start, "end": u.end}
                    for u in sorted(l.usages, key=lambda u: (u.unit, u.start, u.end))
                ],
            }
            for l in _by_id(kb.links)
        ],
        "documents": [
            {
                "id": d.id,
                "title": d.title,
                "source_note": d.source_note,
                "text": d.text,
                "units": list(d.units),
            }
            for d in _by_id(kb.documents)
        ],
        "units": [
            {
                "id": u.id,
                "document": u.document,
                "ordinal": u.ordinal,
                "content": u.content,
            }
            for u in _by_id(kb.units)
        ],
    }


def _by_id(table: dict):
    return (table[k] for k in sorted(table))


def saves(kb: KnowledgeBase) -> str:
    """Canonical serialization of the knowledge base."""
    return json.dumps(kb_to_document(kb), ensure_ascii=False, indent=2,
                      sort_keys=True) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory and rename into place, so a
    crash mid-write never leaves a torn file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save(kb: KnowledgeBase, path) -> None:
    atomic_write_text(path, saves(kb))


# ---------------------------------------------------------------- reading


def load(path, usage_span_mode: str = "strict") -> KnowledgeBase:
    path = Path(path)
    return loads(path.read_text(encoding="utf-8"), usage_span_mode)


def loads(text: str, usage_span_mode: str = "strict") -> KnowledgeBase:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"not valid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    version = doc.get("format_version")
    if version is None:
        raise ParseError("missing format_version")
    if version != FORMAT_VERSION:
        raise VersionUnsupported(
            f"unsupported format_version {version!r} (expected {FORMAT_VERSION!r})")

    kb = KnowledgeBase(usage_span_mode=usage_span_mode)
    _read_tables(doc, kb)
    _validate(kb)
    _rebuild_indexes(kb)
    return kb


def _field(obj: dict, name: str, types, where: str, optional=False):
    if name not in obj:
        if optional:
            return None
        raise ParseError(f"{where}: missing field {name!r}")
    value = obj[name]
    if value is None and optional:
        return None
    if not isinstance(value, types):
        raise ParseError(f"{where}: field {name!r} has the wrong type")
    return value


def _read_tables(doc: dict, kb: KnowledgeBase) -> None:
    for entry in _array(doc, "relation_types"):
        name = _field(entry, "name", str, "relation_types")
        kb.relation_types[name] = _field(entry, "definition", str, "relation_types")

    for entry in _array(doc, "viewpoints"):
        vid = _field(entry, "id", str, "viewpoints")
        _no_duplicate(kb.viewpoints, vid, "viewpoint")
        kb.viewpoints[vid] = Viewpoint(
            vid,
            _field(entry, "name", str, f"viewpoint {vid}"),
            _field(entry, "description", str, f"viewpoint {vid}", optional=True) or "",
        )

    for entry in _array(doc, "terms"):
        tid = _field(entry, "id", str, "terms")
        _no_duplicate(kb.terms, tid, "term")
        where = f"term {tid}"
        source = _field(entry, "source", str, where)
        if source not in TERM_SOURCES:
            raise ParseError(f"{where}: bad source {source!r}")
        raw_decomp = entry.get("decomposition")
        decomposition = None
        if raw_decomp is not None:
            if not isinstance(raw_decomp, list):
                raise ParseError(f"{where}: decomposition must be an array")
            parts = []
            for p in raw_decomp:
                role = _field(p, "role", str, where)
                if role not in DECOMPOSITION_ROLES:
                    raise ParseError(f"{where}: bad decomposition role {role!r}")
                parts.append(DecompositionPart(role, _field(p, "term", str, where)))
            decomposition = tuple(parts)
        variants = _field(entry, "form_variants", list, where)
        if not all(isinstance(v, str) for v in variants):
            raise ParseError(f"{where}: form_variants must be strings")
        kb.terms[tid] = Term(
            id=tid,
            surface=_field(entry, "surface", str, where),
            language=_field(entry, "language", str, where),
            grammatical_category=_field(entry, "grammatical_category", str, where),
            gender=_field(entry, "gender", str, where, optional=True),
            number=_field(entry, "number", str, where, optional=True),
            form_variants=tuple(sorted(set(variants))),
            decomposition=decomposition,
            source=source,
        )

    for entry in _array(doc, "concepts"):
        cid = _field(entry, "id", str, "concepts")
        _no_duplicate(kb.concepts, cid, "concept")
        where = f"concept {cid}"
        attributes = []
        for a in _field(entry, "attributes", list, where):
            attributes.append((_field(a, "key", str, where),
                               _field(a, "value", str, where)))
        relations = []
        for r in _field(entry, "assertional_relations", list, where):
            relations.append(AssertionalRelation(
                _field(r, "relation_type", str, where),
                _field(r, "target", str, where),
                _field(r, "definition_text", str, where),
            ))
        parents = _field(entry, "parents", list, where)
        if not all(isinstance(p, str) for p in parents):
            raise ParseError(f"{where}: parents must be strings")
        kb.concepts[cid] = Concept(
            id=cid,
            label=_field(entry, "label", str, where),
            description=_field(entry, "description", str, where),
            attributes=tuple(attributes),
            assertional_relations=tuple(relations),
            parents=frozenset(parents),
        )

    for entry in _array(doc, "links"):
        lid = _field(entry, "id", str, "links")
        _no_duplicate(kb.links, lid, "link")
        where = f"link {lid}"
        viewpoints = _field(entry, "viewpoints", list, where)
        if not all(isinstance(v, str) for v in viewpoints):
            raise ParseError(f"{where}: viewpoints must be strings")
        usages = []
        for u in _field(entry, "usages", list, where):
            usages.append(UsageAnchor(
                _field(u, "unit", str, where),
                _int_field(u, "start", where),
                _int_field(u, "end", where),
            ))
        kb.links[lid] = TermConceptLink(
            id=lid,
            term=_field(entry, "term", str, where),
            concept=_field(entry, "concept", str, where),
            viewpoints=frozenset(viewpoints),
            usages=frozenset(usages),
        )

    for entry in _array(doc, "documents"):
        did = _field(entry, "id", str, "documents")
        _no_duplicate(kb.documents, did, "document")
        where = f"document {did}"
        units = _field(entry, "units", list, where)
        if not all(isinstance(u, str) for u in units):
            raise ParseError(f"{where}: units must be strings")
        kb.documents[did] = Document(
            id=did,
            title=_field(entry, "title", str, where),
            source_note=_field(entry, "source_note", str, where),
            text=_field(entry, "text", str, where),
            units=tuple(units),
        )

    for entry in _array(doc, "units"):
        uid = _field(entry, "id", str, "units")
        _no_duplicate(kb.units, uid, "unit")
        where = f"unit {uid}"
        kb.units[uid] = TextUnit(
            id=uid,
            document=_field(entry, "document", str, where),
            ordinal=_int_field(entry, "ordinal", where),
            content=_field(entry, "content", str, where),
        )


def _array(doc: dict, name: str) -> list:
    value = doc.get(name)
    if value is None:
        raise ParseError(f"missing table {name!r}")
    if not isinstance(value, list) or not all(isinstance(e, dict) for e in value):
        raise ParseError(f"table {name!r} must be an array of objects")
    return value


def _int_field(obj: dict, name: str, where: str) -> int:
    value = _field(obj, name, int, where)
    if isinstance(value, bool):
        raise ParseError(f"{where}: field {name!r} has the wrong type")
    return value


def _no_duplicate(table: dict, entity_id: str, kind: str) -> None:
    if entity_id in table:
        raise IntegrityError("DuplicateId",
                             f"{kind} id {entity_id} defined twice", [entity_id])


def _validate(kb: KnowledgeBase) -> None:
    surfaces: dict[tuple[str, str], str] = {}
    for tid in sorted(kb.terms):
        t = kb.terms[tid]
        key = (t.language, normalize_surface(t.surface))
        if not key[1]:
            raise IntegrityError("DuplicateSurface",
                                 f"term {tid} has an empty surface", [tid])
        if key in surfaces:
            raise IntegrityError(
                "DuplicateSurface",
                f"terms {surfaces[key]} and {tid} share surface "
                f"{key[1]!r} for language {t.language!r}",
                [surfaces[key], tid])
        surfaces[key] = tid
        if t.decomposition and any(p.term == tid for p in t.decomposition):
            raise IntegrityError("SelfReference",
                                 f"term {tid} decomposes into itself", [tid])

    names: dict[str, str] = {}
    for vid in sorted(kb.viewpoints):
        name = kb.viewpoints[vid].name
        if name in names:
            raise IntegrityError(
                "DuplicateName",
                f"viewpoints {names[name]} and {vid} share the name {name!r}",
                [names[name], vid])
        names[name] = vid

    for cid in sorted(kb.concepts):
        c = kb.concepts[cid]
        keys = [k for k, _ in c.attributes]
        if len(keys) != len(set(keys)):
            raise IntegrityError("DuplicateAttributeKey",
                                 f"concept {cid} repeats an attribute key", [cid])

    pairs: dict[tuple[str, str], str] = {}
    for lid in sorted(kb.links):
        lk = kb.links[lid]
        if not lk.viewpoints:
            raise IntegrityError("EmptyViewpoints",
                                 f"link {lid} has no viewpoints", [lid])
        pair = (lk.term, lk.concept)
        if pair in pairs:
            raise IntegrityError(
                "DuplicateLink",
                f"links {pairs[pair]} and {lid} both connect term {lk.term} "
                f"and concept {lk.concept}",
                [pairs[pair], lid])
        pairs[pair] = lid
        for u in sorted(lk.usages, key=lambda u: (u.unit, u.start, u.end)):
            if u.unit in kb.units:
                length = len(kb.units[u.unit].content)
                if not (0 <= u.start <= u.end <= length):
                    raise IntegrityError(
                        "SpanOutOfBounds",
                        f"usage {u.start}..{u.end} on link {lid} is outside "
                        f"unit {u.unit} (length {length})",
                        [lid, u.unit])

    for did in sorted(kb.documents):
        doc = kb.documents[did]
        stored = [kb.units[uid] for uid in doc.units if uid in kb.units]
        if len(stored) == len(doc.units):
            _prefix, contents, _seps, _suffix = corpus.segment_text(doc.text) \
                if doc.text else ("", [], [], "")
            if [u.content for u in stored] != contents \
                    or [u.ordinal for u in stored] != list(range(len(stored))) \
                    or any(u.document != did for u in stored):
                raise IntegrityError(
                    "UnitMismatch",
                    f"units of document {did} do not reproduce its text",
                    [did])
    owned = {uid for d in kb.documents.values() for uid in d.units}
    for uid in sorted(kb.units):
        if kb.units[uid].document in kb.documents and uid not in owned:
            raise IntegrityError(
                "UnitMismatch",
                f"unit {uid} is not listed by its document "
                f"{kb.units[uid].document}",
                [uid])

    # dangling references, cycles and viewpoint conflicts via the checker
    for diag in inference.check_consistency(kb):
        if diag.severity == "error":
            raise IntegrityError(diag.rule, diag.message, list(diag.entities))


def _rebuild_indexes(kb: KnowledgeBase) -> None:
    for t in kb.terms.values():
        kb._surface_index[(t.language, t.normalized_surface)] = t.id
    for lk in kb.links.values():
        kb._tc_index[(lk.term, lk.concept)] = lk.id
        for v in lk.viewpoints:
            kb._tv_index[(lk.term, v)] = lk.id
        kb._links_by_term.setdefault(lk.term, set()).add(lk.id)
        kb._links_by_concept.setdefault(lk.concept, set()).add(lk.id)
    for prefix, table in (("t", kb.terms), ("c", kb.concepts),
                          ("v", kb.viewpoints), ("l", kb.links),
                          ("d", kb.documents), ("u", kb.units)):
        highest = 0
        for entity_id in table:
            if entity_id.startswith(prefix) and entity_id[len(prefix):].isdigit():
                highest = max(highest, int(entity_id[len(prefix):]))
        kb._counters[prefix] = highest


# ------------------------------------------------------------ graph export


def export_graph(kb: KnowledgeBase, mode: str = "full") -> str:
    """Graphviz DOT text: one node per concept labeled with its terme-vedette
    surface; est-un edges in hierarchy mode, typed assertional edges in
    assertional mode, both in full mode. Deterministic output."""
    if mode not in ("hierarchy", "assertional", "full"):
        raise ValueError(f"bad graph mode: {mode!r}")
    lines = ["digraph tkb {"]
    for cid in sorted(kb.concepts):
        c = kb.concepts[cid]
        label = kb.terms[c.label].surface if c.label in kb.terms else cid
        lines.append(f'  "{_dot_escape(cid)}" [label="{_dot_escape(label)}"];')
    edges: set[tuple[str, str, str]] = set()
    if mode in ("hierarchy", "full"):
        for cid in kb.concepts:
            for p in kb.concepts[cid].parents:
                edges.add((cid, p, "est-un"))
    if mode in ("assertional", "full"):
        for cid in kb.concepts:
            for r in kb.concepts[cid].assertional_relations:
                edges.add((cid, r.target, r.relation_type))
    for src, dst, label in sorted(edges):
        lines.append(f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}" '
                     f'[label="{_dot_escape(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


# --------------------------------------------------------- term list import


def import_term_list(kb: KnowledgeBase, path) -> tuple[int, int]:
    """Batch-register terms from a sidecar file (one per line, tab-separated:
    surface, language, optional semicolon-separated variants; '#' lines are
    comments). Terms get source=corpus. Returns (created, skipped); existing
    surfaces are skipped, not errors."""
    text = Path(path).read_text(encoding="utf-8")
    created = skipped = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#") or not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ParseError(
                f"line {lineno}: expected 2 or 3 tab-separated fields, "
                f"got {len(fields)}")
        surface, language = fields[0], fields[1]
        variants = [v for v in fields[2].split(";") if v.strip()] \
            if len(fields) == 3 else []
        if not surface.strip():
            raise ParseError(f"line {lineno}: empty surface")
        if not language.strip():
            raise ParseError(f"line {lineno}: empty language")
        try:
            kb.create_term(surface, language.strip(), variants=variants,
                           source="corpus")
            created += 1
        except DuplicateSurface:
            skipped += 1
    return created, skipped
