"""Corpus services: segmentation, occurrence indexing, concordances.

Documents are segmented into paragraph units at blank-line boundaries; the
prefix/separators/suffix around units are retained so that the original text
is reconstructible byte for byte. Matching is whole-word and case-insensitive
with no stemming: whitespace inside a multiword form matches any whitespace
run (so a term can span a line break inside a paragraph), and variants are
matched only when registered explicitly on the term.
"""

from __future__ import annotations

import re

from .errors import EmptyQuery, UnknownEntity
from .model import Annotation, Context, HighlightedUnit, Occurrence

# A paragraph separator: a newline followed by one or more blank(ish) lines.
_SEPARATOR = re.compile(r"\n(?:[ \t\r]*\n)+")


def segment_text(text: str) -> tuple[str, list[str], list[str], str]:
    """Split text into paragraph units.

    Returns (prefix, contents, separators, suffix) with
    len(separators) == max(len(contents) - 1, 0), such that
    prefix + contents interleaved with separators + suffix == text.
    """
    chunks: list[str] = []
    seps: list[str] = []
    pos = 0
    for m in _SEPARATOR.finditer(text):
        chunks.append(text[pos:m.start()])
        seps.append(m.group())
        pos = m.end()
    chunks.append(text[pos:])

    prefix = suffix = ""
    if chunks[0] == "" and seps:
        chunks.pop(0)
        prefix = seps.pop(0)
    if chunks and chunks[-1] == "" and seps:
        chunks.pop()
        suffix = seps.pop()
    if chunks == [""]:  # whitespace-only text folded entirely into prefix
        chunks = []
    return prefix, chunks, seps, suffix


def reconstruct(prefix: str, contents: list[str], seps: list[str], suffix: str) -> str:
    parts = [prefix]
    for i, c in enumerate(contents):
        if i:
            parts.append(seps[i - 1])
        parts.append(c)
    parts.append(suffix)
    return "".join(parts)


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _form_tokens(form: str) -> list[str]:
    return form.casefold().split()


def _match_tokens_at(content: str, start: int, tokens: list[str]) -> int | None:
    """Match tokens at start, any whitespace run between tokens; returns end."""
    pos = start
    n = len(content)
    for k, tok in enumerate(tokens):
        if k:
            ws = pos
            while pos < n and content[pos].isspace():
                pos += 1
            if pos == ws:
                return None
        end = pos + len(tok)
        if end > n or content[pos:end].casefold() != tok:
            return None
        pos = end
    return pos


def find_form_spans(content: str, forms: list[str]) -> list[tuple[int, int, str]]:
    """All non-overlapping whole-word matches of any form, longest match first.

    forms is a priority-ordered list (ties at equal span length go to the
    earlier form). Returns (start, end, form) triples in text order.
    """
    tokenized = [(f, _form_tokens(f)) for f in forms]
    tokenized = [(f, t) for f, t in tokenized if t]
    out: list[tuple[int, int, str]] = []
    i, n = 0, len(content)
    while i < n:
        if i > 0 and _is_word_char(content[i - 1]):
            i += 1
            continue
        best_end = -1
        best_form = None
        for f, toks in tokenized:
            end = _match_tokens_at(content, i, toks)
            if end is None or end <= i:
                continue
            if end < n and _is_word_char(content[end]):
                continue
            if end > best_end:
                best_end, best_form = end, f
        if best_form is not None:
            out.append((i, best_end, best_form))
            i = best_end
        else:
            i += 1
    return out


def _term_forms(term) -> list[str]:
    return [term.surface, *sorted(term.form_variants)]


def occurrences_in_unit(kb, term_id: str, unit_id: str) -> list[Occurrence]:
    term = kb.term(term_id)
    unit = kb.text_unit(unit_id)
    return [
        Occurrence(term_id, unit_id, s, e, f)
        for s, e, f in find_form_spans(unit.content, _term_forms(term))
    ]


def index_occurrences(kb, term_id: str) -> list[Occurrence]:
    """Every occurrence of the term across the corpus, in (document, ordinal,
    start) order."""
    term = kb.term(term_id)
    forms = _term_forms(term)
    out: list[Occurrence] = []
    for doc_id in sorted(kb.documents):
        for unit_id in kb.documents[doc_id].units:
            content = kb.units[unit_id].content
            for s, e, f in find_form_spans(content, forms):
                out.append(Occurrence(term_id, unit_id, s, e, f))
    return out


def contexts_of(kb, link_id: str, window: int) -> list[Context]:
    """One keyword-in-context excerpt per usage anchor on the link, windows
    clipped at unit boundaries."""
    if window < 0:
        raise ValueError("window must be >= 0")
    lk = kb.link_record(link_id)
    out = []
    for a in sorted(lk.usages, key=lambda a: (a.unit, a.start, a.end)):
        content = kb.text_unit(a.unit).content
        left = content[max(0, a.start - window):a.start]
        right = content[a.end:min(len(content), a.end + window)]
        out.append(Context(link_id, a.unit, a.start, a.end,
                           left, content[a.start:a.end], right))
    return out


def keyword_search(kb, query: str) -> list[tuple[str, int, int]]:
    """Case-insensitive substring hits (unit id, start, end) across all units."""
    q = query.strip()
    if not q:
        raise EmptyQuery("query is empty after normalization")
    qcf = q.casefold()
    out: list[tuple[str, int, int]] = []
    for doc_id in sorted(kb.documents):
        for unit_id in kb.documents[doc_id].units:
            content = kb.units[unit_id].content
            ccf = content.casefold()
            if len(ccf) == len(content) and len(qcf) == len(q):
                j = ccf.find(qcf)
                while j != -1:
                    out.append((unit_id, j, j + len(q)))
                    j = ccf.find(qcf, j + 1)
            else:
                # length-changing case folds: fall back to position-wise slices
                for i in range(len(content) - len(q) + 1):
                    if content[i:i + len(q)].casefold() == qcf:
                        out.append((unit_id, i, i + len(q)))
    return out


def highlighted_unit(kb, unit_id: str) -> HighlightedUnit:
    """The unit's content annotated with every occurrence of every linked term.

    Overlaps across terms are resolved by a longest-match greedy scan; each
    annotation carries the link ids whose usage anchors cover its span.
    """
    unit = kb.text_unit(unit_id)
    linked_terms = sorted({l.term for l in kb.links.values()})
    candidates: list[tuple[int, int, str]] = []
    for term_id in linked_terms:
        forms = _term_forms(kb.terms[term_id])
        for s, e, _f in find_form_spans(unit.content, forms):
            candidates.append((s, e, term_id))
    candidates.sort(key=lambda c: (c[0], -c[1], c[2]))

    annotations = []
    pos = 0
    for s, e, term_id in candidates:
        if s < pos:
            continue
        links = sorted(
            l.id for l in kb.links.values()
            if l.term == term_id and any(
                u.unit == unit_id and u.start <= s and e <= u.end
                for u in l.usages)
        )
        annotations.append(Annotation(s, e, term_id, tuple(links)))
        pos = e
    return HighlightedUnit(unit_id, unit.content, tuple(annotations))
