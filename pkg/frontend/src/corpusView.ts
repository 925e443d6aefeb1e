// Corpus access: documents rendered unit by unit with identified terms
// highlighted. An anchored highlight navigates to the concept its link
// designates; an unanchored one opens the usage-anchoring form prefilled.
// The keyword search box queries the service directly.

import { api } from "./api";
import { clear, el } from "./dom";
import type { PendingAnchor } from "./state";
import type { AnnotationSpan, HighlightedUnit } from "./types";

export interface CorpusCallbacks {
  onSelectDocument(id: string): void;
  onSelectConcept(id: string): void;
  onAnchorRequest(prefill: PendingAnchor): void;
}

export async function renderCorpusView(
  container: HTMLElement,
  selectedDocument: string | null,
  callbacks: CorpusCallbacks,
): Promise<void> {
  const documents = await api.documents();

  const bar = el("div", { class: "toolbar" });
  const picker = el("select", { "data-testid": "document-picker" });
  picker.append(el("option", { value: "" }, ["— choisir un document —"]));
  for (const doc of documents) {
    const option = el("option", { value: doc.id }, [doc.title]);
    if (doc.id === selectedDocument) option.setAttribute("selected", "");
    picker.append(option);
  }
  picker.addEventListener("change", () => {
    if (picker.value) callbacks.onSelectDocument(picker.value);
  });
  bar.append(picker);

  const searchBox = el("input", {
    type: "search", placeholder: "mot clé…", "data-testid": "search-input",
  });
  const searchButton = el("button", {}, ["Rechercher"]);
  const results = el("div", { class: "search-results",
                              "data-testid": "search-results" });
  searchButton.addEventListener("click", () => {
    void runSearch(searchBox.value, results);
  });
  searchBox.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") {
      void runSearch(searchBox.value, results);
    }
  });
  bar.append(searchBox, searchButton);
  container.append(bar, results);

  if (documents.length === 0) {
    container.append(el("p", { class: "empty-state" },
                        ["Aucun document dans le corpus."]));
    return;
  }
  const docId = selectedDocument ?? documents[0].id;
  const detail = await api.document(docId);
  const body = el("div", { class: "document", "data-document": docId });
  body.append(el("h2", {}, [detail.title]));
  if (detail.source_note) {
    body.append(el("p", { class: "source-note" }, [detail.source_note]));
  }
  for (const unit of detail.units) {
    const highlighted = await api.highlighted(unit.id);
    body.append(renderUnit(highlighted, callbacks));
  }
  container.append(body);
}

async function runSearch(query: string, results: HTMLElement): Promise<void> {
  clear(results);
  if (!query.trim()) return;
  const hits = await api.search(query);
  results.append(el("p", {}, [`${hits.length} occurrence(s)`]));
  for (const hit of hits.slice(0, 50)) {
    results.append(el("span", {
      class: "hit", "data-unit": hit.unit,
    }, [`${hit.unit} [${hit.start}:${hit.end}] `]));
  }
}

function renderUnit(unit: HighlightedUnit,
                    callbacks: CorpusCallbacks): HTMLElement {
  const paragraph = el("p", {
    class: "unit", "data-unit-id": unit.unit,
    "data-ordinal": String(unit.ordinal),
  });
  let cursor = 0;
  for (const annotation of unit.annotations) {
    if (annotation.start > cursor) {
      paragraph.append(unit.content.slice(cursor, annotation.start));
    }
    paragraph.append(renderAnnotation(unit, annotation, callbacks));
    cursor = annotation.end;
  }
  if (cursor < unit.content.length) {
    paragraph.append(unit.content.slice(cursor));
  }
  return paragraph;
}

function renderAnnotation(unit: HighlightedUnit, annotation: AnnotationSpan,
                          callbacks: CorpusCallbacks): HTMLElement {
  const mark = el("mark", {
    class: annotation.links.length ? "anchored" : "unanchored",
    "data-term": annotation.term,
    "data-links": annotation.links.join(" "),
    title: annotation.surface,
  }, [unit.content.slice(annotation.start, annotation.end)]);
  mark.addEventListener("click", () => {
    if (annotation.links.length) {
      void api.link(annotation.links[0]).then(
        link => callbacks.onSelectConcept(link.concept));
    } else {
      callbacks.onAnchorRequest({
        term: annotation.term,
        surface: annotation.surface,
        unit: unit.unit,
        start: annotation.start,
        end: annotation.end,
      });
    }
  });
  return mark;
}
