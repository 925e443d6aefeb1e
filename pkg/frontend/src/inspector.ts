// Frame inspector: the concept's normalized description, effective attributes
// (inherited entries badged with their origin), assertional relations with
// their definition texts, designating terms grouped by viewpoint, and each
// usage shown in context. Every value displayed comes from the service.

import { api, ApiError } from "./api";
import { clear, el } from "./dom";
import type { Selection } from "./state";
import type { ContextRow, Designator, Frame } from "./types";

export interface InspectorCallbacks {
  onSelectConcept(id: string): void;
  onStaleSelection(): void;
}

export async function renderInspector(
  panel: HTMLElement,
  selection: Selection,
  viewpointFilter: string | null,
  callbacks: InspectorCallbacks,
): Promise<void> {
  clear(panel);
  if (!selection) {
    panel.hidden = true;
    return;
  }
  panel.hidden = false;
  try {
    if (selection.kind === "concept") {
      await renderConcept(panel, selection.id, viewpointFilter, callbacks);
    } else {
      await renderTerm(panel, selection.id, viewpointFilter, callbacks);
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      panel.append(el("p", { class: "notice" },
                      ["La sélection n'existe plus."]));
      callbacks.onStaleSelection();
      return;
    }
    throw err;
  }
}

async function renderConcept(
  panel: HTMLElement,
  conceptId: string,
  viewpointFilter: string | null,
  callbacks: InspectorCallbacks,
): Promise<void> {
  const frame = await api.frame(conceptId);
  const designators = await api.designators(conceptId);

  panel.append(el("h2", { "data-testid": "inspector-title" },
                  [frame.surface ?? frame.concept]));
  panel.append(el("p", { class: "description",
                         "data-testid": "inspector-description" },
                  [frame.description]));
  renderSubsumers(panel, frame, callbacks);
  renderAttributes(panel, frame);
  renderRelations(panel, frame, callbacks);
  await renderDesignators(panel, designators, viewpointFilter);
}

function renderSubsumers(panel: HTMLElement, frame: Frame,
                         callbacks: InspectorCallbacks): void {
  const others = frame.subsumers.filter(s => s !== frame.concept);
  if (!others.length) return;
  const line = el("p", { class: "subsumers" }, ["est-un : "]);
  others.forEach((id, index) => {
    if (index) line.append(", ");
    const button = el("button", { class: "linkish", "data-subsumer": id },
                      [id]);
    button.addEventListener("click", () => callbacks.onSelectConcept(id));
    line.append(button);
  });
  panel.append(line);
}

function renderAttributes(panel: HTMLElement, frame: Frame): void {
  const effective = frame.attributes.filter(a => !a.shadowed);
  if (!effective.length) return;
  panel.append(el("h3", {}, ["Attributs"]));
  const table = el("table", { class: "attributes" });
  for (const attr of effective) {
    const row = el("tr", { "data-attr-key": attr.key });
    row.append(el("td", {}, [attr.key]));
    row.append(el("td", {}, [attr.value]));
    const originCell = el("td", {});
    if (attr.origin !== frame.concept) {
      originCell.append(el("span", {
        class: "origin-badge",
        "data-origin": attr.origin,
        title: `hérité de ${attr.origin}`,
      }, [`hérité de ${attr.origin}`]));
    }
    row.append(originCell);
    table.append(row);
  }
  panel.append(table);
}

function renderRelations(panel: HTMLElement, frame: Frame,
                         callbacks: InspectorCallbacks): void {
  if (!frame.relations.length) return;
  panel.append(el("h3", {}, ["Relations assertionnelles"]));
  const list = el("ul", { class: "relations" });
  for (const rel of frame.relations) {
    const item = el("li", { "data-relation": rel.relation_type });
    const target = el("button", { class: "linkish" }, [rel.target]);
    target.addEventListener("click",
                            () => callbacks.onSelectConcept(rel.target));
    item.append(el("span", { class: "relation-type" }, [rel.relation_type]),
                " → ", target);
    if (rel.definition_text) {
      item.append(el("span", { class: "definition" },
                     [` — ${rel.definition_text}`]));
    }
    if (rel.origin !== frame.concept) {
      item.append(el("span", { class: "origin-badge" },
                     [` hérité de ${rel.origin}`]));
    }
    list.append(item);
  }
  panel.append(list);
}

async function renderDesignators(
  panel: HTMLElement,
  designators: Designator[],
  viewpointFilter: string | null,
): Promise<void> {
  panel.append(el("h3", {}, ["Termes désignants"]));
  const shown = viewpointFilter
    ? designators.filter(d => d.viewpoints.includes(viewpointFilter))
    : designators;
  const section = el("div", { class: "designators",
                              "data-testid": "designators" });
  if (!shown.length) {
    section.append(el("p", { class: "empty-state" },
                      ["Aucun terme désignant."]));
  }
  for (const row of shown) {
    const block = el("div", { class: "designator", "data-term": row.term });
    block.append(el("strong", {}, [row.surface]));
    block.append(el("span", { class: "viewpoints" },
                    [` (${row.viewpoint_names.join(", ")})`]));
    const contexts = await api.contexts(row.link, 40);
    block.append(renderContexts(contexts));
    section.append(block);
  }
  panel.append(section);
}

function renderContexts(contexts: ContextRow[]): HTMLElement {
  const list = el("ul", { class: "contexts" });
  for (const ctx of contexts) {
    const item = el("li", { class: "context", "data-unit": ctx.unit });
    item.append(ctx.left);
    item.append(el("mark", {}, [ctx.match]));
    item.append(ctx.right);
    list.append(item);
  }
  return list;
}

async function renderTerm(
  panel: HTMLElement,
  termId: string,
  viewpointFilter: string | null,
  callbacks: InspectorCallbacks,
): Promise<void> {
  const term = await api.term(termId);
  const meanings = await api.meanings(termId);

  panel.append(el("h2", { "data-testid": "inspector-title" }, [term.surface]));
  const facts = el("p", { class: "term-facts" }, [
    `${term.language} · ${term.grammatical_category || "catégorie inconnue"}`
    + ` · source : ${term.source}`,
  ]);
  panel.append(facts);
  if (term.form_variants.length) {
    panel.append(el("p", {}, [`Variantes : ${term.form_variants.join(", ")}`]));
  }

  panel.append(el("h3", {}, ["Interprétations"]));
  const list = el("ul", { class: "meanings", "data-testid": "meanings" });
  const shown = viewpointFilter
    ? meanings.filter(m => m.viewpoint === viewpointFilter)
    : meanings;
  for (const meaning of shown) {
    const item = el("li", {});
    const button = el("button", { class: "linkish" },
                      [meaning.concept_surface ?? meaning.concept]);
    button.addEventListener("click",
                            () => callbacks.onSelectConcept(meaning.concept));
    item.append(el("em", {}, [meaning.viewpoint_name]), " : ", button);
    list.append(item);
  }
  if (!shown.length) {
    list.append(el("li", { class: "empty-state" },
                   ["Aucune interprétation."]));
  }
  panel.append(list);

  for (const meaning of shown) {
    const synonyms = await api.synonyms(termId, meaning.viewpoint);
    if (synonyms.length) {
      panel.append(el("p", { class: "synonyms", "data-testid": "synonyms" }, [
        `Synonymes (${meaning.viewpoint_name}) : `
        + synonyms.map(s => s.surface).join(", "),
      ]));
    }
  }
}
