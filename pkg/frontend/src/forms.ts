// Entry forms: terms, viewpoints, concepts (with parent picker), links and
// usage anchors. Domain rejections are rendered inline with the error code
// and the conflicting entities navigable; nothing is applied client-side, a
// successful mutation triggers a full re-fetch of the affected views.

import { api, ApiError } from "./api";
import { clear, el } from "./dom";
import type { PendingAnchor } from "./state";
import type { ConceptSummary, TermSummary, ViewpointRow } from "./types";

export interface FormsCallbacks {
  onMutated(): void;
  onSelectConcept(id: string): void;
}

export async function renderForms(
  container: HTMLElement,
  pendingAnchor: PendingAnchor | null,
  callbacks: FormsCallbacks,
): Promise<void> {
  const [terms, concepts, viewpoints] = await Promise.all([
    api.terms(), api.concepts(), api.viewpoints(),
  ]);
  const grid = el("div", { class: "forms" });
  grid.append(termForm(callbacks));
  grid.append(viewpointForm(callbacks));
  grid.append(conceptForm(terms, concepts, callbacks));
  grid.append(linkForm(terms, concepts, viewpoints, callbacks));
  grid.append(await anchorForm(terms, pendingAnchor, callbacks));
  container.append(grid);
}

function errorBox(): HTMLElement {
  return el("div", { class: "form-error", "data-testid": "form-error",
                     hidden: "" });
}

function showError(box: HTMLElement, err: unknown,
                   callbacks: FormsCallbacks): void {
  clear(box);
  box.removeAttribute("hidden");
  if (err instanceof ApiError) {
    box.setAttribute("data-error-code", err.code);
    box.append(el("strong", {}, [err.code]), ` — ${err.message} `);
    for (const entity of err.entities) {
      if (entity.startsWith("c")) {
        const jump = el("button", { class: "linkish", "data-entity": entity },
                        [entity]);
        jump.addEventListener("click",
                              () => callbacks.onSelectConcept(entity));
        box.append(jump, " ");
      }
    }
  } else {
    box.append(String(err));
  }
}

function onSubmit(form: HTMLFormElement, box: HTMLElement,
                  callbacks: FormsCallbacks,
                  action: () => Promise<void>): void {
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    box.setAttribute("hidden", "");
    void action()
      .then(() => callbacks.onMutated())
      .catch(err => showError(box, err, callbacks));
  });
}

function field(label: string, input: HTMLElement): HTMLElement {
  return el("label", { class: "field" }, [label, input]);
}

function picker(name: string, rows: { value: string; text: string }[],
                preset?: string): HTMLSelectElement {
  const select = el("select", { name, "data-testid": `picker-${name}` });
  for (const row of rows) {
    const option = el("option", { value: row.value }, [row.text]);
    if (row.value === preset) option.setAttribute("selected", "");
    select.append(option);
  }
  return select;
}

function termForm(callbacks: FormsCallbacks): HTMLElement {
  const box = errorBox();
  const form = el("form", { class: "card", "data-testid": "form-term" });
  form.append(el("h3", {}, ["Nouveau terme"]));
  const surface = el("input", { name: "surface", required: "" });
  const language = el("input", { name: "language", value: "fr" });
  const category = el("input", { name: "category", placeholder: "nom" });
  const variants = el("input", { name: "variants",
                                 placeholder: "variantes ; séparées" });
  const source = picker("source", [
    { value: "corpus", text: "corpus" },
    { value: "interview", text: "entretien" },
  ]);
  form.append(field("Syntagme", surface), field("Langue", language),
              field("Catégorie", category), field("Variantes", variants),
              field("Source", source),
              el("button", { type: "submit" }, ["Créer le terme"]), box);
  onSubmit(form, box, callbacks, async () => {
    await api.createTerm({
      surface: surface.value,
      language: language.value,
      grammatical_category: category.value,
      form_variants: variants.value.split(";").map(v => v.trim())
        .filter(Boolean),
      source: source.value,
    });
    form.reset();
  });
  return form;
}

function viewpointForm(callbacks: FormsCallbacks): HTMLElement {
  const box = errorBox();
  const form = el("form", { class: "card", "data-testid": "form-viewpoint" });
  form.append(el("h3", {}, ["Nouveau point de vue"]));
  const name = el("input", { name: "name", required: "" });
  const description = el("input", { name: "description" });
  form.append(field("Nom (communauté de locuteurs)", name),
              field("Description", description),
              el("button", { type: "submit" }, ["Créer le point de vue"]),
              box);
  onSubmit(form, box, callbacks, async () => {
    await api.createViewpoint({ name: name.value,
                                description: description.value });
    form.reset();
  });
  return form;
}

function conceptForm(terms: TermSummary[], concepts: ConceptSummary[],
                     callbacks: FormsCallbacks): HTMLElement {
  const box = errorBox();
  const form = el("form", { class: "card", "data-testid": "form-concept" });
  form.append(el("h3", {}, ["Nouveau concept"]));
  const label = picker("label",
                       terms.map(t => ({ value: t.id, text: t.surface })));
  const description = el("textarea", { name: "description", rows: "2" });
  const attributes = el("input", {
    name: "attributes", placeholder: "clef=valeur; clef=valeur",
  });
  const parents = el("select", {
    name: "parents", multiple: "", "data-testid": "picker-parents",
  });
  for (const concept of concepts) {
    parents.append(el("option", { value: concept.id },
                      [concept.surface ?? concept.id]));
  }
  form.append(field("Terme-vedette", label),
              field("Description", description),
              field("Attributs", attributes),
              field("Concepts subsumants (est-un)", parents),
              el("button", { type: "submit" }, ["Créer le concept"]), box);
  onSubmit(form, box, callbacks, async () => {
    const pairs = attributes.value.split(";").map(p => p.trim())
      .filter(Boolean).map(pair => {
        const [key, ...rest] = pair.split("=");
        return { key: key.trim(), value: rest.join("=").trim() };
      });
    await api.createConcept({
      label: label.value,
      description: description.value,
      attributes: pairs,
      parents: [...parents.selectedOptions].map(o => o.value),
    });
    form.reset();
  });
  return form;
}

function linkForm(terms: TermSummary[], concepts: ConceptSummary[],
                  viewpoints: ViewpointRow[],
                  callbacks: FormsCallbacks): HTMLElement {
  const box = errorBox();
  const form = el("form", { class: "card", "data-testid": "form-link" });
  form.append(el("h3", {}, ["Lier terme et concept"]));
  const term = picker("term",
                      terms.map(t => ({ value: t.id, text: t.surface })));
  const concept = picker("concept", concepts.map(
    c => ({ value: c.id, text: c.surface ?? c.id })));
  const viewpoint = picker("viewpoint", viewpoints.map(
    v => ({ value: v.id, text: v.name })));
  form.append(field("Terme", term), field("Concept", concept),
              field("Point de vue", viewpoint),
              el("button", { type: "submit" }, ["Créer le lien"]), box);
  onSubmit(form, box, callbacks, async () => {
    await api.createLink({
      term: term.value, concept: concept.value, viewpoint: viewpoint.value,
    });
  });
  return form;
}

async function anchorForm(terms: TermSummary[],
                          pending: PendingAnchor | null,
                          callbacks: FormsCallbacks): Promise<HTMLElement> {
  const box = errorBox();
  const form = el("form", { class: "card", "data-testid": "form-anchor" });
  form.append(el("h3", {}, ["Ancrer un usage"]));

  const term = picker("term", terms.map(
    t => ({ value: t.id, text: t.surface })), pending?.term);
  const link = el("select", { name: "link", "data-testid": "picker-link" });
  const unit = el("input", { name: "unit", value: pending?.unit ?? "" });
  const start = el("input", { name: "start", type: "number",
                              value: String(pending?.start ?? 0) });
  const end = el("input", { name: "end", type: "number",
                            value: String(pending?.end ?? 0) });

  async function refillLinks(): Promise<void> {
    clear(link);
    if (!term.value) return;
    const meanings = await api.meanings(term.value);
    for (const meaning of meanings) {
      if (meaning.link) {
        link.append(el("option", { value: meaning.link }, [
          `${meaning.viewpoint_name} → ${meaning.concept_surface
            ?? meaning.concept}`,
        ]));
      }
    }
  }
  term.addEventListener("change", () => void refillLinks());
  if (terms.length) await refillLinks();

  if (pending) {
    form.append(el("p", { class: "notice", "data-testid": "anchor-prefill" }, [
      `Occurrence de « ${pending.surface} » dans ${pending.unit} `
      + `[${pending.start}:${pending.end}]`,
    ]));
  }
  form.append(field("Terme", term),
              field("Lien (désignation)", link),
              field("Unité textuelle", unit),
              field("Début", start), field("Fin", end),
              el("button", { type: "submit" }, ["Ancrer"]), box);
  onSubmit(form, box, callbacks, async () => {
    await api.addUsage(link.value, {
      unit: unit.value,
      start: Number(start.value),
      end: Number(end.value),
    });
  });
  return form;
}
