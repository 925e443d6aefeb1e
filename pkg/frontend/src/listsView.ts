// Alphabetical access: the term and concept inventories as served (ordered by
// normalized surface server-side). Clicking opens the inspector.

import { api } from "./api";
import { el } from "./dom";

export interface ListsCallbacks {
  onSelectTerm(id: string): void;
  onSelectConcept(id: string): void;
}

export async function renderListsView(
  container: HTMLElement,
  callbacks: ListsCallbacks,
): Promise<void> {
  const [terms, concepts] = await Promise.all([api.terms(), api.concepts()]);

  const wrapper = el("div", { class: "lists" });

  const termCol = el("div", { class: "list-column" });
  termCol.append(el("h2", {}, [`Termes (${terms.length})`]));
  const termList = el("ul", { "data-testid": "term-list" });
  for (const term of terms) {
    const button = el("button", { class: "linkish", "data-term-id": term.id },
                      [term.surface]);
    button.addEventListener("click", () => callbacks.onSelectTerm(term.id));
    termList.append(el("li", {}, [
      button, el("span", { class: "muted" }, [` · ${term.language}`]),
    ]));
  }
  termCol.append(termList);

  const conceptCol = el("div", { class: "list-column" });
  conceptCol.append(el("h2", {}, [`Concepts (${concepts.length})`]));
  const conceptList = el("ul", { "data-testid": "concept-list" });
  for (const concept of concepts) {
    const button = el("button", {
      class: "linkish", "data-concept-id": concept.id,
    }, [concept.surface ?? concept.id]);
    button.addEventListener("click",
                            () => callbacks.onSelectConcept(concept.id));
    conceptList.append(el("li", {}, [button]));
  }
  conceptCol.append(conceptList);

  wrapper.append(termCol, conceptCol);
  container.append(wrapper);
}
