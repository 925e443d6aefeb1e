// Application shell: tab bar (graph / corpus / lists / entry), viewpoint
// filter, service-unreachable banner, and the inspector panel. All rendering
// re-fetches from the service; no derived knowledge is computed client-side
// and no optimistic state survives a failed request.

import { api, ServiceUnreachable, setApiBase } from "./api";
import { renderCorpusView } from "./corpusView";
import { clear, el } from "./dom";
import { renderForms } from "./forms";
import { renderGraphView } from "./graphView";
import { renderInspector } from "./inspector";
import { renderListsView } from "./listsView";
import { initialState, type Tab, type ViewState } from "./state";
import type { GraphMode } from "./types";

const TAB_LABELS: Record<Tab, string> = {
  graph: "Réseau conceptuel",
  corpus: "Corpus",
  lists: "Listes alphabétiques",
  edit: "Édition",
};

export class App {
  state: ViewState = initialState();
  private banner: HTMLElement;
  private tabs: HTMLElement;
  private filter: HTMLSelectElement;
  private main: HTMLElement;
  private panel: HTMLElement;
  private queue: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, apiBase = "") {
    setApiBase(apiBase);
    this.banner = el("div", { class: "banner", hidden: "",
                              "data-testid": "banner" });
    this.tabs = el("nav", { class: "tabs" });
    this.filter = el("select", { class: "viewpoint-filter",
                                 "data-testid": "viewpoint-filter" });
    const topbar = el("header", { class: "topbar" }, [
      el("h1", {}, ["Base de connaissances terminologiques"]),
      this.tabs,
      el("label", { class: "filter-label" },
         ["Point de vue : ", this.filter]),
    ]);
    this.main = el("main", { class: "main" });
    this.panel = el("aside", { class: "inspector",
                               "data-testid": "inspector", hidden: "" });
    root.append(this.banner, topbar,
                el("div", { class: "content" }, [this.main, this.panel]));
    this.filter.addEventListener("change", () => {
      this.update({ viewpointFilter: this.filter.value || null });
    });
  }

  /** Serialize async work; lets tests `await app.idle`. */
  private run(task: () => Promise<void>): Promise<void> {
    this.queue = this.queue
      .then(task)
      .then(() => this.hideBanner())
      .catch(err => this.handleFailure(err));
    return this.queue;
  }

  get idle(): Promise<void> {
    return this.queue;
  }

  start(): Promise<void> {
    return this.run(() => this.render());
  }

  update(partial: Partial<ViewState>): Promise<void> {
    this.state = { ...this.state, ...partial };
    return this.run(() => this.render());
  }

  private handleFailure(err: unknown): void {
    if (err instanceof ServiceUnreachable) {
      this.banner.textContent =
        "Service injoignable — vérifiez que `tkb serve` est lancé.";
      this.banner.removeAttribute("hidden");
      return;
    }
    this.banner.textContent = `Erreur inattendue : ${String(err)}`;
    this.banner.removeAttribute("hidden");
  }

  private hideBanner(): void {
    this.banner.setAttribute("hidden", "");
  }

  private async render(): Promise<void> {
    await this.renderTabs();
    await this.renderFilter();
    clear(this.main);
    const { state } = this;
    switch (state.tab) {
      case "graph":
        await renderGraphView(this.main, state.graphMode, {
          onSelectConcept: id =>
            void this.update({ selection: { kind: "concept", id } }),
          onModeChange: mode =>
            void this.update({ graphMode: mode as GraphMode }),
        });
        break;
      case "corpus":
        await renderCorpusView(this.main, state.selectedDocument, {
          onSelectDocument: id => void this.update({ selectedDocument: id }),
          onSelectConcept: id =>
            void this.update({ selection: { kind: "concept", id } }),
          onAnchorRequest: prefill =>
            void this.update({ pendingAnchor: prefill, tab: "edit" }),
        });
        break;
      case "lists":
        await renderListsView(this.main, {
          onSelectTerm: id =>
            void this.update({ selection: { kind: "term", id } }),
          onSelectConcept: id =>
            void this.update({ selection: { kind: "concept", id } }),
        });
        break;
      case "edit":
        await renderForms(this.main, state.pendingAnchor, {
          onMutated: () => void this.update({ pendingAnchor: null }),
          onSelectConcept: id =>
            void this.update({ selection: { kind: "concept", id } }),
        });
        break;
    }
    await renderInspector(this.panel, state.selection, state.viewpointFilter, {
      onSelectConcept: id =>
        void this.update({ selection: { kind: "concept", id } }),
      onStaleSelection: () => {
        this.state = { ...this.state, selection: null };
      },
    });
  }

  private async renderTabs(): Promise<void> {
    clear(this.tabs);
    for (const tab of Object.keys(TAB_LABELS) as Tab[]) {
      const button = el("button", {
        class: tab === this.state.tab ? "tab active" : "tab",
        "data-tab": tab,
      }, [TAB_LABELS[tab]]);
      button.addEventListener("click", () => void this.update({ tab }));
      this.tabs.append(button);
    }
  }

  private async renderFilter(): Promise<void> {
    const viewpoints = await api.viewpoints();
    clear(this.filter);
    this.filter.append(el("option", { value: "" }, ["tous"]));
    for (const viewpoint of viewpoints) {
      const option = el("option", { value: viewpoint.id }, [viewpoint.name]);
      if (viewpoint.id === this.state.viewpointFilter) {
        option.setAttribute("selected", "");
      }
      this.filter.append(option);
    }
  }
}

export function mount(root: HTMLElement, apiBase = ""): App {
  const app = new App(root, apiBase);
  void app.start();
  return app;
}

declare global {
  interface Window {
    tkbApp?: App;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    window.tkbApp = mount(root);
  }
}
