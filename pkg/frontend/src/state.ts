// View state: what is selected, which graph mode and tab are active, and any
// pending form prefill. The viewpoint filter restricts synonym/designator
// displays only; it never hides structure.

import type { GraphMode } from "./types";

export type Tab = "graph" | "corpus" | "lists" | "edit";

export type Selection =
  | { kind: "concept"; id: string }
  | { kind: "term"; id: string }
  | null;

export interface PendingAnchor {
  term: string;
  surface: string;
  unit: string;
  start: number;
  end: number;
}

export interface ViewState {
  tab: Tab;
  graphMode: GraphMode;
  selection: Selection;
  viewpointFilter: string | null;
  selectedDocument: string | null;
  pendingAnchor: PendingAnchor | null;
}

export function initialState(): ViewState {
  return {
    tab: "graph",
    graphMode: "hierarchy",
    selection: null,
    viewpointFilter: null,
    selectedDocument: null,
    pendingAnchor: null,
  };
}
