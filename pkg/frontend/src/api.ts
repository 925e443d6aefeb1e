// Typed client for the knowledge-base service. Every request unwraps the
// {status, data|error} envelope; domain errors become ApiError (code =
// server-side error class name), network failures become ServiceUnreachable.

import type {
  ConceptSummary,
  ContextRow,
  Designator,
  Diagnostic,
  DocumentDetail,
  DocumentRow,
  Envelope,
  Frame,
  GraphMode,
  HighlightedUnit,
  LinkDetail,
  Meaning,
  Network,
  SearchHit,
  SynonymEntry,
  TermSummary,
  ViewpointRow,
} from "./types";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public entities: string[],
    public status: number,
  ) {
    super(message);
  }
}

export class ServiceUnreachable extends Error {}

let baseUrl = "";

export function setApiBase(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(baseUrl + path, init);
  } catch (err) {
    throw new ServiceUnreachable(String(err));
  }
  let body: Envelope<T> | null = null;
  try {
    body = (await response.json()) as Envelope<T>;
  } catch {
    body = null;
  }
  if (!body || body.status !== "ok" || body.data === undefined) {
    const error = body?.error;
    throw new ApiError(
      error?.code ?? "UnknownError",
      error?.message ?? `${response.status} ${response.statusText}`,
      error?.entities ?? [],
      response.status,
    );
  }
  return body.data;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export const api = {
  terms: () => request<TermSummary[]>("/terms"),
  term: (id: string) => request<TermSummary>(`/terms/${id}`),
  meanings: (id: string) => request<Meaning[]>(`/terms/${id}/meanings`),
  synonyms: (id: string, viewpoint: string) =>
    request<SynonymEntry[]>(
      `/terms/${id}/synonyms?viewpoint=${encodeURIComponent(viewpoint)}`),

  concepts: () => request<ConceptSummary[]>("/concepts"),
  frame: (id: string) => request<Frame>(`/concepts/${id}/frame`),
  designators: (id: string) =>
    request<Designator[]>(`/concepts/${id}/designators`),

  network: (mode: GraphMode) => request<Network>(`/network?mode=${mode}`),
  viewpoints: () => request<ViewpointRow[]>("/viewpoints"),
  documents: () => request<DocumentRow[]>("/documents"),
  document: (id: string) => request<DocumentDetail>(`/documents/${id}`),
  highlighted: (unit: string) =>
    request<HighlightedUnit>(`/units/${unit}/highlighted`),
  contexts: (link: string, window = 40) =>
    request<ContextRow[]>(`/links/${link}/contexts?window=${window}`),
  link: (id: string) => request<LinkDetail>(`/links/${id}`),
  search: (q: string) =>
    request<SearchHit[]>(`/search?q=${encodeURIComponent(q)}`),
  diagnostics: () => request<Diagnostic[]>("/diagnostics"),

  createTerm: (body: {
    surface: string;
    language: string;
    grammatical_category?: string;
    form_variants?: string[];
    source?: string;
  }) => post<{ id: string }>("/terms", body),
  createViewpoint: (body: { name: string; description?: string }) =>
    post<{ id: string }>("/viewpoints", body),
  createConcept: (body: {
    label: string;
    description?: string;
    attributes?: { key: string; value: string }[];
    parents?: string[];
  }) => post<{ id: string }>("/concepts", body),
  createLink: (body: { term: string; concept: string; viewpoint: string }) =>
    post<{ id: string }>("/links", body),
  addUsage: (link: string, body: { unit: string; start: number; end: number }) =>
    post<unknown>(`/links/${link}/usages`, body),
};
