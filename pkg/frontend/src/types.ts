// Payload shapes of the knowledge-base service API (the envelope's data field).

export interface Envelope<T> {
  status: "ok" | "error";
  data?: T;
  error?: { code: string; message: string; entities: string[] };
}

export interface TermSummary {
  id: string;
  surface: string;
  language: string;
  grammatical_category: string;
  gender: string | null;
  number: string | null;
  form_variants: string[];
  decomposition: { role: string; term: string }[] | null;
  source: "corpus" | "interview";
}

export interface ConceptSummary {
  id: string;
  label: string;
  surface: string | null;
  description: string;
  parents: string[];
}

export interface FrameAttribute {
  key: string;
  value: string;
  origin: string;
  shadowed: boolean;
}

export interface FrameRelation {
  relation_type: string;
  target: string;
  definition_text: string;
  origin: string;
}

export interface Frame {
  concept: string;
  label: string;
  surface: string | null;
  description: string;
  subsumers: string[];
  attributes: FrameAttribute[];
  relations: FrameRelation[];
}

export interface Designator {
  term: string;
  surface: string;
  link: string;
  viewpoints: string[];
  viewpoint_names: string[];
}

export interface Meaning {
  viewpoint: string;
  viewpoint_name: string;
  concept: string;
  concept_surface: string | null;
  link: string | null;
}

export interface SynonymEntry {
  term: string;
  surface: string;
}

export interface ViewpointRow {
  id: string;
  name: string;
  description: string;
}

export interface NetworkNode {
  id: string;
  surface: string;
  depth: number;
}

export interface NetworkEdge {
  source: string;
  target: string;
  kind: "est-un" | "assertional";
  label: string;
}

export interface Network {
  mode: GraphMode;
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export type GraphMode = "hierarchy" | "assertional" | "full";

export interface DocumentRow {
  id: string;
  title: string;
  source_note: string;
  units: string[];
}

export interface DocumentDetail {
  id: string;
  title: string;
  source_note: string;
  units: { id: string; ordinal: number; content: string }[];
}

export interface AnnotationSpan {
  start: number;
  end: number;
  term: string;
  surface: string;
  links: string[];
}

export interface HighlightedUnit {
  unit: string;
  document: string;
  ordinal: number;
  content: string;
  annotations: AnnotationSpan[];
}

export interface ContextRow {
  link: string;
  unit: string;
  start: number;
  end: number;
  left: string;
  match: string;
  right: string;
}

export interface SearchHit {
  unit: string;
  start: number;
  end: number;
}

export interface LinkDetail {
  id: string;
  term: string;
  concept: string;
  viewpoints: string[];
  usages: { unit: string; start: number; end: number }[];
}

export interface Diagnostic {
  rule: string;
  severity: "error" | "warning";
  entities: string[];
  message: string;
}
