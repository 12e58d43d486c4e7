/** Wire types for the knowcard HTTP API. */

export type SectionName =
  | 'lexicon'
  | 'concept-network'
  | 'statechart'
  | 'collaboration'
  | 'constraints'
  | 'narrative';

export interface Violation {
  code: string;
  path: string;
  message: string;
}

export interface ErrorEnvelope {
  error: {
    code: string;
    message: string;
    detail?: unknown;
  };
}

export interface CardListItem {
  id: string;
  kind: string;
  title: string;
}

export interface CardMetadataJson {
  title: string;
  creator: string;
  date: string;
  description: string | null;
  language: string | null;
}

export interface LexiconEntryJson {
  term: string;
  definition: string;
}

export interface ConceptJson {
  id: string;
  label: string;
}

export interface RelationJson {
  kind: string;
  from: string;
  to: string;
  label: string | null;
}

export interface ConceptNetworkJson {
  concepts: ConceptJson[];
  relations: RelationJson[];
}

export interface StateChartJson {
  states: { id: string; label: string }[];
  initial: string;
  transitions: { from: string; to: string; event: string }[];
}

export interface CollaborationJson {
  objects: { id: string; label: string }[];
  messages: { seq: number; from: string; to: string; label: string }[];
}

export interface ConstraintJson {
  source: string;
  context: string;
}

export interface NarrativeJson {
  text: string;
  figures: string[];
}

export interface CardJson {
  id: string;
  kind: string;
  version: number;
  metadata: CardMetadataJson;
  sections: {
    lexicon?: LexiconEntryJson[];
    'concept-network'?: ConceptNetworkJson;
    statechart?: StateChartJson;
    collaboration?: CollaborationJson;
    constraints?: ConstraintJson[];
    narrative?: NarrativeJson;
  };
}

export interface RelatedItem {
  resource: string;
  card_id: string | null;
}

export interface GraphNode {
  resource: string;
  local: string;
  label: string | null;
  card_id: string | null;
  depth: number;
}

export interface GraphEdge {
  from: string;
  to: string;
  relation: string;
}

export interface GraphResponse {
  root: string;
  depth: number;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface CheckRequest {
  constraint: string;
  bindings: Record<string, number>;
  angle_unit?: 'degrees' | 'radians';
  rel_tol?: number;
  abs_tol?: number;
}

export interface CheckResponse {
  holds: boolean;
  context: string;
  lhs_value: number | null;
  rhs_value: number | null;
  residual: number | null;
  violated_subterms: [number, number][];
}

export interface OntologyProperty {
  property: string;
  local: string;
  labels: { text: string; lang: string | null }[];
  super_properties: string[];
}
