/** Frozen wire fixtures: verbatim captures of live service responses for
 * the lead-protection demo store. If the server changes shape, refresh
 * these from a real session rather than editing by hand. */

import type { CheckResponse, ErrorEnvelope, GraphResponse, OntologyProperty } from '../src/types.js';

export const GRAPH_LEAD_PROTECTION: GraphResponse = {
  root: 'http://localhost/Lead_protection',
  depth: 2,
  nodes: [
    {
      resource: 'http://localhost/Lead_protection',
      local: 'Lead_protection',
      label: 'Lead protection',
      card_id: 'Lead_protection',
      depth: 0,
    },
    {
      resource: 'http://localhost/mecanism',
      local: 'mecanism',
      label: 'Mecanism',
      card_id: 'Lead_protection',
      depth: 1,
    },
    {
      resource: 'http://localhost/Cap',
      local: 'Cap',
      label: 'Cap',
      card_id: 'Lead_protection',
      depth: 1,
    },
    {
      resource: 'http://localhost/Closer',
      local: 'Closer',
      label: 'Closer',
      card_id: 'Lead_protection',
      depth: 2,
    },
    {
      resource: 'http://localhost/clip',
      local: 'clip',
      label: 'Clip',
      card_id: 'Lead_protection',
      depth: 2,
    },
  ],
  edges: [
    { from: 'http://localhost/Lead_protection', to: 'http://localhost/mecanism', relation: 'aggregation' },
    { from: 'http://localhost/Lead_protection', to: 'http://localhost/Cap', relation: 'aggregation' },
    { from: 'http://localhost/Cap', to: 'http://localhost/Closer', relation: 'composition' },
    { from: 'http://localhost/Cap', to: 'http://localhost/clip', relation: 'composition' },
  ],
};

export const GRAPH_CAP: GraphResponse = {
  root: 'http://localhost/Cap',
  depth: 2,
  nodes: [
    { resource: 'http://localhost/Cap', local: 'Cap', label: 'Cap', card_id: 'Lead_protection', depth: 0 },
    { resource: 'http://localhost/Closer', local: 'Closer', label: 'Closer', card_id: 'Lead_protection', depth: 1 },
    { resource: 'http://localhost/clip', local: 'clip', label: 'Clip', card_id: 'Lead_protection', depth: 1 },
  ],
  edges: [
    { from: 'http://localhost/Cap', to: 'http://localhost/Closer', relation: 'composition' },
    { from: 'http://localhost/Cap', to: 'http://localhost/clip', relation: 'composition' },
  ],
};

export const CHECK_AT_30: CheckResponse = {
  holds: true,
  context: 'interior_diameter',
  lhs_value: 7.0,
  rhs_value: 7.0,
  residual: 0.0,
  violated_subterms: [],
};

export const CHECK_AT_20: CheckResponse = {
  holds: false,
  context: 'interior_diameter',
  lhs_value: 7.0,
  rhs_value: 5.420201433256687,
  residual: 1.579798566743313,
  violated_subterms: [[32, 110]],
};

export const CHECK_PARSE_ERROR: ErrorEnvelope = {
  error: {
    code: 'PARSE_ERROR',
    message: "unexpected end of input, expected one of [')']",
    detail: { offset: 22 },
  },
};

export const MISSING_SECTION_400: ErrorEnvelope = {
  error: {
    code: 'VALIDATION_FAILED',
    message: '1 violation(s), first: MISSING_SECTION at lexicon',
    detail: [
      {
        code: 'MISSING_SECTION',
        path: 'lexicon',
        message: 'kind vocabulary.lexicon requires section lexicon',
      },
    ],
  },
};

export const ONTOLOGY: OntologyProperty[] = [
  {
    property: 'http://localhost/rdfs/lbn-v1.2#aggregation',
    local: 'aggregation',
    labels: [{ text: 'relation of weak aggregation between two resources', lang: 'Fr' }],
    super_properties: ['http://localhost/rdfs/lbn-v1.2#semantique_metier'],
  },
  {
    property: 'http://localhost/rdfs/lbn-v1.2#association',
    local: 'association',
    labels: [{ text: 'relation of association between two resources', lang: 'Fr' }],
    super_properties: ['http://localhost/rdfs/lbn-v1.2#semantique_metier'],
  },
  {
    property: 'http://localhost/rdfs/lbn-v1.2#composition',
    local: 'composition',
    labels: [{ text: 'relation of strong aggregation between two resources', lang: 'Fr' }],
    super_properties: ['http://localhost/rdfs/lbn-v1.2#semantique_metier'],
  },
  {
    property: 'http://localhost/rdfs/lbn-v1.2#semantique_metier',
    local: 'semantique_metier',
    labels: [{ text: 'generic craft-semantics relation between two resources', lang: 'Fr' }],
    super_properties: [],
  },
];
