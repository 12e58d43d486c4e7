/** The twelve card kinds and the sections each one requires.
 * Mirrors the server's rules; the server stays authoritative. */

import type { SectionName } from './types.js';

export const KINDS = [
  'culture.history',
  'culture.geography',
  'culture.physic',
  'process.strategy',
  'process.tactic',
  'process.diary',
  'appraise.payment',
  'appraise.use',
  'appraise.freedom',
  'vocabulary.semantics',
  'vocabulary.syntax',
  'vocabulary.lexicon',
] as const;

export type Kind = (typeof KINDS)[number];

export const SECTION_ORDER: SectionName[] = [
  'lexicon',
  'concept-network',
  'statechart',
  'collaboration',
  'constraints',
  'narrative',
];

export const SECTION_LABELS: Record<SectionName, string> = {
  lexicon: 'Lexicon',
  'concept-network': 'Concept network',
  statechart: 'Statechart',
  collaboration: 'Collaboration',
  constraints: 'Constraints',
  narrative: 'Narrative',
};

export const REQUIRED_SECTIONS: Record<Kind, SectionName[]> = {
  'culture.history': ['narrative'],
  'culture.geography': ['concept-network'],
  'culture.physic': ['statechart', 'collaboration'],
  'process.strategy': ['collaboration'],
  'process.tactic': ['statechart'],
  'process.diary': ['concept-network', 'statechart'],
  'appraise.payment': ['constraints', 'narrative'],
  'appraise.use': ['constraints', 'narrative'],
  'appraise.freedom': ['narrative'],
  'vocabulary.semantics': ['concept-network'],
  'vocabulary.syntax': ['concept-network'],
  'vocabulary.lexicon': ['lexicon'],
};

export function requiredSections(kind: Kind): SectionName[] {
  return REQUIRED_SECTIONS[kind];
}

export function isKind(value: string): value is Kind {
  return (KINDS as readonly string[]).includes(value);
}
