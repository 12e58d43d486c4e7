/** Capture-form state: which section editors are enabled for the chosen
 * kind, which are still missing, and how a server validation report maps
 * back onto the editors. The server remains the authority; everything
 * here is advisory so mistakes surface before a round trip. */

import type { CardDraft } from './cardxml.js';
import { requiredSections, SECTION_ORDER, type Kind } from './taxonomy.js';
import type { SectionName, Violation } from './types.js';

const SECTION_KEYS: Record<SectionName, keyof CardDraft> = {
  lexicon: 'lexicon',
  'concept-network': 'conceptNetwork',
  statechart: 'statechart',
  collaboration: 'collaboration',
  constraints: 'constraints',
  narrative: 'narrative',
};


export function newDraft(kind: Kind, id = ''): CardDraft {
  const draft: CardDraft = {
    id,
    kind,
    metadata: { title: '', creator: '', date: '' },
  };
  for (const name of requiredSections(kind)) {
    setSectionEnabled(draft, name, true);
  }
  return draft;
}

/** Switch kind in place, enabling newly required editors and keeping
 * whatever the user already typed (extra sections stay legal). */
export function switchKind(draft: CardDraft, kind: Kind): void {
  draft.kind = kind;
  for (const name of requiredSections(kind)) {
    if (!sectionEnabled(draft, name)) {
      setSectionEnabled(draft, name, true);
    }
  }
}

export function sectionEnabled(draft: CardDraft, name: SectionName): boolean {
  return draft[SECTION_KEYS[name]] !== undefined;
}

export function setSectionEnabled(draft: CardDraft, name: SectionName, on: boolean): void {
  if (on && sectionEnabled(draft, name)) {
    return; // keep what the user already typed
  }
  switch (name) {
    case 'lexicon':
      draft.lexicon = on ? [] : undefined;
      break;
    case 'concept-network':
      draft.conceptNetwork = on ? { concepts: [], relations: [] } : undefined;
      break;
    case 'statechart':
      draft.statechart = on ? { states: [], initial: '', transitions: [] } : undefined;
      break;
    case 'collaboration':
      draft.collaboration = on ? { objects: [], messages: [] } : undefined;
      break;
    case 'constraints':
      draft.constraints = on ? [] : undefined;
      break;
    case 'narrative':
      draft.narrative = on ? { text: '', figures: [] } : undefined;
      break;
  }
}

export function sectionIsEmpty(draft: CardDraft, name: SectionName): boolean {
  switch (name) {
    case 'lexicon':
      return (draft.lexicon ?? []).length === 0;
    case 'concept-network':
      return (draft.conceptNetwork?.concepts ?? []).length === 0;
    case 'statechart':
      return (draft.statechart?.states ?? []).length === 0;
    case 'collaboration':
      return (draft.collaboration?.objects ?? []).length === 0;
    case 'constraints':
      return (draft.constraints ?? []).length === 0;
    case 'narrative':
      return (draft.narrative?.text ?? '') === '';
  }
}

/** Required sections the user has not filled in yet. */
export function missingRequired(draft: CardDraft): SectionName[] {
  return requiredSections(draft.kind).filter(
    (name) => !sectionEnabled(draft, name) || sectionIsEmpty(draft, name),
  );
}

export interface EditorMessages {
  /** keyed by section name, plus 'metadata' and 'card' buckets */
  [editor: string]: Violation[];
}

/** Group a server validation report by the editor it belongs to: the
 * first path segment is the section (or metadata/id). */
export function mapViolationsToEditors(violations: Violation[]): EditorMessages {
  const out: EditorMessages = {};
  for (const violation of violations) {
    const head = violation.path.split('/')[0] ?? '';
    const key = (SECTION_ORDER as string[]).includes(head)
      ? head
      : head === 'metadata'
        ? 'metadata'
        : 'card';
    (out[key] ??= []).push(violation);
  }
  return out;
}
