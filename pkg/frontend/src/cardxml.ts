/** Builds capture documents (card XML) from form drafts. Only used for
 * POSTing; anything displayed back to the user comes from the server. */

import type { Kind } from './taxonomy.js';

export interface CardDraft {
  id: string;
  kind: Kind;
  metadata: {
    title: string;
    creator: string;
    date: string;
    description?: string;
    language?: string;
  };
  lexicon?: { term: string; definition: string }[];
  conceptNetwork?: {
    concepts: { id: string; label: string }[];
    relations: { kind: string; from: string; to: string; label?: string }[];
  };
  statechart?: {
    states: { id: string; label: string }[];
    initial: string;
    transitions: { from: string; to: string; event: string }[];
  };
  collaboration?: {
    objects: { id: string; label: string }[];
    messages: { seq: number; from: string; to: string; label: string }[];
  };
  constraints?: string[];
  narrative?: { text: string; figures: string[] };
}

function escText(value: string): string {
  return value
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('\r', '&#13;');
}

function escAttr(value: string): string {
  return escText(value)
    .replaceAll('"', '&quot;')
    .replaceAll('\n', '&#10;')
    .replaceAll('\t', '&#9;');
}

export function buildCardXml(draft: CardDraft): string {
  const lines: string[] = ['<?xml version="1.0" encoding="UTF-8"?>'];
  lines.push(
    `<knowledge-card id="${escAttr(draft.id)}" kind="${escAttr(draft.kind)}" version="1">`,
  );

  const m = draft.metadata;
  lines.push('  <metadata>');
  lines.push(`    <title>${escText(m.title)}</title>`);
  lines.push(`    <creator>${escText(m.creator)}</creator>`);
  lines.push(`    <date>${escText(m.date)}</date>`);
  if (m.description !== undefined && m.description !== '') {
    lines.push(`    <description>${escText(m.description)}</description>`);
  }
  if (m.language !== undefined && m.language !== '') {
    lines.push(`    <language>${escText(m.language)}</language>`);
  }
  lines.push('  </metadata>');

  if (draft.lexicon !== undefined) {
    lines.push('  <lexicon>');
    for (const entry of draft.lexicon) {
      lines.push(`    <entry term="${escAttr(entry.term)}">`);
      lines.push(`      <definition>${escText(entry.definition)}</definition>`);
      lines.push('    </entry>');
    }
    lines.push('  </lexicon>');
  }

  if (draft.conceptNetwork !== undefined) {
    lines.push('  <concept-network>');
    for (const concept of draft.conceptNetwork.concepts) {
      lines.push(`    <concept id="${escAttr(concept.id)}" label="${escAttr(concept.label)}"/>`);
    }
    for (const rel of draft.conceptNetwork.relations) {
      const label = rel.label !== undefined ? ` label="${escAttr(rel.label)}"` : '';
      lines.push(
        `    <relation kind="${escAttr(rel.kind)}" from="${escAttr(rel.from)}" to="${escAttr(rel.to)}"${label}/>`,
      );
    }
    lines.push('  </concept-network>');
  }

  if (draft.statechart !== undefined) {
    lines.push('  <statechart>');
    for (const state of draft.statechart.states) {
      lines.push(`    <state id="${escAttr(state.id)}" label="${escAttr(state.label)}"/>`);
    }
    lines.push(`    <initial ref="${escAttr(draft.statechart.initial)}"/>`);
    for (const tr of draft.statechart.transitions) {
      lines.push(
        `    <transition from="${escAttr(tr.from)}" to="${escAttr(tr.to)}" event="${escAttr(tr.event)}"/>`,
      );
    }
    lines.push('  </statechart>');
  }

  if (draft.collaboration !== undefined) {
    lines.push('  <collaboration>');
    for (const obj of draft.collaboration.objects) {
      lines.push(`    <object id="${escAttr(obj.id)}" label="${escAttr(obj.label)}"/>`);
    }
    for (const msg of draft.collaboration.messages) {
      lines.push(
        `    <message seq="${msg.seq}" from="${escAttr(msg.from)}" to="${escAttr(msg.to)}" label="${escAttr(msg.label)}"/>`,
      );
    }
    lines.push('  </collaboration>');
  }

  if (draft.constraints !== undefined) {
    lines.push('  <constraints>');
    for (const source of draft.constraints) {
      lines.push(`    <constraint>${escText(source)}</constraint>`);
    }
    lines.push('  </constraints>');
  }

  if (draft.narrative !== undefined) {
    lines.push('  <narrative>');
    lines.push(`    <text>${escText(draft.narrative.text)}</text>`);
    for (const href of draft.narrative.figures) {
      lines.push(`    <figure href="${escAttr(href)}"/>`);
    }
    lines.push('  </narrative>');
  }

  lines.push('</knowledge-card>');
  return lines.join('\n') + '\n';
}
