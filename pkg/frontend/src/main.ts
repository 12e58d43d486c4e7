/** Browser client: card browsing/capture, a constraint playground, and
 * graph navigation. All logic lives in the sibling modules; this file is
 * DOM wiring only. */

import { ApiClient, ApiError } from './api.js';
import { buildCardXml, type CardDraft } from './cardxml.js';
import {
  mapViolationsToEditors,
  missingRequired,
  newDraft,
  sectionEnabled,
  setSectionEnabled,
  switchKind,
} from './formstate.js';
import { filterEdges, layoutGraph } from './graphlayout.js';
import {
  caretPosition,
  debounce,
  toCheckRequest,
  viewFromError,
  viewFromResponse,
  type PlaygroundInput,
} from './playground.js';
import { KINDS, SECTION_LABELS, SECTION_ORDER, isKind, requiredSections } from './taxonomy.js';
import type { CardJson, GraphResponse, SectionName } from './types.js';

const api = new ApiClient('');

type Attrs = Record<string, string | ((event: Event) => void)>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === 'function') {
      node.addEventListener(key, value);
    } else if (key === 'class') {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  node.append(...children);
  return node;
}

function clear(node: HTMLElement): HTMLElement {
  node.replaceChildren();
  return node;
}

const root = document.getElementById('app') as HTMLElement;
const tabs: Record<string, () => void> = {
  Cards: renderCards,
  Capture: renderCapture,
  Constraint: renderPlayground,
  Graph: renderGraph,
};

function renderShell(active: string): HTMLElement {
  const nav = el('nav', { class: 'tabs' });
  for (const name of Object.keys(tabs)) {
    nav.append(
      el(
        'button',
        {
          class: name === active ? 'tab active' : 'tab',
          click: () => tabs[name]?.(),
        },
        name,
      ),
    );
  }
  const main = el('main', { id: 'view' });
  clear(root).append(el('header', {}, el('h1', {}, 'knowcard'), nav), main);
  return main;
}

function banner(view: HTMLElement, message: string, retry?: () => void): void {
  const box = el('div', { class: 'banner' }, message);
  if (retry) {
    box.append(' ', el('button', { click: () => retry() }, 'Retry'));
  }
  view.prepend(box);
}

// --- Cards tab ---------------------------------------------------------------

async function renderCards(): Promise<void> {
  const view = renderShell('Cards');
  try {
    const cards = await api.listCards();
    if (cards.length === 0) {
      view.append(el('p', { class: 'empty' }, 'No cards yet. Capture one!'));
      return;
    }
    const list = el('ul', { class: 'card-list' });
    for (const item of cards) {
      list.append(
        el(
          'li',
          {},
          el('a', { href: '#', click: (e) => (e.preventDefault(), renderCard(item.id)) }, item.id),
          el('span', { class: 'kind' }, ` ${item.kind} `),
          el('span', { class: 'title' }, item.title),
        ),
      );
    }
    view.append(list);
  } catch (error) {
    banner(view, `Cannot list cards: ${String(error)}`, renderCards);
  }
}

function renderCardJson(card: CardJson): HTMLElement {
  const box = el('article', { class: 'card-view' });
  box.append(el('h2', {}, card.metadata.title));
  const dl = el('dl', {});
  const meta: [string, string][] = [
    ['id', card.id],
    ['kind', card.kind],
    ['creator', card.metadata.creator],
    ['date', card.metadata.date],
  ];
  if (card.metadata.description) meta.push(['description', card.metadata.description]);
  if (card.metadata.language) meta.push(['language', card.metadata.language]);
  for (const [key, value] of meta) {
    dl.append(el('dt', {}, key), el('dd', {}, value));
  }
  box.append(dl);

  const sections = card.sections;
  if (sections.lexicon) {
    box.append(el('h3', {}, 'Lexicon'));
    const list = el('dl', { class: 'lexicon' });
    for (const entry of sections.lexicon) {
      list.append(el('dt', {}, entry.term), el('dd', {}, entry.definition));
    }
    box.append(list);
  }
  const network = sections['concept-network'];
  if (network) {
    box.append(el('h3', {}, 'Concept network'));
    const ul = el('ul', {});
    for (const concept of network.concepts) {
      ul.append(el('li', {}, `${concept.id}: ${concept.label}`));
    }
    for (const rel of network.relations) {
      ul.append(el('li', { class: 'relation' }, `${rel.from} —${rel.kind}→ ${rel.to}`));
    }
    box.append(ul);
  }
  if (sections.statechart) {
    box.append(el('h3', {}, 'Statechart'));
    const ul = el('ul', {});
    for (const state of sections.statechart.states) {
      const marker = state.id === sections.statechart.initial ? ' (initial)' : '';
      ul.append(el('li', {}, `${state.id}: ${state.label}${marker}`));
    }
    for (const tr of sections.statechart.transitions) {
      ul.append(el('li', { class: 'relation' }, `${tr.from} → ${tr.to} on ${tr.event}`));
    }
    box.append(ul);
  }
  if (sections.collaboration) {
    box.append(el('h3', {}, 'Collaboration'));
    const ul = el('ul', {});
    for (const obj of sections.collaboration.objects) {
      ul.append(el('li', {}, `${obj.id}: ${obj.label}`));
    }
    for (const msg of sections.collaboration.messages) {
      ul.append(el('li', { class: 'relation' }, `${msg.seq}. ${msg.from} → ${msg.to}: ${msg.label}`));
    }
    box.append(ul);
  }
  if (sections.constraints) {
    box.append(el('h3', {}, 'Constraints'));
    for (const constraint of sections.constraints) {
      box.append(el('pre', {}, constraint.source));
    }
  }
  if (sections.narrative) {
    box.append(el('h3', {}, 'Narrative'), el('p', {}, sections.narrative.text));
    if (sections.narrative.figures.length > 0) {
      const ul = el('ul', {});
      for (const href of sections.narrative.figures) {
        ul.append(el('li', {}, href));
      }
      box.append(ul);
    }
  }
  return box;
}

async function renderCard(id: string): Promise<void> {
  const view = renderShell('Cards');
  try {
    const card = await api.getCardJson(id);
    const body = el('div', { id: 'card-body' });
    const profileNav = el('div', { class: 'profile-nav' });
    const showRendered = () => clear(body).append(renderCardJson(card));
    const showJson = () => clear(body).append(el('pre', {}, JSON.stringify(card, null, 2)));
    const showSource = async () => {
      const xml = await api.getCardXml(id);
      clear(body).append(el('pre', { class: 'source' }, xml));
    };
    profileNav.append(
      el('button', { click: showRendered }, 'Rendered'),
      el('button', { click: showJson }, 'JSON'),
      el('button', { click: () => void showSource() }, 'XML source'),
      el(
        'button',
        {
          class: 'danger',
          click: () => void api.deleteCard(id).then(renderCards),
        },
        'Delete',
      ),
    );
    view.append(profileNav, body);
    showRendered();
  } catch (error) {
    banner(view, `Cannot load ${id}: ${String(error)}`, () => void renderCard(id));
  }
}

// --- Capture tab --------------------------------------------------------------

let draft: CardDraft = newDraft('vocabulary.lexicon');
let editorMessages: Record<string, { code: string; message: string }[]> = {};

function messageList(editor: string): HTMLElement {
  const box = el('div', { class: 'messages', 'data-editor': editor });
  for (const violation of editorMessages[editor] ?? []) {
    box.append(el('p', { class: 'violation' }, `${violation.code}: ${violation.message}`));
  }
  return box;
}

function textField(
  label: string,
  value: string,
  commit: (next: string) => void,
  attrs: Attrs = {},
): HTMLElement {
  const input = el('input', {
    value,
    ...attrs,
    input: (event) => commit((event.target as HTMLInputElement).value),
  }) as HTMLInputElement;
  input.value = value;
  return el('label', { class: 'field' }, label, input);
}

function sectionEditor(name: SectionName): HTMLElement {
  const required = requiredSections(draft.kind).includes(name);
  const box = el('fieldset', { class: required ? 'section required' : 'section' });
  const legend = el('legend', {}, SECTION_LABELS[name] + (required ? ' *' : ''));
  if (!required) {
    const toggle = el('input', {
      type: 'checkbox',
      change: (event) => {
        setSectionEnabled(draft, name, (event.target as HTMLInputElement).checked);
        renderCapture();
      },
    }) as HTMLInputElement;
    toggle.checked = sectionEnabled(draft, name);
    legend.prepend(toggle);
  }
  box.append(legend, messageList(name));
  if (!sectionEnabled(draft, name)) {
    return box;
  }

  if (name === 'lexicon') {
    const entries = draft.lexicon ?? [];
    entries.forEach((entry, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('term', entry.term, (v) => (entry.term = v)),
          textField('definition', entry.definition, (v) => (entry.definition = v)),
          el('button', { click: () => (entries.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el('button', { click: () => (entries.push({ term: '', definition: '' }), renderCapture()) }, '+ entry'),
    );
  } else if (name === 'concept-network') {
    const network = draft.conceptNetwork ?? { concepts: [], relations: [] };
    network.concepts.forEach((concept, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('id', concept.id, (v) => (concept.id = v)),
          textField('label', concept.label, (v) => (concept.label = v)),
          el('button', { click: () => (network.concepts.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el('button', { click: () => (network.concepts.push({ id: '', label: '' }), renderCapture()) }, '+ concept'),
    );
    network.relations.forEach((rel, i) => {
      const select = el('select', {
        change: (event) => (rel.kind = (event.target as HTMLSelectElement).value),
      }) as HTMLSelectElement;
      for (const kind of ['composition', 'aggregation', 'association', 'specialization']) {
        select.append(el('option', kind === rel.kind ? { value: kind, selected: '' } : { value: kind }, kind));
      }
      box.append(
        el(
          'div',
          { class: 'row' },
          el('label', { class: 'field' }, 'kind', select),
          textField('from', rel.from, (v) => (rel.from = v)),
          textField('to', rel.to, (v) => (rel.to = v)),
          el('button', { click: () => (network.relations.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el(
        'button',
        { click: () => (network.relations.push({ kind: 'association', from: '', to: '' }), renderCapture()) },
        '+ relation',
      ),
    );
  } else if (name === 'statechart') {
    const chart = draft.statechart ?? { states: [], initial: '', transitions: [] };
    chart.states.forEach((state, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('id', state.id, (v) => (state.id = v)),
          textField('label', state.label, (v) => (state.label = v)),
          el('button', { click: () => (chart.states.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el('button', { click: () => (chart.states.push({ id: '', label: '' }), renderCapture()) }, '+ state'),
      textField('initial state id', chart.initial, (v) => (chart.initial = v)),
    );
    chart.transitions.forEach((tr, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('from', tr.from, (v) => (tr.from = v)),
          textField('to', tr.to, (v) => (tr.to = v)),
          textField('event', tr.event, (v) => (tr.event = v)),
          el('button', { click: () => (chart.transitions.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el(
        'button',
        { click: () => (chart.transitions.push({ from: '', to: '', event: '' }), renderCapture()) },
        '+ transition',
      ),
    );
  } else if (name === 'collaboration') {
    const collab = draft.collaboration ?? { objects: [], messages: [] };
    collab.objects.forEach((obj, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('id', obj.id, (v) => (obj.id = v)),
          textField('label', obj.label, (v) => (obj.label = v)),
          el('button', { click: () => (collab.objects.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el('button', { click: () => (collab.objects.push({ id: '', label: '' }), renderCapture()) }, '+ object'),
    );
    collab.messages.forEach((msg, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('seq', String(msg.seq), (v) => (msg.seq = Number(v) || 0)),
          textField('from', msg.from, (v) => (msg.from = v)),
          textField('to', msg.to, (v) => (msg.to = v)),
          textField('label', msg.label, (v) => (msg.label = v)),
          el('button', { click: () => (collab.messages.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(
      el(
        'button',
        {
          click: () => (
            collab.messages.push({ seq: collab.messages.length + 1, from: '', to: '', label: '' }),
            renderCapture()
          ),
        },
        '+ message',
      ),
    );
  } else if (name === 'constraints') {
    const constraints = draft.constraints ?? [];
    constraints.forEach((source, i) => {
      const area = el('textarea', {
        rows: '3',
        input: (event) => (constraints[i] = (event.target as HTMLTextAreaElement).value),
      }) as HTMLTextAreaElement;
      area.value = source;
      box.append(
        el('div', { class: 'row' }, area, el('button', { click: () => (constraints.splice(i, 1), renderCapture()) }, '−')),
      );
    });
    box.append(
      el(
        'button',
        { click: () => (constraints.push('context name inv : '), renderCapture()) },
        '+ constraint',
      ),
    );
  } else if (name === 'narrative') {
    const narrative = draft.narrative ?? { text: '', figures: [] };
    const area = el('textarea', {
      rows: '4',
      input: (event) => (narrative.text = (event.target as HTMLTextAreaElement).value),
    }) as HTMLTextAreaElement;
    area.value = narrative.text;
    box.append(area);
    narrative.figures.forEach((href, i) => {
      box.append(
        el(
          'div',
          { class: 'row' },
          textField('figure', href, (v) => (narrative.figures[i] = v)),
          el('button', { click: () => (narrative.figures.splice(i, 1), renderCapture()) }, '−'),
        ),
      );
    });
    box.append(el('button', { click: () => (narrative.figures.push(''), renderCapture()) }, '+ figure'));
  }
  return box;
}

function renderCapture(): void {
  const view = renderShell('Capture');

  const kindSelect = el('select', {
    change: (event) => {
      const value = (event.target as HTMLSelectElement).value;
      if (isKind(value)) {
        switchKind(draft, value);
        renderCapture();
      }
    },
  }) as HTMLSelectElement;
  for (const kind of KINDS) {
    kindSelect.append(el('option', kind === draft.kind ? { value: kind, selected: '' } : { value: kind }, kind));
  }
  kindSelect.value = draft.kind;

  const form = el('div', { class: 'capture' });
  form.append(messageList('card'));
  form.append(
    el('label', { class: 'field' }, 'kind', kindSelect),
    textField('card id', draft.id, (v) => (draft.id = v)),
  );
  form.append(
    el('h3', {}, 'Metadata'),
    messageList('metadata'),
    textField('title', draft.metadata.title, (v) => (draft.metadata.title = v)),
    textField('creator', draft.metadata.creator, (v) => (draft.metadata.creator = v)),
    textField('date (YYYY-MM-DD)', draft.metadata.date, (v) => (draft.metadata.date = v)),
    textField('description', draft.metadata.description ?? '', (v) => (draft.metadata.description = v)),
    textField('language', draft.metadata.language ?? '', (v) => (draft.metadata.language = v)),
  );
  for (const name of SECTION_ORDER) {
    form.append(sectionEditor(name));
  }

  const save = el(
    'button',
    {
      class: 'primary',
      click: () => void submitDraft(view),
    },
    'Save card',
  );
  form.append(save);
  view.append(form);
}

async function submitDraft(view: HTMLElement): Promise<void> {
  const missing = missingRequired(draft);
  editorMessages = {};
  for (const name of missing) {
    (editorMessages[name] ??= []).push({
      code: 'MISSING_SECTION',
      message: `kind ${draft.kind} requires section ${name}`,
    });
  }
  if (missing.length > 0) {
    renderCapture();
    return;
  }
  try {
    const { id } = await api.createCard(buildCardXml(draft));
    editorMessages = {};
    draft = newDraft(draft.kind);
    await renderCard(id);
  } catch (error) {
    if (error instanceof ApiError) {
      const grouped = mapViolationsToEditors(error.violations());
      editorMessages = {};
      for (const [editor, violations] of Object.entries(grouped)) {
        editorMessages[editor] = violations.map((v) => ({ code: v.code, message: v.message }));
      }
      if (error.violations().length === 0) {
        editorMessages['card'] = [{ code: error.code, message: error.message }];
      }
      renderCapture();
    } else {
      // network failure: keep the draft, offer retry
      banner(view, `Save failed: ${String(error)}`, () => void submitDraft(view));
    }
  }
}

// --- Constraint tab --------------------------------------------------------------

const playgroundInput: PlaygroundInput = {
  constraint:
    'context interior_diameter inv :\ninterior_diameter = external_tip_diameter + 2 * (cone_length * SIN(cone_angle))',
  bindings: {
    interior_diameter: 7.0,
    external_tip_diameter: 2.0,
    cone_length: 5.0,
    cone_angle: 30,
  },
  angleUnit: 'degrees',
};

function renderPlayground(): void {
  const view = renderShell('Constraint');
  const result = el('div', { class: 'result' });

  const runCheck = async () => {
    try {
      const response = await api.check(toCheckRequest(playgroundInput));
      const model = viewFromResponse(response);
      clear(result);
      if (model.status === 'holds') {
        result.append(el('p', { class: 'holds' }, `holds (residual ${model.residual ?? '—'})`));
      } else if (model.status === 'violated') {
        result.append(
          el(
            'p',
            { class: 'violated' },
            `violated: lhs ${model.lhs} vs rhs ${model.rhs}, residual ${model.residual}`,
          ),
        );
      }
    } catch (error) {
      const model = viewFromError(error);
      clear(result);
      if (model.status === 'error') {
        let text = `${model.code}: ${model.message}`;
        if (model.offset !== null) {
          const caret = caretPosition(playgroundInput.constraint, model.offset);
          text += ` (line ${caret.line}, column ${caret.column})`;
        }
        result.append(el('p', { class: 'error' }, text));
      }
    }
  };
  const scheduleCheck = debounce(() => void runCheck(), 300);

  const area = el('textarea', {
    rows: '4',
    class: 'constraint',
    input: (event) => {
      playgroundInput.constraint = (event.target as HTMLTextAreaElement).value;
      scheduleCheck();
    },
  }) as HTMLTextAreaElement;
  area.value = playgroundInput.constraint;

  const bindings = el('div', { class: 'bindings' });
  for (const name of Object.keys(playgroundInput.bindings)) {
    const input = el('input', {
      type: 'number',
      step: 'any',
      input: (event) => {
        playgroundInput.bindings[name] = Number((event.target as HTMLInputElement).value);
        scheduleCheck();
      },
    }) as HTMLInputElement;
    input.value = String(playgroundInput.bindings[name]);
    bindings.append(el('label', { class: 'field' }, name, input));
  }
  const unit = el('select', {
    change: (event) => {
      playgroundInput.angleUnit = (event.target as HTMLSelectElement).value as 'degrees' | 'radians';
      scheduleCheck();
    },
  }) as HTMLSelectElement;
  unit.append(el('option', { value: 'degrees' }, 'degrees'), el('option', { value: 'radians' }, 'radians'));
  unit.value = playgroundInput.angleUnit;

  view.append(area, bindings, el('label', { class: 'field' }, 'angle unit', unit), result);
  void runCheck();
}

// --- Graph tab --------------------------------------------------------------------

const graphState = { root: 'Lead_protection', depth: 2, enabled: new Set<string>() };

async function renderGraph(): Promise<void> {
  const view = renderShell('Graph');
  try {
    const ontology = await api.ontology();
    if (graphState.enabled.size === 0) {
      for (const property of ontology) {
        graphState.enabled.add(property.local);
      }
    }
    const graph = await api.graph(graphState.root, graphState.depth);
    drawGraph(view, graph, ontology.map((p) => p.local));
  } catch (error) {
    banner(view, `Cannot load graph: ${String(error)}`, () => void renderGraph());
  }
}

function drawGraph(view: HTMLElement, graph: GraphResponse, relationNames: string[]): void {
  const controls = el('div', { class: 'graph-controls' });
  const rootField = el('input', { value: graphState.root }) as HTMLInputElement;
  rootField.value = graphState.root;
  const depthField = el('input', { type: 'number', min: '0', max: '10' }) as HTMLInputElement;
  depthField.value = String(graphState.depth);
  controls.append(
    el('label', { class: 'field' }, 'root', rootField),
    el('label', { class: 'field' }, 'depth', depthField),
    el(
      'button',
      {
        click: () => {
          graphState.root = rootField.value;
          graphState.depth = Number(depthField.value);
          void renderGraph();
        },
      },
      'Explore',
    ),
  );
  for (const name of relationNames) {
    const toggle = el('input', {
      type: 'checkbox',
      change: (event) => {
        if ((event.target as HTMLInputElement).checked) {
          graphState.enabled.add(name);
        } else {
          graphState.enabled.delete(name);
        }
        void renderGraph();
      },
    }) as HTMLInputElement;
    toggle.checked = graphState.enabled.has(name);
    controls.append(el('label', { class: 'toggle' }, toggle, name));
  }
  view.append(controls);

  if (graph.nodes.length === 1 && graph.edges.length === 0) {
    view.append(el('p', { class: 'empty' }, `No relations found under ${graph.root}.`));
  }

  const layout = layoutGraph(graph);
  const visible = new Set(
    filterEdges(layout.edges, graphState.enabled, {
      semantique_metier: ['composition', 'aggregation', 'association'],
    }).map((edge) => `${edge.from}|${edge.relation}|${edge.to}`),
  );

  const svgNs = 'http://www.w3.org/2000/svg';
  const svg = document.createElementNS(svgNs, 'svg');
  svg.setAttribute('viewBox', `0 0 ${layout.width} ${layout.height}`);
  svg.setAttribute('class', 'graph');
  for (const edge of layout.edges) {
    if (!visible.has(`${edge.from}|${edge.relation}|${edge.to}`)) {
      continue;
    }
    const line = document.createElementNS(svgNs, 'line');
    line.setAttribute('x1', String(edge.x1));
    line.setAttribute('y1', String(edge.y1));
    line.setAttribute('x2', String(edge.x2));
    line.setAttribute('y2', String(edge.y2));
    line.setAttribute('class', `edge ${edge.relation}`);
    svg.append(line);
    const text = document.createElementNS(svgNs, 'text');
    text.setAttribute('x', String((edge.x1 + edge.x2) / 2));
    text.setAttribute('y', String((edge.y1 + edge.y2) / 2 - 4));
    text.setAttribute('class', 'edge-label');
    text.textContent = edge.relation;
    svg.append(text);
  }
  for (const node of layout.nodes) {
    const group = document.createElementNS(svgNs, 'g');
    group.setAttribute('class', 'node');
    group.addEventListener('click', () => {
      graphState.root = node.local;
      void renderGraph();
    });
    const circle = document.createElementNS(svgNs, 'circle');
    circle.setAttribute('cx', String(node.x));
    circle.setAttribute('cy', String(node.y));
    circle.setAttribute('r', '16');
    group.append(circle);
    const label = document.createElementNS(svgNs, 'text');
    label.setAttribute('x', String(node.x));
    label.setAttribute('y', String(node.y - 22));
    label.textContent = node.local;
    group.append(label);
    svg.append(group);
  }
  view.append(svg);

  const selected = layout.nodes.find((node) => node.local === graphState.root);
  if (selected?.card_id) {
    view.append(
      el(
        'p',
        {},
        'Defined by ',
        el(
          'a',
          { href: '#', click: (e) => (e.preventDefault(), void renderCard(selected.card_id as string)) },
          selected.card_id,
        ),
      ),
    );
  }
}

// --- boot ---------------------------------------------------------------------------

renderCards();
