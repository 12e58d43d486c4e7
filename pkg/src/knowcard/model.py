"""Knowledge-card data model: four-domain typology and per-kind validation.

Cards are immutable values. Construction only enforces local shape (valid
domain/subtype pair, date is a real date); cross-reference rules such as
relation endpoints, acyclicity, and the per-kind required sections are the
business of validate_card, which reports violations instead of raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from datetime import date as Date
from typing import Optional

from knowcard import ocl

TAXONOMY: dict[str, tuple[str, ...]] = {
    "culture": ("history", "geography", "physic"),
    "process": ("strategy", "tactic", "diary"),
    "appraise": ("payment", "use", "freedom"),
    "vocabulary": ("semantics", "syntax", "lexicon"),
}

RELATION_KINDS = ("composition", "aggregation", "association", "specialization")

SECTION_LEXICON = "lexicon"
SECTION_CONCEPT_NETWORK = "concept-network"
SECTION_STATECHART = "statechart"
SECTION_COLLABORATION = "collaboration"
SECTION_CONSTRAINTS = "constraints"
SECTION_NARRATIVE = "narrative"

SECTION_ORDER = (
    SECTION_LEXICON,
    SECTION_CONCEPT_NETWORK,
    SECTION_STATECHART,
    SECTION_COLLABORATION,
    SECTION_CONSTRAINTS,
    SECTION_NARRATIVE,
)

# section name -> KnowledgeCard attribute
SECTION_ATTRS = {
    SECTION_LEXICON: "lexicon",
    SECTION_CONCEPT_NETWORK: "concept_network",
    SECTION_STATECHART: "statechart",
    SECTION_COLLABORATION: "collaboration",
    SECTION_CONSTRAINTS: "constraints",
    SECTION_NARRATIVE: "narrative",
}

# Which sections each of the twelve kinds must carry.
REQUIRED_SECTIONS: dict[tuple[str, str], frozenset[str]] = {
    ("culture", "history"): frozenset({SECTION_NARRATIVE}),
    ("culture", "geography"): frozenset({SECTION_CONCEPT_NETWORK}),
    ("culture", "physic"): frozenset({SECTION_STATECHART, SECTION_COLLABORATION}),
    ("process", "strategy"): frozenset({SECTION_COLLABORATION}),
    ("process", "tactic"): frozenset({SECTION_STATECHART}),
    ("process", "diary"): frozenset({SECTION_CONCEPT_NETWORK, SECTION_STATECHART}),
    ("appraise", "payment"): frozenset({SECTION_CONSTRAINTS, SECTION_NARRATIVE}),
    ("appraise", "use"): frozenset({SECTION_CONSTRAINTS, SECTION_NARRATIVE}),
    ("appraise", "freedom"): frozenset({SECTION_NARRATIVE}),
    ("vocabulary", "semantics"): frozenset({SECTION_CONCEPT_NETWORK}),
    ("vocabulary", "syntax"): frozenset({SECTION_CONCEPT_NETWORK}),
    ("vocabulary", "lexicon"): frozenset({SECTION_LEXICON}),
}

CARD_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
LOCAL_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class KindError(ValueError):
    """Unknown domain or subtype, or a subtype outside its domain."""


@dataclass(frozen=True)
class CardKind:
    domain: str
    subtype: str

    def __post_init__(self):
        subtypes = TAXONOMY.get(self.domain)
        if subtypes is None:
            raise KindError(f"unknown domain {self.domain!r}")
        if self.subtype not in subtypes:
            raise KindError(f"unknown subtype {self.subtype!r} for domain {self.domain!r}")

    @classmethod
    def parse(cls, dotted: str) -> "CardKind":
        domain, sep, subtype = dotted.partition(".")
        if not sep:
            raise KindError(f"kind must be 'domain.subtype', got {dotted!r}")
        return cls(domain, subtype)

    def __str__(self) -> str:
        return f"{self.domain}.{self.subtype}"


def all_kinds() -> list[CardKind]:
    return [CardKind(d, s) for d, subs in TAXONOMY.items() for s in subs]


def required_sections(kind: CardKind) -> frozenset[str]:
    """The sections a card of this kind must carry (always non-empty)."""

    try:
        return REQUIRED_SECTIONS[(kind.domain, kind.subtype)]
    except KeyError:
        raise KindError(f"unknown kind {kind!r}") from None


@dataclass(frozen=True)
class CardMetadata:
    title: str
    creator: str
    date: Date
    description: Optional[str] = None
    language: Optional[str] = None


@dataclass(frozen=True)
class Concept:
    id: str
    label: str


@dataclass(frozen=True)
class ConceptRelation:
    kind: str  # composition | aggregation | association | specialization
    source: str
    target: str
    label: Optional[str] = None


@dataclass(frozen=True)
class ConceptNetwork:
    concepts: tuple[Concept, ...]
    relations: tuple[ConceptRelation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "concepts", tuple(self.concepts))
        object.__setattr__(self, "relations", tuple(self.relations))


@dataclass(frozen=True)
class State:
    id: str
    label: str


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    event: str


@dataclass(frozen=True)
class StateChart:
    states: tuple[State, ...]
    initial: str
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))


@dataclass(frozen=True)
class CollabObject:
    id: str
    label: str


@dataclass(frozen=True)
class Message:
    seq: int
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class Collaboration:
    objects: tuple[CollabObject, ...]
    messages: tuple[Message, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "messages", tuple(self.messages))


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    definition: str


@dataclass(frozen=True)
class ConstraintAttachment:
    source_text: str
    parsed: ocl.ConstraintDef

    @classmethod
    def from_source(cls, source_text: str) -> "ConstraintAttachment":
        return cls(source_text, ocl.parse_constraint(source_text))


@dataclass(frozen=True)
class Narrative:
    text: str
    figure_refs: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "figure_refs", tuple(self.figure_refs))


@dataclass(frozen=True)
class KnowledgeCard:
    id: str
    kind: CardKind
    metadata: CardMetadata
    lexicon: Optional[tuple[LexiconEntry, ...]] = None
    concept_network: Optional[ConceptNetwork] = None
    statechart: Optional[StateChart] = None
    collaboration: Optional[Collaboration] = None
    constraints: Optional[tuple[ConstraintAttachment, ...]] = None
    narrative: Optional[Narrative] = None

    def __post_init__(self):
        if self.lexicon is not None:
            object.__setattr__(self, "lexicon", tuple(self.lexicon))
        if self.constraints is not None:
            object.__setattr__(self, "constraints", tuple(self.constraints))

    def section(self, name: str):
        return getattr(self, SECTION_ATTRS[name])

    def present_sections(self) -> list[str]:
        return [name for name in SECTION_ORDER if self.section(name) is not None]

    def without_section(self, name: str) -> "KnowledgeCard":
        return replace(self, **{SECTION_ATTRS[name]: None})


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str


ValidationReport = list[Violation]


def _section_empty(name: str, value) -> bool:
    if name in (SECTION_LEXICON, SECTION_CONSTRAINTS):
        return len(value) == 0
    if name == SECTION_CONCEPT_NETWORK:
        return len(value.concepts) == 0
    if name == SECTION_STATECHART:
        return len(value.states) == 0
    if name == SECTION_COLLABORATION:
        return len(value.objects) == 0
    return False  # narrative


def validate_card(card: KnowledgeCard) -> ValidationReport:
    """Check every card invariant; returns one violation per breach."""

    report: ValidationReport = []

    if not CARD_ID_RE.match(card.id or ""):
        report.append(Violation("BAD_CARD_ID", "id", f"card id {card.id!r} is not a valid token"))
    if not card.metadata.title.strip():
        report.append(Violation("EMPTY_TITLE", "metadata/title", "title must be non-empty"))
    if not card.metadata.creator.strip():
        report.append(Violation("EMPTY_CREATOR", "metadata/creator", "creator must be non-empty"))
    if not isinstance(card.metadata.date, Date):
        report.append(Violation("BAD_DATE", "metadata/date", "date must be a calendar date"))

    required = required_sections(card.kind)
    for name in SECTION_ORDER:
        value = card.section(name)
        missing = value is None or _section_empty(name, value)
        if name in required and missing:
            report.append(
                Violation(
                    "MISSING_SECTION",
                    name,
                    f"kind {card.kind} requires section {name}",
                )
            )
        elif value is not None and _section_empty(name, value):
            report.append(Violation("EMPTY_SECTION", name, f"section {name} is present but empty"))

    if card.lexicon:
        _validate_lexicon(card.lexicon, report)
    if card.concept_network is not None and card.concept_network.concepts:
        _validate_network(card.concept_network, report)
    if card.statechart is not None and card.statechart.states:
        _validate_statechart(card.statechart, report)
    if card.collaboration is not None and card.collaboration.objects:
        _validate_collaboration(card.collaboration, report)
    if card.constraints:
        _validate_constraints(card.constraints, report)

    return report


def _validate_lexicon(entries, report: ValidationReport) -> None:
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        path = f"lexicon/entry[{i}]"
        if not entry.term.strip():
            report.append(Violation("EMPTY_TERM", path, "lexicon term must be non-empty"))
            continue
        folded = entry.term.strip().lower()
        if folded in seen:
            report.append(
                Violation("DUPLICATE_TERM", path, f"term {entry.term!r} appears more than once")
            )
        seen.add(folded)


def _validate_network(network: ConceptNetwork, report: ValidationReport) -> None:
    ids: set[str] = set()
    for i, concept in enumerate(network.concepts):
        path = f"concept-network/concept[{i}]"
        if not LOCAL_ID_RE.match(concept.id or ""):
            report.append(Violation("BAD_CONCEPT_ID", path, f"bad concept id {concept.id!r}"))
        if concept.id in ids:
            report.append(
                Violation("DUPLICATE_CONCEPT_ID", path, f"duplicate concept id {concept.id!r}")
            )
        ids.add(concept.id)

    part_of_edges: list[tuple[str, str]] = []
    for i, rel in enumerate(network.relations):
        path = f"concept-network/relation[{i}]"
        if rel.kind not in RELATION_KINDS:
            report.append(Violation("BAD_RELATION_KIND", path, f"unknown relation kind {rel.kind!r}"))
            continue
        dangling = [e for e in (rel.source, rel.target) if e not in ids]
        if dangling:
            report.append(
                Violation(
                    "DANGLING_RELATION",
                    path,
                    f"relation references undeclared concept(s) {', '.join(dangling)}",
                )
            )
            continue
        if rel.kind in ("composition", "aggregation"):
            if rel.source == rel.target:
                report.append(
                    Violation("SELF_RELATION", path, f"{rel.kind} from {rel.source!r} to itself")
                )
                continue
            part_of_edges.append((rel.source, rel.target))

    if _has_cycle(ids, part_of_edges):
        report.append(
            Violation(
                "CYCLE_IN_COMPOSITION",
                "concept-network",
                "composition/aggregation edges form a cycle",
            )
        )


def _has_cycle(nodes: set[str], edges: list[tuple[str, str]]) -> bool:
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for src, dst in edges:
        adjacency[src].append(dst)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    for start in nodes:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            node, idx = stack[-1]
            if idx < len(adjacency[node]):
                stack[-1] = (node, idx + 1)
                child = adjacency[node][idx]
                if color[child] == GRAY:
                    return True
                if color[child] == WHITE:
                    color[child] = GRAY
                    stack.append((child, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return False


def _validate_statechart(chart: StateChart, report: ValidationReport) -> None:
    ids: set[str] = set()
    for i, state in enumerate(chart.states):
        path = f"statechart/state[{i}]"
        if state.id in ids:
            report.append(Violation("DUPLICATE_STATE_ID", path, f"duplicate state id {state.id!r}"))
        ids.add(state.id)
    if chart.initial not in ids:
        report.append(
            Violation("UNKNOWN_INITIAL", "statechart/initial", f"initial state {chart.initial!r} not declared")
        )
    for i, tr in enumerate(chart.transitions):
        dangling = [e for e in (tr.source, tr.target) if e not in ids]
        if dangling:
            report.append(
                Violation(
                    "DANGLING_TRANSITION",
                    f"statechart/transition[{i}]",
                    f"transition references unknown state(s) {', '.join(dangling)}",
                )
            )


def _validate_collaboration(collab: Collaboration, report: ValidationReport) -> None:
    ids: set[str] = set()
    for i, obj in enumerate(collab.objects):
        path = f"collaboration/object[{i}]"
        if obj.id in ids:
            report.append(Violation("DUPLICATE_OBJECT_ID", path, f"duplicate object id {obj.id!r}"))
        ids.add(obj.id)
    last_seq = 0
    for i, msg in enumerate(collab.messages):
        path = f"collaboration/message[{i}]"
        dangling = [e for e in (msg.source, msg.target) if e not in ids]
        if dangling:
            report.append(
                Violation(
                    "DANGLING_MESSAGE",
                    path,
                    f"message references unknown object(s) {', '.join(dangling)}",
                )
            )
        if msg.seq <= last_seq:
            report.append(
                Violation(
                    "BAD_MESSAGE_SEQ",
                    path,
                    f"message seq {msg.seq} does not increase (previous {last_seq})",
                )
            )
        else:
            last_seq = msg.seq


def _validate_constraints(attachments, report: ValidationReport) -> None:
    for i, att in enumerate(attachments):
        path = f"constraints/constraint[{i}]"
        try:
            reparsed = ocl.parse_constraint(att.source_text)
        except ocl.OclError as exc:
            report.append(Violation("CONSTRAINT_PARSE_ERROR", path, str(exc)))
            continue
        if reparsed.context_name != att.parsed.context_name or reparsed.body != att.parsed.body:
            report.append(
                Violation(
                    "CONSTRAINT_MISMATCH",
                    path,
                    "attached AST is not the parse of its source text",
                )
            )


def build_lead_protection_fixture() -> KnowledgeCard:
    """The pen-design demo card: the lead-protection concept network."""

    network = ConceptNetwork(
        concepts=(
            Concept("Lead_protection", "Lead protection"),
            Concept("mecanism", "Mecanism"),
            Concept("Cap", "Cap"),
            Concept("Closer", "Closer"),
            Concept("clip", "Clip"),
        ),
        relations=(
            ConceptRelation("aggregation", "Lead_protection", "mecanism"),
            ConceptRelation("aggregation", "Lead_protection", "Cap"),
            ConceptRelation("composition", "Cap", "Closer"),
            ConceptRelation("composition", "Cap", "clip"),
        ),
    )
    metadata = CardMetadata(
        title="Lead protection network",
        creator="pen design team",
        date=Date(2004, 3, 16),
        description="Structural concept network for the lead protection subassembly of the advertising pen.",
        language="en",
    )
    return KnowledgeCard(
        id="Lead_protection",
        kind=CardKind("vocabulary", "semantics"),
        metadata=metadata,
        concept_network=network,
    )
