"""XML codec for knowledge cards (interchange format, version 1).

The schema is strict and closed: unknown elements or attributes are
rejected with an element path, sections may appear at most once, and a
document only parses if the reconstructed card also passes model
validation, so the set of parseable documents and the set of valid cards
coincide. Serialization is byte-deterministic: fixed element order
(metadata, lexicon, concept-network, statechart, collaboration,
constraints, narrative), two-space indent, UTF-8.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from datetime import date as Date
from typing import Optional

from knowcard import model, ocl
from knowcard.model import (
    CardKind,
    CardMetadata,
    CollabObject,
    Collaboration,
    Concept,
    ConceptNetwork,
    ConceptRelation,
    ConstraintAttachment,
    KindError,
    KnowledgeCard,
    LexiconEntry,
    Message,
    Narrative,
    State,
    StateChart,
    Transition,
    Violation,
    SECTION_ORDER,
)

CARD_VERSION = 1


class CardXmlError(Exception):
    """Schema violation with a machine code and the offending element path."""

    def __init__(self, code: str, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.code = code
        self.path = path


class InvalidCardError(CardXmlError):
    """Document parsed structurally but the card violates model invariants."""

    def __init__(self, report: list[Violation]):
        first = report[0] if report else None
        detail = f"{len(report)} violation(s), first: {first.code} at {first.path}" if first else ""
        super().__init__("VALIDATION_FAILED", "", detail)
        self.report = list(report)


# --- Serialization ----------------------------------------------------------


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _attr(text: str) -> str:
    return (
        _esc(text)
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\t", "&#9;")
        .replace("\r", "&#13;")
    )


def _text(text: str) -> str:
    return _esc(text).replace("\r", "&#13;")


def serialize_card(card: KnowledgeCard) -> str:
    """Canonical XML for a valid card; refuses invalid cards with the report."""

    report = model.validate_card(card)
    if report:
        raise InvalidCardError(report)

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        f'<knowledge-card id="{_attr(card.id)}" kind="{_attr(str(card.kind))}" version="{CARD_VERSION}">'
    )
    lines.extend(_metadata_lines(card.metadata, "  "))
    for name in SECTION_ORDER:
        value = card.section(name)
        if value is not None:
            lines.extend(_section_lines(name, value, "  "))
    lines.append("</knowledge-card>")
    return "\n".join(lines) + "\n"


def _metadata_lines(meta: CardMetadata, pad: str) -> list[str]:
    lines = [f"{pad}<metadata>"]
    lines.append(f"{pad}  <title>{_text(meta.title)}</title>")
    lines.append(f"{pad}  <creator>{_text(meta.creator)}</creator>")
    lines.append(f"{pad}  <date>{meta.date.isoformat()}</date>")
    if meta.description is not None:
        lines.append(f"{pad}  <description>{_text(meta.description)}</description>")
    if meta.language is not None:
        lines.append(f"{pad}  <language>{_text(meta.language)}</language>")
    lines.append(f"{pad}</metadata>")
    return lines


def _section_lines(name: str, value, pad: str) -> list[str]:
    if name == model.SECTION_LEXICON:
        lines = [f"{pad}<lexicon>"]
        for entry in value:
            lines.append(f'{pad}  <entry term="{_attr(entry.term)}">')
            lines.append(f"{pad}    <definition>{_text(entry.definition)}</definition>")
            lines.append(f"{pad}  </entry>")
        lines.append(f"{pad}</lexicon>")
        return lines
    if name == model.SECTION_CONCEPT_NETWORK:
        lines = [f"{pad}<concept-network>"]
        for concept in value.concepts:
            lines.append(f'{pad}  <concept id="{_attr(concept.id)}" label="{_attr(concept.label)}"/>')
        for rel in value.relations:
            label = f' label="{_attr(rel.label)}"' if rel.label is not None else ""
            lines.append(
                f'{pad}  <relation kind="{_attr(rel.kind)}" from="{_attr(rel.source)}" to="{_attr(rel.target)}"{label}/>'
            )
        lines.append(f"{pad}</concept-network>")
        return lines
    if name == model.SECTION_STATECHART:
        lines = [f"{pad}<statechart>"]
        for state in value.states:
            lines.append(f'{pad}  <state id="{_attr(state.id)}" label="{_attr(state.label)}"/>')
        lines.append(f'{pad}  <initial ref="{_attr(value.initial)}"/>')
        for tr in value.transitions:
            lines.append(
                f'{pad}  <transition from="{_attr(tr.source)}" to="{_attr(tr.target)}" event="{_attr(tr.event)}"/>'
            )
        lines.append(f"{pad}</statechart>")
        return lines
    if name == model.SECTION_COLLABORATION:
        lines = [f"{pad}<collaboration>"]
        for obj in value.objects:
            lines.append(f'{pad}  <object id="{_attr(obj.id)}" label="{_attr(obj.label)}"/>')
        for msg in value.messages:
            lines.append(
                f'{pad}  <message seq="{msg.seq}" from="{_attr(msg.source)}" to="{_attr(msg.target)}" label="{_attr(msg.label)}"/>'
            )
        lines.append(f"{pad}</collaboration>")
        return lines
    if name == model.SECTION_CONSTRAINTS:
        lines = [f"{pad}<constraints>"]
        for att in value:
            lines.append(f"{pad}  <constraint>{_text(att.source_text)}</constraint>")
        lines.append(f"{pad}</constraints>")
        return lines
    if name == model.SECTION_NARRATIVE:
        lines = [f"{pad}<narrative>"]
        lines.append(f"{pad}  <text>{_text(value.text)}</text>")
        for ref in value.figure_refs:
            lines.append(f'{pad}  <figure href="{_attr(ref)}"/>')
        lines.append(f"{pad}</narrative>")
        return lines
    raise ValueError(f"unknown section {name!r}")


def serialize_section(name: str, value) -> str:
    """A single section as a standalone document (used by the record store)."""

    return '<?xml version="1.0" encoding="UTF-8"?>\n' + "\n".join(_section_lines(name, value, "")) + "\n"


def serialize_card_header(card: KnowledgeCard) -> str:
    """Card identity plus metadata as a standalone record document."""

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        f'<card-record id="{_attr(card.id)}" kind="{_attr(str(card.kind))}" version="{CARD_VERSION}">'
    )
    lines.extend(_metadata_lines(card.metadata, "  "))
    lines.append("</card-record>")
    return "\n".join(lines) + "\n"


# --- Parsing ----------------------------------------------------------------


def _fail(code: str, path: str, message: str):
    raise CardXmlError(code, path, message)


def _check_attrs(elem: ET.Element, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    for attr in required:
        if attr not in elem.attrib:
            _fail("MISSING_ATTRIBUTE", path, f"missing attribute {attr!r}")
    for attr in elem.attrib:
        if attr not in required and attr not in optional:
            _fail("UNKNOWN_ATTRIBUTE", path, f"unknown attribute {attr!r}")


def _no_stray_text(elem: ET.Element, path: str):
    if (elem.text or "").strip():
        _fail("UNEXPECTED_TEXT", path, "unexpected text content")
    for child in elem:
        if (child.tail or "").strip():
            _fail("UNEXPECTED_TEXT", path, "unexpected text content")


def _leaf_text(elem: ET.Element, path: str) -> str:
    if len(elem):
        _fail("UNKNOWN_ELEMENT", path, f"unexpected child {elem[0].tag!r}")
    return elem.text or ""


def _no_content(elem: ET.Element, path: str) -> None:
    if len(elem):
        _fail("UNKNOWN_ELEMENT", path, f"unexpected child {elem[0].tag!r}")
    if (elem.text or "").strip():
        _fail("UNEXPECTED_TEXT", path, "element must be empty")


def parse_card(document: str) -> KnowledgeCard:
    """Parse and fully validate a card document.

    Raises CardXmlError for schema violations and InvalidCardError (which
    carries the validation report) when the card breaks model invariants.
    """

    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise CardXmlError("MALFORMED_XML", "", str(exc)) from None

    path = "knowledge-card"
    if root.tag != "knowledge-card":
        _fail("UNKNOWN_ELEMENT", root.tag, "root element must be knowledge-card")
    _check_attrs(root, path, ("id", "kind", "version"))
    version_text = root.get("version", "")
    if not version_text.isdigit() or int(version_text) <= 0:
        _fail("BAD_VERSION", path, f"version must be a positive integer, got {version_text!r}")
    if int(version_text) != CARD_VERSION:
        _fail("UNSUPPORTED_VERSION", path, f"unsupported version {version_text}")
    try:
        kind = CardKind.parse(root.get("kind", ""))
    except KindError as exc:
        _fail("BAD_KIND", path, str(exc))
    _no_stray_text(root, path)

    metadata: Optional[CardMetadata] = None
    sections: dict[str, object] = {}
    for child in root:
        child_path = f"{path}/{child.tag}"
        if child.tag == "metadata":
            if metadata is not None:
                _fail("DUPLICATE_ELEMENT", child_path, "metadata appears twice")
            metadata = _parse_metadata(child, child_path)
        elif child.tag in SECTION_ORDER:
            if child.tag in sections:
                _fail("DUPLICATE_SECTION", child_path, f"section {child.tag} appears twice")
            sections[child.tag] = _parse_section(child, child_path)
        else:
            _fail("UNKNOWN_ELEMENT", child_path, f"unknown element {child.tag!r}")
    if metadata is None:
        _fail("MISSING_ELEMENT", path, "metadata element is required")

    card = KnowledgeCard(
        id=root.get("id", ""),
        kind=kind,
        metadata=metadata,
        **{model.SECTION_ATTRS[name]: value for name, value in sections.items()},
    )
    report = model.validate_card(card)
    if report:
        raise InvalidCardError(report)
    return card


def _parse_metadata(elem: ET.Element, path: str) -> CardMetadata:
    _check_attrs(elem, path, ())
    _no_stray_text(elem, path)
    fields_: dict[str, str] = {}
    for child in elem:
        child_path = f"{path}/{child.tag}"
        if child.tag not in ("title", "creator", "date", "description", "language"):
            _fail("UNKNOWN_ELEMENT", child_path, f"unknown element {child.tag!r}")
        if child.tag in fields_:
            _fail("DUPLICATE_ELEMENT", child_path, f"{child.tag} appears twice")
        _check_attrs(child, child_path, ())
        fields_[child.tag] = _leaf_text(child, child_path)
    for required in ("title", "creator", "date"):
        if required not in fields_:
            _fail("MISSING_ELEMENT", path, f"metadata requires {required}")
    try:
        parsed_date = Date.fromisoformat(fields_["date"].strip())
    except ValueError:
        _fail("BAD_DATE", f"{path}/date", f"not a calendar date: {fields_['date']!r}")
    return CardMetadata(
        title=fields_["title"],
        creator=fields_["creator"],
        date=parsed_date,
        description=fields_.get("description"),
        language=fields_.get("language"),
    )


def _parse_section(elem: ET.Element, path: str):
    name = elem.tag
    _check_attrs(elem, path, ())
    if name == model.SECTION_LEXICON:
        return _parse_lexicon(elem, path)
    if name == model.SECTION_CONCEPT_NETWORK:
        return _parse_network(elem, path)
    if name == model.SECTION_STATECHART:
        return _parse_statechart(elem, path)
    if name == model.SECTION_COLLABORATION:
        return _parse_collaboration(elem, path)
    if name == model.SECTION_CONSTRAINTS:
        return _parse_constraints(elem, path)
    if name == model.SECTION_NARRATIVE:
        return _parse_narrative(elem, path)
    raise AssertionError(name)


def parse_section_document(name: str, document: str):
    """Parse a standalone section record produced by serialize_section."""

    try:
        elem = ET.fromstring(document)
    except ET.ParseError as exc:
        raise CardXmlError("MALFORMED_XML", "", str(exc)) from None
    if elem.tag != name:
        _fail("UNKNOWN_ELEMENT", elem.tag, f"expected {name}")
    return _parse_section(elem, name)


def parse_card_header(document: str) -> tuple[str, CardKind, CardMetadata]:
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise CardXmlError("MALFORMED_XML", "", str(exc)) from None
    if root.tag != "card-record":
        _fail("UNKNOWN_ELEMENT", root.tag, "expected card-record")
    _check_attrs(root, "card-record", ("id", "kind", "version"))
    kind = CardKind.parse(root.get("kind", ""))
    metadata = None
    for child in root:
        if child.tag != "metadata" or metadata is not None:
            _fail("UNKNOWN_ELEMENT", f"card-record/{child.tag}", "expected a single metadata child")
        metadata = _parse_metadata(child, "card-record/metadata")
    if metadata is None:
        _fail("MISSING_ELEMENT", "card-record", "metadata element is required")
    return root.get("id", ""), kind, metadata


def _parse_lexicon(elem: ET.Element, path: str) -> tuple[LexiconEntry, ...]:
    _no_stray_text(elem, path)
    entries: list[LexiconEntry] = []
    for i, child in enumerate(elem, start=1):
        child_path = f"{path}/entry[{i}]"
        if child.tag != "entry":
            _fail("UNKNOWN_ELEMENT", f"{path}/{child.tag}", f"unknown element {child.tag!r}")
        _check_attrs(child, child_path, ("term",))
        _no_stray_text(child, child_path)
        definition = None
        for sub in child:
            if sub.tag != "definition" or definition is not None:
                _fail("UNKNOWN_ELEMENT", f"{child_path}/{sub.tag}", "entry holds a single definition")
            _check_attrs(sub, f"{child_path}/definition", ())
            definition = _leaf_text(sub, f"{child_path}/definition")
        if definition is None:
            _fail("MISSING_ELEMENT", child_path, "entry requires a definition")
        entries.append(LexiconEntry(child.get("term", ""), definition))
    if not entries:
        _fail("EMPTY_SECTION", path, "lexicon requires at least one entry")
    return tuple(entries)


def _parse_network(elem: ET.Element, path: str) -> ConceptNetwork:
    _no_stray_text(elem, path)
    concepts: list[Concept] = []
    relations: list[ConceptRelation] = []
    for child in elem:
        if child.tag == "concept":
            child_path = f"{path}/concept[{len(concepts) + 1}]"
            _check_attrs(child, child_path, ("id", "label"))
            _no_content(child, child_path)
            concepts.append(Concept(child.get("id", ""), child.get("label", "")))
        elif child.tag == "relation":
            child_path = f"{path}/relation[{len(relations) + 1}]"
            _check_attrs(child, child_path, ("kind", "from", "to"), ("label",))
            _no_content(child, child_path)
            kind = child.get("kind", "")
            if kind not in model.RELATION_KINDS:
                _fail("BAD_RELATION_KIND", child_path, f"unknown relation kind {kind!r}")
            relations.append(
                ConceptRelation(kind, child.get("from", ""), child.get("to", ""), child.get("label"))
            )
        else:
            _fail("UNKNOWN_ELEMENT", f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if not concepts:
        _fail("EMPTY_SECTION", path, "concept-network requires at least one concept")
    return ConceptNetwork(tuple(concepts), tuple(relations))


def _parse_statechart(elem: ET.Element, path: str) -> StateChart:
    _no_stray_text(elem, path)
    states: list[State] = []
    transitions: list[Transition] = []
    initial: Optional[str] = None
    for child in elem:
        if child.tag == "state":
            child_path = f"{path}/state[{len(states) + 1}]"
            _check_attrs(child, child_path, ("id", "label"))
            _no_content(child, child_path)
            states.append(State(child.get("id", ""), child.get("label", "")))
        elif child.tag == "initial":
            child_path = f"{path}/initial"
            if initial is not None:
                _fail("DUPLICATE_ELEMENT", child_path, "initial appears twice")
            _check_attrs(child, child_path, ("ref",))
            _no_content(child, child_path)
            initial = child.get("ref", "")
        elif child.tag == "transition":
            child_path = f"{path}/transition[{len(transitions) + 1}]"
            _check_attrs(child, child_path, ("from", "to", "event"))
            _no_content(child, child_path)
            transitions.append(
                Transition(child.get("from", ""), child.get("to", ""), child.get("event", ""))
            )
        else:
            _fail("UNKNOWN_ELEMENT", f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if not states:
        _fail("EMPTY_SECTION", path, "statechart requires at least one state")
    if initial is None:
        _fail("MISSING_ELEMENT", path, "statechart requires an initial element")
    return StateChart(tuple(states), initial, tuple(transitions))


def _parse_collaboration(elem: ET.Element, path: str) -> Collaboration:
    _no_stray_text(elem, path)
    objects: list[CollabObject] = []
    messages: list[Message] = []
    for child in elem:
        if child.tag == "object":
            child_path = f"{path}/object[{len(objects) + 1}]"
            _check_attrs(child, child_path, ("id", "label"))
            _no_content(child, child_path)
            objects.append(CollabObject(child.get("id", ""), child.get("label", "")))
        elif child.tag == "message":
            child_path = f"{path}/message[{len(messages) + 1}]"
            _check_attrs(child, child_path, ("seq", "from", "to", "label"))
            _no_content(child, child_path)
            seq_text = child.get("seq", "")
            if not seq_text.isdigit() or int(seq_text) <= 0:
                _fail("BAD_SEQ", child_path, f"seq must be a positive integer, got {seq_text!r}")
            messages.append(
                Message(int(seq_text), child.get("from", ""), child.get("to", ""), child.get("label", ""))
            )
        else:
            _fail("UNKNOWN_ELEMENT", f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if not objects:
        _fail("EMPTY_SECTION", path, "collaboration requires at least one object")
    return Collaboration(tuple(objects), tuple(messages))


def _parse_constraints(elem: ET.Element, path: str) -> tuple[ConstraintAttachment, ...]:
    _no_stray_text(elem, path)
    attachments: list[ConstraintAttachment] = []
    for i, child in enumerate(elem, start=1):
        child_path = f"{path}/constraint[{i}]"
        if child.tag != "constraint":
            _fail("UNKNOWN_ELEMENT", f"{path}/{child.tag}", f"unknown element {child.tag!r}")
        _check_attrs(child, child_path, ())
        source = _leaf_text(child, child_path)
        try:
            attachments.append(ConstraintAttachment.from_source(source))
        except ocl.OclError as exc:
            offset = f" at offset {exc.offset}" if exc.offset is not None else ""
            _fail("CONSTRAINT_PARSE_ERROR", child_path, f"{exc}{offset}")
    if not attachments:
        _fail("EMPTY_SECTION", path, "constraints requires at least one constraint")
    return tuple(attachments)


def _parse_narrative(elem: ET.Element, path: str) -> Narrative:
    _no_stray_text(elem, path)
    text: Optional[str] = None
    figures: list[str] = []
    for child in elem:
        if child.tag == "text":
            child_path = f"{path}/text"
            if text is not None:
                _fail("DUPLICATE_ELEMENT", child_path, "text appears twice")
            _check_attrs(child, child_path, ())
            text = _leaf_text(child, child_path)
        elif child.tag == "figure":
            child_path = f"{path}/figure[{len(figures) + 1}]"
            _check_attrs(child, child_path, ("href",))
            _no_content(child, child_path)
            figures.append(child.get("href", ""))
        else:
            _fail("UNKNOWN_ELEMENT", f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if text is None:
        _fail("MISSING_ELEMENT", path, "narrative requires a text element")
    return Narrative(text, tuple(figures))


def validate_against_schema(document: str) -> list[Violation]:
    """Structural plus model-level validation; reports, never raises."""

    try:
        parse_card(document)
    except InvalidCardError as exc:
        return list(exc.report)
    except CardXmlError as exc:
        return [Violation(exc.code, exc.path, str(exc))]
    return []
