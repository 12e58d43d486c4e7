"""Transform profiles: named server-side renderings of a stored card.

raw-xml is byte-identical to the canonical serialization; json and html
are lossless projections (every card field appears; the json one round
trips back into an equal card via card_from_json).
"""

from __future__ import annotations

import html
from datetime import date as Date

from knowcard import cardxml
from knowcard.model import (
    CardKind,
    CardMetadata,
    CollabObject,
    Collaboration,
    Concept,
    ConceptNetwork,
    ConceptRelation,
    ConstraintAttachment,
    KnowledgeCard,
    LexiconEntry,
    Message,
    Narrative,
    State,
    StateChart,
    Transition,
)

PROFILES = ("raw-xml", "json", "html")

MEDIA_TYPES = {
    "raw-xml": "application/xml",
    "json": "application/json",
    "html": "text/html",
}


def card_to_json(card: KnowledgeCard) -> dict:
    sections: dict[str, object] = {}
    if card.lexicon is not None:
        sections["lexicon"] = [
            {"term": e.term, "definition": e.definition} for e in card.lexicon
        ]
    if card.concept_network is not None:
        sections["concept-network"] = {
            "concepts": [{"id": c.id, "label": c.label} for c in card.concept_network.concepts],
            "relations": [
                {"kind": r.kind, "from": r.source, "to": r.target, "label": r.label}
                for r in card.concept_network.relations
            ],
        }
    if card.statechart is not None:
        sections["statechart"] = {
            "states": [{"id": s.id, "label": s.label} for s in card.statechart.states],
            "initial": card.statechart.initial,
            "transitions": [
                {"from": t.source, "to": t.target, "event": t.event}
                for t in card.statechart.transitions
            ],
        }
    if card.collaboration is not None:
        sections["collaboration"] = {
            "objects": [{"id": o.id, "label": o.label} for o in card.collaboration.objects],
            "messages": [
                {"seq": m.seq, "from": m.source, "to": m.target, "label": m.label}
                for m in card.collaboration.messages
            ],
        }
    if card.constraints is not None:
        sections["constraints"] = [
            {"source": a.source_text, "context": a.parsed.context_name} for a in card.constraints
        ]
    if card.narrative is not None:
        sections["narrative"] = {
            "text": card.narrative.text,
            "figures": list(card.narrative.figure_refs),
        }
    return {
        "id": card.id,
        "kind": str(card.kind),
        "version": cardxml.CARD_VERSION,
        "metadata": {
            "title": card.metadata.title,
            "creator": card.metadata.creator,
            "date": card.metadata.date.isoformat(),
            "description": card.metadata.description,
            "language": card.metadata.language,
        },
        "sections": sections,
    }


def card_from_json(data: dict) -> KnowledgeCard:
    """Reconstruct a card from its json profile (losslessness contract)."""

    meta = data["metadata"]
    sections = data.get("sections", {})
    kwargs: dict[str, object] = {}
    if "lexicon" in sections:
        kwargs["lexicon"] = tuple(
            LexiconEntry(e["term"], e["definition"]) for e in sections["lexicon"]
        )
    if "concept-network" in sections:
        net = sections["concept-network"]
        kwargs["concept_network"] = ConceptNetwork(
            tuple(Concept(c["id"], c["label"]) for c in net["concepts"]),
            tuple(
                ConceptRelation(r["kind"], r["from"], r["to"], r.get("label"))
                for r in net.get("relations", [])
            ),
        )
    if "statechart" in sections:
        chart = sections["statechart"]
        kwargs["statechart"] = StateChart(
            tuple(State(s["id"], s["label"]) for s in chart["states"]),
            chart["initial"],
            tuple(Transition(t["from"], t["to"], t["event"]) for t in chart.get("transitions", [])),
        )
    if "collaboration" in sections:
        collab = sections["collaboration"]
        kwargs["collaboration"] = Collaboration(
            tuple(CollabObject(o["id"], o["label"]) for o in collab["objects"]),
            tuple(
                Message(m["seq"], m["from"], m["to"], m["label"])
                for m in collab.get("messages", [])
            ),
        )
    if "constraints" in sections:
        kwargs["constraints"] = tuple(
            ConstraintAttachment.from_source(c["source"]) for c in sections["constraints"]
        )
    if "narrative" in sections:
        narrative = sections["narrative"]
        kwargs["narrative"] = Narrative(narrative["text"], tuple(narrative.get("figures", [])))
    return KnowledgeCard(
        id=data["id"],
        kind=CardKind.parse(data["kind"]),
        metadata=CardMetadata(
            title=meta["title"],
            creator=meta["creator"],
            date=Date.fromisoformat(meta["date"]),
            description=meta.get("description"),
            language=meta.get("language"),
        ),
        **kwargs,
    )


def card_to_html(card: KnowledgeCard) -> str:
    esc = html.escape
    out = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        f"<head><meta charset=\"utf-8\"><title>{esc(card.metadata.title)}</title></head>",
        "<body>",
        f"<h1>{esc(card.metadata.title)}</h1>",
        "<dl>",
        f"<dt>id</dt><dd>{esc(card.id)}</dd>",
        f"<dt>kind</dt><dd>{esc(str(card.kind))}</dd>",
        f"<dt>version</dt><dd>{cardxml.CARD_VERSION}</dd>",
        f"<dt>creator</dt><dd>{esc(card.metadata.creator)}</dd>",
        f"<dt>date</dt><dd>{esc(card.metadata.date.isoformat())}</dd>",
    ]
    if card.metadata.description is not None:
        out.append(f"<dt>description</dt><dd>{esc(card.metadata.description)}</dd>")
    if card.metadata.language is not None:
        out.append(f"<dt>language</dt><dd>{esc(card.metadata.language)}</dd>")
    out.append("</dl>")

    if card.lexicon is not None:
        out.append("<h2>Lexicon</h2><dl>")
        for entry in card.lexicon:
            out.append(f"<dt>{esc(entry.term)}</dt><dd>{esc(entry.definition)}</dd>")
        out.append("</dl>")
    if card.concept_network is not None:
        out.append("<h2>Concept network</h2><ul>")
        for concept in card.concept_network.concepts:
            out.append(f'<li class="concept">{esc(concept.id)}: {esc(concept.label)}</li>')
        out.append("</ul><ul>")
        for rel in card.concept_network.relations:
            label = f" ({esc(rel.label)})" if rel.label is not None else ""
            out.append(
                f'<li class="relation">{esc(rel.source)} &mdash;{esc(rel.kind)}&rarr; {esc(rel.target)}{label}</li>'
            )
        out.append("</ul>")
    if card.statechart is not None:
        out.append("<h2>Statechart</h2><ul>")
        for state in card.statechart.states:
            marker = " (initial)" if state.id == card.statechart.initial else ""
            out.append(f'<li class="state">{esc(state.id)}: {esc(state.label)}{marker}</li>')
        for tr in card.statechart.transitions:
            out.append(
                f'<li class="transition">{esc(tr.source)} &rarr; {esc(tr.target)} on {esc(tr.event)}</li>'
            )
        out.append("</ul>")
    if card.collaboration is not None:
        out.append("<h2>Collaboration</h2><ul>")
        for obj in card.collaboration.objects:
            out.append(f'<li class="object">{esc(obj.id)}: {esc(obj.label)}</li>')
        for msg in card.collaboration.messages:
            out.append(
                f'<li class="message">{msg.seq}. {esc(msg.source)} &rarr; {esc(msg.target)}: {esc(msg.label)}</li>'
            )
        out.append("</ul>")
    if card.constraints is not None:
        out.append("<h2>Constraints</h2>")
        for att in card.constraints:
            out.append(f"<pre>{esc(att.source_text)}</pre>")
    if card.narrative is not None:
        out.append("<h2>Narrative</h2>")
        out.append(f"<p>{esc(card.narrative.text)}</p>")
        if card.narrative.figure_refs:
            out.append("<ul>")
            for ref in card.narrative.figure_refs:
                out.append(f'<li class="figure">{esc(ref)}</li>')
            out.append("</ul>")
    out.append("</body></html>")
    return "\n".join(out) + "\n"


def render(card: KnowledgeCard, profile: str):
    """(body, media type) for a profile; raw-xml defers to the card codec."""

    if profile == "raw-xml":
        return cardxml.serialize_card(card), MEDIA_TYPES[profile]
    if profile == "json":
        return card_to_json(card), MEDIA_TYPES[profile]
    if profile == "html":
        return card_to_html(card), MEDIA_TYPES[profile]
    raise ValueError(f"unknown profile {profile!r}")
