import random
from dataclasses import replace
from datetime import date

import pytest

from knowcard import model
from knowcard.model import (
    CardKind,
    CardMetadata,
    Concept,
    ConceptNetwork,
    ConceptRelation,
    ConstraintAttachment,
    KindError,
    KnowledgeCard,
    LexiconEntry,
    Violation,
    build_lead_protection_fixture,
    required_sections,
    validate_card,
)

from generators import card_stream, random_card


def _codes(report):
    return [v.code for v in report]


def lexicon_card(entries=None):
    return KnowledgeCard(
        id="pen_terms",
        kind=CardKind("vocabulary", "lexicon"),
        metadata=CardMetadata("Pen terms", "glossary team", date(2004, 5, 2)),
        lexicon=entries
        if entries is not None
        else (
            LexiconEntry("Cap", "removable lead protection part"),
            LexiconEntry("clip", "spring blade holding the pen to a pocket"),
            LexiconEntry("Closer", "cap insert sealing the tip"),
        ),
    )


# --- taxonomy -----------------------------------------------------------------


def test_twelve_valid_kinds():
    kinds = model.all_kinds()
    assert len(kinds) == 12
    assert CardKind("culture", "physic") in kinds


@pytest.mark.parametrize(
    "domain,subtype",
    [("culture", "lexicon"), ("vocabulary", "history"), ("design", "semantics"), ("culture", "")],
)
def test_invalid_kind_pairs_rejected(domain, subtype):
    with pytest.raises(KindError):
        CardKind(domain, subtype)


def test_kind_parse_dotted():
    assert CardKind.parse("process.tactic") == CardKind("process", "tactic")
    with pytest.raises(KindError):
        CardKind.parse("process")
    with pytest.raises(KindError):
        CardKind.parse("vocabulary.dictionary")


# --- required sections -----------------------------------------------------------


def test_required_sections_examples():
    assert required_sections(CardKind("culture", "physic")) == {"statechart", "collaboration"}
    assert required_sections(CardKind("vocabulary", "lexicon")) == {"lexicon"}
    assert required_sections(CardKind("appraise", "payment")) == {"constraints", "narrative"}


def test_required_sections_total_and_non_empty():
    for kind in model.all_kinds():
        sections = required_sections(kind)
        assert sections, kind
        assert sections == required_sections(kind)  # deterministic
        assert all(name in model.SECTION_ORDER for name in sections)


# --- validate_card ----------------------------------------------------------------


def test_valid_lexicon_card_has_empty_report():
    assert validate_card(lexicon_card()) == []


def test_missing_required_section():
    card = lexicon_card().without_section("lexicon")
    report = validate_card(card)
    assert _codes(report) == ["MISSING_SECTION"]
    assert report[0].path == "lexicon"


def test_dangling_relation_reported():
    card = KnowledgeCard(
        id="geo",
        kind=CardKind("culture", "geography"),
        metadata=CardMetadata("Craft limits", "team", date(2004, 1, 1)),
        concept_network=ConceptNetwork(
            (Concept("barrel", "Barrel"),),
            (ConceptRelation("association", "barrel", "nib"),),
        ),
    )
    assert _codes(validate_card(card)) == ["DANGLING_RELATION"]


def test_composition_cycle_detected():
    card = KnowledgeCard(
        id="geo",
        kind=CardKind("culture", "geography"),
        metadata=CardMetadata("Craft limits", "team", date(2004, 1, 1)),
        concept_network=ConceptNetwork(
            (Concept("a", "A"), Concept("b", "B")),
            (
                ConceptRelation("composition", "a", "b"),
                ConceptRelation("composition", "b", "a"),
            ),
        ),
    )
    assert "CYCLE_IN_COMPOSITION" in _codes(validate_card(card))


def test_association_cycle_is_allowed():
    card = KnowledgeCard(
        id="geo",
        kind=CardKind("culture", "geography"),
        metadata=CardMetadata("Craft limits", "team", date(2004, 1, 1)),
        concept_network=ConceptNetwork(
            (Concept("a", "A"), Concept("b", "B")),
            (
                ConceptRelation("association", "a", "b"),
                ConceptRelation("association", "b", "a"),
            ),
        ),
    )
    assert validate_card(card) == []


def test_self_relation_rejected_for_part_of_kinds():
    card = KnowledgeCard(
        id="geo",
        kind=CardKind("culture", "geography"),
        metadata=CardMetadata("Craft limits", "team", date(2004, 1, 1)),
        concept_network=ConceptNetwork(
            (Concept("a", "A"),),
            (ConceptRelation("composition", "a", "a"),),
        ),
    )
    assert _codes(validate_card(card)) == ["SELF_RELATION"]


def test_duplicate_and_bad_concept_ids():
    card = KnowledgeCard(
        id="geo",
        kind=CardKind("culture", "geography"),
        metadata=CardMetadata("Craft limits", "team", date(2004, 1, 1)),
        concept_network=ConceptNetwork(
            (Concept("a", "A"), Concept("a", "Again"), Concept("9bad", "Bad")),
        ),
    )
    codes = _codes(validate_card(card))
    assert codes.count("DUPLICATE_CONCEPT_ID") == 1
    assert codes.count("BAD_CONCEPT_ID") == 1


def test_statechart_invariants():
    chart = model.StateChart(
        (model.State("s1", "one"), model.State("s1", "dup")),
        "ghost",
        (model.Transition("s1", "nowhere", "evt"),),
    )
    card = KnowledgeCard(
        id="tac",
        kind=CardKind("process", "tactic"),
        metadata=CardMetadata("Sequence", "team", date(2004, 1, 1)),
        statechart=chart,
    )
    codes = _codes(validate_card(card))
    assert "DUPLICATE_STATE_ID" in codes
    assert "UNKNOWN_INITIAL" in codes
    assert "DANGLING_TRANSITION" in codes


def test_collaboration_invariants():
    collab = model.Collaboration(
        (model.CollabObject("o1", "one"), model.CollabObject("o2", "two")),
        (
            model.Message(2, "o1", "o2", "first"),
            model.Message(2, "o2", "ghost", "stuck"),
        ),
    )
    card = KnowledgeCard(
        id="strat",
        kind=CardKind("process", "strategy"),
        metadata=CardMetadata("Cartography", "team", date(2004, 1, 1)),
        collaboration=collab,
    )
    codes = _codes(validate_card(card))
    assert "BAD_MESSAGE_SEQ" in codes
    assert "DANGLING_MESSAGE" in codes


def test_lexicon_terms_unique_case_insensitive():
    card = lexicon_card((LexiconEntry("Cap", "x"), LexiconEntry("cap", "y")))
    assert _codes(validate_card(card)) == ["DUPLICATE_TERM"]
    card = lexicon_card((LexiconEntry("  ", "x"),))
    assert _codes(validate_card(card)) == ["EMPTY_TERM"]


def test_metadata_invariants():
    card = replace(
        lexicon_card(), metadata=CardMetadata("", " ", date(2004, 1, 1))
    )
    codes = _codes(validate_card(card))
    assert "EMPTY_TITLE" in codes
    assert "EMPTY_CREATOR" in codes


def test_bad_card_id():
    assert _codes(validate_card(replace(lexicon_card(), id="9lives"))) == ["BAD_CARD_ID"]
    assert _codes(validate_card(replace(lexicon_card(), id=""))) == ["BAD_CARD_ID"]
    assert validate_card(replace(lexicon_card(), id="ok-id_2")) == []


def test_extra_sections_beyond_required_are_allowed():
    rng = random.Random(5)
    card = random_card(rng, CardKind("vocabulary", "lexicon"))
    card = replace(card, narrative=model.Narrative("background story", ()))
    assert validate_card(card) == []


def test_unrequired_empty_section_reported():
    card = replace(lexicon_card(), constraints=())
    assert _codes(validate_card(card)) == ["EMPTY_SECTION"]


def test_constraint_attachment_mismatch_detected():
    good = ConstraintAttachment.from_source("context c inv : a > 0")
    tampered = ConstraintAttachment(
        "context c inv : a > 1", good.parsed
    )
    card = KnowledgeCard(
        id="pay",
        kind=CardKind("appraise", "payment"),
        metadata=CardMetadata("Rule", "team", date(2004, 1, 1)),
        constraints=(tampered,),
        narrative=model.Narrative("why", ()),
    )
    assert "CONSTRAINT_MISMATCH" in _codes(validate_card(card))


# --- mutation property --------------------------------------------------------------


def test_single_required_section_deletion_yields_exactly_one_missing_section():
    rng = random.Random(20240818)
    for kind in model.all_kinds():
        card = random_card(rng, kind)
        assert validate_card(card) == [], kind
        for section in required_sections(kind):
            mutant = card.without_section(section)
            report = validate_card(mutant)
            assert _codes(report) == ["MISSING_SECTION"], (kind, section)
            assert report[0].path == section


def test_generated_cards_are_valid():
    for card in card_stream(seed=11, count=60):
        assert validate_card(card) == [], card.id


# --- fixture ---------------------------------------------------------------------


def test_fixture_shape():
    card = build_lead_protection_fixture()
    network = card.concept_network
    assert card.kind == CardKind("vocabulary", "semantics")
    assert len(network.concepts) == 5
    assert len(network.relations) == 4
    assert {c.id for c in network.concepts} == {
        "Lead_protection",
        "mecanism",
        "Cap",
        "Closer",
        "clip",
    }
    assert (
        ConceptRelation("aggregation", "Lead_protection", "mecanism") in network.relations
    )
    assert ConceptRelation("composition", "Cap", "clip") in network.relations


def test_fixture_is_valid_and_acyclic():
    card = build_lead_protection_fixture()
    assert validate_card(card) == []
    # manufactured 2-cycle on the same fixture trips the acyclicity check
    looped = replace(
        card,
        concept_network=ConceptNetwork(
            card.concept_network.concepts,
            card.concept_network.relations
            + (ConceptRelation("composition", "Closer", "Cap"),),
        ),
    )
    assert "CYCLE_IN_COMPOSITION" in _codes(validate_card(looped))


def test_violation_is_machine_readable():
    violation = validate_card(lexicon_card().without_section("lexicon"))[0]
    assert isinstance(violation, Violation)
    assert violation.code == "MISSING_SECTION"
    assert violation.path and violation.message
