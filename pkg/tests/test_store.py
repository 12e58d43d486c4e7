import random
from dataclasses import replace

import pytest

from knowcard import model
from knowcard.model import (
    CardKind,
    CardMetadata,
    Concept,
    ConceptNetwork,
)
from knowcard.rdf import LB_NS, Iri, from_debug_lines
from knowcard.store import (
    CardStore,
    DuplicateIdError,
    NotFoundError,
    RedefinitionError,
    StoreNotInitialized,
    ValidationFailedError,
    derive_triples,
    resolve_resource,
)

from generators import random_card

from datetime import date


class SimulatedCrash(Exception):
    pass


def links_text(store: CardStore) -> str:
    return (store.root / "rdf" / "links.nt").read_text(encoding="utf-8")


# --- basic lifecycle -----------------------------------------------------------


def test_put_get_identity_fixture(store, fixture_card):
    card_id = store.put_card(fixture_card)
    assert store.get_card(card_id) == fixture_card


def test_put_get_identity_randomized(tmp_path):
    rng = random.Random(8)
    for i, kind in enumerate(model.all_kinds()):
        card = random_card(rng, kind)
        s = CardStore(tmp_path / f"s{i}")
        s.put_card(card)
        assert s.get_card(card.id) == card


def test_put_duplicate_id(store, fixture_card):
    store.put_card(fixture_card)
    with pytest.raises(DuplicateIdError):
        store.put_card(fixture_card)
    # explicit overwrite is allowed and replaces sections
    updated = replace(fixture_card, narrative=model.Narrative("revised", ()))
    store.put_card(updated, overwrite=True)
    assert store.get_card(fixture_card.id) == updated


def test_put_invalid_card(store, fixture_card):
    broken = fixture_card.without_section("concept-network")
    with pytest.raises(ValidationFailedError) as exc:
        store.put_card(broken)
    assert exc.value.report[0].code == "MISSING_SECTION"


def test_get_missing(store):
    with pytest.raises(NotFoundError):
        store.get_card("ghost")


def test_persistence_across_reopen(tmp_path, fixture_card):
    root = tmp_path / "store"
    CardStore(root).put_card(fixture_card)
    reopened = CardStore(root)
    assert reopened.get_card(fixture_card.id) == fixture_card
    assert reopened.list_cards()[0][0] == fixture_card.id


def test_requires_init_when_create_false(tmp_path):
    with pytest.raises(StoreNotInitialized):
        CardStore(tmp_path / "missing", create=False)


# --- layout / repositories --------------------------------------------------------


def test_layout_created(store):
    for repo in store.repositories():
        assert (store.root / repo).exists(), repo
    assert (store.root / "rdf" / "schema.rdf").exists()
    assert (store.root / "rdf" / "links.nt").exists()


def test_sections_live_in_distinct_repositories(tmp_path):
    card = random_card(random.Random(3), CardKind("culture", "physic"))
    s = CardStore(tmp_path / "s")
    s.put_card(card)
    assert s.has_record("sections/statechart", card.id)
    assert s.has_record("sections/collaboration", card.id)
    assert s.has_record("metadata", card.id)
    assert not s.has_record("sections/lexicon", card.id) or card.lexicon is not None


# --- RDF level ----------------------------------------------------------------------


def test_put_emits_paper_graph(store, fixture_card):
    from knowcard.fixtures import lead_protection_rdf_path
    from knowcard.rdfxml import load_rdfxml
    from test_rdfxml import canonical

    store.put_card(fixture_card)
    triples, _ = load_rdfxml(lead_protection_rdf_path().read_text())
    lifted = set(store.triple_store.triples())
    assert canonical(triples) <= canonical(lifted)
    # Dublin Core triples for the card resource are present as well
    dc_hits = store.triple_store.query(subject=Iri("http://localhost/Lead_protection"))
    assert any(t.predicate.value.endswith("title") for t in dc_hits)


def test_find_related_cards(store, fixture_card):
    store.put_card(fixture_card)
    cap = Iri("http://localhost/Cap")
    related = store.find_related_cards(cap, Iri(LB_NS + "composition"))
    assert [(i.value.rsplit("/", 1)[1], c) for i, c in related] == [
        ("Closer", "Lead_protection"),
        ("clip", "Lead_protection"),
    ]
    inferred = store.find_related_cards(cap, Iri(LB_NS + "semantique_metier"), use_inference=True)
    assert [i.local_name() for i, _ in inferred] == ["Closer", "clip"]
    assert store.find_related_cards(Iri("http://localhost/unknown"), Iri(LB_NS + "composition")) == []


def test_delete_restores_rdf_state(store, fixture_card):
    before = links_text(store)
    store.put_card(fixture_card)
    assert links_text(store) != before
    store.delete_card(fixture_card.id)
    assert links_text(store) == before
    assert store.list_cards() == []
    with pytest.raises(NotFoundError):
        store.get_card(fixture_card.id)
    with pytest.raises(NotFoundError):
        store.delete_card(fixture_card.id)


def test_delete_leaves_other_cards_intact(tmp_path, fixture_card):
    s = CardStore(tmp_path / "s")
    other = random_card(random.Random(4), CardKind("process", "diary"))
    s.put_card(fixture_card)
    s.put_card(other)
    s.delete_card(other.id)
    assert s.get_card(fixture_card.id) == fixture_card
    assert set(s.triple_store.triples()) == set(derive_triples(fixture_card))


def test_rdf_store_equals_rebuild_after_mutations(tmp_path, fixture_card):
    s = CardStore(tmp_path / "s")
    rng = random.Random(5)
    cards = [fixture_card, random_card(rng, CardKind("process", "diary"), card_id="diary_1")]
    for card in cards:
        s.put_card(card)
    s.delete_card("diary_1")
    s.put_card(random_card(rng, CardKind("culture", "geography"), card_id="geo_1"))
    expected = set()
    for card_id, _, _ in s.list_cards():
        expected |= set(derive_triples(s.get_card(card_id), s.base_iri))
    on_disk = set(from_debug_lines(links_text(s)))
    assert on_disk == expected
    assert set(s.triple_store.triples()) == expected


# --- defining cards -------------------------------------------------------------------


def test_vocabulary_card_defines_resources(store, fixture_card):
    store.put_card(fixture_card)
    assert store.defining_card(Iri("http://localhost/Cap")) == "Lead_protection"
    assert store.resource_label(Iri("http://localhost/Cap")) == "Cap"
    assert store.defining_card(Iri("http://localhost/elsewhere")) is None


def test_non_vocabulary_card_does_not_define(tmp_path):
    s = CardStore(tmp_path / "s")
    card = random_card(random.Random(6), CardKind("culture", "geography"), card_id="geo")
    s.put_card(card)
    concept = card.concept_network.concepts[0]
    assert s.defining_card(resolve_resource(concept.id)) is None


def test_redefinition_with_conflicting_label(store, fixture_card):
    store.put_card(fixture_card)
    rival = model.KnowledgeCard(
        id="rival",
        kind=CardKind("vocabulary", "semantics"),
        metadata=CardMetadata("Rival", "team", date(2004, 1, 1)),
        concept_network=ConceptNetwork((Concept("Cap", "hat (clothing)"),)),
    )
    with pytest.raises(RedefinitionError):
        store.put_card(rival)
    # same label is a reference, not a redefinition; the first card keeps it
    friendly = replace(
        rival, concept_network=ConceptNetwork((Concept("Cap", "Cap"),))
    )
    store.put_card(friendly)
    assert store.defining_card(Iri("http://localhost/Cap")) == "Lead_protection"


def test_delete_releases_definitions(store, fixture_card):
    store.put_card(fixture_card)
    store.delete_card(fixture_card.id)
    assert store.defining_card(Iri("http://localhost/Cap")) is None


# --- listing -----------------------------------------------------------------------


def test_list_cards_filter(tmp_path, fixture_card):
    s = CardStore(tmp_path / "s")
    assert s.list_cards() == []
    rng = random.Random(7)
    s.put_card(fixture_card)
    s.put_card(random_card(rng, CardKind("vocabulary", "lexicon"), card_id="lex_1"))
    s.put_card(random_card(rng, CardKind("process", "tactic"), card_id="tac_1"))
    assert [cid for cid, _, _ in s.list_cards()] == ["Lead_protection", "lex_1", "tac_1"]
    only_lex = s.list_cards(CardKind("vocabulary", "lexicon"))
    assert len(only_lex) == 1 and only_lex[0][0] == "lex_1"


# --- crash atomicity -----------------------------------------------------------------


from crash_harness import (
    SimulatedCrash,
    build_catalog,
    count_injection_points,
    resume_script,
    run_script,
    verify_all_or_nothing,
)


def test_crash_atomicity_across_all_injection_points(tmp_path):
    catalog = build_catalog()
    total = count_injection_points(tmp_path / "count", catalog)
    assert total >= 50, f"scenario exposes only {total} injection points"

    reference = CardStore(tmp_path / "reference")
    run_script(reference, catalog)
    reference_listing = reference.list_cards()
    reference_links = links_text(reference)

    for point in range(total):
        root = tmp_path / f"crash{point}"
        remaining = [point]

        def hook(label):
            if remaining[0] == 0:
                raise SimulatedCrash(label)
            remaining[0] -= 1

        crashing = CardStore(root, fault_hook=hook)
        with pytest.raises(SimulatedCrash):
            run_script(crashing, catalog)

        reopened = CardStore(root)
        verify_all_or_nothing(reopened, catalog)

        # recovery leaves a working store: finishing the script converges
        resume_script(reopened, catalog)
        assert reopened.list_cards() == reference_listing
        assert links_text(reopened) == reference_links


def test_recovery_is_idempotent(tmp_path):
    root = tmp_path / "s"
    remaining = [13]

    def hook(label):
        if remaining[0] == 0:
            raise SimulatedCrash(label)
        remaining[0] -= 1

    crashing = CardStore(root, fault_hook=hook)
    with pytest.raises(SimulatedCrash):
        for i in range(5):
            crashing.put_card(
                random_card(random.Random(i), CardKind("vocabulary", "lexicon"), card_id=f"l{i}")
            )
    first = CardStore(root)
    snapshot = (first.list_cards(), links_text(first))
    second = CardStore(root)
    assert (second.list_cards(), links_text(second)) == snapshot
