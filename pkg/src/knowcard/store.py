"""Card persistence: decomposed records, link triples, atomic commits.

A store root holds one repository per section kind plus one for metadata
and one RDF level:

    <root>/metadata/<id>.xml            card identity + metadata record
    <root>/sections/<section>/<id>.xml  one record per present section
    <root>/rdf/links.nt                 link + Dublin Core triples
    <root>/rdf/schema.rdf               the ontology vocabulary
    <root>/rdf/resources.json           defining-card registry
    <root>/journal/                     write-ahead intents + staged files

Every mutation is staged, journaled, then applied with atomic renames;
recovery on open rolls a journaled transaction forward (or discards an
unjournaled stage), so readers observe none or all of a record set.
"""

from __future__ import annotations

import json
import os
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

from knowcard import cardxml, model
from knowcard.model import CardKind, KnowledgeCard, SECTION_ORDER
from knowcard.rdf import (
    DC_NS,
    DEFAULT_BASE_IRI,
    LB_NS,
    RDF_NS,
    BlankNode,
    Iri,
    Literal,
    Triple,
    TripleStore,
    from_debug_lines,
    to_debug_lines,
)
from knowcard import rdfxml


class StoreError(Exception):
    code = "STORE_ERROR"

    def __init__(self, message: str):
        super().__init__(message)


class DuplicateIdError(StoreError):
    code = "DUPLICATE_ID"


class NotFoundError(StoreError):
    code = "NOT_FOUND"


class ValidationFailedError(StoreError):
    code = "VALIDATION_FAILED"

    def __init__(self, report):
        first = report[0]
        super().__init__(f"card is invalid: {first.code} at {first.path}")
        self.report = list(report)


class RedefinitionError(StoreError):
    code = "REDEFINITION"


class StorageIOError(StoreError):
    code = "STORAGE_IO"


class StoreNotInitialized(StoreError):
    code = "NOT_INITIALIZED"


def resolve_resource(name_or_iri: str, base_iri: str = DEFAULT_BASE_IRI) -> Iri:
    """Accept an absolute IRI, or a local name resolved under the base."""

    from knowcard.rdf import _SCHEME_RE

    if _SCHEME_RE.match(name_or_iri):
        return Iri(name_or_iri)
    return Iri(base_iri + name_or_iri)


def derive_triples(card: KnowledgeCard, base_iri: str = DEFAULT_BASE_IRI) -> list[Triple]:
    """The RDF face of a card: Dublin Core description plus its concept
    relations lifted to lb:* triples, multi-valued targets grouped into one
    Bag per (source concept, relation kind)."""

    card_iri = Iri(base_iri + card.id)
    triples = [
        Triple(card_iri, Iri(DC_NS + "title"), Literal(card.metadata.title)),
        Triple(card_iri, Iri(DC_NS + "creator"), Literal(card.metadata.creator)),
        Triple(card_iri, Iri(DC_NS + "date"), Literal(card.metadata.date.isoformat())),
    ]
    network = card.concept_network
    if network is None:
        return triples

    groups: dict[tuple[str, str], list[str]] = {}
    order: list[tuple[str, str]] = []
    for rel in network.relations:
        key = (rel.source, rel.kind)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(rel.target)

    for source, kind in order:
        bag = BlankNode(f"{card.id}.{source}.{kind}")
        triples.append(Triple(bag, Iri(RDF_NS + "type"), Iri(RDF_NS + "Bag")))
        for index, target in enumerate(groups[(source, kind)], start=1):
            triples.append(Triple(bag, Iri(f"{RDF_NS}_{index}"), Iri(base_iri + target)))
        triples.append(Triple(Iri(base_iri + source), Iri(LB_NS + kind), bag))
    return triples


@dataclass(frozen=True)
class _Op:
    action: str  # "write" | "delete"
    target: str  # path relative to the store root
    stage: Optional[str] = None  # relative path of the staged content


class CardStore:
    """Single-writer, multi-reader card store rooted at a directory."""

    def __init__(
        self,
        root: os.PathLike | str,
        base_iri: str = DEFAULT_BASE_IRI,
        schema_path: Optional[os.PathLike | str] = None,
        create: bool = True,
        fault_hook: Optional[Callable[[str], None]] = None,
    ):
        self.root = Path(root)
        self.base_iri = base_iri
        self.fault_hook = fault_hook

        initialized = (self.root / "metadata").is_dir()
        if not initialized:
            if not create:
                raise StoreNotInitialized(f"no store at {self.root} (run with --init to create)")
            self._initialize(schema_path)
        self._recover()
        self._load()

    # -- layout --------------------------------------------------------------

    def repositories(self) -> list[str]:
        return ["metadata"] + [f"sections/{name}" for name in SECTION_ORDER] + ["rdf"]

    def record_path(self, repo: str, card_id: str) -> Path:
        return self.root / repo / f"{card_id}.xml"

    def has_record(self, repo: str, card_id: str) -> bool:
        return self.record_path(repo, card_id).exists()

    def _initialize(self, schema_path) -> None:
        if schema_path is None:
            from knowcard.fixtures import lbn_schema_path

            schema_path = lbn_schema_path()
        try:
            (self.root / "metadata").mkdir(parents=True, exist_ok=True)
            for name in SECTION_ORDER:
                (self.root / "sections" / name).mkdir(parents=True, exist_ok=True)
            (self.root / "rdf").mkdir(exist_ok=True)
            (self.root / "journal").mkdir(exist_ok=True)
            (self.root / "rdf" / "schema.rdf").write_text(
                Path(schema_path).read_text(encoding="utf-8"), encoding="utf-8"
            )
            (self.root / "rdf" / "links.nt").write_text("", encoding="utf-8")
            (self.root / "rdf" / "resources.json").write_text("{}\n", encoding="utf-8")
        except OSError as exc:
            raise StorageIOError(f"cannot initialize store at {self.root}: {exc}") from exc

    # -- recovery ------------------------------------------------------------

    def _recover(self) -> None:
        journal = self.root / "journal"
        if not journal.is_dir():
            return
        for intent in sorted(journal.glob("*.intent")):
            ops = [_Op(**op) for op in json.loads(intent.read_text(encoding="utf-8"))["ops"]]
            self._apply(ops, hook=None)
            intent.unlink()
            self._drop_stage_dirs(ops)
        stage_root = journal / "stage"
        if stage_root.is_dir():
            # staged but never journaled: the transaction never happened
            for leftover in stage_root.iterdir():
                self._rmtree(leftover)

    def _drop_stage_dirs(self, ops: Iterable[_Op]) -> None:
        dirs = {Path(op.stage).parent for op in ops if op.stage}
        for rel in dirs:
            self._rmtree(self.root / rel)

    @staticmethod
    def _rmtree(path: Path) -> None:
        if not path.exists():
            return
        for child in path.iterdir():
            child.unlink()
        path.rmdir()

    # -- commit machinery ------------------------------------------------------

    def _fault(self, label: str) -> None:
        if self.fault_hook is not None:
            self.fault_hook(label)

    def _commit(self, writes: dict[str, str], deletes: list[str]) -> None:
        """All-or-nothing application of file writes and deletions."""

        txn = uuid.uuid4().hex[:12]
        journal = self.root / "journal"
        stage_dir = journal / "stage" / txn
        ops: list[_Op] = []
        try:
            stage_dir.mkdir(parents=True)
            for i, (target, content) in enumerate(sorted(writes.items())):
                stage_rel = f"journal/stage/{txn}/f{i}"
                self._fault(f"stage:{target}")
                (self.root / stage_rel).write_text(content, encoding="utf-8")
                ops.append(_Op("write", target, stage_rel))
            for target in sorted(deletes):
                ops.append(_Op("delete", target))

            self._fault("intent")
            intent_path = journal / f"{txn}.intent"
            tmp = journal / f"{txn}.intent.tmp"
            tmp.write_text(
                json.dumps({"ops": [op.__dict__ for op in ops]}, indent=0), encoding="utf-8"
            )
            os.replace(tmp, intent_path)

            self._apply(ops, hook=self._fault)

            self._fault("commit")
            intent_path.unlink()
            self._drop_stage_dirs(ops)
        except StoreError:
            raise
        except OSError as exc:
            raise StorageIOError(f"commit failed: {exc}") from exc

    def _apply(self, ops: list[_Op], hook: Optional[Callable[[str], None]]) -> None:
        for op in ops:
            if hook is not None:
                hook(f"apply:{op.target}")
            target = self.root / op.target
            if op.action == "write":
                stage = self.root / op.stage
                if stage.exists():
                    os.replace(stage, target)
            elif op.action == "delete":
                if target.exists():
                    target.unlink()
            else:
                raise StorageIOError(f"unknown journal op {op.action!r}")

    # -- loading ---------------------------------------------------------------

    def _load(self) -> None:
        try:
            schema_text = (self.root / "rdf" / "schema.rdf").read_text(encoding="utf-8")
            _, self.schema = rdfxml.load_rdfxml(schema_text)
            links_text = (self.root / "rdf" / "links.nt").read_text(encoding="utf-8")
            self._store = TripleStore()
            self._store.add_all(from_debug_lines(links_text))
            raw = json.loads((self.root / "rdf" / "resources.json").read_text(encoding="utf-8"))
            self._resources: dict[str, dict[str, str]] = raw
            self._index: dict[str, tuple[CardKind, str]] = {}
            for record in sorted((self.root / "metadata").glob("*.xml")):
                card_id, kind, metadata = cardxml.parse_card_header(
                    record.read_text(encoding="utf-8")
                )
                self._index[card_id] = (kind, metadata.title)
        except OSError as exc:
            raise StorageIOError(f"cannot load store at {self.root}: {exc}") from exc

    # -- public API --------------------------------------------------------------

    @property
    def triple_store(self) -> TripleStore:
        return self._store

    def defining_card(self, resource: Iri) -> Optional[str]:
        entry = self._resources.get(resource.value)
        return entry["card"] if entry else None

    def resource_label(self, resource: Iri) -> Optional[str]:
        entry = self._resources.get(resource.value)
        return entry["label"] if entry else None

    def __contains__(self, card_id: str) -> bool:
        return card_id in self._index

    def put_card(self, card: KnowledgeCard, overwrite: bool = False) -> str:
        report = model.validate_card(card)
        if report:
            raise ValidationFailedError(report)
        if card.id in self._index and not overwrite:
            raise DuplicateIdError(f"card {card.id!r} already exists")

        new_resources = self._updated_resources(card)

        writes: dict[str, str] = {}
        deletes: list[str] = []
        writes[f"metadata/{card.id}.xml"] = cardxml.serialize_card_header(card)
        for name in SECTION_ORDER:
            value = card.section(name)
            target = f"sections/{name}/{card.id}.xml"
            if value is not None:
                writes[target] = cardxml.serialize_section(name, value)
            elif self.has_record(f"sections/{name}", card.id):
                deletes.append(target)

        new_store = self._rebuild_links(exclude=card.id, extra=card)
        writes["rdf/links.nt"] = to_debug_lines(new_store)
        writes["rdf/resources.json"] = json.dumps(new_resources, indent=2, sort_keys=True) + "\n"

        self._commit(writes, deletes)

        self._index[card.id] = (card.kind, card.metadata.title)
        self._resources = new_resources
        self._store = new_store
        return card.id

    def get_card(self, card_id: str) -> KnowledgeCard:
        record = self.record_path("metadata", card_id)
        if not record.exists():
            raise NotFoundError(f"no card {card_id!r}")
        try:
            _, kind, metadata = cardxml.parse_card_header(record.read_text(encoding="utf-8"))
            sections = {}
            for name in SECTION_ORDER:
                section_file = self.record_path(f"sections/{name}", card_id)
                if section_file.exists():
                    sections[model.SECTION_ATTRS[name]] = cardxml.parse_section_document(
                        name, section_file.read_text(encoding="utf-8")
                    )
        except OSError as exc:
            raise StorageIOError(f"cannot read card {card_id!r}: {exc}") from exc
        return KnowledgeCard(id=card_id, kind=kind, metadata=metadata, **sections)

    def delete_card(self, card_id: str) -> None:
        if card_id not in self._index:
            raise NotFoundError(f"no card {card_id!r}")

        deletes = [f"metadata/{card_id}.xml"]
        for name in SECTION_ORDER:
            if self.has_record(f"sections/{name}", card_id):
                deletes.append(f"sections/{name}/{card_id}.xml")

        new_resources = {
            iri: entry for iri, entry in self._resources.items() if entry["card"] != card_id
        }
        new_store = self._rebuild_links(exclude=card_id)
        writes = {
            "rdf/links.nt": to_debug_lines(new_store),
            "rdf/resources.json": json.dumps(new_resources, indent=2, sort_keys=True) + "\n",
        }

        self._commit(writes, deletes)

        del self._index[card_id]
        self._resources = new_resources
        self._store = new_store

    def list_cards(self, kind: Optional[CardKind] = None) -> list[tuple[str, CardKind, str]]:
        out = []
        for card_id in sorted(self._index):
            card_kind, title = self._index[card_id]
            if kind is None or card_kind == kind:
                out.append((card_id, card_kind, title))
        return out

    def find_related_cards(
        self, resource: Iri, relation: Iri, use_inference: bool = False
    ) -> list[tuple[Iri, Optional[str]]]:
        from knowcard.rdf import related_resources

        out = []
        for term in related_resources(self._store, self.schema, resource, relation, use_inference):
            if isinstance(term, Iri):
                out.append((term, self.defining_card(term)))
        return out

    # -- internals -----------------------------------------------------------------

    def _updated_resources(self, card: KnowledgeCard) -> dict[str, dict[str, str]]:
        """Registry after storing ``card``; vocabulary cards define their
        concepts, the first registrant wins, conflicting labels are errors."""

        new = {
            iri: dict(entry) for iri, entry in self._resources.items() if entry["card"] != card.id
        }
        if card.kind.domain != "vocabulary" or card.concept_network is None:
            return new
        for concept in card.concept_network.concepts:
            iri = self.base_iri + concept.id
            existing = new.get(iri)
            if existing is None:
                new[iri] = {"card": card.id, "label": concept.label}
            elif existing["label"] != concept.label:
                raise RedefinitionError(
                    f"resource {iri} is defined by card {existing['card']!r} "
                    f"with label {existing['label']!r}; conflicting label {concept.label!r}"
                )
        return new

    def _rebuild_links(
        self, exclude: Optional[str] = None, extra: Optional[KnowledgeCard] = None
    ) -> TripleStore:
        store = TripleStore()
        for card_id in sorted(self._index):
            if card_id == exclude:
                continue
            store.add_all(derive_triples(self.get_card(card_id), self.base_iri))
        if extra is not None:
            store.add_all(derive_triples(extra, self.base_iri))
        return store
