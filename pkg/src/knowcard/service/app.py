"""Application layer of the three-tier service.

The web layer (api module) talks exclusively to KnowledgeService; only
this module reaches the storage tier. Writes are serialized through one
lock so concurrent requests always read the latest committed state.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Optional

from knowcard import cardxml, ocl
from knowcard.model import KnowledgeCard
from knowcard.rdf import LB_NS, Iri
from knowcard.service import transforms
from knowcard.store import (
    CardStore,
    DuplicateIdError,
    NotFoundError,
    RedefinitionError,
    StorageIOError,
    ValidationFailedError,
    resolve_resource,
)

MAX_GRAPH_DEPTH = 10
DEFAULT_GRAPH_DEPTH = 2


class ApiError(Exception):
    """Transport-level error: HTTP status, machine code, optional detail."""

    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.detail = detail


def _violations_detail(report) -> list[dict]:
    return [{"code": v.code, "path": v.path, "message": v.message} for v in report]


class KnowledgeService:
    def __init__(self, store: CardStore):
        self._store = store
        self._write_lock = threading.Lock()

    # -- capture ---------------------------------------------------------------

    def create_card(self, document: str, overwrite: bool = False) -> str:
        try:
            card = cardxml.parse_card(document)
        except cardxml.InvalidCardError as exc:
            raise ApiError(
                400, "VALIDATION_FAILED", str(exc), _violations_detail(exc.report)
            ) from exc
        except cardxml.CardXmlError as exc:
            raise ApiError(
                400, "PARSE_ERROR", str(exc), {"code": exc.code, "path": exc.path}
            ) from exc
        with self._write_lock:
            try:
                return self._store.put_card(card, overwrite=overwrite)
            except ValidationFailedError as exc:
                raise ApiError(
                    400, "VALIDATION_FAILED", str(exc), _violations_detail(exc.report)
                ) from exc
            except DuplicateIdError as exc:
                raise ApiError(409, "DUPLICATE_ID", str(exc)) from exc
            except RedefinitionError as exc:
                raise ApiError(409, "REDEFINITION", str(exc)) from exc
            except StorageIOError as exc:
                raise ApiError(500, "STORAGE_IO", str(exc)) from exc

    def delete_card(self, card_id: str) -> None:
        with self._write_lock:
            try:
                self._store.delete_card(card_id)
            except NotFoundError as exc:
                raise ApiError(404, "NOT_FOUND", str(exc)) from exc
            except StorageIOError as exc:
                raise ApiError(500, "STORAGE_IO", str(exc)) from exc

    # -- viewing ---------------------------------------------------------------

    def get_card(self, card_id: str) -> KnowledgeCard:
        try:
            return self._store.get_card(card_id)
        except NotFoundError as exc:
            raise ApiError(404, "NOT_FOUND", str(exc)) from exc
        except StorageIOError as exc:
            raise ApiError(500, "STORAGE_IO", str(exc)) from exc

    def render_card(self, card_id: str, profile: str):
        if profile not in transforms.PROFILES:
            raise ApiError(406, "UNKNOWN_PROFILE", f"unknown profile {profile!r}")
        return transforms.render(self.get_card(card_id), profile)

    def list_cards(self) -> list[tuple[str, str, str]]:
        return [(cid, str(kind), title) for cid, kind, title in self._store.list_cards()]

    # -- RDF level ---------------------------------------------------------------

    def relation_names(self) -> list[str]:
        return sorted(p.local_name() for p in self._store.schema.properties)

    def related(self, card_id: str, relation: str, infer: bool) -> list[dict]:
        card = self.get_card(card_id)
        if relation not in self.relation_names():
            raise ApiError(
                400,
                "UNKNOWN_RELATION",
                f"unknown relation {relation!r}; one of {self.relation_names()}",
            )
        prop = Iri(LB_NS + relation)
        found: dict[str, Optional[str]] = {}
        if card.concept_network is not None:
            for concept in card.concept_network.concepts:
                root = resolve_resource(concept.id, self._store.base_iri)
                for resource, defining in self._store.find_related_cards(root, prop, infer):
                    found.setdefault(resource.value, defining)
        return [
            {"resource": resource, "card_id": found[resource]} for resource in sorted(found)
        ]

    def graph(self, root: str, depth: int) -> dict:
        if depth < 0 or depth > MAX_GRAPH_DEPTH:
            raise ApiError(400, "BAD_DEPTH", f"depth must be between 0 and {MAX_GRAPH_DEPTH}")
        store = self._store.triple_store
        root_iri = resolve_resource(root, self._store.base_iri)

        nodes: dict[str, dict] = {}
        edges: list[dict] = []
        seen_edges: set[tuple[str, str, str]] = set()

        def node_entry(iri: Iri, level: int) -> None:
            if iri.value not in nodes:
                nodes[iri.value] = {
                    "resource": iri.value,
                    "local": iri.local_name(),
                    "label": self._store.resource_label(iri),
                    "card_id": self._store.defining_card(iri),
                    "depth": level,
                }

        node_entry(root_iri, 0)
        frontier = deque([(root_iri, 0)])
        while frontier:
            current, level = frontier.popleft()
            if level >= depth:
                continue
            for triple in store.query(subject=current):
                if not triple.predicate.value.startswith(LB_NS):
                    continue
                relation = triple.predicate.local_name()
                obj = triple.object
                targets = store.expand_members(obj) if store.is_bag(obj) else [obj]
                for target in targets:
                    if not isinstance(target, Iri):
                        continue
                    key = (current.value, relation, target.value)
                    if key in seen_edges:
                        continue
                    seen_edges.add(key)
                    edges.append(
                        {"source": current.value, "target": target.value, "relation": relation}
                    )
                    if target.value not in nodes:
                        node_entry(target, level + 1)
                        frontier.append((target, level + 1))
        return {
            "root": root_iri.value,
            "depth": depth,
            "nodes": list(nodes.values()),
            "edges": edges,
        }

    def ontology(self) -> list[dict]:
        out = []
        for prop in self._store.schema.sorted_properties():
            out.append(
                {
                    "property": prop.iri.value,
                    "local": prop.iri.local_name(),
                    "labels": [{"text": text, "lang": lang} for text, lang in prop.labels],
                    "super_properties": sorted(s.value for s in prop.super_properties),
                }
            )
        return out

    # -- constraint checking ---------------------------------------------------

    def check(
        self,
        constraint: str,
        bindings: dict[str, float],
        angle_unit: str = "degrees",
        rel_tol: Optional[float] = None,
        abs_tol: Optional[float] = None,
    ) -> dict:
        try:
            parsed = ocl.parse_constraint(constraint)
            env = ocl.Env(bindings, angle_unit)
            report = ocl.check_invariant(
                parsed,
                env,
                rel_tol if rel_tol is not None else ocl.DEFAULT_REL_TOL,
                abs_tol if abs_tol is not None else ocl.DEFAULT_ABS_TOL,
            )
        except ocl.OclError as exc:
            raise ApiError(400, exc.code, str(exc), {"offset": exc.offset}) from exc
        except ValueError as exc:
            raise ApiError(400, "BAD_REQUEST", str(exc)) from exc
        return {
            "holds": report.holds,
            "context": parsed.context_name,
            "lhs_value": report.lhs_value,
            "rhs_value": report.rhs_value,
            "residual": report.residual,
            "violated_subterms": [list(span) for span in report.violated_subterms],
        }
