"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class CardCreated(BaseModel):
    id: str


class CardListItem(BaseModel):
    id: str
    kind: str
    title: str


class RelatedItem(BaseModel):
    resource: str
    card_id: Optional[str] = None


class GraphNode(BaseModel):
    resource: str
    local: str
    label: Optional[str] = None
    card_id: Optional[str] = None
    depth: int


class GraphEdge(BaseModel):
    source: str = Field(serialization_alias="from")
    target: str = Field(serialization_alias="to")
    relation: str


class GraphResponse(BaseModel):
    root: str
    depth: int
    nodes: list[GraphNode]
    edges: list[GraphEdge]


class CheckRequest(BaseModel):
    constraint: str
    bindings: dict[str, float] = Field(default_factory=dict)
    angle_unit: str = "degrees"
    rel_tol: Optional[float] = None
    abs_tol: Optional[float] = None


class CheckResponse(BaseModel):
    holds: bool
    context: str
    lhs_value: Optional[float] = None
    rhs_value: Optional[float] = None
    residual: Optional[float] = None
    violated_subterms: list[tuple[int, int]] = Field(default_factory=list)


class PropertyLabel(BaseModel):
    text: str
    lang: Optional[str] = None


class OntologyProperty(BaseModel):
    property: str
    local: str
    labels: list[PropertyLabel]
    super_properties: list[str]


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: Optional[object] = None


class ErrorEnvelope(BaseModel):
    error: ErrorBody
