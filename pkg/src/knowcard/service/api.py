"""Web layer: HTTP routes. Talks only to the application layer
(KnowledgeService); storage is never reached from here."""

from __future__ import annotations

from typing import Optional

from fastapi import APIRouter, FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from knowcard.service.app import DEFAULT_GRAPH_DEPTH, ApiError, KnowledgeService
from knowcard.service.schemas import (
    CardCreated,
    CardListItem,
    CheckRequest,
    CheckResponse,
    ErrorBody,
    ErrorEnvelope,
    GraphResponse,
    OntologyProperty,
    RelatedItem,
)

_ACCEPT_PROFILES = (
    ("application/xml", "raw-xml"),
    ("text/xml", "raw-xml"),
    ("application/json", "json"),
    ("text/html", "html"),
)


def _profile_from_accept(accept: Optional[str]) -> str:
    if accept:
        for part in accept.split(","):
            media_type = part.split(";")[0].strip().lower()
            for known, profile in _ACCEPT_PROFILES:
                if media_type == known:
                    return profile
    return "raw-xml"


def install_error_handlers(app: FastAPI) -> None:
    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        body = ErrorEnvelope(error=ErrorBody(code=exc.code, message=str(exc), detail=exc.detail))
        return JSONResponse(status_code=exc.status, content=body.model_dump())

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        body = ErrorEnvelope(
            error=ErrorBody(code="BAD_REQUEST", message="invalid request", detail=exc.errors())
        )
        return JSONResponse(status_code=400, content=body.model_dump())


def create_router(service: KnowledgeService) -> APIRouter:
    router = APIRouter()

    @router.post("/cards", response_model=CardCreated, status_code=201)
    async def create_card(request: Request):
        document = (await request.body()).decode("utf-8")
        card_id = service.create_card(document)
        return JSONResponse(
            status_code=201,
            content=CardCreated(id=card_id).model_dump(),
            headers={"Location": f"/cards/{card_id}"},
        )

    @router.get("/cards", response_model=list[CardListItem])
    async def list_cards():
        return [
            CardListItem(id=cid, kind=kind, title=title)
            for cid, kind, title in service.list_cards()
        ]

    @router.get("/cards/{card_id}")
    async def get_card(card_id: str, request: Request, profile: Optional[str] = None):
        chosen = profile or _profile_from_accept(request.headers.get("accept"))
        body, media_type = service.render_card(card_id, chosen)
        if media_type == "application/json":
            return JSONResponse(content=body)
        return Response(content=body, media_type=media_type)

    @router.delete("/cards/{card_id}", status_code=204)
    async def delete_card(card_id: str):
        service.delete_card(card_id)
        return Response(status_code=204)

    @router.get("/cards/{card_id}/related", response_model=list[RelatedItem])
    async def related(card_id: str, relation: str, infer: bool = False):
        return service.related(card_id, relation, infer)

    @router.get("/graph", response_model=GraphResponse)
    async def graph(root: str, depth: int = Query(default=DEFAULT_GRAPH_DEPTH)):
        return service.graph(root, depth)

    @router.post("/check", response_model=CheckResponse)
    async def check(body: CheckRequest):
        return service.check(
            body.constraint, body.bindings, body.angle_unit, body.rel_tol, body.abs_tol
        )

    @router.get("/ontology", response_model=list[OntologyProperty])
    async def ontology():
        return service.ontology()

    return router
