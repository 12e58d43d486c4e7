"""Three-tier capture/viewing service: web routes over an application layer
over the card store. create_app is the composition root."""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI

from knowcard.service.api import create_router, install_error_handlers
from knowcard.service.app import ApiError, KnowledgeService
from knowcard.store import CardStore

DEFAULT_BIND = "127.0.0.1:7341"

__all__ = ["ApiError", "KnowledgeService", "create_app", "DEFAULT_BIND"]


def create_app(store: CardStore, ui_dir: Optional[os.PathLike | str] = None) -> FastAPI:
    service = KnowledgeService(store)
    app = FastAPI(title="knowcard service", version="0.1.0")
    install_error_handlers(app)
    app.include_router(create_router(service))

    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=os.fspath(ui_dir), html=True), name="ui")

    app.state.service = service
    return app
