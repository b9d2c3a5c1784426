"""The HTTP surface: POST /embed, GET /info, GET /health.

Wire contract::

    POST /embed {"texts": ["a", "b"]}
        -> {"embeddings": [[...], [...]], "dim": d}
    GET /info   -> {"dim": d, "model": name, "pooling": p, "max_batch": n}
    GET /health -> {"status": "ok"}

An empty batch is a 400, a batch over the configured maximum is a 413,
and if the backend failed to load at startup every data endpoint
answers 503 while /health reports the failure.
"""

from __future__ import annotations

import logging
import threading

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .backends import BackendLoadError, load_backend
from .config import ServiceConfig, from_env

log = logging.getLogger("embed_service")


class EmbedRequest(BaseModel):
    texts: list[str]


class EmbedResponse(BaseModel):
    embeddings: list[list[float]]
    dim: int


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or from_env()
    app = FastAPI(title="embed-service", version="0.1.0")
    lock = threading.Lock()  # one inference at a time per process
    backend = None
    load_error: str | None = None
    try:
        backend = load_backend(config)
        log.info("serving %s (dim=%d, pooling=%s, device=%s)",
                 backend.name, backend.dimension, config.pooling, config.device)
    except BackendLoadError as exc:
        load_error = str(exc)
        log.error("backend failed to load: %s", load_error)

    def require_backend():
        if backend is None:
            raise HTTPException(status_code=503, detail=f"backend unavailable: {load_error}")
        return backend

    @app.post("/embed", response_model=EmbedResponse)
    def embed(request: EmbedRequest) -> EmbedResponse:
        b = require_backend()
        if not request.texts:
            raise HTTPException(status_code=400, detail="texts must be non-empty")
        if len(request.texts) > config.max_batch:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.texts)} exceeds max_batch {config.max_batch}",
            )
        with lock:
            vectors = b.encode(request.texts)
        return EmbedResponse(embeddings=vectors.tolist(), dim=b.dimension)

    @app.get("/info")
    def info():
        b = require_backend()
        return {
            "dim": b.dimension,
            "model": b.name,
            "pooling": config.pooling,
            "device": config.device,
            "max_batch": config.max_batch,
        }

    @app.get("/health")
    def health():
        if backend is None:
            return {"status": "error", "detail": load_error}
        return {"status": "ok"}

    return app
