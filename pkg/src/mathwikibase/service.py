"""HTTP service exposing pages, rendering, lookup, suggestions and edits.

All bodies are UTF-8 JSON except the MathML/text render formats and the
HTML page view.  Error responses carry {"error": code}: unknown items
are 404, invalid input is 422, duplicate annotations are 409, remote
endpoint trouble is 502.
"""

from __future__ import annotations

import logging
import os
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse

from mathwikibase import kb, remote
from mathwikibase.errors import MathWikibaseError
from mathwikibase.kb import Store
from mathwikibase.mathml import render_alt_text, render_mathml
from mathwikibase.page import (
    NoDefiningFormula,
    build_page_model,
    page_model_to_dict,
    render_page_html,
)
from mathwikibase.parser import parse_tex
from mathwikibase.payloads import (
    ast_payload,
    health_payload,
    json_bytes,
    parts_payload,
    suggestion_rows,
)
from mathwikibase.qid import is_qid
from mathwikibase.suggest import build_index, suggest

logger = logging.getLogger(__name__)

DEFAULT_PORT = 8080
DEFAULT_LANG = "en"
DEFAULT_CACHE_TTL = 300.0
DEFAULT_SUGGEST_LIMIT = 10

RENDER_FORMATS = ("mathml", "text", "ast")


@dataclass
class ServiceConfig:
    snapshot_path: str | None = None
    port: int = DEFAULT_PORT
    remote_url: str | None = None
    default_lang: str = DEFAULT_LANG
    cache_ttl: float = DEFAULT_CACHE_TTL

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            snapshot_path=os.environ.get("MATHWB_SNAPSHOT"),
            port=int(os.environ.get("MATHWB_PORT", DEFAULT_PORT)),
            remote_url=os.environ.get("MATHWB_REMOTE_URL"),
            default_lang=os.environ.get("MATHWB_DEFAULT_LANG", DEFAULT_LANG),
            cache_ttl=float(os.environ.get("MATHWB_CACHE_TTL_SECS", DEFAULT_CACHE_TTL)),
        )


class RequestError(MathWikibaseError):
    """Invalid request input, reported as 422."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def error_status(exc: MathWikibaseError) -> int:
    if isinstance(exc, (kb.UnknownQid, remote.NotFound)):
        return 404
    if isinstance(exc, kb.DuplicatePart):
        return 409
    if isinstance(exc, (remote.NetworkError, remote.MappingError)):
        return 502
    return 422


def error_response(exc: MathWikibaseError) -> JSONResponse:
    status = error_status(exc)
    code = "unknown_qid" if status == 404 else exc.code
    return _json_response({"error": code}, status)


def _json_response(payload: object, status: int = 200) -> Response:
    return Response(
        content=json_bytes(payload),
        status_code=status,
        media_type="application/json",
    )


class _RemoteCache:
    """Per-process TTL cache in front of the remote endpoint."""

    def __init__(self, config: remote.RemoteConfig, ttl: float):
        self._config = config
        self._ttl = ttl
        self._entries: dict[str, tuple[float, kb.Item]] = {}
        self._lock = threading.Lock()

    def fetch(self, qid: str) -> kb.Item | None:
        now = time.monotonic()
        with self._lock:
            cached = self._entries.get(qid)
            if cached is not None and cached[0] > now:
                return cached[1]
        try:
            item = remote.fetch_remote(qid, self._config)
        except remote.NotFound:
            return None
        with self._lock:
            self._entries[qid] = (now + self._ttl, item)
        return item


def create_app(store: Store, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="mathwikibase", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    state = app.state
    state.store = store
    state.config = config
    state.suggestion_index = build_index(store)
    state.index_lock = threading.Lock()
    if config.remote_url:
        state.remote_cache = _RemoteCache(
            remote.RemoteConfig(base_url=config.remote_url), config.cache_ttl
        )
    else:
        state.remote_cache = None

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        elapsed_ms = (time.monotonic() - started) * 1000
        logger.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            elapsed_ms,
        )
        return response

    def _checked_qid(qid: str) -> str:
        if not is_qid(qid):
            raise RequestError("invalid_qid", f"malformed item id {qid!r}")
        return qid

    def _checked_lang(lang: str | None) -> str:
        if lang is None:
            return config.default_lang
        if not kb.LANGUAGE_PATTERN.match(lang):
            raise RequestError("invalid_language", f"bad language code {lang!r}")
        return lang

    def _checked_tex(tex: str | None) -> str:
        if tex is None:
            raise RequestError("missing_parameter", "tex parameter is required")
        return tex

    def _fetcher():
        if state.remote_cache is None:
            return None
        return state.remote_cache.fetch

    @app.get("/v1/page/{qid}")
    def page(qid: str, lang: str | None = None) -> Response:
        try:
            model = build_page_model(
                _checked_qid(qid), _checked_lang(lang), state.store, _fetcher()
            )
        except MathWikibaseError as exc:
            return error_response(exc)
        return _json_response(page_model_to_dict(model))

    @app.get("/v1/page/{qid}/html")
    def page_html(qid: str, lang: str | None = None) -> Response:
        try:
            model = build_page_model(
                _checked_qid(qid), _checked_lang(lang), state.store, _fetcher()
            )
        except MathWikibaseError as exc:
            return error_response(exc)
        return HTMLResponse(render_page_html(model))

    @app.get("/v1/render")
    def render(tex: str | None = None, format: str = "mathml") -> Response:
        try:
            if format not in RENDER_FORMATS:
                raise RequestError(
                    "invalid_format", f"format must be one of {RENDER_FORMATS}"
                )
            ast = parse_tex(_checked_tex(tex))
        except MathWikibaseError as exc:
            return error_response(exc)
        if format == "mathml":
            return Response(render_mathml(ast), media_type="application/mathml+xml")
        if format == "text":
            return Response(render_alt_text(ast), media_type="text/plain; charset=utf-8")
        return _json_response(ast_payload(ast))

    @app.get("/v1/lookup")
    def lookup(tex: str | None = None) -> Response:
        try:
            qid = state.store.lookup_by_formula(_checked_tex(tex))
        except MathWikibaseError as exc:
            return error_response(exc)
        if qid is None:
            return _json_response({"error": "not_found"}, 404)
        return _json_response({"qid": qid})

    @app.get("/v1/suggest")
    def suggest_endpoint(
        tex: str | None = None, limit: str | None = None, lang: str | None = None
    ) -> Response:
        try:
            parsed_limit = _checked_limit(limit)
            resolved_lang = _checked_lang(lang)
            ast = parse_tex(_checked_tex(tex))
        except MathWikibaseError as exc:
            return error_response(exc)
        suggestions = suggest(ast, state.suggestion_index, parsed_limit)
        return _json_response(suggestion_rows(suggestions, state.store, resolved_lang))

    @app.post("/v1/items/{qid}/parts")
    async def add_part(qid: str, request: Request) -> Response:
        try:
            body = await _json_body(request)
            fragment = body.get("fragment")
            part_qid = body.get("part_qid")
            if not isinstance(fragment, str) or not isinstance(part_qid, str):
                raise RequestError(
                    "missing_parameter", "body needs fragment and part_qid strings"
                )
            item = state.store.put_part(_checked_qid(qid), fragment, part_qid)
        except MathWikibaseError as exc:
            return error_response(exc)
        with state.index_lock:
            state.suggestion_index = build_index(state.store)
        return _json_response(parts_payload(item), 201)

    @app.get("/v1/health")
    def health() -> Response:
        return _json_response(health_payload(state.store))

    def _checked_limit(limit: str | None) -> int:
        if limit is None:
            return DEFAULT_SUGGEST_LIMIT
        try:
            value = int(limit)
        except ValueError:
            value = 0
        if value < 1:
            raise RequestError("invalid_limit", f"limit {limit!r} must be >= 1")
        return value

    async def _json_body(request: Request) -> dict:
        try:
            body = await request.json()
        except ValueError as exc:
            raise RequestError("invalid_json", "request body is not JSON") from exc
        if not isinstance(body, dict):
            raise RequestError("invalid_json", "request body must be an object")
        return body

    return app


def serve(config: ServiceConfig) -> None:
    """Load the snapshot and run the service until interrupted."""
    import uvicorn

    if not config.snapshot_path:
        raise kb.StoreError("MATHWB_SNAPSHOT is not set")
    store = kb.load_snapshot(config.snapshot_path)
    app = create_app(store, config)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
