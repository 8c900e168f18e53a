"""HTTP front door: boards, comments, patinas, stats, and a live event feed.

Route handlers are thin compositions over the core package; the patina
endpoint body is exactly build_patina's canonical JSON. Errors carry a
machine-readable ``code``.
"""

from __future__ import annotations

import asyncio
import json
import os
from pathlib import Path
from typing import Any

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse, Response, StreamingResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import model
from .analytics import compute_stats, stats_to_dict
from .engine import build_patina, parse_category, parse_encoding, render_spec_to_dict
from .errors import (
    MalformedInput,
    NotFound,
    PatinaError,
    UnknownCategoryFilter,
    UnknownEncoding,
    ValidationFailed,
)
from .events import COMMENT_ADDED, LIKE_ADDED, REPLY_ADDED, EventBus, notice_to_dict
from .schemas import CommentDraftIn, ReplyDraftIn
from .store import BoardStore, SortOrder, sniff_media_type
from .svg import render_svg

DEFAULT_DATA_DIR = "data"
EVENT_POLL_SECONDS = 0.05
EVENT_KEEPALIVE_SECONDS = 15.0


async def event_stream(bus: EventBus, board_id: str, since: int):
    """SSE frames for every notice after `since`, then live notices forever.

    Readers poll the append-only log with their own cursor, so a reconnect
    that passes the last seen sequence number is lossless.
    """
    cursor = since
    idle = 0.0
    while True:
        notices = bus.after(board_id, cursor)
        if notices:
            idle = 0.0
            for notice in notices:
                cursor = notice.sequence
                payload = json.dumps(notice_to_dict(notice), separators=(",", ":"))
                yield (
                    f"id: {notice.sequence}\n"
                    f"event: {notice.kind}\n"
                    f"data: {payload}\n\n"
                )
        else:
            await asyncio.sleep(EVENT_POLL_SECONDS)
            idle += EVENT_POLL_SECONDS
            if idle >= EVENT_KEEPALIVE_SECONDS:
                idle = 0.0
                yield ": keepalive\n\n"


def _board_meta(board: model.Board) -> dict[str, Any]:
    return {
        "id": board.id,
        "title": board.title,
        "image_ref": board.image_ref,
        "image_width_px": board.image_width_px,
        "image_height_px": board.image_height_px,
        "created_at": model.format_timestamp(board.created_at),
        "comment_count": len(board.comments),
    }


def _error_body(code: str, detail: str) -> dict[str, str]:
    return {"code": code, "detail": detail}


def _status_for(exc: PatinaError) -> int:
    if isinstance(exc, NotFound):
        return 404
    if isinstance(exc, (UnknownEncoding, UnknownCategoryFilter, MalformedInput)):
        return 400
    if isinstance(exc, ValidationFailed):
        return 422
    return 500


def create_app(
    data_dir: str | Path | None = None,
    store: BoardStore | None = None,
    bus: EventBus | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    if store is None:
        root = Path(data_dir or os.environ.get("PATINA_DATA_DIR", DEFAULT_DATA_DIR))
        store = BoardStore(root)
    bus = bus or EventBus()

    app = FastAPI(title="patina", version="0.1.0")
    app.state.store = store
    app.state.bus = bus

    @app.exception_handler(PatinaError)
    async def on_domain_error(request: Request, exc: PatinaError) -> JSONResponse:
        return JSONResponse(
            status_code=_status_for(exc), content=_error_body(exc.code, str(exc))
        )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(
        request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        errors = exc.errors()
        if any(e.get("type") == "json_invalid" for e in errors):
            return JSONResponse(
                status_code=400, content=_error_body("malformed_json", "body is not valid JSON")
            )
        detail = "; ".join(
            f"{'.'.join(str(p) for p in e.get('loc', ()))}: {e.get('msg', '')}"
            for e in errors
        )
        return JSONResponse(status_code=422, content=_error_body("invalid_request", detail))

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(
        request: Request, exc: StarletteHTTPException
    ) -> JSONResponse:
        if isinstance(exc.detail, dict) and "code" in exc.detail:
            return JSONResponse(status_code=exc.status_code, content=exc.detail)
        return JSONResponse(
            status_code=exc.status_code, content=_error_body("http_error", str(exc.detail))
        )

    # Boards

    @app.post("/api/boards", status_code=201)
    async def create_board(
        title: str = Form(...), image: UploadFile = File(...)
    ) -> dict[str, Any]:
        payload = await image.read()
        board = store.put_board(title, payload)
        return _board_meta(board)

    @app.get("/api/boards")
    def list_boards() -> list[dict[str, Any]]:
        return store.list_boards()

    @app.get("/api/boards/{board_id}")
    def get_board(board_id: str) -> dict[str, Any]:
        return _board_meta(store.get_board(board_id))

    @app.get("/api/boards/{board_id}/image")
    def get_board_image(board_id: str) -> Response:
        board = store.get_board(board_id)
        data = store.get_image(board.image_ref)
        return Response(content=data, media_type=sniff_media_type(data))

    # Comments

    @app.post("/api/boards/{board_id}/comments", status_code=201)
    def create_comment(board_id: str, draft: CommentDraftIn) -> dict[str, Any]:
        store.get_board(board_id)
        comment = model.create_comment(
            anchors=[model.AnchorRect(a.x, a.y, a.w, a.h) for a in draft.anchors],
            author=draft.author,
            text=draft.text,
            category=draft.category,
            anchor_target=draft.anchor_target,
        )
        stored = store.append_comment(board_id, comment)
        bus.publish(board_id, COMMENT_ADDED, stored.id)
        return model.comment_to_dict(stored)

    @app.get("/api/boards/{board_id}/comments")
    def list_comments(
        board_id: str, sort: str = "newest_first", category: str | None = None
    ) -> list[dict[str, Any]]:
        try:
            order = SortOrder(sort)
        except ValueError:
            valid = ", ".join(s.value for s in SortOrder)
            return JSONResponse(
                status_code=400,
                content=_error_body("unknown_sort", f"unknown sort {sort!r}; valid: {valid}"),
            )
        selected = parse_category(category) if category is not None else None
        comments = store.list_comments(board_id, sort=order, category_filter=selected)
        return [model.comment_to_dict(c) for c in comments]

    @app.post("/api/comments/{comment_id}/replies", status_code=201)
    def create_reply(comment_id: str, draft: ReplyDraftIn) -> dict[str, Any]:
        board_id, _ = store.find_comment(comment_id)
        reply = model.Reply(
            id=model.new_id(),
            author=draft.author,
            text=draft.text,
            created_at=model.utc_now(),
        )
        updated = store.append_reply(board_id, comment_id, reply)
        bus.publish(board_id, REPLY_ADDED, reply.id)
        return model.comment_to_dict(updated)

    @app.post("/api/comments/{comment_id}/like")
    def like_comment(comment_id: str) -> dict[str, Any]:
        board_id, _ = store.find_comment(comment_id)
        updated = store.increment_like(board_id, comment_id)
        bus.publish(board_id, LIKE_ADDED, comment_id)
        return model.comment_to_dict(updated)

    # Patina

    @app.get("/api/boards/{board_id}/patina")
    def get_patina(
        request: Request,
        board_id: str,
        encoding: str = "activity",
        category: str | None = None,
        format: str = "json",
    ):
        board = store.get_board(board_id)
        spec = build_patina(board, parse_encoding(encoding), category_filter=category)
        wants_svg = format == "svg" or "image/svg+xml" in request.headers.get("accept", "")
        if wants_svg:
            document = render_svg(spec, board, image_href=f"/api/boards/{board.id}/image")
            return Response(content=document, media_type="image/svg+xml")
        return JSONResponse(content=render_spec_to_dict(spec))

    # Analytics

    @app.get("/api/boards/{board_id}/stats")
    def get_stats(board_id: str) -> dict[str, Any]:
        return stats_to_dict(compute_stats(store.get_board(board_id)))

    # Events

    @app.get("/api/boards/{board_id}/events")
    async def get_events(
        request: Request, board_id: str, since: int = 0, format: str = "stream"
    ):
        store.get_board(board_id)
        last_event_id = request.headers.get("last-event-id")
        if last_event_id is not None:
            try:
                since = max(since, int(last_event_id))
            except ValueError:
                pass
        if format == "json":
            return JSONResponse(
                content=[notice_to_dict(n) for n in bus.after(board_id, since)]
            )
        return StreamingResponse(
            event_stream(bus, board_id, since),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    # Optional single-page client

    if static_dir is not None:
        static_root = Path(static_dir)
        index_html = static_root / "index.html"
        assets = static_root / "assets"
        if assets.is_dir():
            app.mount("/assets", StaticFiles(directory=assets), name="assets")

        @app.get("/")
        @app.get("/board/{board_id}")
        def spa(board_id: str | None = None) -> FileResponse:
            return FileResponse(index_html)

    return app
