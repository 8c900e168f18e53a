"""Durable board persistence.

Layout under the data root:
    boards/<id>.json   one canonical board document per board
    blobs/<sha256>     content-addressed image bytes
    index.json         board registry (static metadata only)

Every mutation rewrites the owning board document via write-temp-then-rename,
so an interrupted write leaves the prior state intact. Mutations are
serialized per board; reads need no lock.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import threading
from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import Any

from PIL import Image, UnidentifiedImageError

from . import model
from .errors import InvalidImage, IoFailure, NotFound, ReplyToReply, ValidationFailed
from .model import AnchoredComment, Board, CommentCategory, Reply


class SortOrder(str, Enum):
    newest_first = "newest_first"
    popularity = "popularity"
    responses = "responses"


def sniff_media_type(data: bytes) -> str:
    if data.startswith(b"\x89PNG\r\n\x1a\n"):
        return "image/png"
    if data.startswith(b"\xff\xd8\xff"):
        return "image/jpeg"
    if data.startswith((b"GIF87a", b"GIF89a")):
        return "image/gif"
    if data[:4] == b"RIFF" and data[8:12] == b"WEBP":
        return "image/webp"
    return "application/octet-stream"


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"write to {path} failed: {exc}") from exc
    finally:
        if tmp.exists():
            try:
                tmp.unlink()
            except OSError:
                pass


def _dump_json(data: dict[str, Any]) -> bytes:
    return (json.dumps(data, indent=2) + "\n").encode("utf-8")


class BoardStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.boards_dir = self.root / "boards"
        self.blobs_dir = self.root / "blobs"
        self.index_path = self.root / "index.json"
        for directory in (self.boards_dir, self.blobs_dir):
            directory.mkdir(parents=True, exist_ok=True)
        # Cache entries are (file version, board); the version check makes
        # writes by another process (e.g. a CLI import beside a running
        # server) visible on the next read.
        self._cache: dict[str, tuple[tuple[int, int], Board]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _board_lock(self, board_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(board_id, threading.Lock())

    def _board_path(self, board_id: str) -> Path:
        return self.boards_dir / f"{board_id}.json"

    # Boards and images

    def put_board(
        self,
        title: str,
        image: bytes,
        width: int | None = None,
        height: int | None = None,
    ) -> Board:
        """Validate and store an uploaded image, create an empty board."""
        try:
            with Image.open(io.BytesIO(image)) as decoded:
                decoded_w, decoded_h = decoded.size
        except (UnidentifiedImageError, OSError, ValueError) as exc:
            raise InvalidImage(f"image does not decode: {exc}") from exc
        width = width if width is not None else decoded_w
        height = height if height is not None else decoded_h
        if width <= 0 or height <= 0:
            raise InvalidImage(f"image dimensions must be positive, got {width}x{height}")

        image_ref = hashlib.sha256(image).hexdigest()
        blob_path = self.blobs_dir / image_ref
        if not blob_path.exists():
            _atomic_write(blob_path, image)

        board = Board(
            id=model.new_id(),
            title=title,
            image_ref=image_ref,
            image_width_px=width,
            image_height_px=height,
            created_at=model.utc_now(),
        )
        self._save(board)
        self._update_index(board)
        return board

    def restore_board(self, board: Board, image: bytes) -> Board:
        """Recreate a board exported elsewhere, preserving its id and content."""
        if hashlib.sha256(image).hexdigest() != board.image_ref:
            raise InvalidImage("image bytes do not match the board's image_ref")
        if self._board_path(board.id).exists():
            raise ValidationFailed(f"board {board.id} already exists")
        model.validate_board(board)
        blob_path = self.blobs_dir / board.image_ref
        if not blob_path.exists():
            _atomic_write(blob_path, image)
        self._save(board)
        self._update_index(board)
        return board

    def get_board(self, board_id: str) -> Board:
        path = self._board_path(board_id)
        try:
            stat = path.stat()
        except FileNotFoundError:
            self._cache.pop(board_id, None)
            raise NotFound(f"board {board_id!r} not found") from None
        version = (stat.st_mtime_ns, stat.st_size)
        cached = self._cache.get(board_id)
        if cached is not None and cached[0] == version:
            return cached[1]
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"read of {path} failed: {exc}") from exc
        board = model.board_from_dict(data)
        self._cache[board_id] = (version, board)
        return board

    def list_boards(self) -> list[dict[str, Any]]:
        index = self._read_index()
        entries = [{"id": board_id, **meta} for board_id, meta in index.items()]
        entries.sort(key=lambda e: (e["created_at"], e["id"]))
        return entries

    def get_image(self, image_ref: str) -> bytes:
        path = self.blobs_dir / image_ref
        if not path.exists():
            raise NotFound(f"image blob {image_ref!r} not found")
        try:
            return path.read_bytes()
        except OSError as exc:
            raise IoFailure(f"read of {path} failed: {exc}") from exc

    # Comment mutations

    def append_comment(self, board_id: str, comment: AnchoredComment) -> AnchoredComment:
        model.validate_comment(comment)
        with self._board_lock(board_id):
            board = self.get_board(board_id)
            if any(c.id == comment.id for c in board.comments):
                raise ValidationFailed(f"comment id {comment.id} already on board")
            self._save(replace(board, comments=board.comments + (comment,)))
        return comment

    def append_reply(self, board_id: str, comment_id: str, reply: Reply) -> AnchoredComment:
        with self._board_lock(board_id):
            board = self.get_board(board_id)
            updated = self._with_comment(
                board, comment_id, lambda c: replace(c, replies=c.replies + (reply,))
            )
            self._save(updated)
        return self._comment_of(updated, comment_id)

    def increment_like(self, board_id: str, comment_id: str) -> AnchoredComment:
        with self._board_lock(board_id):
            board = self.get_board(board_id)
            updated = self._with_comment(board, comment_id, model.bump_likes)
            self._save(updated)
        return self._comment_of(updated, comment_id)

    def save_board(self, board: Board) -> None:
        """Persist a rebuilt board document (batch import path)."""
        model.validate_board(board)
        with self._board_lock(board.id):
            if not self._board_path(board.id).exists():
                raise NotFound(f"board {board.id!r} not found")
            self._save(board)

    # Reads

    def list_comments(
        self,
        board_id: str,
        sort: SortOrder = SortOrder.newest_first,
        category_filter: CommentCategory | None = None,
    ) -> list[AnchoredComment]:
        board = self.get_board(board_id)
        comments = [
            c
            for c in board.comments
            if category_filter is None or c.category == category_filter
        ]
        # Newest first; stable re-sorts below keep that order for ties.
        comments.sort(key=lambda c: c.created_at, reverse=True)
        if sort == SortOrder.popularity:
            comments.sort(key=lambda c: c.likes, reverse=True)
        elif sort == SortOrder.responses:
            comments.sort(key=lambda c: len(c.replies), reverse=True)
        return comments

    def find_comment(self, comment_id: str) -> tuple[str, AnchoredComment]:
        """Resolve a comment id to its board. A reply id raises ReplyToReply."""
        for entry in self.list_boards():
            board = self.get_board(entry["id"])
            for comment in board.comments:
                if comment.id == comment_id:
                    return board.id, comment
                if any(r.id == comment_id for r in comment.replies):
                    raise ReplyToReply(
                        f"{comment_id!r} is a reply; replies to replies are not supported"
                    )
        raise NotFound(f"comment {comment_id!r} not found")

    # Internals

    def _comment_of(self, board: Board, comment_id: str) -> AnchoredComment:
        for comment in board.comments:
            if comment.id == comment_id:
                return comment
        raise NotFound(f"comment {comment_id!r} not found")

    def _with_comment(self, board: Board, comment_id: str, update) -> Board:
        for index, comment in enumerate(board.comments):
            if comment.id == comment_id:
                comments = list(board.comments)
                comments[index] = update(comment)
                return replace(board, comments=tuple(comments))
            if any(r.id == comment_id for r in comment.replies):
                raise ReplyToReply(
                    f"{comment_id!r} is a reply; replies to replies are not supported"
                )
        raise NotFound(f"comment {comment_id!r} not found on board {board.id!r}")

    def _save(self, board: Board) -> None:
        path = self._board_path(board.id)
        _atomic_write(path, _dump_json(model.board_to_dict(board)))
        stat = path.stat()
        self._cache[board.id] = ((stat.st_mtime_ns, stat.st_size), board)

    def _read_index(self) -> dict[str, Any]:
        if not self.index_path.exists():
            return {}
        try:
            return json.loads(self.index_path.read_text(encoding="utf-8"))["boards"]
        except OSError as exc:
            raise IoFailure(f"read of {self.index_path} failed: {exc}") from exc

    def _update_index(self, board: Board) -> None:
        index = self._read_index()
        index[board.id] = {
            "title": board.title,
            "image_ref": board.image_ref,
            "image_width_px": board.image_width_px,
            "image_height_px": board.image_height_px,
            "created_at": model.format_timestamp(board.created_at),
        }
        _atomic_write(self.index_path, _dump_json({"boards": index}))
