"""Core vocabulary: boards, anchors, comments, replies, categories.

Everything here is an immutable value type with a canonical JSON shape;
the store, API, ingest and UI all speak this JSON. Anchor coordinates are
stored as fractions of the image (resolution independent); pixel values
are recovered through the owning board's image dimensions.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any

from .errors import NoAnchors, OutOfBounds, ValidationFailed, ZeroArea

ANONYMOUS_AUTHOR = "anonymous"


class CommentCategory(str, Enum):
    """The eight comment categories. Labels are stable snake_case strings."""

    observations = "observations"
    hypotheses = "hypotheses"
    questions = "questions"
    critique = "critique"
    context = "context"
    personal_stories = "personal_stories"
    opinions = "opinions"
    proposals = "proposals"


@dataclass(frozen=True)
class AnchorRect:
    """Rectangle as fractions of image width/height; must fit in the unit box."""

    x: float
    y: float
    w: float
    h: float

    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)


@dataclass(frozen=True)
class Reply:
    id: str
    author: str | None
    text: str | None
    created_at: datetime
    external_id: str | None = None


@dataclass(frozen=True)
class AnchoredComment:
    id: str
    author: str | None
    text: str | None
    category: CommentCategory | None
    anchors: tuple[AnchorRect, ...]
    likes: int
    replies: tuple[Reply, ...]
    created_at: datetime
    external_id: str | None = None
    # Manual coding of what the anchors point at (marks, labels, axes,
    # blank space, ...). Human judgment only; never computed.
    anchor_target: str | None = None


@dataclass(frozen=True)
class Board:
    id: str
    title: str
    image_ref: str
    image_width_px: int
    image_height_px: int
    created_at: datetime
    comments: tuple[AnchoredComment, ...] = ()
    # External ids consumed by past imports; drives duplicate detection.
    import_seen: tuple[str, ...] = ()


def new_id() -> str:
    return uuid.uuid4().hex


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def as_utc(value: datetime) -> datetime:
    """Normalize to an aware UTC datetime (naive input is taken as UTC)."""
    if value.tzinfo is None:
        return value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


def format_timestamp(value: datetime) -> str:
    return as_utc(value).isoformat()


def parse_timestamp(text: str) -> datetime:
    return as_utc(datetime.fromisoformat(text.replace("Z", "+00:00")))


def display_author(author: str | None) -> str:
    """Display-time sentinel; stored data keeps the absent author as None."""
    return author if author else ANONYMOUS_AUTHOR


def validate_anchor(rect: AnchorRect) -> None:
    """Accept iff the rectangle is non-degenerate and inside the unit box."""
    if rect.w <= 0 or rect.h <= 0:
        raise ZeroArea(f"anchor has zero area (w={rect.w}, h={rect.h})")
    if rect.x < 0 or rect.y < 0 or rect.x + rect.w > 1 or rect.y + rect.h > 1:
        raise OutOfBounds(
            f"anchor exceeds the unit box (x={rect.x}, y={rect.y}, w={rect.w}, h={rect.h})"
        )


def validate_comment(comment: AnchoredComment) -> None:
    if len(comment.anchors) == 0:
        raise NoAnchors("a comment must have at least one anchor")
    for anchor in comment.anchors:
        validate_anchor(anchor)
    if comment.likes < 0:
        raise ValidationFailed(f"likes must be non-negative, got {comment.likes}")


def create_comment(
    anchors: list[AnchorRect] | tuple[AnchorRect, ...],
    author: str | None = None,
    text: str | None = None,
    category: CommentCategory | None = None,
    created_at: datetime | None = None,
    external_id: str | None = None,
    anchor_target: str | None = None,
) -> AnchoredComment:
    """Build a fresh comment: zero likes, no replies, service-clock timestamp.

    Empty text is permitted (anchor-only marks); an empty anchor list is not.
    """
    if len(anchors) == 0:
        raise NoAnchors("a comment must have at least one anchor")
    for anchor in anchors:
        validate_anchor(anchor)
    return AnchoredComment(
        id=new_id(),
        author=author,
        text=text,
        category=category,
        anchors=tuple(anchors),
        likes=0,
        replies=(),
        created_at=as_utc(created_at) if created_at else utc_now(),
        external_id=external_id,
        anchor_target=anchor_target,
    )


def add_reply(
    comment: AnchoredComment,
    author: str | None = None,
    text: str | None = None,
    created_at: datetime | None = None,
    external_id: str | None = None,
) -> AnchoredComment:
    """Return the comment with one reply appended (replies stay one level deep)."""
    reply = Reply(
        id=new_id(),
        author=author,
        text=text,
        created_at=as_utc(created_at) if created_at else utc_now(),
        external_id=external_id,
    )
    return replace(comment, replies=comment.replies + (reply,))


def bump_likes(comment: AnchoredComment) -> AnchoredComment:
    """Likes only ever increment, by exactly one per call."""
    return replace(comment, likes=comment.likes + 1)


# Canonical JSON codec. Field names and order are the wire contract.


def anchor_to_dict(rect: AnchorRect) -> dict[str, Any]:
    return {"x": rect.x, "y": rect.y, "w": rect.w, "h": rect.h}


def anchor_from_dict(data: dict[str, Any]) -> AnchorRect:
    return AnchorRect(
        x=float(data["x"]), y=float(data["y"]), w=float(data["w"]), h=float(data["h"])
    )


def reply_to_dict(reply: Reply) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": reply.id,
        "author": reply.author,
        "text": reply.text,
        "created_at": format_timestamp(reply.created_at),
    }
    if reply.external_id is not None:
        out["external_id"] = reply.external_id
    return out


def reply_from_dict(data: dict[str, Any]) -> Reply:
    return Reply(
        id=data["id"],
        author=data.get("author"),
        text=data.get("text"),
        created_at=parse_timestamp(data["created_at"]),
        external_id=data.get("external_id"),
    )


def comment_to_dict(comment: AnchoredComment) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": comment.id,
        "author": comment.author,
        "text": comment.text,
        "category": comment.category.value if comment.category else None,
        "anchors": [anchor_to_dict(a) for a in comment.anchors],
        "likes": comment.likes,
        "replies": [reply_to_dict(r) for r in comment.replies],
        "created_at": format_timestamp(comment.created_at),
    }
    if comment.external_id is not None:
        out["external_id"] = comment.external_id
    if comment.anchor_target is not None:
        out["anchor_target"] = comment.anchor_target
    return out


def comment_from_dict(data: dict[str, Any]) -> AnchoredComment:
    raw_category = data.get("category")
    return AnchoredComment(
        id=data["id"],
        author=data.get("author"),
        text=data.get("text"),
        category=CommentCategory(raw_category) if raw_category else None,
        anchors=tuple(anchor_from_dict(a) for a in data["anchors"]),
        likes=int(data.get("likes", 0)),
        replies=tuple(reply_from_dict(r) for r in data.get("replies", [])),
        created_at=parse_timestamp(data["created_at"]),
        external_id=data.get("external_id"),
        anchor_target=data.get("anchor_target"),
    )


def board_to_dict(board: Board) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": board.id,
        "title": board.title,
        "image_ref": board.image_ref,
        "image_width_px": board.image_width_px,
        "image_height_px": board.image_height_px,
        "created_at": format_timestamp(board.created_at),
        "comments": [comment_to_dict(c) for c in board.comments],
    }
    if board.import_seen:
        out["import_seen"] = sorted(board.import_seen)
    return out


def board_from_dict(data: dict[str, Any]) -> Board:
    board = Board(
        id=data["id"],
        title=data["title"],
        image_ref=data["image_ref"],
        image_width_px=int(data["image_width_px"]),
        image_height_px=int(data["image_height_px"]),
        created_at=parse_timestamp(data["created_at"]),
        comments=tuple(comment_from_dict(c) for c in data.get("comments", [])),
        import_seen=tuple(data.get("import_seen", [])),
    )
    validate_board(board)
    return board


def validate_board(board: Board) -> None:
    if board.image_width_px <= 0 or board.image_height_px <= 0:
        raise ValidationFailed(
            f"image dimensions must be positive, got {board.image_width_px}x{board.image_height_px}"
        )
    ids = [c.id for c in board.comments]
    if len(ids) != len(set(ids)):
        raise ValidationFailed(f"duplicate comment ids on board {board.id}")
