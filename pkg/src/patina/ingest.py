"""Import of external discussion threads (Reddit-style JSON exports).

Top-level records that carry at least one anchor become anchored comments
(upvote score maps to likes, negatives clamped to zero); their replies
become replies. Everything else lands in the exclusion report, and every
consumed external id is remembered on the board so re-running an import is
a no-op that reports duplicates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Any

from . import model
from .errors import InvalidAnchor, MalformedInput
from .model import AnchorRect, AnchoredComment, Board, CommentCategory, Reply
from .store import BoardStore

REASON_NO_ANCHOR = "no_anchor_assignment"
REASON_NESTED_REPLY = "nested_reply"
REASON_LIMIT = "limit"
REASON_ORPHANED = "orphaned"
REASON_DUPLICATE = "duplicate"
REASON_INVALID_ANCHOR = "invalid_anchor"


@dataclass(frozen=True)
class ExternalRecord:
    external_id: str
    parent_external_id: str | None
    author: str | None
    text: str | None
    score: int
    created_utc: datetime
    category: CommentCategory | None
    anchors: tuple[AnchorRect, ...] | None
    anchor_target: str | None = None

    @property
    def is_reply(self) -> bool:
        return self.parent_external_id is not None


@dataclass(frozen=True)
class Exclusion:
    external_id: str
    reason: str


@dataclass(frozen=True)
class ImportReport:
    imported_top_level: int
    imported_replies: int
    excluded: tuple[Exclusion, ...]
    truncated_at_limit: bool


def report_to_dict(report: ImportReport) -> dict[str, Any]:
    return {
        "imported_top_level": report.imported_top_level,
        "imported_replies": report.imported_replies,
        "excluded": [
            {"external_id": e.external_id, "reason": e.reason} for e in report.excluded
        ],
        "truncated_at_limit": report.truncated_at_limit,
    }


def _parse_created(value: Any, where: str) -> datetime:
    if isinstance(value, bool):
        raise MalformedInput(f"{where}: created_utc must be a timestamp")
    if isinstance(value, (int, float)):
        return datetime.fromtimestamp(value, tz=timezone.utc)
    if isinstance(value, str):
        try:
            return model.parse_timestamp(value)
        except ValueError as exc:
            raise MalformedInput(f"{where}: bad created_utc {value!r}") from exc
    raise MalformedInput(f"{where}: missing or invalid created_utc")


def _parse_anchors(value: Any, where: str) -> tuple[AnchorRect, ...]:
    if not isinstance(value, list):
        raise MalformedInput(f"{where}: anchors must be a list")
    anchors = []
    for entry in value:
        if not isinstance(entry, dict) or not {"x", "y", "w", "h"} <= entry.keys():
            raise MalformedInput(f"{where}: anchors must be objects with x, y, w, h")
        try:
            anchors.append(model.anchor_from_dict(entry))
        except (TypeError, ValueError) as exc:
            raise MalformedInput(f"{where}: bad anchor values") from exc
    return tuple(anchors)


def parse_thread(data: bytes) -> list[ExternalRecord]:
    """Parse a JSON array of external records, in file order."""
    try:
        raw = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise MalformedInput(f"input is not UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, list):
        raise MalformedInput("top-level value must be a JSON array of records")

    records: list[ExternalRecord] = []
    for index, entry in enumerate(raw):
        where = f"record {index}"
        if not isinstance(entry, dict):
            raise MalformedInput(f"{where}: must be an object")
        external_id = entry.get("external_id")
        if not isinstance(external_id, str) or not external_id:
            raise MalformedInput(f"{where}: missing external_id")
        if "created_utc" not in entry:
            raise MalformedInput(f"{where}: missing created_utc")
        score = entry.get("score", 0)
        if isinstance(score, bool) or not isinstance(score, int):
            raise MalformedInput(f"{where}: score must be an integer")
        raw_category = entry.get("category")
        category = None
        if raw_category is not None:
            try:
                category = CommentCategory(raw_category)
            except ValueError:
                raise MalformedInput(
                    f"{where}: unknown category {raw_category!r}"
                ) from None
        anchors = None
        if entry.get("anchors") is not None:
            anchors = _parse_anchors(entry["anchors"], where)
        records.append(
            ExternalRecord(
                external_id=external_id,
                parent_external_id=entry.get("parent_external_id"),
                author=entry.get("author"),
                text=entry.get("text"),
                score=score,
                created_utc=_parse_created(entry["created_utc"], where),
                category=category,
                anchors=anchors,
                anchor_target=entry.get("anchor_target"),
            )
        )
    return records


def load_anchor_sidecar(data: bytes) -> dict[str, tuple[AnchorRect, ...]]:
    """Side-file mapping external_id to arrays of [x, y, w, h] fractions."""
    try:
        raw = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"anchor side-file does not parse: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedInput("anchor side-file must be an object keyed by external_id")
    sidecar: dict[str, tuple[AnchorRect, ...]] = {}
    for external_id, rects in raw.items():
        if not isinstance(rects, list):
            raise MalformedInput(f"{external_id}: anchors must be a list")
        anchors = []
        for rect in rects:
            if not isinstance(rect, (list, tuple)) or len(rect) != 4:
                raise MalformedInput(
                    f"{external_id}: each anchor must be a [x, y, w, h] array"
                )
            anchors.append(AnchorRect(*(float(v) for v in rect)))
        sidecar[external_id] = tuple(anchors)
    return sidecar


def apply_anchor_sidecar(
    records: list[ExternalRecord], sidecar: dict[str, tuple[AnchorRect, ...]]
) -> list[ExternalRecord]:
    """Overlay side-file anchors onto records, keeping scraped data pristine."""
    return [
        replace(r, anchors=sidecar[r.external_id]) if r.external_id in sidecar else r
        for r in records
    ]


def import_thread(
    store: BoardStore,
    board_id: str,
    records: list[ExternalRecord],
    top_level_limit: int | None = None,
) -> ImportReport:
    """Import records onto a board; every record lands in exactly one bucket."""
    board = store.get_board(board_id)
    seen: set[str] = set(board.import_seen)

    ordered_ids = [c.id for c in board.comments]
    working: dict[str, AnchoredComment] = {c.id: c for c in board.comments}
    ext_to_comment: dict[str, str] = {
        c.external_id: c.id for c in board.comments if c.external_id
    }
    reply_ids_in_input = {r.external_id for r in records if r.is_reply}

    exclusions: list[Exclusion] = []
    imported_top = 0
    imported_replies = 0
    truncated = False

    def exclude(record: ExternalRecord, reason: str) -> None:
        exclusions.append(Exclusion(external_id=record.external_id, reason=reason))

    for record in (r for r in records if not r.is_reply):
        if record.external_id in seen:
            exclude(record, REASON_DUPLICATE)
            continue
        seen.add(record.external_id)
        if top_level_limit is not None and imported_top >= top_level_limit:
            exclude(record, REASON_LIMIT)
            truncated = True
            continue
        if not record.anchors:
            exclude(record, REASON_NO_ANCHOR)
            continue
        try:
            for anchor in record.anchors:
                model.validate_anchor(anchor)
        except InvalidAnchor:
            exclude(record, REASON_INVALID_ANCHOR)
            continue
        comment = AnchoredComment(
            id=model.new_id(),
            author=record.author,
            text=record.text,
            category=record.category,
            anchors=record.anchors,
            likes=max(0, record.score),
            replies=(),
            created_at=record.created_utc,
            external_id=record.external_id,
            anchor_target=record.anchor_target,
        )
        working[comment.id] = comment
        ordered_ids.append(comment.id)
        ext_to_comment[record.external_id] = comment.id
        imported_top += 1

    for record in (r for r in records if r.is_reply):
        if record.external_id in seen:
            exclude(record, REASON_DUPLICATE)
            continue
        seen.add(record.external_id)
        if record.parent_external_id in reply_ids_in_input:
            exclude(record, REASON_NESTED_REPLY)
            continue
        parent_id = ext_to_comment.get(record.parent_external_id or "")
        if parent_id is None:
            exclude(record, REASON_ORPHANED)
            continue
        reply = Reply(
            id=model.new_id(),
            author=record.author,
            text=record.text,
            created_at=record.created_utc,
            external_id=record.external_id,
        )
        parent = working[parent_id]
        working[parent_id] = replace(parent, replies=parent.replies + (reply,))
        imported_replies += 1

    updated = replace(
        board,
        comments=tuple(working[cid] for cid in ordered_ids),
        import_seen=tuple(sorted(seen)),
    )
    store.save_board(updated)

    return ImportReport(
        imported_top_level=imported_top,
        imported_replies=imported_replies,
        excluded=tuple(exclusions),
        truncated_at_limit=truncated,
    )
