"""Per-board mutation notices with strictly increasing sequence numbers.

The log is append-only and in-memory; readers keep their own cursor and
poll the tail, so replay from any cursor is gap-free and subscribers never
contend with writers.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any

COMMENT_ADDED = "comment_added"
REPLY_ADDED = "reply_added"
LIKE_ADDED = "like_added"


@dataclass(frozen=True)
class EventNotice:
    board_id: str
    sequence: int
    kind: str
    entity_id: str


def notice_to_dict(notice: EventNotice) -> dict[str, Any]:
    return {
        "board_id": notice.board_id,
        "sequence": notice.sequence,
        "kind": notice.kind,
        "entity_id": notice.entity_id,
    }


class EventBus:
    def __init__(self) -> None:
        self._logs: dict[str, list[EventNotice]] = {}
        self._publish_lock = threading.Lock()

    def publish(self, board_id: str, kind: str, entity_id: str) -> EventNotice:
        with self._publish_lock:
            log = self._logs.setdefault(board_id, [])
            notice = EventNotice(
                board_id=board_id,
                sequence=len(log) + 1,
                kind=kind,
                entity_id=entity_id,
            )
            log.append(notice)
        return notice

    def after(self, board_id: str, since_sequence: int) -> list[EventNotice]:
        """All notices with sequence > since_sequence, in order."""
        log = self._logs.get(board_id, [])
        # Slicing an append-only list is safe without the publish lock.
        return log[since_sequence:]

    def latest_sequence(self, board_id: str) -> int:
        return len(self._logs.get(board_id, []))
