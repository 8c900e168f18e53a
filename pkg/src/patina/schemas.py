"""Pydantic request models for the HTTP layer.

Responses use the canonical domain JSON from model/engine/analytics so the
API body equals the owning module's output exactly.
"""

from __future__ import annotations

from pydantic import BaseModel

from .model import CommentCategory


class AnchorIn(BaseModel):
    x: float
    y: float
    w: float
    h: float


class CommentDraftIn(BaseModel):
    author: str | None = None
    text: str | None = None
    category: CommentCategory | None = None
    anchors: list[AnchorIn] = []
    anchor_target: str | None = None


class ReplyDraftIn(BaseModel):
    author: str | None = None
    text: str | None = None
