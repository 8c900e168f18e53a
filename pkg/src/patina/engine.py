"""Patina engine: turns a board's comment corpus into a device-independent
scene description (RenderSpec) for one of six anchor encodings, plus the
"none" state.

Everything here is pure and deterministic: equal inputs yield equal specs.
Styling constants live in PatinaStyleConfig; encodings only decide which
comment metadata drives which visual variable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyCorpus, UnknownCategoryFilter, UnknownEncoding
from .model import AnchorRect, AnchoredComment, Board, CommentCategory

# Anchor count at which the activity fill opacity reaches its floor.
ACTIVITY_FLOOR_ANCHOR_COUNT = 100

# Fill for comments without a category under the category encoding.
UNCATEGORIZED_FILL = "#9E9E9E"

CATEGORY_PALETTE: Mapping[CommentCategory, str] = {
    CommentCategory.observations: "#1F77B4",
    CommentCategory.hypotheses: "#9467BD",
    CommentCategory.questions: "#2CA02C",
    CommentCategory.critique: "#D62728",
    CommentCategory.context: "#8C564B",
    CommentCategory.personal_stories: "#E377C2",
    CommentCategory.opinions: "#FF7F0E",
    CommentCategory.proposals: "#17BECF",
}


class PatinaEncoding(str, Enum):
    activity = "activity"
    category = "category"
    popularity = "popularity"
    responses = "responses"
    temporal = "temporal"
    relations = "relations"
    none = "none"


def parse_encoding(label: str | PatinaEncoding) -> PatinaEncoding:
    if isinstance(label, PatinaEncoding):
        return label
    try:
        return PatinaEncoding(label)
    except ValueError:
        valid = ", ".join(e.value for e in PatinaEncoding)
        raise UnknownEncoding(f"unknown encoding {label!r}; valid: {valid}") from None


def parse_category(label: str | CommentCategory) -> CommentCategory:
    if isinstance(label, CommentCategory):
        return label
    try:
        return CommentCategory(label)
    except ValueError:
        valid = ", ".join(c.value for c in CommentCategory)
        raise UnknownCategoryFilter(
            f"unknown category {label!r}; valid: {valid}"
        ) from None


@dataclass(frozen=True)
class LineStyle:
    color: str
    width_px: float
    opacity: float
    dash: str


@dataclass(frozen=True)
class PatinaStyleConfig:
    """All visual constants of the patina overlays."""

    min_fill_opacity: float = 0.05
    max_fill_opacity: float = 0.50
    group_opacity: float = 0.50
    chart_saturation: float = 0.30
    stroke_width_min_px: float = 1.0
    stroke_width_max_px: float = 10.0
    temporal_segment_count: int = 10
    base_color: str = "#D62020"
    default_stroke_opacity: float = 0.50
    popularity_fill_color: str = "#FFFFFF"
    popularity_fill_opacity: float = 0.05
    jitter_px_per_reply: float = 1.0
    jitter_max_px: float = 8.0
    jitter_frequency_hz: float = 2.0
    category_fill_opacity: float = 0.25
    category_palette: Mapping[CommentCategory, str] = field(
        default_factory=lambda: dict(CATEGORY_PALETTE)
    )
    relation_line: LineStyle = LineStyle(
        color="#D62020", width_px=2.0, opacity=0.50, dash="dotted"
    )
    temporal_cycle_seconds: float = 2.0
    temporal_fade_seconds: float = 0.5

    def __post_init__(self) -> None:
        if not (0 < self.min_fill_opacity <= self.max_fill_opacity <= self.group_opacity <= 1):
            raise ValueError(
                "opacities must satisfy 0 < min_fill <= max_fill <= group <= 1"
            )
        if self.stroke_width_min_px > self.stroke_width_max_px:
            raise ValueError("stroke_width_min_px must not exceed stroke_width_max_px")
        if self.temporal_segment_count < 1:
            raise ValueError("temporal_segment_count must be >= 1")


DEFAULT_STYLE = PatinaStyleConfig()


@dataclass(frozen=True)
class PixelRect:
    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h


@dataclass(frozen=True)
class Jitter:
    amplitude_px: float
    frequency_hz: float
    phase_seed: int


@dataclass(frozen=True)
class FadeSchedule:
    segment_index: int
    cycle_seconds: float
    fade_seconds: float


@dataclass(frozen=True)
class RectMark:
    rect_px: PixelRect
    fill_color: str
    fill_opacity: float
    stroke_color: str
    stroke_opacity: float
    stroke_width_px: float
    animation: Jitter | FadeSchedule | None
    comment_id: str


@dataclass(frozen=True)
class LineMark:
    from_px: tuple[float, float]
    to_px: tuple[float, float]
    style: LineStyle
    comment_id: str


@dataclass(frozen=True)
class RenderSpec:
    rect_marks: tuple[RectMark, ...]
    line_marks: tuple[LineMark, ...]
    group_opacity: float
    background_saturation: float
    encoding: PatinaEncoding
    legend: dict[str, str]


def activity_fill_opacity(total_anchor_count: int, cfg: PatinaStyleConfig = DEFAULT_STYLE) -> float:
    """Fill opacity for the activity family: linear decay in the board's
    total anchor count, from max at 1 anchor to min at 100+, clamped."""
    if total_anchor_count < 1:
        raise ValueError("total_anchor_count must be >= 1")
    span = cfg.max_fill_opacity - cfg.min_fill_opacity
    raw = cfg.max_fill_opacity - (total_anchor_count - 1) * span / (
        ACTIVITY_FLOOR_ANCHOR_COUNT - 1
    )
    return min(cfg.max_fill_opacity, max(cfg.min_fill_opacity, raw))


def popularity_stroke_width(
    likes: int,
    min_likes: int,
    max_likes: int,
    cfg: PatinaStyleConfig = DEFAULT_STYLE,
) -> float:
    """Linear map from the board's like range onto the stroke width range.

    All comments equally liked carries no signal: everything gets the
    minimum width.
    """
    if max_likes == min_likes:
        return cfg.stroke_width_min_px
    frac = (likes - min_likes) / (max_likes - min_likes)
    width = cfg.stroke_width_min_px + (cfg.stroke_width_max_px - cfg.stroke_width_min_px) * frac
    return min(cfg.stroke_width_max_px, max(cfg.stroke_width_min_px, width))


def jitter_amplitude(reply_count: int, cfg: PatinaStyleConfig = DEFAULT_STYLE) -> float:
    return min(cfg.jitter_max_px, reply_count * cfg.jitter_px_per_reply)


def phase_seed_for(comment_id: str) -> int:
    """Deterministic 32-bit jitter phase seed per comment."""
    digest = hashlib.sha256(comment_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def temporal_segments(
    comments: Sequence[AnchoredComment], k: int
) -> dict[str, int]:
    """Assign each comment to one of k equal-width time bins over
    [t_min, t_max]. Comments at t_max land in bin k; a degenerate span
    collapses everything into bin 1."""
    if k < 1:
        raise ValueError("segment count must be >= 1")
    if not comments:
        raise EmptyCorpus("no comments to segment")
    times = {c.id: c.created_at.timestamp() for c in comments}
    t_min = min(times.values())
    t_max = max(times.values())
    span = t_max - t_min
    if span == 0:
        return {cid: 1 for cid in times}
    out: dict[str, int] = {}
    for cid, t in times.items():
        index = int((t - t_min) / span * k) + 1
        out[cid] = min(index, k)
    return out


def relation_links(
    comment: AnchoredComment,
    board: Board,
    cfg: PatinaStyleConfig = DEFAULT_STYLE,
) -> list[LineMark]:
    """Chain the comment's anchor centers in anchor order: m anchors, m-1 lines."""
    links: list[LineMark] = []
    for a, b in zip(comment.anchors, comment.anchors[1:]):
        ax, ay = a.center()
        bx, by = b.center()
        links.append(
            LineMark(
                from_px=(ax * board.image_width_px, ay * board.image_height_px),
                to_px=(bx * board.image_width_px, by * board.image_height_px),
                style=cfg.relation_line,
                comment_id=comment.id,
            )
        )
    return links


def overlap_count_map(
    anchors: Iterable[AnchorRect], grid_w: int, grid_h: int
) -> np.ndarray:
    """Per-cell anchor counts on a grid over the unit box.

    Cell (i, j) counts the anchors whose rectangle covers the cell's center
    point ((j+0.5)/grid_w, (i+0.5)/grid_h); edges are inclusive.
    """
    if grid_w < 1 or grid_h < 1:
        raise ValueError("grid dimensions must be >= 1")
    cx = (np.arange(grid_w) + 0.5) / grid_w
    cy = (np.arange(grid_h) + 0.5) / grid_h
    counts = np.zeros((grid_h, grid_w), dtype=np.int64)
    for a in anchors:
        col_hits = (cx >= a.x) & (cx <= a.x + a.w)
        row_hits = (cy >= a.y) & (cy <= a.y + a.h)
        counts += np.outer(row_hits, col_hits).astype(np.int64)
    return counts


def _anchor_to_pixels(rect: AnchorRect, board: Board) -> PixelRect:
    return PixelRect(
        x=rect.x * board.image_width_px,
        y=rect.y * board.image_height_px,
        w=rect.w * board.image_width_px,
        h=rect.h * board.image_height_px,
    )


def fmt_number(value: float) -> str:
    """Stable short decimal used in legends and SVG attributes."""
    text = f"{value:.4f}".rstrip("0").rstrip(".")
    return text or "0"


_fmt = fmt_number


def _legend(
    encoding: PatinaEncoding,
    cfg: PatinaStyleConfig,
    fill_opacity: float | None,
    min_likes: int | None,
    max_likes: int | None,
) -> dict[str, str]:
    if encoding == PatinaEncoding.none:
        return {}
    if encoding == PatinaEncoding.category:
        legend = {cat.value: cfg.category_palette[cat] for cat in CommentCategory}
        legend["uncategorized"] = UNCATEGORIZED_FILL
        return legend
    if encoding == PatinaEncoding.popularity:
        legend = {
            "stroke_width": (
                f"{_fmt(cfg.stroke_width_min_px)}px (least liked) to "
                f"{_fmt(cfg.stroke_width_max_px)}px (most liked)"
            ),
            "fill": f"{cfg.popularity_fill_color} at {_fmt(cfg.popularity_fill_opacity)}",
        }
        if min_likes is not None and max_likes is not None:
            legend["likes_range"] = f"{min_likes} to {max_likes}"
        return legend
    legend = {"fill": cfg.base_color}
    if fill_opacity is not None:
        legend["fill_opacity"] = _fmt(fill_opacity)
    if encoding == PatinaEncoding.responses:
        legend["jitter"] = (
            f"{_fmt(cfg.jitter_px_per_reply)}px per reply, capped at "
            f"{_fmt(cfg.jitter_max_px)}px"
        )
    elif encoding == PatinaEncoding.temporal:
        legend["segments"] = str(cfg.temporal_segment_count)
        legend["cycle_seconds"] = _fmt(cfg.temporal_cycle_seconds)
    elif encoding == PatinaEncoding.relations:
        legend["link"] = (
            f"{cfg.relation_line.dash} {cfg.relation_line.color} line joins the "
            "anchors of one comment"
        )
    return legend


def build_patina(
    board: Board,
    encoding: PatinaEncoding | str,
    cfg: PatinaStyleConfig = DEFAULT_STYLE,
    category_filter: CommentCategory | str | None = None,
) -> RenderSpec:
    """Resolve a board and an encoding selection into a RenderSpec.

    Marks are z-ordered largest-first (smaller anchors render later, i.e.
    on top), ties broken with newer comments later. Background saturation
    drops to cfg.chart_saturation only while at least one mark is shown.
    """
    encoding = parse_encoding(encoding)
    selected = parse_category(category_filter) if category_filter is not None else None

    comments = list(board.comments)
    if encoding == PatinaEncoding.none:
        comments = []
    elif encoding == PatinaEncoding.category and selected is not None:
        comments = [c for c in comments if c.category == selected]

    total_anchors = sum(len(c.anchors) for c in board.comments)
    base_opacity = (
        activity_fill_opacity(total_anchors, cfg) if total_anchors >= 1 else None
    )

    min_likes = max_likes = None
    if encoding == PatinaEncoding.popularity and board.comments:
        likes = [c.likes for c in board.comments]
        min_likes, max_likes = min(likes), max(likes)

    segments: dict[str, int] = {}
    if encoding == PatinaEncoding.temporal and comments:
        segments = temporal_segments(comments, cfg.temporal_segment_count)

    rect_marks: list[RectMark] = []
    line_marks: list[LineMark] = []
    for comment in comments:
        fill_color = cfg.base_color
        fill_opacity = base_opacity if base_opacity is not None else cfg.min_fill_opacity
        stroke_color = cfg.base_color
        stroke_width = cfg.stroke_width_min_px
        animation: Jitter | FadeSchedule | None = None

        if encoding == PatinaEncoding.category:
            fill_color = (
                cfg.category_palette[comment.category]
                if comment.category
                else UNCATEGORIZED_FILL
            )
            stroke_color = fill_color
            fill_opacity = cfg.category_fill_opacity
        elif encoding == PatinaEncoding.popularity:
            fill_color = cfg.popularity_fill_color
            fill_opacity = cfg.popularity_fill_opacity
            stroke_width = popularity_stroke_width(
                comment.likes, min_likes or 0, max_likes or 0, cfg
            )
        elif encoding == PatinaEncoding.responses:
            amplitude = jitter_amplitude(len(comment.replies), cfg)
            if amplitude > 0:
                animation = Jitter(
                    amplitude_px=amplitude,
                    frequency_hz=cfg.jitter_frequency_hz,
                    phase_seed=phase_seed_for(comment.id),
                )
        elif encoding == PatinaEncoding.temporal:
            animation = FadeSchedule(
                segment_index=segments[comment.id],
                cycle_seconds=cfg.temporal_cycle_seconds,
                fade_seconds=cfg.temporal_fade_seconds,
            )
        elif encoding == PatinaEncoding.relations:
            line_marks.extend(relation_links(comment, board, cfg))

        for anchor in comment.anchors:
            rect_marks.append(
                RectMark(
                    rect_px=_anchor_to_pixels(anchor, board),
                    fill_color=fill_color,
                    fill_opacity=fill_opacity,
                    stroke_color=stroke_color,
                    stroke_opacity=cfg.default_stroke_opacity,
                    stroke_width_px=stroke_width,
                    animation=animation,
                    comment_id=comment.id,
                )
            )

    created_at = {c.id: c.created_at for c in board.comments}
    rect_marks.sort(key=lambda m: (-m.rect_px.area, created_at[m.comment_id]))

    has_marks = len(rect_marks) > 0
    return RenderSpec(
        rect_marks=tuple(rect_marks),
        line_marks=tuple(line_marks),
        group_opacity=cfg.group_opacity if encoding != PatinaEncoding.none else 1.0,
        background_saturation=(
            cfg.chart_saturation
            if encoding != PatinaEncoding.none and has_marks
            else 1.0
        ),
        encoding=encoding,
        legend=_legend(
            encoding,
            cfg,
            base_opacity if has_marks else None,
            min_likes,
            max_likes,
        ),
    )


# Canonical RenderSpec JSON, consumed by the web UI and the CLI.


def _animation_to_dict(animation: Jitter | FadeSchedule | None) -> dict[str, Any] | None:
    if animation is None:
        return None
    if isinstance(animation, Jitter):
        return {
            "kind": "jitter",
            "amplitude_px": animation.amplitude_px,
            "frequency_hz": animation.frequency_hz,
            "phase_seed": animation.phase_seed,
        }
    return {
        "kind": "fade",
        "segment_index": animation.segment_index,
        "cycle_seconds": animation.cycle_seconds,
        "fade_seconds": animation.fade_seconds,
    }


def render_spec_to_dict(spec: RenderSpec) -> dict[str, Any]:
    return {
        "rect_marks": [
            {
                "rect_px": {
                    "x": m.rect_px.x,
                    "y": m.rect_px.y,
                    "w": m.rect_px.w,
                    "h": m.rect_px.h,
                },
                "fill_color": m.fill_color,
                "fill_opacity": m.fill_opacity,
                "stroke_color": m.stroke_color,
                "stroke_opacity": m.stroke_opacity,
                "stroke_width_px": m.stroke_width_px,
                "animation": _animation_to_dict(m.animation),
                "comment_id": m.comment_id,
            }
            for m in spec.rect_marks
        ],
        "line_marks": [
            {
                "from_px": {"x": m.from_px[0], "y": m.from_px[1]},
                "to_px": {"x": m.to_px[0], "y": m.to_px[1]},
                "style": {
                    "color": m.style.color,
                    "width_px": m.style.width_px,
                    "opacity": m.style.opacity,
                    "dash": m.style.dash,
                },
                "comment_id": m.comment_id,
            }
            for m in spec.line_marks
        ],
        "group_opacity": spec.group_opacity,
        "background_saturation": spec.background_saturation,
        "encoding": spec.encoding.value,
        "legend": dict(spec.legend),
    }
