"""Corpus statistics over a single board, backing /stats and the CLI report.

Pure functions of the board document; recomputing after a reload gives
identical output. Medians use the lower-middle element on even counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .engine import overlap_count_map
from .model import Board, CommentCategory

UNCATEGORIZED_KEY = "uncategorized"


@dataclass(frozen=True)
class BoardStats:
    total_comments: int
    total_replies: int
    total_anchors: int
    single_anchor_share: float
    median_anchor_width: float
    median_anchor_height: float
    category_histogram: dict[str, int]
    responses_by_category: dict[str, int]
    comment_length_median_chars: int
    overlap_hotspots: tuple[dict[str, int], ...]


def lower_median(values: Sequence[float]) -> float:
    """Median taking the lower-middle element for even counts; 0 when empty."""
    if not values:
        return 0
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def compute_stats(
    board: Board, grid_w: int = 64, grid_h: int = 64, top_k: int = 5
) -> BoardStats:
    comments = board.comments
    anchors = [a for c in comments for a in c.anchors]

    histogram = {cat.value: 0 for cat in CommentCategory}
    histogram[UNCATEGORIZED_KEY] = 0
    responses = {cat.value: 0 for cat in CommentCategory}
    responses[UNCATEGORIZED_KEY] = 0
    for comment in comments:
        key = comment.category.value if comment.category else UNCATEGORIZED_KEY
        histogram[key] += 1
        responses[key] += len(comment.replies)

    # Lengths count characters after trimming; anchor-only comments are
    # excluded from the median.
    lengths = [
        len(comment.text.strip())
        for comment in comments
        if comment.text and comment.text.strip()
    ]

    counts = overlap_count_map(anchors, grid_w, grid_h)
    cells = [
        {"row": i, "col": j, "count": int(counts[i, j])}
        for i in range(grid_h)
        for j in range(grid_w)
        if counts[i, j] > 0
    ]
    cells.sort(key=lambda c: (-c["count"], c["row"], c["col"]))

    return BoardStats(
        total_comments=len(comments),
        total_replies=sum(len(c.replies) for c in comments),
        total_anchors=len(anchors),
        single_anchor_share=(
            sum(1 for c in comments if len(c.anchors) == 1) / len(comments)
            if comments
            else 0.0
        ),
        median_anchor_width=lower_median([a.w for a in anchors]),
        median_anchor_height=lower_median([a.h for a in anchors]),
        category_histogram=histogram,
        responses_by_category=responses,
        comment_length_median_chars=int(lower_median(lengths)),
        overlap_hotspots=tuple(cells[:top_k]),
    )


def stats_to_dict(stats: BoardStats) -> dict[str, Any]:
    return {
        "total_comments": stats.total_comments,
        "total_replies": stats.total_replies,
        "total_anchors": stats.total_anchors,
        "single_anchor_share": stats.single_anchor_share,
        "median_anchor_width": stats.median_anchor_width,
        "median_anchor_height": stats.median_anchor_height,
        "category_histogram": dict(stats.category_histogram),
        "responses_by_category": dict(stats.responses_by_category),
        "comment_length_median_chars": stats.comment_length_median_chars,
        "overlap_hotspots": [dict(c) for c in stats.overlap_hotspots],
    }
