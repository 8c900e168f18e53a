"""Shared builders for tests: images, anchors, comments, boards."""

from __future__ import annotations

import io
import random
from datetime import datetime, timedelta, timezone

from PIL import Image

from patina.model import AnchorRect, AnchoredComment, Board, CommentCategory, Reply

EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)


def make_png(width: int = 64, height: int = 48, color=(120, 40, 40)) -> bytes:
    image = Image.new("RGB", (width, height), color)
    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    return buffer.getvalue()


def random_anchor(rng: random.Random) -> AnchorRect:
    # Integer lattice keeps x+w <= 1 exact under float division.
    grid = 1000
    xi = rng.randint(0, grid - 10)
    yi = rng.randint(0, grid - 10)
    wi = rng.randint(5, grid - xi)
    hi = rng.randint(5, grid - yi)
    return AnchorRect(xi / grid, yi / grid, wi / grid, hi / grid)


def make_comment(
    rng: random.Random,
    index: int,
    max_anchors: int = 3,
    category_rate: float = 0.7,
) -> AnchoredComment:
    n_anchors = 1 if rng.random() < 0.8 else rng.randint(2, max_anchors)
    categories = list(CommentCategory)
    replies = tuple(
        Reply(
            id=f"r{index}-{j}",
            author=rng.choice([None, f"user{rng.randint(1, 9)}"]),
            text=f"reply {j}",
            created_at=EPOCH + timedelta(seconds=index * 60 + j + 1),
        )
        for j in range(rng.choice([0, 0, 0, 1, 1, 2, 3]))
    )
    return AnchoredComment(
        id=f"c{index}",
        author=rng.choice([None, f"user{rng.randint(1, 9)}"]),
        text=rng.choice([None, "", f"comment number {index} " * rng.randint(1, 4)]),
        category=rng.choice(categories) if rng.random() < category_rate else None,
        anchors=tuple(random_anchor(rng) for _ in range(n_anchors)),
        likes=rng.randint(0, 50),
        replies=replies,
        created_at=EPOCH + timedelta(seconds=index * 60 + rng.randint(0, 30)),
    )


def make_board(
    rng: random.Random,
    n_comments: int,
    width: int = 1000,
    height: int = 800,
    board_id: str = "board",
) -> Board:
    return Board(
        id=board_id,
        title="fixture board",
        image_ref="0" * 64,
        image_width_px=width,
        image_height_px=height,
        created_at=EPOCH,
        comments=tuple(make_comment(rng, i) for i in range(n_comments)),
    )
