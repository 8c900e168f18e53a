import random
from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from patina import model
from patina.errors import NoAnchors, OutOfBounds, ValidationFailed, ZeroArea
from patina.model import AnchorRect, CommentCategory

from util import make_board, random_anchor


class TestValidateAnchor:
    def test_full_image_anchor_accepted(self):
        model.validate_anchor(AnchorRect(0, 0, 1, 1))

    def test_overflowing_width_rejected(self):
        with pytest.raises(OutOfBounds):
            model.validate_anchor(AnchorRect(0.9, 0.1, 0.2, 0.1))

    def test_degenerate_drag_rejected(self):
        with pytest.raises(ZeroArea):
            model.validate_anchor(AnchorRect(0.4, 0.4, 0, 0.1))

    def test_negative_origin_rejected(self):
        with pytest.raises(OutOfBounds):
            model.validate_anchor(AnchorRect(-0.1, 0.2, 0.3, 0.3))

    def test_zero_area_reported_before_bounds(self):
        with pytest.raises(ZeroArea):
            model.validate_anchor(AnchorRect(0.9, 0.9, 0, 0))


class TestCreateComment:
    def test_constructor_contract(self):
        comment = model.create_comment(
            [AnchorRect(0.1, 0.1, 0.2, 0.2)],
            text="why is this empty?",
            category=CommentCategory.questions,
        )
        assert comment.likes == 0
        assert comment.replies == ()
        assert comment.category == CommentCategory.questions
        assert comment.created_at.tzinfo is not None

    def test_zero_anchors_rejected(self):
        with pytest.raises(NoAnchors):
            model.create_comment([])

    def test_anchor_only_comment_is_anonymous(self):
        comment = model.create_comment(
            [AnchorRect(0.1, 0.1, 0.1, 0.1), AnchorRect(0.3, 0.3, 0.1, 0.1), AnchorRect(0.5, 0.5, 0.1, 0.1)]
        )
        assert comment.author is None
        assert comment.text is None
        assert model.display_author(comment.author) == "anonymous"

    def test_invalid_anchor_propagates(self):
        with pytest.raises(OutOfBounds):
            model.create_comment([AnchorRect(0.9, 0.1, 0.2, 0.1)], text="nope")


class TestAddReply:
    def test_reply_count_increases_by_one(self):
        comment = model.create_comment([AnchorRect(0, 0, 0.5, 0.5)])
        updated = model.add_reply(comment, text="first!")
        assert len(updated.replies) == 1
        assert len(comment.replies) == 0  # original untouched

    def test_replies_preserve_insertion_order(self):
        comment = model.create_comment([AnchorRect(0, 0, 0.5, 0.5)])
        comment = model.add_reply(comment, text="one")
        comment = model.add_reply(comment, text="two")
        assert [r.text for r in comment.replies] == ["one", "two"]


def test_bump_likes_increments_by_exactly_one():
    comment = model.create_comment([AnchorRect(0, 0, 0.5, 0.5)])
    assert model.bump_likes(model.bump_likes(comment)).likes == 2


def test_categories_are_a_closed_set_of_eight():
    assert len(CommentCategory) == 8
    assert {c.value for c in CommentCategory} == {
        "observations",
        "hypotheses",
        "questions",
        "critique",
        "context",
        "personal_stories",
        "opinions",
        "proposals",
    }


def test_category_labels_round_trip():
    for category in CommentCategory:
        assert CommentCategory(category.value) is category


def test_timestamp_round_trip_and_z_suffix():
    now = datetime(2024, 5, 1, 12, 30, 15, 123456, tzinfo=timezone.utc)
    text = model.format_timestamp(now)
    assert text.endswith("+00:00")
    assert model.parse_timestamp(text) == now
    assert model.parse_timestamp("2024-05-01T12:30:15Z") == datetime(
        2024, 5, 1, 12, 30, 15, tzinfo=timezone.utc
    )


def test_board_validation_rejects_duplicate_comment_ids():
    rng = random.Random(7)
    board = make_board(rng, 2)
    bad = model.Board(
        id=board.id,
        title=board.title,
        image_ref=board.image_ref,
        image_width_px=board.image_width_px,
        image_height_px=board.image_height_px,
        created_at=board.created_at,
        comments=(board.comments[0], board.comments[0]),
    )
    with pytest.raises(ValidationFailed):
        model.validate_board(bad)


def test_board_validation_rejects_bad_dimensions():
    with pytest.raises(ValidationFailed):
        model.validate_board(
            model.Board(
                id="b",
                title="t",
                image_ref="r",
                image_width_px=0,
                image_height_px=10,
                created_at=model.utc_now(),
            )
        )


def test_board_json_round_trip_seed_sweep():
    for seed in range(20):
        rng = random.Random(seed)
        board = make_board(rng, rng.randint(0, 12))
        assert model.board_from_dict(model.board_to_dict(board)) == board


@st.composite
def anchors(draw):
    grid = 200
    xi = draw(st.integers(0, grid - 1))
    yi = draw(st.integers(0, grid - 1))
    wi = draw(st.integers(1, grid - xi))
    hi = draw(st.integers(1, grid - yi))
    return AnchorRect(xi / grid, yi / grid, wi / grid, hi / grid)


@given(rects=st.lists(anchors(), max_size=6))
def test_every_accepted_comment_has_at_least_one_anchor(rects):
    if not rects:
        with pytest.raises(NoAnchors):
            model.create_comment(rects)
    else:
        assert len(model.create_comment(rects).anchors) >= 1


@given(rects=st.lists(anchors(), min_size=1, max_size=6))
def test_comment_json_round_trip(rects):
    comment = model.create_comment(rects, author="a", text="t", category=CommentCategory.critique)
    assert model.comment_from_dict(model.comment_to_dict(comment)) == comment


def test_manual_anchor_target_tag_round_trips():
    comment = model.create_comment(
        [AnchorRect(0.1, 0.1, 0.2, 0.2)], text="odd gap", anchor_target="blank space"
    )
    data = model.comment_to_dict(comment)
    assert data["anchor_target"] == "blank space"
    assert model.comment_from_dict(data) == comment
    bare = model.create_comment([AnchorRect(0.1, 0.1, 0.2, 0.2)])
    assert "anchor_target" not in model.comment_to_dict(bare)


def test_random_anchor_builder_always_valid():
    rng = random.Random(123)
    for _ in range(500):
        model.validate_anchor(random_anchor(rng))
