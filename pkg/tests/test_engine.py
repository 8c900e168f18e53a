import random
from datetime import timedelta

import pytest
from hypothesis import given, strategies as st

from patina import engine
from patina.engine import (
    DEFAULT_STYLE,
    FadeSchedule,
    Jitter,
    PatinaEncoding,
    PatinaStyleConfig,
    build_patina,
    jitter_amplitude,
    overlap_count_map,
    popularity_stroke_width,
    relation_links,
    temporal_segments,
)
from patina.errors import EmptyCorpus, UnknownCategoryFilter, UnknownEncoding
from patina.model import AnchorRect, AnchoredComment, Board, CommentCategory

from util import EPOCH, make_board, random_anchor


def brute_force_overlap(anchors, grid_w, grid_h):
    """Independent per-cell point-in-rect rasterizer (the oracle)."""
    counts = [[0] * grid_w for _ in range(grid_h)]
    for i in range(grid_h):
        cy = (i + 0.5) / grid_h
        for j in range(grid_w):
            cx = (j + 0.5) / grid_w
            for a in anchors:
                if a.x <= cx <= a.x + a.w and a.y <= cy <= a.y + a.h:
                    counts[i][j] += 1
    return counts


def single_anchor_comment(i, anchor, likes=0, n_replies=0, category=None, at=None):
    from patina.model import Reply

    created = at if at is not None else EPOCH + timedelta(seconds=i)
    replies = tuple(
        Reply(id=f"c{i}-r{j}", author=None, text=None, created_at=created)
        for j in range(n_replies)
    )
    return AnchoredComment(
        id=f"c{i}",
        author=None,
        text=None,
        category=category,
        anchors=(anchor,),
        likes=likes,
        replies=replies,
        created_at=created,
    )


def board_with(comments, width=1000, height=800):
    return Board(
        id="b",
        title="t",
        image_ref="0" * 64,
        image_width_px=width,
        image_height_px=height,
        created_at=EPOCH,
        comments=tuple(comments),
    )


class TestActivityFillOpacity:
    def test_single_anchor_hits_the_ceiling(self):
        assert engine.activity_fill_opacity(1) == 0.50

    def test_floor_reached_at_one_hundred(self):
        assert engine.activity_fill_opacity(100) == 0.05
        assert engine.activity_fill_opacity(500) == 0.05

    def test_midrange_value(self):
        # 0.5 - 44 * 0.45 / 99, evaluated by hand
        assert engine.activity_fill_opacity(45) == pytest.approx(0.30, abs=1e-12)

    def test_monotone_non_increasing(self):
        values = [engine.activity_fill_opacity(n) for n in range(1, 301)]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert all(0.05 <= v <= 0.50 for v in values)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            engine.activity_fill_opacity(0)


class TestPopularityStrokeWidth:
    def test_least_popular_is_one_px(self):
        assert popularity_stroke_width(0, 0, 40) == 1.0

    def test_most_popular_is_ten_px(self):
        assert popularity_stroke_width(40, 0, 40) == 10.0

    def test_linear_midpoint(self):
        assert popularity_stroke_width(20, 0, 40) == pytest.approx(5.5)

    def test_all_equal_likes_collapse_to_one_px(self):
        assert popularity_stroke_width(7, 7, 7) == 1.0

    @given(
        likes=st.lists(st.integers(0, 10_000), min_size=2, max_size=30),
    )
    def test_monotone_in_likes(self, likes):
        lo, hi = min(likes), max(likes)
        widths = sorted(
            (v, popularity_stroke_width(v, lo, hi)) for v in likes
        )
        for (_, w1), (_, w2) in zip(widths, widths[1:]):
            assert w1 <= w2
        assert all(1.0 <= w <= 10.0 for _, w in widths)


class TestJitter:
    def test_zero_replies_is_static(self):
        assert jitter_amplitude(0) == 0.0

    def test_linear_below_cap(self):
        assert jitter_amplitude(3) == 3.0

    def test_cap(self):
        assert jitter_amplitude(50) == 8.0

    def test_phase_seed_is_deterministic_per_id(self):
        assert engine.phase_seed_for("abc") == engine.phase_seed_for("abc")
        assert engine.phase_seed_for("abc") != engine.phase_seed_for("abd")


class TestTemporalSegments:
    def test_evenly_spread_timestamps_map_to_their_own_bins(self):
        comments = [
            single_anchor_comment(i, AnchorRect(0, 0, 0.1, 0.1), at=EPOCH + timedelta(seconds=i))
            for i in range(10)
        ]
        segments = temporal_segments(comments, 10)
        assert segments == {f"c{i}": i + 1 for i in range(10)}

    def test_identical_timestamps_collapse_to_bin_one(self):
        comments = [
            single_anchor_comment(i, AnchorRect(0, 0, 0.1, 0.1), at=EPOCH) for i in range(5)
        ]
        assert set(temporal_segments(comments, 10).values()) == {1}

    def test_t_max_lands_in_bin_k(self):
        comments = [
            single_anchor_comment(0, AnchorRect(0, 0, 0.1, 0.1), at=EPOCH),
            single_anchor_comment(1, AnchorRect(0, 0, 0.1, 0.1), at=EPOCH + timedelta(hours=1)),
        ]
        segments = temporal_segments(comments, 10)
        assert segments["c1"] == 10
        assert segments["c0"] == 1

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            temporal_segments([], 10)

    def test_every_comment_in_exactly_one_bin(self):
        rng = random.Random(11)
        for _ in range(50):
            comments = [
                single_anchor_comment(
                    i,
                    AnchorRect(0, 0, 0.1, 0.1),
                    at=EPOCH + timedelta(seconds=rng.randint(0, 100_000)),
                )
                for i in range(rng.randint(1, 40))
            ]
            segments = temporal_segments(comments, 10)
            assert set(segments) == {c.id for c in comments}
            assert all(1 <= s <= 10 for s in segments.values())


class TestRelationLinks:
    def test_single_anchor_yields_no_lines(self):
        board = board_with([])
        comment = single_anchor_comment(0, AnchorRect(0.1, 0.1, 0.2, 0.2))
        assert relation_links(comment, board) == []

    def test_two_anchor_centers_in_pixels(self):
        board = board_with([], width=1000, height=800)
        comment = AnchoredComment(
            id="c0",
            author=None,
            text=None,
            category=None,
            anchors=(AnchorRect(0.2, 0.4, 0.1, 0.2), AnchorRect(0.7, 0.4, 0.1, 0.2)),
            likes=0,
            replies=(),
            created_at=EPOCH,
        )
        (line,) = relation_links(comment, board)
        assert line.from_px == (250.0, 400.0)
        assert line.to_px == (750.0, 400.0)

    def test_four_anchors_chain_three_lines(self):
        board = board_with([])
        anchors = tuple(AnchorRect(0.1 * i, 0.1, 0.05, 0.05) for i in range(1, 5))
        comment = AnchoredComment(
            id="c0",
            author=None,
            text=None,
            category=None,
            anchors=anchors,
            likes=0,
            replies=(),
            created_at=EPOCH,
        )
        lines = relation_links(comment, board)
        assert len(lines) == 3
        for first, second in zip(lines, lines[1:]):
            assert first.to_px == second.from_px


class TestOverlapCountMap:
    def test_disjoint_anchors_never_stack(self):
        counts = overlap_count_map(
            [AnchorRect(0.0, 0.0, 0.2, 0.2), AnchorRect(0.6, 0.6, 0.2, 0.2)], 32, 32
        )
        assert counts.max() == 1

    def test_identical_anchors_stack(self):
        anchor = AnchorRect(0.25, 0.25, 0.5, 0.5)
        counts = overlap_count_map([anchor, anchor], 32, 32)
        assert counts.max() == 2

    def test_matches_brute_force_oracle(self):
        rng = random.Random(42)
        anchors = [random_anchor(rng) for _ in range(10)]
        counts = overlap_count_map(anchors, 64, 64)
        assert counts.tolist() == brute_force_overlap(anchors, 64, 64)

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            overlap_count_map([], 0, 4)


class TestBuildPatina:
    def test_empty_board_any_encoding(self):
        board = board_with([])
        for encoding in PatinaEncoding:
            spec = build_patina(board, encoding)
            assert spec.rect_marks == ()
            assert spec.line_marks == ()
            assert spec.background_saturation == 1.0

    def test_none_encoding_shows_full_saturation(self):
        rng = random.Random(3)
        board = make_board(rng, 12)
        spec = build_patina(board, "none")
        assert spec.rect_marks == ()
        assert spec.background_saturation == 1.0
        assert spec.group_opacity == 1.0

    def test_three_single_anchor_comments_activity(self):
        comments = [
            single_anchor_comment(i, AnchorRect(0.1 * i, 0.1, 0.1, 0.1)) for i in range(3)
        ]
        spec = build_patina(board_with(comments), "activity")
        assert len(spec.rect_marks) == 3
        assert spec.group_opacity == 0.5
        assert spec.background_saturation == 0.30
        for mark in spec.rect_marks:
            # 0.5 - 2 * 0.45 / 99, evaluated by hand
            assert mark.fill_opacity == pytest.approx(0.4909090909090909, abs=1e-12)
            assert mark.fill_color == "#D62020"
            assert mark.stroke_opacity == 0.50

    def test_category_palette_and_gray_fallback(self):
        comments = [
            single_anchor_comment(0, AnchorRect(0.0, 0.0, 0.1, 0.1), category=CommentCategory.critique),
            single_anchor_comment(1, AnchorRect(0.2, 0.0, 0.1, 0.1), category=None),
        ]
        spec = build_patina(board_with(comments), "category")
        by_id = {m.comment_id: m for m in spec.rect_marks}
        assert by_id["c0"].fill_color == "#D62728"
        assert by_id["c1"].fill_color == engine.UNCATEGORIZED_FILL
        assert all(m.fill_opacity == 0.25 for m in spec.rect_marks)

    def test_category_filter_keeps_only_matches(self):
        comments = [
            single_anchor_comment(0, AnchorRect(0.0, 0.0, 0.1, 0.1), category=CommentCategory.critique),
            single_anchor_comment(1, AnchorRect(0.2, 0.0, 0.1, 0.1), category=CommentCategory.questions),
            single_anchor_comment(2, AnchorRect(0.4, 0.0, 0.1, 0.1), category=None),
        ]
        spec = build_patina(board_with(comments), "category", category_filter="critique")
        assert [m.comment_id for m in spec.rect_marks] == ["c0"]

    def test_unknown_category_filter_rejected(self):
        with pytest.raises(UnknownCategoryFilter):
            build_patina(board_with([]), "category", category_filter="rants")

    def test_unknown_encoding_rejected(self):
        with pytest.raises(UnknownEncoding):
            build_patina(board_with([]), "bogus")

    def test_popularity_styling(self):
        comments = [
            single_anchor_comment(0, AnchorRect(0.0, 0.0, 0.1, 0.1), likes=0),
            single_anchor_comment(1, AnchorRect(0.2, 0.0, 0.1, 0.1), likes=20),
            single_anchor_comment(2, AnchorRect(0.4, 0.0, 0.1, 0.1), likes=40),
        ]
        spec = build_patina(board_with(comments), "popularity")
        by_id = {m.comment_id: m for m in spec.rect_marks}
        assert by_id["c0"].stroke_width_px == 1.0
        assert by_id["c1"].stroke_width_px == pytest.approx(5.5)
        assert by_id["c2"].stroke_width_px == 10.0
        assert all(m.fill_color == "#FFFFFF" for m in spec.rect_marks)
        assert all(m.fill_opacity == 0.05 for m in spec.rect_marks)

    def test_responses_jitter(self):
        comments = [
            single_anchor_comment(0, AnchorRect(0.0, 0.0, 0.1, 0.1), n_replies=0),
            single_anchor_comment(1, AnchorRect(0.2, 0.0, 0.1, 0.1), n_replies=3),
        ]
        spec = build_patina(board_with(comments), "responses")
        by_id = {m.comment_id: m for m in spec.rect_marks}
        assert by_id["c0"].animation is None
        anim = by_id["c1"].animation
        assert isinstance(anim, Jitter)
        assert anim.amplitude_px == 3.0
        assert anim.frequency_hz == 2.0

    def test_temporal_fade_schedules(self):
        comments = [
            single_anchor_comment(i, AnchorRect(0.05 * i, 0.0, 0.1, 0.1), at=EPOCH + timedelta(minutes=i))
            for i in range(10)
        ]
        spec = build_patina(board_with(comments), "temporal")
        segments = {m.comment_id: m.animation for m in spec.rect_marks}
        assert all(isinstance(a, FadeSchedule) for a in segments.values())
        assert {a.segment_index for a in segments.values()} == set(range(1, 11))
        assert all(a.cycle_seconds == 2.0 and a.fade_seconds == 0.5 for a in segments.values())

    def test_relations_lines_use_dotted_red(self):
        comment = AnchoredComment(
            id="c0",
            author=None,
            text=None,
            category=None,
            anchors=(AnchorRect(0.1, 0.1, 0.1, 0.1), AnchorRect(0.5, 0.5, 0.1, 0.1)),
            likes=0,
            replies=(),
            created_at=EPOCH,
        )
        spec = build_patina(board_with([comment]), "relations")
        assert len(spec.rect_marks) == 2
        (line,) = spec.line_marks
        assert line.style.dash == "dotted"
        assert line.style.color == "#D62020"
        assert line.style.width_px == 2.0
        assert line.style.opacity == 0.50

    def test_z_order_large_first_ties_newer_later(self):
        big_old = single_anchor_comment(0, AnchorRect(0, 0, 0.5, 0.5), at=EPOCH)
        small = single_anchor_comment(1, AnchorRect(0, 0, 0.1, 0.1), at=EPOCH + timedelta(seconds=5))
        tie_new = single_anchor_comment(2, AnchorRect(0.5, 0.5, 0.5, 0.5), at=EPOCH + timedelta(seconds=9))
        spec = build_patina(board_with([small, tie_new, big_old]), "activity")
        assert [m.comment_id for m in spec.rect_marks] == ["c0", "c2", "c1"]

    def test_z_order_property_over_random_boards(self):
        for seed in range(30):
            rng = random.Random(seed)
            board = make_board(rng, rng.randint(1, 25))
            for encoding in PatinaEncoding:
                spec = build_patina(board, encoding)
                areas = [m.rect_px.area for m in spec.rect_marks]
                assert all(a >= b - 1e-9 for a, b in zip(areas, areas[1:]))

    def test_fill_opacity_always_within_bounds(self):
        for seed in range(20):
            rng = random.Random(seed)
            board = make_board(rng, rng.randint(1, 40))
            for encoding in ("activity", "category", "popularity", "responses", "temporal", "relations"):
                spec = build_patina(board, encoding)
                assert all(0.05 <= m.fill_opacity <= 0.50 for m in spec.rect_marks)
                assert spec.group_opacity <= 0.50

    def test_determinism(self):
        rng = random.Random(99)
        board = make_board(rng, 15)
        for encoding in PatinaEncoding:
            assert build_patina(board, encoding) == build_patina(board, encoding)

    def test_marks_resolve_to_board_comments(self):
        rng = random.Random(5)
        board = make_board(rng, 10)
        ids = {c.id for c in board.comments}
        for encoding in PatinaEncoding:
            spec = build_patina(board, encoding)
            assert all(m.comment_id in ids for m in spec.rect_marks)
            assert all(m.comment_id in ids for m in spec.line_marks)


def test_default_style_constants():
    cfg = PatinaStyleConfig()
    assert cfg.min_fill_opacity == 0.05
    assert cfg.max_fill_opacity == 0.50
    assert cfg.group_opacity == 0.50
    assert cfg.chart_saturation == 0.30
    assert (cfg.stroke_width_min_px, cfg.stroke_width_max_px) == (1.0, 10.0)
    assert cfg.temporal_segment_count == 10
    assert len(cfg.category_palette) == 8


def test_style_config_invariants_enforced():
    with pytest.raises(ValueError):
        PatinaStyleConfig(min_fill_opacity=0.6)  # above max
    with pytest.raises(ValueError):
        PatinaStyleConfig(stroke_width_min_px=11.0)
    with pytest.raises(ValueError):
        PatinaStyleConfig(temporal_segment_count=0)


def test_render_spec_json_shape():
    rng = random.Random(8)
    board = make_board(rng, 6)
    data = engine.render_spec_to_dict(build_patina(board, "responses"))
    assert set(data) == {
        "rect_marks",
        "line_marks",
        "group_opacity",
        "background_saturation",
        "encoding",
        "legend",
    }
    for mark in data["rect_marks"]:
        assert set(mark) == {
            "rect_px",
            "fill_color",
            "fill_opacity",
            "stroke_color",
            "stroke_opacity",
            "stroke_width_px",
            "animation",
            "comment_id",
        }
