import random
from dataclasses import replace

from patina.analytics import compute_stats, lower_median, stats_to_dict
from patina.engine import overlap_count_map
from patina.model import AnchorRect, CommentCategory, add_reply, create_comment
from patina.store import BoardStore

from util import EPOCH, make_board, make_png


def board_of(comments):
    rng = random.Random(0)
    empty = make_board(rng, 0)
    return replace(empty, comments=tuple(comments))


def anchored(*rects, text=None, category=None, replies=0):
    comment = create_comment(list(rects), text=text, category=category, created_at=EPOCH)
    for j in range(replies):
        comment = add_reply(comment, text=f"r{j}", created_at=EPOCH)
    return comment


R = AnchorRect(0.1, 0.1, 0.2, 0.2)


class TestLowerMedian:
    def test_odd_count_takes_middle(self):
        assert lower_median([0.3, 0.1, 0.12]) == 0.12

    def test_even_count_takes_lower_middle(self):
        assert lower_median([4, 1, 3, 2]) == 2

    def test_empty_is_zero(self):
        assert lower_median([]) == 0


class TestComputeStats:
    def test_empty_board(self):
        stats = compute_stats(board_of([]))
        assert stats.total_comments == 0
        assert stats.total_replies == 0
        assert stats.total_anchors == 0
        assert stats.single_anchor_share == 0.0
        assert stats.median_anchor_width == 0
        assert stats.comment_length_median_chars == 0
        assert stats.overlap_hotspots == ()
        assert sum(stats.category_histogram.values()) == 0

    def test_single_anchor_share(self):
        comments = [anchored(R) for _ in range(9)]
        comments.append(anchored(R, AnchorRect(0.5, 0.5, 0.1, 0.1)))
        stats = compute_stats(board_of(comments))
        assert stats.single_anchor_share == 0.9

    def test_median_anchor_width_from_hand_sorted_fixture(self):
        comments = [
            anchored(AnchorRect(0, 0, 0.1, 0.2)),
            anchored(AnchorRect(0, 0, 0.12, 0.11)),
            anchored(AnchorRect(0, 0, 0.3, 0.4)),
        ]
        stats = compute_stats(board_of(comments))
        assert stats.median_anchor_width == 0.12
        assert stats.median_anchor_height == 0.2

    def test_histogram_counts_and_uncategorized(self):
        comments = [
            anchored(R, category=CommentCategory.questions, replies=2),
            anchored(R, category=CommentCategory.questions),
            anchored(R, category=CommentCategory.critique, replies=1),
            anchored(R),
        ]
        stats = compute_stats(board_of(comments))
        assert stats.category_histogram["questions"] == 2
        assert stats.category_histogram["critique"] == 1
        assert stats.category_histogram["uncategorized"] == 1
        assert sum(stats.category_histogram.values()) == stats.total_comments
        assert stats.responses_by_category["questions"] == 2
        assert stats.responses_by_category["critique"] == 1
        assert stats.responses_by_category["uncategorized"] == 0

    def test_histogram_sums_over_random_boards(self):
        for seed in range(15):
            rng = random.Random(seed)
            board = make_board(rng, rng.randint(0, 30))
            stats = compute_stats(board)
            assert sum(stats.category_histogram.values()) == stats.total_comments
            assert sum(stats.responses_by_category.values()) == stats.total_replies

    def test_comment_length_trims_and_skips_empty(self):
        comments = [
            anchored(R, text="  abcde  "),   # 5 after trim
            anchored(R, text="ab"),          # 2
            anchored(R, text="   "),         # whitespace only, excluded
            anchored(R, text=None),          # anchor-only, excluded
            anchored(R, text="abcdefghij"),  # 10
        ]
        stats = compute_stats(board_of(comments))
        assert stats.comment_length_median_chars == 5

    def test_hotspots_match_overlap_map(self):
        rng = random.Random(77)
        board = make_board(rng, 15)
        stats = compute_stats(board, grid_w=64, grid_h=64, top_k=5)
        counts = overlap_count_map(
            [a for c in board.comments for a in c.anchors], 64, 64
        )
        assert len(stats.overlap_hotspots) == 5
        peak = stats.overlap_hotspots[0]
        assert counts[peak["row"], peak["col"]] == peak["count"]
        assert peak["count"] == counts.max()
        ranks = [c["count"] for c in stats.overlap_hotspots]
        assert ranks == sorted(ranks, reverse=True)
        for cell in stats.overlap_hotspots:
            assert counts[cell["row"], cell["col"]] == cell["count"]

    def test_hotspot_ties_break_by_row_then_col(self):
        comments = [anchored(AnchorRect(0, 0, 1, 1))]
        stats = compute_stats(board_of(comments), grid_w=4, grid_h=4, top_k=3)
        assert stats.overlap_hotspots == (
            {"row": 0, "col": 0, "count": 1},
            {"row": 0, "col": 1, "count": 1},
            {"row": 0, "col": 2, "count": 1},
        )

    def test_recompute_after_reload_is_identical(self, tmp_path):
        store = BoardStore(tmp_path / "data")
        board = store.put_board("b", make_png())
        store.append_comment(board.id, anchored(R, text="hello", replies=2))
        store.append_comment(board.id, anchored(R, category=CommentCategory.opinions))
        first = compute_stats(store.get_board(board.id))
        reloaded = BoardStore(tmp_path / "data")
        assert compute_stats(reloaded.get_board(board.id)) == first


def test_stats_json_shape():
    rng = random.Random(1)
    data = stats_to_dict(compute_stats(make_board(rng, 5)))
    assert set(data) == {
        "total_comments",
        "total_replies",
        "total_anchors",
        "single_anchor_share",
        "median_anchor_width",
        "median_anchor_height",
        "category_histogram",
        "responses_by_category",
        "comment_length_median_chars",
        "overlap_hotspots",
    }
    assert set(data["category_histogram"]) == {c.value for c in CommentCategory} | {
        "uncategorized"
    }
