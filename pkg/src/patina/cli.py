"""Operator CLI: serve the API, import threads, render SVGs, report stats,
and move board fixtures in and out of a data directory.

Every subcommand is a thin wrapper over the owning module; stdout carries
data, stderr carries diagnostics. Domain errors exit 1 with a single
machine-parsable line; usage errors exit 2.
"""

from __future__ import annotations

import base64
import functools
import json
import sys
from pathlib import Path

import click

from . import model
from .analytics import compute_stats, stats_to_dict
from .engine import CommentCategory, PatinaEncoding, build_patina
from .errors import PatinaError
from .ingest import (
    apply_anchor_sidecar,
    import_thread,
    load_anchor_sidecar,
    parse_thread,
    report_to_dict,
)
from .store import BoardStore, sniff_media_type
from .svg import render_svg

DATA_DIR_OPTION = click.option(
    "--data-dir",
    envvar="PATINA_DATA_DIR",
    default="data",
    show_default=True,
    type=click.Path(path_type=Path),
    help="Store root shared with `serve`.",
)

ENCODING_CHOICES = click.Choice([e.value for e in PatinaEncoding])
CATEGORY_CHOICES = click.Choice([c.value for c in CommentCategory])


def domain_errors(fn):
    """Surface domain errors as `error: <code>: <message>` and exit 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PatinaError as exc:
            click.echo(f"error: {exc.code}: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.version_option()
def main() -> None:
    """Anchored-comment discussion boards with patina overlays."""


@main.command()
@click.option("--addr", envvar="PATINA_ADDR", default="127.0.0.1:8787", show_default=True)
@DATA_DIR_OPTION
@click.option(
    "--static-dir",
    type=click.Path(path_type=Path),
    default=None,
    help="Serve a built web client from this directory.",
)
def serve(addr: str, data_dir: Path, static_dir: Path | None) -> None:
    """Run the HTTP service (blocks until interrupted)."""
    import uvicorn

    from .api import create_app

    host, _, port = addr.rpartition(":")
    app = create_app(data_dir=data_dir, static_dir=static_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


@main.command("new-board")
@DATA_DIR_OPTION
@click.option("--title", default=None, help="Board title (with --image).")
@click.option(
    "--image", "image_path", type=click.Path(path_type=Path, exists=True), default=None
)
@click.option(
    "--from",
    "bundle_path",
    type=click.Path(path_type=Path, exists=True),
    default=None,
    help="Restore a board bundle written by `export`.",
)
@domain_errors
def new_board(
    data_dir: Path, title: str | None, image_path: Path | None, bundle_path: Path | None
) -> None:
    """Create a board from an image, or restore an exported bundle."""
    store = BoardStore(data_dir)
    if bundle_path is not None:
        bundle = json.loads(bundle_path.read_text(encoding="utf-8"))
        board = model.board_from_dict(bundle["board"])
        image = base64.b64decode(bundle["image_b64"])
        stored = store.restore_board(board, image)
    else:
        if image_path is None or title is None:
            raise click.UsageError("either --from, or both --title and --image, are required")
        stored = store.put_board(title, image_path.read_bytes())
    click.echo(stored.id)


@main.command()
@DATA_DIR_OPTION
@click.option("--board", "board_id", required=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@domain_errors
def export(data_dir: Path, board_id: str, out: Path | None) -> None:
    """Write a self-contained board bundle (canonical JSON plus image)."""
    store = BoardStore(data_dir)
    board = store.get_board(board_id)
    image = store.get_image(board.image_ref)
    bundle = {
        "board": model.board_to_dict(board),
        "image_b64": base64.b64encode(image).decode("ascii"),
    }
    text = json.dumps(bundle, indent=2) + "\n"
    if out is not None:
        out.write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command("import")
@DATA_DIR_OPTION
@click.option("--board", "board_id", required=True)
@click.option(
    "--thread", "thread_path", required=True, type=click.Path(path_type=Path, exists=True)
)
@click.option(
    "--anchors", "anchors_path", type=click.Path(path_type=Path, exists=True), default=None
)
@click.option("--limit", type=int, default=None, help="Stop after importing N top-level comments.")
@click.option("--report", "report_path", type=click.Path(path_type=Path), default=None)
@domain_errors
def import_cmd(
    data_dir: Path,
    board_id: str,
    thread_path: Path,
    anchors_path: Path | None,
    limit: int | None,
    report_path: Path | None,
) -> None:
    """Import an external discussion thread onto a board."""
    store = BoardStore(data_dir)
    records = parse_thread(thread_path.read_bytes())
    if anchors_path is not None:
        records = apply_anchor_sidecar(records, load_anchor_sidecar(anchors_path.read_bytes()))
    report = import_thread(store, board_id, records, top_level_limit=limit)
    text = json.dumps(report_to_dict(report), indent=2) + "\n"
    if report_path is not None:
        report_path.write_text(text, encoding="utf-8")
    click.echo(text, nl=False)


@main.command()
@DATA_DIR_OPTION
@click.option("--board", "board_id", required=True)
@click.option("--encoding", required=True, type=ENCODING_CHOICES)
@click.option("--category", type=CATEGORY_CHOICES, default=None, help="Category filter.")
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.option(
    "--embed-image",
    is_flag=True,
    default=False,
    help="Inline the board image as base64 instead of referencing its URL.",
)
@domain_errors
def render(
    data_dir: Path,
    board_id: str,
    encoding: str,
    category: str | None,
    out: Path,
    embed_image: bool,
) -> None:
    """Render a patina to an SVG file."""
    store = BoardStore(data_dir)
    board = store.get_board(board_id)
    spec = build_patina(board, encoding, category_filter=category)
    if embed_image:
        image = store.get_image(board.image_ref)
        document = render_svg(
            spec, board, image_data=image, image_media_type=sniff_media_type(image)
        )
    else:
        document = render_svg(spec, board)
    out.write_text(document, encoding="utf-8")
    click.echo(f"wrote {out}", err=True)


@main.command()
@DATA_DIR_OPTION
@click.option("--board", "board_id", required=True)
@click.option(
    "--json", "as_json", flag_value=True, default=True, help="JSON output (default)."
)
@click.option("--table", "as_json", flag_value=False, help="Aligned text output.")
@domain_errors
def stats(data_dir: Path, board_id: str, as_json: bool) -> None:
    """Print corpus statistics for a board."""
    store = BoardStore(data_dir)
    data = stats_to_dict(compute_stats(store.get_board(board_id)))
    if as_json:
        click.echo(json.dumps(data, indent=2))
        return
    for key in (
        "total_comments",
        "total_replies",
        "total_anchors",
        "single_anchor_share",
        "median_anchor_width",
        "median_anchor_height",
        "comment_length_median_chars",
    ):
        click.echo(f"{key:<28} {data[key]}")
    click.echo("category_histogram:")
    for label, count in data["category_histogram"].items():
        click.echo(f"  {label:<26} {count}")
    click.echo("responses_by_category:")
    for label, count in data["responses_by_category"].items():
        click.echo(f"  {label:<26} {count}")
    click.echo("overlap_hotspots:")
    for cell in data["overlap_hotspots"]:
        click.echo(f"  row {cell['row']:<3} col {cell['col']:<3} count {cell['count']}")


if __name__ == "__main__":
    main()
