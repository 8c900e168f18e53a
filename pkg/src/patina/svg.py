"""Deterministic SVG export of a RenderSpec.

The same spec always yields byte-identical output. Animations are written
as declarative data- attributes so a static viewer shows the resting
state; the live web client interprets them.
"""

from __future__ import annotations

import base64
from xml.sax.saxutils import escape

from .engine import FadeSchedule, Jitter, LineMark, RectMark, RenderSpec, fmt_number
from .model import Board

SATURATION_FILTER_ID = "chart-saturation"


def _attr(value: str) -> str:
    return escape(value, {'"': "&quot;"})


def _rect_element(mark: RectMark) -> str:
    parts = [
        f'<rect x="{fmt_number(mark.rect_px.x)}" y="{fmt_number(mark.rect_px.y)}"',
        f'width="{fmt_number(mark.rect_px.w)}" height="{fmt_number(mark.rect_px.h)}"',
        f'fill="{_attr(mark.fill_color)}" fill-opacity="{fmt_number(mark.fill_opacity)}"',
        f'stroke="{_attr(mark.stroke_color)}" stroke-opacity="{fmt_number(mark.stroke_opacity)}"',
        f'stroke-width="{fmt_number(mark.stroke_width_px)}"',
        f'data-comment-id="{_attr(mark.comment_id)}"',
    ]
    anim = mark.animation
    if isinstance(anim, Jitter):
        parts.append(
            f'data-animation="jitter" data-amplitude-px="{fmt_number(anim.amplitude_px)}" '
            f'data-frequency-hz="{fmt_number(anim.frequency_hz)}" '
            f'data-phase-seed="{anim.phase_seed}"'
        )
    elif isinstance(anim, FadeSchedule):
        parts.append(
            f'data-animation="fade" data-segment-index="{anim.segment_index}" '
            f'data-cycle-seconds="{fmt_number(anim.cycle_seconds)}" '
            f'data-fade-seconds="{fmt_number(anim.fade_seconds)}"'
        )
    return " ".join(parts) + "/>"


def _line_element(mark: LineMark) -> str:
    parts = [
        f'<line x1="{fmt_number(mark.from_px[0])}" y1="{fmt_number(mark.from_px[1])}"',
        f'x2="{fmt_number(mark.to_px[0])}" y2="{fmt_number(mark.to_px[1])}"',
        f'stroke="{_attr(mark.style.color)}" stroke-opacity="{fmt_number(mark.style.opacity)}"',
        f'stroke-width="{fmt_number(mark.style.width_px)}"',
    ]
    if mark.style.dash == "dotted":
        dash = f"{fmt_number(mark.style.width_px)} {fmt_number(mark.style.width_px * 2)}"
        parts.append(f'stroke-dasharray="{dash}"')
    parts.append(f'data-comment-id="{_attr(mark.comment_id)}"')
    return " ".join(parts) + "/>"


def render_svg(
    spec: RenderSpec,
    board: Board,
    image_href: str | None = None,
    image_data: bytes | None = None,
    image_media_type: str = "image/png",
) -> str:
    """Emit an SVG 1.1 document for the spec over the board's image.

    The image is referenced by URL unless raw bytes are supplied, in which
    case they are inlined as a base64 data URI.
    """
    width = board.image_width_px
    height = board.image_height_px
    if image_data is not None:
        href = f"data:{image_media_type};base64,{base64.b64encode(image_data).decode('ascii')}"
    else:
        href = image_href or f"/api/boards/{board.id}/image"

    desaturated = spec.background_saturation < 1.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if desaturated:
        lines.append(
            f'<defs><filter id="{SATURATION_FILTER_ID}">'
            f'<feColorMatrix type="saturate" values="{fmt_number(spec.background_saturation)}"/>'
            "</filter></defs>"
        )
    image_attrs = (
        f'href="{_attr(href)}" x="0" y="0" width="{width}" height="{height}" '
        'preserveAspectRatio="none"'
    )
    if desaturated:
        image_attrs += f' filter="url(#{SATURATION_FILTER_ID})"'
    lines.append(f"<image {image_attrs}/>")

    if spec.rect_marks or spec.line_marks:
        lines.append(f'<g class="patina" opacity="{fmt_number(spec.group_opacity)}">')
        for rect in spec.rect_marks:
            lines.append(_rect_element(rect))
        for line in spec.line_marks:
            lines.append(_line_element(line))
        lines.append("</g>")

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
