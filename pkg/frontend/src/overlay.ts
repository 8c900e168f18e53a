// Renders a fetched RenderSpec into the SVG overlay. Every geometry and
// style attribute is copied verbatim from the spec; this module invents no
// styling of its own. Marks arrive pre-sorted (largest first), so later
// siblings paint on top and SVG hit-testing naturally gives hover to the
// topmost (smallest) anchor under the cursor.

import { fadeOpacity, jitterOffset } from "./anim.js";
import type { RectMark, RenderSpec } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const SATURATION_FILTER_ID = "overlay-saturation";

export interface OverlayHandlers {
  onHover?(commentId: string | null): void;
  onSelect?(commentId: string): void;
}

export class OverlayView {
  private group: SVGGElement | null = null;
  private rectsByElement = new Map<SVGRectElement, RectMark>();
  private spec: RenderSpec | null = null;

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly image: HTMLImageElement | SVGImageElement | null,
    private readonly handlers: OverlayHandlers = {},
  ) {}

  get currentSpec(): RenderSpec | null {
    return this.spec;
  }

  render(spec: RenderSpec, widthPx: number, heightPx: number): void {
    this.spec = spec;
    this.svg.setAttribute("viewBox", `0 0 ${widthPx} ${heightPx}`);
    this.clear();

    if (this.image) {
      this.image.style.filter =
        spec.background_saturation < 1 ? `saturate(${spec.background_saturation})` : "";
    }
    if (spec.rect_marks.length === 0 && spec.line_marks.length === 0) {
      return;
    }

    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "patina");
    group.setAttribute("opacity", String(spec.group_opacity));

    for (const mark of spec.rect_marks) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(mark.rect_px.x));
      rect.setAttribute("y", String(mark.rect_px.y));
      rect.setAttribute("width", String(mark.rect_px.w));
      rect.setAttribute("height", String(mark.rect_px.h));
      rect.setAttribute("fill", mark.fill_color);
      rect.setAttribute("fill-opacity", String(mark.fill_opacity));
      rect.setAttribute("stroke", mark.stroke_color);
      rect.setAttribute("stroke-opacity", String(mark.stroke_opacity));
      rect.setAttribute("stroke-width", String(mark.stroke_width_px));
      rect.setAttribute("data-comment-id", mark.comment_id);
      if (this.handlers.onHover) {
        rect.addEventListener("pointerenter", () => this.handlers.onHover!(mark.comment_id));
        rect.addEventListener("pointerleave", () => this.handlers.onHover!(null));
      }
      if (this.handlers.onSelect) {
        rect.addEventListener("click", (event) => {
          event.stopPropagation();
          this.handlers.onSelect!(mark.comment_id);
        });
      }
      this.rectsByElement.set(rect, mark);
      group.appendChild(rect);
    }

    for (const mark of spec.line_marks) {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(mark.from_px.x));
      line.setAttribute("y1", String(mark.from_px.y));
      line.setAttribute("x2", String(mark.to_px.x));
      line.setAttribute("y2", String(mark.to_px.y));
      line.setAttribute("stroke", mark.style.color);
      line.setAttribute("stroke-opacity", String(mark.style.opacity));
      line.setAttribute("stroke-width", String(mark.style.width_px));
      if (mark.style.dash === "dotted") {
        line.setAttribute(
          "stroke-dasharray",
          `${mark.style.width_px} ${mark.style.width_px * 2}`,
        );
      }
      line.setAttribute("data-comment-id", mark.comment_id);
      group.appendChild(line);
    }

    this.group = group;
    this.svg.appendChild(group);
  }

  clear(): void {
    this.rectsByElement.clear();
    if (this.group) {
      this.group.remove();
      this.group = null;
    }
  }

  /** Outline the hovered/selected comment's anchors. */
  setHighlight(commentId: string | null): void {
    for (const [rect, mark] of this.rectsByElement) {
      if (commentId !== null && mark.comment_id === commentId) {
        rect.classList.add("highlighted");
      } else {
        rect.classList.remove("highlighted");
      }
    }
  }

  /** Advance jitter animations to playback time t (seconds since mount). */
  animateJitter(t: number): void {
    for (const [rect, mark] of this.rectsByElement) {
      if (mark.animation?.kind !== "jitter") continue;
      const { dx, dy } = jitterOffset(mark.animation, t);
      rect.setAttribute("transform", `translate(${dx} ${dy})`);
    }
  }

  /** Apply the temporal fade schedule at playback time t (seconds). */
  animateFade(t: number): void {
    for (const [rect, mark] of this.rectsByElement) {
      if (mark.animation?.kind !== "fade") continue;
      rect.setAttribute("opacity", String(fadeOpacity(mark.animation, t)));
    }
  }

  /** Reset per-mark fade opacity (resting state shows everything). */
  resetFade(): void {
    for (const [rect, mark] of this.rectsByElement) {
      if (mark.animation?.kind === "fade") {
        rect.removeAttribute("opacity");
      }
    }
  }
}
