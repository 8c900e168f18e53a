// Thumbnails are cropped client-side from the board image with CSS
// background math driven by the anchor fractions; no canvas, no extra
// requests.

import type { AnchorRect } from "./types.js";

export interface CropStyle {
  backgroundImage: string;
  backgroundSize: string;
  backgroundPosition: string;
}

/**
 * CSS that shows exactly the anchor's region inside a box of the given
 * size. Percentage background-position interpolates between the image's
 * left/top (0%) and right/bottom (100%) alignment, hence the (pos / (1 -
 * size)) correction.
 */
export function cropStyle(anchor: AnchorRect, imageUrl: string): CropStyle {
  const posX = anchor.w >= 1 ? 0 : (anchor.x / (1 - anchor.w)) * 100;
  const posY = anchor.h >= 1 ? 0 : (anchor.y / (1 - anchor.h)) * 100;
  return {
    backgroundImage: `url("${imageUrl}")`,
    backgroundSize: `${100 / anchor.w}% ${100 / anchor.h}%`,
    backgroundPosition: `${posX}% ${posY}%`,
  };
}

/** One thumbnail element per anchor, in anchor order. */
export function thumbnailStrip(
  anchors: AnchorRect[],
  imageUrl: string,
  className = "thumb",
): HTMLElement {
  const strip = document.createElement("div");
  strip.className = "thumb-strip";
  for (const anchor of anchors) {
    const thumb = document.createElement("div");
    thumb.className = className;
    const style = cropStyle(anchor, imageUrl);
    thumb.style.backgroundImage = style.backgroundImage;
    thumb.style.backgroundSize = style.backgroundSize;
    thumb.style.backgroundPosition = style.backgroundPosition;
    strip.appendChild(thumb);
  }
  return strip;
}
