// Drag-to-rectangle math. Pointer coordinates are in displayed-image pixels;
// anchors are stored as fractions of the image so they survive resizing.

import type { AnchorRect } from "./types.js";

export const DRAG_THRESHOLD_PX = 4;

export interface DragGesture {
  startX: number;
  startY: number;
  endX: number;
  endY: number;
}

const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

/**
 * Normalize a completed drag into an anchor rectangle, clamped to the image
 * box. Returns null for sub-threshold drags (accidental clicks): the drag
 * must span at least DRAG_THRESHOLD_PX in *both* dimensions.
 */
export function dragToAnchor(
  gesture: DragGesture,
  imageWidthPx: number,
  imageHeightPx: number,
): AnchorRect | null {
  const width = Math.abs(gesture.endX - gesture.startX);
  const height = Math.abs(gesture.endY - gesture.startY);
  if (width < DRAG_THRESHOLD_PX || height < DRAG_THRESHOLD_PX) {
    return null;
  }
  const left = clamp01(Math.min(gesture.startX, gesture.endX) / imageWidthPx);
  const top = clamp01(Math.min(gesture.startY, gesture.endY) / imageHeightPx);
  const right = clamp01(Math.max(gesture.startX, gesture.endX) / imageWidthPx);
  const bottom = clamp01(Math.max(gesture.startY, gesture.endY) / imageHeightPx);
  if (right - left <= 0 || bottom - top <= 0) {
    return null;
  }
  return { x: left, y: top, w: right - left, h: bottom - top };
}

/** Tracks one pointer drag; feed it pointerdown/move/up coordinates. */
export class DragTracker {
  private start: { x: number; y: number } | null = null;
  private current: { x: number; y: number } | null = null;

  begin(x: number, y: number): void {
    this.start = { x, y };
    this.current = { x, y };
  }

  move(x: number, y: number): void {
    if (this.start) {
      this.current = { x, y };
    }
  }

  /** Live gesture while the pointer is down, for the rubber-band preview. */
  preview(): DragGesture | null {
    if (!this.start || !this.current) return null;
    return {
      startX: this.start.x,
      startY: this.start.y,
      endX: this.current.x,
      endY: this.current.y,
    };
  }

  finish(x: number, y: number, imageWidthPx: number, imageHeightPx: number): AnchorRect | null {
    if (!this.start) return null;
    const gesture: DragGesture = {
      startX: this.start.x,
      startY: this.start.y,
      endX: x,
      endY: y,
    };
    this.start = null;
    this.current = null;
    return dragToAnchor(gesture, imageWidthPx, imageHeightPx);
  }

  cancel(): void {
    this.start = null;
    this.current = null;
  }

  get active(): boolean {
    return this.start !== null;
  }
}
