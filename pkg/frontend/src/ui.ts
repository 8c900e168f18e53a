// DOM layer: comment list, conversation view, draft form, controls, and the
// drawing surface. Vanilla DOM, rendered from BoardClient state.

import { TemporalPlayback } from "./anim.js";
import type { BoardClient } from "./client.js";
import { DragTracker } from "./geometry.js";
import { OverlayView } from "./overlay.js";
import type { ViewState } from "./state.js";
import { thumbnailStrip } from "./thumbs.js";
import type { Encoding, RenderSpec, SortOrder } from "./types.js";
import { CATEGORIES, ENCODINGS } from "./types.js";

const displayAuthor = (author: string | null) => author ?? "anonymous";

function onlyHoverChanged(a: ViewState, b: ViewState): boolean {
  if (a.hoveredComment === b.hoveredComment) return false;
  const keys = Object.keys(a) as (keyof ViewState)[];
  return keys.every((k) => k === "hoveredComment" || a[k] === b[k]);
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export class BoardPage {
  readonly overlay: OverlayView;
  private playback: TemporalPlayback | null = null;
  private lastFrame = 0;
  private animationHandle = 0;
  private readonly drag = new DragTracker();
  private lastState: ViewState | null = null;
  private renderedSpec: RenderSpec | null = null;

  private titleEl: HTMLElement;
  private controlsEl: HTMLElement;
  private stackEl: HTMLElement;
  private imageEl: HTMLImageElement;
  private svgEl: SVGSVGElement;
  private previewEl: HTMLElement;
  private playbackEl: HTMLElement;
  private listEl: HTMLOListElement;
  private formSlot: HTMLElement;
  private conversationSlot: HTMLElement;

  constructor(
    private readonly client: BoardClient,
    private readonly imageUrl: string,
    root: HTMLElement,
  ) {
    root.innerHTML = "";
    const header = el("header");
    this.titleEl = el("h1", "board-title");
    this.controlsEl = el("div", "controls");
    header.append(this.titleEl, this.controlsEl);

    const main = el("main");
    const canvas = el("section", "canvas");
    this.stackEl = el("div", "image-stack");
    this.imageEl = document.createElement("img");
    this.imageEl.className = "board-image";
    this.imageEl.draggable = false;
    this.svgEl = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svgEl.classList.add("overlay");
    this.previewEl = el("div", "drag-preview");
    this.previewEl.style.display = "none";
    this.stackEl.append(this.imageEl, this.svgEl, this.previewEl);
    this.playbackEl = el("div", "playback");
    canvas.append(this.stackEl, this.playbackEl);

    const sidebar = el("aside", "sidebar");
    this.formSlot = el("div", "form-slot");
    this.conversationSlot = el("div", "conversation-slot");
    this.listEl = document.createElement("ol");
    this.listEl.className = "comment-list";
    sidebar.append(this.formSlot, this.conversationSlot, this.listEl);

    main.append(canvas, sidebar);
    root.append(header, main);

    this.overlay = new OverlayView(this.svgEl, this.imageEl, {
      onHover: (id) => this.client.store.hover(id),
      onSelect: (id) => this.client.store.select(id),
    });

    this.imageEl.src = this.imageUrl;
    this.wireDrawing();
    // Hover-only changes just retarget the highlight; anything else
    // re-renders, so the node under the cursor never gets rebuilt mid-hover.
    this.client.store.subscribe((state) => {
      const previous = this.lastState;
      this.lastState = state;
      if (previous && onlyHoverChanged(previous, state)) {
        this.applyHighlight(state);
        return;
      }
      this.render();
    });
    this.client.onDataChanged(() => this.render());
  }

  private applyHighlight(state: ViewState): void {
    this.overlay.setHighlight(state.hoveredComment ?? state.selectedComment);
    for (const item of this.listEl.querySelectorAll<HTMLElement>(".comment-item")) {
      item.classList.toggle(
        "highlighted",
        item.dataset.commentId === state.hoveredComment,
      );
    }
  }

  // Anchor drawing

  private imagePoint(event: PointerEvent): { x: number; y: number } {
    const box = this.stackEl.getBoundingClientRect();
    return { x: event.clientX - box.left, y: event.clientY - box.top };
  }

  private displayedSize(): { w: number; h: number } {
    const box = this.stackEl.getBoundingClientRect();
    const board = this.client.board;
    return {
      w: box.width || board?.image_width_px || 1,
      h: box.height || board?.image_height_px || 1,
    };
  }

  private wireDrawing(): void {
    this.stackEl.addEventListener("pointerdown", (event) => {
      if (!this.client.store.drawingEnabled) return;
      const point = this.imagePoint(event);
      this.drag.begin(point.x, point.y);
    });
    this.stackEl.addEventListener("pointermove", (event) => {
      if (!this.drag.active) return;
      const point = this.imagePoint(event);
      this.drag.move(point.x, point.y);
      this.renderDragPreview();
    });
    this.stackEl.addEventListener("pointerup", (event) => {
      if (!this.drag.active) return;
      const point = this.imagePoint(event);
      const size = this.displayedSize();
      const anchor = this.drag.finish(point.x, point.y, size.w, size.h);
      this.previewEl.style.display = "none";
      if (anchor) this.client.store.addDraftAnchor(anchor);
    });
    this.stackEl.addEventListener("pointerleave", () => {
      this.drag.cancel();
      this.previewEl.style.display = "none";
    });
  }

  private renderDragPreview(): void {
    const gesture = this.drag.preview();
    if (!gesture) return;
    const left = Math.min(gesture.startX, gesture.endX);
    const top = Math.min(gesture.startY, gesture.endY);
    this.previewEl.style.display = "block";
    this.previewEl.style.left = `${left}px`;
    this.previewEl.style.top = `${top}px`;
    this.previewEl.style.width = `${Math.abs(gesture.endX - gesture.startX)}px`;
    this.previewEl.style.height = `${Math.abs(gesture.endY - gesture.startY)}px`;
  }

  // Rendering

  render(): void {
    const board = this.client.board;
    if (board) this.titleEl.textContent = board.title;
    this.renderControls();
    this.renderOverlay();
    this.renderList();
    this.renderForm();
    this.renderConversation();
    this.renderPlaybackBar();
  }

  private renderOverlay(): void {
    const board = this.client.board;
    const spec = this.client.patina;
    if (!board || !spec || this.client.store.current.baselineMode) {
      this.overlay.clear();
      this.renderedSpec = null;
      if (this.imageEl) this.imageEl.style.filter = "";
      return;
    }
    if (spec !== this.renderedSpec) {
      this.overlay.render(spec, board.image_width_px, board.image_height_px);
      this.renderedSpec = spec;
      this.playback = null;
      this.syncAnimationLoop(spec.encoding);
    }
    this.overlay.setHighlight(
      this.client.store.current.hoveredComment ?? this.client.store.current.selectedComment,
    );
  }

  private renderControls(): void {
    const view = this.client.store.current;
    this.controlsEl.innerHTML = "";
    if (view.baselineMode) {
      this.controlsEl.append(el("span", "baseline-badge", "baseline view"));
    } else {
      const encodingSelect = document.createElement("select");
      encodingSelect.className = "encoding-select";
      for (const encoding of ENCODINGS) {
        const option = document.createElement("option");
        option.value = encoding;
        option.textContent = encoding;
        option.selected = encoding === view.encoding;
        encodingSelect.appendChild(option);
      }
      encodingSelect.addEventListener("change", () => {
        void this.client.setEncoding(encodingSelect.value as Encoding);
      });

      const toggleLabel = el("label", "show-comments");
      const toggle = document.createElement("input");
      toggle.type = "checkbox";
      toggle.checked = view.showComments;
      toggle.addEventListener("change", () => {
        void this.client.setShowComments(toggle.checked);
      });
      toggleLabel.append(toggle, document.createTextNode(" show comments"));
      this.controlsEl.append(encodingSelect, toggleLabel);
    }

    const sortSelect = document.createElement("select");
    sortSelect.className = "sort-select";
    for (const sort of ["newest_first", "popularity", "responses"] as SortOrder[]) {
      const option = document.createElement("option");
      option.value = sort;
      option.textContent = sort.replace("_", " ");
      option.selected = sort === view.sort;
      sortSelect.appendChild(option);
    }
    sortSelect.addEventListener("change", () => {
      void this.client.setSort(sortSelect.value as SortOrder);
    });

    const categorySelect = document.createElement("select");
    categorySelect.className = "category-select";
    const all = document.createElement("option");
    all.value = "";
    all.textContent = "all categories";
    categorySelect.appendChild(all);
    for (const category of CATEGORIES) {
      const option = document.createElement("option");
      option.value = category;
      option.textContent = category.replace("_", " ");
      option.selected = category === view.categoryFilter;
      categorySelect.appendChild(option);
    }
    categorySelect.addEventListener("change", () => {
      void this.client.setCategoryFilter(categorySelect.value || null);
    });

    this.controlsEl.append(sortSelect, categorySelect);
  }

  private renderList(): void {
    const view = this.client.store.current;
    this.listEl.innerHTML = "";
    for (const comment of this.client.comments) {
      const item = el("li", "comment-item");
      item.dataset.commentId = comment.id;
      if (comment.id === view.hoveredComment) item.classList.add("highlighted");

      if (this.client.store.thumbnailsEnabled) {
        item.appendChild(thumbnailStrip(comment.anchors, this.imageUrl));
      }
      const body = el("div", "comment-body");
      const meta = el("div", "comment-meta");
      meta.append(
        el("span", "author", displayAuthor(comment.author)),
        el("span", "when", new Date(comment.created_at).toLocaleString()),
      );
      if (comment.category) {
        meta.appendChild(el("span", `badge badge-${comment.category}`, comment.category));
      }
      body.appendChild(meta);
      if (comment.text) body.appendChild(el("p", "comment-text", comment.text));
      body.appendChild(
        el("div", "comment-counts", `♥ ${comment.likes} · ${comment.replies.length} replies`),
      );
      item.appendChild(body);

      item.addEventListener("pointerenter", () => this.client.store.hover(comment.id));
      item.addEventListener("pointerleave", () => this.client.store.hover(null));
      item.addEventListener("click", () => this.client.store.select(comment.id));
      this.listEl.appendChild(item);
    }
  }

  private renderForm(): void {
    const view = this.client.store.current;
    this.formSlot.innerHTML = "";
    if (!view.draft || view.baselineMode) return;

    const form = el("form", "comment-form");
    form.appendChild(el("h2", "", "New anchored comment"));
    form.appendChild(thumbnailStrip(view.draft.anchors, this.imageUrl, "thumb draft-thumb"));
    form.appendChild(
      el("p", "hint", "Draw more rectangles to add anchors to this comment."),
    );

    const author = document.createElement("input");
    author.placeholder = "name (optional)";
    author.value = view.draft.author;
    author.addEventListener("input", () =>
      this.client.store.updateDraftFields({ author: author.value }),
    );

    const text = document.createElement("textarea");
    text.placeholder = "comment (optional)";
    text.value = view.draft.text;
    text.addEventListener("input", () =>
      this.client.store.updateDraftFields({ text: text.value }),
    );

    const category = document.createElement("select");
    const none = document.createElement("option");
    none.value = "";
    none.textContent = "no category";
    category.appendChild(none);
    for (const label of CATEGORIES) {
      const option = document.createElement("option");
      option.value = label;
      option.textContent = label.replace("_", " ");
      option.selected = label === view.draft.category;
      category.appendChild(option);
    }
    category.addEventListener("change", () =>
      this.client.store.updateDraftFields({ category: category.value || null }),
    );

    const submit = el("button", "submit", "submit");
    submit.type = "submit";
    const cancel = el("button", "cancel", "discard");
    cancel.type = "button";
    cancel.addEventListener("click", () => this.client.store.clearDraft());
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.client.submitDraft();
    });

    form.append(author, text, category, submit, cancel);
    this.formSlot.appendChild(form);
  }

  private renderConversation(): void {
    const view = this.client.store.current;
    this.conversationSlot.innerHTML = "";
    const comment = this.client.comments.find((c) => c.id === view.selectedComment);
    if (!comment) return;

    const panel = el("section", "conversation");
    const head = el("div", "conversation-head");
    head.append(
      el("span", "author", displayAuthor(comment.author)),
      el("button", "close", "×"),
    );
    head.querySelector("button")!.addEventListener("click", () =>
      this.client.store.select(null),
    );
    panel.appendChild(head);
    if (comment.text) panel.appendChild(el("p", "comment-text", comment.text));

    const heart = el("button", "heart", `♥ ${comment.likes}`);
    heart.addEventListener("click", () => void this.client.like(comment.id));
    panel.appendChild(heart);

    const replies = el("ul", "replies");
    for (const reply of comment.replies) {
      const item = el("li", "reply");
      item.append(
        el("span", "author", displayAuthor(reply.author)),
        el("p", "reply-text", reply.text ?? ""),
      );
      replies.appendChild(item);
    }
    panel.appendChild(replies);

    const form = el("form", "reply-form");
    const author = document.createElement("input");
    author.placeholder = "name (optional)";
    const text = document.createElement("textarea");
    text.placeholder = "reply (optional)";
    const send = el("button", "", "reply");
    send.type = "submit";
    form.append(author, text, send);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.client.reply(comment.id, author.value.trim() || null, text.value.trim() || null);
    });
    panel.appendChild(form);

    this.conversationSlot.appendChild(panel);
  }

  // Temporal playback and jitter animation

  private renderPlaybackBar(): void {
    const spec = this.client.patina;
    this.playbackEl.innerHTML = "";
    if (!spec || spec.encoding !== "temporal" || spec.rect_marks.length === 0) {
      this.playback = null;
      return;
    }
    const fade = spec.rect_marks[0]!.animation;
    if (fade?.kind !== "fade") return;
    if (!this.playback) {
      const segments = Math.max(...spec.rect_marks.map((m) =>
        m.animation?.kind === "fade" ? m.animation.segment_index : 1,
      ));
      this.playback = new TemporalPlayback(segments, fade.cycle_seconds, fade.fade_seconds);
    }

    const start = el("button", "playback-start", "start");
    start.addEventListener("click", () => this.playback?.start());
    const pause = el("button", "playback-pause", "pause");
    pause.addEventListener("click", () => this.playback?.pause());
    const replay = el("button", "playback-replay", "replay");
    replay.addEventListener("click", () => this.playback?.replay());

    const progress = document.createElement("progress");
    progress.max = 1;
    progress.value = this.playback.state().progress;
    progress.className = "playback-progress";

    this.playbackEl.append(start, pause, replay, progress);
  }

  private syncAnimationLoop(encoding: string): void {
    if (typeof requestAnimationFrame !== "function") return;
    cancelAnimationFrame(this.animationHandle);
    if (encoding !== "responses" && encoding !== "temporal") {
      return;
    }
    this.lastFrame = performance.now();
    const step = (now: number) => {
      const dt = (now - this.lastFrame) / 1000;
      this.lastFrame = now;
      if (encoding === "responses") {
        this.overlay.animateJitter(now / 1000);
      } else if (this.playback) {
        const state = this.playback.tick(dt);
        // Store updates only on segment/run transitions; per-frame progress
        // writes straight to the <progress> element to avoid re-render churn.
        const prev = this.client.store.current.temporalPlayback;
        if (prev.playing !== state.playing || prev.segmentIndex !== state.segmentIndex) {
          this.client.store.setTemporalPlayback({
            playing: state.playing,
            segmentIndex: state.segmentIndex,
            progress: state.progress,
          });
        }
        if (state.playing) {
          this.overlay.animateFade(state.t);
        } else if (state.t === 0 || state.progress >= 1) {
          this.overlay.resetFade();
        }
        const progress = this.playbackEl.querySelector("progress");
        if (progress) progress.value = state.progress;
      }
      this.animationHandle = requestAnimationFrame(step);
    };
    this.animationHandle = requestAnimationFrame(step);
  }
}
