// View state for one open board. All invariants live here so the DOM layer
// can stay dumb: baseline mode pins the encoding to "none" and disables
// drawing/thumbnails; hovered/selected ids must resolve against the loaded
// comment list and are cleared silently when they go stale.

import type { AnchorRect, Comment, Encoding, SortOrder } from "./types.js";

export interface DraftState {
  anchors: AnchorRect[];
  author: string;
  text: string;
  category: string | null;
}

export interface TemporalUiState {
  playing: boolean;
  segmentIndex: number;
  progress: number;
}

export interface ViewState {
  boardId: string;
  encoding: Encoding;
  showComments: boolean;
  sort: SortOrder;
  categoryFilter: string | null;
  hoveredComment: string | null;
  selectedComment: string | null;
  draft: DraftState | null;
  temporalPlayback: TemporalUiState;
  baselineMode: boolean;
}

export type Listener = (state: ViewState) => void;

const SORT_BY_ENCODING: Partial<Record<Encoding, SortOrder>> = {
  popularity: "popularity",
  responses: "responses",
};

export class ViewStore {
  private state: ViewState;
  private comments: Comment[] = [];
  private listeners: Listener[] = [];

  constructor(boardId: string, baselineMode = false) {
    this.state = {
      boardId,
      encoding: baselineMode ? "none" : "activity",
      showComments: true,
      sort: "newest_first",
      categoryFilter: null,
      hoveredComment: null,
      selectedComment: null,
      draft: null,
      temporalPlayback: { playing: false, segmentIndex: 1, progress: 0 },
      baselineMode,
    };
  }

  get current(): ViewState {
    return this.state;
  }

  get loadedComments(): Comment[] {
    return this.comments;
  }

  get drawingEnabled(): boolean {
    return !this.state.baselineMode;
  }

  get thumbnailsEnabled(): boolean {
    return !this.state.baselineMode;
  }

  /** Effective encoding for patina fetches and overlay rendering. */
  get effectiveEncoding(): Encoding {
    if (this.state.baselineMode || !this.state.showComments) return "none";
    return this.state.encoding;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    this.emit();
  }

  setComments(comments: Comment[]): void {
    this.comments = comments;
    const known = new Set(comments.map((c) => c.id));
    // Stale ids after a live update are cleared silently.
    const hovered = this.state.hoveredComment;
    const selected = this.state.selectedComment;
    this.patch({
      hoveredComment: hovered && known.has(hovered) ? hovered : null,
      selectedComment: selected && known.has(selected) ? selected : null,
    });
  }

  setEncoding(encoding: Encoding): void {
    if (this.state.baselineMode) return;
    const sort = SORT_BY_ENCODING[encoding] ?? this.state.sort;
    this.patch({ encoding, sort });
  }

  setSort(sort: SortOrder): void {
    this.patch({ sort });
  }

  setCategoryFilter(category: string | null): void {
    this.patch({ categoryFilter: category });
  }

  setShowComments(show: boolean): void {
    this.patch({ showComments: show });
  }

  hover(commentId: string | null): void {
    if (commentId && !this.comments.some((c) => c.id === commentId)) {
      commentId = null;
    }
    this.patch({ hoveredComment: commentId });
  }

  select(commentId: string | null): void {
    if (commentId && !this.comments.some((c) => c.id === commentId)) {
      commentId = null;
    }
    this.patch({ selectedComment: commentId });
  }

  /** Append a drawn anchor, opening the draft form on the first one. */
  addDraftAnchor(anchor: AnchorRect): void {
    if (!this.drawingEnabled) return;
    const draft = this.state.draft ?? { anchors: [], author: "", text: "", category: null };
    this.patch({ draft: { ...draft, anchors: [...draft.anchors, anchor] } });
  }

  updateDraftFields(fields: Partial<Omit<DraftState, "anchors">>): void {
    if (!this.state.draft) return;
    this.patch({ draft: { ...this.state.draft, ...fields } });
  }

  clearDraft(): void {
    this.patch({ draft: null });
  }

  setTemporalPlayback(playback: TemporalUiState): void {
    this.patch({ temporalPlayback: playback });
  }
}
