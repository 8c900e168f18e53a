// Orchestrates one open board: data fetching, the live event feed, and
// optimistic mutations. DOM-free so the sync behavior is testable headless.

import type { ApiClient, EventSourceLike, EventSubscription } from "./api.js";
import { ViewStore } from "./state.js";
import type { BoardMeta, Comment, CommentDraftBody, RenderSpec } from "./types.js";

export type DataListener = () => void;

export class BoardClient {
  readonly store: ViewStore;
  board: BoardMeta | null = null;
  patina: RenderSpec | null = null;

  private lastSequence = 0;
  private subscription: EventSubscription | null = null;
  private listeners: DataListener[] = [];
  private refreshing: Promise<void> | null = null;
  private dirty = false;

  constructor(
    private readonly api: ApiClient,
    private readonly events: EventSourceLike,
    boardId: string,
    baselineMode = false,
  ) {
    this.store = new ViewStore(boardId, baselineMode);
  }

  get boardId(): string {
    return this.store.current.boardId;
  }

  get comments(): Comment[] {
    return this.store.loadedComments;
  }

  onDataChanged(listener: DataListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async open(): Promise<void> {
    this.board = await this.api.getBoard(this.boardId);
    await this.refresh();
    this.subscription = this.events.subscribe(this.boardId, this.lastSequence, (notice) => {
      if (notice.sequence <= this.lastSequence) return;
      this.lastSequence = notice.sequence;
      void this.scheduleRefresh();
    });
  }

  close(): void {
    this.subscription?.close();
    this.subscription = null;
  }

  /** Re-fetch the comment list and the patina for the current view. */
  async refresh(): Promise<void> {
    const view = this.store.current;
    const [comments, patina] = await Promise.all([
      this.api.getComments(this.boardId, view.sort, view.categoryFilter),
      this.api.getPatina(
        this.boardId,
        this.store.effectiveEncoding,
        this.store.effectiveEncoding === "category" ? view.categoryFilter : null,
      ),
    ]);
    this.store.setComments(comments);
    this.patina = patina;
    this.emit();
  }

  /** Coalesce refreshes triggered by bursts of event notices. */
  private scheduleRefresh(): Promise<void> {
    if (this.refreshing) {
      this.dirty = true;
      return this.refreshing;
    }
    this.refreshing = this.refresh().then(async () => {
      while (this.dirty) {
        this.dirty = false;
        await this.refresh();
      }
      this.refreshing = null;
    });
    return this.refreshing;
  }

  /** Resolves once any in-flight refresh settles (test hook). */
  async whenIdle(): Promise<void> {
    while (this.refreshing) {
      await this.refreshing;
    }
  }

  async submitDraft(): Promise<Comment | null> {
    const draft = this.store.current.draft;
    if (!draft || draft.anchors.length === 0) return null;
    const body: CommentDraftBody = {
      anchors: draft.anchors,
      author: draft.author.trim() || null,
      text: draft.text.trim() || null,
      category: draft.category,
    };
    const created = await this.api.postComment(this.boardId, body);
    this.store.clearDraft();
    await this.refresh();
    return created;
  }

  async reply(commentId: string, author: string | null, text: string | null): Promise<void> {
    await this.api.postReply(commentId, { author, text });
    await this.refresh();
  }

  /** Heart button: optimistic bump, reconciled by the next refresh. */
  async like(commentId: string): Promise<void> {
    const bumped = this.comments.map((c) =>
      c.id === commentId ? { ...c, likes: c.likes + 1 } : c,
    );
    this.store.setComments(bumped);
    this.emit();
    await this.api.postLike(commentId);
  }

  async setEncoding(encoding: Parameters<ViewStore["setEncoding"]>[0]): Promise<void> {
    this.store.setEncoding(encoding);
    await this.refresh();
  }

  async setSort(sort: Parameters<ViewStore["setSort"]>[0]): Promise<void> {
    this.store.setSort(sort);
    await this.refresh();
  }

  async setCategoryFilter(category: string | null): Promise<void> {
    this.store.setCategoryFilter(category);
    await this.refresh();
  }

  async setShowComments(show: boolean): Promise<void> {
    this.store.setShowComments(show);
    await this.refresh();
  }
}
