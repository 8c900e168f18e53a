// Thin fetch client for the board service. The UI talks to these endpoints
// and to nothing else.

import type {
  BoardMeta,
  Comment,
  CommentDraftBody,
  EventNotice,
  RenderSpec,
  SortOrder,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface EventSubscription {
  close(): void;
}

export type NoticeHandler = (notice: EventNotice) => void;

export interface EventSourceLike {
  subscribe(boardId: string, since: number, onNotice: NoticeHandler): EventSubscription;
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = (await response.json()) as { code?: string; detail?: string };
      detail = body.code ? `${body.code}: ${body.detail ?? ""}` : detail;
    } catch {
      // non-JSON error body; keep the status code
    }
    throw new Error(`request failed: ${detail}`);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly base = "",
  ) {}

  getBoard(boardId: string): Promise<BoardMeta> {
    return this.get(`/api/boards/${boardId}`);
  }

  imageUrl(boardId: string): string {
    return `${this.base}/api/boards/${boardId}/image`;
  }

  getComments(
    boardId: string,
    sort: SortOrder = "newest_first",
    category: string | null = null,
  ): Promise<Comment[]> {
    const params = new URLSearchParams({ sort });
    if (category) params.set("category", category);
    return this.get(`/api/boards/${boardId}/comments?${params}`);
  }

  getPatina(boardId: string, encoding: string, category: string | null = null): Promise<RenderSpec> {
    const params = new URLSearchParams({ encoding });
    if (category) params.set("category", category);
    return this.get(`/api/boards/${boardId}/patina?${params}`);
  }

  postComment(boardId: string, draft: CommentDraftBody): Promise<Comment> {
    return this.post(`/api/boards/${boardId}/comments`, draft);
  }

  postReply(commentId: string, body: { author?: string | null; text?: string | null }): Promise<Comment> {
    return this.post(`/api/comments/${commentId}/replies`, body);
  }

  postLike(commentId: string): Promise<Comment> {
    return this.post(`/api/comments/${commentId}/like`, null);
  }

  private async get<T>(path: string): Promise<T> {
    return asJson<T>(await this.fetchImpl(this.base + path));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    return asJson<T>(
      await this.fetchImpl(this.base + path, {
        method: "POST",
        headers: body === null ? undefined : { "content-type": "application/json" },
        body: body === null ? undefined : JSON.stringify(body),
      }),
    );
  }
}

/** Browser EventSource-backed subscription with a resumable cursor. */
export class SseEvents implements EventSourceLike {
  constructor(private readonly base = "") {}

  subscribe(boardId: string, since: number, onNotice: NoticeHandler): EventSubscription {
    const source = new EventSource(
      `${this.base}/api/boards/${boardId}/events?since=${since}`,
    );
    const handler = (event: MessageEvent) => {
      onNotice(JSON.parse(event.data as string) as EventNotice);
    };
    for (const kind of ["comment_added", "reply_added", "like_added"]) {
      source.addEventListener(kind, handler as EventListener);
    }
    return { close: () => source.close() };
  }
}
