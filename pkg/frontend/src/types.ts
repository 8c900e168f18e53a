// Wire types mirroring the server's canonical JSON.

export interface AnchorRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface Reply {
  id: string;
  author: string | null;
  text: string | null;
  created_at: string;
}

export interface Comment {
  id: string;
  author: string | null;
  text: string | null;
  category: string | null;
  anchors: AnchorRect[];
  likes: number;
  replies: Reply[];
  created_at: string;
}

export interface BoardMeta {
  id: string;
  title: string;
  image_ref: string;
  image_width_px: number;
  image_height_px: number;
  created_at: string;
  comment_count: number;
}

export interface PixelRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface JitterAnimation {
  kind: "jitter";
  amplitude_px: number;
  frequency_hz: number;
  phase_seed: number;
}

export interface FadeAnimation {
  kind: "fade";
  segment_index: number;
  cycle_seconds: number;
  fade_seconds: number;
}

export interface RectMark {
  rect_px: PixelRect;
  fill_color: string;
  fill_opacity: number;
  stroke_color: string;
  stroke_opacity: number;
  stroke_width_px: number;
  animation: JitterAnimation | FadeAnimation | null;
  comment_id: string;
}

export interface LineMark {
  from_px: { x: number; y: number };
  to_px: { x: number; y: number };
  style: { color: string; width_px: number; opacity: number; dash: string };
  comment_id: string;
}

export interface RenderSpec {
  rect_marks: RectMark[];
  line_marks: LineMark[];
  group_opacity: number;
  background_saturation: number;
  encoding: string;
  legend: Record<string, string>;
}

export interface EventNotice {
  board_id: string;
  sequence: number;
  kind: "comment_added" | "reply_added" | "like_added";
  entity_id: string;
}

export type SortOrder = "newest_first" | "popularity" | "responses";

export const ENCODINGS = [
  "activity",
  "category",
  "popularity",
  "responses",
  "temporal",
  "relations",
  "none",
] as const;
export type Encoding = (typeof ENCODINGS)[number];

export const CATEGORIES = [
  "observations",
  "hypotheses",
  "questions",
  "critique",
  "context",
  "personal_stories",
  "opinions",
  "proposals",
] as const;

export interface CommentDraftBody {
  author?: string | null;
  text?: string | null;
  category?: string | null;
  anchors: AnchorRect[];
}
