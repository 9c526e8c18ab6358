// Wire types for the ask stream and REST endpoints.

export interface DeltaFrame {
  type: "delta";
  text: string;
}

export interface CitationFrame {
  type: "citation";
  ordinal: number;
  chunk_id: string;
  doc_id: string;
  doc_title: string;
  doc_kind: string;
  start: number; // byte offsets into the document body
  end: number;
  marker_start: number; // char offsets into the final answer text
  marker_end: number;
}

export interface DoneFrame {
  type: "done";
  query_id: string;
  latency_ms: number;
  token_count: number;
  grounding: { total: number; resolved: number; violations: number };
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type AskFrame = DeltaFrame | CitationFrame | DoneFrame | ErrorFrame;

export type AskMode = "research" | "review" | "draft";

export interface AskRequest {
  query: string;
  mode: AskMode;
  magic?: boolean;
  attachments?: string[];
}

export interface DocumentSummary {
  doc_id: string;
  kind: string;
  title: string;
  citation_label: string;
  year: number | null;
  source: string;
  uploaded_by: string | null;
}

export interface DocumentFull extends DocumentSummary {
  body: string;
}

export interface LibraryPage {
  items: DocumentSummary[];
  total: number;
  offset: number;
  limit: number;
}

export interface LibraryQuery {
  kind?: string;
  q?: string;
  sort?: "title" | "year" | "kind";
  dir?: "asc" | "desc";
  year_min?: number;
  year_max?: number;
  offset?: number;
  limit?: number;
}

export type DownvoteReason =
  | "not_specific"
  | "lacked_authorities"
  | "incorrect_or_misleading"
  | "too_simplistic"
  | "overcomplicated"
  | "outdated"
  | "other";

export interface FeedbackRequest {
  query_id: string;
  direction: "up" | "down";
  reason?: DownvoteReason;
  free_text?: string;
}

export const DOWNVOTE_REASONS: { value: DownvoteReason; label: string }[] = [
  { value: "not_specific", label: "Did not address the specific question" },
  { value: "lacked_authorities", label: "Lacked specific cases or legislation" },
  { value: "incorrect_or_misleading", label: "Incorrect or misleading" },
  { value: "too_simplistic", label: "Too simplistic" },
  { value: "overcomplicated", label: "Overcomplicated" },
  { value: "outdated", label: "Outdated information" },
  { value: "other", label: "Other reason" },
];
