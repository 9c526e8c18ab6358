// View state for one streamed answer.
//
// The rendered answer text is exactly the concatenation of delta frames;
// nothing is edited client-side. Citation chips exist only for ordinals
// that arrived as citation frames.

import type { AskFrame, CitationFrame, DoneFrame } from "./types";

export type AskStatus = "idle" | "streaming" | "done" | "error";

export const MARKER_RE = /\[\[cite:(\d{1,9})\]\]/g;

export type AnswerSegment =
  | { kind: "text"; text: string }
  | { kind: "chip"; ordinal: number; citation: CitationFrame | null };

export class AskView {
  status: AskStatus = "idle";
  answerText = "";
  chips = new Map<number, CitationFrame>();
  done: DoneFrame | null = null;
  errorMessage: string | null = null;

  start(): void {
    this.status = "streaming";
    this.answerText = "";
    this.chips = new Map();
    this.done = null;
    this.errorMessage = null;
  }

  apply(frame: AskFrame): void {
    switch (frame.type) {
      case "delta":
        this.answerText += frame.text;
        break;
      case "citation":
        this.chips.set(frame.ordinal, frame);
        break;
      case "done":
        this.done = frame;
        this.status = "done";
        break;
      case "error":
        this.errorMessage = frame.message;
        this.status = "error"; // partial answer text is preserved
        break;
    }
  }

  get queryId(): string | null {
    return this.done ? this.done.query_id : null;
  }

  /** True once the stream finished cleanly; the vote widget appears then. */
  get voteReady(): boolean {
    return this.status === "done" && this.queryId !== null;
  }

  /**
   * Split the answer into text and chip segments. A marker with a matching
   * citation frame becomes an active chip; a marker without one stays a
   * disabled chip (the server could not resolve it).
   */
  segments(): AnswerSegment[] {
    const out: AnswerSegment[] = [];
    let last = 0;
    for (const match of this.answerText.matchAll(MARKER_RE)) {
      const ordinal = Number(match[1]);
      if (ordinal === 0) continue;
      if (match.index! > last) {
        out.push({ kind: "text", text: this.answerText.slice(last, match.index) });
      }
      out.push({ kind: "chip", ordinal, citation: this.chips.get(ordinal) ?? null });
      last = match.index! + match[0].length;
    }
    if (last < this.answerText.length) {
      out.push({ kind: "text", text: this.answerText.slice(last) });
    }
    return out;
  }
}
