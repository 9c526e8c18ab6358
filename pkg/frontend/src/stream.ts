// Incremental parser for the newline-delimited JSON ask stream.

import type { AskFrame } from "./types";

export class NdjsonParser {
  private buffer = "";

  /** Feed a decoded chunk; returns every complete frame it closed. */
  push(chunk: string): AskFrame[] {
    this.buffer += chunk;
    const frames: AskFrame[] = [];
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx).replace(/\r$/, "");
      this.buffer = this.buffer.slice(idx + 1);
      if (line.trim()) {
        frames.push(JSON.parse(line) as AskFrame);
      }
    }
    return frames;
  }

  /** Flush a final unterminated line, if the server omitted the last LF. */
  finish(): AskFrame[] {
    const tail = this.buffer.trim();
    this.buffer = "";
    return tail ? [JSON.parse(tail) as AskFrame] : [];
  }
}
