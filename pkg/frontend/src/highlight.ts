// Document pane: split a body into segments around the highlighted passage.

import { byteSpanToCharSpan } from "./offsets";

export interface HighlightedDoc {
  before: string;
  highlight: string;
  after: string;
}

/** Split the body around the server-reported byte span; offsets are authoritative. */
export function highlightSpan(body: string, byteStart: number, byteEnd: number): HighlightedDoc {
  const [start, end] = byteSpanToCharSpan(body, byteStart, byteEnd);
  return {
    before: body.slice(0, start),
    highlight: body.slice(start, end),
    after: body.slice(end),
  };
}
