// Convert server byte offsets (UTF-8) to JS string indices (UTF-16 units).
//
// Passage spans in citation frames are byte offsets into the document body;
// highlighting needs string indices, so we walk the body once per lookup.

function utf8Length(codePoint: number): number {
  if (codePoint < 0x80) return 1;
  if (codePoint < 0x800) return 2;
  if (codePoint < 0x10000) return 3;
  return 4;
}

/** Map a [byteStart, byteEnd) span to [charStart, charEnd) string indices. */
export function byteSpanToCharSpan(
  body: string,
  byteStart: number,
  byteEnd: number,
): [number, number] {
  if (byteStart < 0 || byteEnd < byteStart) {
    throw new RangeError(`invalid byte span [${byteStart}, ${byteEnd})`);
  }
  let bytePos = 0;
  let charPos = 0;
  let charStart = -1;
  let charEnd = -1;
  if (byteStart === 0) charStart = 0;
  for (const ch of body) {
    if (bytePos === byteStart) charStart = charPos;
    if (bytePos === byteEnd) charEnd = charPos;
    if (charStart >= 0 && charEnd >= 0) break;
    bytePos += utf8Length(ch.codePointAt(0)!);
    charPos += ch.length;
  }
  if (bytePos === byteStart && charStart < 0) charStart = charPos;
  if (bytePos === byteEnd && charEnd < 0) charEnd = charPos;
  if (charStart < 0 || charEnd < 0) {
    throw new RangeError(
      `byte span [${byteStart}, ${byteEnd}) does not fall on character boundaries`,
    );
  }
  return [charStart, charEnd];
}

/** The exact substring of the body covered by a byte span. */
export function sliceByteSpan(body: string, byteStart: number, byteEnd: number): string {
  const [start, end] = byteSpanToCharSpan(body, byteStart, byteEnd);
  return body.slice(start, end);
}
