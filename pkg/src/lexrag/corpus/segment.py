"""Deterministic sentence segmentation with byte-offset spans.

Boundary rule: one of ``. ? !`` followed by whitespace and an uppercase
letter (or end of text) ends a sentence. A short list of abbreviations
common in legal citations ("Mensah v. Adu", "Act No. 992") never
terminates. Trailing unterminated text counts as a final sentence so no
document content is unreachable.

Spans are byte offsets into the UTF-8 encoding of the body and always fall
on character boundaries; the text between consecutive spans is whitespace.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyBodyError

TERMINATORS = frozenset(".?!")

# Tokens that end with "." but never close a sentence.
ABBREVIATIONS = frozenset({"v.", "No.", "s.", "Ltd.", "Co.", "etc."})


@dataclass(frozen=True)
class Sentence:
    """One sentence; span is [start, end) in UTF-8 bytes of the body."""

    index: int
    start: int
    end: int


def _skip_whitespace(body: str, pos: int) -> int:
    n = len(body)
    while pos < n and body[pos].isspace():
        pos += 1
    return pos


def _token_ending_at(body: str, pos: int) -> str:
    """Maximal non-whitespace run ending at pos (inclusive)."""
    start = pos
    while start > 0 and not body[start - 1].isspace():
        start -= 1
    return body[start : pos + 1]


def _is_boundary(body: str, pos: int) -> bool:
    """True if the terminator at pos closes a sentence."""
    if body[pos] == "." and _token_ending_at(body, pos) in ABBREVIATIONS:
        return False
    n = len(body)
    nxt = pos + 1
    if nxt == n:
        return True
    if not body[nxt].isspace():
        return False
    after = _skip_whitespace(body, nxt)
    return after == n or body[after].isupper()


def _char_spans(body: str) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    n = len(body)
    start = _skip_whitespace(body, 0)
    i = start
    while i < n:
        if body[i] in TERMINATORS and _is_boundary(body, i):
            spans.append((start, i + 1))
            start = _skip_whitespace(body, i + 1)
            i = start
        else:
            i += 1
    if start < n:
        end = n
        while end > start and body[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    return spans


def segment_sentences(body: str) -> list[Sentence]:
    """Split body into ordered sentences with byte-offset spans.

    Pure function of the body text. Raises EmptyBodyError when the body
    contains no non-whitespace content.
    """
    if not body.strip():
        raise EmptyBodyError("cannot segment an empty body")

    char_spans = _char_spans(body)

    # Convert character positions to byte offsets in one forward walk.
    sentences: list[Sentence] = []
    prev_char = 0
    prev_byte = 0

    def to_byte(char_pos: int) -> int:
        nonlocal prev_char, prev_byte
        prev_byte += len(body[prev_char:char_pos].encode("utf-8"))
        prev_char = char_pos
        return prev_byte

    for index, (cstart, cend) in enumerate(char_spans):
        bstart = to_byte(cstart)
        bend = to_byte(cend)
        sentences.append(Sentence(index=index, start=bstart, end=bend))
    return sentences
