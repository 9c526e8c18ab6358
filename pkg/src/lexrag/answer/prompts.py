"""Prompt assembly per ask mode.

The system instruction is selected by mode and always constrains the
generator to cite only the numbered passages it was given, using the
[[cite:<ordinal>]] marker grammar.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from ..errors import EmptyContextError, MissingAttachmentError
from ..rerank import ContextSet


class AskMode(str, Enum):
    RESEARCH = "research"
    REVIEW = "review"
    DRAFT = "draft"


PROMPT_VERSION = 1

_CITE_RULE = (
    "Support every factual claim with an inline citation of the form "
    "[[cite:N]] where N is the number of one of the provided passages. "
    "Never cite a number that was not provided."
)

MODE_INSTRUCTIONS: dict[AskMode, str] = {
    AskMode.RESEARCH: (
        "You are a legal research assistant. Answer the question using only "
        "the numbered passages provided as context. " + _CITE_RULE
    ),
    AskMode.REVIEW: (
        "You are a legal document reviewer. Analyze the user's attached "
        "document using the numbered passages provided as context: summarize, "
        "flag issues, and answer the question asked. " + _CITE_RULE
    ),
    AskMode.DRAFT: (
        "You are a legal drafting assistant. Produce or revise the requested "
        "draft, grounding any legal propositions in the numbered passages "
        "when passages are provided. " + _CITE_RULE
    ),
}


@dataclass(frozen=True)
class ContextPassage:
    ordinal: int
    chunk_id: str
    text: str


@dataclass(frozen=True)
class Prompt:
    system_instruction: str
    passages: tuple[ContextPassage, ...]
    user_query: str
    mode: AskMode


def build_prompt(
    query: str,
    mode: AskMode,
    context: ContextSet,
    attached_docs: Optional[Sequence[object]] = None,
    instructions: Optional[dict[AskMode, str]] = None,
) -> Prompt:
    """Assemble the generation prompt for one query.

    Research mode requires a non-empty context; review mode requires at
    least one attached document. Every context chunk appears exactly once,
    numbered by its context ordinal.
    """
    if mode is AskMode.RESEARCH and len(context) == 0:
        raise EmptyContextError("research mode requires retrieved context")
    if mode is AskMode.REVIEW and not attached_docs:
        raise MissingAttachmentError("review mode requires an attached document")

    table = instructions or MODE_INSTRUCTIONS
    passages = tuple(
        ContextPassage(ordinal=item.ordinal, chunk_id=item.chunk_id, text=item.text)
        for item in context.items
    )
    return Prompt(
        system_instruction=table[mode],
        passages=passages,
        user_query=query,
        mode=mode,
    )
