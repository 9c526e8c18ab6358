"""Prompt assembly, streamed generation, citation parsing, and grounding."""

from .events import AnswerEvent
from .prompts import AskMode, ContextPassage, Prompt, build_prompt
from .citations import (
    Citation,
    CitationMarker,
    CitationStreamFilter,
    GroundingReport,
    GroundingViolation,
    parse_citations,
    validate_grounding,
)
from .generate import (
    GenerationProvider,
    RemoteGenerator,
    StubGenerator,
    generate_stream,
    magic_query,
)

__all__ = [
    "AnswerEvent",
    "AskMode",
    "ContextPassage",
    "Prompt",
    "build_prompt",
    "Citation",
    "CitationMarker",
    "CitationStreamFilter",
    "GroundingReport",
    "GroundingViolation",
    "parse_citations",
    "validate_grounding",
    "GenerationProvider",
    "RemoteGenerator",
    "StubGenerator",
    "generate_stream",
    "magic_query",
]
