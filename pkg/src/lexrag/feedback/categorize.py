"""Deterministic rule-based query categorization.

An ordered cascade of keyword rules; the first matching rule wins and
unmatched queries fall through to "uncategorized". Rule order matters:
study-support cues are checked before drafting and exam cues because
real queries like a study-timetable drafting request would otherwise be
swallowed by the broader rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import EmptyTextError


class QueryCategory(str, Enum):
    LEGAL_OPINION = "legal_opinion"
    SPECIFIC_CASE_BREAKDOWN = "specific_case_breakdown"
    PROCEDURAL_EXPLANATION = "procedural_explanation"
    DEFINITION_CLARIFICATION = "definition_clarification"
    APPLICATION_OF_AUTHORITIES = "application_of_authorities"
    EXAM_QUESTION_GENERATION = "exam_question_generation"
    STUDY_SUPPORT = "study_support"
    LEGAL_DRAFTING = "legal_drafting"
    DOCUMENT_ANALYSIS = "document_analysis"
    UNCATEGORIZED = "uncategorized"


@dataclass(frozen=True)
class CategoryRule:
    """One cascade entry.

    The rule fires when any `any_of` substring or `prefixes` prefix matches
    and every `all_of` substring is present. Substrings are matched against
    the normalized text padded with single spaces, so " v " style cues work
    at the edges.
    """

    category: QueryCategory
    any_of: tuple[str, ...] = ()
    prefixes: tuple[str, ...] = ()
    all_of: tuple[str, ...] = ()

    def matches(self, padded: str, normalized: str) -> bool:
        if self.any_of or self.prefixes:
            hit = any(s in padded for s in self.any_of) or any(
                normalized.startswith(p) for p in self.prefixes
            )
            if not hit:
                return False
        return all(s in padded for s in self.all_of)


DEFAULT_RULES: tuple[CategoryRule, ...] = (
    CategoryRule(
        QueryCategory.STUDY_SUPPORT,
        any_of=("timetable", "how do we use", "before reading", "need to know", "study plan"),
    ),
    CategoryRule(
        QueryCategory.DOCUMENT_ANALYSIS,
        any_of=("these document", "this document", "the attached", "uploaded", "for publication"),
        prefixes=("review", "summarize this", "summarise this"),
    ),
    CategoryRule(
        QueryCategory.LEGAL_DRAFTING,
        any_of=("draft a ", "draft an ", "draft the ", "draft me "),
        prefixes=("draft",),
    ),
    CategoryRule(
        QueryCategory.EXAM_QUESTION_GENERATION,
        any_of=("exam", "likely", "multiple choice", "mcq"),
        all_of=("question",),
    ),
    CategoryRule(
        QueryCategory.APPLICATION_OF_AUTHORITIES,
        any_of=(
            "cases to support",
            "cases on ",
            "cases that support",
            "cases supporting",
            "cases to refute",
            "case law on",
            "authorities on",
            "authorities to support",
        ),
    ),
    CategoryRule(
        QueryCategory.SPECIFIC_CASE_BREAKDOWN,
        any_of=(" v ", " v. ", " vrs ", " vrs. "),
    ),
    CategoryRule(
        QueryCategory.DEFINITION_CLARIFICATION,
        any_of=(
            "what is",
            "meaning of",
            "difference between",
            "define ",
            "definition of",
            "what does",
            "explain the term",
        ),
    ),
    CategoryRule(
        QueryCategory.PROCEDURAL_EXPLANATION,
        any_of=(
            "how to",
            "procedure",
            "steps",
            "process of",
            "how is",
            "how a ",
            "how are",
            "rules of",
        ),
    ),
    CategoryRule(
        QueryCategory.LEGAL_OPINION,
        any_of=(
            "essay",
            "irac",
            "to what extent",
            "do you agree",
            "discuss",
            "with the aid of",
            "critically",
            "legal opinion",
            "advise ",
        ),
    ),
)


def categorize_query(text: str, rules: tuple[CategoryRule, ...] = DEFAULT_RULES) -> QueryCategory:
    """Classify one query; total and deterministic on non-empty text."""
    if not text or not text.strip():
        raise EmptyTextError("cannot categorize empty text")
    normalized = " ".join(text.lower().split())
    padded = f" {normalized} "
    for rule in rules:
        if rule.matches(padded, normalized):
            return rule.category
    return QueryCategory.UNCATEGORIZED
