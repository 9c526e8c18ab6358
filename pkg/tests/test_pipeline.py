"""Ask pipeline: determinism, attachments, grounding soundness end to end."""

from __future__ import annotations

import pytest

from lexrag.answer.events import DELTA, DONE, ERROR
from lexrag.answer.generate import StubGenerator
from lexrag.answer.prompts import AskMode
from lexrag.corpus.store import CorpusStore
from lexrag.errors import EmptyContextError, EmptyQueryError, MissingAttachmentError, ProviderUnavailableError
from lexrag.pipeline import AskPipeline
from lexrag.rerank import LexicalReranker
from lexrag.vector.embedding import HashEmbedder
from lexrag.vector.index import VectorIndex

from conftest import FIXTURE_DOCS, build_index_for


def fresh_pipeline(tmp_path=None):
    store = CorpusStore()
    for doc in FIXTURE_DOCS:
        store.ingest_document(doc)
    embedder = HashEmbedder(dim=32, seed=7)
    index = build_index_for(store, embedder)
    return AskPipeline(store, index, embedder, LexicalReranker(), StubGenerator())


def run(pipeline, query, mode, **kwargs):
    prepared = pipeline.prepare(query, mode, **kwargs)
    events = list(pipeline.stream(prepared))
    return prepared, events


def test_deterministic_across_fresh_pipelines():
    p1, e1 = run(fresh_pipeline(), "What is injunction?", AskMode.RESEARCH)
    p2, e2 = run(fresh_pipeline(), "What is injunction?", AskMode.RESEARCH)
    assert [(ev.kind, ev.text) for ev in e1] == [(ev.kind, ev.text) for ev in e2]
    assert p1.outcome.final_text == p2.outcome.final_text
    assert p1.outcome.citations == p2.outcome.citations
    assert [i.chunk_id for i in p1.context.items] == [i.chunk_id for i in p2.context.items]


def test_research_answer_grounded_in_top_chunk(pipeline):
    prepared, events = run(pipeline, "What is injunction?", AskMode.RESEARCH, query_id="q1")
    assert prepared.context.items[0].chunk_id == "law001#0"
    assert events[-1].kind == DONE
    outcome = prepared.outcome
    assert outcome.report.resolved_count == 1
    assert outcome.report.violations == ()
    citation = outcome.citations[0]
    assert citation.chunk_id == "law001#0"
    # grounding soundness: resolved span byte-equals the chunk span
    chunk = pipeline.corpus.get_chunk(citation.chunk_id)
    body = pipeline.corpus.get(citation.doc_id).body.encode("utf-8")
    assert (citation.passage_start, citation.passage_end) == (chunk.start, chunk.end)
    assert body[citation.passage_start : citation.passage_end].decode("utf-8") == chunk.text


def test_stream_grammar_single_terminal(pipeline):
    _, events = run(pipeline, "What is injunction?", AskMode.RESEARCH)
    terminals = [e for e in events if e.is_terminal]
    assert len(terminals) == 1 and events[-1] is terminals[0]
    text = "".join(e.text for e in events if e.kind == DELTA)
    assert text  # deltas concatenate to the final answer


def test_context_capped_at_rerank_k(corpus_store, vector_index, embedder):
    pipeline = AskPipeline(
        corpus_store, vector_index, embedder, LexicalReranker(), StubGenerator(), rerank_k=5
    )
    prepared, _ = run(pipeline, "court order equity land title act", AskMode.RESEARCH)
    assert len(prepared.context) == 5


def test_empty_query_rejected(pipeline):
    with pytest.raises(EmptyQueryError):
        pipeline.prepare("   ", AskMode.RESEARCH)


def test_research_with_empty_index_raises_empty_context(corpus_store, embedder):
    empty = VectorIndex(dim=embedder.dim)
    pipeline = AskPipeline(corpus_store, empty, embedder, LexicalReranker(), StubGenerator())
    with pytest.raises(EmptyContextError):
        pipeline.prepare("What is injunction?", AskMode.RESEARCH)


def test_draft_with_empty_index_is_unsourced(corpus_store, embedder):
    empty = VectorIndex(dim=embedder.dim)
    pipeline = AskPipeline(corpus_store, empty, embedder, LexicalReranker(), StubGenerator())
    prepared, events = run(pipeline, "Draft a lease", AskMode.DRAFT)
    assert events[-1].kind == DONE
    assert prepared.outcome.citations == ()
    assert prepared.context.items == ()


def test_review_requires_attachments(pipeline):
    with pytest.raises(MissingAttachmentError):
        pipeline.prepare("Review this contract", AskMode.REVIEW)


def test_review_unknown_attachment(pipeline):
    with pytest.raises(MissingAttachmentError):
        pipeline.prepare("Review this contract", AskMode.REVIEW, attachments=["ghost-doc"])


def test_review_citations_resolve_into_uploaded_doc(pipeline):
    doc = pipeline.corpus.ingest_document(
        {
            "doc_id": "u-mem1",
            "kind": "user_doc",
            "title": "Uploaded Memo",
            "body": (
                "The zylophant covenant restricts assignment of the lease. Any transfer "
                "requires written consent. Consent may not be unreasonably withheld."
            ),
            "uploaded_by": "u-alice",
        }
    )
    pipeline.register_user_document(doc)
    prepared, events = run(
        pipeline, "zylophant covenant assignment", AskMode.REVIEW, attachments=["u-mem1"]
    )
    assert prepared.context.items[0].chunk_id == "u-mem1#0"
    citation = prepared.outcome.citations[0]
    assert citation.doc_id == "u-mem1"
    body = doc.body.encode("utf-8")
    assert body[citation.passage_start : citation.passage_end].decode("utf-8") == (
        pipeline.corpus.get_chunk("u-mem1#0").text
    )


def test_attachment_vectors_lazily_embedded(pipeline):
    # no register_user_document call: vectors embed on first use
    pipeline.corpus.ingest_document(
        {
            "doc_id": "u-mem2",
            "kind": "user_doc",
            "title": "Late Memo",
            "body": "The quango clause governs delivery windows.",
            "uploaded_by": "u-alice",
        }
    )
    prepared, _ = run(pipeline, "quango clause delivery", AskMode.REVIEW, attachments=["u-mem2"])
    assert any(i.chunk_id.startswith("u-mem2#") for i in prepared.context.items)


def test_magic_refinement_applies(pipeline):
    raw = "  what   is  an injunction "
    prepared, _ = run(pipeline, raw, AskMode.DRAFT, magic=True)
    assert prepared.refined_query == "what is an injunction"
    assert prepared.query == raw  # the original text is preserved for logging


def test_magic_falls_back_when_provider_down(corpus_store, vector_index, embedder):
    class FlakyGenerator(StubGenerator):
        def complete(self, instruction, text):
            raise ProviderUnavailableError("refiner offline")

    pipeline = AskPipeline(
        corpus_store, vector_index, embedder, LexicalReranker(), FlakyGenerator()
    )
    prepared, events = run(pipeline, "What is injunction?", AskMode.RESEARCH, magic=True)
    assert prepared.refined_query == "What is injunction?"
    assert events[-1].kind == DONE


def test_generation_failure_mid_stream_logged_as_error(corpus_store, vector_index, embedder):
    class ExplodingGenerator(StubGenerator):
        def stream(self, prompt):
            yield "partial text then "
            raise ProviderUnavailableError("generator crashed")

    pipeline = AskPipeline(
        corpus_store, vector_index, embedder, LexicalReranker(), ExplodingGenerator()
    )
    prepared, events = run(pipeline, "What is injunction?", AskMode.RESEARCH)
    kinds = [e.kind for e in events]
    assert kinds[-1] == ERROR
    assert kinds.count(ERROR) == 1
    assert prepared.outcome.error_message == "generator crashed"
    assert prepared.outcome.final_text.startswith("partial text")
