"""Operator CLI: ingest corpora, build indexes, run asks, eval, stats, serve.

Exit codes are a stable contract: 0 success, 1 input error, 2 provider
error, 3 config error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .answer.events import CITATION, DELTA, ERROR
from .answer.prompts import AskMode
from .corpus.store import CorpusStore
from .corpus.documents import DocumentKind
from .errors import ConfigError, LexragError, ProviderUnavailableError
from .feedback.log import FeedbackLog
from .feedback.metrics import category_histogram, helpfulness_score, latency_stats, vote_rate
from .pipeline import AskPipeline
from .rerank import rerank
from .service.config import ServiceConfig, build_embedder, build_generator, build_reranker, load_config
from .vector.disk import load_index, save_index
from .vector.embedding import embed
from .vector.index import VectorIndex

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PROVIDER = 2
EXIT_CONFIG = 3

EMBED_BATCH = 64


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors (exit 1), not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="lexrag", description=__doc__)
    parser.add_argument("--config", help="path to the JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and load a JSONL corpus file")
    p.add_argument("path", help="JSONL file, one document per line")

    sub.add_parser("build-index", help="embed all chunks and write the vector index")

    p = sub.add_parser("ask", help="run one query and print the answer")
    p.add_argument("query")
    p.add_argument("--mode", default="research", choices=[m.value for m in AskMode])
    p.add_argument("--magic", action="store_true", help="refine the query first")
    p.add_argument("--attach", action="append", default=[], help="attach a document id")

    sub.add_parser("stats", help="print usage metrics as JSON")

    p = sub.add_parser("eval", help="run retrieval over a labeled fixture and report recall@k")
    p.add_argument("path", help="JSONL fixture: {query, expected_chunk_ids}")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--listen", help="host:port override")

    return parser


def _load_config(args) -> ServiceConfig:
    path = args.config or os.environ.get("LEXRAG_CONFIG") or "config.json"
    return load_config(path)


def _open_store(config: ServiceConfig, must_exist: bool) -> CorpusStore:
    if must_exist and not Path(config.corpus_path).exists():
        raise ConfigError(f"corpus file not readable: {config.corpus_path}")
    return CorpusStore(config.corpus_path)


def _cmd_ingest(args) -> int:
    config = _load_config(args)
    store = CorpusStore(config.corpus_path)
    input_path = Path(args.path)
    if not input_path.exists():
        print(f"error: corpus file not found: {input_path}", file=sys.stderr)
        return EXIT_INPUT
    docs = 0
    chunks = 0
    with input_path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                doc = store.ingest_document(record)
                chunks += len(store.chunks_for(doc.doc_id))
            except (json.JSONDecodeError, LexragError) as exc:
                print(f"error: line {lineno}: {exc}", file=sys.stderr)
                return EXIT_INPUT
            docs += 1
    print(f"{docs} documents, {chunks} chunks")
    return EXIT_OK


def _cmd_build_index(args) -> int:
    config = _load_config(args)
    store = _open_store(config, must_exist=True)
    embedder = build_embedder(config)
    chunks = sorted(
        (c for d in store.documents() if d.kind is not DocumentKind.USER_DOC
         for c in store.chunks_for(d.doc_id)),
        key=lambda c: c.chunk_id,
    )
    index = VectorIndex(dim=embedder.dim, provider_tag=embedder.tag)
    for i in range(0, len(chunks), EMBED_BATCH):
        batch = chunks[i : i + EMBED_BATCH]
        for chunk, vec in zip(batch, embedder.embed_batch([c.text for c in batch])):
            index.add(chunk.chunk_id, vec)
    save_index(index, config.index_path)
    print(f"indexed {len(index)} chunks (dim {index.dim}) -> {config.index_path}")
    return EXIT_OK


def _cmd_ask(args) -> int:
    config = _load_config(args)
    store = _open_store(config, must_exist=True)
    if not Path(config.index_path).exists():
        raise ConfigError(f"index file not readable: {config.index_path}")
    embedder = build_embedder(config)
    index = load_index(config.index_path, provider_tag=embedder.tag)
    pipeline = AskPipeline(
        corpus=store,
        index=index,
        embedder=embedder,
        reranker=build_reranker(config),
        generator=build_generator(config),
        pre_rerank_n=config.pre_rerank_n,
        rerank_k=config.rerank_k,
    )
    prepared = pipeline.prepare(
        args.query,
        AskMode(args.mode),
        attachments=args.attach,
        magic=args.magic,
        query_id="cli",
    )
    citations = []
    for ev in pipeline.stream(prepared):
        if ev.kind == DELTA:
            sys.stdout.write(ev.text)
            sys.stdout.flush()
        elif ev.kind == CITATION:
            citations.append(ev.citation)
        elif ev.kind == ERROR:
            sys.stdout.write("\n")
            print(f"error: {ev.message}", file=sys.stderr)
            return EXIT_PROVIDER
    sys.stdout.write("\n\n")
    if citations:
        print("Citations:")
        for c in citations:
            doc = store.get(c.doc_id)
            title = doc.title if doc else "?"
            print(f"  [{c.context_ordinal}] {c.chunk_id}  {title}  bytes [{c.passage_start}:{c.passage_end})")
    else:
        print("Citations: none")
    report = prepared.outcome.report
    print(
        f"Grounding: total={report.total_citations} "
        f"resolved={report.resolved_count} violations={len(report.violations)}"
    )
    return EXIT_OK


def _cmd_stats(args) -> int:
    config = _load_config(args)
    feedback = FeedbackLog(config.query_log_path or None, config.vote_log_path or None)
    queries = feedback.queries()
    votes = feedback.votes()
    latency = latency_stats(queries)
    stats = {
        "helpfulness": helpfulness_score(votes),
        "vote_rate": vote_rate(queries, votes),
        "latency": latency.to_record() if latency else None,
        "query_count": len(queries),
        "category_histogram": category_histogram(queries),
    }
    print(json.dumps(stats, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = _load_config(args)
    fixture_path = Path(args.path)
    if not fixture_path.exists():
        print(f"error: fixture file not found: {fixture_path}", file=sys.stderr)
        return EXIT_INPUT
    store = _open_store(config, must_exist=True)
    if not Path(config.index_path).exists():
        raise ConfigError(f"index file not readable: {config.index_path}")
    embedder = build_embedder(config)
    index = load_index(config.index_path, provider_tag=embedder.tag)
    reranker = build_reranker(config)

    cases = []
    with fixture_path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                query = row["query"]
                expected = set(row["expected_chunk_ids"])
                if not query or not expected:
                    raise ValueError("query and expected_chunk_ids must be non-empty")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                print(f"error: fixture line {lineno}: {exc}", file=sys.stderr)
                return EXIT_INPUT
            cases.append((query, expected))
    if not cases:
        print("error: fixture file has no cases", file=sys.stderr)
        return EXIT_INPUT
    if len(index) == 0:
        print("error: index is empty", file=sys.stderr)
        return EXIT_INPUT

    total_recall = 0.0
    full = 0
    for query, expected in cases:
        qvec = embed(query, embedder)
        hits = index.retrieve(qvec, config.pre_rerank_n)
        context = rerank(query, hits, store.get_chunk, reranker, k=config.rerank_k)
        got = {item.chunk_id for item in context.items}
        recall = len(expected & got) / len(expected)
        total_recall += recall
        full += recall == 1.0
        print(f"{'PASS' if recall == 1.0 else 'FAIL'} recall={recall:.2f}  {query}")
    mean = total_recall / len(cases)
    print(f"recall@{config.rerank_k} mean={mean:.4f} ({full}/{len(cases)} queries fully recalled)")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import build_state, create_app

    config = _load_config(args)
    listen = args.listen or config.listen
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ConfigError(f"invalid listen address: {listen!r}")
    state = build_state(config)
    app = create_app(state)
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "ingest": _cmd_ingest,
        "build-index": _cmd_build_index,
        "ask": _cmd_ask,
        "stats": _cmd_stats,
        "eval": _cmd_eval,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProviderUnavailableError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except LexragError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
