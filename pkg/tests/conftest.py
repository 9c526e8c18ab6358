"""Shared fixtures: a 22-document legal corpus, providers, and service setup."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from lexrag.answer.generate import StubGenerator
from lexrag.corpus.store import CorpusStore
from lexrag.pipeline import AskPipeline
from lexrag.rerank import LexicalReranker
from lexrag.vector.disk import save_index
from lexrag.vector.embedding import HashEmbedder
from lexrag.vector.index import VectorIndex

# The golden-query document: its first chunk contains every token of
# "What is injunction?" so the lexical reranker pins it at ordinal 1.
FIXTURE_DOCS: list[dict] = [
    {
        "doc_id": "law001",
        "kind": "legislation",
        "title": "Injunctions and Equitable Relief Act",
        "citation_label": "Act 131",
        "year": 1962,
        "body": (
            "An injunction is a court order restraining a party from doing what the "
            "order forbids. It is an equitable remedy granted at the discretion of the "
            "court. Relief is available where damages would be an inadequate remedy. "
            "An interim injunction preserves the status quo pending trial. Breach of "
            "an injunction is punishable as contempt of court. The court may require "
            "an undertaking as to damages before granting interim relief."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law002",
        "kind": "legislation",
        "title": "Companies Act",
        "citation_label": "Act 992",
        "year": 2019,
        "body": (
            "A company is incorporated by registration under this Act. Section 19 "
            "confers capacity on a company to carry on its registered objects. "
            "Directors owe fiduciary duties to the company. A company may sue and be "
            "sued in its own name. The registrar keeps a register of companies. "
            "Annual returns must be filed with the registrar. Failure to file attracts "
            "administrative penalties."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law003",
        "kind": "legislation",
        "title": "Labour Act",
        "citation_label": "Act 651",
        "year": 2003,
        "body": (
            "A contract of employment may be terminated by notice. Unlawful "
            "termination entitles the worker to remedies before the labour commission. "
            "An employer shall provide a written statement of particulars. Redundancy "
            "pay is calculated on length of service. Disputes go first to mediation."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law004",
        "kind": "legislation",
        "title": "Rent Act",
        "citation_label": "Act 220",
        "year": 1963,
        "body": (
            "A rent agreement fixes the obligations of landlord and tenant. Recovery "
            "of possession requires an order of the rent magistrate. A landlord shall "
            "issue receipts for rent paid. Premiums beyond one month of rent are "
            "prohibited. The rent officer may assess a fair rent on application."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law005",
        "kind": "legislation",
        "title": "Evidence Act",
        "citation_label": "NRCD 323",
        "year": 1975,
        "body": (
            "Relevant evidence is admissible unless excluded by law. § 12 places the "
            "burden of producing evidence on the party asserting a fact. Hearsay is "
            "inadmissible except under a recognised exception. A document must be "
            "authenticated before admission. Judicial notice may be taken of notorious "
            "facts. Privileged communications are protected from disclosure."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law006",
        "kind": "legislation",
        "title": "Courts Act",
        "citation_label": "Act 459",
        "year": 1993,
        "body": (
            "The courts consist of the superior courts and the lower courts. The "
            "district court has civil jurisdiction up to the prescribed amount. Rules "
            "of procedure in the district court are made by the rules committee. A "
            "motion is moved in court by counsel after filing and service. Appeals "
            "from the district court lie to the high court."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law007",
        "kind": "legislation",
        "title": "Land Title Registration Act",
        "citation_label": "PNDCL 152",
        "year": 1986,
        "body": (
            "Title to land is proved by the register in a registration district. "
            "First registration requires publication and adjudication of claims. A "
            "registered proprietor holds subject to overriding interests. How to prove "
            "title outside a district depends on documents and possession. The land "
            "registrar may rectify the register for fraud or mistake."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law008",
        "kind": "legislation",
        "title": "Incorporated Private Partnerships Act",
        "citation_label": "Act 152",
        "year": 1962,
        "body": (
            "A partnership is the association of two or more individuals carrying on "
            "business jointly for profit. The meaning of partnership excludes companies "
            "and bodies corporate. Partners are jointly and severally liable for firm "
            "debts. A partnership agreement governs internal relations. Registration "
            "particulars must be delivered to the registrar."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law009",
        "kind": "legislation",
        "title": "Powers of Attorney Act",
        "citation_label": "Act 549",
        "year": 1998,
        "body": (
            "A power of attorney authorises an agent to act for the donor. The "
            "validity of a power of attorney may be limited to a stated period. An "
            "irrevocable power given for value survives the donor's incapacity. Acts "
            "done after expiry of the validity date bind no one. Third parties may "
            "rely on a statutory declaration of non-revocation."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "law010",
        "kind": "legislation",
        "title": "Constitution (Sources of Law Provisions)",
        "citation_label": "1992 Constitution, art. 11",
        "year": 1992,
        "body": (
            "The sources of law comprise the Constitution, enactments, orders and "
            "rules, the common law, and customary law. Educational rights are "
            "protected and enforceable in the high court. The common law of Ghana "
            "includes the doctrines of equity. Customary law applies where the parties "
            "are subject to it. Existing law continues in force subject to the "
            "Constitution."
        ),
        "source": "statute-book",
    },
    {
        "doc_id": "case001",
        "kind": "case",
        "title": "Mensah v. Adu",
        "citation_label": "Mensah v. Adu [1984] GLR 112",
        "year": 1984,
        "body": (
            "The plaintiff sought recovery of farmland at Nsawam. The defendant "
            "pleaded long undisturbed possession. The court held that adverse "
            "possession for over twelve years extinguished the paper title. Acts of "
            "ownership must be open and unequivocal. The legal principles established "
            "concern the effect of adverse possession on title. The appeal was "
            "dismissed with costs."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case002",
        "kind": "case",
        "title": "Attorney-General v. Sallah",
        "citation_label": "AG v Sallah [1970] CC 55",
        "year": 1970,
        "body": (
            "The respondent challenged the termination of his public office. The "
            "majority held that the office did not fall within the transitional "
            "provision relied upon. The dissenting opinion read the provision more "
            "broadly. The holding turned on the construction of the proviso. Judgment "
            "was entered for the respondent."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case003",
        "kind": "case",
        "title": "Kumakye v. Ghana Water and Sewage Corp",
        "citation_label": "Kumakye v GWSC [1979] GLR 201",
        "year": 1979,
        "body": (
            "The plaintiff's premises were flooded by a burst main. The corporation "
            "denied negligence in maintenance. The court found the corporation liable "
            "for failing to inspect its installations. Damages were assessed on proved "
            "loss. An order was made for periodic inspection."
            " Exemplary damages were refused on the facts."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case004",
        "kind": "case",
        "title": "Sraha v. Boateng",
        "citation_label": "Sraha v Boateng [1991] 2 GLR 44",
        "year": 1991,
        "body": (
            "The parties contracted for the supply of cocoa beans. Delivery failed in "
            "two consecutive seasons. The court held the breach went to the root of "
            "the contract. The innocent party was entitled to rescind and claim "
            "damages. Mitigation limits the recoverable loss."
            " Interest ran from the date of the writ."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case005",
        "kind": "case",
        "title": "Republic v. High Court; Ex parte Attoh",
        "citation_label": "[2009] SCGLR 460",
        "year": 2009,
        "body": (
            "The applicant sought certiorari to quash an order made without "
            "jurisdiction. Judicial review lies where a court exceeds its powers. An "
            "error of law on the face of the record suffices. The order was quashed "
            "and the matter remitted. Costs followed the event."
            " The registrar was directed to relist the suit."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case006",
        "kind": "case",
        "title": "Asare v. Registrar of Companies",
        "citation_label": "[2012] 1 GLR 30",
        "year": 2012,
        "body": (
            "The registrar refused to register a company name said to be misleading. "
            "The applicant sought an order of mandamus. The court held the refusal was "
            "within the registrar's discretion. Discretion must be exercised on "
            "relevant considerations. The application was refused."
            " No order was made as to costs."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case007",
        "kind": "case",
        "title": "Owusu v. Owusu",
        "citation_label": "[1998-99] SCGLR 12",
        "year": 1998,
        "body": (
            "The petition concerned distribution of matrimonial property. A spouse "
            "applying for maintenance must show need and means. Property jointly "
            "acquired is shared on equitable principles. Substantial contribution may "
            "be financial or otherwise. The registry was directed to take accounts."
            " Each party bore its own costs of the petition."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case008",
        "kind": "case",
        "title": "Tetteh v. Mensima",
        "citation_label": "[1977] GLR 90",
        "year": 1977,
        "body": (
            "The dispute concerned succession to a stool. Customary arbitration had "
            "been accepted by both sides. An award accepted by the parties is binding. "
            "The court will not reopen the merits of a valid award. The claim was "
            "dismissed."
            " The stool elders were bound by their conduct."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case009",
        "kind": "case",
        "title": "Quartey v. State Insurance Corp",
        "citation_label": "[1986] 1 GLR 180",
        "year": 1986,
        "body": (
            "The insured claimed under a motor policy after an accident. The insurer "
            "repudiated for non-disclosure. A material fact is one that would influence "
            "a prudent insurer. The non-disclosure here was not material. Judgment was "
            "for the insured."
            " The premium was ordered to be refunded in part."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case010",
        "kind": "case",
        "title": "Addo v. National Investment Bank",
        "citation_label": "[1995] 2 GLR 310",
        "year": 1995,
        "body": (
            "The bank called on a guarantee after default on a loan. The guarantor "
            "alleged discharge by variation of the principal contract. A material "
            "variation without consent discharges the guarantor. The variation here "
            "was consented to in writing. The guarantee was enforced."
            " Execution was stayed pending payment terms."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case011",
        "kind": "case",
        "title": "Frimpong v. The Republic",
        "citation_label": "[2005] CA 77",
        "year": 2005,
        "body": (
            "The appellant was convicted of stealing. The prosecution relied on recent "
            "possession of the stolen goods. An unexplained recent possession supports "
            "an inference of theft. The explanation offered was reasonably probable. "
            "The conviction was quashed."
        ),
        "source": "law-report",
    },
    {
        "doc_id": "case012",
        "kind": "case",
        "title": "In re Donkor (Deceased)",
        "citation_label": "[1982] GLR 165",
        "year": 1982,
        "body": (
            "The deceased died intestate leaving a spouse and children. Distribution "
            "of the estate follows the intestate succession rules. The household "
            "chattels devolve on the surviving spouse and children. The residue is "
            "shared in the statutory proportions. Letters of administration were "
            "granted accordingly."
        ),
        "source": "law-report",
    },
]

EMBED_DIM = 32
EMBED_SEED = 7


def write_corpus_file(path: Path, docs=None) -> Path:
    docs = FIXTURE_DOCS if docs is None else docs
    with path.open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    return path


def build_index_for(store: CorpusStore, embedder) -> VectorIndex:
    index = VectorIndex(dim=embedder.dim, provider_tag=embedder.tag)
    chunks = sorted(store.all_chunks(), key=lambda c: c.chunk_id)
    for chunk, vec in zip(chunks, embedder.embed_batch([c.text for c in chunks])):
        index.add(chunk.chunk_id, vec)
    return index


@pytest.fixture
def embedder():
    return HashEmbedder(dim=EMBED_DIM, seed=EMBED_SEED)


@pytest.fixture
def corpus_store(tmp_path):
    store = CorpusStore(tmp_path / "corpus.jsonl")
    for doc in FIXTURE_DOCS:
        store.ingest_document(doc)
    return store


@pytest.fixture(scope="module")
def corpus_store_module():
    """In-memory fixture store, safe to share across hypothesis examples."""
    store = CorpusStore()
    for doc in FIXTURE_DOCS:
        store.ingest_document(doc)
    return store


@pytest.fixture
def vector_index(corpus_store, embedder):
    return build_index_for(corpus_store, embedder)


@pytest.fixture
def pipeline(corpus_store, vector_index, embedder):
    return AskPipeline(
        corpus=corpus_store,
        index=vector_index,
        embedder=embedder,
        reranker=LexicalReranker(),
        generator=StubGenerator(),
    )


def write_service_files(root: Path, docs=None, tokens=None, **overrides) -> Path:
    """Lay out corpus, index, and config files for service/CLI tests."""
    corpus_path = root / "corpus.jsonl"
    write_corpus_file(corpus_path, docs)
    store = CorpusStore(corpus_path)
    embedder = HashEmbedder(dim=EMBED_DIM, seed=EMBED_SEED)
    index = build_index_for(store, embedder)
    index_path = root / "index.bin"
    save_index(index, index_path)

    config = {
        "corpus_path": "corpus.jsonl",
        "index_path": "index.bin",
        "pre_rerank_n": 100,
        "rerank_k": 30,
        "max_upload_bytes": 4096,
        "listen": "127.0.0.1:8765",
        "providers": {
            "embed": {"type": "stub", "dim": EMBED_DIM, "seed": EMBED_SEED},
            "rerank": {"type": "stub"},
            "generate": {"type": "stub", "delta_size": 32},
        },
        "auth": {
            "tokens": tokens
            or {
                "user-token": {"user_id": "u-alice", "admin": False},
                "other-token": {"user_id": "u-bekoe", "admin": False},
                "admin-token": {"user_id": "u-root", "admin": True},
            }
        },
        "query_log_path": "queries.jsonl",
        "vote_log_path": "votes.jsonl",
    }
    config.update(overrides)
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return config_path
