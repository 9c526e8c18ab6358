"""lexrag: citation-grounded retrieval-augmented QA over a legal corpus."""

__version__ = "0.1.0"
