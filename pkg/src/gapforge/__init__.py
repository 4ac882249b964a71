"""gapforge: cross-lingual knowledge-gap discovery and packaging.

The pipeline fetches a topic's Wikipedia article in English plus target
language editions, decomposes paragraphs into atomic facts, aligns
target facts against English facts by embedding retrieval plus LLM
verification, keeps the gaps, selects up to a per-language cap by
section-proportional apportionment, enriches the picks with English
translations, in-text anchors, and link-to-highlight URLs, and writes
one unified dataset file per topic that a local HTTP service exposes to
the browser extension.
"""

__version__ = "0.1.0"

from .articles import Article, Paragraph, Section, Sentence
from .decompose import AtomicFact
from .align import AlignmentVerdict, EmbeddingVector, Neighbor, NeighborSet
from .enrich import PresentedFact
from .datastore import TopicDataset

__all__ = [
    "__version__",
    "Article",
    "Section",
    "Paragraph",
    "Sentence",
    "AtomicFact",
    "EmbeddingVector",
    "Neighbor",
    "NeighborSet",
    "AlignmentVerdict",
    "PresentedFact",
    "TopicDataset",
]
