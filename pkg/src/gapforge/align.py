"""Cross-lingual fact alignment: embed, retrieve top-k, verify, classify.

Top-k retrieval is an exact full scan (article fact counts are small;
correctness and determinism beat an approximate index at this scale).
All similarity arithmetic uses left-to-right per-dimension accumulation
of correctly-rounded elementwise operations, so results are bit-stable
across platforms and match a plain scalar loop exactly.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decompose import AtomicFact
from .errors import DimensionMismatch, FormatError, GapforgeError, ProviderError
from .providers import ChatLlmProvider, EmbeddingProvider

NORM_TOLERANCE = 1e-6

_VERDICT = re.compile(r"^(yes|no)\b[^0-9]*(\d+)?", re.IGNORECASE)


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Neighbor:
    source_fact_id: str
    cosine: float


@dataclass(frozen=True)
class NeighborSet:
    target_fact_id: str
    neighbors: tuple[Neighbor, ...]


@dataclass(frozen=True)
class AlignmentVerdict:
    """Aligned(source fact) when aligned_with is set, otherwise a gap."""

    target_fact_id: str
    aligned_with: str | None
    neighbor_set: NeighborSet

    @property
    def is_gap(self) -> bool:
        return self.aligned_with is None


def _ordered_dot(a: Sequence[float], b: Sequence[float]) -> float:
    acc = 0.0
    for x, y in zip(a, b):
        acc += x * y
    return acc


def _clamp_cosine(value: float) -> float:
    return max(-1.0, min(1.0, value))


def embed(texts: Sequence[str], provider: EmbeddingProvider) -> list[EmbeddingVector]:
    """Embed texts in order, L2-normalized."""
    for t in texts:
        if not isinstance(t, str) or not t:
            raise ValueError("texts must be nonempty strings")
    if not texts:
        return []
    raw = provider.embed_batch(texts)
    dim = getattr(provider, "dim", None) or (len(raw[0]) if raw else 0)
    vectors = []
    for values in raw:
        if len(values) != dim:
            raise DimensionMismatch(f"provider returned dims {len(values)} and {dim}")
        norm = float(np.sqrt(_ordered_dot(values, values)))
        if norm == 0.0:
            raise ProviderError("provider returned a zero vector")
        vectors.append(EmbeddingVector(values=tuple(float(v) / norm for v in values)))
    return vectors


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine of two normalized vectors (their dot product), clamped to [-1, 1]."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims differ: {a.dim} vs {b.dim}")
    return _clamp_cosine(_ordered_dot(a.values, b.values))


def _similarity_matrix(targets: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Dot products accumulated dimension by dimension (order-fixed)."""
    sims = np.zeros((targets.shape[0], sources.shape[0]))
    buf = np.empty_like(sims)
    for d in range(targets.shape[1]):
        np.multiply.outer(targets[:, d], sources[:, d], out=buf)
        sims += buf
    return sims


def top_k_neighbors(
    target_vecs: Sequence[EmbeddingVector],
    source_vecs: Sequence[EmbeddingVector],
    k: int = 3,
    target_ids: Sequence[str] | None = None,
    source_ids: Sequence[str] | None = None,
) -> list[NeighborSet]:
    """Exact top-k source neighbors per target by cosine.

    Ties break toward the lower source ordinal, so output is fully
    deterministic.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if target_ids is None:
        target_ids = [str(i) for i in range(len(target_vecs))]
    if source_ids is None:
        source_ids = [str(i) for i in range(len(source_vecs))]
    if len(target_ids) != len(target_vecs) or len(source_ids) != len(source_vecs):
        raise ValueError("id lists must parallel the vector lists")
    if not target_vecs:
        return []
    if not source_vecs:
        return [NeighborSet(target_fact_id=tid, neighbors=()) for tid in target_ids]

    dims = {v.dim for v in list(target_vecs) + list(source_vecs)}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed dims: {sorted(dims)}")

    targets = np.array([v.values for v in target_vecs], dtype=np.float64)
    sources = np.array([v.values for v in source_vecs], dtype=np.float64)
    sims = _similarity_matrix(targets, sources)

    ordinals = np.arange(sources.shape[0])
    result = []
    for i, tid in enumerate(target_ids):
        order = np.lexsort((ordinals, -sims[i]))[:k]
        neighbors = tuple(
            Neighbor(source_fact_id=source_ids[j], cosine=_clamp_cosine(float(sims[i, j])))
            for j in order
        )
        result.append(NeighborSet(target_fact_id=tid, neighbors=neighbors))
    return result


def _parse_verify_output(raw: str, neighbor_count: int) -> int | None:
    """Return a 0-based neighbor index for yes, None for no; raise on junk."""
    m = _VERDICT.match(raw.strip())
    if not m:
        raise FormatError(f"unparseable verification output: {raw[:120]!r}")
    if m.group(1).lower() == "no":
        return None
    index = int(m.group(2)) if m.group(2) else 1
    if not 1 <= index <= neighbor_count:
        raise FormatError(f"verification named neighbor {index} of {neighbor_count}")
    return index - 1


def verify_alignment(
    target_fact: AtomicFact,
    neighbor_facts: Sequence[AtomicFact],
    neighbor_set: NeighborSet,
    provider: ChatLlmProvider,
) -> AlignmentVerdict:
    """Judge inferability of a target fact from its retrieved neighbors.

    An empty neighbor set is a gap outright, with no provider call.
    """
    if [f.id for f in neighbor_facts] != [n.source_fact_id for n in neighbor_set.neighbors]:
        raise ValueError("neighbor_facts must parallel neighbor_set order")
    if not neighbor_facts:
        return AlignmentVerdict(
            target_fact_id=target_fact.id, aligned_with=None, neighbor_set=neighbor_set
        )

    texts = [f.text for f in neighbor_facts]
    raw = provider.verify(target_fact.text, texts, target_fact.language_code)
    try:
        index = _parse_verify_output(raw, len(texts))
    except FormatError:
        raw = provider.verify(target_fact.text, texts, target_fact.language_code, strict=True)
        index = _parse_verify_output(raw, len(texts))

    aligned_with = neighbor_facts[index].id if index is not None else None
    return AlignmentVerdict(
        target_fact_id=target_fact.id, aligned_with=aligned_with, neighbor_set=neighbor_set
    )


def classify_article_pair(
    source_facts: Sequence[AtomicFact],
    target_facts: Sequence[AtomicFact],
    llm: ChatLlmProvider,
    embedder: EmbeddingProvider,
    k: int = 3,
    max_concurrency: int = 1,
) -> tuple[list[AlignmentVerdict], list[AlignmentVerdict]]:
    """Partition target facts into (aligned, gaps).

    Output order follows the target fact order regardless of any
    concurrent verification scheduling.
    """
    if not target_facts:
        return [], []

    target_vecs = embed([f.text for f in target_facts], embedder)
    source_vecs = embed([f.text for f in source_facts], embedder) if source_facts else []
    neighbor_sets = top_k_neighbors(
        target_vecs,
        source_vecs,
        k=k,
        target_ids=[f.id for f in target_facts],
        source_ids=[f.id for f in source_facts],
    )

    facts_by_id = {f.id: f for f in source_facts}

    def worker(pair: tuple[AtomicFact, NeighborSet]) -> AlignmentVerdict:
        fact, nset = pair
        neighbors = [facts_by_id[n.source_fact_id] for n in nset.neighbors]
        return verify_alignment(fact, neighbors, nset, llm)

    pairs = list(zip(target_facts, neighbor_sets))
    if max_concurrency > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=max_concurrency) as pool:
            futures = [pool.submit(worker, pair) for pair in pairs]
            verdicts = []
            for (fact, _), future in zip(pairs, futures):
                try:
                    verdicts.append(future.result())
                except GapforgeError as exc:
                    raise exc.__class__(f"fact {fact.id}: {exc}") from exc
    else:
        verdicts = []
        for fact, nset in pairs:
            try:
                verdicts.append(worker((fact, nset)))
            except GapforgeError as exc:
                raise exc.__class__(f"fact {fact.id}: {exc}") from exc

    aligned = [v for v in verdicts if not v.is_gap]
    gaps = [v for v in verdicts if v.is_gap]
    return aligned, gaps
