"""Gap filtering and per-language selection under a fact cap.

"Proportional sampling" is pinned down as largest-remainder (Hamilton)
apportionment of the cap over section-level gap counts, followed by a
deterministic prefix-in-document-order pick inside each section. No
randomness: datasets are reproducible and testable. When a language has
no more gaps than the cap, everything is taken.

Apportionment runs on exact integer arithmetic, so quotas are identical
for any scaled version of the same count vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .align import NeighborSet
from .decompose import AtomicFact
from .errors import PlanMismatch, TopicMismatch

DEFAULT_CAP = 10

GapEntry = tuple[AtomicFact, NeighborSet]


@dataclass(frozen=True)
class GapInventory:
    """All gap facts of one language edition for one topic."""

    language_code: str
    topic: str
    gaps: tuple[GapEntry, ...]

    @property
    def section_counts(self) -> dict[int, int]:
        return count_gaps_by_section(self.gaps)


@dataclass(frozen=True)
class QuotaPlan:
    cap: int
    per_section: Mapping[int, int]


def count_gaps_by_section(gaps: Sequence[GapEntry]) -> dict[int, int]:
    """Exact multiset count of gaps per section index."""
    counts: dict[int, int] = {}
    for fact, _ in gaps:
        counts[fact.section_index] = counts.get(fact.section_index, 0) + 1
    return counts


def allocate_quota(section_counts: Mapping[int, int], cap: int) -> QuotaPlan:
    """Apportion the cap over sections proportionally to their gap counts.

    Total within the cap means take-all. Otherwise largest-remainder:
    floor the exact shares, then hand leftover units to the largest
    remainders, ties broken by larger count then lower section index.
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    for section, count in section_counts.items():
        if count < 0:
            raise ValueError(f"negative count for section {section}")

    total = sum(section_counts.values())
    if total <= cap:
        return QuotaPlan(cap=cap, per_section=dict(section_counts))

    quotas = {s: (c * cap) // total for s, c in section_counts.items()}
    remainders = {s: (c * cap) % total for s, c in section_counts.items()}
    leftover = cap - sum(quotas.values())
    by_remainder = sorted(
        section_counts,
        key=lambda s: (-remainders[s], -section_counts[s], s),
    )
    for s in by_remainder[:leftover]:
        quotas[s] += 1
    return QuotaPlan(cap=cap, per_section=quotas)


def _document_order(entry: GapEntry) -> tuple[int, int]:
    fact, _ = entry
    return (fact.paragraph_index, fact.ordinal)


def select_facts(inventory: GapInventory, plan: QuotaPlan) -> list[GapEntry]:
    """Apply a quota plan: per section, the first quota-many gaps in
    document order; overall output in document order."""
    counts = inventory.section_counts
    if set(plan.per_section) != set(counts):
        raise PlanMismatch("plan sections do not match inventory sections")
    for s, q in plan.per_section.items():
        if not 0 <= q <= counts[s]:
            raise PlanMismatch(f"quota {q} out of range for section {s} (count {counts[s]})")
    expected_total = min(plan.cap, len(inventory.gaps))
    if sum(plan.per_section.values()) != expected_total:
        raise PlanMismatch(
            f"plan allocates {sum(plan.per_section.values())}, expected {expected_total}"
        )

    picked: list[GapEntry] = []
    by_section: dict[int, list[GapEntry]] = {s: [] for s in counts}
    for entry in sorted(inventory.gaps, key=_document_order):
        by_section[entry[0].section_index].append(entry)
    for s, quota in plan.per_section.items():
        picked.extend(by_section[s][:quota])
    picked.sort(key=_document_order)
    return picked


def select_for_topic(
    inventories: Mapping[str, GapInventory], cap: int = DEFAULT_CAP
) -> dict[str, list[GapEntry]]:
    """Independent per-language selection; absent languages stay absent."""
    topics = {inv.topic for inv in inventories.values()}
    if len(topics) > 1:
        raise TopicMismatch(f"inventories span multiple topics: {sorted(topics)}")
    selected: dict[str, list[GapEntry]] = {}
    for language, inventory in inventories.items():
        plan = allocate_quota(inventory.section_counts, cap)
        selected[language] = select_facts(inventory, plan)
    return selected
