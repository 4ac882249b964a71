"""Selection tests: counting, apportionment, document-order picking."""

from __future__ import annotations

from fractions import Fraction

import pytest

from gapforge.align import NeighborSet
from gapforge.decompose import AtomicFact, fact_id
from gapforge.errors import PlanMismatch, TopicMismatch
from gapforge.gapselect import (
    GapInventory,
    QuotaPlan,
    allocate_quota,
    count_gaps_by_section,
    select_facts,
    select_for_topic,
)


def gap_entry(language, section, paragraph, ordinal, text=None):
    text = text or f"fact {language} {paragraph} {ordinal}"
    fact = AtomicFact(
        id=fact_id(language, paragraph, ordinal, text),
        text=text,
        language_code=language,
        paragraph_index=paragraph,
        section_index=section,
        ordinal=ordinal,
    )
    return (fact, NeighborSet(target_fact_id=fact.id, neighbors=()))


def inventory_with_counts(language, topic, section_counts):
    """N gaps per section, consecutive paragraphs, one fact per paragraph."""
    gaps = []
    paragraph = 0
    for section in sorted(section_counts):
        for _ in range(section_counts[section]):
            gaps.append(gap_entry(language, section, paragraph, 0))
            paragraph += 1
    return GapInventory(language_code=language, topic=topic, gaps=tuple(gaps))


def fraction_largest_remainder(section_counts, cap):
    """Independent oracle using exact rational arithmetic."""
    total = sum(section_counts.values())
    if total <= cap:
        return dict(section_counts)
    shares = {s: Fraction(c * cap, total) for s, c in section_counts.items()}
    base = {s: int(share) for s, share in shares.items()}
    remainders = {s: shares[s] - base[s] for s in shares}
    leftover = cap - sum(base.values())
    order = sorted(section_counts, key=lambda s: (-remainders[s], -section_counts[s], s))
    for s in order[:leftover]:
        base[s] += 1
    return base


class TestCountGaps:
    def test_basic_counting(self):
        gaps = [gap_entry("fr", 0, i, 0) for i in range(3)] + [gap_entry("fr", 2, 9, 0)]
        assert count_gaps_by_section(gaps) == {0: 3, 2: 1}

    def test_empty(self):
        assert count_gaps_by_section([]) == {}

    def test_fixture_inventory_hand_count(self):
        # Hand count: 2 in section 0, 1 in section 1, 3 in section 4.
        gaps = [
            gap_entry("ru", 0, 0, 0),
            gap_entry("ru", 0, 0, 1),
            gap_entry("ru", 1, 1, 0),
            gap_entry("ru", 4, 2, 0),
            gap_entry("ru", 4, 2, 1),
            gap_entry("ru", 4, 3, 0),
        ]
        assert count_gaps_by_section(gaps) == {0: 2, 1: 1, 4: 3}


class TestAllocateQuota:
    def test_exact_proportions(self):
        plan = allocate_quota({"A": 12, "B": 6, "C": 2}, 10)
        assert plan.per_section == {"A": 6, "B": 3, "C": 1}

    def test_total_below_cap_is_identity(self):
        counts = {0: 5, 1: 3}
        plan = allocate_quota(counts, 10)
        assert plan.per_section == counts

    def test_tie_rule(self):
        plan = allocate_quota({"A": 1, "B": 1, "C": 1}, 2)
        assert plan.per_section == {"A": 1, "B": 1, "C": 0}

    def test_remainder_tie_prefers_larger_count(self):
        # Shares: A 4*5/10=2.0, B 3*5/10=1.5, C 3*5/10=1.5 -> floors 2,1,1,
        # one leftover unit, remainders tie between B and C (same count),
        # lower section id wins.
        plan = allocate_quota({"A": 4, "B": 3, "C": 3}, 5)
        assert plan.per_section == {"A": 2, "B": 2, "C": 1}

    def test_cap_zero(self):
        plan = allocate_quota({0: 4, 1: 2}, 0)
        assert sum(plan.per_section.values()) == 0

    def test_negative_cap_rejected(self):
        with pytest.raises(ValueError):
            allocate_quota({0: 1}, -1)

    def test_matches_fraction_oracle(self):
        import random

        rng = random.Random(13)
        for _ in range(300):
            sections = {s: rng.randint(0, 40) for s in range(rng.randint(1, 8))}
            cap = rng.randint(0, 15)
            assert allocate_quota(sections, cap).per_section == fraction_largest_remainder(
                sections, cap
            )

    def test_scale_invariance(self):
        counts = {0: 7, 1: 5, 2: 3}
        base = allocate_quota(counts, 10).per_section
        for c in (2, 3, 10):
            scaled = {s: n * c for s, n in counts.items()}
            assert allocate_quota(scaled, 10).per_section == base


class TestSelectFacts:
    def test_take_all_when_below_cap(self):
        inventory = inventory_with_counts("zh", "Injera", {0: 3, 1: 5})
        plan = allocate_quota(inventory.section_counts, 10)
        assert len(select_facts(inventory, plan)) == 8

    def test_cap_zero_selects_nothing(self):
        inventory = inventory_with_counts("fr", "T", {0: 4})
        plan = allocate_quota(inventory.section_counts, 0)
        assert select_facts(inventory, plan) == []

    def test_twenty_gaps_oracle(self):
        # 20 gaps over sections {0: 8, 1: 7, 2: 5}, cap 10. The oracle
        # applies the same two rules independently: fraction-based
        # apportionment, then a prefix in document order per section.
        counts = {0: 8, 1: 7, 2: 5}
        inventory = inventory_with_counts("fr", "T", counts)
        quotas = fraction_largest_remainder(counts, 10)
        expected_ids = []
        for section in sorted(counts):
            section_gaps = [e for e in inventory.gaps if e[0].section_index == section]
            section_gaps.sort(key=lambda e: (e[0].paragraph_index, e[0].ordinal))
            expected_ids.extend(e[0].id for e in section_gaps[: quotas[section]])
        expected_ids.sort()

        plan = allocate_quota(inventory.section_counts, 10)
        picked = select_facts(inventory, plan)
        assert sorted(e[0].id for e in picked) == expected_ids
        assert len(picked) == 10

    def test_output_in_document_order(self):
        inventory = inventory_with_counts("fr", "T", {0: 6, 1: 6})
        plan = allocate_quota(inventory.section_counts, 10)
        picked = select_facts(inventory, plan)
        keys = [(e[0].paragraph_index, e[0].ordinal) for e in picked]
        assert keys == sorted(keys)

    def test_prefix_property_within_section(self):
        inventory = inventory_with_counts("fr", "T", {0: 9, 1: 9})
        plan = allocate_quota(inventory.section_counts, 10)
        picked = select_facts(inventory, plan)
        for section in (0, 1):
            section_all = [
                e[0].id
                for e in sorted(inventory.gaps, key=lambda e: (e[0].paragraph_index, e[0].ordinal))
                if e[0].section_index == section
            ]
            section_picked = [e[0].id for e in picked if e[0].section_index == section]
            assert section_picked == section_all[: len(section_picked)]

    def test_plan_mismatch(self):
        inventory = inventory_with_counts("fr", "T", {0: 4})
        bad = QuotaPlan(cap=10, per_section={0: 99})
        with pytest.raises(PlanMismatch):
            select_facts(inventory, bad)
        missing_section = QuotaPlan(cap=10, per_section={5: 0})
        with pytest.raises(PlanMismatch):
            select_facts(inventory, missing_section)


class TestSelectForTopic:
    def test_injera_row(self):
        inventories = {
            "ru": inventory_with_counts("ru", "Injera", {0: 4, 1: 6}),
            "fr": inventory_with_counts("fr", "Injera", {0: 6, 1: 8}),
            "zh": inventory_with_counts("zh", "Injera", {0: 8}),
        }
        selected = select_for_topic(inventories, cap=10)
        sizes = {lang: len(v) for lang, v in selected.items()}
        assert sizes == {"ru": 10, "fr": 10, "zh": 8}
        assert sum(sizes.values()) == 28

    def test_wiener_schnitzel_row(self):
        inventories = {
            "ru": inventory_with_counts("ru", "Wiener schnitzel", {0: 30, 1: 35}),
            "fr": inventory_with_counts("fr", "Wiener schnitzel", {0: 20}),
            "zh": inventory_with_counts("zh", "Wiener schnitzel", {0: 31, 1: 31}),
        }
        selected = select_for_topic(inventories, cap=10)
        assert sum(len(v) for v in selected.values()) == 30

    def test_empty_map(self):
        assert select_for_topic({}, cap=10) == {}

    def test_topic_mismatch(self):
        inventories = {
            "ru": inventory_with_counts("ru", "A", {0: 1}),
            "fr": inventory_with_counts("fr", "B", {0: 1}),
        }
        with pytest.raises(TopicMismatch):
            select_for_topic(inventories, cap=10)

    def test_never_exceeds_cap(self):
        import random

        rng = random.Random(5)
        for _ in range(50):
            counts = {s: rng.randint(0, 30) for s in range(rng.randint(1, 5))}
            inventory = inventory_with_counts("fr", "T", counts)
            cap = rng.randint(0, 12)
            picked = select_facts(inventory, allocate_quota(inventory.section_counts, cap))
            assert len(picked) == min(cap, len(inventory.gaps))
