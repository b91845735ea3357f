"""Characteristic scores, five-category partitions, and the two share triples."""

import numpy as np
import pytest

from prodskew.cssdist import (
    CharacteristicScores,
    CssPartition,
    PartitionTriple,
    category_labels,
    characteristic_scores,
    partition,
    subpopulation_b,
    triple_a,
)

from oracles import css_oracle, partition_oracle, triple_a_oracle, triple_b_oracle

WORKED = [0.0, 0.0, 1.0, 2.0, 3.0, 6.0]


def test_worked_example_characteristic_scores():
    cs = characteristic_scores(WORKED)
    assert cs.mu1 == 2.0
    assert cs.mu2 == 4.5
    assert cs.mu3 == 6.0
    assert cs.degenerate_level == "mu3_singleton"


def test_worked_example_partition():
    cs = characteristic_scores(WORKED)
    part = partition(WORKED, cs)
    assert part.counts == (2, 2, 1, 1, 0)
    assert part.population_size == 6


def test_worked_example_subpopulation_b():
    cs = characteristic_scores(WORKED)
    sub = subpopulation_b(WORKED, cs)
    assert sub.values == (3.0, 6.0)
    assert sub.triple.shares == (0.5, 0.5, 0.0)


def test_constant_data_collapses_at_mu2():
    cs = characteristic_scores([5.0, 5.0, 5.0])
    assert cs.mu1 == 5.0
    assert cs.mu2 == 5.0
    assert cs.mu3 == 5.0
    assert cs.degenerate_level == "mu2_undefined"
    sub = subpopulation_b([5.0, 5.0, 5.0], cs)
    assert sub.empty
    assert sub.triple is None


def test_nothing_above_mu2_collapses_at_mu3():
    # {0, 10, 10}: mu2 is 10 and no score sits strictly above it
    cs = characteristic_scores([0.0, 10.0, 10.0])
    assert cs.mu2 == 10.0
    assert cs.mu3 == 10.0
    assert cs.degenerate_level == "mu3_undefined"
    sub = subpopulation_b([0.0, 10.0, 10.0], cs)
    assert sub.triple.shares == (1.0, 0.0, 0.0)


def test_boundary_value_falls_to_lower_category():
    scores = [0.0, 2.0, 2.0, 4.0]
    cs = characteristic_scores(scores)
    assert cs.mu1 == 2.0
    labels = category_labels(scores, cs)
    assert labels == ("up", "lp", "lp", "fp")


def test_all_zeros_all_unproductive():
    scores = [0.0] * 7
    cs = characteristic_scores(scores)
    assert cs.degenerate_level == "mu2_undefined"
    part = partition(scores, cs)
    assert part.counts == (7, 0, 0, 0, 0)


def test_input_validation():
    with pytest.raises(ValueError):
        characteristic_scores([])
    with pytest.raises(ValueError):
        characteristic_scores([1.0, -0.5])
    with pytest.raises(ValueError):
        characteristic_scores([1.0, float("nan")])
    with pytest.raises(ValueError):
        characteristic_scores([[1.0, 2.0]])


def test_triple_a_worked_example():
    cs = characteristic_scores(WORKED)
    t = triple_a(partition(WORKED, cs))
    assert t.shares == pytest.approx((4 / 6, 1 / 6, 1 / 6), abs=1e-15)


def test_triple_sum_guard():
    with pytest.raises(ValueError):
        PartitionTriple((0.5, 0.4, 0.0))
    # one-decimal rounded shares pass the loose check
    PartitionTriple((0.714, 0.214, 0.071))


def test_triple_rejects_negative_or_wrong_arity():
    with pytest.raises(ValueError):
        PartitionTriple((1.2, -0.1, -0.1))
    with pytest.raises(ValueError):
        PartitionTriple((0.5, 0.5))


def _random_scores(rng):
    n = rng.integers(1, 51)
    kind = rng.random()
    if kind < 0.08:
        return np.full(n, float(rng.integers(0, 4))), "constant-ish"
    zeros = rng.random(n) < 0.3
    base = rng.lognormal(0.0, 1.0, n)
    if kind < 0.2:
        # two-level data often leaves nothing strictly above mu2
        base = np.where(rng.random(n) < 0.5, 1.0, 10.0)
    if kind > 0.9 and n > 2:
        base[0] = base.max() * 50  # lone giant exercises the singleton path
    scores = np.where(zeros, 0.0, base)
    return scores, "mixed"


def test_oracle_equivalence_quick():
    rng = np.random.default_rng(1234)
    seen = set()
    for _ in range(150):
        scores, _ = _random_scores(rng)
        mu1, mu2, mu3, level = css_oracle(scores)
        cs = characteristic_scores(scores)
        assert (cs.mu1, cs.mu2, cs.mu3) == (mu1, mu2, mu3)
        assert cs.degenerate_level == level
        seen.add(level)
        counts = partition_oracle(scores, mu1, mu2, mu3)
        part = partition(scores, cs)
        assert part.counts == tuple(counts[k] for k in ("up", "lp", "fp", "hp", "vhp"))
    assert "none" in seen and "mu2_undefined" in seen


def test_counts_conservation_and_b_size():
    rng = np.random.default_rng(77)
    for _ in range(60):
        scores, _ = _random_scores(rng)
        cs = characteristic_scores(scores)
        part = partition(scores, cs)
        sub = subpopulation_b(scores, cs)
        assert part.population_size == len(scores)
        assert part.fp + part.hp + part.vhp == len(sub.values)
        if sub.triple is not None:
            assert sum(sub.triple.shares) == pytest.approx(1.0, abs=1e-9)
            oracle = triple_b_oracle(partition_oracle(scores, cs.mu1, cs.mu2, cs.mu3))
            assert sub.triple.shares == pytest.approx(oracle, abs=1e-15)
        assert triple_a(part).shares == pytest.approx(
            triple_a_oracle(partition_oracle(scores, cs.mu1, cs.mu2, cs.mu3)), abs=1e-15
        )


def test_truncation_means_increase():
    rng = np.random.default_rng(42)
    for _ in range(40):
        scores, _ = _random_scores(rng)
        cs = characteristic_scores(scores)
        if cs.degenerate_level == "mu2_undefined":
            continue
        assert cs.mu2 > cs.mu1
        if cs.degenerate_level != "mu3_undefined":
            assert cs.mu3 > cs.mu2


def test_scale_invariance_of_memberships():
    rng = np.random.default_rng(9)
    scores = np.where(rng.random(80) < 0.25, 0.0, rng.lognormal(0, 1, 80))
    cs = characteristic_scores(scores)
    for k in (0.001, 7.0, 1e4):
        scaled = characteristic_scores(k * scores)
        assert category_labels(k * scores, scaled) == category_labels(scores, cs)


def test_partition_dataclass_shares():
    part = CssPartition(up=1, lp=1, fp=1, hp=1, vhp=1)
    assert part.shares == (0.2, 0.2, 0.2, 0.2, 0.2)


def test_characteristic_scores_is_plain_data():
    cs = CharacteristicScores(1.0, 2.0, 3.0, "none")
    assert cs == CharacteristicScores(1.0, 2.0, 3.0, "none")
