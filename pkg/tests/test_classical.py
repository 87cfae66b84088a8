import random
from fractions import Fraction as F
from itertools import product
from math import factorial

import pytest

from signaldim.classical import (
    ConditionalDistribution,
    count_effective_vertices,
    count_vertices,
    effective_vertices,
    reduce_rows,
    stirling2,
    strategy_to_distribution,
)


def brute_stirling2(m, k):
    """Count set partitions of [m] into k nonempty classes by enumeration."""
    if m == 0:
        return 1 if k == 0 else 0
    count = 0
    for assign in product(range(k), repeat=m):
        if len(set(assign)) == k:
            count += 1
    return count // factorial(k)


def test_stirling_trivial():
    assert stirling2(2, 2) == 1
    assert stirling2(16, 1) == 1


def test_stirling_5_3():
    assert brute_stirling2(5, 3) == 25
    assert stirling2(5, 3) == 25


def test_stirling_matches_brute_force():
    for m in range(7):
        for k in range(7):
            assert stirling2(m, k) == brute_stirling2(m, k)


def brute_count_vertices(m, n, d):
    return sum(1 for s in product(range(n), repeat=m) if len(set(s)) <= d)


def test_count_vertices_m1():
    assert count_vertices(1, 3, 2) == 3


def test_count_vertices_2x2():
    assert count_vertices(2, 2, 2) == 4


def test_count_vertices_brute_force_small():
    for m in range(1, 5):
        for n in range(1, 5):
            for d in range(1, 6):
                assert count_vertices(m, n, d) == brute_count_vertices(m, n, d)


def test_count_vertices_saturates():
    for m in range(1, 5):
        for n in range(1, 5):
            sat = count_vertices(m, n, min(m, n))
            for d in range(min(m, n), 8):
                assert count_vertices(m, n, d) == sat


def test_count_vertices_16_9_5():
    v = count_vertices(16, 9, 5)
    assert v == 17097522761601


def test_reduce_rows_duplicates():
    p = ConditionalDistribution.from_rows([[1, 0], [1, 0], [0, 1]])
    reduced, kept = reduce_rows(p)
    assert kept == [0, 2]
    assert reduced.probs == (p.probs[0], p.probs[2])


def test_reduce_rows_midpoint():
    p = ConditionalDistribution.from_rows(
        [[1, 0], [0, 1], [F(1, 2), F(1, 2)]]
    )
    reduced, kept = reduce_rows(p)
    assert kept == [0, 1]


def test_reduce_rows_idempotent():
    rng = random.Random(17)
    for _ in range(20):
        m, n = rng.randint(1, 5), rng.randint(2, 4)
        rows = []
        for _ in range(m):
            cuts = sorted(rng.randint(0, 6) for _ in range(n - 1))
            parts = [a - b for a, b in zip(cuts + [6], [0] + cuts)]
            rows.append([F(x, 6) for x in parts])
        p = ConditionalDistribution.from_rows(rows)
        r1, kept1 = reduce_rows(p)
        r2, kept2 = reduce_rows(r1)
        assert r2 == r1
        assert kept2 == list(range(r1.m))


def test_effective_full_support_2x2():
    p = ConditionalDistribution.from_rows(
        [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]
    )
    assert len(effective_vertices(p, 2)) == 4 == count_vertices(2, 2, 2)


def test_effective_respects_support():
    p = ConditionalDistribution.from_rows([[1, 0], [F(1, 2), F(1, 2)]])
    strategies = effective_vertices(p, 2)
    assert all(p.probs[i][s[i]] > 0 for s in strategies for i in range(2))
    assert set(strategies) == {(0, 0), (0, 1)}


def test_effective_equals_exhaustive_filter():
    # branch and bound prunes soundly: compare with the unpruned filter
    rng = random.Random(23)
    for _ in range(20):
        m, n = rng.randint(1, 8), rng.randint(2, 4)
        rows = []
        for _ in range(m):
            support = rng.sample(range(n), rng.randint(1, n))
            rows.append(
                [F(1, len(support)) if j in support else F(0) for j in range(n)]
            )
        p = ConditionalDistribution.from_rows(rows)
        for d in range(1, n + 1):
            expected = {
                s
                for s in product(range(n), repeat=m)
                if len(set(s)) <= d and all(p.probs[i][s[i]] > 0 for i in range(m))
            }
            got = effective_vertices(p, d)
            assert set(got) == expected
            assert len(got) == len(expected)  # no duplicates
            assert count_effective_vertices(p, d) == len(expected)


def test_effective_deterministic_order():
    p = ConditionalDistribution.from_rows(
        [[F(1, 3), F(1, 3), F(1, 3)], [F(1, 2), F(1, 2), 0]]
    )
    assert effective_vertices(p, 2) == effective_vertices(p, 2)


def test_strategy_to_distribution():
    d1 = strategy_to_distribution((0, 0), 2, 2)
    assert d1.probs == ((F(1), F(0)), (F(1), F(0)))
    d2 = strategy_to_distribution((0, 1), 2, 2)
    assert d2.probs == ((F(1), F(0)), (F(0), F(1)))
    with pytest.raises(ValueError):
        strategy_to_distribution((0, 5), 2, 2)


def test_strategy_round_trip_support():
    p = ConditionalDistribution.from_rows([[F(1, 2), F(1, 2), 0], [0, 1, 0]])
    for s in effective_vertices(p, 3):
        q = strategy_to_distribution(s, p.m, p.n)
        for i in range(p.m):
            for j in range(p.n):
                if q.probs[i][j] == 1:
                    assert p.probs[i][j] > 0


def test_distribution_validation():
    with pytest.raises(ValueError):
        ConditionalDistribution.from_rows([[F(1, 2), F(1, 4)]])
    with pytest.raises(ValueError):
        ConditionalDistribution.from_rows([[2, -1]])


def test_distribution_json_roundtrip(tmp_path):
    p = ConditionalDistribution.from_rows([[F(1, 3), F(2, 3)], [1, 0]])
    path = tmp_path / "p.json"
    p.save(path)
    assert ConditionalDistribution.load(path) == p
