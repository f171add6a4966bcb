import math
import random

import pytest

from gcindex.balanced import BalancedIndex, expansion_depth, fringe_width
from gcindex.errors import OccurrenceOutOfRange, PositionOutOfRange
from gcindex.grammar import Grammar, build_balanced_grammar, build_grammar, expand_naive
from gcindex.index import UnbalancedIndex
from gcindex.oracle import naive_rank, naive_select
from gcindex.stats import QueryStats
from textgen import mutated_copies, random_grammar, versioned_text

A, B = ord("a"), ord("b")


def abab():
    return Grammar([-1, -1, 0, 2], [-1, -1, 1, 2], [A, B, -1, -1], 3)


def test_depth_and_fringe_width():
    assert expansion_depth(2 ** 16, 0.5) == 2
    assert expansion_depth(2 ** 16, 0.1) == 1   # floor(0.4) clamps to one level
    assert expansion_depth(2, 0.5) == 1
    assert fringe_width(2 ** 16, 16, 0.5) == 64


def test_depth_one_is_the_plain_dag():
    g = build_grammar(b"abracadabra")
    ix = BalancedIndex(g, depth=1, w=1)
    for r in range(g.n):
        if g.left[r] >= 0:
            assert ix.expanded(r)[0] == (g.left[r], g.right[r])


def test_expanded_abab():
    g = abab()
    ix = BalancedIndex(g, depth=2, w=1)
    assert ix.expanded(3) == ((0, 1, 0, 1), (0, 1, 2, 3))
    assert ix.prefix_counts(A, 3) == (0, 1, 1, 2, 2)
    assert ix.prefix_counts(B, 3) == (0, 0, 1, 1, 2)
    assert ix.prefix_counts(ord("z"), 3) == (0, 0, 0, 0, 0)


def test_short_items_become_literals():
    g = abab()
    ix = BalancedIndex(g, depth=2, w=2)
    # X has length 2 <= w, so it is kept whole
    assert ix.expanded(3) == ((2, 2), (0, 2))
    assert bytes(ix.extract(1, 4)) == b"abab"


def test_prefix_counts_against_naive():
    rng = random.Random(31)
    for _ in range(20):
        g = random_grammar(rng, rng.randint(1, 20), rng.randint(1, 3))
        if g.N > 5000:
            continue
        ix = BalancedIndex(g, depth=rng.randint(1, 3), w=rng.randint(1, 3))
        for r in range(g.n):
            items, starts = ix.expanded(r)
            if not items:
                continue
            assert starts[0] == 0
            s = []
            for y, p in zip(items, starts):
                assert p == len(s)
                s += expand_naive(g, y)
            assert s == expand_naive(g, r)
            for sym in g.alphabet:
                cc = ix.prefix_counts(sym, r)
                want = [0]
                for y in items:
                    want.append(want[-1] + expand_naive(g, y).count(sym))
                assert list(cc) == want


def test_abracadabra_examples():
    g = build_grammar(b"abracadabra")
    ix = BalancedIndex(g)
    assert bytes(ix.extract(3, 5)) == b"rac"
    assert bytes(ix.extract(1, 11)) == b"abracadabra"
    assert ix.rank(A, 11) == 5
    assert ix.rank(A, 0) == 0
    assert ix.select(A, 1) == 1
    assert ix.access(5) == ord("c")
    with pytest.raises(OccurrenceOutOfRange):
        ix.select(ord("z"), 1)
    with pytest.raises(OccurrenceOutOfRange):
        ix.select(A, 6)
    with pytest.raises(PositionOutOfRange):
        ix.extract(4, 3)
    with pytest.raises(PositionOutOfRange):
        ix.rank(A, 12)
    with pytest.raises(PositionOutOfRange):
        ix.access(12)


def agree(g, rng, trials):
    text = expand_naive(g)
    N = g.N
    u = UnbalancedIndex(g)
    engines = [BalancedIndex(g)] + [
        BalancedIndex(g, depth=d, w=w) for d in (1, 2, 3) for w in (1, 2)]
    for ix in engines:
        for _ in range(trials):
            i = rng.randint(1, N)
            j = rng.randint(i, min(N, i + 40))
            assert ix.extract(i, j) == text[i - 1:j] == u.extract(i, j)
            assert ix.access(i) == text[i - 1]
            c = rng.choice(g.alphabet)
            k = rng.randint(0, N)
            assert ix.rank(c, k) == naive_rank(text, c, k) == u.rank(c, k)
            k = rng.randint(1, ix.count(c))
            p = ix.select(c, k)
            assert p == naive_select(text, c, k) == u.select(c, k)
            assert ix.rank(c, p) == k
        for r in rng.sample(range(g.n), min(g.n, 20)):
            assert ix.decompress_rule(r) == expand_naive(g, r)


def test_agrees_with_oracle_and_heavy_path_engine():
    rng = random.Random(32)
    for _ in range(25):
        g = random_grammar(rng, rng.randint(1, 30), rng.randint(1, 4))
        if g.N > 20000:
            continue
        agree(g, rng, 60)
    agree(build_grammar(versioned_text(5000, 4, rng)), rng, 300)


def test_all_intervals_small():
    rng = random.Random(33)
    for n in (1, 2, 7, 40):
        text = bytes(rng.choice(b"ab") for _ in range(n))
        g = build_grammar(text)
        for depth, w in ((None, None), (2, 1), (3, 2)):
            ix = BalancedIndex(g, depth=depth, w=w)
            for i in range(1, n + 1):
                for j in range(i, n + 1):
                    assert bytes(ix.extract(i, j)) == text[i - 1:j]


def test_visits_bounded_by_height_over_depth():
    rng = random.Random(34)
    text = mutated_copies(2000, 20, 4, rng)
    g = build_balanced_grammar(text)
    ix = BalancedIndex(g)
    limit = math.ceil(g.height() / ix.depth) + 1
    for _ in range(500):
        i = rng.randint(1, g.N)
        c = rng.choice(g.alphabet)
        for q in (lambda s: ix.access(i, s), lambda s: ix.rank(c, i, s),
                  lambda s: ix.select(c, rng.randint(1, ix.count(c)), s)):
            st = QueryStats()
            q(st)
            assert st.nodes_visited <= limit


def test_extraction_work_on_balanced_grammar():
    rng = random.Random(35)
    text = mutated_copies(4000, 16, 4, rng)
    g = build_balanced_grammar(text)
    ix = BalancedIndex(g)
    lg = math.log2(g.N)
    for m in (1, 16, 256, 4096):
        for _ in range(50):
            i = rng.randint(1, g.N - m + 1)
            st = QueryStats()
            assert bytes(ix.extract(i, i + m - 1, st)) == text[i - 1:i + m - 1]
            assert st.work <= 8 * (lg + m / ix.w + 1)


def test_state_round_trip():
    g = build_grammar(b"mississippi river mississippi")
    ix = BalancedIndex(g)
    ix2 = BalancedIndex.from_state(g, ix.state())
    assert ix2.extract(1, g.N) == ix.extract(1, g.N)
    assert ix2.select(ord("s"), 3) == ix.select(ord("s"), 3)
