import random

import pytest

from gcindex.access import AccessIndex
from gcindex.errors import PositionOutOfRange
from gcindex.grammar import Grammar, build_balanced_grammar, build_grammar, expand_naive
from gcindex.packing import Packer, WordSink, word_width
from gcindex.stats import QueryStats
from textgen import random_grammar, random_text, versioned_text

A, B = ord("a"), ord("b")


def abab():
    return Grammar([-1, -1, 0, 2], [-1, -1, 1, 2], [A, B, -1, -1], 3)


def chain(k, hang_left):
    """X_1 = AB, then X_i -> A X_{i-1} (hang_left) or X_{i-1} A."""
    left, right, symbol = [-1, -1, 0], [-1, -1, 1], [A, B, -1]
    for _ in range(k - 1):
        prev = len(left) - 1
        if hang_left:
            left.append(0)
            right.append(prev)
        else:
            left.append(prev)
            right.append(0)
        symbol.append(-1)
    return Grammar(left, right, symbol, len(left) - 1)


def test_word_width():
    assert word_width(2 ** 16, 2) == 16
    assert word_width(2 ** 16 - 1, 2) == 15
    assert word_width(10, 26) == 1
    assert word_width(1000, 1) == word_width(1000, 2)


def test_packer_round_trip():
    pk = Packer(5, [10, 20, 30, 40, 50])
    codes = [4, 0, 3, 3, 1, 2]
    word = pk.pack(codes)
    assert pk.codes(word, 6) == codes
    assert pk.get(word, 0) == 4
    assert pk.codes(pk.slice(word, 2, 3), 3) == [3, 3, 1]
    assert pk.codes(pk.head(word, 2), 2) == [4, 0]
    assert pk.codes(pk.tail(word, 6, 2), 2) == [1, 2]
    assert pk.codes(pk.concat(pk.pack([1]), 1, pk.pack([2, 3])), 3) == [1, 2, 3]
    sink = WordSink()
    sink.put(word, 6)
    sink.put(0, 0)
    assert sink.size == 6
    assert sink.symbols(pk) == [50, 10, 40, 40, 20, 30]


def test_central_absent_below_two_words():
    g = build_grammar(b"abracadabra")
    ix = AccessIndex(g, w=8)
    for r in range(g.n):
        if g.length[r] < 16:
            assert ix.central(r) is None
        else:
            assert ix.central(r) is not None


def test_central_on_balanced_64():
    rng = random.Random(2)
    text = random_text(64, 2, rng)
    g = build_balanced_grammar(text)
    ix = AccessIndex(g, w=16)
    # both halves are 32 >= w, so the split happens at the root itself
    assert ix.central(g.root) == (g.root, 1)
    # one short symbol in front: the pointer skips it and lands on the 64-block
    left = g.left + [g.terminal_of(text[0])]
    right = g.right + [g.root]
    g2 = Grammar(left, right, g.symbol + [-1], len(left) - 1)
    ix2 = AccessIndex(g2, w=16)
    t, start = ix2.central(g2.root)
    assert t == g.root and start - 1 == 1 <= 16
    assert ix2.decompress_rule(g2.root) == list(expand_naive(g2))


def test_left_jump_on_left_hanging_chain():
    w = 4
    g = chain(20, hang_left=True)
    ix = AccessIndex(g, w=w)
    t, start = ix.left_jump(g.root)
    assert start - 1 >= w - 1
    text = expand_naive(g)
    assert text[start - 1:start - 1 + g.length[t]] == expand_naive(g, t)
    assert ix.right_jump(g.root) is None


def test_right_jump_on_right_hanging_chain():
    w = 4
    g = chain(20, hang_left=False)
    ix = AccessIndex(g, w=w)
    t, start = ix.right_jump(g.root)
    skipped = g.N - (start - 1 + g.length[t])
    assert skipped >= w - 1
    text = expand_naive(g)
    assert text[start - 1:start - 1 + g.length[t]] == expand_naive(g, t)
    assert ix.left_jump(g.root) is None


def check_structure(g, w=None):
    ix = AccessIndex(g, w=w)
    w = ix.w
    for r in range(g.n):
        s = expand_naive(g, r)
        m = min(w, len(s))
        assert ix.fringe_left(r) == s[:m]
        assert ix.fringe_right(r) == s[len(s) - m:]
        for ptr, name in ((ix.central(r), "central"), (ix.left_jump(r), "left"),
                          (ix.right_jump(r), "right")):
            if ptr is None:
                continue
            t, start = ptr
            assert s[start - 1:start - 1 + g.length[t]] == expand_naive(g, t), name
        c = ix.central(r)
        assert (c is not None) == (g.length[r] >= 2 * w and g.left[r] >= 0)
        if c is not None:
            t, start = c
            assert start - 1 <= w and len(s) - (start - 1 + g.length[t]) <= w
        st = QueryStats()
        assert ix.decompress_rule(r, st) == s
        assert st.decompress_nodes <= 8 * (1 + len(s) / w)
        if len(s) <= 2 * w:
            assert st.decompress_nodes == 1
    return ix


def test_structure_on_random_grammars():
    rng = random.Random(11)
    for _ in range(40):
        g = random_grammar(rng, rng.randint(1, 25), rng.randint(1, 4))
        if g.N > 20000:
            continue
        for w in (None, 1, 2, 3, 5):
            check_structure(g, w)


def test_structure_on_builder_grammars():
    rng = random.Random(12)
    for sigma in (1, 2, 4):
        check_structure(build_grammar(versioned_text(2000, sigma, rng)))


def test_abab_small_examples():
    g = abab()
    ix = AccessIndex(g, w=4)
    st = QueryStats()
    assert bytes(ix.decompress_rule(g.root, st)) == b"abab"
    assert st.decompress_nodes == 1
    assert ix.access(4) == B
    assert ix.access(ix.forest.center[g.root]) == g.symbol[ix.forest.leaf[g.root]]


def test_abracadabra_extract():
    g = build_grammar(b"abracadabra")
    ix = AccessIndex(g)
    assert bytes(ix.extract(3, 5)) == b"rac"
    assert bytes(ix.extract(1, 11)) == b"abracadabra"
    for i, j in ((0, 1), (5, 4), (1, 12)):
        with pytest.raises(PositionOutOfRange):
            ix.extract(i, j)
    with pytest.raises(PositionOutOfRange):
        ix.access(0)


def test_extract_all_intervals_random_grammars():
    rng = random.Random(13)
    for _ in range(80):
        g = random_grammar(rng, rng.randint(1, 14), rng.randint(1, 3))
        if g.N > 150:
            continue
        text = expand_naive(g)
        for w in (None, 1, 2):
            ix = AccessIndex(g, w=w)
            for i in range(1, g.N + 1):
                for j in range(i, g.N + 1):
                    assert ix.extract(i, j) == text[i - 1:j]


def test_access_random_repetitive_text():
    rng = random.Random(14)
    text = versioned_text(5000, 4, rng)
    ix = AccessIndex(build_grammar(text))
    for _ in range(1000):
        i = rng.randint(1, len(text))
        assert ix.access(i) == text[i - 1]


def test_state_round_trip():
    g = build_grammar(b"mississippi river mississippi")
    ix = AccessIndex(g)
    ix2 = AccessIndex.from_state(g, ix.forest, ix.state())
    assert ix2.extract(1, g.N) == ix.extract(1, g.N)
