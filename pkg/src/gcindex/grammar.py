"""Straight-line programs in Chomsky normal form.

A grammar is stored as parallel lists indexed by rule id.  Rule ids are
positions in a topological order: a pair rule only references smaller ids,
so a single left-to-right sweep sees every child before its parents.
Terminal rules have ``left == right == -1`` and carry a symbol (any
non-negative integer, typically a byte value); pair rules have
``symbol == -1``.

Positions everywhere in this package are 1-based and inclusive.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Iterable, Mapping, Sequence, Union

from .errors import (
    CyclicRule,
    DanglingReference,
    EmptyInput,
    InvalidGrammarFile,
    LengthMismatch,
    NotCNF,
    UnreachableRule,
)

MAGIC = "GCS1"


class Grammar:
    """A CNF grammar generating exactly one string.

    Use :func:`build_grammar` or :func:`cnf_normalize` to obtain one from a
    text or from an arbitrary acyclic grammar.  Direct construction expects
    the rules to already be topologically ordered.
    """

    def __init__(self, left, right, symbol, root, length=None, check=True):
        self.left = list(left)
        self.right = list(right)
        self.symbol = list(symbol)
        self.root = root
        if length is None:
            length = _lengths(self.left, self.right)
        self.length = list(length)
        if check:
            validate(self)
        self.alphabet = sorted(s for s in self.symbol if s >= 0)
        self.code = {s: k for k, s in enumerate(self.alphabet)}

    @property
    def n(self) -> int:
        return len(self.left)

    @property
    def N(self) -> int:
        return self.length[self.root]

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    def is_terminal(self, r: int) -> bool:
        return self.left[r] < 0

    def terminal_of(self, symbol: int) -> int:
        """Return the id of the terminal rule generating ``symbol`` (or -1)."""
        for r, s in enumerate(self.symbol):
            if s == symbol:
                return r
        return -1

    def height(self) -> int:
        h = [0] * self.n
        for r in range(self.n):
            if self.left[r] >= 0:
                h[r] = 1 + max(h[self.left[r]], h[self.right[r]])
        return h[self.root]

    def is_weight_balanced(self, ratio: float = 0.25) -> bool:
        for r in range(self.n):
            a = self.left[r]
            if a >= 0:
                x, y = self.length[a], self.length[self.right[r]]
                if min(x, y) < ratio * max(x, y):
                    return False
        return True

    def rules(self):
        """Yield ``(id, ('T', symbol))`` or ``(id, ('P', left, right))``."""
        for r in range(self.n):
            if self.left[r] < 0:
                yield r, ("T", self.symbol[r])
            else:
                yield r, ("P", self.left[r], self.right[r])

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return (self.left, self.right, self.symbol, self.root) == (
            other.left, other.right, other.symbol, other.root)

    def __repr__(self):
        return "Grammar(n=%d, N=%d, sigma=%d)" % (self.n, self.N, self.sigma)


def _lengths(left, right):
    length = [1] * len(left)
    for r, a in enumerate(left):
        if a >= 0:
            b = right[r]
            if not (0 <= a < r and 0 <= b < r):
                # leave the real diagnosis to validate()
                length[r] = 0
                continue
            length[r] = length[a] + length[b]
    return length


def validate(g: Grammar) -> None:
    """Raise the first structural violation found in ``g``.

    Checks CNF shape, topological order (a reference to the same or a later
    rule is reported as :class:`CyclicRule`), length consistency and
    reachability from the root.
    """
    n = len(g.left)
    if len(g.right) != n or len(g.symbol) != n or len(g.length) != n:
        raise NotCNF("rule arrays have different lengths")
    if not 0 <= g.root < n:
        raise DanglingReference("root %r is not a rule" % (g.root,))
    seen_symbols = set()
    for r in range(n):
        a, b, s = g.left[r], g.right[r], g.symbol[r]
        if a < 0 or b < 0:
            if a >= 0 or b >= 0 or s < 0:
                raise NotCNF("rule %d is neither a pair nor a terminal" % r)
            if s in seen_symbols:
                raise NotCNF("symbol %d has two terminal rules" % s)
            seen_symbols.add(s)
            if g.length[r] != 1:
                raise LengthMismatch("terminal rule %d has length %d" % (r, g.length[r]))
            continue
        if s >= 0:
            raise NotCNF("pair rule %d also carries a symbol" % r)
        for c in (a, b):
            if c >= n:
                raise DanglingReference("rule %d references missing rule %d" % (r, c))
            if c >= r:
                raise CyclicRule("rule %d references rule %d, which is not defined before it" % (r, c))
        if g.length[r] != g.length[a] + g.length[b]:
            raise LengthMismatch(
                "rule %d has length %d but its children sum to %d"
                % (r, g.length[r], g.length[a] + g.length[b]))
    reach = [False] * n
    reach[g.root] = True
    for r in range(n - 1, -1, -1):
        if reach[r] and g.left[r] >= 0:
            reach[g.left[r]] = True
            reach[g.right[r]] = True
    for r in range(n):
        if not reach[r]:
            raise UnreachableRule("rule %d is unreachable from the root" % r)


def expand_naive(g: Grammar, r: int | None = None) -> list:
    """Full expansion of rule ``r`` (default: the root) by substitution."""
    if r is None:
        r = g.root
    out = []
    stack = [r]
    left, right, symbol = g.left, g.right, g.symbol
    while stack:
        x = stack.pop()
        if left[x] < 0:
            out.append(symbol[x])
        else:
            stack.append(right[x])
            stack.append(left[x])
    return out


def prune(g: Grammar) -> Grammar:
    """Drop rules unreachable from the root, keeping the relative order."""
    n = g.n
    reach = [False] * n
    reach[g.root] = True
    for r in range(n - 1, -1, -1):
        if reach[r] and g.left[r] >= 0:
            reach[g.left[r]] = True
            reach[g.right[r]] = True
    if all(reach):
        return g
    new_id = [-1] * n
    left, right, symbol = [], [], []
    for r in range(n):
        if not reach[r]:
            continue
        new_id[r] = len(left)
        if g.left[r] < 0:
            left.append(-1)
            right.append(-1)
        else:
            left.append(new_id[g.left[r]])
            right.append(new_id[g.right[r]])
        symbol.append(g.symbol[r])
    return Grammar(left, right, symbol, new_id[g.root], check=False)


# -- general grammars --------------------------------------------------------

Rhs = Union[int, Sequence[Hashable]]


def _topo_order(rules: Mapping[Hashable, Rhs], root) -> list:
    """Names reachable from ``root``, children before parents."""
    if root not in rules:
        raise DanglingReference("root %r has no rule" % (root,))
    state = {}
    order = []
    stack = [(root, False)]
    while stack:
        name, done = stack.pop()
        if done:
            state[name] = 2
            order.append(name)
            continue
        st = state.get(name)
        if st == 2:
            continue
        if st == 1:
            raise CyclicRule("rule %r is part of a cycle" % (name,))
        state[name] = 1
        stack.append((name, True))
        rhs = rules[name]
        if isinstance(rhs, int):
            continue
        for child in reversed(list(rhs)):
            if child not in rules:
                raise DanglingReference("rule %r references undefined %r" % (name, child))
            cs = state.get(child)
            if cs == 1:
                raise CyclicRule("rule %r references %r, which is on the current path" % (name, child))
            if cs is None:
                stack.append((child, False))
    return order


def cnf_normalize(rules: Mapping[Hashable, Rhs], root) -> Grammar:
    """Convert an acyclic grammar with arbitrary right-hand sides to CNF.

    ``rules`` maps each name either to an ``int`` (a terminal rule producing
    that symbol) or to a sequence of names.  A right-hand side of length one
    is an alias.  Longer right-hand sides are binarised as right-nested
    chains, ``X -> A B C`` becoming ``X -> A X'`` and ``X' -> B C``.
    """
    order = _topo_order(rules, root)
    left, right, symbol = [], [], []
    term_id = {}
    ident = {}

    def pair(a, b):
        left.append(a)
        right.append(b)
        symbol.append(-1)
        return len(left) - 1

    # terminals first so they occupy ids 0..sigma-1
    for name in sorted((x for x in order if isinstance(rules[x], int)),
                       key=lambda x: rules[x]):
        s = rules[name]
        if s < 0:
            raise NotCNF("terminal symbols must be non-negative, got %d" % s)
        if s not in term_id:
            term_id[s] = len(left)
            left.append(-1)
            right.append(-1)
            symbol.append(s)
        ident[name] = term_id[s]
    for name in order:
        rhs = rules[name]
        if isinstance(rhs, int):
            continue
        ids = [ident[c] for c in rhs]
        if not ids:
            raise NotCNF("rule %r has an empty right-hand side" % (name,))
        cur = ids[-1]
        if len(ids) >= 2:
            cur = pair(ids[-2], ids[-1])
            for c in reversed(ids[:-2]):
                cur = pair(c, cur)
        ident[name] = cur
    return prune(Grammar(left, right, symbol, ident[root]))


def grammar_from_cnf_rules(rules: Mapping[Hashable, Rhs], root) -> Grammar:
    """Like :func:`cnf_normalize` but refuse anything that is not already CNF."""
    for name, rhs in rules.items():
        if not isinstance(rhs, int) and len(rhs) != 2:
            raise NotCNF("rule %r has %d symbols on its right-hand side" % (name, len(rhs)))
    return cnf_normalize(rules, root)


# -- builders ----------------------------------------------------------------

def build_grammar(text: Iterable[int]) -> Grammar:
    """Compress ``text`` by repeated pair replacement.

    Each round counts adjacent pairs and replaces, in order of decreasing
    frequency, every pair that still occurs at least twice and cannot
    overlap another pair chosen in the same round.  Rounds continue until
    no pair repeats; the remaining sequence becomes a balanced binary tree
    under the root.
    """
    seq = list(text)
    if not seq:
        raise EmptyInput("cannot build a grammar for an empty text")
    alphabet = sorted(set(seq))
    code = {s: k for k, s in enumerate(alphabet)}
    left = [-1] * len(alphabet)
    right = [-1] * len(alphabet)
    symbol = list(alphabet)
    seq = [code[s] for s in seq]

    while len(seq) >= 2:
        counts = Counter(zip(seq, seq[1:]))
        cands = [(f, p) for p, f in counts.items() if f >= 2]
        if not cands:
            break
        cands.sort(key=lambda fp: (-fp[0], fp[1]))
        lefts, rights = set(), set()
        chosen = {}
        for _, (a, b) in cands:
            if a in rights or b in lefts:
                continue
            chosen[(a, b)] = len(left)
            left.append(a)
            right.append(b)
            symbol.append(-1)
            lefts.add(a)
            rights.add(b)
        out = []
        push = out.append
        get = chosen.get
        i, last = 0, len(seq) - 1
        while i < last:
            r = get((seq[i], seq[i + 1]))
            if r is None:
                push(seq[i])
                i += 1
            else:
                push(r)
                i += 2
        if i == last:
            push(seq[last])
        seq = out

    root = _balanced_top(seq, left, right, symbol)
    return Grammar(left, right, symbol, root)


def _balanced_top(seq, left, right, symbol):
    level = list(seq)
    while len(level) > 1:
        nxt = []
        for k in range(0, len(level) - 1, 2):
            left.append(level[k])
            right.append(level[k + 1])
            symbol.append(-1)
            nxt.append(len(left) - 1)
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def build_balanced_grammar(text: Iterable[int]) -> Grammar:
    """Weight-balanced grammar: split every factor at its midpoint.

    Identical (left, right) pairs are shared, so repeated aligned blocks
    compress.  Children lengths differ by at most one, which makes the
    result weight-balanced for any ratio up to 1/2.
    """
    seq = list(text)
    if not seq:
        raise EmptyInput("cannot build a grammar for an empty text")
    alphabet = sorted(set(seq))
    code = {s: k for k, s in enumerate(alphabet)}
    left = [-1] * len(alphabet)
    right = [-1] * len(alphabet)
    symbol = list(alphabet)
    seq = [code[s] for s in seq]
    pairs = {}

    def make(a, b):
        r = pairs.get((a, b))
        if r is None:
            r = pairs[(a, b)] = len(left)
            left.append(a)
            right.append(b)
            symbol.append(-1)
        return r

    # explicit post-order over (lo, hi) intervals
    results = []
    stack = [(0, len(seq), False)]
    while stack:
        lo, hi, done = stack.pop()
        if hi - lo == 1:
            results.append(seq[lo])
        elif done:
            b = results.pop()
            a = results.pop()
            results.append(make(a, b))
        else:
            mid = (lo + hi) // 2
            stack.append((lo, hi, True))
            stack.append((mid, hi, False))
            stack.append((lo, mid, False))
    return Grammar(left, right, symbol, results[0])


# -- GCS1 text format --------------------------------------------------------

def write_grammar(g: Grammar, fp) -> None:
    fp.write("%s %d %d %d\n" % (MAGIC, g.sigma, g.n, g.root))
    for r, rule in g.rules():
        if rule[0] == "T":
            fp.write("T %d %d\n" % (r, rule[1]))
        else:
            fp.write("P %d %d %d\n" % (r, rule[1], rule[2]))


def dumps_grammar(g: Grammar) -> str:
    import io
    buf = io.StringIO()
    write_grammar(g, buf)
    return buf.getvalue()


def read_grammar(fp) -> Grammar:
    """Parse the line-oriented GCS1 format.

    Blank lines and lines starting with ``#`` are ignored.  Rule ids are
    arbitrary integers; rules are re-sorted topologically and unreachable
    rules are dropped.
    """
    lines = [ln.split() for ln in fp if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0][0] != MAGIC or len(lines[0]) != 4:
        raise InvalidGrammarFile("missing '%s <sigma> <nrules> <root>' header" % MAGIC)
    try:
        sigma, nrules, root = (int(x) for x in lines[0][1:])
    except ValueError:
        raise InvalidGrammarFile("non-integer header field") from None
    rules = {}
    for k, parts in enumerate(lines[1:], start=2):
        try:
            if parts[0] == "T" and len(parts) == 3:
                rid, rhs = int(parts[1]), int(parts[2])
            elif parts[0] == "P" and len(parts) == 4:
                rid, rhs = int(parts[1]), (int(parts[2]), int(parts[3]))
            else:
                raise ValueError
        except ValueError:
            raise InvalidGrammarFile("malformed rule on line %d: %r" % (k, " ".join(parts))) from None
        if rid in rules:
            raise InvalidGrammarFile("rule id %d defined twice" % rid)
        rules[rid] = rhs
    if len(rules) != nrules:
        raise InvalidGrammarFile("header says %d rules, found %d" % (nrules, len(rules)))
    nsym = len({v for v in rules.values() if isinstance(v, int)})
    if nsym != sigma:
        raise InvalidGrammarFile("header says sigma=%d, found %d terminal symbols" % (sigma, nsym))
    if _canonical(rules):
        # ids are already 0..n-1 in topological order: keep them
        left, right, symbol = [], [], []
        for rid in range(len(rules)):
            rhs = rules[rid]
            if isinstance(rhs, int):
                left.append(-1)
                right.append(-1)
                symbol.append(rhs)
            else:
                left.append(rhs[0])
                right.append(rhs[1])
                symbol.append(-1)
        try:
            return Grammar(left, right, symbol, root)
        except UnreachableRule:
            pass
    return grammar_from_cnf_rules(rules, root)


def _canonical(rules) -> bool:
    if set(rules) != set(range(len(rules))):
        return False
    return all(isinstance(rhs, int) or (0 <= rhs[0] < rid and 0 <= rhs[1] < rid)
               for rid, rhs in rules.items())


def loads_grammar(text: str) -> Grammar:
    return read_grammar(text.splitlines())
