"""Shallow-traversal engine for grammars of small height.

Each rule longer than ``w`` symbols gets an expanded right-hand side: its
frontier after unfolding ``d = max(1, floor(eps * log2 log2 N))`` levels of
the binary rules, so a top-down walk moves ``d`` levels per visited node.
Frontier entries of length ``<= w`` are not unfolded further and carry
their whole expansion as a packed literal.

Per node we keep the prefix lengths of the frontier (searched with
``bisect``; the frontier has at most ``2**d`` entries) and, per symbol, the
cumulative occurrence counts used by rank and select.  Every rule also
keeps packed fringes of ``F = w * ceil(log2(N) ** eps)`` symbols so the
boundary parts of an extraction can be copied instead of decompressed.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right

from .access import packed_fringes
from .errors import OccurrenceOutOfRange, PositionOutOfRange
from .packing import Packer, WordSink, word_width
from .rankselect import symbol_totals

DEFAULT_EPSILON = 0.5


def expansion_depth(N: int, eps: float) -> int:
    ll = math.log2(math.log2(N)) if N > 2 else 0.0
    return max(1, int(eps * ll))


def fringe_width(N: int, w: int, eps: float) -> int:
    lg = math.log2(N) if N > 1 else 1.0
    return w * max(1, math.ceil(lg ** eps))


class BalancedIndex:
    _state = ("eps", "depth", "w", "F", "items", "lits", "starts", "cum", "fl", "fr")

    def __init__(self, g, eps: float = DEFAULT_EPSILON, depth: int | None = None,
                 w: int | None = None):
        self.g = g
        self.eps = float(eps)
        self.depth = depth if depth is not None else expansion_depth(g.N, eps)
        self.w = w if w is not None else word_width(g.N, g.sigma)
        self.F = max(self.w, fringe_width(g.N, self.w, eps))
        self.packer = Packer(g.sigma, g.alphabet)
        self.fl, self.fr = packed_fringes(g, self.packer, self.F)
        self._build_nodes()

    @classmethod
    def from_state(cls, g, state):
        ix = cls.__new__(cls)
        ix.g = g
        ix.packer = Packer(g.sigma, g.alphabet)
        for k in cls._state:
            setattr(ix, k, state[k])
        return ix

    def state(self) -> dict:
        return {k: getattr(self, k) for k in self._state}

    def _build_nodes(self):
        g, w, d = self.g, self.w, self.depth
        L, left, right = g.length, g.left, g.right
        fl = self.fl
        tot = symbol_totals(g)
        sigma = g.sigma
        items, lits, starts = [], [], []
        cum = [[] for _ in range(sigma)]
        for r in range(g.n):
            if L[r] <= w:
                items.append([])
                lits.append([])
                starts.append([])
                for c in range(sigma):
                    cum[c].append([])
                continue
            front = [r]
            for _ in range(d):
                nxt = []
                for y in front:
                    if L[y] > w:
                        nxt.append(left[y])
                        nxt.append(right[y])
                    else:
                        nxt.append(y)
                front = nxt
            st, acc = [], 0
            for y in front:
                st.append(acc)
                acc += L[y]
            items.append(front)
            lits.append([fl[y] if L[y] <= w else -1 for y in front])
            starts.append(st)
            for c in range(sigma):
                t = tot[c]
                cc, a = [0], 0
                for y in front:
                    a += t[y]
                    cc.append(a)
                cum[c].append(cc)
        self.items, self.lits, self.starts, self.cum = items, lits, starts, cum

    # -- inspection --------------------------------------------------------

    def expanded(self, r: int):
        """``(vars, prefix lengths)`` of rule ``r``'s expanded right-hand side."""
        return tuple(self.items[r]), tuple(self.starts[r])

    def prefix_counts(self, symbol, r: int) -> tuple:
        c = self.g.code.get(symbol)
        if c is None:
            return (0,) * (len(self.items[r]) + 1)
        return tuple(self.cum[c][r])

    # -- single-position queries ----------------------------------------

    def _check_pos(self, i, lo):
        if not lo <= i <= self.g.N:
            raise PositionOutOfRange("position %d outside %d..%d" % (i, lo, self.g.N))

    def access(self, i: int, stats=None):
        self._check_pos(i, 1)
        g, w, pk = self.g, self.w, self.packer
        L = g.length
        r, x, visits = g.root, i, 0
        while True:
            visits += 1
            if L[r] <= w:
                code = pk.get(self.fl[r], x - 1)
                break
            st = self.starts[r]
            k = bisect_right(st, x - 1) - 1
            x -= st[k]
            lit = self.lits[r][k]
            if lit >= 0:
                code = pk.get(lit, x - 1)
                break
            r = self.items[r][k]
        if stats is not None:
            stats.nodes_visited += visits
        return g.alphabet[code]

    def rank(self, symbol, i: int, stats=None) -> int:
        self._check_pos(i, 0)
        g, w, pk = self.g, self.w, self.packer
        c = g.code.get(symbol)
        if i == 0:
            return 0
        if c is None:
            self.access(i, stats)
            return 0
        L, cum = g.length, self.cum[c]
        r, x, acc, visits = g.root, i, 0, 0
        while True:
            visits += 1
            if L[r] <= w:
                lit = self.fl[r]
                break
            st = self.starts[r]
            k = bisect_right(st, x - 1) - 1
            x -= st[k]
            acc += cum[r][k]
            lit = self.lits[r][k]
            if lit >= 0:
                break
            r = self.items[r][k]
        if stats is not None:
            stats.nodes_visited += visits
        return acc + pk.codes(lit, x).count(c)

    def select(self, symbol, k: int, stats=None) -> int:
        g, w, pk = self.g, self.w, self.packer
        c = g.code.get(symbol)
        total = self.count(symbol)
        if not 1 <= k <= total:
            raise OccurrenceOutOfRange(
                "occurrence %d of %r requested, text has %d" % (k, symbol, total))
        L, cum = g.length, self.cum[c]
        r, pos, visits = g.root, 0, 0
        while True:
            visits += 1
            if L[r] <= w:
                lit, n = self.fl[r], L[r]
                break
            cc = cum[r]
            j = bisect_left(cc, k) - 1
            k -= cc[j]
            pos += self.starts[r][j]
            lit = self.lits[r][j]
            if lit >= 0:
                n = L[self.items[r][j]]
                break
            r = self.items[r][j]
        if stats is not None:
            stats.nodes_visited += visits
        codes = pk.codes(lit, n)
        seen = 0
        for p, x in enumerate(codes, 1):
            if x == c:
                seen += 1
                if seen == k:
                    return pos + p
        raise AssertionError("cumulative counts out of sync")

    def count(self, symbol) -> int:
        g = self.g
        c = g.code.get(symbol)
        if c is None:
            return 0
        if g.length[g.root] <= self.w:
            return self.packer.codes(self.fl[g.root], g.N).count(c)
        return self.cum[c][g.root][-1]

    # -- extraction ---------------------------------------------------------

    def _plan(self):
        """Per node, its items in reverse with literals as ready chunks."""
        L = self.g.length
        plan = []
        for its, ls in zip(self.items, self.lits):
            plan.append(tuple((ls[k], L[y]) if ls[k] >= 0 else y
                              for k, y in reversed(list(enumerate(its)))))
        self._dec = plan
        return plan

    def _decompress(self, r, sink, stats):
        L, w = self.g.length, self.w
        put = sink.chunks.append
        if L[r] <= w:
            put((self.fl[r], L[r]))
            if stats is not None:
                stats.decompress_nodes += 1
            return
        plan = self.__dict__.get("_dec") or self._plan()
        nodes = 0
        stack = [r]
        pop, extend = stack.pop, stack.extend
        while stack:
            x = pop()
            if x.__class__ is tuple:
                put(x)
                continue
            nodes += 1
            extend(plan[x])
        if stats is not None:
            stats.decompress_nodes += nodes

    def _emit_item(self, r, k, sink, stats):
        lit = self.lits[r][k]
        y = self.items[r][k]
        if lit >= 0:
            sink.put(lit, self.g.length[y])
        else:
            self._decompress(y, sink, stats)

    def _emit_items(self, r, lo, hi, sink, stats):
        for k in range(lo, hi):
            self._emit_item(r, k, sink, stats)

    def _prefix(self, r, y, sink, stats):
        """Write ``r[1..y]``."""
        L, w, F, pk = self.g.length, self.w, self.F, self.packer
        visits = 0
        while True:
            if y == L[r]:
                self._decompress(r, sink, stats)
                break
            if y <= F:
                sink.put(pk.head(self.fl[r], y), y)
                break
            visits += 1
            st = self.starts[r]
            k = bisect_right(st, y - 1) - 1
            ell = st[k]
            if ell >= F:
                self._emit_items(r, 0, k, sink, stats)
            elif ell:
                sink.put(pk.head(self.fl[r], ell), ell)
            y -= ell
            lit = self.lits[r][k]
            if lit >= 0:
                sink.put(pk.head(lit, y), y)
                break
            r = self.items[r][k]
        if stats is not None:
            stats.nodes_visited += visits

    def _suffix(self, r, y, sink, stats):
        """Write ``r[y..|r|]``."""
        L, w, F, pk = self.g.length, self.w, self.F, self.packer
        pending = []
        visits = 0
        while True:
            n = L[r]
            if y == 1:
                self._decompress(r, sink, stats)
                break
            m = n - y + 1
            if m <= F:
                sink.put(pk.tail(self.fr[r], min(F, n), m), m)
                break
            visits += 1
            st = self.starts[r]
            k = bisect_right(st, y - 1) - 1
            y0 = L[self.items[r][k]]
            rest = n - st[k] - y0
            if rest >= F:
                pending.append((r, k + 1))
            elif rest:
                pending.append((pk.tail(self.fr[r], min(F, n), rest), rest, None))
            y -= st[k]
            lit = self.lits[r][k]
            if lit >= 0:
                sink.put(pk.slice(lit, y - 1, y0 - y + 1), y0 - y + 1)
                break
            r = self.items[r][k]
        if stats is not None:
            stats.nodes_visited += visits
        for p in reversed(pending):
            if len(p) == 3:
                sink.put(p[0], p[1])
            else:
                self._emit_items(p[0], p[1], len(self.items[p[0]]), sink, stats)

    def _extract(self, i, j, sink, stats):
        g, w, pk = self.g, self.w, self.packer
        L = g.length
        r, a, b, visits = g.root, i, j, 0
        while True:
            if a == 1 and b == L[r]:
                self._decompress(r, sink, stats)
                break
            visits += 1
            if L[r] <= w:
                sink.put(pk.slice(self.fl[r], a - 1, b - a + 1), b - a + 1)
                break
            st = self.starts[r]
            ka = bisect_right(st, a - 1) - 1
            kb = bisect_right(st, b - 1) - 1
            if ka == kb:
                a -= st[ka]
                b -= st[ka]
                lit = self.lits[r][ka]
                if lit >= 0:
                    sink.put(pk.slice(lit, a - 1, b - a + 1), b - a + 1)
                    break
                r = self.items[r][ka]
                continue
            its, lits = self.items[r], self.lits[r]
            ya = a - st[ka]
            if lits[ka] >= 0:
                m = L[its[ka]] - ya + 1
                sink.put(pk.slice(lits[ka], ya - 1, m), m)
            else:
                self._suffix(its[ka], ya, sink, stats)
            self._emit_items(r, ka + 1, kb, sink, stats)
            yb = b - st[kb]
            if lits[kb] >= 0:
                sink.put(pk.head(lits[kb], yb), yb)
            else:
                self._prefix(its[kb], yb, sink, stats)
            break
        if stats is not None:
            stats.nodes_visited += visits

    def extract(self, i: int, j: int, stats=None) -> list:
        N = self.g.N
        if not 1 <= i <= j <= N:
            raise PositionOutOfRange("interval [%d, %d] outside 1..%d" % (i, j, N))
        sink = WordSink()
        self._extract(i, j, sink, stats)
        return sink.symbols(self.packer)

    def decompress_rule(self, r: int, stats=None) -> list:
        sink = WordSink()
        self._decompress(r, sink, stats)
        return sink.symbols(self.packer)


def build_balanced(g, eps: float = DEFAULT_EPSILON, **kw) -> BalancedIndex:
    return BalancedIndex(g, eps, **kw)
