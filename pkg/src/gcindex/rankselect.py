"""Rank and select on the unbalanced index.

Rank keeps, per rule R and symbol code c, ``v[c][R]``: the number of c's in
``R[1..center(R)]``.  A rank query walks the same light transitions as an
access query; at each exit node P the symbols strictly left of P inside the
current context number ``v[c][cur] - v[c][P]``.

Select builds one DAG per symbol.  Rules whose expansion lacks c are
dropped; a rule with exactly one c-bearing child collapses onto that child
(keeping its position offset).  What remains is binary again, so the same
heavy-path machinery applies with occurrence counts as weights.  Each
retained node's ``upos`` is the text position, inside the rule, of the
occurrence sitting at the node's (occurrence-weighted) center.
"""

from __future__ import annotations

from .errors import OccurrenceOutOfRange, PositionOutOfRange
from .heavypath import HeavyForest, decompose


def symbol_totals(g) -> list:
    """``tot[c][r]``: occurrences of symbol code ``c`` in rule ``r``."""
    n, sigma = g.n, g.sigma
    left, right = g.left, g.right
    tot = []
    for c in range(sigma):
        s = g.alphabet[c]
        t = [0] * n
        for v in range(n):
            a = left[v]
            if a < 0:
                t[v] = 1 if g.symbol[v] == s else 0
            else:
                t[v] = t[a] + t[right[v]]
        tot.append(t)
    return tot


class RankIndex:
    _state = ("tot", "v")

    def __init__(self, g, forest: HeavyForest | None = None, tot=None):
        self.g = g
        self.forest = forest if forest is not None else decompose(g)
        self.tot = tot if tot is not None else symbol_totals(g)
        left, heavy, hright = g.left, self.forest.heavy, self.forest.hright
        self.v = []
        for c in range(g.sigma):
            t = self.tot[c]
            vc = [0] * g.n
            for r in range(g.n):
                h = heavy[r]
                if h < 0:
                    vc[r] = t[r]
                elif hright[r]:
                    vc[r] = t[left[r]] + vc[h]
                else:
                    vc[r] = vc[h]
            self.v.append(vc)

    @classmethod
    def from_state(cls, g, forest, state):
        ix = cls.__new__(cls)
        ix.g, ix.forest = g, forest
        ix.tot, ix.v = state["tot"], state["v"]
        return ix

    def state(self) -> dict:
        return {"tot": self.tot, "v": self.v}

    def count(self, symbol) -> int:
        c = self.g.code.get(symbol)
        return 0 if c is None else self.tot[c][self.g.root]

    def rank(self, symbol, i: int, stats=None) -> int:
        """Occurrences of ``symbol`` in ``S[1..i]`` (``0 <= i <= N``)."""
        g = self.g
        if not 0 <= i <= g.N:
            raise PositionOutOfRange("position %d outside 0..%d" % (i, g.N))
        c = g.code.get(symbol)
        if i == 0:
            return 0
        f = self.forest
        if c is None:
            # still walk the path so instrumentation is comparable
            f.descend(g.root, i, stats)
            return 0
        return self.rank_code(c, g.root, i, stats)

    def rank_code(self, c: int, r: int, x: int, stats=None) -> int:
        """Occurrences of code ``c`` in ``expand(r)[1..x]`` for ``x >= 1``."""
        f = self.forest
        vc, tc, L = self.v[c], self.tot[c], self.g.length
        center = f.center
        acc = t = 0
        while x != center[r]:
            e = f.exit(r, x, stats)
            acc += vc[r] - vc[e.node]
            if e.light_left:
                x -= e.offset
            else:
                acc += tc[e.heavy]
                x -= e.offset + L[e.heavy]
            r = e.light
            t += 1
        if stats is not None:
            stats.light_transitions += t
        return acc + vc[r]


class CharDag:
    """Occurrence-weighted DAG of one symbol (see module docstring)."""

    _state = ("code", "orig", "root", "root_offset", "total")

    def __init__(self, g, c: int, tot_c: list):
        self.code = c
        n, L = g.n, g.length
        left, right = g.left, g.right
        node = [-1] * n
        off = [0] * n
        dl, dr, dw, dlp, drp, orig = [], [], [], [], [], []
        for v in range(n):
            if tot_c[v] == 0:
                continue
            a = left[v]
            if a < 0:
                node[v] = len(orig)
                dl.append(-1)
                dr.append(-1)
                dlp.append(0)
                drp.append(0)
            else:
                b = right[v]
                if tot_c[a] and tot_c[b]:
                    node[v] = len(orig)
                    dl.append(node[a])
                    dr.append(node[b])
                    dlp.append(off[a])
                    drp.append(L[a] + off[b])
                elif tot_c[a]:
                    node[v], off[v] = node[a], off[a]
                    continue
                else:
                    node[v], off[v] = node[b], L[a] + off[b]
                    continue
            dw.append(tot_c[v])
            orig.append(v)
        self.orig = orig
        self.total = tot_c[g.root]
        self.root = node[g.root]
        self.root_offset = off[g.root]
        self.forest = HeavyForest(dl, dr, dw, dlp, drp)
        self._dense = None

    @classmethod
    def from_state(cls, state, forest):
        d = cls.__new__(cls)
        for k in cls._state:
            setattr(d, k, state[k])
        d.forest = forest
        d._dense = None
        return d

    def state(self) -> dict:
        return {k: getattr(self, k) for k in self._state}

    def dense_id(self, r: int) -> int:
        if self._dense is None:
            self._dense = {v: k for k, v in enumerate(self.orig)}
        return self._dense.get(r, -1)

    def select(self, k: int, stats=None) -> int:
        f = self.forest
        v, _, pb, _ = f.descend(self.root, k, stats)
        return self.root_offset + pb + f.upos[v]


class SelectIndex:
    def __init__(self, g, tot=None):
        self.g = g
        self.tot = tot if tot is not None else symbol_totals(g)
        self.dags = [CharDag(g, c, self.tot[c]) for c in range(g.sigma)]

    @classmethod
    def from_parts(cls, g, tot, dags):
        ix = cls.__new__(cls)
        ix.g, ix.tot, ix.dags = g, tot, dags
        return ix

    def select(self, symbol, k: int, stats=None) -> int:
        """Position of the ``k``-th occurrence of ``symbol`` (1-based)."""
        c = self.g.code.get(symbol)
        total = 0 if c is None else self.dags[c].total
        if not 1 <= k <= total:
            raise OccurrenceOutOfRange(
                "occurrence %d of %r requested, text has %d" % (k, symbol, total))
        return self.dags[c].select(k, stats)

    def u_value(self, symbol, r: int):
        """``(occurrence rank, position)`` of the center occurrence of
        ``symbol`` inside rule ``r``, or None if ``r`` lacks the symbol."""
        g = self.g
        c = g.code.get(symbol)
        if c is None or self.tot[c][r] == 0:
            return None
        t = self.tot[c]
        pos = 0
        # follow collapsed single-child rules down to a retained node
        while g.left[r] >= 0:
            a, b = g.left[r], g.right[r]
            if t[a] and t[b]:
                break
            if t[a]:
                r = a
            else:
                pos += g.length[a]
                r = b
        d = self.dags[c]
        k = d.dense_id(r)
        return d.forest.center[k], pos + d.forest.upos[k]


class RankSelectIndex:
    def __init__(self, g, forest=None):
        self.g = g
        self.forest = forest if forest is not None else decompose(g)
        tot = symbol_totals(g)
        self.ranks = RankIndex(g, self.forest, tot)
        self.selects = SelectIndex(g, tot)

    def rank(self, symbol, i, stats=None):
        return self.ranks.rank(symbol, i, stats)

    def select(self, symbol, k, stats=None):
        return self.selects.select(symbol, k, stats)

    def count(self, symbol):
        return self.ranks.count(symbol)


def build_rank(g, forest=None) -> RankIndex:
    return RankIndex(g, forest)


def build_select_dags(g, forest=None) -> list:
    return SelectIndex(g).dags
