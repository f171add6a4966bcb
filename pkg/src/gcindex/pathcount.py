"""Counting node-to-sink paths in a DAG with two rank queries.

A DAG whose internal nodes all have out-degree 2 is a grammar: each
internal node is a pair rule over its two ordered out-edges and each sink
is a terminal.  The generated string lists, left to right, the sink at the
end of every source-to-sink path, so the number of paths from a node ``u``
to a sink ``v`` is the number of ``v``'s inside any occurrence of ``u``'s
expansion.  Using the leftmost occurrence ``[i, j]`` that is
``rank(v, j) - rank(v, i - 1)``.

An arbitrary DAG is brought into that shape by:

1. replacing every out-degree-1 node by its (transitively resolved) target,
   remembering the replacement in ``node_of``;
2. joining the images of all sources under a new root when there is more
   than one source;
3. splitting every node of out-degree ``d >= 3`` with ``d - 2`` right-nested
   intermediate nodes, keeping the input edge order.
"""

from __future__ import annotations

import os

from .errors import CyclicInput, DagError, NoSink, NotASink, PathCountOverflow, UnknownNode
from .grammar import Grammar
from .heavypath import decompose
from .rankselect import RankIndex

DEFAULT_MAX_PATHS = 1 << 48


def max_paths_from_env() -> int:
    v = os.environ.get("GCS_MAX_PATHS")
    return int(v) if v else DEFAULT_MAX_PATHS


class InputDag:
    """Nodes in declaration order plus an ordered multi-edge list."""

    def __init__(self, nodes=(), edges=()):
        self.nodes = []
        self._index = {}
        for v in nodes:
            self.add_node(v)
        self.edges = []
        for a, b in edges:
            self.add_edge(a, b)

    def add_node(self, v):
        if v not in self._index:
            self._index[v] = len(self.nodes)
            self.nodes.append(v)

    def add_edge(self, a, b):
        self.add_node(a)
        self.add_node(b)
        self.edges.append((a, b))

    def __contains__(self, v):
        return v in self._index

    def successors(self) -> dict:
        succ = {v: [] for v in self.nodes}
        for a, b in self.edges:
            succ[a].append(b)
        return succ

    def sources(self) -> list:
        has_in = {b for _, b in self.edges}
        return [v for v in self.nodes if v not in has_in]

    def sinks(self) -> list:
        has_out = {a for a, _ in self.edges}
        return [v for v in self.nodes if v not in has_out]

    def topo_order(self) -> list:
        """Nodes with every edge pointing forward (Kahn, stable)."""
        succ = self.successors()
        indeg = dict.fromkeys(self.nodes, 0)
        for _, b in self.edges:
            indeg[b] += 1
        order = [v for v in self.nodes if indeg[v] == 0]
        k = 0
        while k < len(order):
            for b in succ[order[k]]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    order.append(b)
            k += 1
        if len(order) != len(self.nodes):
            raise CyclicInput("the graph has a cycle")
        return order


def parse_dag(text: str) -> InputDag:
    """Read ``V <id>`` and ``E <from> <to>`` lines; ``#`` starts a comment."""
    d = InputDag()
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0] == "V" and len(parts) == 2:
            d.add_node(parts[1])
        elif parts[0] == "E" and len(parts) == 3:
            d.add_edge(parts[1], parts[2])
        else:
            raise DagError("line %d: expected 'V <id>' or 'E <from> <to>'" % lineno)
    return d


def read_dag(path) -> InputDag:
    with open(path, encoding="utf-8") as fp:
        return parse_dag(fp.read())


def count_all_paths(d: InputDag, order=None) -> int:
    """Number of source-to-sink paths, by dynamic programming."""
    order = order if order is not None else d.topo_order()
    succ = d.successors()
    ways = {}
    for v in reversed(order):
        s = succ[v]
        ways[v] = sum(ways[b] for b in s) if s else 1
    return sum(ways[s] for s in d.sources())


class NormalizedDag:
    """Out-degree 0/2 DAG with one root.

    Nodes are integers.  ``children[x]`` is a pair or None for sinks;
    ``label[x]`` is the original id for surviving nodes and None for the
    root/intermediates created here.  ``node_of`` maps every original node
    to the node standing in for it.
    """

    def __init__(self, children, label, node_of, root, added):
        self.children = children
        self.label = label
        self.node_of = node_of
        self.root = root
        self.added = added

    def __len__(self):
        return len(self.children)

    def outdegree(self, x) -> int:
        return 0 if self.children[x] is None else 2


def normalize_dag(d: InputDag) -> NormalizedDag:
    order = d.topo_order()
    if not d.nodes:
        raise NoSink("the graph is empty")
    succ = d.successors()

    # step 1: collapse out-degree-1 nodes, children before parents
    rep = {}
    for v in reversed(order):
        s = succ[v]
        rep[v] = rep[s[0]] if len(s) == 1 else v

    survivors = [v for v in d.nodes if rep[v] == v]
    ids = {v: k for k, v in enumerate(survivors)}
    children = [None] * len(survivors)
    label = list(survivors)
    out = {}
    for v in survivors:
        if succ[v]:
            out[ids[v]] = [ids[rep[b]] for b in succ[v]]

    # step 2: one root over the images of all sources
    tops = [ids[rep[s]] for s in d.sources()]
    added = 0
    if len(tops) == 1:
        root = tops[0]
    else:
        root = len(children)
        children.append(None)
        label.append(None)
        out[root] = tops
        added += 1

    # step 3: binarize, right-nested
    for x in sorted(out):
        kids = out[x]
        cur = x
        for k in range(len(kids) - 2):
            nxt = len(children)
            children.append(None)
            label.append(None)
            children[cur] = (kids[k], nxt)
            cur = nxt
            added += 1
        children[cur] = (kids[-2], kids[-1])

    node_of = {v: ids[rep[v]] for v in d.nodes}
    return NormalizedDag(children, label, node_of, root, added)


def dag_to_grammar(nd: NormalizedDag, sink_symbol: dict):
    """Grammar over a normalized DAG; returns ``(grammar, rule_of_node)``.

    ``sink_symbol`` maps the original id of every sink to its terminal
    symbol.
    """
    m = len(nd)
    # topological order: children first
    indeg = [0] * m
    for ch in nd.children:
        if ch is not None:
            indeg[ch[0]] += 1
            indeg[ch[1]] += 1
    order = [nd.root]
    k = 0
    while k < len(order):
        ch = nd.children[order[k]]
        if ch is not None:
            for y in ch:
                indeg[y] -= 1
                if indeg[y] == 0:
                    order.append(y)
        k += 1
    order.reverse()
    rule = [-1] * m
    left, right, symbol = [], [], []
    for x in order:
        rule[x] = len(left)
        ch = nd.children[x]
        if ch is None:
            left.append(-1)
            right.append(-1)
            symbol.append(sink_symbol[nd.label[x]])
        else:
            left.append(rule[ch[0]])
            right.append(rule[ch[1]])
            symbol.append(-1)
    return Grammar(left, right, symbol, rule[nd.root]), rule


def leftmost_starts(g) -> list:
    """1-based start of the first occurrence of every rule in the text."""
    INF = g.N + 1
    start = [INF] * g.n
    start[g.root] = 1
    L = g.length
    for r in range(g.n - 1, -1, -1):
        a = g.left[r]
        if a < 0 or start[r] == INF:
            continue
        s = start[r]
        if s < start[a]:
            start[a] = s
        b = g.right[r]
        if s + L[a] < start[b]:
            start[b] = s + L[a]
    return start


class PathCountIndex:
    def __init__(self, d: InputDag, max_paths: int | None = None):
        order = d.topo_order()
        sinks = d.sinks()
        if not sinks:
            raise NoSink("the graph has no sink")
        limit = max_paths if max_paths is not None else max_paths_from_env()
        total = count_all_paths(d, order)
        if total > limit:
            raise PathCountOverflow(
                "%d source-to-sink paths exceed the ceiling of %d" % (total, limit))
        self.sink_symbol = {v: k for k, v in enumerate(sinks)}
        self.nd = normalize_dag(d)
        self.g, rule = dag_to_grammar(self.nd, self.sink_symbol)
        self.rule_of = {v: rule[x] for v, x in self.nd.node_of.items()}
        self.start = leftmost_starts(self.g)
        self.forest = decompose(self.g)
        self.ranks = RankIndex(self.g, self.forest)

    @classmethod
    def from_parts(cls, g, forest, ranks, rule_of, sink_symbol, start):
        ix = cls.__new__(cls)
        ix.nd = None
        ix.g, ix.forest, ix.ranks = g, forest, ranks
        ix.rule_of, ix.sink_symbol, ix.start = rule_of, sink_symbol, start
        return ix

    @property
    def total_paths(self) -> int:
        return self.g.N

    def leftmost(self, r: int):
        s = self.start[r]
        return s, s + self.g.length[r] - 1

    def count_paths(self, u, v, stats=None) -> int:
        """Distinct paths (edge sequences) from node ``u`` to sink ``v``."""
        if u not in self.rule_of:
            raise UnknownNode(u)
        if v not in self.rule_of:
            raise UnknownNode(v)
        c = self.sink_symbol.get(v)
        if c is None:
            raise NotASink("%s is not a sink" % (v,))
        if u in self.sink_symbol:
            # empty path to itself, none to any other sink
            return 1 if u == v else 0
        i, j = self.leftmost(self.rule_of[u])
        rk = self.ranks
        return rk.rank(c, j, stats) - rk.rank(c, i - 1, stats)


def build_pathcount(d: InputDag, max_paths: int | None = None) -> PathCountIndex:
    return PathCountIndex(d, max_paths)

