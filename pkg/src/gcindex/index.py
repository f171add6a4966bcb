"""Query engines over one grammar, plus saving and loading them."""

from __future__ import annotations

from .access import AccessIndex
from .balanced import DEFAULT_EPSILON, BalancedIndex
from .errors import CorruptIndex, GCIndexError
from .grammar import Grammar, build_grammar
from .heavypath import HeavyForest, decompose
from .pathcount import PathCountIndex
from .rankselect import CharDag, RankIndex, SelectIndex, symbol_totals
from . import serialize


class UnbalancedIndex:
    """Heavy-path engine: access/extract plus rank/select."""

    engine = "unbalanced"

    def __init__(self, g: Grammar, w: int | None = None):
        self.g = g
        self.forest = decompose(g)
        self.acc = AccessIndex(g, self.forest, w)
        tot = symbol_totals(g)
        self.ranks = RankIndex(g, self.forest, tot)
        self.selects = SelectIndex(g, tot)

    @property
    def w(self):
        return self.acc.w

    def access(self, i, stats=None):
        return self.acc.access(i, stats)

    def extract(self, i, j, stats=None):
        return self.acc.extract(i, j, stats)

    def decompress_rule(self, r, stats=None):
        return self.acc.decompress_rule(r, stats)

    def rank(self, symbol, i, stats=None):
        return self.ranks.rank(symbol, i, stats)

    def select(self, symbol, k, stats=None):
        return self.selects.select(symbol, k, stats)

    def count(self, symbol):
        return self.ranks.count(symbol)

    def state(self) -> dict:
        return {
            "grammar": grammar_state(self.g),
            "forest": self.forest.state(),
            "access": self.acc.state(),
            "rank": self.ranks.state(),
            "select": {str(c): {"dag": d.state(), "forest": d.forest.state()}
                       for c, d in enumerate(self.selects.dags)},
        }

    @classmethod
    def from_state(cls, st: dict) -> "UnbalancedIndex":
        g = grammar_from_state(st["grammar"])
        ix = cls.__new__(cls)
        ix.g = g
        ix.forest = HeavyForest.from_state(st["forest"])
        ix.acc = AccessIndex.from_state(g, ix.forest, st["access"])
        ix.ranks = RankIndex.from_state(g, ix.forest, st["rank"])
        sel = st.get("select", {})
        dags = []
        for c in range(g.sigma):
            s = sel[str(c)]
            dags.append(CharDag.from_state(s["dag"], HeavyForest.from_state(s["forest"])))
        ix.selects = SelectIndex.from_parts(g, ix.ranks.tot, dags)
        return ix


class BalancedEngine(BalancedIndex):
    engine = "balanced"

    def state(self) -> dict:
        return {"grammar": grammar_state(self.g), "balanced": super().state()}

    @classmethod
    def from_state(cls, st: dict) -> "BalancedEngine":
        g = grammar_from_state(st["grammar"])
        ix = cls.__new__(cls)
        ix.g = g
        base = BalancedIndex.from_state(g, st["balanced"])
        ix.__dict__.update(base.__dict__)
        return ix


class PathCountEngine(PathCountIndex):
    engine = "pathcount"

    def state(self) -> dict:
        nodes = list(self.rule_of)
        sinks = list(self.sink_symbol)
        return {
            "grammar": grammar_state(self.g),
            "forest": self.forest.state(),
            "rank": self.ranks.state(),
            "nodes": nodes,
            "node_rule": [self.rule_of[v] for v in nodes],
            "sinks": sinks,
            "sink_symbol": [self.sink_symbol[v] for v in sinks],
            "start": self.start,
        }

    @classmethod
    def from_state(cls, st: dict) -> "PathCountEngine":
        g = grammar_from_state(st["grammar"])
        forest = HeavyForest.from_state(st["forest"])
        ranks = RankIndex.from_state(g, forest, st["rank"])
        rule_of = dict(zip(st["nodes"], st["node_rule"]))
        sink_symbol = dict(zip(st["sinks"], st["sink_symbol"]))
        ix = cls.__new__(cls)
        ix.nd = None
        ix.g, ix.forest, ix.ranks = g, forest, ranks
        ix.rule_of, ix.sink_symbol, ix.start = rule_of, sink_symbol, st["start"]
        return ix


def grammar_state(g: Grammar) -> dict:
    return {"left": g.left, "right": g.right, "symbol": g.symbol, "root": g.root}


def grammar_from_state(st: dict) -> Grammar:
    return Grammar(st["left"], st["right"], st["symbol"], st["root"])


ENGINES = {
    "unbalanced": UnbalancedIndex,
    "balanced": BalancedEngine,
    "pathcount": PathCountEngine,
}


def build_index(source, balanced: bool = False, epsilon: float = DEFAULT_EPSILON):
    """Index a text (any sequence of non-negative ints) or a Grammar."""
    g = source if isinstance(source, Grammar) else build_grammar(source)
    if balanced:
        return BalancedEngine(g, epsilon)
    return UnbalancedIndex(g)


def build_pathcount_index(dag, max_paths=None) -> PathCountEngine:
    return PathCountEngine(dag, max_paths)


def dumps_index(ix) -> bytes:
    return serialize.dumps(ix.engine, ix.state())


def loads_index(data: bytes):
    engine, st = serialize.loads(data)
    cls = ENGINES.get(engine)
    if cls is None:
        raise CorruptIndex("unknown engine tag %r" % engine)
    try:
        return cls.from_state(st)
    except GCIndexError as e:
        if isinstance(e, CorruptIndex):
            raise
        raise CorruptIndex("index state is inconsistent: %s" % e) from None
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise CorruptIndex("index state is incomplete: %r" % e) from None


def save_index(ix, path) -> int:
    data = dumps_index(ix)
    with open(path, "wb") as fp:
        fp.write(data)
    return len(data)


def load_index(path):
    with open(path, "rb") as fp:
        return loads_index(fp.read())
