"""Brute-force reference answers.

Everything here works on the plain text (or the plain edge list) by direct
scanning.  Nothing is shared with the indexes, so agreement between the two
is meaningful.
"""

from __future__ import annotations

from .errors import CyclicInput, OccurrenceOutOfRange, PositionOutOfRange


def naive_access(text, i: int, j: int | None = None):
    """``text[i..j]`` (1-based, inclusive); a single symbol if ``j`` is None."""
    N = len(text)
    if j is None:
        if not 1 <= i <= N:
            raise PositionOutOfRange("position %d outside 1..%d" % (i, N))
        return text[i - 1]
    if not 1 <= i <= j <= N:
        raise PositionOutOfRange("interval [%d, %d] outside 1..%d" % (i, j, N))
    return list(text[i - 1:j])


def naive_rank(text, c, i: int) -> int:
    """Occurrences of ``c`` among the first ``i`` symbols."""
    if not 0 <= i <= len(text):
        raise PositionOutOfRange("position %d outside 0..%d" % (i, len(text)))
    k = 0
    for x in range(i):
        if text[x] == c:
            k += 1
    return k


def naive_select(text, c, k: int) -> int:
    """Position of the ``k``-th occurrence of ``c``."""
    seen = 0
    if k >= 1:
        for p, x in enumerate(text, 1):
            if x == c:
                seen += 1
                if seen == k:
                    return p
    raise OccurrenceOutOfRange("occurrence %d of %r not in text" % (k, c))


def _adjacency(edges):
    succ = {}
    for a, b in edges:
        succ.setdefault(a, []).append(b)
        succ.setdefault(b, [])
    return succ


def naive_count_paths(edges, u, v) -> int:
    """Edge sequences from ``u`` to ``v``; parallel edges count separately.

    ``edges`` is an iterable of ``(from, to)`` pairs (an object with an
    ``edges`` attribute is accepted too).
    """
    edges = getattr(edges, "edges", edges)
    succ = _adjacency(edges)
    memo = {}
    active = set()

    def go(x):
        if x == v:
            return 1
        if x in memo:
            return memo[x]
        if x in active:
            raise CyclicInput("cycle through %r" % (x,))
        active.add(x)
        total = 0
        for y in succ.get(x, ()):
            total += go(y)
        active.discard(x)
        memo[x] = total
        return total

    return go(u)


def naive_path_sinks(edges, nodes=None) -> list:
    """Sinks at the end of every source-to-sink path, listed by depth-first
    search in edge order (sources in ``nodes`` order).  Acyclic input only;
    exponential in general."""
    if nodes is None:
        nodes = getattr(edges, "nodes", None)
    edges = list(getattr(edges, "edges", edges))
    succ = _adjacency(edges)
    if nodes is None:
        nodes = list(succ)
    for v in nodes:
        succ.setdefault(v, [])
    targets = {b for _, b in edges}
    out = []
    for s in nodes:
        if s in targets:
            continue
        stack = [s]
        while stack:
            x = stack.pop()
            ys = succ[x]
            if not ys:
                out.append(x)
            else:
                stack.extend(reversed(ys))
    return out


def naive_total_paths(edges, nodes=None) -> int:
    return len(naive_path_sinks(edges, nodes))


class NaiveText:
    """A plain text answering queries by scanning.

    Rank on ``bytes`` uses ``bytes.count`` and select keeps per-symbol
    occurrence lists, so large texts stay usable as a reference.
    """

    def __init__(self, text):
        self.text = text
        self._occ = {}

    def __len__(self):
        return len(self.text)

    def access(self, i, j=None):
        return naive_access(self.text, i, j)

    def rank(self, c, i):
        t = self.text
        if isinstance(t, (bytes, bytearray)) and 0 <= i <= len(t):
            return t.count(bytes([c]), 0, i) if 0 <= c < 256 else 0
        return naive_rank(t, c, i)

    def occurrences(self, c) -> list:
        occ = self._occ.get(c)
        if occ is None:
            occ = [p for p, x in enumerate(self.text, 1) if x == c]
            self._occ[c] = occ
        return occ

    def select(self, c, k):
        occ = self.occurrences(c)
        if not 1 <= k <= len(occ):
            raise OccurrenceOutOfRange("occurrence %d of %r not in text" % (k, c))
        return occ[k - 1]
