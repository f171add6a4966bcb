"""Heavy-path decomposition of a binary DAG and the searches built on it.

Every internal node keeps the child of larger weight as its *heavy* child
(ties go left).  Following heavy children from any node ends at a leaf; the
leaf's position inside the node's expansion is the node's *center*.  The
heavy edges reversed form a forest rooted at the leaves.

Instead of biased skip trees, heavy-path search uses binary-lifting tables:
``jump[k][v]`` is the node 2**k heavy steps below ``v`` (clamped at the
leaf) and ``jw[k][v]`` / ``jp[k][v]`` are the weight and position of that
node's start inside ``v``.  One search costs ``levels`` table probes, where
``levels`` is the bit length of the longest heavy path.

The forest is generic over two measures.  *Weight* drives the decomposition
(expansion length for the grammar, occurrence count for a per-character
select DAG); *position* is the offset in the original text.  For the plain
grammar they coincide.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import PositionOutOfRange


class Exit(NamedTuple):
    """Where a position leaves the heavy path of a node."""

    step: int          # heavy steps from the start node down to ``node``
    node: int          # last node on the heavy path containing the position
    offset: int        # weight offset of ``node`` inside the start node
    pos_offset: int    # position offset of ``node`` inside the start node
    heavy: int         # heavy child of ``node``
    light: int         # light child of ``node``; contains the position
    light_left: bool   # light child is the left child of ``node``


class Triplet(NamedTuple):
    rule: int
    start: int
    end: int
    light: bool        # reached through a light edge (False: heavy-path leaf)


class HeavyForest:
    _state = ("left", "right", "weight", "lpos", "rpos", "heavy", "hright", "center",
              "upos", "leaf", "hdepth", "jump", "jw", "jp", "levels")

    def __init__(self, left, right, weight, lpos=None, rpos=None):
        n = len(left)
        self.left = left
        self.right = right
        self.weight = weight
        if lpos is None:
            lpos = [0] * n
        if rpos is None:
            rpos = [weight[a] if a >= 0 else 0 for a in left]
        self.lpos = lpos
        self.rpos = rpos

        heavy = [-1] * n
        hright = [False] * n
        center = [1] * n
        upos = [1] * n
        leaf = list(range(n))
        hdepth = [0] * n
        j0 = list(range(n))
        w0 = [0] * n
        p0 = [0] * n
        for v in range(n):
            a = left[v]
            if a < 0:
                continue
            b = right[v]
            if weight[a] >= weight[b]:
                h, dw, dp = a, 0, lpos[v]
            else:
                h, dw, dp = b, weight[a], rpos[v]
                hright[v] = True
            heavy[v] = h
            j0[v], w0[v], p0[v] = h, dw, dp
            center[v] = dw + center[h]
            upos[v] = dp + upos[h]
            leaf[v] = leaf[h]
            hdepth[v] = hdepth[h] + 1
        self.heavy = heavy
        self.hright = hright
        self.center = center
        self.upos = upos
        self.leaf = leaf
        self.hdepth = hdepth

        levels = max(1, max(hdepth, default=0).bit_length())
        jump, jw, jp = [j0], [w0], [p0]
        for _ in range(1, levels):
            J, W, P = jump[-1], jw[-1], jp[-1]
            jump.append([J[j] for j in J])
            jw.append([W[v] + W[j] for v, j in enumerate(J)])
            jp.append([P[v] + P[j] for v, j in enumerate(J)])
        self.jump, self.jw, self.jp = jump, jw, jp
        self.levels = levels

    def __len__(self):
        return len(self.left)

    @classmethod
    def from_state(cls, state: dict) -> "HeavyForest":
        f = cls.__new__(cls)
        for k in cls._state:
            setattr(f, k, state[k])
        return f

    def state(self) -> dict:
        return {k: getattr(self, k) for k in self._state}

    def heavy_is_left(self, v: int) -> bool:
        return self.heavy[v] >= 0 and not self.hright[v]

    def exit(self, v: int, x: int, stats=None) -> Exit:
        """Locate where weight-rank ``x`` (1-based) leaves ``v``'s heavy path.

        Requires ``x != center[v]``.  Galloping over the jump tables finds
        the deepest heavy-path node whose span still contains ``x``.
        """
        weight = self.weight
        cur, ow, op = v, 0, 0
        jump, jw, jp = self.jump, self.jw, self.jp
        for k in range(self.levels - 1, -1, -1):
            a = jump[k][cur]
            o = ow + jw[k][cur]
            if o < x <= o + weight[a]:
                op += jp[k][cur]
                ow = o
                cur = a
        if stats is not None:
            stats.probes += self.levels
        step = self.hdepth[v] - self.hdepth[cur]
        if self.hright[cur]:
            return Exit(step, cur, ow, op, self.heavy[cur], self.left[cur], True)
        return Exit(step, cur, ow, op, self.heavy[cur], self.right[cur], False)

    def descend(self, v: int, x: int, stats=None):
        """Walk light transitions until ``x`` is the center of the context.

        Returns ``(node, weight_base, position_base, light_count)`` where
        ``node``'s center is the target and the bases are the offsets of
        ``node`` inside ``v``.
        """
        center, weight = self.center, self.weight
        wb = pb = t = 0
        while x != center[v]:
            e = self.exit(v, x, stats)
            if e.light_left:
                dw, dp = e.offset, e.pos_offset + self.lpos[e.node]
            else:
                dw = e.offset + weight[e.heavy]
                dp = e.pos_offset + self.rpos[e.node]
            x -= dw
            wb += dw
            pb += dp
            v = e.light
            t += 1
        if stats is not None:
            stats.light_transitions += t
        return v, wb, pb, t


def decompose(g) -> HeavyForest:
    """Heavy-path forest of a grammar, weighted by expansion length."""
    return HeavyForest(g.left, g.right, g.length)


def heavy_path_predecessor(forest: HeavyForest, R: int, x: int, stats=None) -> Exit:
    if not 1 <= x <= forest.weight[R]:
        raise PositionOutOfRange("position %d outside 1..%d" % (x, forest.weight[R]))
    if x == forest.center[R]:
        raise ValueError("position %d is the center of rule %d" % (x, R))
    return forest.exit(R, x, stats)


def triplet_search(forest: HeavyForest, R: int, x: int, stats=None) -> list:
    """Triplets from ``R`` down to the terminal generating position ``x``.

    Every triplet but possibly the last records a light child and its
    1-based interval inside the previous context.  The last triplet is the
    terminal itself: a light child when reached through a light edge, or
    the heavy-path leaf (interval ``[center, center]``) otherwise.  The
    starts satisfy ``sum(start - 1) + 1 == x``.
    """
    weight = forest.weight
    if not 1 <= x <= weight[R]:
        raise PositionOutOfRange("position %d outside 1..%d" % (x, weight[R]))
    out = []
    v = R
    while x != forest.center[v]:
        e = forest.exit(v, x, stats)
        start = e.offset + (1 if e.light_left else weight[e.heavy] + 1)
        out.append(Triplet(e.light, start, start + weight[e.light] - 1, True))
        x -= start - 1
        v = e.light
        if stats is not None:
            stats.light_transitions += 1
    if forest.left[v] >= 0 or not out:
        c = forest.center[v]
        out.append(Triplet(forest.leaf[v], c, c, False))
    return out
