"""Substring extraction on the unbalanced (heavy-path) index.

Per rule we keep the first and last ``w`` symbols packed into one word
(``w = floor(log_sigma N)``) and three optional jump pointers, each a rule
id plus the 1-based start of that rule's expansion inside the owner:

* central: a descendant whose expansion, flanked by at most ``w`` symbols
  on either side, makes up the whole rule.  Full decompression writes the
  two flanks from the fringes and continues at the target.  Every rule of
  length ``>= 2w`` has one; when both children are long it is the rule
  itself and decompression simply splits it.
* left / right: a node further down the heavy path such that everything
  hanging to its left (right) fits in the owner's left (right) fringe.
  They let a hanging side of a heavy path be emitted without visiting
  every node on it.
"""

from __future__ import annotations

from .errors import PositionOutOfRange
from .heavypath import HeavyForest, decompose
from .packing import Packer, WordSink, word_width


def packed_fringes(g, packer: Packer, width: int):
    """First and last ``min(width, |R|)`` symbols of every rule, packed."""
    pk = packer
    n, L = g.n, g.length
    fl = [0] * n
    fr = [0] * n
    for v in range(n):
        a = g.left[v]
        if a < 0:
            fl[v] = fr[v] = g.code[g.symbol[v]]
            continue
        b = g.right[v]
        la, lb = L[a], L[b]
        if la >= width:
            fl[v] = fl[a]
        else:
            fl[v] = pk.concat(fl[a], la, pk.head(fl[b], min(width - la, lb)))
        if lb >= width:
            fr[v] = fr[b]
        else:
            k = min(width - lb, la)
            fr[v] = pk.concat(pk.tail(fr[a], min(width, la), k), k, fr[b])
    return fl, fr


class AccessIndex:
    _state = ("w", "fl", "fr", "central_rule", "central_start",
              "ljump_rule", "ljump_start", "rjump_rule", "rjump_start")

    def __init__(self, g, forest: HeavyForest | None = None, w: int | None = None):
        self.g = g
        self.forest = forest if forest is not None else decompose(g)
        self.w = w if w is not None else word_width(g.N, g.sigma)
        self.packer = Packer(g.sigma, g.alphabet)
        self._build_fringes()
        self._build_central()
        self._build_jumps()

    @classmethod
    def from_state(cls, g, forest, state):
        ix = cls.__new__(cls)
        ix.g, ix.forest = g, forest
        ix.packer = Packer(g.sigma, g.alphabet)
        for k in cls._state:
            setattr(ix, k, state[k])
        return ix

    def state(self) -> dict:
        return {k: getattr(self, k) for k in self._state}

    # -- construction ----------------------------------------------------

    def _build_fringes(self):
        self.fl, self.fr = packed_fringes(self.g, self.packer, self.w)

    def _build_central(self):
        g, w = self.g, self.w
        L, left, right = g.length, g.left, g.right
        n = g.n
        crule = [-1] * n
        cstart = [0] * n
        for v in range(n):
            if left[v] < 0 or L[v] < 2 * w:
                continue
            y, z = left[v], right[v]
            if L[y] >= w and L[z] >= w:
                # the walk stops at v itself
                crule[v], cstart[v] = v, 1
                continue
            # exactly one child is long: start from it
            cl = cr = 0
            if L[y] < w:
                cl, W = L[y], z
            else:
                cr, W = L[z], y
            while left[W] >= 0:
                u, x = left[W], right[W]
                if L[u] >= w and L[x] >= w:
                    break
                if L[u] < w and cl + L[u] <= w:
                    cl += L[u]
                    W = x
                elif L[x] < w and cr + L[x] <= w:
                    cr += L[x]
                    W = u
                else:
                    break
            crule[v] = W
            cstart[v] = cl + 1
        self.central_rule, self.central_start = crule, cstart

    def _build_jumps(self):
        g, w, f = self.g, self.w, self.forest
        L, left, right, heavy, hright = g.length, g.left, g.right, f.heavy, f.hright
        n = g.n
        # first node on v's heavy path (v included) with a left- / right-hanging light child
        first_l = [-1] * n
        first_r = [-1] * n
        for v in range(n):
            h = heavy[v]
            if h < 0:
                continue
            if hright[v]:
                first_l[v] = v
                first_r[v] = first_r[h]
            else:
                first_r[v] = v
                first_l[v] = first_l[h]
        lrule, lstart = [-1] * n, [0] * n
        rrule, rstart = [-1] * n, [0] * n
        for v in range(n):
            if left[v] < 0:
                continue
            c, cur = 0, v
            while True:
                fv = first_l[cur]
                if fv < 0:
                    break
                q = L[left[fv]]
                if c + q > w:
                    if fv != v:
                        lrule[v], lstart[v] = fv, c + 1
                    break
                c += q
                cur = right[fv]
            c, cur = 0, v
            while True:
                fv = first_r[cur]
                if fv < 0:
                    break
                q = L[right[fv]]
                if c + q > w:
                    if fv != v:
                        rrule[v], rstart[v] = fv, L[v] - c - L[fv] + 1
                    break
                c += q
                cur = left[fv]
        self.ljump_rule, self.ljump_start = lrule, lstart
        self.rjump_rule, self.rjump_start = rrule, rstart

    # -- primitives writing into a WordSink -------------------------------

    def _decompress(self, r, sink, stats):
        L, w, fl, fr = self.g.length, self.w, self.fl, self.fr
        left, right = self.g.left, self.g.right
        crule, cstart = self.central_rule, self.central_start
        bits = self.packer.bits
        put = sink.chunks.append
        w2 = 2 * w
        nodes = 0
        stack = [r]
        pop, push = stack.pop, stack.append
        while stack:
            x = pop()
            if x.__class__ is tuple:
                put(x)
                continue
            nodes += 1
            n = L[x]
            if n <= w:
                put((fl[x], n))
            elif n <= w2:
                put((fl[x], w))
                put((fr[x] >> (bits * (w2 - n)), n - w))
            elif crule[x] >= 0 and crule[x] != x:
                t = crule[x]
                pre = cstart[x] - 1
                suf = n - pre - L[t]
                if suf:
                    push((fr[x] >> (bits * (w - suf)), suf))
                push(t)
                if pre:
                    push((fl[x] & ((1 << (bits * pre)) - 1), pre))
            else:
                push(right[x])
                push(left[x])
        if stats is not None:
            stats.decompress_nodes += nodes

    def _emit_left(self, p, pre, sink, stats):
        """Write ``p[1..pre]``, where ``pre`` is the left offset of a node on
        ``p``'s heavy path (everything hanging left above that node)."""
        L, w, fl, pk = self.g.length, self.w, self.fl, self.packer
        steps = 0
        while pre > 0:
            steps += 1
            if pre <= w:
                sink.put(pk.head(fl[p], pre), pre)
                break
            t = self.ljump_rule[p]
            if t >= 0:
                s = self.ljump_start[p] - 1
                if s:
                    sink.put(pk.head(fl[p], s), s)
                pre -= s
                p = t
            else:
                # no pointer: p = Q P' with |Q| > w hanging left
                q = self.g.left[p]
                self._decompress(q, sink, stats)
                pre -= L[q]
                p = self.g.right[p]
        if stats is not None:
            stats.jumps += steps

    def _emit_right(self, p, suf, sink, stats):
        """Write the last ``suf`` symbols of ``p`` (mirror of _emit_left)."""
        L, w, fr, pk = self.g.length, self.w, self.fr, self.packer
        acts = []
        while suf > 0:
            n = L[p]
            if suf <= w:
                acts.append((pk.tail(fr[p], min(w, n), suf), suf))
                break
            t = self.rjump_rule[p]
            if t >= 0:
                s = n - (self.rjump_start[p] - 1) - L[t]
                if s:
                    acts.append((pk.tail(fr[p], w, s), s))
                suf -= s
                p = t
            else:
                q = self.g.right[p]
                acts.append(q)
                suf -= L[q]
                p = self.g.left[p]
        if stats is not None:
            stats.jumps += len(acts)
        for a in reversed(acts):
            if a.__class__ is tuple:
                sink.put(a[0], a[1])
            else:
                self._decompress(a, sink, stats)

    def _prefix(self, p, y, sink, stats):
        """Write ``p[1..y]``."""
        L, w, f = self.g.length, self.w, self.forest
        t = 0
        while True:
            n = L[p]
            if y == n:
                self._decompress(p, sink, stats)
                break
            if y <= w:
                sink.put(self.packer.head(self.fl[p], y), y)
                break
            c = f.center[p]
            if y == c:
                self._emit_left(p, c - 1, sink, stats)
                sink.put(self.fl[f.leaf[p]], 1)
                break
            e = f.exit(p, y, stats)
            self._emit_left(p, e.offset, sink, stats)
            if e.light_left:
                y -= e.offset
            else:
                self._decompress(e.heavy, sink, stats)
                y -= e.offset + L[e.heavy]
            p = e.light
            t += 1
        if stats is not None:
            stats.light_transitions += t

    def _suffix(self, p, y, sink, stats):
        """Write ``p[y..|p|]``."""
        L, w, f = self.g.length, self.w, self.forest
        pending = []
        t = 0
        while True:
            n = L[p]
            if y == 1:
                self._decompress(p, sink, stats)
                break
            k = n - y + 1
            if k <= w:
                sink.put(self.packer.tail(self.fr[p], min(w, n), k), k)
                break
            c = f.center[p]
            if y == c:
                sink.put(self.fl[f.leaf[p]], 1)
                self._emit_right(p, n - c, sink, stats)
                break
            e = f.exit(p, y, stats)
            pending.append((p, n - e.offset - L[e.node]))
            if e.light_left:
                pending.append(e.heavy)
                y -= e.offset
            else:
                y -= e.offset + L[e.heavy]
            p = e.light
            t += 1
        if stats is not None:
            stats.light_transitions += t
        for a in reversed(pending):
            if a.__class__ is tuple:
                self._emit_right(a[0], a[1], sink, stats)
            else:
                self._decompress(a, sink, stats)

    def _extract(self, cur, a, b, sink, stats):
        L, f = self.g.length, self.forest
        t = 0
        while True:
            if a == 1 and b == L[cur]:
                if stats is not None:
                    stats.light_transitions += t
                self._decompress(cur, sink, stats)
                return
            if a == b:
                if stats is not None:
                    stats.light_transitions += t
                v = f.descend(cur, a, stats)[0]
                sink.put(self.fl[f.leaf[v]], 1)
                return
            c = f.center[cur]
            ea = None if a == c else f.exit(cur, a, stats)
            eb = None if b == c else f.exit(cur, b, stats)
            if ea is None or eb is None or ea.node != eb.node:
                break
            off = ea.offset if ea.light_left else ea.offset + L[ea.heavy]
            a -= off
            b -= off
            cur = ea.light
            t += 1
        if stats is not None:
            stats.light_transitions += t

        if ea is None:
            # a at the center, b hangs right
            sink.put(self.fl[f.leaf[cur]], 1)
            hb, ob = eb.heavy, eb.offset
            self._emit_right(hb, ob + L[hb] - c, sink, stats)
            self._prefix(eb.light, b - ob - L[hb], sink, stats)
            return
        oa, qa, ha = ea.offset, ea.light, ea.heavy
        if not ea.light_left:
            # both hang right, a's exit is deeper
            hb, ob = eb.heavy, eb.offset
            self._suffix(qa, a - oa - L[ha], sink, stats)
            self._emit_right(hb, ob + L[hb] - oa - L[ea.node], sink, stats)
            self._prefix(eb.light, b - ob - L[hb], sink, stats)
            return
        self._suffix(qa, a - oa, sink, stats)
        if eb is None:
            self._emit_left(ha, c - 1 - oa - L[qa], sink, stats)
            sink.put(self.fl[f.leaf[cur]], 1)
            return
        hb, ob = eb.heavy, eb.offset
        if eb.light_left:
            self._emit_left(ha, ob - oa - L[qa], sink, stats)
            self._prefix(eb.light, b - ob, sink, stats)
            return
        if eb.step > ea.step:
            self._emit_left(ha, ob - oa - L[qa], sink, stats)
            self._decompress(hb, sink, stats)
        else:
            self._decompress(ha, sink, stats)
            self._emit_right(hb, ob + L[hb] - oa - L[ea.node], sink, stats)
        self._prefix(eb.light, b - ob - L[hb], sink, stats)

    # -- public API -------------------------------------------------------

    def decompress_rule(self, r: int, stats=None) -> list:
        sink = WordSink()
        self._decompress(r, sink, stats)
        return sink.symbols(self.packer)

    def extract(self, i: int, j: int, stats=None) -> list:
        N = self.g.N
        if not 1 <= i <= j <= N:
            raise PositionOutOfRange("interval [%d, %d] outside 1..%d" % (i, j, N))
        sink = WordSink()
        self._extract(self.g.root, i, j, sink, stats)
        return sink.symbols(self.packer)

    def access(self, i: int, stats=None) -> int:
        N = self.g.N
        if not 1 <= i <= N:
            raise PositionOutOfRange("position %d outside 1..%d" % (i, N))
        v = self.forest.descend(self.g.root, i, stats)[0]
        return self.g.symbol[self.forest.leaf[v]]

    def fringe_left(self, r: int) -> list:
        return list(self.packer.symbols(self.fl[r], min(self.w, self.g.length[r])))

    def fringe_right(self, r: int) -> list:
        return list(self.packer.symbols(self.fr[r], min(self.w, self.g.length[r])))

    def central(self, r: int):
        t = self.central_rule[r]
        return None if t < 0 else (t, self.central_start[r])

    def left_jump(self, r: int):
        t = self.ljump_rule[r]
        return None if t < 0 else (t, self.ljump_start[r])

    def right_jump(self, r: int):
        t = self.rjump_rule[r]
        return None if t < 0 else (t, self.rjump_start[r])


def build_access(g, forest=None, w=None) -> AccessIndex:
    return AccessIndex(g, forest, w)
