"""Symbols packed into integer words.

Symbol codes (0..sigma-1) take ``bits`` bits each; the lowest-order bits of
a word hold the earliest symbol.  Words are plain Python ints, so a word may
hold more than 64 bits (the balanced engine's long fringes do).
"""

from __future__ import annotations


def word_width(N: int, sigma: int) -> int:
    """Symbols per machine word: floor(log_sigma N), at least 1.

    Computed with integers so exact powers do not lose to rounding.  An
    alphabet of size one is treated as binary.
    """
    s = max(2, sigma)
    w, p = 0, 1
    while p * s <= N:
        p *= s
        w += 1
    return max(1, w)


def bits_per_symbol(sigma: int) -> int:
    return max(1, (sigma - 1).bit_length())


class Packer:
    def __init__(self, sigma: int, alphabet=None):
        self.bits = bits_per_symbol(sigma)
        self.mask = (1 << self.bits) - 1
        self.alphabet = list(alphabet) if alphabet is not None else list(range(sigma))
        self._cache = {}

    def pack(self, codes) -> int:
        word, shift, b = 0, 0, self.bits
        for c in codes:
            word |= c << shift
            shift += b
        return word

    def concat(self, a: int, alen: int, b: int) -> int:
        return a | (b << (self.bits * alen))

    def head(self, word: int, k: int) -> int:
        """First ``k`` symbols of ``word``."""
        return word & ((1 << (self.bits * k)) - 1)

    def tail(self, word: int, wlen: int, k: int) -> int:
        """Last ``k`` of the ``wlen`` symbols in ``word``."""
        return word >> (self.bits * (wlen - k))

    def slice(self, word: int, start: int, k: int) -> int:
        """``k`` symbols starting at 0-based ``start``."""
        return (word >> (self.bits * start)) & ((1 << (self.bits * k)) - 1)

    def get(self, word: int, i: int) -> int:
        """Code at 0-based index ``i``."""
        return (word >> (self.bits * i)) & self.mask

    def codes(self, word: int, count: int) -> list:
        b, m = self.bits, self.mask
        return [(word >> (b * i)) & m for i in range(count)]

    def symbols(self, word: int, count: int) -> tuple:
        """Decoded symbols (not codes) of a chunk; memoised."""
        key = (word, count)
        hit = self._cache.get(key)  # keyed like WordSink chunks
        if hit is None:
            alpha = self.alphabet
            hit = tuple(alpha[c] for c in self.codes(word, count))
            if len(self._cache) < 1 << 17:
                self._cache[key] = hit
        return hit


class WordSink:
    """Output buffer of (word, count) chunks, decoded once at the end.

    Hot loops append ``(word, count)`` tuples to ``chunks`` directly; every
    chunk must have ``count > 0``.
    """

    __slots__ = ("chunks",)

    def __init__(self):
        self.chunks = []

    def put(self, word: int, count: int) -> None:
        if count > 0:
            self.chunks.append((word, count))

    @property
    def size(self) -> int:
        return sum(c for _, c in self.chunks)

    def symbols(self, packer: Packer) -> list:
        out = []
        ext = out.extend
        cache = packer._cache
        for ch in self.chunks:
            s = cache.get(ch)
            if s is None:
                s = packer.symbols(ch[0], ch[1])
            ext(s)
        return out
