"""Test corpora: random, unary, Fibonacci-like and versioned texts."""

import random

LETTERS = b"abcdefghijklmnopqrstuvwxyz"


def random_text(n, sigma, rng):
    alpha = LETTERS[:sigma]
    return bytes(rng.choice(alpha) for _ in range(n))


def unary_text(n):
    return b"a" * n


def fibonacci_text(n, sigma=2):
    """Prefix of the fixed point of 0 -> 01, 1 -> 02, ..., last -> 0.

    For two letters this is the Fibonacci word."""
    k = max(2, sigma)
    w = [0]
    while len(w) < n:
        nxt = []
        for x in w:
            nxt.append(0)
            if x + 1 < k:
                nxt.append(x + 1)
        w = nxt
    return bytes(LETTERS[x] for x in w[:n])


def versioned_text(n, sigma, rng, versions=8, edits=3):
    """Concatenated versions of a document, each a lightly edited copy."""
    size = max(1, n // versions)
    doc = bytearray(random_text(size, sigma, rng))
    out = bytearray()
    alpha = LETTERS[:sigma]
    while len(out) < n:
        out += doc
        for _ in range(edits):
            p = rng.randrange(len(doc))
            op = rng.randrange(3)
            if op == 0:
                doc[p] = rng.choice(alpha)
            elif op == 1:
                doc.insert(p, rng.choice(alpha))
            elif len(doc) > 1:
                del doc[p]
    return bytes(out[:n])


def mutated_copies(seed_len, copies, sigma, rng, rate=0.002):
    """``copies`` copies of one random seed, each with point mutations."""
    seed = random_text(seed_len, sigma, rng)
    alpha = LETTERS[:sigma]
    out = bytearray()
    for _ in range(copies):
        doc = bytearray(seed)
        for _ in range(max(1, int(seed_len * rate))):
            doc[rng.randrange(seed_len)] = rng.choice(alpha)
        out += doc
    return bytes(out)


def random_grammar(rng, pairs, sigma):
    """Random CNF grammar with ``pairs`` pair rules over ``sigma`` symbols.

    Children are drawn from earlier rules with a bias towards recent ones,
    so the result is deep, shares subtrees and has uneven depths;
    unreachable rules are pruned.
    """
    from gcindex.grammar import Grammar, prune

    left = [-1] * sigma
    right = [-1] * sigma
    symbol = [LETTERS[c] for c in range(sigma)]
    for r in range(sigma, sigma + pairs):
        left.append(r - 1 - min(r - 1, int(rng.expovariate(0.4))))
        right.append(r - 1 - min(r - 1, int(rng.expovariate(0.4))))
        symbol.append(-1)
    g = Grammar(left, right, symbol, len(left) - 1, check=False)
    return prune(g)
