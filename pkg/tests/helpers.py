"""Brute-force references and input generators shared by the test modules."""

import random

from attrq.core import Copy, Literal


def brute_is_attractor(symbols, positions):
    """Literal reading of the definition: all substrings, all occurrences."""
    S, n, marks = list(symbols), len(symbols), set(positions)
    for i in range(n):
        for j in range(i + 1, n + 1):
            sub, length = S[i:j], j - i
            if not any(S[p:p + length] == sub and any(q in marks for q in range(p + 1, p + length + 1))
                       for p in range(n - length + 1)):
                return False
    return True


def brute_lz77(symbols):
    """Longest previous factor by trying every earlier start."""
    S, n = list(symbols), len(symbols)
    out, p = [], 0
    while p < n:
        best, src = 0, None
        for q in range(p):
            length = 0
            while p + length < n and S[q + length] == S[p + length]:
                length += 1
            if length > best:
                best, src = length, q
        if best == 0:
            out.append(Literal(S[p]))
            p += 1
        else:
            out.append(Copy(src + 1, best))
            p += best
    return out


def fibonacci_word(n):
    a, b = [0], [0, 1]
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def random_text(rng: random.Random, n: int, sigma: int, family: str = "random"):
    if family == "random":
        return [rng.randrange(sigma) for _ in range(n)]
    if family == "unary":
        return [rng.randrange(sigma)] * n
    if family == "fibonacci":
        return fibonacci_word(n)
    if family == "periodic":
        seed = [rng.randrange(sigma) for _ in range(rng.randint(1, 12))]
        return [seed[i % len(seed)] for i in range(n)]
    if family == "mutated":
        seed = [rng.randrange(sigma) for _ in range(rng.randint(1, 40))]
        rate = rng.choice((0.001, 0.01, 0.05))
        return [seed[i % len(seed)] if rng.random() > rate else rng.randrange(sigma) for i in range(n)]
    if family == "runs":
        out = []
        while len(out) < n:
            out.extend([rng.randrange(sigma)] * rng.randint(1, 30))
        return out[:n]
    raise ValueError(family)


FAMILIES = ("random", "unary", "fibonacci", "periodic", "mutated", "runs")
