"""Partial sums over an integer string in space proportional to an attractor.

Layout
------
Level 0 tiles S with ceil(n / l_0) blocks of length l_0. At every level
j >= 1, each attractor position i owns 2*tau blocks of length l_j: tau to its
left (``S[i - l_j*k .. i - l_j*(k-1) - 1]``) and tau to its right
(``S[i + 1 + l_j*(k-1) .. i + l_j*k]``), with l_j = tau**(L - j) and l_L = 1.

Every block above the last level stores a pointer ``(i, v)``: an attractor
position ``i`` and offset ``v`` such that the block's content occurs at
``S[i - v ..]`` with ``S[i]`` aligned to the block's ``v + 1``-th symbol. That
occurrence is covered by ``S[i]`` plus the level-(j+1) blocks flanking ``i``,
so a prefix sum inside a level-j block becomes a constant number of stored
sums plus one prefix sum inside a single level-(j+1) block.

Blocks sticking out of [1..n] are kept; positions outside the text count as
zeros and pointers describe the in-range part only.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from .core import DEFAULT_VALIDATION_CAP, MAX_SYMBOL, Attractor, Text, validate_attractor
from .errors import InvalidAttractor, OutOfRange, PointerNotFound, SumOverflow

LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class IndexParams:
    tau: int
    levels: int
    block_lengths: tuple[int, ...]

    @classmethod
    def plan(cls, n: int, gamma: int, tau: int) -> "IndexParams":
        """Level layout for a text of length n; tau is clamped to max(2, ceil(n/gamma))."""
        if tau < 2:
            raise ValueError(f"tau must be at least 2, got {tau}")
        ratio = -(-n // gamma) if gamma else 0
        tau = min(tau, max(2, ratio))
        levels = 0
        while tau ** levels < ratio:
            levels += 1
        return cls(tau, levels, tuple(tau ** (levels - j) for j in range(levels + 1)))


@dataclass
class Level:
    """Per-block arrays of one level; block ids index every list."""

    ptr_pos: list[int] = field(default_factory=list)  # 0 = no pointer
    ptr_v: list[int] = field(default_factory=list)
    head: list[int] = field(default_factory=list)  # sum(B[1..v])
    bsum: list[int] = field(default_factory=list)  # sum(B)
    cum: list[int] = field(default_factory=list)  # running sum outward from i

    @property
    def size(self) -> int:
        return max(len(self.ptr_pos), len(self.bsum))


def _window_bytes(symbols) -> bytes:
    return array("Q", symbols).tobytes()


def _find_pointers(buf: bytes, n: int, positions, wanted: dict[int, set[bytes]]) -> dict[tuple[int, bytes], tuple[int, int]]:
    """Lexicographically smallest (i, v) for each wanted content, grouped by length."""
    found = {}
    for length, keys in wanted.items():
        remaining = set(keys)
        for i in positions:
            for v in range(length):
                p = i - v
                if p < 1:
                    break
                if p + length - 1 > n:
                    continue
                key = buf[8 * (p - 1): 8 * (p - 1 + length)]
                if key in remaining:
                    found[length, key] = (i, v)
                    remaining.discard(key)
            if not remaining:
                break
        if remaining:
            raise PointerNotFound(
                f"{len(remaining)} block(s) of length {length} have no occurrence crossing the attractor"
            )
    return found


class PsumIndex:
    """Static partial-sum structure answering ``psum(v)`` with one descent."""

    def __init__(self, n: int, params: IndexParams, positions: tuple[int, ...],
                 chars: tuple[int, ...], pre: list[int], levels: list[Level]):
        self.n = n
        self.params = params
        self.positions = positions
        self.pre = pre
        self.levels = levels
        self.char_at = dict(zip(positions, chars))
        self.slot = {p: a for a, p in enumerate(positions)}

    @property
    def tau(self) -> int:
        return self.params.tau

    @property
    def depth(self) -> int:
        """Number L of levels below level 0."""
        return self.params.levels

    @property
    def gamma(self) -> int:
        return len(self.positions)

    @classmethod
    def build(cls, text: Text, attractor: Attractor, tau: int, *,
              validate: bool = True, cap: int = DEFAULT_VALIDATION_CAP) -> "PsumIndex":
        n, positions = text.n, attractor.positions
        attractor.check_range(n)
        params = IndexParams.plan(n, len(positions), tau)
        if validate and n <= cap and not validate_attractor(text, attractor, cap):
            raise InvalidAttractor("positions do not form a string attractor of the text")
        S = text.symbols
        prefix = [0] * (n + 1)
        for x in range(n):
            prefix[x + 1] = prefix[x] + S[x]
        if prefix[n] > MAX_SYMBOL:
            raise SumOverflow("partial sums exceed 64 bits")
        if n == 0:
            return cls(0, params, (), (), [], [Level()])

        tau, L, lengths = params.tau, params.levels, params.block_lengths
        buf = _window_bytes(S)
        chars = tuple(S[i - 1] for i in positions)

        def clip(start: int, ell: int) -> tuple[int, int]:
            lo, hi = max(start, 1), min(start + ell - 1, n)
            return lo, hi

        # level 0
        l0 = lengths[0]
        count0 = -(-n // l0)
        pre = [prefix[b * l0] for b in range(count0)]
        spans = [[] for _ in range(L + 1)]
        spans[0] = [clip(b * l0 + 1, l0) for b in range(count0)]
        levels = [Level() for _ in range(L + 1)]
        if L == 0:
            levels[0].bsum = [S[b] for b in range(count0)]

        for j in range(1, L + 1):
            ell, lev = lengths[j], levels[j]
            for i in positions:
                for side in (LEFT, RIGHT):
                    running = 0
                    for k in range(1, tau + 1):
                        start = i - ell * k if side == LEFT else i + 1 + ell * (k - 1)
                        lo, hi = clip(start, ell)
                        s = prefix[hi] - prefix[lo - 1] if hi >= lo else 0
                        running += s
                        lev.bsum.append(s)
                        lev.cum.append(running)
                        spans[j].append((lo, hi))

        for j in range(L):
            wanted: dict[int, set[bytes]] = {}
            keys = []
            for lo, hi in spans[j]:
                if hi < lo:
                    keys.append(None)
                    continue
                key = buf[8 * (lo - 1): 8 * hi]
                wanted.setdefault(hi - lo + 1, set()).add(key)
                keys.append(key)
            found = _find_pointers(buf, n, positions, wanted)
            lev = levels[j]
            for (lo, hi), key in zip(spans[j], keys):
                if key is None:
                    lev.ptr_pos.append(0)
                    lev.ptr_v.append(0)
                    lev.head.append(0)
                    continue
                i, v = found[hi - lo + 1, key]
                lev.ptr_pos.append(i)
                lev.ptr_v.append(v)
                lev.head.append(prefix[lo - 1 + v] - prefix[lo - 1])
        return cls(n, params, positions, chars, pre, levels)

    def trace(self, v: int) -> tuple[int, int]:
        """``(psum(v), levels visited)`` from a single descent."""
        if not 0 <= v <= self.n:
            raise OutOfRange(f"psum argument {v} outside [0..{self.n}]")
        if v == 0:
            return 0, 0
        n, tau, L = self.n, self.params.tau, self.params.levels
        lengths, levels = self.params.block_lengths, self.levels
        b, t = divmod(v - 1, lengths[0])
        t += 1
        acc = self.pre[b]
        start = b * lengths[0] + 1
        j, depth = 0, 1
        while True:
            ell = lengths[j]
            lo, hi = max(start, 1), min(start + ell - 1, n)
            t = min(t - (lo - start), hi - lo + 1)
            if t <= 0:
                return acc, depth
            lev = levels[j]
            if j == L:
                return acc + lev.bsum[b], depth
            i, off = lev.ptr_pos[b], lev.ptr_v[b]
            acc += lev.head[b]
            nxt, below = lengths[j + 1], levels[j + 1]
            base = 2 * tau * self.slot[i]
            if t > off:
                # B[v+1..t] = S[i], d right blocks, then a prefix of length l
                d, l = divmod(t - off - 1, nxt)
                acc += self.char_at[i]
                if d:
                    acc += below.cum[base + tau + d - 1]
                if not l:
                    return acc, depth
                b, t, start = base + tau + d, l, i + 1 + nxt * d
            else:
                # subtract B[t+1..v]: a suffix of left block d+1, then d left blocks
                d, l = divmod(off - t, nxt)
                if d:
                    acc -= below.cum[base + d - 1]
                if not l:
                    return acc, depth
                b = base + d
                acc -= below.bsum[b]
                t, start = nxt - l, i - nxt * (d + 1)
            j += 1
            depth += 1

    def psum(self, v: int) -> int:
        """Sum of S[1..v]."""
        return self.trace(v)[0]

    def descent_depth(self, v: int) -> int:
        """Levels visited while answering ``psum(v)``."""
        return self.trace(v)[1]

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise OutOfRange(f"position {i} outside [1..{self.n}]")
        return self.psum(i) - self.psum(i - 1)

    def stats(self) -> dict:
        """Block and word counts per level."""
        L = self.params.levels
        counts = [len(self.pre)] + [lev.size for lev in self.levels[1:]]
        words = 0
        for j, lev in enumerate(self.levels):
            words += len(lev.ptr_pos) * 3 + len(lev.bsum) + len(lev.cum)
        words += len(self.pre) + 2 * len(self.positions)
        return {
            "n": self.n,
            "gamma": self.gamma,
            "tau": self.params.tau,
            "L": L,
            "block_lengths": list(self.params.block_lengths),
            "blocks_per_level": counts,
            "explicit_table": len(self.levels[L].bsum) + len(self.char_at),
            "stored_words": words,
        }

    def __eq__(self, other):
        if not isinstance(other, PsumIndex):
            return NotImplemented
        return (self.n, self.params, self.positions, self.pre, self.levels,
                self.char_at) == (other.n, other.params, other.positions, other.pre,
                                  other.levels, other.char_at)


def build(text: Text, attractor: Attractor, tau: int, **kwargs) -> PsumIndex:
    return PsumIndex.build(text, attractor, tau, **kwargs)


def space_violations(stats: dict) -> list[str]:
    """Block-count bounds of the layout; empty when all hold."""
    gamma, tau, L = stats["gamma"], stats["tau"], stats["L"]
    counts = stats["blocks_per_level"]
    out = []
    if counts and counts[0] > gamma:
        out.append(f"level 0 has {counts[0]} blocks > gamma={gamma}")
    for j, c in enumerate(counts[1:], start=1):
        if c > 2 * tau * gamma:
            out.append(f"level {j} has {c} blocks > 2*tau*gamma={2 * tau * gamma}")
    if sum(counts) > gamma + 2 * tau * gamma * L:
        out.append(f"{sum(counts)} blocks in total > gamma + 2*tau*gamma*L")
    if stats["explicit_table"] > 2 * tau * gamma + gamma:
        out.append(f"explicit table has {stats['explicit_table']} entries > 2*tau*gamma + gamma")
    return out
