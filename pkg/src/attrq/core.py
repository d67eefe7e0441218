"""Texts, string attractors and the transformations feeding the query layer.

Positions are 1-based everywhere in the public API. Internally, sequences are
plain Python tuples indexed from 0, so ``text.symbols[i - 1]`` is ``S[i]``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import CapExceeded, EmptySet, InvalidAttractor

MAX_SYMBOL = (1 << 64) - 1
DEFAULT_VALIDATION_CAP = 4096


@dataclass(frozen=True)
class Text:
    """An integer string S[1..n] over the alphabet [0, sigma - 1]."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        for s in symbols:
            if s < 0 or s > MAX_SYMBOL:
                raise ValueError(f"symbol {s} is not a 64-bit unsigned integer")
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def from_str(cls, s: str) -> "Text":
        return cls(tuple(ord(ch) for ch in s))

    @classmethod
    def from_bits(cls, bits: str) -> "Text":
        """Parse a string such as ``"0010011"``."""
        if any(ch not in "01" for ch in bits):
            raise ValueError(f"not a bitstring: {bits!r}")
        return cls(tuple(int(ch) for ch in bits))

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def sigma(self) -> int:
        return max(self.symbols) + 1 if self.symbols else 0

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i: int) -> int:
        """1-based access."""
        if not 1 <= i <= len(self.symbols):
            raise IndexError(i)
        return self.symbols[i - 1]

    def is_binary(self) -> bool:
        return all(s in (0, 1) for s in self.symbols)

    def to_bits(self) -> str:
        return "".join(str(s) for s in self.symbols)


@dataclass(frozen=True)
class Attractor:
    """A strictly increasing set of 1-based text positions."""

    positions: tuple[int, ...]

    def __post_init__(self):
        positions = tuple(int(p) for p in self.positions)
        if any(p < 1 for p in positions):
            raise ValueError("attractor positions are 1-based")
        if any(a >= b for a, b in zip(positions, positions[1:])):
            raise ValueError("attractor positions must be strictly increasing")
        object.__setattr__(self, "positions", positions)

    @classmethod
    def of(cls, positions: Iterable[int]) -> "Attractor":
        return cls(tuple(sorted(set(positions))))

    @property
    def gamma(self) -> int:
        return len(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def check_range(self, n: int) -> None:
        if self.positions and self.positions[-1] > n:
            raise InvalidAttractor(f"position {self.positions[-1]} exceeds n={n}")
        if n >= 1 and not self.positions:
            raise InvalidAttractor("a nonempty text needs a nonempty attractor")


class Literal(NamedTuple):
    symbol: int


class Copy(NamedTuple):
    source: int  # 1-based start of the earlier occurrence
    length: int


Phrase = Union[Literal, Copy]


@dataclass(frozen=True)
class Lz77Parse:
    phrases: tuple[Phrase, ...]

    @property
    def z(self) -> int:
        return len(self.phrases)

    def phrase_ends(self) -> list[int]:
        ends, pos = [], 0
        for ph in self.phrases:
            pos += 1 if isinstance(ph, Literal) else ph.length
            ends.append(pos)
        return ends

    def expand(self) -> Text:
        out: list[int] = []
        for ph in self.phrases:
            if isinstance(ph, Literal):
                out.append(ph.symbol)
                continue
            if not 1 <= ph.source <= len(out) or ph.length < 1:
                raise ValueError(f"copy {ph} does not point before its own start")
            src = ph.source - 1
            for k in range(ph.length):  # may self-overlap
                out.append(out[src + k])
        return Text(tuple(out))


@dataclass(frozen=True)
class GapString:
    """Distances x_1..x_m between consecutive set bits (x_1 = first set bit)."""

    gaps: tuple[int, ...]

    def __post_init__(self):
        if any(g < 1 for g in self.gaps):
            raise ValueError("gaps are positive")

    @property
    def m(self) -> int:
        return len(self.gaps)

    def as_text(self) -> Text:
        return Text(self.gaps)

    def decode(self) -> Text:
        """Rebuild the trimmed bitstring 0^{x_1-1}1 ... 0^{x_m-1}1."""
        bits: list[int] = []
        for g in self.gaps:
            bits.extend([0] * (g - 1))
            bits.append(1)
        return Text(tuple(bits))


def _dense_ranks(symbols: Sequence[int]) -> np.ndarray:
    _, inverse = np.unique(np.asarray(symbols, dtype=np.uint64), return_inverse=True)
    return inverse.astype(np.int64).reshape(-1)


def _next_attractor_distance(n: int, positions: Sequence[int]) -> np.ndarray:
    """dist[p] = (first attractor position >= p+1) - p, or n+1 if none (0-based p)."""
    dist = np.full(n, n + 1, dtype=np.int64)
    nxt = n + 1
    attr = set(positions)
    for p in range(n, 0, -1):
        if p in attr:
            nxt = p
        if nxt <= n:
            dist[p - 1] = nxt - p + 1
    return dist


def validate_attractor(text: Text, attractor: Attractor, cap: int = DEFAULT_VALIDATION_CAP) -> bool:
    """True iff every substring of ``text`` has an occurrence crossing ``attractor``.

    Every length is checked. Substrings of equal length are compared through
    exact doubling names (Karp-Miller-Rosenberg), so two windows get the same
    key iff they spell the same string. For each length, the set of distinct
    substrings must equal the set of those having a crossing occurrence.
    Once all windows of some length are distinct and covered, every longer
    window contains a covered one, so the scan stops there.
    """
    n = text.n
    if n > cap:
        raise CapExceeded(f"n={n} exceeds validation cap {cap}")
    positions = attractor.positions
    if n == 0:
        return not positions
    if not positions:
        return False
    if positions[-1] > n:
        raise InvalidAttractor(f"position {positions[-1]} exceeds n={n}")

    dist = _next_attractor_distance(n, positions)
    names = {1: _dense_ranks(text.symbols)}
    base = n + 1
    for length in range(1, n + 1):
        span = 1 << (length.bit_length() - 1)
        if span not in names:
            half = names[span // 2]
            cnt = n - span + 1
            key = half[:cnt] * base + half[span // 2: span // 2 + cnt]
            _, inv = np.unique(key, return_inverse=True)
            names[span] = inv.astype(np.int64).reshape(-1)
        named = names[span]
        cnt = n - length + 1
        key = named[:cnt] * base + named[length - span: length - span + cnt]
        distinct = np.unique(key)
        covered = np.unique(key[dist[:cnt] <= length])
        if len(covered) != len(distinct):
            return False
        if len(distinct) == cnt:
            return True
    return True


def lz77_parse(text: Text) -> Lz77Parse:
    """Greedy longest-previous-factor parse; sources may overlap the phrase."""
    n = text.n
    if n == 0:
        return Lz77Parse(())
    ranks = _dense_ranks(text.symbols)
    if int(ranks.max()) >= 0x110000:
        raise ValueError("too many distinct symbols for the string-search backend")
    s = "".join(chr(int(r)) for r in ranks)

    def source_of(p: int, length: int) -> int:
        # start must be < p; the match may run into the phrase itself
        return s.find(s[p:p + length], 0, p + length - 1)

    phrases: list[Phrase] = []
    p = 0
    while p < n:
        if p == 0 or source_of(p, 1) < 0:
            phrases.append(Literal(text.symbols[p]))
            p += 1
            continue
        # a match of length l implies one of every shorter length
        good, bad = 1, n - p + 1
        while good < n - p:
            probe = min(2 * good, n - p)
            if source_of(p, probe) < 0:
                bad = probe
                break
            good = probe
        while bad - good > 1:
            mid = (good + bad) // 2
            if source_of(p, mid) >= 0:
                good = mid
            else:
                bad = mid
        phrases.append(Copy(source_of(p, good) + 1, good))
        p += good
    return Lz77Parse(tuple(phrases))


def attractor_from_lz77(parse: Lz77Parse) -> Attractor:
    return Attractor(tuple(parse.phrase_ends()))


def lz77_attractor(text: Text) -> Attractor:
    return attractor_from_lz77(lz77_parse(text))


def project(text: Text, c: int) -> Text:
    """Bitstring with a 1 exactly where ``text`` holds ``c``."""
    return Text(tuple(1 if s == c else 0 for s in text.symbols))


def trimmed_length(bits: Text) -> int:
    for i in range(bits.n, 0, -1):
        if bits.symbols[i - 1]:
            return i
    return 0


def gap_encode(bits: Text) -> GapString:
    gaps, last = [], 0
    for i, b in enumerate(bits.symbols, start=1):
        if b not in (0, 1):
            raise ValueError("gap_encode expects a bitstring")
        if b:
            gaps.append(i - last)
            last = i
    return GapString(tuple(gaps))


def gap_attractor(bits: Text, attractor: Attractor) -> Attractor:
    """Attractor of size at most 2*gamma + 1 for the gap string of ``bits``."""
    m = sum(bits.symbols)
    if m == 0:
        raise EmptySet("bitstring has no set bits")
    trimmed = trimmed_length(bits)
    rank = [0] * (trimmed + 1)
    for i in range(1, trimmed + 1):
        rank[i] = rank[i - 1] + bits.symbols[i - 1]
    out = {1}
    for i in attractor.positions:
        if i > trimmed:
            break
        r = rank[i]
        if bits.symbols[i - 1]:
            out.update((r, r + 1))
        else:
            out.update((r + 1, r + 2))
    return Attractor(tuple(sorted(p for p in out if 1 <= p <= m)))


def next_attractor_position(attractor: Attractor, p: int) -> int | None:
    """Smallest attractor position >= p."""
    k = bisect.bisect_left(attractor.positions, p)
    return attractor.positions[k] if k < len(attractor.positions) else None


# -- file formats ---------------------------------------------------------

def read_text(path: str, ints: bool = False) -> Text:
    """Raw bytes (one symbol each) or whitespace-separated decimal integers."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not ints:
        return Text(tuple(data))
    try:
        return Text(tuple(int(tok) for tok in data.split()))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def read_attractor(path: str) -> Attractor:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    return Attractor(tuple(int(ln) for ln in lines if ln))


def write_attractor(path: str, attractor: Attractor) -> None:
    with open(path, "w") as fh:
        for p in attractor.positions:
            fh.write(f"{p}\n")
