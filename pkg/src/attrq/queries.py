"""Rank, select, access and predecessor, each answered by partial sums.

* rank_c(i) is psum(i) on the projection S_c (one bit per position).
* select_c(k) is psum(k) on the gap string of S_c, built with the gap attractor.
* access(i) is psum(i) - psum(i-1) on S itself.
* predecessor(y) is select_1(rank_1(y)) on the membership bitstring.

Every sub-index reuses the attractor of S, which stays an attractor of any
letter-to-letter image of S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (DEFAULT_VALIDATION_CAP, Attractor, Text, gap_attractor, gap_encode,
                   project, validate_attractor)
from .errors import InvalidAttractor, OutOfRange, RankOutOfRange
from .psum_index import PsumIndex


class RankIndex:
    def __init__(self, n: int, by_symbol: dict[int, PsumIndex]):
        self.n = n
        self.by_symbol = by_symbol

    @classmethod
    def build(cls, text: Text, attractor: Attractor, tau: int) -> "RankIndex":
        return cls(text.n, {c: PsumIndex.build(project(text, c), attractor, tau, validate=False)
                            for c in sorted(set(text.symbols))})

    def rank(self, c: int, i: int) -> int:
        if not 0 <= i <= self.n:
            raise OutOfRange(f"rank position {i} outside [0..{self.n}]")
        sub = self.by_symbol.get(c)
        return sub.psum(i) if sub is not None else 0

    def descent_depth(self, c: int, i: int) -> int:
        sub = self.by_symbol.get(c)
        return sub.descent_depth(i) if sub is not None else 0

    def access(self, i: int) -> int:
        """S[i] as the symbol whose rank grows at i (sigma rank queries)."""
        if not 1 <= i <= self.n:
            raise OutOfRange(i)
        for c, sub in self.by_symbol.items():
            if sub.psum(i) - sub.psum(i - 1):
                return c
        raise AssertionError("no symbol occupies position %d" % i)


class SelectIndex:
    def __init__(self, n: int, by_symbol: dict[int, PsumIndex]):
        self.n = n
        self.by_symbol = by_symbol

    @staticmethod
    def build_bits(bits: Text, attractor: Attractor, tau: int) -> Optional[PsumIndex]:
        """Select_1 structure for a bitstring; None when it has no set bits."""
        if not any(bits.symbols):
            return None
        gaps = gap_encode(bits).as_text()
        return PsumIndex.build(gaps, gap_attractor(bits, attractor), tau, validate=False)

    @classmethod
    def build(cls, text: Text, attractor: Attractor, tau: int) -> "SelectIndex":
        return cls(text.n, {c: cls.build_bits(project(text, c), attractor, tau)
                            for c in sorted(set(text.symbols))})

    def count(self, c: int) -> int:
        sub = self.by_symbol.get(c)
        return sub.n if sub is not None else 0

    def select(self, c: int, k: int) -> int:
        sub = self.by_symbol.get(c)
        if sub is None or not 1 <= k <= sub.n:
            raise RankOutOfRange(f"symbol {c} has {self.count(c)} occurrences, asked for #{k}")
        return sub.psum(k)

    def descent_depth(self, c: int, k: int) -> int:
        self.select(c, k)
        return self.by_symbol[c].descent_depth(k)


class PredSet:
    """Predecessor over U = {i : bits[i] = 1} inside [1..n]."""

    def __init__(self, n: int, rank1: PsumIndex, select1: Optional[PsumIndex]):
        self.n = n
        self.rank1 = rank1
        self.select1 = select1

    @classmethod
    def build(cls, bits: Text, attractor: Attractor, tau: int) -> "PredSet":
        if not bits.is_binary():
            raise ValueError("membership string must be binary")
        return cls(bits.n, PsumIndex.build(bits, attractor, tau, validate=False),
                   SelectIndex.build_bits(bits, attractor, tau))

    @property
    def m(self) -> int:
        return self.rank1.psum(self.n)

    def predecessor(self, y: int) -> Optional[int]:
        if not 1 <= y <= self.n:
            raise OutOfRange(f"predecessor argument {y} outside [1..{self.n}]")
        r = self.rank1.psum(y)
        return self.select1.psum(r) if r else None

    def members(self) -> list[int]:
        if self.select1 is None:
            return []
        return [self.select1.psum(k) for k in range(1, self.select1.n + 1)]


def membership_bits(text: Text) -> Text:
    return Text(tuple(1 if s else 0 for s in text.symbols))


STRUCTURES = ("psum", "rank", "select", "pred")


@dataclass
class IndexBundle:
    """Everything built over one text and attractor; what the container stores.

    ``psum`` serves partial sums and access over S itself, ``pred`` answers
    predecessor over the positions holding a nonzero symbol.
    """

    n: int
    sigma: int
    attractor: Attractor
    tau: int
    psum: Optional[PsumIndex] = None
    rank: Optional[RankIndex] = None
    select: Optional[SelectIndex] = None
    pred: Optional[PredSet] = None
    kinds: tuple[str, ...] = field(default=())

    @classmethod
    def build(cls, text: Text, attractor: Attractor, tau: int,
              structures=STRUCTURES, validate: bool = True,
              cap: int = DEFAULT_VALIDATION_CAP) -> "IndexBundle":
        unknown = set(structures) - set(STRUCTURES)
        if unknown:
            raise ValueError(f"unknown structures: {sorted(unknown)}")
        if tau < 2:
            raise ValueError(f"tau must be at least 2, got {tau}")
        attractor.check_range(text.n)
        if validate and text.n <= cap and not validate_attractor(text, attractor, cap):
            raise InvalidAttractor("positions do not form a string attractor of the text")
        out = cls(text.n, text.sigma, attractor, tau,
                  kinds=tuple(s for s in STRUCTURES if s in structures))
        if "psum" in structures:
            out.psum = PsumIndex.build(text, attractor, tau, validate=False)
        if "rank" in structures:
            out.rank = RankIndex.build(text, attractor, tau)
        if "select" in structures:
            out.select = SelectIndex.build(text, attractor, tau)
        if "pred" in structures:
            out.pred = PredSet.build(membership_bits(text), attractor, tau)
        return out

    def _need(self, kind: str):
        sub = getattr(self, kind)
        if sub is None:
            raise LookupError(f"index was built without the {kind!r} structure")
        return sub

    def query(self, op: str, *args: int):
        if op == "psum":
            return self._need("psum").psum(*args)
        if op == "access":
            return self._need("psum").access(*args)
        if op == "rank":
            return self._need("rank").rank(*args)
        if op == "select":
            return self._need("select").select(*args)
        if op == "pred":
            return self._need("pred").predecessor(*args)
        raise ValueError(f"unknown query {op!r}")

    def substructures(self):
        """(label, PsumIndex) for every partial-sum structure in the bundle."""
        if self.psum is not None:
            yield "psum", self.psum
        if self.rank is not None:
            for c, sub in self.rank.by_symbol.items():
                yield f"rank[{c}]", sub
        if self.select is not None:
            for c, sub in self.select.by_symbol.items():
                if sub is not None:
                    yield f"select[{c}]", sub
        if self.pred is not None:
            yield "pred.rank", self.pred.rank1
            if self.pred.select1 is not None:
                yield "pred.select", self.pred.select1


def rank(index: RankIndex, c: int, i: int) -> int:
    return index.rank(c, i)


def select(index: SelectIndex, c: int, k: int) -> int:
    return index.select(c, k)


def access(index, i: int) -> int:
    return index.access(i)


def predecessor(pset: PredSet, y: int) -> Optional[int]:
    return pset.predecessor(y)
