"""Straight-line programs with binary rules.

Nonterminals are numbered 1..size and a rule may only reference terminals or
lower-numbered nonterminals, which makes acyclicity a local check. A root that
is a bare terminal (the "unary root") is the only way to derive a length-1
string; it counts towards ``size`` but not ``rule_count``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from .core import Text
from .errors import CapExceeded

DEFAULT_EXPANSION_CAP = 1 << 26


class Terminal(NamedTuple):
    symbol: int


Ref = Union[int, Terminal]  # int k is the nonterminal Xk


@dataclass(frozen=True)
class Slp:
    rules: tuple[tuple[Ref, Ref], ...]
    root: Ref

    def __post_init__(self):
        for k, rhs in enumerate(self.rules, start=1):
            if len(rhs) != 2:
                raise ValueError(f"X{k} must have exactly two symbols")
            for ref in rhs:
                if not isinstance(ref, Terminal) and not 1 <= ref < k:
                    raise ValueError(f"X{k} references X{ref}, breaking the acyclic order")
        if not isinstance(self.root, Terminal) and not 1 <= self.root <= len(self.rules):
            raise ValueError(f"root X{self.root} is undefined")

    @property
    def unary(self) -> bool:
        return isinstance(self.root, Terminal)

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    @property
    def size(self) -> int:
        return len(self.rules) + (1 if self.unary else 0)

    def terminals(self) -> set[int]:
        out = {r.symbol for rhs in self.rules for r in rhs if isinstance(r, Terminal)}
        if self.unary:
            out.add(self.root.symbol)
        return out

    def _fold(self, leaf, combine) -> list:
        """Bottom-up value per nonterminal; index 0 unused."""
        vals = [None]
        for a, b in self.rules:
            va = leaf(a.symbol) if isinstance(a, Terminal) else vals[a]
            vb = leaf(b.symbol) if isinstance(b, Terminal) else vals[b]
            vals.append(combine(va, vb))
        return vals

    def value_of(self, ref: Ref, vals: list, leaf):
        return leaf(ref.symbol) if isinstance(ref, Terminal) else vals[ref]

    def length(self, ref: Ref | None = None) -> int:
        ref = self.root if ref is None else ref
        leaf = lambda s: 1  # noqa: E731
        return self.value_of(ref, self._fold(leaf, lambda x, y: x + y), leaf)

    def count(self, symbol: int, ref: Ref | None = None) -> int:
        """Occurrences of ``symbol`` in the expansion, without expanding."""
        ref = self.root if ref is None else ref
        leaf = lambda s: 1 if s == symbol else 0  # noqa: E731
        return self.value_of(ref, self._fold(leaf, lambda x, y: x + y), leaf)

    def expand(self, ref: Ref | None = None, cap: int = DEFAULT_EXPANSION_CAP) -> Text:
        ref = self.root if ref is None else ref
        if self.length(ref) > cap:
            raise CapExceeded(f"expansion longer than {cap} symbols")
        out, stack = [], [ref]
        while stack:
            r = stack.pop()
            if isinstance(r, Terminal):
                out.append(r.symbol)
            else:
                a, b = self.rules[r - 1]
                stack.append(b)
                stack.append(a)
        return Text(tuple(out))

    def serialize(self) -> str:
        def fmt(r: Ref) -> str:
            return f"'{r.symbol}'" if isinstance(r, Terminal) else f"X{r}"
        lines = [f"X{k} -> {fmt(a)} {fmt(b)}" for k, (a, b) in enumerate(self.rules, start=1)]
        lines.append(f"root {fmt(self.root)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, source: str) -> "Slp":
        def ref(tok: str) -> Ref:
            if tok.startswith("'") and tok.endswith("'"):
                return Terminal(int(tok[1:-1]))
            if tok.startswith("X"):
                return int(tok[1:])
            raise ValueError(f"bad symbol {tok!r}")
        rules, root = [], None
        for lineno, line in enumerate(source.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            m = re.fullmatch(r"X(\d+)\s*->\s*(\S+)\s+(\S+)", line)
            if m:
                if int(m.group(1)) != len(rules) + 1:
                    raise ValueError(f"line {lineno}: rules must be numbered consecutively")
                rules.append((ref(m.group(2)), ref(m.group(3))))
                continue
            m = re.fullmatch(r"root\s+(\S+)", line)
            if not m:
                raise ValueError(f"line {lineno}: cannot parse {line!r}")
            root = ref(m.group(1))
        if root is None:
            raise ValueError("missing root line")
        return cls(tuple(rules), root)


def build_slp(text: Text) -> Slp:
    """Balanced grammar: pair neighbours level by level, sharing equal pairs."""
    if text.n == 0:
        raise ValueError("cannot build an SLP for the empty string")
    rules: list[tuple[Ref, Ref]] = []
    seen: dict[tuple[Ref, Ref], int] = {}
    level: list[Ref] = [Terminal(s) for s in text.symbols]
    while len(level) > 1:
        nxt = []
        for x in range(0, len(level) - 1, 2):
            pair = (level[x], level[x + 1])
            if pair not in seen:
                rules.append(pair)
                seen[pair] = len(rules)
            nxt.append(seen[pair])
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return Slp(tuple(rules), level[0])


def _repeat_into(rules: list, symbol: Ref, count: int) -> Ref:
    """Append rules deriving symbol^count; returns the designated reference."""
    if count < 1:
        raise ValueError("count must be positive")
    powers = [symbol]  # powers[e] derives symbol^(2^e)
    for _ in range(count.bit_length() - 1):
        rules.append((powers[-1], powers[-1]))
        powers.append(len(rules))
    acc = None
    for e in range(count.bit_length() - 1, -1, -1):
        if count >> e & 1:
            if acc is None:
                acc = powers[e]
            else:
                rules.append((acc, powers[e]))
                acc = len(rules)
    return acc


def repeat_rules(g: Slp, symbol: int, count: int) -> tuple[Slp, Ref]:
    """Extend ``g`` with a symbol expanding to ``symbol * count``.

    Uses floor(log2 count) doublings plus popcount(count) - 1 joins.
    """
    rules = list(g.rules)
    ref = _repeat_into(rules, Terminal(symbol), count)
    return Slp(tuple(rules), g.root), ref


def relabel(g: Slp, head: list[tuple[Ref, Ref]], mapping: dict[int, Ref]) -> tuple[list, Ref]:
    """Place ``head`` rules first and rewrite g's terminals through ``mapping``.

    Returns the new rule list and g's root under the renumbering.
    """
    shift = len(head)

    def move(r: Ref) -> Ref:
        if isinstance(r, Terminal):
            return mapping.get(r.symbol, r)
        return r + shift

    rules = list(head) + [(move(a), move(b)) for a, b in g.rules]
    return rules, move(g.root)
