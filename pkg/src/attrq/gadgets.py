"""Reductions from rank/access on bitstrings to select and to parenthesis queries.

Parentheses are stored as bits, 1 for "(" and 0 for ")", and addressed 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Text
from .errors import NoMatch, OutOfRange
from .slp import Slp, Terminal, _repeat_into, relabel

OPEN, CLOSE = 1, 0


def _require_bits(bits: Text) -> None:
    if not bits.is_binary():
        raise ValueError("expected a binary string")


def flip_bits(bits: Text) -> Text:
    """Swap 0 and 1; turns rank_0/select_0 questions into rank_1/select_1."""
    _require_bits(bits)
    return Text(tuple(1 - b for b in bits.symbols))


@dataclass(frozen=True)
class ParenString:
    bits: tuple[int, ...]
    _excess: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _match: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ex, match, stack = [0], [0] * (len(self.bits) + 1), []
        for i, b in enumerate(self.bits, start=1):
            if b not in (OPEN, CLOSE):
                raise ValueError("parenthesis bits must be 0 or 1")
            ex.append(ex[-1] + (1 if b == OPEN else -1))
            if b == OPEN:
                stack.append(i)
            elif stack:
                j = stack.pop()
                match[i], match[j] = j, i
        object.__setattr__(self, "_excess", tuple(ex))
        object.__setattr__(self, "_match", tuple(match))

    @classmethod
    def parse(cls, s: str) -> "ParenString":
        if any(ch not in "()" for ch in s):
            raise ValueError(f"not a parenthesis string: {s!r}")
        return cls(tuple(OPEN if ch == "(" else CLOSE for ch in s))

    @classmethod
    def from_text(cls, t: Text) -> "ParenString":
        return cls(t.symbols)

    def __str__(self) -> str:
        return "".join("(" if b == OPEN else ")" for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def is_balanced(self) -> bool:
        return min(self._excess) >= 0 and self._excess[-1] == 0

    def _check(self, *positions: int) -> None:
        for i in positions:
            if not 1 <= i <= len(self.bits):
                raise OutOfRange(f"position {i} outside [1..{len(self.bits)}]")

    def excess(self, i: int) -> int:
        """Opens minus closes in positions 1..i (excess(0) = 0)."""
        if not 0 <= i <= len(self.bits):
            raise OutOfRange(i)
        return self._excess[i]

    def findclose(self, i: int) -> int:
        self._check(i)
        if self.bits[i - 1] != OPEN:
            raise ValueError(f"position {i} is not an open parenthesis")
        if not self._match[i]:
            raise NoMatch(f"open parenthesis {i} is unmatched")
        return self._match[i]

    def findopen(self, i: int) -> int:
        self._check(i)
        if self.bits[i - 1] != CLOSE:
            raise ValueError(f"position {i} is not a close parenthesis")
        if not self._match[i]:
            raise NoMatch(f"close parenthesis {i} is unmatched")
        return self._match[i]

    def fwd_search(self, i: int, d: int) -> int:
        """First j > i with excess(j) = excess(i) + d."""
        if not 0 <= i <= len(self.bits):
            raise OutOfRange(i)
        target = self._excess[i] + d
        for j in range(i + 1, len(self.bits) + 1):
            if self._excess[j] == target:
                return j
        raise NoMatch(f"no j > {i} with excess {target}")

    def bwd_search(self, i: int, d: int) -> int:
        """Last j < i (j may be 0) with excess(j) = excess(i) + d."""
        self._check(i)
        target = self._excess[i] + d
        for j in range(i - 1, -1, -1):
            if self._excess[j] == target:
                return j
        raise NoMatch(f"no j < {i} with excess {target}")

    def _range(self, i: int, j: int) -> range:
        self._check(i, j)
        if i > j:
            raise OutOfRange(f"empty range [{i}..{j}]")
        return range(i, j + 1)

    def rmq(self, i: int, j: int) -> int:
        return min(self._excess[t] for t in self._range(i, j))

    def RMQ(self, i: int, j: int) -> int:  # noqa: N802
        return max(self._excess[t] for t in self._range(i, j))

    def rmqi(self, i: int, j: int) -> int:
        """Leftmost position of the minimum excess in [i..j]."""
        return min(self._range(i, j), key=lambda t: (self._excess[t], t))

    def RMQi(self, i: int, j: int) -> int:  # noqa: N802
        return min(self._range(i, j), key=lambda t: (-self._excess[t], t))


# -- encoders -----------------------------------------------------------------

def delta_encode(bits: Text) -> Text:
    """0 -> 1, 1 -> 01."""
    _require_bits(bits)
    out: list[int] = []
    for b in bits.symbols:
        out.extend((0, 1) if b else (1,))
    return Text(tuple(out))


def excess_encode(bits: Text) -> ParenString:
    """"(" + per bit ("()" for 0, "((" for 1) + ")" * (2*ones + 1)."""
    _require_bits(bits)
    out = [OPEN]
    for b in bits.symbols:
        out.extend((OPEN, OPEN) if b else (OPEN, CLOSE))
    out.extend([CLOSE] * (2 * sum(bits.symbols) + 1))
    return ParenString(tuple(out))


def findclose_encode(bits: Text) -> ParenString:
    """"(" * n + per bit (")" for 0, "())" for 1)."""
    _require_bits(bits)
    out = [OPEN] * bits.n
    for b in bits.symbols:
        out.extend((OPEN, CLOSE, CLOSE) if b else (CLOSE,))
    return ParenString(tuple(out))


# -- grammar transforms ----------------------------------------------------------

def _require_binary_slp(g: Slp) -> None:
    if not g.terminals() <= {0, 1}:
        raise ValueError("SLP must derive a binary string")


def slp_delta_transform(g: Slp) -> Slp:
    """Grammar for delta_encode(expand(g)) with at most one extra rule."""
    _require_binary_slp(g)
    if 1 not in g.terminals():
        rules, root = relabel(g, [], {0: Terminal(1)})
        return Slp(tuple(rules), root)
    rules, root = relabel(g, [(Terminal(0), Terminal(1))], {0: Terminal(1), 1: 1})
    return Slp(tuple(rules), root)


def _check_length(g: Slp, n: int | None) -> int:
    length = g.length()
    if n is not None and n != length:
        raise ValueError(f"grammar derives {length} symbols, not {n}")
    return length


def slp_excess_transform(g: Slp, n: int | None = None) -> Slp:
    """Grammar for excess_encode(expand(g))."""
    _require_binary_slp(g)
    _check_length(g, n)
    used = g.terminals()
    head, mapping = [], {}
    if 0 in used:
        head.append((Terminal(OPEN), Terminal(CLOSE)))
        mapping[0] = len(head)
    if 1 in used:
        head.append((Terminal(OPEN), Terminal(OPEN)))
        mapping[1] = len(head)
    rules, root = relabel(g, head, mapping)
    tail = _repeat_into(rules, Terminal(CLOSE), 2 * g.count(1) + 1)
    rules.append((Terminal(OPEN), root))
    rules.append((len(rules), tail))
    return Slp(tuple(rules), len(rules))


def slp_findclose_transform(g: Slp, n: int | None = None) -> Slp:
    """Grammar for findclose_encode(expand(g))."""
    _require_binary_slp(g)
    length = _check_length(g, n)
    head, mapping = [], {}
    if 1 in g.terminals():
        head = [(Terminal(OPEN), Terminal(CLOSE)), (1, Terminal(CLOSE))]
        mapping[1] = 2
    # terminal 0 already is the close parenthesis
    rules, root = relabel(g, head, mapping)
    opens = _repeat_into(rules, Terminal(OPEN), length)
    rules.append((opens, root))
    return Slp(tuple(rules), len(rules))


# -- identity checks --------------------------------------------------------

@dataclass
class ReductionReport:
    n: int
    results: dict[str, bool]
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def lines(self) -> list[str]:
        out = [f"n={self.n}"]
        out += [f"{name}={'pass' if good else 'fail'}" for name, good in self.results.items()]
        out += [f"failure={msg}" for msg in self.failures[:10]]
        return out


def verify_reductions(bits: Text, flip: bool = False) -> ReductionReport:
    """Check, for every i, the four ways of reading S.rank_1(i) or S[i] off a gadget.

    With ``flip`` the bits are complemented first, so the identities speak
    about rank_0 of the original string.
    """
    _require_bits(bits)
    if bits.n < 1:
        raise ValueError("need at least one bit")
    if flip:
        bits = flip_bits(bits)
    S, n = bits.symbols, bits.n
    delta = delta_encode(bits).symbols
    ones_at = [p for p, b in enumerate(delta, start=1) if b]
    ex = excess_encode(bits)
    fc = findclose_encode(bits)

    names = ("delta_select", "excess", "findclose", "rmq_access")
    results = {name: True for name in names}
    failures: list[str] = []

    def fail(name: str, i: int, got, want) -> None:
        results[name] = False
        failures.append(f"{name}@i={i}: got {got}, want {want}")

    rank = 0
    for i in range(1, n + 1):
        rank += S[i - 1]
        got = ones_at[i - 1] - i
        if got != rank:
            fail("delta_select", i, got, rank)
        e = ex.excess(2 * i + 1) - 1
        if e % 2 or e // 2 != rank:
            fail("excess", i, e / 2, rank)
        f = fc.findclose(n - i + 1) - n - i
        if f % 2 or f // 2 != rank:
            fail("findclose", i, f / 2, rank)
        is_zero = S[i - 1] == 0
        if (ex.RMQi(2 * i, 2 * i + 1) == 2 * i) != is_zero:
            fail("rmq_access", i, "RMQi", S[i - 1])
        if (ex.rmqi(2 * i, 2 * i + 1) == 2 * i) == is_zero:
            fail("rmq_access", i, "rmqi", S[i - 1])
    return ReductionReport(n, results, failures)
