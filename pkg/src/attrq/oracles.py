"""Brute-force reference answers. Linear scans only; nothing shared with the indexes."""

from typing import Iterable, Optional

from .core import Text
from .errors import OutOfRange, RankOutOfRange


def naive_psum(text: Text, v: int) -> int:
    if not 0 <= v <= text.n:
        raise OutOfRange(v)
    total = 0
    for j in range(v):
        total += text.symbols[j]
    return total


def naive_access(text: Text, i: int) -> int:
    if not 1 <= i <= text.n:
        raise OutOfRange(i)
    return text.symbols[i - 1]


def naive_rank(text: Text, c: int, i: int) -> int:
    if not 0 <= i <= text.n:
        raise OutOfRange(i)
    count = 0
    for j in range(i):
        if text.symbols[j] == c:
            count += 1
    return count


def naive_select(text: Text, c: int, k: int) -> int:
    if k < 1:
        raise RankOutOfRange(k)
    seen = 0
    for j, s in enumerate(text.symbols, start=1):
        if s == c:
            seen += 1
            if seen == k:
                return j
    raise RankOutOfRange(k)


def naive_predecessor(members: Iterable[int], y: int, n: Optional[int] = None) -> Optional[int]:
    if y < 1 or (n is not None and y > n):
        raise OutOfRange(y)
    best = None
    for x in members:
        if x <= y and (best is None or x > best):
            best = x
    return best


# Whole-table variants: one left-to-right pass each, for exhaustive sweeps.

def naive_psum_table(text: Text) -> list[int]:
    """[psum(0), psum(1), ..., psum(n)]."""
    out = [0]
    for s in text.symbols:
        out.append(out[-1] + s)
    return out


def naive_rank_table(text: Text, c: int) -> list[int]:
    """[rank_c(0), ..., rank_c(n)]."""
    out = [0]
    for s in text.symbols:
        out.append(out[-1] + (s == c))
    return out


def naive_select_table(text: Text, c: int) -> list[int]:
    """[select_c(1), ..., select_c(count)]."""
    return [j for j, s in enumerate(text.symbols, start=1) if s == c]


def naive_predecessor_table(members: Iterable[int], n: int) -> list[Optional[int]]:
    """[None, pred(1), ..., pred(n)]."""
    present = set(members)
    out: list[Optional[int]] = [None]
    for y in range(1, n + 1):
        out.append(y if y in present else out[-1])
    return out
