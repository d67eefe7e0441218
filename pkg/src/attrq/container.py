"""Binary container for built indexes.

Layout (all integers little-endian u64 unless noted)::

    "ATRQ"  version:u8
    n  sigma  gamma  tau  L  kinds-bitmask
    gamma attractor positions
    one payload section per structure present, in the order psum, rank, select, pred
    checksum  (blake2b, 8-byte digest, over every preceding byte)

A partial-sum payload is a sequence of length-prefixed u64 lists; see
``_write_psum`` for the order.
"""

from __future__ import annotations

import hashlib
import struct

from .core import Attractor
from .errors import FormatError
from .psum_index import IndexParams, Level, PsumIndex
from .queries import STRUCTURES, IndexBundle, PredSet, RankIndex, SelectIndex

MAGIC = b"ATRQ"
VERSION = 1
_U64 = struct.Struct("<Q")


def checksum(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=8).digest()


class _Writer:
    def __init__(self):
        self.buf = bytearray()

    def u64(self, x: int) -> None:
        self.buf += _U64.pack(x)

    def u64s(self, xs) -> None:
        xs = list(xs)
        self.u64(len(xs))
        self.buf += struct.pack(f"<{len(xs)}Q", *xs)


class _Reader:
    def __init__(self, data: bytes, offset: int = 0):
        self.data = data
        self.pos = offset

    def u64(self) -> int:
        if self.pos + 8 > len(self.data):
            raise FormatError("truncated container")
        (x,) = _U64.unpack_from(self.data, self.pos)
        self.pos += 8
        return x

    def u64s(self) -> list[int]:
        count = self.u64()
        if count > (len(self.data) - self.pos) // 8:
            raise FormatError("list length runs past the end of the container")
        xs = list(struct.unpack_from(f"<{count}Q", self.data, self.pos))
        self.pos += 8 * count
        return xs


def _write_psum(w: _Writer, idx: PsumIndex) -> None:
    w.u64(idx.n)
    w.u64(idx.params.tau)
    w.u64(idx.params.levels)
    w.u64s(idx.positions)
    w.u64s(idx.char_at[p] for p in idx.positions)
    w.u64s(idx.pre)
    for lev in idx.levels:
        w.u64s(lev.ptr_pos)
        w.u64s(lev.ptr_v)
        w.u64s(lev.head)
        w.u64s(lev.bsum)
        w.u64s(lev.cum)


def _read_psum(r: _Reader) -> PsumIndex:
    n, tau, L = r.u64(), r.u64(), r.u64()
    if tau < 2 or L > 64:
        raise FormatError("implausible index parameters")
    positions = tuple(r.u64s())
    chars = tuple(r.u64s())
    if len(chars) != len(positions):
        raise FormatError("attractor symbol table does not match the attractor")
    pre = r.u64s()
    levels = [Level(r.u64s(), r.u64s(), r.u64s(), r.u64s(), r.u64s()) for _ in range(L + 1)]
    params = IndexParams(tau, L, tuple(tau ** (L - j) for j in range(L + 1)))
    return PsumIndex(n, params, positions, chars, pre, levels)


def dumps(bundle: IndexBundle) -> bytes:
    w = _Writer()
    w.buf += MAGIC + bytes([VERSION])
    gamma = bundle.attractor.gamma
    kinds = sum(1 << k for k, name in enumerate(STRUCTURES) if name in bundle.kinds)
    levels = IndexParams.plan(bundle.n, gamma, bundle.tau).levels if bundle.n else 0
    for x in (bundle.n, bundle.sigma, gamma, bundle.tau, levels, kinds):
        w.u64(x)
    w.buf += struct.pack(f"<{gamma}Q", *bundle.attractor.positions)
    if bundle.psum is not None:
        _write_psum(w, bundle.psum)
    for sub in (bundle.rank, bundle.select):
        if sub is None:
            continue
        w.u64(len(sub.by_symbol))
        for c, idx in sorted(sub.by_symbol.items()):
            w.u64(c)
            _write_psum(w, idx)
    if bundle.pred is not None:
        _write_psum(w, bundle.pred.rank1)
        w.u64(bundle.pred.select1 is not None)
        if bundle.pred.select1 is not None:
            _write_psum(w, bundle.pred.select1)
    w.buf += checksum(bytes(w.buf))
    return bytes(w.buf)


def loads(data: bytes) -> IndexBundle:
    if len(data) < len(MAGIC) + 1 + 8 or data[:4] != MAGIC:
        raise FormatError("not an attrq index container")
    if data[4] != VERSION:
        raise FormatError(f"unsupported container version {data[4]}")
    body, digest = data[:-8], data[-8:]
    if checksum(body) != digest:
        raise FormatError("checksum mismatch: container is corrupted")
    r = _Reader(body, 5)
    n, sigma, gamma, tau, _levels, kinds = (r.u64() for _ in range(6))
    if gamma > (len(body) - r.pos) // 8:
        raise FormatError("attractor runs past the end of the container")
    positions = struct.unpack_from(f"<{gamma}Q", body, r.pos)
    r.pos += 8 * gamma
    try:
        attractor = Attractor(tuple(positions))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    names = tuple(name for k, name in enumerate(STRUCTURES) if kinds >> k & 1)
    bundle = IndexBundle(n, sigma, attractor, tau, kinds=names)
    if "psum" in names:
        bundle.psum = _read_psum(r)
    for name, cls in (("rank", RankIndex), ("select", SelectIndex)):
        if name in names:
            count = r.u64()
            by_symbol = {}
            for _ in range(count):
                c = r.u64()
                by_symbol[c] = _read_psum(r)
            setattr(bundle, name, cls(n, by_symbol))
    if "pred" in names:
        rank1 = _read_psum(r)
        select1 = _read_psum(r) if r.u64() else None
        bundle.pred = PredSet(n, rank1, select1)
    if r.pos != len(body):
        raise FormatError("trailing bytes after the last payload")
    return bundle


def save(bundle: IndexBundle, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(bundle))


def load(path: str) -> IndexBundle:
    with open(path, "rb") as fh:
        return loads(fh.read())
