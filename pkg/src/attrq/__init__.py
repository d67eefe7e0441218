"""Rank, select, partial-sum and predecessor queries in attractor-bounded space."""

from .core import (Attractor, Copy, GapString, Literal, Lz77Parse, Text, attractor_from_lz77,
                   gap_attractor, gap_encode, lz77_attractor, lz77_parse, project,
                   validate_attractor)
from .errors import (AttrqError, CapExceeded, EmptySet, FormatError, InvalidAttractor, NoMatch,
                     OutOfRange, PointerNotFound, RankOutOfRange, SumOverflow)
from .psum_index import IndexParams, PsumIndex
from .queries import IndexBundle, PredSet, RankIndex, SelectIndex
from .slp import Slp, Terminal, build_slp, repeat_rules

__all__ = [
    "Attractor", "Copy", "GapString", "Literal", "Lz77Parse", "Text", "attractor_from_lz77",
    "gap_attractor", "gap_encode", "lz77_attractor", "lz77_parse", "project",
    "validate_attractor", "AttrqError", "CapExceeded", "EmptySet", "FormatError",
    "InvalidAttractor", "NoMatch", "OutOfRange", "PointerNotFound", "RankOutOfRange",
    "SumOverflow", "IndexParams", "PsumIndex", "IndexBundle", "PredSet", "RankIndex",
    "SelectIndex", "Slp", "Terminal", "build_slp", "repeat_rules",
]
