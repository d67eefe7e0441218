"""attrq command line.

Exit codes: 0 success, 2 usage, 3 bad data or container, 4 verification failure.
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from . import container, oracles
from .core import (DEFAULT_VALIDATION_CAP, Text, lz77_attractor, read_attractor, read_text,
                   validate_attractor, write_attractor)
from .errors import (AttrqError, CapExceeded, FormatError, InvalidAttractor, NoMatch, OutOfRange,
                     SumOverflow)
from .gadgets import (ParenString, delta_encode, excess_encode, findclose_encode, flip_bits,
                      slp_delta_transform, slp_excess_transform, slp_findclose_transform,
                      verify_reductions)
from .psum_index import space_violations
from .queries import STRUCTURES, IndexBundle
from .slp import build_slp

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _tau(value: str) -> int:
    tau = int(value)
    if tau < 2:
        raise argparse.ArgumentTypeError("tau must be at least 2")
    return tau


def _structures(value: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in value.split(",") if s.strip())
    bad = [s for s in names if s not in STRUCTURES]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"choose from {','.join(STRUCTURES)}")
    return names


def _symbol(value: str) -> int:
    if value.isdigit():
        return int(value)
    if len(value) == 1:
        return ord(value)
    raise argparse.ArgumentTypeError(f"bad symbol {value!r}")


def _bits_arg(value: str) -> Text:
    try:
        return Text.from_bits(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _kv(**items) -> None:
    for k, v in items.items():
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, (list, tuple)):
            v = ",".join(str(x) for x in v)
        print(f"{k}={v}")


# -- commands ------------------------------------------------------------------

def cmd_build(args) -> int:
    text = read_text(args.input, ints=args.ints)
    if args.lz77:
        attractor = lz77_attractor(text)
    else:
        attractor = read_attractor(args.attractor)
    if args.write_attractor:
        write_attractor(args.write_attractor, attractor)
    validate = not args.no_validate and text.n <= args.cap
    bundle = IndexBundle.build(text, attractor, args.tau, structures=args.structures,
                               validate=validate, cap=args.cap)
    container.save(bundle, args.output)
    main_stats = next(sub for _, sub in bundle.substructures()).stats() if text.n else None
    _kv(n=bundle.n, sigma=bundle.sigma, gamma=attractor.gamma, tau=args.tau,
        L=main_stats["L"] if main_stats else 0, structures=bundle.kinds,
        validated=validate, output=args.output)
    return EXIT_OK


def cmd_query(args) -> int:
    bundle = container.load(args.index)
    try:
        answer = bundle.query(args.op, *args.args)
    except TypeError:
        raise UsageError(f"wrong number of arguments for {args.op}") from None
    except LookupError as exc:
        if isinstance(exc, OutOfRange):
            raise
        raise UsageError(str(exc)) from None
    print("none" if answer is None else answer)
    return EXIT_OK


def _query_plan(bundle: IndexBundle, text: Text):
    """(op, args, expected) for every legal argument of every supported query."""
    n = text.n
    symbols = sorted(set(text.symbols))
    if bundle.psum is not None:
        sums = oracles.naive_psum_table(text)
        for v in range(n + 1):
            yield "psum", (v,), sums[v]
        for i in range(1, n + 1):
            yield "access", (i,), sums[i] - sums[i - 1]
    if bundle.rank is not None:
        for c in symbols:
            for i, r in enumerate(oracles.naive_rank_table(text, c)):
                yield "rank", (c, i), r
    if bundle.select is not None:
        for c in symbols:
            for k, pos in enumerate(oracles.naive_select_table(text, c), start=1):
                yield "select", (c, k), pos
    if bundle.pred is not None:
        members = [i for i in range(1, n + 1) if text.symbols[i - 1]]
        table = oracles.naive_predecessor_table(members, n)
        for y in range(1, n + 1):
            yield "pred", (y,), table[y]


def _sampled_plan(bundle: IndexBundle, text: Text, samples: int, seed: int):
    rng = random.Random(seed)
    n = text.n
    symbols = sorted(set(text.symbols))
    members = [i for i in range(1, n + 1) if text.symbols[i - 1]]
    ops = [op for op, kind in (("psum", "psum"), ("access", "psum"), ("rank", "rank"),
                               ("select", "select"), ("pred", "pred")) if getattr(bundle, kind)]
    for _ in range(samples if n else 0):
        op = rng.choice(ops)
        if op == "psum":
            v = rng.randint(0, n)
            yield op, (v,), oracles.naive_psum(text, v)
        elif op == "access":
            i = rng.randint(1, n)
            yield op, (i,), oracles.naive_access(text, i)
        elif op == "rank":
            c, i = rng.choice(symbols), rng.randint(0, n)
            yield op, (c, i), oracles.naive_rank(text, c, i)
        elif op == "select":
            c = rng.choice(symbols)
            k = rng.randint(1, oracles.naive_rank(text, c, n))
            yield op, (c, k), oracles.naive_select(text, c, k)
        else:
            y = rng.randint(1, n)
            yield op, (y,), oracles.naive_predecessor(members, y, n)


def verify_bundle(bundle: IndexBundle, text: Text, samples: int | None = None, seed: int = 0) -> dict:
    """Compare every query against the oracle; returns per-op [checked, failed]."""
    if text.n != bundle.n:
        raise FormatError(f"index covers n={bundle.n} but the text has n={text.n}")
    if samples is None:
        plan = _query_plan(bundle, text)
    else:
        plan = _sampled_plan(bundle, text, samples, seed)
    tally: dict[str, list[int]] = {}
    for op, qargs, expected in plan:
        row = tally.setdefault(op, [0, 0])
        row[0] += 1
        try:
            got = bundle.query(op, *qargs)
        except OutOfRange:
            got = OutOfRange  # the index disagrees about the legal range
        if got != expected:
            row[1] += 1
    return tally


def cmd_verify(args) -> int:
    bundle = container.load(args.index)
    text = read_text(args.input, ints=args.ints)
    samples = None
    if args.samples is not None:
        samples = args.samples
    elif not args.exhaustive and text.n > DEFAULT_VALIDATION_CAP:
        samples = 10000
    tally = verify_bundle(bundle, text, samples, args.seed)
    ok = True
    for op, (checked, failed) in tally.items():
        print(f"{op} checked={checked} failed={failed} {'pass' if not failed else 'FAIL'}")
        ok &= not failed
    for label, sub in bundle.substructures():
        bad = space_violations(sub.stats())
        for msg in bad:
            print(f"space {label}: {msg} FAIL")
        ok &= not bad
    print(f"result={'pass' if ok else 'fail'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    bundle = container.load(args.index)
    rng = random.Random(args.seed)
    n = bundle.n
    if n == 0:
        print("empty index; nothing to measure")
        return EXIT_OK
    targets = []
    if bundle.psum is not None:
        targets.append(("psum", lambda: (bundle.psum, rng.randint(1, n))))
    if bundle.rank is not None:
        subs = list(bundle.rank.by_symbol.values())
        targets.append(("rank", lambda: (rng.choice(subs), rng.randint(1, n))))
    if bundle.select is not None:
        picks = [s for s in bundle.select.by_symbol.values() if s is not None]

        def draw_select():
            sub = rng.choice(picks)
            return sub, rng.randint(1, sub.n)
        targets.append(("select", draw_select))
    if bundle.pred is not None:
        targets.append(("pred", lambda: (bundle.pred.rank1, rng.randint(1, n))))
    for name, draw in targets:
        depths, times = [], []
        for _ in range(args.queries):
            sub, arg = draw()
            depths.append(sub.descent_depth(arg))
            t0 = time.perf_counter()
            sub.psum(arg)
            times.append(time.perf_counter() - t0)
        print(f"{name} queries={args.queries} depth_mean={statistics.fmean(depths):.3f} "
              f"depth_median={statistics.median(depths)} depth_max={max(depths)} "
              f"latency_mean_us={1e6 * statistics.fmean(times):.2f} "
              f"latency_median_us={1e6 * statistics.median(times):.2f}")
    return EXIT_OK


def cmd_stats(args) -> int:
    bundle = container.load(args.index)
    _kv(n=bundle.n, sigma=bundle.sigma, gamma=bundle.attractor.gamma, tau=bundle.tau,
        structures=bundle.kinds)
    ok = True
    for label, sub in bundle.substructures():
        st = sub.stats()
        bad = space_violations(st)
        ok &= not bad
        print(f"{label} n={st['n']} gamma={st['gamma']} tau={st['tau']} L={st['L']} "
              f"block_lengths={','.join(map(str, st['block_lengths']))} "
              f"blocks_per_level={','.join(map(str, st['blocks_per_level']))} "
              f"explicit_table={st['explicit_table']} stored_words={st['stored_words']} "
              f"bounds={'ok' if not bad else 'violated'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_attractor(args) -> int:
    text = read_text(args.input, ints=args.ints)
    attractor = lz77_attractor(text)
    if args.output:
        write_attractor(args.output, attractor)
    else:
        for p in attractor.positions:
            print(p)
    if text.n <= args.cap:
        valid = validate_attractor(text, attractor, args.cap)
        print(f"gamma={attractor.gamma} valid={'true' if valid else 'false'}", file=sys.stderr)
        return EXIT_OK if valid else EXIT_VERIFY
    return EXIT_OK


def cmd_gadget(args) -> int:
    op = args.gadget
    if op == "bp":
        p = ParenString.parse(args.parens)
        try:
            print(getattr(p, args.bp_op)(*args.args))
        except TypeError:
            raise UsageError(f"wrong number of arguments for {args.bp_op}") from None
        return EXIT_OK
    bits = flip_bits(args.bits) if args.flip else args.bits
    if op == "delta":
        print(delta_encode(bits).to_bits())
    elif op == "excess":
        print(excess_encode(bits))
    elif op == "findclose":
        print(findclose_encode(bits))
    elif op == "verify":
        report = verify_reductions(bits)
        for line in report.lines():
            print(line)
        return EXIT_OK if report.ok else EXIT_VERIFY
    elif op == "slp":
        g = build_slp(bits)
        transform = {"delta": slp_delta_transform, "excess": slp_excess_transform,
                     "findclose": slp_findclose_transform}[args.transform]
        h = transform(g)
        print(h.serialize(), end="")
        expanded = h.expand()
        rendered = expanded.to_bits() if args.transform == "delta" else str(ParenString(expanded.symbols))
        _kv(input_size=g.size, output_size=h.size, expansion=rendered)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="attrq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build and save an index container")
    p.add_argument("input")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--attractor", help="file with one 1-based position per line")
    src.add_argument("--lz77", action="store_true", help="use the LZ77 phrase-end attractor")
    p.add_argument("--tau", type=_tau, default=2)
    p.add_argument("--structures", type=_structures, default=STRUCTURES)
    p.add_argument("--ints", action="store_true", help="input is whitespace-separated integers")
    p.add_argument("--no-validate", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_VALIDATION_CAP)
    p.add_argument("--write-attractor", metavar="PATH")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer one query")
    p.add_argument("index")
    p.add_argument("op", choices=("psum", "access", "rank", "select", "pred"))
    p.add_argument("args", nargs="+", type=_symbol)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="compare an index against brute force")
    p.add_argument("index")
    p.add_argument("--input", required=True, help="the text the index was built from")
    p.add_argument("--ints", action="store_true")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="descent depth and latency of random queries")
    p.add_argument("index")
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="per-level block counts and space bounds")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("attractor", help="print the LZ77 attractor of a text")
    p.add_argument("input")
    p.add_argument("--ints", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_VALIDATION_CAP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("gadget", help="lower-bound encodings and identity checks")
    g = p.add_subparsers(dest="gadget", required=True)
    for name in ("delta", "excess", "findclose", "verify"):
        q = g.add_parser(name)
        q.add_argument("bits", type=_bits_arg)
        q.add_argument("--flip", action="store_true", help="complement the bits first")
    q = g.add_parser("slp")
    q.add_argument("transform", choices=("delta", "excess", "findclose"))
    q.add_argument("bits", type=_bits_arg)
    q.add_argument("--flip", action="store_true")
    q = g.add_parser("bp")
    q.add_argument("parens")
    q.add_argument("bp_op", choices=("excess", "findopen", "findclose", "fwd_search",
                                     "bwd_search", "rmq", "RMQ", "rmqi", "RMQi"))
    q.add_argument("args", nargs="+", type=int)
    p.set_defaults(func=cmd_gadget)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, OutOfRange, NoMatch) as exc:
        print(f"attrq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, InvalidAttractor, SumOverflow, CapExceeded, AttrqError, OSError, ValueError) as exc:
        print(f"attrq: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
