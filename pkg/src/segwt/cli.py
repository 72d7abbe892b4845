"""Command-line front end.

Subcommands::

    segwt build  INPUT [--kind binary|delta] [--delta K] [--epsilon E]
                 [--backend wavelet|blocks] [--raw] [--break-ties] [--out PATH]
    segwt query  CONTAINER (access Y | select I J | rank I Y) [--stats]
    segwt verify [--exhaustive-n N] [--random-trials T] [--seed S] [--max-n M]
    segwt bench  [--sizes N ...] [--delta K] [--backend B]
                 [--queries-per-size Q] [--seed S] [--csv] [--threads T]

Exit codes: 0 success, 2 usage, 3 parse/validation/container error,
4 query-domain error, 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import container, oracle, verify
from .dswt import DeltaSegmentIndex
from .errors import (
    ContainerError,
    EnumerationLimitError,
    NotFoundError,
    ParseError,
    RangeError,
    SegwtError,
    ValidationError,
)
from .segments import parse_segment_file, reduce_to_rank_space, validate_instance
from .swt import QueryStats, SegmentIndex

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_QUERY = 4
EXIT_VERIFY = 5

BENCH_CSV_HEADER = "n,kind,delta,build_ms,bits_per_nlgn,node_visits,query_ns"


def _fmt_raw(value: float) -> str:
    return f"{value:g}"


def cmd_build(args) -> int:
    path = Path(args.input)
    try:
        with path.open("r", encoding="utf-8") as stream:
            parsed = parse_segment_file(stream, raw=args.raw)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_DATA

    maps = None
    if args.raw:
        instance, maps = reduce_to_rank_space(parsed, strict=not args.break_ties)
    else:
        instance = validate_instance(parsed)

    if args.kind == "binary":
        index = SegmentIndex(instance)
    else:
        index = DeltaSegmentIndex(
            instance, delta=args.delta, epsilon=args.epsilon, backend=args.backend
        )

    out = Path(args.out) if args.out else path.with_suffix(path.suffix + ".swtx")
    written = container.save(out, index, maps)
    report = index.space_report()
    for line in report.lines():
        print(line)
    print(f"wrote {out} ({written} bytes)")
    return EXIT_OK


def cmd_query(args) -> int:
    index, maps = container.load(args.container)
    stats = QueryStats()
    op = args.op
    vals = args.values
    arity = {"access": 1, "select": 2, "rank": 2}[op]
    if len(vals) != arity:
        raise ValidationError(f"{op} takes {arity} argument(s), got {len(vals)}")

    if op == "access":
        seg = index.access(vals[0], stats=stats)
        if maps is not None:
            raw = maps.segment_original(seg)
            print(f"{_fmt_raw(raw.x_left)} {_fmt_raw(raw.x_right)} {_fmt_raw(raw.y)}")
        else:
            print(f"{seg.x_left} {seg.x_right} {seg.y}")
    elif op == "select":
        y = index.select(vals[0], vals[1], stats=stats)
        print(_fmt_raw(maps.y_original(y)) if maps is not None else y)
    else:
        print(index.rank(vals[0], vals[1], stats=stats))
    if args.stats:
        print(f"node visits: {stats.node_visits}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = True
    print(f"counting check (n = 1..{min(args.exhaustive_n, 4)}):")
    for n, got, want in verify.counting_check(min(args.exhaustive_n, 4)):
        status = "OK" if got == want else "MISMATCH"
        if got != want:
            ok = False
        print(f"  n={n}: {got} instances (expected {want}) {status}")

    suite = verify.exhaustive_suite(args.exhaustive_n)
    print(
        f"exhaustive differential (n <= {args.exhaustive_n}): "
        f"{suite.instances} instances, {suite.queries} queries, "
        f"{len(suite.mismatches)} mismatches, {suite.visit_violations} visit violations"
    )
    ok = ok and suite.ok

    rand = verify.random_suite(args.random_trials, args.max_n, args.seed)
    print(
        f"randomized differential ({args.random_trials} trials, n <= {args.max_n}, "
        f"seed {args.seed}): {rand.queries} queries, "
        f"{len(rand.mismatches)} mismatches, {rand.visit_violations} visit violations"
    )
    ok = ok and rand.ok

    for outcome in (suite, rand):
        for line in outcome.mismatches[:10]:
            print(f"  MISMATCH {line}", file=sys.stderr)
    if not ok:
        print("verification FAILED", file=sys.stderr)
        return EXIT_VERIFY
    print("verification passed")
    return EXIT_OK


def _bench_queries(index, args_list):
    stats = QueryStats()
    for kind, a, b in args_list:
        if kind == 0:
            index.access(a, stats=stats)
        elif kind == 1:
            try:
                index.select(a, b, stats=stats)
            except NotFoundError:
                pass
        else:
            index.rank(a, b, stats=stats)
    return stats


def cmd_bench(args) -> int:
    rows = []
    rng = np.random.default_rng(args.seed)
    for n in args.sizes:
        inst = oracle.random_instance(n, rng)
        t0 = time.perf_counter()
        if args.delta:
            index = DeltaSegmentIndex(inst, delta=args.delta, backend=args.backend)
            kind = "delta"
        else:
            index = SegmentIndex(inst)
            kind = "binary"
        build_ms = (time.perf_counter() - t0) * 1e3

        q = args.queries_per_size
        arg_kinds = rng.integers(0, 3, size=q)
        ys = rng.integers(1, n + 1, size=q)
        xs = rng.integers(1, 2 * n + 1, size=q)
        draws = rng.random(size=q)
        batch = []
        for k, y, x, d in zip(arg_kinds, ys, xs, draws):
            k, y, x = int(k), int(y), int(x)
            if k == 0:
                batch.append((0, y, 0))
            elif k == 1:
                crossings = oracle.crossing_count(inst, x)
                batch.append((1, x, 1 + int(d * crossings) if crossings else 1))
            else:
                batch.append((2, x, y))
        t0 = time.perf_counter()
        if args.threads > 1:
            chunks = [batch[i :: args.threads] for i in range(args.threads)]
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                list(pool.map(lambda c: _bench_queries(index, c), chunks))
        else:
            _bench_queries(index, batch)
        query_ns = (time.perf_counter() - t0) / max(1, q) * 1e9

        total_bits = index.space_report().total_bits
        bits_per = total_bits / (n * math.log2(n)) if n > 1 else float(total_bits)
        rows.append(
            (n, kind, args.delta or 0, build_ms, bits_per, index.path_length, query_ns)
        )

    if args.csv:
        print(BENCH_CSV_HEADER)
        for r in rows:
            print(f"{r[0]},{r[1]},{r[2]},{r[3]:.3f},{r[4]:.4f},{r[5]},{r[6]:.0f}")
    else:
        print(f"{'n':>9} {'kind':>7} {'delta':>5} {'build ms':>10} "
              f"{'bits/(n lg n)':>14} {'visits':>6} {'query ns':>10}")
        for r in rows:
            print(f"{r[0]:>9} {r[1]:>7} {r[2]:>5} {r[3]:>10.2f} {r[4]:>14.4f} "
                  f"{r[5]:>6} {r[6]:>10.0f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segwt",
        description="Succinct indexes for horizontal line segments in rank space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index from a segment file")
    p.add_argument("input", help="segment file: 'x_left x_right y' per line, # comments")
    p.add_argument("--kind", choices=("binary", "delta"), default="binary")
    p.add_argument("--delta", type=int, default=None, help="fan-out (delta kind only)")
    p.add_argument("--epsilon", type=float, default=0.5, help="fan-out exponent default rule")
    p.add_argument("--backend", choices=("wavelet", "blocks"), default="wavelet")
    p.add_argument("--raw", action="store_true", help="real coordinates; reduce to rank space")
    p.add_argument("--break-ties", action="store_true",
                   help="deterministic tie-breaking instead of rejecting raw ties")
    p.add_argument("--out", default=None, help="output container path (default INPUT.swtx)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="run one query against a built container")
    p.add_argument("container")
    p.add_argument("op", choices=("access", "select", "rank"))
    p.add_argument("values", type=int, nargs="+", help="access Y | select I J | rank I Y")
    p.add_argument("--stats", action="store_true", help="also print node-visit count")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="run the differential verification suites")
    p.add_argument("--exhaustive-n", type=int, default=3)
    p.add_argument("--random-trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-n", type=int, default=1024)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="build/query timing and space table")
    p.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096])
    p.add_argument("--delta", type=int, default=None, help="bench the delta index instead")
    p.add_argument("--backend", choices=("wavelet", "blocks"), default="wavelet")
    p.add_argument("--queries-per-size", type=int, default=2000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, ContainerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (RangeError, NotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUERY
    except SegwtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
