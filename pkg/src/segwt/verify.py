"""Differential verification drivers.

Everything is phrased as "given an instance and a set of built indexes,
compare every (or a sampled set of) query against the brute-force oracle",
so the CLI ``verify`` command and the acceptance suite share one engine.
Checks cover answers, error classification (wrong j must raise not-found
with the right crossing count everywhere), and the per-query node-visit
invariant: every traversal touches exactly one node per tree level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import oracle
from .dswt import DeltaSegmentIndex
from .errors import NotFoundError
from .segments import RankSpaceInstance
from .swt import QueryStats, SegmentIndex

Indexed = SegmentIndex | DeltaSegmentIndex


@dataclass
class CheckOutcome:
    instances: int = 0
    queries: int = 0
    visit_violations: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.visit_violations

    def merge(self, other: "CheckOutcome") -> None:
        self.instances += other.instances
        self.queries += other.queries
        self.visit_violations += other.visit_violations
        self.mismatches.extend(other.mismatches)


def counting_check(max_n: int) -> list[tuple[int, int, int]]:
    """(n, enumerated, expected (2n)!/2^n) for n = 1..max_n."""
    out = []
    for n in range(1, max_n + 1):
        count = sum(1 for _ in oracle.enumerate_instances(n))
        out.append((n, count, oracle.expected_instance_count(n)))
    return out


def _note(out: CheckOutcome, name: str, what: str, got, want, inst: RankSpaceInstance) -> None:
    if len(out.mismatches) < 20:
        segs = list(inst.segments) if inst.n <= 8 else f"n={inst.n}"
        out.mismatches.append(f"{name}: {what}: got {got!r}, expected {want!r} on {segs}")
    else:
        out.mismatches.append(f"{name}: {what}")


def _run_query(out, inst, name, idx, kind, args, expected, expect_error):
    stats = QueryStats()
    method = getattr(idx, kind)
    try:
        got = method(*args, stats=stats)
    except NotFoundError as exc:
        if expect_error is None or exc.available != expect_error:
            _note(out, name, f"{kind}{args} error", f"not-found({exc.available})",
                  expected if expect_error is None else f"not-found({expect_error})", inst)
        return
    if expect_error is not None:
        _note(out, name, f"{kind}{args}", got, f"not-found({expect_error})", inst)
        return
    if got != expected:
        _note(out, name, f"{kind}{args}", got, expected, inst)
    if stats.node_visits != idx.path_length:
        out.visit_violations += 1


def check_instance_exhaustive(
    inst: RankSpaceInstance, indexes: Sequence[tuple[str, Indexed]]
) -> CheckOutcome:
    """Compare every valid argument (plus one invalid j per i) to the oracle."""
    out = CheckOutcome(instances=1)
    n = inst.n
    for name, idx in indexes:
        for y in range(1, n + 1):
            out.queries += 1
            _run_query(out, inst, name, idx, "access", (y,), oracle.access(inst, y), None)
        for i in range(1, 2 * n + 1):
            crossings = oracle.crossing_count(inst, i)
            for j in range(1, crossings + 1):
                out.queries += 1
                _run_query(out, inst, name, idx, "select", (i, j),
                           oracle.select(inst, i, j), None)
            out.queries += 1
            _run_query(out, inst, name, idx, "select", (i, crossings + 1), None, crossings)
            for y in range(1, n + 1):
                out.queries += 1
                _run_query(out, inst, name, idx, "rank", (i, y),
                           oracle.rank(inst, i, y), None)
    return out


def check_instance_sampled(
    inst: RankSpaceInstance,
    indexes: Sequence[tuple[str, Indexed]],
    rng: np.random.Generator,
    num_queries: int,
) -> CheckOutcome:
    """Compare ``num_queries`` sampled arguments (1/4 access, 3/8 select, 3/8 rank)."""
    out = CheckOutcome(instances=1)
    n = inst.n
    kinds = rng.integers(0, 8, size=num_queries)
    ys = rng.integers(1, n + 1, size=num_queries)
    xs = rng.integers(1, 2 * n + 1, size=num_queries)
    for kind, y, i in zip(kinds, ys, xs):
        y = int(y)
        i = int(i)
        if kind < 2:
            expected = oracle.access(inst, y)
            for name, idx in indexes:
                out.queries += 1
                _run_query(out, inst, name, idx, "access", (y,), expected, None)
        elif kind < 5:
            crossings = oracle.crossing_count(inst, i)
            if crossings == 0:
                for name, idx in indexes:
                    out.queries += 1
                    _run_query(out, inst, name, idx, "select", (i, 1), None, 0)
            else:
                j = int(rng.integers(1, crossings + 1))
                expected = oracle.select(inst, i, j)
                for name, idx in indexes:
                    out.queries += 1
                    _run_query(out, inst, name, idx, "select", (i, j), expected, None)
        else:
            expected = oracle.rank(inst, i, y)
            for name, idx in indexes:
                out.queries += 1
                _run_query(out, inst, name, idx, "rank", (i, y), expected, None)
    return out


def check_identities(
    inst: RankSpaceInstance,
    idx: Indexed,
    rng: np.random.Generator,
    samples: int,
) -> CheckOutcome:
    """Structural identities: total-rank vs endpoint counts, select of rank."""
    out = CheckOutcome(instances=1)
    n = inst.n
    kinds = idx.endpoint_kinds
    for i in map(int, rng.integers(1, 2 * n + 1, size=samples)):
        out.queries += 1
        want = kinds.rank(0, i) - kinds.rank(1, i)
        got = idx.rank(i, n)
        if got != want:
            _note(out, "identity", f"rank({i}, n) vs endpoint counts", got, want, inst)
    for y in map(int, rng.integers(1, n + 1, size=samples)):
        seg = inst.segments[y - 1]
        if seg.x_right - seg.x_left > 1:
            i = int(rng.integers(seg.x_left, seg.x_right))
        else:
            i = seg.x_left
        out.queries += 1
        got = idx.select(i, idx.rank(i, y))
        if got != y:
            _note(out, "identity", f"select({i}, rank({i}, {y}))", got, y, inst)
    return out


def exhaustive_suite(
    max_n: int, deltas: Sequence[int] = (2, 3), backends: Sequence[str] = ("wavelet", "blocks")
) -> CheckOutcome:
    """Every instance of every size up to ``max_n`` against every structure."""
    out = CheckOutcome()
    for n in range(1, max_n + 1):
        for inst in oracle.enumerate_instances(n):
            indexes: list[tuple[str, Indexed]] = [("binary", SegmentIndex(inst))]
            for d in deltas:
                for backend in backends:
                    indexes.append(
                        (f"delta={d}/{backend}", DeltaSegmentIndex(inst, delta=d, backend=backend))
                    )
            result = check_instance_exhaustive(inst, indexes)
            out.merge(result)
            if not result.ok and len(out.mismatches) > 40:
                return out
    return out


def random_suite(
    trials: int,
    max_n: int,
    seed: int,
    queries_per_instance: int = 200,
    deltas: Sequence[int] = (2, 8, 16),
    backend: str = "wavelet",
) -> CheckOutcome:
    """Seeded random instances of random sizes against binary + delta indexes."""
    rng = np.random.default_rng(seed)
    out = CheckOutcome()
    for _ in range(trials):
        n = int(rng.integers(1, max_n + 1))
        inst = oracle.random_instance(n, rng)
        indexes: list[tuple[str, Indexed]] = [("binary", SegmentIndex(inst))]
        for d in deltas:
            indexes.append((f"delta={d}", DeltaSegmentIndex(inst, delta=d, backend=backend)))
        out.merge(check_instance_sampled(inst, indexes, rng, queries_per_instance))
        out.merge(check_identities(inst, indexes[0][1], rng, max(8, queries_per_instance // 8)))
    return out
