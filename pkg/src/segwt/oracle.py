"""Brute-force reference answers, exhaustive instance enumeration, and the
dominance-counting instance generator.

Everything here is ground truth for the differential test suites: the
query functions answer by scanning the crossing predicate directly and
raise the same error classes as the indexed structures, so mismatches in
error behaviour are caught too.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from .errors import EnumerationLimitError, NotFoundError, RangeError, ValidationError
from .segments import RankSpaceInstance, Segment

ENUMERATION_MAX_N = 6


def access(inst: RankSpaceInstance, y: int) -> Segment:
    """The segment with y-coordinate ``y``."""
    return inst.segment_with_y(y)


def select(inst: RankSpaceInstance, i: int, j: int) -> int:
    """y of the ``j``-th smallest segment crossing the vertical line at ``i``."""
    if not 1 <= i <= 2 * inst.n:
        raise RangeError(f"x-coordinate {i} outside [1, {2 * inst.n}]")
    crossing = np.flatnonzero((inst.x_lefts <= i) & (i < inst.x_rights))
    if not 1 <= j <= crossing.size:
        raise NotFoundError(
            f"only {crossing.size} segments cross at x={i}", available=int(crossing.size)
        )
    return int(crossing[j - 1]) + 1


def rank(inst: RankSpaceInstance, i: int, y: int) -> int:
    """Number of segments crossing at ``i`` with y-coordinate <= ``y``."""
    if not 1 <= i <= 2 * inst.n:
        raise RangeError(f"x-coordinate {i} outside [1, {2 * inst.n}]")
    if not 1 <= y <= inst.n:
        raise RangeError(f"y-coordinate {y} outside [1, {inst.n}]")
    return int(np.count_nonzero((inst.x_lefts[:y] <= i) & (i < inst.x_rights[:y])))


def crossing_count(inst: RankSpaceInstance, i: int) -> int:
    if not 1 <= i <= 2 * inst.n:
        raise RangeError(f"x-coordinate {i} outside [1, {2 * inst.n}]")
    return int(np.count_nonzero((inst.x_lefts <= i) & (i < inst.x_rights)))


def _pairings(values: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    # canonical order: always pair the smallest unused value first
    if not values:
        yield ()
        return
    first = values[0]
    for k in range(1, len(values)):
        partner = values[k]
        rest = values[1:k] + values[k + 1 :]
        for tail in _pairings(rest):
            yield ((first, partner),) + tail


def enumerate_instances(n: int) -> Iterator[RankSpaceInstance]:
    """Every valid rank-space instance of size ``n``, exactly once.

    All perfect pairings of {1..2n} into (left < right) pairs, crossed with
    all n! assignments of y-ranks; there are (2n)!/2^n in total. Guarded to
    ``n <= ENUMERATION_MAX_N``.
    """
    if n < 1:
        raise EnumerationLimitError(f"enumeration requires n >= 1, got {n}")
    if n > ENUMERATION_MAX_N:
        raise EnumerationLimitError(
            f"refusing to enumerate n={n} (limit {ENUMERATION_MAX_N}): "
            f"(2n)!/2^n grows too fast"
        )
    for pairing in _pairings(tuple(range(1, 2 * n + 1))):
        for ys in permutations(range(1, n + 1)):
            segs = sorted(
                (Segment(l, r, y) for (l, r), y in zip(pairing, ys)),
                key=lambda s: s.y,
            )
            yield RankSpaceInstance(n=n, segments=tuple(segs))


def expected_instance_count(n: int) -> int:
    """(2n)!/2^n, the number of distinct rank-space instances of size n."""
    total = 1
    for k in range(1, 2 * n + 1):
        total *= k
    return total // (1 << n)


def dominance_instance(points: Sequence[tuple[int, int]]) -> RankSpaceInstance:
    """Instance on which segment-rank computes 2-D dominance counts.

    ``points`` must be a permutation matrix on [1,n] x [1,n] (one point per
    row and per column). Each point (x, y) becomes the segment
    (x, n + x, y); since no segment ends at or before x-coordinate n,
    ``rank(i=x, y)`` equals ``|{(x_i, y_i) : x_i <= x, y_i <= y}|`` for every
    query point (x, y) in [1,n]^2.
    """
    n = len(points)
    xs = sorted(p[0] for p in points)
    ys = sorted(p[1] for p in points)
    if xs != list(range(1, n + 1)) or ys != list(range(1, n + 1)):
        raise ValidationError("points must form a permutation of [1,n] x [1,n]")
    segs = [Segment(x, n + x, y) for x, y in points]
    return RankSpaceInstance(n=n, segments=tuple(sorted(segs, key=lambda s: s.y)))


def random_instance(n: int, rng: np.random.Generator) -> RankSpaceInstance:
    """Uniformly random rank-space instance of size ``n``."""
    if n < 1:
        raise ValidationError(f"instance size must be >= 1, got {n}")
    xs = rng.permutation(2 * n) + 1           # pairing by adjacent draws is uniform
    ys = rng.permutation(n) + 1
    segs = [
        Segment(int(min(a, b)), int(max(a, b)), int(y))
        for a, b, y in zip(xs[0::2], xs[1::2], ys)
    ]
    return RankSpaceInstance(n=n, segments=tuple(sorted(segs, key=lambda s: s.y)))
