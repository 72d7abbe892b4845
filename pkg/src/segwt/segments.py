"""Rank-space segment types, validation, and reduction from raw coordinates.

A rank-space instance of size n is a set of n horizontal segments on the
grid [1, 2n] x [1, n] with exactly one endpoint on every x-coordinate and
exactly one segment on every y-coordinate. A segment (x_left, x_right, y)
crosses the vertical line at i iff ``x_left <= i < x_right`` (half-open on
the right); that predicate is the reference semantics for every query and
every oracle in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    CoordinateRangeError,
    DegenerateSegmentError,
    DuplicateCoordinateError,
    ParseError,
    RangeError,
    TieError,
    ValidationError,
)


@dataclass(frozen=True)
class Segment:
    """One horizontal segment in rank space."""

    x_left: int
    x_right: int
    y: int

    def crosses(self, i: int) -> bool:
        return self.x_left <= i < self.x_right


@dataclass(frozen=True)
class RawSegment:
    """A segment with real-valued coordinates, before rank-space reduction."""

    x_left: float
    x_right: float
    y: float


@dataclass(eq=False)
class RankSpaceInstance:
    """A validated set of n segments, stored in ascending y order.

    Treat as immutable; instances are freely shareable between threads.
    """

    n: int
    segments: tuple[Segment, ...]

    @classmethod
    def from_segments(cls, segs: Iterable[Segment | tuple[int, int, int]]) -> "RankSpaceInstance":
        return validate_instance(segs)

    def segment_with_y(self, y: int) -> Segment:
        if not 1 <= y <= self.n:
            raise RangeError(f"y-coordinate {y} outside [1, {self.n}]")
        return self.segments[y - 1]

    def crossings_at(self, i: int) -> list[Segment]:
        """All segments crossing the vertical line at ``i``, ascending y."""
        if not 1 <= i <= 2 * self.n:
            raise RangeError(f"x-coordinate {i} outside [1, {2 * self.n}]")
        return [s for s in self.segments if s.x_left <= i < s.x_right]

    def endpoint_kinds(self) -> np.ndarray:
        """Bit per x-coordinate: 0 for a left endpoint, 1 for a right one."""
        kinds = np.empty(2 * self.n, dtype=np.uint8)
        kinds[self.x_lefts - 1] = 0
        kinds[self.x_rights - 1] = 1
        return kinds

    # vectorized views (index y-1 -> segment with that y), used by oracles
    @cached_property
    def x_lefts(self) -> np.ndarray:
        return np.array([s.x_left for s in self.segments], dtype=np.int64)

    @cached_property
    def x_rights(self) -> np.ndarray:
        return np.array([s.x_right for s in self.segments], dtype=np.int64)


def validate_instance(segs: Iterable[Segment | tuple[int, int, int]]) -> RankSpaceInstance:
    """Check the rank-space conditions and return the instance sorted by y.

    Raises a distinct :class:`ValidationError` subclass naming the offending
    coordinate for: duplicate x, duplicate y, out-of-range coordinates, and
    ``x_left >= x_right``.
    """
    items = [s if isinstance(s, Segment) else Segment(*map(int, s)) for s in segs]
    n = len(items)
    seen_x: set[int] = set()
    seen_y: set[int] = set()
    for s in items:
        if s.x_left >= s.x_right:
            raise DegenerateSegmentError(s.x_left, s.x_right)
        for x in (s.x_left, s.x_right):
            if not 1 <= x <= 2 * n:
                raise CoordinateRangeError("x", x, 1, 2 * n)
            if x in seen_x:
                raise DuplicateCoordinateError("x", x)
            seen_x.add(x)
        if not 1 <= s.y <= n:
            raise CoordinateRangeError("y", s.y, 1, n)
        if s.y in seen_y:
            raise DuplicateCoordinateError("y", s.y)
        seen_y.add(s.y)
    # n segments, 2n distinct in-range x and n distinct in-range y: the
    # multisets are forced to be exactly {1..2n} and {1..n}
    return RankSpaceInstance(n=n, segments=tuple(sorted(items, key=lambda s: s.y)))


@dataclass(frozen=True)
class CoordinateMaps:
    """Invertible rank <-> raw coordinate maps produced by the reduction."""

    x_values: tuple[float, ...]
    y_values: tuple[float, ...]

    def x_original(self, rank: int) -> float:
        if not 1 <= rank <= len(self.x_values):
            raise RangeError(f"x-rank {rank} outside [1, {len(self.x_values)}]")
        return self.x_values[rank - 1]

    def y_original(self, rank: int) -> float:
        if not 1 <= rank <= len(self.y_values):
            raise RangeError(f"y-rank {rank} outside [1, {len(self.y_values)}]")
        return self.y_values[rank - 1]

    def segment_original(self, seg: Segment) -> RawSegment:
        return RawSegment(
            self.x_original(seg.x_left), self.x_original(seg.x_right), self.y_original(seg.y)
        )


def reduce_to_rank_space(
    raws: Sequence[RawSegment | tuple[float, float, float]],
    strict: bool = True,
) -> tuple[RankSpaceInstance, CoordinateMaps]:
    """Replace coordinates by their ranks among all endpoints / all y values.

    In strict mode (default) equal raw x-coordinates or equal raw
    y-coordinates raise :class:`TieError`. Otherwise ties are broken
    deterministically: x ties by (value, right-endpoint-first, y), which
    preserves the half-open crossing semantics at a shared coordinate, and
    y ties by x_left.
    """
    items = [r if isinstance(r, RawSegment) else RawSegment(*map(float, r)) for r in raws]
    for r in items:
        if not r.x_left < r.x_right:
            raise DegenerateSegmentError(r.x_left, r.x_right)

    # (value, kind, y): kind orders a right endpoint before a left one at
    # the same value so the earlier segment has stopped crossing before the
    # later one starts
    endpoints = []
    for idx, r in enumerate(items):
        endpoints.append((r.x_left, 1, r.y, idx, "L"))
        endpoints.append((r.x_right, 0, r.y, idx, "R"))
    endpoints.sort(key=lambda e: (e[0], e[1], e[2]))
    if strict:
        for a, b in zip(endpoints, endpoints[1:]):
            if a[0] == b[0]:
                raise TieError("x", a[0])
    ys = sorted((r.y, r.x_left, idx) for idx, r in enumerate(items))
    if strict:
        for a, b in zip(ys, ys[1:]):
            if a[0] == b[0]:
                raise TieError("y", a[0])

    x_rank: dict[tuple[int, str], int] = {}
    for rank, e in enumerate(endpoints, 1):
        x_rank[(e[3], e[4])] = rank
    y_rank = {idx: rank for rank, (_, _, idx) in enumerate(ys, 1)}

    segs = [
        Segment(x_rank[(idx, "L")], x_rank[(idx, "R")], y_rank[idx])
        for idx in range(len(items))
    ]
    maps = CoordinateMaps(
        x_values=tuple(e[0] for e in endpoints),
        y_values=tuple(v for v, _, _ in ys),
    )
    return validate_instance(segs), maps


def parse_segment_file(stream: TextIO, raw: bool = False):
    """Parse the plain-text segment format: one ``x_left x_right y`` triple
    per line, ``#`` comments and blank lines ignored. Returns a list of
    :class:`Segment` (integers) or, with ``raw=True``, :class:`RawSegment`.
    """
    out = []
    for line_no, line in enumerate(stream, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = text.split()
        if len(fields) != 3:
            raise ParseError(line_no, text, f"expected 3 fields, got {len(fields)}")
        try:
            if raw:
                out.append(RawSegment(*(float(f) for f in fields)))
            else:
                out.append(Segment(*(int(f) for f in fields)))
        except ValueError as exc:
            kind = "decimal" if raw else "integer"
            raise ParseError(line_no, text, f"expected three {kind}s") from exc
    return out
