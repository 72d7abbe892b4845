"""Binary segment index: one balanced tree over the y-range, queried in
exactly ceil(lg n) + 1 node visits.

The tree is stored as two superimposed wavelet trees over the y-coordinates
of the left and right endpoints (each taken in increasing x order) plus one
bitvector of endpoint kinds over all 2n x-coordinates. Restricted to any
tree node's range, level ``d`` of the left tree is precisely the node's
"which half does the i-th segment by left endpoint descend to" bitstring,
and likewise on the right; every traversal below works directly on the
level bitvectors with node offsets instead of materializing per-node
bitstrings, which is what keeps the payload at 2n*ceil(lg n) + 2n bits.

Queries:

* ``access(y)``    - bottom-up; lifts per-node occurrence counts of the
  segment's two endpoints with select, then reads the x-coordinates off
  the endpoint-kind bitvector.
* ``select(i, j)`` - top-down; at every node the crossing count of the
  lower half is (#left endpoints <= i) - (#right endpoints <= i) restricted
  to that half, available from two rank calls.
* ``rank(i, y)``   - top-down steered by y, accumulating the lower-half
  crossing counts that are skipped; the leaf adds 1 iff the segment at y
  itself crosses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitvec import BitVector
from .errors import NotFoundError, RangeError, ValidationError
from .segments import RankSpaceInstance, Segment
from .space import ComponentSpace, SpaceReport
from .wavelet import WaveletTree


@dataclass
class QueryStats:
    """Per-query diagnostics; pass a fresh one per query (never shared)."""

    node_visits: int = 0
    slab_ops: int = 0


@dataclass(frozen=True)
class QueryCursor:
    """Traversal state at one node, recorded when tracing is requested."""

    lo: int                 # node y-range
    hi: int
    left_count: int         # left endpoints of the node's segments at <= i
    right_count: int        # right endpoints at <= i
    skipped: int            # crossing segments strictly below the node
    remaining: int          # rank (within the node) of the segment searched


class SegmentIndex:
    """Succinct index answering access / select / rank over crossings."""

    def __init__(self, instance: RankSpaceInstance):
        n = instance.n
        if n < 1:
            raise ValidationError("cannot index an empty instance")
        ys = np.arange(1, n + 1, dtype=np.int64)
        left_y = np.empty(2 * n, dtype=np.int64)
        kind = np.empty(2 * n, dtype=np.uint8)
        left_y[instance.x_lefts - 1] = ys
        left_y[instance.x_rights - 1] = ys
        kind[instance.x_lefts - 1] = 0
        kind[instance.x_rights - 1] = 1
        self.n = n
        self.lefts = WaveletTree(left_y[kind == 0], sigma=n)
        self.rights = WaveletTree(left_y[kind == 1], sigma=n)
        self.endpoint_kinds = BitVector(kind)

    @classmethod
    def _from_parts(
        cls, n: int, lefts: WaveletTree, rights: WaveletTree, kinds: BitVector
    ) -> "SegmentIndex":
        obj = cls.__new__(cls)
        obj.n = n
        obj.lefts = lefts
        obj.rights = rights
        obj.endpoint_kinds = kinds
        return obj

    @property
    def path_length(self) -> int:
        """Nodes on any root-to-leaf path: ceil(lg n) + 1."""
        return self.lefts.num_levels + 1

    # -- queries -----------------------------------------------------------

    def access(self, y: int, stats: QueryStats | None = None) -> Segment:
        """The unique segment with y-coordinate ``y``."""
        if not 1 <= y <= self.n:
            raise RangeError(f"y-coordinate {y} outside [1, {self.n}]")
        # top-down pass to collect the path, then lift occurrence counts up
        a, b = 1, self.n
        ol, sl = 0, self.n
        orr, sr = 0, self.n
        path = []
        for bvl, bvr in zip(self.lefts.levels, self.rights.levels):
            if stats is not None:
                stats.node_visits += 1
            if a == b:
                continue  # single-symbol run: identity both ways
            m = (a + b) >> 1
            bl = bvl._rank1(ol)
            br = bvr._rank1(orr)
            zl = sl - (bvl._rank1(ol + sl) - bl)
            zr = sr - (bvr._rank1(orr + sr) - br)
            if y <= m:
                path.append((bvl, bvr, ol, orr, ol - bl, orr - br, 0))
                sl, sr, b = zl, zr, m
            else:
                path.append((bvl, bvr, ol, orr, bl, br, 1))
                ol, orr = ol + zl, orr + zr
                sl, sr, a = sl - zl, sr - zr, m + 1
        if stats is not None:
            stats.node_visits += 1  # leaf
        l = r = 1
        for bvl, bvr, ol, orr, basel, baser, bit in reversed(path):
            l = bvl.select(bit, basel + l) - ol
            r = bvr.select(bit, baser + r) - orr
        x_l = self.endpoint_kinds.select(0, l)
        x_r = self.endpoint_kinds.select(1, r)
        return Segment(x_l, x_r, y)

    def select(
        self,
        i: int,
        j: int,
        stats: QueryStats | None = None,
        trace: list[QueryCursor] | None = None,
    ) -> int:
        """y of the ``j``-th smallest segment crossing the vertical line at ``i``."""
        if not 1 <= i <= 2 * self.n:
            raise RangeError(f"x-coordinate {i} outside [1, {2 * self.n}]")
        r = self.endpoint_kinds.rank(1, i)
        l = i - r
        crossings = l - r
        if not 1 <= j <= crossings:
            raise NotFoundError(
                f"only {crossings} segments cross at x={i}", available=crossings
            )
        a, b = 1, self.n
        ol, sl = 0, self.n
        orr, sr = 0, self.n
        skipped = 0
        jv = j
        for bvl, bvr in zip(self.lefts.levels, self.rights.levels):
            if stats is not None:
                stats.node_visits += 1
            if trace is not None:
                trace.append(QueryCursor(a, b, l, r, skipped, jv))
            if a == b:
                continue
            m = (a + b) >> 1
            bl = bvl._rank1(ol)
            br = bvr._rank1(orr)
            r1_l = bvl._rank1(ol + l) - bl
            r1_r = bvr._rank1(orr + r) - br
            k = (l - r1_l) - (r - r1_r)  # crossings in the lower half
            if jv <= k:
                zl = sl - (bvl._rank1(ol + sl) - bl)
                zr = sr - (bvr._rank1(orr + sr) - br)
                l, r = l - r1_l, r - r1_r
                sl, sr, b = zl, zr, m
            else:
                zl = sl - (bvl._rank1(ol + sl) - bl)
                zr = sr - (bvr._rank1(orr + sr) - br)
                skipped += k
                jv = j - skipped
                l, r = r1_l, r1_r
                ol, orr = ol + zl, orr + zr
                sl, sr, a = sl - zl, sr - zr, m + 1
        if stats is not None:
            stats.node_visits += 1
        if trace is not None:
            trace.append(QueryCursor(a, b, l, r, skipped, jv))
        return a

    def rank(self, i: int, y: int, stats: QueryStats | None = None) -> int:
        """Number of segments crossing at ``i`` with y-coordinate <= ``y``."""
        if not 1 <= i <= 2 * self.n:
            raise RangeError(f"x-coordinate {i} outside [1, {2 * self.n}]")
        if not 1 <= y <= self.n:
            raise RangeError(f"y-coordinate {y} outside [1, {self.n}]")
        r = self.endpoint_kinds.rank(1, i)
        l = i - r
        a, b = 1, self.n
        ol, sl = 0, self.n
        orr, sr = 0, self.n
        skipped = 0
        for bvl, bvr in zip(self.lefts.levels, self.rights.levels):
            if stats is not None:
                stats.node_visits += 1
            if a == b:
                continue
            m = (a + b) >> 1
            # counts of 0 stay 0 all the way down; skip their tree entirely
            if l:
                bl = bvl._rank1(ol)
                r1_l = bvl._rank1(ol + l) - bl
                zl_tot = sl - (bvl._rank1(ol + sl) - bl)
            else:
                r1_l = 0
                zl_tot = 0
            if r:
                br = bvr._rank1(orr)
                r1_r = bvr._rank1(orr + r) - br
                zr_tot = sr - (bvr._rank1(orr + sr) - br)
            else:
                r1_r = 0
                zr_tot = 0
            if y <= m:
                l, r = l - r1_l, r - r1_r
                sl, sr, b = zl_tot, zr_tot, m
            else:
                skipped += (l - r1_l) - (r - r1_r)
                l, r = r1_l, r1_r
                ol, orr = ol + zl_tot, orr + zr_tot
                sl, sr, a = sl - zl_tot, sr - zr_tot, m + 1
        if stats is not None:
            stats.node_visits += 1
        return skipped + (l - r)

    # -- accounting --------------------------------------------------------

    def space_report(self) -> SpaceReport:
        components = []
        for d, (bvl, bvr) in enumerate(zip(self.lefts.levels, self.rights.levels)):
            pl, ol = bvl.space_bits()
            pr, orr = bvr.space_bits()
            components.append(ComponentSpace(f"tree level {d}", pl + pr, ol + orr))
        pk, ok = self.endpoint_kinds.space_bits()
        components.append(ComponentSpace("endpoint kinds", pk, ok))
        return SpaceReport(
            kind="binary",
            n=self.n,
            payload_bits=sum(c.payload_bits for c in components),
            overhead_bits=sum(c.overhead_bits for c in components),
            components=tuple(components),
        )
