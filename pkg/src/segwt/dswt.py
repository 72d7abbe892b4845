"""Wide-fanout segment index: a delta-ary tree over the y-range answering
every query in exactly ceil(log_delta n) + 1 node visits.

Each internal node splits its y-range into ``delta`` slabs with the floor
formula ``child k of [a, b] = [a + floor(s*k/delta), a + floor(s*(k+1)/delta) - 1]``
(s = b - a + 1, k 0-based). All nodes of one depth share a single
:class:`~segwt.slabs.SlabStructure` holding their concatenated endpoint
sequences. The tree has uniform height: ranges that shrink to one segment
early continue as single-child chains (their endpoints all carry the last
slab label), which keeps every level at exactly 2n endpoints and makes the
per-query node-visit count the same for every argument.

The root level's endpoint kinds double as the global left/right endpoint
bitstring, since the root's endpoint order is the global x order.
"""

from __future__ import annotations

import math

import numpy as np

from dataclasses import dataclass

from .bitvec import BitVector
from .errors import NotFoundError, RangeError, ValidationError
from .segments import RankSpaceInstance, Segment
from .slabs import SlabStructure, chunk_table_bits
from .space import ComponentSpace, SpaceReport
from .swt import QueryStats


@dataclass(frozen=True)
class DeltaQueryCursor:
    """Traversal state at one node, recorded when tracing is requested."""

    lo: int                 # node y-range
    hi: int
    endpoint_count: int     # endpoints of the node's segments at x <= i
    skipped: int            # crossing segments strictly below the node
    remaining: int          # rank (within the node) of the segment searched


def default_delta(n: int, epsilon: float = 0.5) -> int:
    """Fan-out rule: max(2, ceil((lg n)^epsilon))."""
    if n < 2:
        return 2
    return max(2, math.ceil(math.log2(n) ** epsilon))


def child_slab(a: int, b: int, delta: int, y: int) -> int:
    """1-based index of the child slab of node [a, b] containing ``y``.

    Inverts the floor-formula child ranges exactly; when delta divides the
    node size this reduces to 1 + (y - a) // (size / delta).
    """
    s = b - a + 1
    return ((y - a + 1) * delta + s - 1) // s


def child_range(a: int, b: int, delta: int, k: int) -> tuple[int, int]:
    """y-range of the k-th (1-based) child slab of node [a, b]; may be empty."""
    s = b - a + 1
    return a + (s * (k - 1)) // delta, a + (s * k) // delta - 1


class DeltaSegmentIndex:
    """Succinct delta-ary index over a rank-space instance."""

    def __init__(
        self,
        instance: RankSpaceInstance,
        delta: int | None = None,
        epsilon: float = 0.5,
        backend: str = "wavelet",
        block_multiplier: float = 1.0,
    ):
        n = instance.n
        if n < 1:
            raise ValidationError("cannot index an empty instance")
        if delta is None:
            delta = default_delta(n, epsilon)
        if delta < 2:
            raise ValidationError(f"fan-out must be >= 2, got {delta}")
        self.n = n
        self.delta = delta
        self.epsilon = epsilon
        self.backend = backend
        self.block_multiplier = block_multiplier

        height = 0
        reach = 1
        while reach < n:
            reach *= delta
            height += 1
        self.height = height

        ys = np.arange(1, n + 1, dtype=np.int64)
        ep_y = np.empty(2 * n, dtype=np.int64)
        ep_kind = np.empty(2 * n, dtype=np.uint8)
        ep_y[instance.x_lefts - 1] = ys
        ep_y[instance.x_rights - 1] = ys
        ep_kind[instance.x_lefts - 1] = 0
        ep_kind[instance.x_rights - 1] = 1

        width = self._block_width()
        lo = np.ones(n, dtype=np.int64)
        hi = np.full(n, n, dtype=np.int64)
        x_order = np.arange(2 * n, dtype=np.int64)
        levels: list[SlabStructure] = []
        for _ in range(height):
            s = hi - lo + 1
            t = ys - lo
            k0 = ((t + 1) * delta + s - 1) // s - 1
            # endpoints in (node, x) order; the node of y starts at 2*(lo-1)
            order = np.lexsort((x_order, lo[ep_y - 1]))
            levels.append(
                SlabStructure(
                    labels=(k0 + 1)[ep_y[order] - 1],
                    kinds=ep_kind[order],
                    delta=delta,
                    backend=backend,
                    block_width=width,
                )
            )
            lo, hi = lo + (s * k0) // delta, lo + (s * (k0 + 1)) // delta - 1
        self.levels = levels
        if height:
            self.endpoint_kinds = levels[0].kinds
        else:
            self.endpoint_kinds = BitVector(ep_kind)

        path = []
        a, b = 1, n
        for _ in range(height):
            k = child_slab(a, b, delta, n)
            path.append(k)
            a, b = child_range(a, b, delta, k)
        self.leaf_path = tuple(path)  # packing record: route to the last leaf

    def _block_width(self) -> int:
        bits = max(1, math.ceil(math.log2(max(2, self.n))))
        return max(1, round(self.block_multiplier * self.delta * bits))

    @classmethod
    def _from_parts(
        cls,
        n: int,
        delta: int,
        epsilon: float,
        backend: str,
        block_multiplier: float,
        levels: list[SlabStructure],
        endpoint_kinds: BitVector,
    ) -> "DeltaSegmentIndex":
        obj = cls.__new__(cls)
        obj.n = n
        obj.delta = delta
        obj.epsilon = epsilon
        obj.backend = backend
        obj.block_multiplier = block_multiplier
        obj.height = len(levels)
        obj.levels = levels
        obj.endpoint_kinds = endpoint_kinds
        path = []
        a, b = 1, n
        for _ in range(obj.height):
            k = child_slab(a, b, delta, n)
            path.append(k)
            a, b = child_range(a, b, delta, k)
        obj.leaf_path = tuple(path)
        return obj

    @property
    def path_length(self) -> int:
        """Nodes on any root-to-leaf path: ceil(log_delta n) + 1."""
        return self.height + 1

    # -- queries -----------------------------------------------------------

    def access(self, y: int, stats: QueryStats | None = None) -> Segment:
        """The unique segment with y-coordinate ``y``."""
        if not 1 <= y <= self.n:
            raise RangeError(f"y-coordinate {y} outside [1, {self.n}]")
        a, b = 1, self.n
        path = []
        for level in self.levels:
            k = child_slab(a, b, self.delta, y)
            path.append((level, 2 * (a - 1), 2 * (b - a + 1), k))
            a, b = child_range(a, b, self.delta, k)
            if stats is not None:
                stats.node_visits += 1
        if stats is not None:
            stats.node_visits += 1  # leaf
        # lift the two endpoint counts; the chased endpoint's kind is known
        # (x_l is a left endpoint, x_r a right one), so each lift is the
        # kind-restricted occurrence select of its slab label
        pos_l, lefts_l = 1, 1
        pos_r, rights_r = 2, 1
        for level, off, size, k in reversed(path):
            pos_l = level._endpoint_select_kind_core(off, size, k, lefts_l, 0)
            pos_r = level._endpoint_select_kind_core(off, size, k, rights_r, 1)
            lefts_l = level._prefix_lefts(off, pos_l)
            rights_r = pos_r - level._prefix_lefts(off, pos_r)
            if stats is not None:
                stats.slab_ops += 2
        return Segment(pos_l, pos_r, y)

    def select(
        self,
        i: int,
        j: int,
        stats: QueryStats | None = None,
        trace: list[DeltaQueryCursor] | None = None,
    ) -> int:
        """y of the ``j``-th smallest segment crossing the vertical line at ``i``."""
        if not 1 <= i <= 2 * self.n:
            raise RangeError(f"x-coordinate {i} outside [1, {2 * self.n}]")
        kinds = self.endpoint_kinds
        crossings = i - 2 * kinds.rank(1, i)
        if not 1 <= j <= crossings:
            raise NotFoundError(
                f"only {crossings} segments cross at x={i}", available=crossings
            )
        a, b = 1, self.n
        iv = i
        skipped = 0
        jv = j
        for level in self.levels:
            if stats is not None:
                stats.node_visits += 1
                stats.slab_ops += 3  # slab-select, slab-rank, endpoint-rank
            if trace is not None:
                trace.append(DeltaQueryCursor(a, b, iv, skipped, jv))
            off = 2 * (a - 1)
            k, below = level._slab_select_with_below(off, iv, jv)
            skipped += below
            jv = j - skipped
            iv = level._endpoint_rank_core(off, iv, k)
            a, b = child_range(a, b, self.delta, k)
        if stats is not None:
            stats.node_visits += 1
        if trace is not None:
            trace.append(DeltaQueryCursor(a, b, iv, skipped, jv))
        return a

    def rank(self, i: int, y: int, stats: QueryStats | None = None) -> int:
        """Number of segments crossing at ``i`` with y-coordinate <= ``y``."""
        if not 1 <= i <= 2 * self.n:
            raise RangeError(f"x-coordinate {i} outside [1, {2 * self.n}]")
        if not 1 <= y <= self.n:
            raise RangeError(f"y-coordinate {y} outside [1, {self.n}]")
        a, b = 1, self.n
        iv = i
        skipped = 0
        for level in self.levels:
            if stats is not None:
                stats.node_visits += 1
            off = 2 * (a - 1)
            k = child_slab(a, b, self.delta, y)
            if k > 1:
                skipped += level._slab_rank_core(off, iv, k - 1)
                if stats is not None:
                    stats.slab_ops += 1
            iv = level._endpoint_rank_core(off, iv, k)
            if stats is not None:
                stats.slab_ops += 1
            a, b = child_range(a, b, self.delta, k)
        if stats is not None:
            stats.node_visits += 1
        # the leaf's segment crosses iff exactly its left endpoint has passed
        return skipped + (1 if iv == 1 else 0)

    # -- accounting --------------------------------------------------------

    def space_report(self) -> SpaceReport:
        components = []
        for d, level in enumerate(self.levels):
            p, o = level.space_bits()
            components.append(ComponentSpace(f"tree level {d}", p, o))
        if not self.levels:
            p, o = self.endpoint_kinds.space_bits()
            components.append(ComponentSpace("endpoint kinds", p, o))
        if self.backend == "blocks":
            components.append(
                ComponentSpace("shared chunk table", 0, chunk_table_bits(self.delta))
            )
        return SpaceReport(
            kind="delta",
            n=self.n,
            payload_bits=sum(c.payload_bits for c in components),
            overhead_bits=sum(c.overhead_bits for c in components),
            components=tuple(components),
        )
