"""Per-level slab structures for the wide-fanout segment tree.

One structure serves every tree node of one level: the nodes' endpoint
sequences are concatenated in node order, each endpoint carrying the index
(1..delta) of the child slab its segment belongs to plus its kind (left or
right). Because every level contains each segment exactly once, the node
with y-range [a, b] starts at endpoint offset 2*(a-1) and spans
2*(b-a+1) entries, so node offsets are computed, never stored.

Four queries, all per node and all about prefixes of the node's
x-ordered endpoints:

* ``slab_rank(node, i, j)``    - segments of slabs 1..j crossing after the
  first i endpoints: (#left with label <= j) - (#right with label <= j).
* ``slab_select(node, i, j)``  - the slab holding the j-th such crossing.
* ``endpoint_rank(node, k, i)``- label-k endpoints among the first i.
* ``endpoint_select(node, k, i)`` - position of the i-th label-k endpoint
  (a node-local index; at the root it equals the global x-coordinate).

``endpoint_select_kind`` restricts the occurrence count to one endpoint
kind; when the caller knows the kind of the endpoint it is chasing (as the
bottom-up access traversal does), this avoids the generic merged select.

Two interchangeable backends:

* wavelet ("wavelet"): one wavelet tree per endpoint kind over the label
  sequence; slab_rank is two range-prefix counts, slab_select one
  simultaneous descent of both trees tracking the left/right difference.
* block table ("blocks"): cumulative per-slab-prefix counts at block
  boundaries plus a shared lookup table answering whole chunks of packed
  (label, kind) digits at once; remainders scan at most one block.

The private ``_*_core`` methods take raw (offset, prefix) coordinates and
skip argument validation; the index traversals that sit on top guarantee
their inputs by construction.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .bitvec import BitVector
from .errors import NotFoundError, RangeError, ValidationError
from .wavelet import WaveletTree

BACKENDS = ("wavelet", "blocks")

# chunk lookup tables, shared across levels and indexes, keyed by delta
_TABLE_CACHE: dict[int, tuple[int, list[list[int]], list[list[int]]]] = {}
_TABLE_KEY_LIMIT = 1 << 16


def _chunk_tables(delta: int) -> tuple[int, list[list[int]], list[list[int]]]:
    """(chunk_size, signed_table, count_table) for digits 2*(label-1)+kind."""
    cached = _TABLE_CACHE.get(delta)
    if cached is not None:
        return cached
    base = 2 * delta
    chunk = 1
    while base ** (chunk + 1) <= _TABLE_KEY_LIMIT:
        chunk += 1
    one_s = np.zeros((base, delta + 1), dtype=np.int32)
    one_c = np.zeros((base, delta + 1), dtype=np.int32)
    for d in range(base):
        label = d // 2 + 1
        sign = 1 if d % 2 == 0 else -1
        one_c[d, label:] = 1
        one_s[d, label:] = sign
    tbl_s, tbl_c = one_s, one_c
    for _ in range(chunk - 1):
        # key = high_digit * base**t + low_key
        tbl_s = (one_s[:, None, :] + tbl_s[None, :, :]).reshape(-1, delta + 1)
        tbl_c = (one_c[:, None, :] + tbl_c[None, :, :]).reshape(-1, delta + 1)
    result = (chunk, tbl_s.tolist(), tbl_c.tolist())
    _TABLE_CACHE[delta] = result
    return result


def chunk_table_bits(delta: int) -> int:
    """Bits of the shared chunk table for ``delta`` (8-bit entries)."""
    chunk, tbl_s, _ = _chunk_tables(delta)
    return 2 * len(tbl_s) * (delta + 1) * 8


class _WaveletBackend:
    def __init__(self, labels: np.ndarray, kinds: np.ndarray, delta: int):
        self.lefts = WaveletTree(labels[kinds == 0], sigma=delta)
        self.rights = WaveletTree(labels[kinds == 1], sigma=delta)

    def overhead_bits(self) -> int:
        return self.lefts.space_bits()[1] + self.rights.space_bits()[1]


class _BlockBackend:
    def __init__(self, labels: np.ndarray, kinds: np.ndarray, delta: int, block_width: int):
        base = 2 * delta
        chunk, self.tbl_s, self.tbl_c = _chunk_tables(delta)
        self.chunk = chunk
        self.width = max(chunk, (block_width + chunk - 1) // chunk * chunk)
        length = labels.size

        digits = 2 * (labels.astype(np.int64) - 1) + kinds
        n_full = length // chunk
        if n_full:
            powers = base ** np.arange(chunk, dtype=np.int64)
            self.packed = (
                (digits[: n_full * chunk].reshape(n_full, chunk) * powers).sum(axis=1).tolist()
            )
        else:
            self.packed = []

        n_bound = length // self.width + 1
        counts = np.zeros((n_bound, base), dtype=np.int64)
        if length:
            np.add.at(counts, (np.arange(length) // self.width, digits), 1)
        cum = np.zeros((n_bound, base), dtype=np.int64)
        if n_bound > 1:
            cum[1:] = np.cumsum(counts[: n_bound - 1], axis=0)
        label_of = np.arange(base) // 2 + 1
        sign_of = np.where(np.arange(base) % 2 == 0, 1, -1)
        mask_c = (label_of[None, :] <= np.arange(delta + 1)[:, None]).astype(np.int64)
        self.bound_c = (cum @ mask_c.T).tolist()
        self.bound_s = (cum @ (mask_c * sign_of[None, :]).T).tolist()

        self.labels_list = labels.astype(int).tolist()
        self.kinds_list = kinds.astype(int).tolist()

    def signed_prefix(self, p: int, j: int) -> int:
        """Sum over the first p endpoints of +-1 for left/right with label <= j."""
        t = p // self.width
        acc = self.bound_s[t][j]
        chunk = self.chunk
        tbl = self.tbl_s
        packed = self.packed
        for q in range(t * self.width // chunk, p // chunk):
            acc += tbl[packed[q]][j]
        labels = self.labels_list
        kinds = self.kinds_list
        for idx in range(p - p % chunk, p):
            if labels[idx] <= j:
                acc += 1 if kinds[idx] == 0 else -1
        return acc

    def count_prefix(self, p: int, j: int) -> int:
        """Endpoints with label <= j among the first p, both kinds."""
        t = p // self.width
        acc = self.bound_c[t][j]
        chunk = self.chunk
        tbl = self.tbl_c
        packed = self.packed
        for q in range(t * self.width // chunk, p // chunk):
            acc += tbl[packed[q]][j]
        labels = self.labels_list
        for idx in range(p - p % chunk, p):
            if labels[idx] <= j:
                acc += 1
        return acc

    def kind_prefix(self, p: int, k: int, kind: int) -> int:
        """Label-k endpoints of one kind among the first p."""
        both = self.count_prefix(p, k) - self.count_prefix(p, k - 1)
        signed = self.signed_prefix(p, k) - self.signed_prefix(p, k - 1)
        return (both + signed) // 2 if kind == 0 else (both - signed) // 2

    def overhead_bits(self) -> int:
        rows = len(self.bound_c) * (len(self.bound_c[0]) if self.bound_c else 0)
        boundary = 2 * rows * 32
        packed_bits = len(self.packed) * max(1, (len(self.tbl_s) - 1).bit_length())
        return boundary + packed_bits


class SlabStructure:
    """Concatenated slab representation of one tree level."""

    def __init__(
        self,
        labels: Iterable[int] | np.ndarray,
        kinds: Iterable[int] | np.ndarray,
        delta: int,
        backend: str = "wavelet",
        block_width: int | None = None,
    ):
        if delta < 1:
            raise ValidationError(f"slab count must be >= 1, got {delta}")
        if backend not in BACKENDS:
            raise ValidationError(f"unknown slab backend {backend!r}; choose from {BACKENDS}")
        labels = np.asarray(labels, dtype=np.int64)
        kinds_arr = np.asarray(kinds, dtype=np.uint8)
        if labels.size != kinds_arr.size:
            raise ValidationError("labels and kinds must have equal length")
        if labels.size and (labels.min() < 1 or labels.max() > delta):
            raise ValidationError(f"slab labels must lie in [1, {delta}]")
        self.delta = delta
        self.length = int(labels.size)
        self.backend = backend
        self.labels = labels
        self.kinds = BitVector(kinds_arr)
        if backend == "wavelet":
            self._impl: _WaveletBackend | _BlockBackend = _WaveletBackend(
                labels, kinds_arr, delta
            )
        else:
            if block_width is None:
                half = max(2, self.length // 2)
                block_width = delta * max(1, math.ceil(math.log2(half)))
            self._impl = _BlockBackend(labels, kinds_arr, delta, block_width)

    # -- node plumbing -----------------------------------------------------

    def _node_span(self, node: tuple[int, int]) -> tuple[int, int]:
        a, b = node
        half = self.length // 2
        if not 1 <= a <= b <= half:
            raise RangeError(f"node ({a}, {b}) outside [1, {half}]")
        return 2 * (a - 1), 2 * (b - a + 1)

    def _prefix_split(self, off: int, i: int) -> tuple[int, int, int, int]:
        # (#lefts before node, #lefts among prefix i, rights counterparts)
        rank1 = self.kinds._rank1
        off_l = off - rank1(off)
        l_i = (off + i - rank1(off + i)) - off_l if i else 0
        return off_l, l_i, off - off_l, i - l_i

    def _prefix_lefts(self, off: int, p: int) -> int:
        rank1 = self.kinds._rank1
        return (off + p - rank1(off + p)) - (off - rank1(off)) if p else 0

    # -- queries (validated public wrappers over the raw cores) -------------

    def slab_rank(self, node: tuple[int, int], i: int, j: int) -> int:
        """Crossing segments of slabs 1..j after the node's first i endpoints."""
        off, size = self._node_span(node)
        if not 0 <= i <= size:
            raise RangeError(f"endpoint prefix {i} outside [0, {size}]")
        if not 0 <= j <= self.delta:
            raise RangeError(f"slab bound {j} outside [0, {self.delta}]")
        return self._slab_rank_core(off, i, j)

    def _slab_rank_core(self, off: int, i: int, j: int) -> int:
        if j == 0 or i == 0:
            return 0
        impl = self._impl
        if isinstance(impl, _WaveletBackend):
            off_l, l_i, off_r, r_i = self._prefix_split(off, i)
            return impl.lefts._count_at_most(off_l, off_l + l_i, j) - (
                impl.rights._count_at_most(off_r, off_r + r_i, j)
            )
        return impl.signed_prefix(off + i, j) - impl.signed_prefix(off, j)

    def slab_select(self, node: tuple[int, int], i: int, j: int) -> int:
        """Slab index of the j-th crossing segment (by y) after i endpoints."""
        off, size = self._node_span(node)
        if not 0 <= i <= size:
            raise RangeError(f"endpoint prefix {i} outside [0, {size}]")
        return self._slab_select_core(off, i, j)

    def _slab_select_core(self, off: int, i: int, j: int) -> int:
        return self._slab_select_with_below(off, i, j)[0]

    def _slab_select_with_below(self, off: int, i: int, j: int) -> tuple[int, int]:
        """(slab k of the j-th crossing, crossings in slabs 1..k-1)."""
        impl = self._impl
        if isinstance(impl, _WaveletBackend):
            return self._wavelet_slab_select(off, i, j)
        total = self._slab_rank_core(off, i, self.delta)
        if not 1 <= j <= total:
            raise NotFoundError(f"only {total} crossing segments", available=total)
        lo, hi = 1, self.delta
        while lo < hi:
            mid = (lo + hi) >> 1
            if self._slab_rank_core(off, i, mid) >= j:
                hi = mid
            else:
                lo = mid + 1
        return lo, self._slab_rank_core(off, i, lo - 1)

    def _wavelet_slab_select(self, off: int, i: int, j: int) -> tuple[int, int]:
        impl = self._impl
        off_l, l_i, off_r, r_i = self._prefix_split(off, i)
        total = l_i - r_i
        if not 1 <= j <= total:
            raise NotFoundError(f"only {total} crossing segments", available=total)
        # lockstep descent of both label trees, keeping the prefix interval
        # of each and steering by the left-minus-right count of the low half
        wl, wr = impl.lefts, impl.rights
        j_start = j
        a, b = 1, self.delta
        ol, sl, ul, vl = 0, wl.length, off_l, off_l + l_i
        orr, sr, ur, vr = 0, wr.length, off_r, off_r + r_i
        level = 0
        while a < b:
            bvl = wl.levels[level]
            bvr = wr.levels[level]
            level += 1
            m = (a + b) >> 1
            bl = bvl._rank1(ol)
            br = bvr._rank1(orr)
            zul = (ul - ol) - (bvl._rank1(ul) - bl) if ul > ol else 0
            zvl = (vl - ol) - (bvl._rank1(vl) - bl)
            zl = sl - (bvl._rank1(ol + sl) - bl)
            zur = (ur - orr) - (bvr._rank1(ur) - br) if ur > orr else 0
            zvr = (vr - orr) - (bvr._rank1(vr) - br)
            zr = sr - (bvr._rank1(orr + sr) - br)
            k = (zvl - zul) - (zvr - zur)
            if j <= k:
                ul, vl, sl = ol + zul, ol + zvl, zl
                ur, vr, sr = orr + zur, orr + zvr, zr
                b = m
            else:
                j -= k
                ul, vl = ol + zl + (ul - ol - zul), ol + zl + (vl - ol - zvl)
                ur, vr = orr + zr + (ur - orr - zur), orr + zr + (vr - orr - zvr)
                ol, sl = ol + zl, sl - zl
                orr, sr = orr + zr, sr - zr
                a = m + 1
        return a, j_start - j

    def endpoint_rank(self, node: tuple[int, int], k: int, i: int) -> int:
        """Occurrences of slab label ``k`` among the node's first i endpoints."""
        off, size = self._node_span(node)
        if not 1 <= k <= self.delta:
            raise RangeError(f"slab index {k} outside [1, {self.delta}]")
        if not 0 <= i <= size:
            raise RangeError(f"endpoint prefix {i} outside [0, {size}]")
        return self._endpoint_rank_core(off, i, k)

    def _endpoint_rank_core(self, off: int, i: int, k: int) -> int:
        if i == 0:
            return 0
        impl = self._impl
        if isinstance(impl, _WaveletBackend):
            off_l, l_i, off_r, r_i = self._prefix_split(off, i)
            return impl.lefts._rank_range(off_l, off_l + l_i, k) + (
                impl.rights._rank_range(off_r, off_r + r_i, k)
            )
        hi = impl.count_prefix(off + i, k) - impl.count_prefix(off + i, k - 1)
        lo = impl.count_prefix(off, k) - impl.count_prefix(off, k - 1)
        return hi - lo

    def endpoint_select(self, node: tuple[int, int], k: int, i: int) -> int:
        """Node-local position of the i-th label-``k`` endpoint (either kind)."""
        off, size = self._node_span(node)
        if not 1 <= k <= self.delta:
            raise RangeError(f"slab index {k} outside [1, {self.delta}]")
        total = self._endpoint_rank_core(off, size, k)
        if not 1 <= i <= total:
            raise NotFoundError(
                f"only {total} endpoints in slab {k} of node {node}", available=total
            )
        lo, hi = 1, size
        while lo < hi:
            mid = (lo + hi) >> 1
            if self._endpoint_rank_core(off, mid, k) >= i:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def endpoint_select_kind(self, node: tuple[int, int], k: int, t: int, kind: int) -> int:
        """Node-local position of the t-th label-``k`` endpoint of one kind."""
        off, size = self._node_span(node)
        if not 1 <= k <= self.delta:
            raise RangeError(f"slab index {k} outside [1, {self.delta}]")
        if kind not in (0, 1):
            raise RangeError(f"endpoint kind must be 0 or 1, got {kind}")
        return self._endpoint_select_kind_core(off, size, k, t, kind)

    def _endpoint_select_kind_core(self, off: int, size: int, k: int, t: int, kind: int) -> int:
        impl = self._impl
        kinds = self.kinds
        if isinstance(impl, _WaveletBackend):
            tree = impl.lefts if kind == 0 else impl.rights
            rank1 = kinds._rank1
            before = off - rank1(off) if kind == 0 else rank1(off)
            # occurrence in the level-wide per-kind tree, then back through kinds
            end = off + size
            kind_end = end - rank1(end) if kind == 0 else rank1(end)
            try:
                global_pos = tree._select_from(k, before, t)
            except NotFoundError:
                global_pos = None
            if global_pos is None or global_pos > kind_end:
                available = tree._rank_range(before, kind_end, k)
                raise NotFoundError(
                    f"only {available} endpoints of kind {kind} in slab {k}",
                    available=available,
                )
            return kinds.select(kind, global_pos) - off
        total = impl.kind_prefix(off + size, k, kind) - impl.kind_prefix(off, k, kind)
        if not 1 <= t <= total:
            raise NotFoundError(
                f"only {total} endpoints of kind {kind} in slab {k}", available=total
            )
        base = impl.kind_prefix(off, k, kind)
        lo, hi = 1, size
        while lo < hi:
            mid = (lo + hi) >> 1
            if impl.kind_prefix(off + mid, k, kind) - base >= t:
                hi = mid
            else:
                lo = mid + 1
        return lo

    # -- accounting --------------------------------------------------------

    def space_bits(self) -> tuple[int, int]:
        """(payload, overhead): payload is labels at ceil(lg delta) bits plus kinds."""
        label_width = (self.delta - 1).bit_length() if self.delta > 1 else 0
        payload = self.length * label_width + self.kinds.space_bits()[0]
        overhead = self.kinds.space_bits()[1] + self._impl.overhead_bits()
        return payload, overhead
