"""Balanced binary wavelet tree over an integer alphabet [1, sigma].

The tree is stored pointerlessly: one concatenated bitvector per level, in
which every node occupies a contiguous range. Child offsets are recovered
on the fly while descending (the left child starts where its parent does;
the right child starts after the parent's zeros), so no per-node boundary
table is kept. A node whose alphabet interval is a single symbol before
the last level emits an all-zero run, which keeps every level at exactly
``length`` bits for any alphabet size.

Alphabet intervals split at the midpoint ``(a + b) // 2``; all positions
and occurrence indexes are 1-based, prefix lengths may be 0.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .bitvec import BitVector
from .errors import NotFoundError, RangeError, ValidationError


class WaveletTree:
    """Sequence over [1, sigma] with access/rank/select and range counting."""

    __slots__ = ("length", "sigma", "num_levels", "levels")

    def __init__(self, seq: Iterable[int] | np.ndarray, sigma: int):
        if sigma < 1:
            raise ValidationError(f"alphabet size must be >= 1, got {sigma}")
        arr = np.asarray(list(seq) if not isinstance(seq, np.ndarray) else seq, dtype=np.int64)
        if arr.size:
            bad = (arr < 1) | (arr > sigma)
            if bad.any():
                sym = int(arr[bad][0])
                raise ValidationError(f"symbol {sym} outside alphabet [1, {sigma}]")
        self.length = int(arr.size)
        self.sigma = sigma
        self.num_levels = (sigma - 1).bit_length()

        levels: list[BitVector] = []
        cur = arr
        lo = np.ones_like(cur)
        hi = np.full_like(cur, sigma)
        for _ in range(self.num_levels):
            mid = (lo + hi) >> 1
            bits = (cur > mid).astype(np.uint8)
            levels.append(BitVector(bits))
            new_lo = np.where(bits, mid + 1, lo)
            new_hi = np.where(bits, hi, mid)
            # stable partition of every node into (zeros, ones); nodes stay
            # in ascending interval order, so one global key sort suffices
            order = np.argsort(new_lo * 2 + bits, kind="stable")
            cur = cur[order]
            lo = new_lo[order]
            hi = new_hi[order]
        self.levels = levels

    def __len__(self) -> int:
        return self.length

    # -- point queries -----------------------------------------------------

    def access(self, i: int) -> int:
        """Symbol at 1-based position ``i``."""
        if not 1 <= i <= self.length:
            raise RangeError(f"position {i} outside [1, {self.length}]")
        a, b = 1, self.sigma
        o, s = 0, self.length
        for bv in self.levels:
            if a == b:
                break
            m = (a + b) >> 1
            base1 = bv._rank1(o)
            r1_i = bv._rank1(o + i) - base1
            z = s - (bv._rank1(o + s) - base1)
            if (bv._words[(o + i - 1) >> 6] >> ((o + i - 1) & 63)) & 1:
                i, o, s, a = r1_i, o + z, s - z, m + 1
            else:
                i, s, b = i - r1_i, z, m
        return a

    def rank(self, symbol: int, i: int) -> int:
        """Occurrences of ``symbol`` among the first ``i`` positions."""
        self._check_symbol(symbol)
        if not 0 <= i <= self.length:
            raise RangeError(f"prefix length {i} outside [0, {self.length}]")
        a, b = 1, self.sigma
        o, s = 0, self.length
        for bv in self.levels:
            if a == b:
                break
            m = (a + b) >> 1
            base1 = bv._rank1(o)
            r1_i = bv._rank1(o + i) - base1
            z = s - (bv._rank1(o + s) - base1)
            if symbol <= m:
                i, s, b = i - r1_i, z, m
            else:
                i, o, s, a = r1_i, o + z, s - z, m + 1
        return i

    def select(self, symbol: int, j: int) -> int:
        """1-based position of the ``j``-th occurrence of ``symbol``."""
        self._check_symbol(symbol)
        if j < 1:
            raise NotFoundError(f"occurrence index {j} must be >= 1")
        if self.num_levels == 0:
            if j > self.length:
                raise NotFoundError(
                    f"only {self.length} occurrences of {symbol}", available=self.length
                )
            return j
        a, b = 1, self.sigma
        o, s = 0, self.length
        path: list[tuple[BitVector, int, int, int]] = []
        for bv in self.levels:
            if a == b:
                break  # all-zero pass-through run: identity on both directions
            m = (a + b) >> 1
            base1 = bv._rank1(o)
            z = s - (bv._rank1(o + s) - base1)
            if symbol <= m:
                path.append((bv, o, o - base1, 0))
                s, b = z, m
            else:
                path.append((bv, o, base1, 1))
                o, s, a = o + z, s - z, m + 1
        if j > s:
            raise NotFoundError(f"only {s} occurrences of {symbol}", available=s)
        for bv, o, base, bit in reversed(path):
            j = bv.select(bit, base + j) - o
        return j

    # -- range counting ----------------------------------------------------

    def prefix_range_count(self, i: int, c: int) -> int:
        """Symbols <= ``c`` among the first ``i`` positions (one descent)."""
        if not 0 <= i <= self.length:
            raise RangeError(f"prefix length {i} outside [0, {self.length}]")
        if not 0 <= c <= self.sigma:
            raise RangeError(f"symbol bound {c} outside [0, {self.sigma}]")
        return self._count_at_most(0, i, c)

    def count_at_most(self, lo: int, hi: int, c: int) -> int:
        """Symbols <= ``c`` among positions ``lo+1 .. hi``."""
        if not 0 <= lo <= hi <= self.length:
            raise RangeError(f"range ({lo}, {hi}] invalid for length {self.length}")
        return self._count_at_most(lo, hi, c)

    def _count_at_most(self, u: int, v: int, c: int) -> int:
        if c <= 0 or u >= v:
            return 0
        a, b = 1, self.sigma
        o, s = 0, self.length
        acc = 0
        level = 0
        while True:
            if c >= b:
                return acc + (v - u)
            if c < a:
                return acc
            bv = self.levels[level]
            level += 1
            m = (a + b) >> 1
            base1 = bv._rank1(o)
            z_u = (u - (bv._rank1(o + u) - base1)) if u else 0
            z_v = v - (bv._rank1(o + v) - base1)
            z = s - (bv._rank1(o + s) - base1)
            if c <= m:
                u, v, s, b = z_u, z_v, z, m
            else:
                acc += z_v - z_u
                u, v, o, s, a = u - z_u, v - z_v, o + z, s - z, m + 1

    def rank_range(self, lo: int, hi: int, symbol: int) -> int:
        """Occurrences of ``symbol`` among positions ``lo+1 .. hi``."""
        self._check_symbol(symbol)
        if not 0 <= lo <= hi <= self.length:
            raise RangeError(f"range ({lo}, {hi}] invalid for length {self.length}")
        return self._rank_range(lo, hi, symbol)

    def _rank_range(self, u: int, v: int, symbol: int) -> int:
        a, b = 1, self.sigma
        o, s = 0, self.length
        for bv in self.levels:
            if a == b or u >= v:
                break
            m = (a + b) >> 1
            base1 = bv._rank1(o)
            r1_u = (bv._rank1(o + u) - base1) if u else 0
            r1_v = bv._rank1(o + v) - base1
            z = s - (bv._rank1(o + s) - base1)
            if symbol <= m:
                u, v, s, b = u - r1_u, v - r1_v, z, m
            else:
                u, v, o, s, a = r1_u, r1_v, o + z, s - z, m + 1
        return v - u

    def _select_from(self, symbol: int, lo: int, t: int) -> int:
        """Position of the ``t``-th occurrence of ``symbol`` after position ``lo``.

        One descent maps ``lo`` to the symbol's leaf while recording the
        upward path, so rank-then-select costs a single round trip. Raises
        not-found with the available count when fewer than ``t`` remain.
        """
        a, b = 1, self.sigma
        o, s = 0, self.length
        u = lo
        path: list[tuple[BitVector, int, int, int]] = []
        for bv in self.levels:
            if a == b:
                break
            m = (a + b) >> 1
            base1 = bv._rank1(o)
            r1_u = (bv._rank1(o + u) - base1) if u else 0
            z = s - (bv._rank1(o + s) - base1)
            if symbol <= m:
                path.append((bv, o, o - base1, 0))
                u, s, b = u - r1_u, z, m
            else:
                path.append((bv, o, base1, 1))
                u, o, s, a = r1_u, o + z, s - z, m + 1
        if t < 1 or u + t > s:
            raise NotFoundError(
                f"only {s - u} occurrences of {symbol} after position {lo}",
                available=s - u,
            )
        j = u + t
        for bv, o, base, bit in reversed(path):
            j = bv.select(bit, base + j) - o
        return j

    # -- plumbing ----------------------------------------------------------

    def _check_symbol(self, symbol: int) -> None:
        if not 1 <= symbol <= self.sigma:
            raise ValidationError(f"symbol {symbol} outside alphabet [1, {self.sigma}]")

    def space_bits(self) -> tuple[int, int]:
        """(payload_bits, overhead_bits): payload is length * num_levels exactly."""
        payload = 0
        overhead = 0
        for bv in self.levels:
            p, o = bv.space_bits()
            payload += p
            overhead += o
        return payload, overhead
