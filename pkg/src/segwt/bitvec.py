"""Plain bitvectors with constant-ish time access/rank/select.

The payload is packed into 64-bit words. Two auxiliary directories make
rank and select fast without giving up the linear-space budget:

* rank: absolute popcounts at superblock boundaries plus small counts
  relative to the superblock at each block boundary; the remainder is a
  popcount over at most four words.
* select: the position of every 512th occurrence of each bit value, used
  to bracket a binary search over superblocks followed by a short scan.

All public positions are 1-based. ``rank`` additionally accepts a prefix
length of 0. Structures are immutable after construction and safe for any
number of concurrent readers.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import NotFoundError, RangeError

SUPERBLOCK_BITS = 2048          # 32 words per absolute count
BLOCK_BITS = 256                # 4 words per relative count
SELECT_SAMPLE_RATE = 512        # sample every 512th occurrence

_SUPER_ENTRY_BITS = 32
_BLOCK_ENTRY_BITS = 16
_SELECT_ENTRY_BITS = 32

_WORD_MASK = (1 << 64) - 1

# select-in-byte: _SELECT_IN_BYTE[byte * 8 + k] = index of the (k+1)-th set
# bit of ``byte``, or 8 when absent.
_SELECT_IN_BYTE = bytearray(256 * 8)
for _b in range(256):
    _k = 0
    for _i in range(8):
        if (_b >> _i) & 1:
            _SELECT_IN_BYTE[_b * 8 + _k] = _i
            _k += 1
    for _j in range(_k, 8):
        _SELECT_IN_BYTE[_b * 8 + _j] = 8

_POPCOUNT_BYTE = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)


def _as_bit_array(bits) -> np.ndarray:
    if isinstance(bits, np.ndarray):
        arr = bits.astype(np.uint8, copy=False)
    else:
        arr = np.fromiter((int(b) for b in bits), dtype=np.uint8)
    if arr.size and int(arr.max()) > 1:
        raise ValueError("bit sequence must contain only 0 and 1")
    return arr


class BitVector:
    """Immutable packed bitstring supporting access, rank and select."""

    __slots__ = ("length", "_words", "_super", "_blocks", "_sel0", "_sel1", "_ones")

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = _as_bit_array(bits)
        m = int(arr.size)
        self.length = m

        padded = arr
        if m % 64:
            padded = np.concatenate([arr, np.zeros(64 - m % 64, dtype=np.uint8)])
        packed = np.packbits(padded, bitorder="little")
        words = np.frombuffer(packed.tobytes(), dtype="<u8")
        self._words = [int(w) for w in words]

        # per-word popcounts -> cumulative ranks at word boundaries
        if len(packed):
            per_word = _POPCOUNT_BYTE[packed].reshape(-1, 8).sum(axis=1, dtype=np.int64)
            cum = np.concatenate([[0], np.cumsum(per_word)])
        else:
            cum = np.zeros(1, dtype=np.int64)
        self._ones = int(cum[-1])

        n_super = (m >> 11) + 1
        n_block = (m >> 8) + 1
        sup = cum[::32][:n_super].astype(np.int64)
        blk = cum[::4][:n_block] - np.repeat(sup, 8)[:n_block]
        self._super = [int(v) for v in sup]
        self._blocks = [int(v) for v in blk]

        ones_pos = np.flatnonzero(arr) + 1
        zeros_pos = np.flatnonzero(arr == 0) + 1
        self._sel1 = [int(p) for p in ones_pos[::SELECT_SAMPLE_RATE]]
        self._sel0 = [int(p) for p in zeros_pos[::SELECT_SAMPLE_RATE]]

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return self.length

    def count(self, bit: int) -> int:
        """Total occurrences of ``bit``."""
        return self._ones if bit else self.length - self._ones

    def access(self, i: int) -> int:
        """Bit at 1-based position ``i``."""
        if not 1 <= i <= self.length:
            raise RangeError(f"position {i} outside [1, {self.length}]")
        j = i - 1
        return (self._words[j >> 6] >> (j & 63)) & 1

    def rank(self, bit: int, i: int) -> int:
        """Occurrences of ``bit`` among the first ``i`` positions (0 <= i <= length)."""
        if not 0 <= i <= self.length:
            raise RangeError(f"prefix length {i} outside [0, {self.length}]")
        ones = self._rank1(i)
        return ones if bit else i - ones

    def _rank1(self, i: int) -> int:
        # hot path: i is a validated prefix length
        acc = self._super[i >> 11] + self._blocks[i >> 8]
        w = i >> 6
        words = self._words
        for k in range((i >> 8) << 2, w):
            acc += words[k].bit_count()
        rem = i & 63
        if rem:
            acc += (words[w] & ((1 << rem) - 1)).bit_count()
        return acc

    def select(self, bit: int, j: int) -> int:
        """1-based position of the ``j``-th occurrence of ``bit``."""
        total = self._ones if bit else self.length - self._ones
        if not 1 <= j <= total:
            raise NotFoundError(
                f"occurrence {j} of bit {bit} not present (only {total})", available=total
            )
        samples = self._sel1 if bit else self._sel0

        # bracket the superblock range using neighbouring samples
        t = (j - 1) // SELECT_SAMPLE_RATE
        lo_sb = (samples[t] - 1) >> 11
        if t + 1 < len(samples):
            hi_sb = (samples[t + 1] - 1) >> 11
        else:
            hi_sb = len(self._super) - 1

        # last superblock whose preceding count of ``bit`` is < j
        while lo_sb < hi_sb:
            mid = (lo_sb + hi_sb + 1) >> 1
            before = self._super[mid] if bit else (mid << 11) - self._super[mid]
            if before < j:
                lo_sb = mid
            else:
                hi_sb = mid - 1
        sb = lo_sb
        base = self._super[sb] if bit else (sb << 11) - self._super[sb]
        need = j - base

        # walk the (at most 8) blocks of this superblock
        blocks = self._blocks
        first_block = sb << 3
        last_block = min(first_block + 8, (self.length >> 8) + 1)
        blk = first_block
        for nxt in range(first_block + 1, last_block):
            rel = blocks[nxt] if bit else (nxt - first_block) * BLOCK_BITS - blocks[nxt]
            if rel >= need:
                break
            blk = nxt
        rel = blocks[blk] if bit else (blk - first_block) * BLOCK_BITS - blocks[blk]
        need -= rel

        # walk the (at most 4) words of the block
        words = self._words
        w = blk << 2
        while True:
            word = words[w] if bit else ~words[w] & _WORD_MASK
            c = word.bit_count()
            if c >= need:
                break
            need -= c
            w += 1

        # select within the word, one byte at a time
        pos = w << 6
        for _ in range(8):
            byte = word & 0xFF
            c = byte.bit_count()
            if c >= need:
                return pos + _SELECT_IN_BYTE[(byte << 3) + need - 1] + 1
            need -= c
            word >>= 8
            pos += 8
        raise AssertionError("select directory inconsistent")

    # -- diagnostics -------------------------------------------------------

    def to_numpy(self) -> np.ndarray:
        """The stored bits as a uint8 array (test/diagnostic helper)."""
        if not self._words:
            return np.zeros(0, dtype=np.uint8)
        raw = np.array(self._words, dtype="<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length]

    def space_bits(self) -> tuple[int, int]:
        """(payload_bits, overhead_bits) of the packed encoding."""
        payload = self.length
        pad = len(self._words) * 64 - self.length
        overhead = (
            len(self._super) * _SUPER_ENTRY_BITS
            + len(self._blocks) * _BLOCK_ENTRY_BITS
            + (len(self._sel0) + len(self._sel1)) * _SELECT_ENTRY_BITS
            + pad
        )
        return payload, overhead
