"""Versioned binary container for built indexes.

Layout (little-endian fixed-width integers throughout)::

    "SWTX" | version u16 | kind u8 | flags u8 | n u64 | body | crc32 u32

* kind: 1 = binary index, 2 = delta-ary index.
* flags: bit 0 set when raw-coordinate maps are attached.
* binary body: left tree, right tree, endpoint-kind bitvector.
* delta body: delta u16, epsilon f64, backend u8 (1 wavelet / 2 blocks),
  block multiplier f64, height u16, then one (labels, kinds) pair per
  level; slab backends are rebuilt deterministically on load, so loading
  followed by re-serialization is byte-identical.
* bitvector framing: u64 bit length, u64 word count, raw words, then the
  rank directories and the select samples.
* crc32 covers everything after the magic and before itself.

The spec for maps: x values as f64 ranks 1..2n, y values ranks 1..n.
"""

from __future__ import annotations

import math
import struct
import zlib
from pathlib import Path

import numpy as np

from .bitvec import BitVector
from .dswt import DeltaSegmentIndex
from .errors import ContainerError
from .segments import CoordinateMaps
from .slabs import SlabStructure
from .swt import SegmentIndex
from .wavelet import WaveletTree

MAGIC = b"SWTX"
VERSION = 1

_KIND_BINARY = 1
_KIND_DELTA = 2
_BACKEND_CODE = {"wavelet": 1, "blocks": 2}
_BACKEND_NAME = {v: k for k, v in _BACKEND_CODE.items()}


class _Writer:
    def __init__(self):
        self.parts: list[bytes] = []

    def u8(self, v): self.parts.append(struct.pack("<B", v))
    def u16(self, v): self.parts.append(struct.pack("<H", v))
    def u32(self, v): self.parts.append(struct.pack("<I", v))
    def u64(self, v): self.parts.append(struct.pack("<Q", v))
    def f64(self, v): self.parts.append(struct.pack("<d", v))
    def raw(self, b: bytes): self.parts.append(b)

    def int_list(self, values, fmt_char: str):
        self.u32(len(values))
        self.raw(struct.pack(f"<{len(values)}{fmt_char}", *values))

    def bitvector(self, bv: BitVector):
        self.u64(bv.length)
        self.u64(len(bv._words))
        self.raw(struct.pack(f"<{len(bv._words)}Q", *bv._words))
        self.int_list(bv._super, "I")
        self.int_list(bv._blocks, "H")
        self.int_list(bv._sel0, "I")
        self.int_list(bv._sel1, "I")

    def wavelet(self, wt: WaveletTree):
        self.u64(wt.length)
        self.u32(wt.sigma)
        for bv in wt.levels:
            self.bitvector(bv)

    def bytes(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise ContainerError("container truncated")
        out = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return out

    def u8(self): return self._take("<B")[0]
    def u16(self): return self._take("<H")[0]
    def u32(self): return self._take("<I")[0]
    def u64(self): return self._take("<Q")[0]
    def f64(self): return self._take("<d")[0]

    def int_list(self, fmt_char: str) -> list[int]:
        count = self.u32()
        return list(self._take(f"<{count}{fmt_char}"))

    def bitvector(self) -> BitVector:
        length = self.u64()
        n_words = self.u64()
        words = list(self._take(f"<{n_words}Q"))
        bv = BitVector.__new__(BitVector)
        bv.length = length
        bv._words = words
        bv._super = self.int_list("I")
        bv._blocks = self.int_list("H")
        bv._sel0 = self.int_list("I")
        bv._sel1 = self.int_list("I")
        if len(bv._super) != (length >> 11) + 1 or len(bv._blocks) != (length >> 8) + 1:
            raise ContainerError("bitvector directory sizes inconsistent")
        bv._ones = bv._rank1(length)
        return bv

    def wavelet(self) -> WaveletTree:
        length = self.u64()
        sigma = self.u32()
        wt = WaveletTree.__new__(WaveletTree)
        wt.length = length
        wt.sigma = sigma
        wt.num_levels = (sigma - 1).bit_length()
        wt.levels = [self.bitvector() for _ in range(wt.num_levels)]
        for bv in wt.levels:
            if bv.length != length:
                raise ContainerError("wavelet level length mismatch")
        return wt


def serialize(index: SegmentIndex | DeltaSegmentIndex, maps: CoordinateMaps | None = None) -> bytes:
    w = _Writer()
    w.raw(MAGIC)
    w.u16(VERSION)
    if isinstance(index, SegmentIndex):
        w.u8(_KIND_BINARY)
    elif isinstance(index, DeltaSegmentIndex):
        w.u8(_KIND_DELTA)
    else:
        raise ContainerError(f"cannot serialize {type(index).__name__}")
    w.u8(1 if maps is not None else 0)
    w.u64(index.n)
    if isinstance(index, SegmentIndex):
        w.wavelet(index.lefts)
        w.wavelet(index.rights)
        w.bitvector(index.endpoint_kinds)
    else:
        w.u16(index.delta)
        w.f64(index.epsilon)
        w.u8(_BACKEND_CODE[index.backend])
        w.f64(index.block_multiplier)
        w.u16(index.height)
        for level in index.levels:
            labels = level.labels.astype(np.uint8)
            w.u64(labels.size)
            w.raw(labels.tobytes())
            w.bitvector(level.kinds)
        if index.height == 0:
            w.bitvector(index.endpoint_kinds)
    if maps is not None:
        for values in (maps.x_values, maps.y_values):
            w.u64(len(values))
            w.raw(struct.pack(f"<{len(values)}d", *values))
    body = w.bytes()
    return body + struct.pack("<I", zlib.crc32(body[len(MAGIC):]))


def deserialize(data: bytes) -> tuple[SegmentIndex | DeltaSegmentIndex, CoordinateMaps | None]:
    if len(data) < len(MAGIC) + 8 or data[: len(MAGIC)] != MAGIC:
        raise ContainerError("not an index container (bad magic)")
    stored = struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(data[len(MAGIC):-4]) != stored:
        raise ContainerError("checksum mismatch: container corrupted")
    r = _Reader(data[:-4])
    r.pos = len(MAGIC)
    version = r.u16()
    if version != VERSION:
        raise ContainerError(f"unsupported container version {version}")
    kind = r.u8()
    flags = r.u8()
    n = r.u64()
    if kind == _KIND_BINARY:
        lefts = r.wavelet()
        rights = r.wavelet()
        kinds = r.bitvector()
        index: SegmentIndex | DeltaSegmentIndex = SegmentIndex._from_parts(
            n, lefts, rights, kinds
        )
    elif kind == _KIND_DELTA:
        delta = r.u16()
        epsilon = r.f64()
        backend_code = r.u8()
        if backend_code not in _BACKEND_NAME:
            raise ContainerError(f"unknown slab backend code {backend_code}")
        backend = _BACKEND_NAME[backend_code]
        block_multiplier = r.f64()
        height = r.u16()
        width = max(1, round(block_multiplier * delta * max(1, math.ceil(math.log2(max(2, n))))))
        levels = []
        for _ in range(height):
            count = r.u64()
            if r.pos + count > len(r.data):
                raise ContainerError("container truncated")
            labels = np.frombuffer(r.data, dtype=np.uint8, count=count, offset=r.pos).copy()
            r.pos += count
            kinds_bv = r.bitvector()
            level = SlabStructure(
                labels=labels,
                kinds=kinds_bv.to_numpy(),
                delta=delta,
                backend=backend,
                block_width=width,
            )
            # keep the deserialized bitvector so re-serialization is byte-identical
            level.kinds = kinds_bv
            levels.append(level)
        if height == 0:
            e = r.bitvector()
        else:
            e = levels[0].kinds
        index = DeltaSegmentIndex._from_parts(
            n, delta, epsilon, backend, block_multiplier, levels, e
        )
    else:
        raise ContainerError(f"unknown index kind {kind}")
    maps = None
    if flags & 1:
        nx = r.u64()
        xs = r._take(f"<{nx}d")
        ny = r.u64()
        ys = r._take(f"<{ny}d")
        maps = CoordinateMaps(x_values=tuple(xs), y_values=tuple(ys))
    return index, maps


def save(path: str | Path, index, maps: CoordinateMaps | None = None) -> int:
    blob = serialize(index, maps)
    Path(path).write_bytes(blob)
    return len(blob)


def load(path: str | Path):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ContainerError(f"cannot read container {path}: {exc}") from exc
    return deserialize(data)
