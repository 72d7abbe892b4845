"""Space accounting shared by both index kinds.

``payload_bits`` counts the bits the succinct encoding itself needs (level
bitstrings, endpoint kinds, slab labels at their packed width);
``overhead_bits`` counts every auxiliary directory at its stored integer
width, plus word padding. The two always sum to the report total. CPython
object overhead is deliberately out of scope: the report audits the data
structure design, not the interpreter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ComponentSpace:
    name: str
    payload_bits: int
    overhead_bits: int

    @property
    def total_bits(self) -> int:
        return self.payload_bits + self.overhead_bits


@dataclass(frozen=True)
class SpaceReport:
    kind: str
    n: int
    payload_bits: int
    overhead_bits: int
    components: tuple[ComponentSpace, ...]

    @property
    def total_bits(self) -> int:
        return self.payload_bits + self.overhead_bits

    @property
    def optimal_bits(self) -> float:
        """The 2 n lg n yardstick the totals are compared against."""
        return 2.0 * self.n * math.log2(self.n) if self.n > 1 else 0.0

    @property
    def ratio_vs_optimal(self) -> float | None:
        opt = self.optimal_bits
        return self.total_bits / opt if opt else None

    def lines(self) -> list[str]:
        out = [
            f"kind          {self.kind}",
            f"n             {self.n}",
            f"payload bits  {self.payload_bits}",
            f"overhead bits {self.overhead_bits}",
            f"total bits    {self.total_bits}",
        ]
        ratio = self.ratio_vs_optimal
        if ratio is not None:
            out.append(f"total / 2n lg n  {ratio:.4f}")
        for comp in self.components:
            out.append(
                f"  {comp.name:<18} payload {comp.payload_bits:>12}  overhead {comp.overhead_bits:>10}"
            )
        return out
