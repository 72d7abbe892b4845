"""Succinct indexes for horizontal line segments in rank space.

An instance of size n lives on the grid [1, 2n] x [1, n] with one segment
endpoint per x-coordinate and one segment per y-coordinate. The package
answers, in one root-to-leaf pass over a balanced decomposition of the
y-range:

* ``access(y)``    - the segment with that y-coordinate,
* ``select(i, j)`` - the y of the j-th lowest segment crossing the
  vertical line at x = i,
* ``rank(i, y)``   - how many segments crossing at x = i have
  y-coordinate at most y,

where "crossing" means ``x_left <= i < x_right``. :class:`SegmentIndex` is
the binary-tree variant (ceil(lg n) + 1 node visits per query);
:class:`DeltaSegmentIndex` fans out ``delta`` ways per node
(ceil(log_delta n) + 1 visits) on top of per-level slab structures.
"""

from .bitvec import BitVector
from .dswt import DeltaQueryCursor, DeltaSegmentIndex, default_delta
from .segments import (
    CoordinateMaps,
    RankSpaceInstance,
    RawSegment,
    Segment,
    parse_segment_file,
    reduce_to_rank_space,
    validate_instance,
)
from .slabs import SlabStructure
from .space import ComponentSpace, SpaceReport
from .swt import QueryCursor, QueryStats, SegmentIndex
from .wavelet import WaveletTree
from . import container, errors, oracle, verify

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "ComponentSpace",
    "CoordinateMaps",
    "DeltaQueryCursor",
    "DeltaSegmentIndex",
    "QueryCursor",
    "QueryStats",
    "RankSpaceInstance",
    "RawSegment",
    "Segment",
    "SegmentIndex",
    "SlabStructure",
    "SpaceReport",
    "WaveletTree",
    "container",
    "default_delta",
    "errors",
    "oracle",
    "parse_segment_file",
    "reduce_to_rank_space",
    "validate_instance",
    "verify",
    "__version__",
]
