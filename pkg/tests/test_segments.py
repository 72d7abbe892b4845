import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import segwt.oracle as oracle
from segwt.errors import (
    CoordinateRangeError,
    DegenerateSegmentError,
    DuplicateCoordinateError,
    ParseError,
    RangeError,
    TieError,
)
from segwt.segments import (
    RawSegment,
    Segment,
    parse_segment_file,
    reduce_to_rank_space,
    validate_instance,
)


def test_validate_accepts():
    one = validate_instance([(1, 2, 1)])
    assert one.n == 1 and one.segments == (Segment(1, 2, 1),)
    two = validate_instance([(2, 4, 2), (1, 3, 1)])
    assert two.n == 2
    assert [s.y for s in two.segments] == [1, 2]  # sorted by y


def test_validate_rejects():
    with pytest.raises(DuplicateCoordinateError) as err:
        validate_instance([(1, 3, 1), (3, 4, 2)])
    assert err.value.axis == "x" and err.value.value == 3
    with pytest.raises(DuplicateCoordinateError) as err:
        validate_instance([(1, 3, 1), (2, 4, 1)])
    assert err.value.axis == "y"
    with pytest.raises(CoordinateRangeError):
        validate_instance([(1, 5, 1), (2, 3, 2)])  # x=5 > 2n=4
    with pytest.raises(CoordinateRangeError):
        validate_instance([(1, 2, 3)])  # y > n
    with pytest.raises(DegenerateSegmentError):
        validate_instance([(2, 2, 1)])


def test_crossing_semantics(i2):
    assert [s.y for s in i2.crossings_at(2)] == [1, 2]
    assert [s.y for s in i2.crossings_at(3)] == [2]  # half-open: 1 <= 3 < 3 fails
    assert i2.crossings_at(4) == []
    with pytest.raises(RangeError):
        i2.crossings_at(5)
    with pytest.raises(RangeError):
        i2.crossings_at(0)


def test_endpoint_kinds(i2):
    assert i2.endpoint_kinds().tolist() == [0, 0, 1, 1]
    one = validate_instance([(1, 2, 1)])
    assert one.endpoint_kinds().tolist() == [0, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 24), st.randoms(use_true_random=False))
def test_crossing_count_is_endpoint_difference(n, pyrng):
    import numpy as np

    rng = np.random.default_rng(pyrng.randrange(2**32))
    inst = oracle.random_instance(n, rng)
    kinds = inst.endpoint_kinds()
    assert int(kinds.sum()) == n  # one right endpoint per segment
    for i in range(1, 2 * n + 1):
        lefts = int((kinds[:i] == 0).sum())
        rights = i - lefts
        assert len(inst.crossings_at(i)) == lefts - rights
    assert len(inst.crossings_at(2 * n)) == 0


def test_reduce_examples():
    inst, maps = reduce_to_rank_space([(0.5, 9.0, -2.0)])
    assert inst.segments == (Segment(1, 2, 1),)
    assert maps.segment_original(inst.segments[0]) == RawSegment(0.5, 9.0, -2.0)

    inst, maps = reduce_to_rank_space([(10, 30, 5), (20, 40, 7)])
    assert inst.segments == (Segment(1, 3, 1), Segment(2, 4, 2))
    assert maps.x_values == (10.0, 20.0, 30.0, 40.0)
    assert maps.y_values == (5.0, 7.0)


def test_reduce_tie_strict_and_deterministic():
    raws = [(1.0, 2.0, 0.0), (2.0, 3.0, 1.0)]
    with pytest.raises(TieError) as err:
        reduce_to_rank_space(raws)
    assert err.value.axis == "x" and err.value.value == 2.0

    # deterministic mode: the right endpoint outranks a left one at the same
    # value, so the earlier segment stops crossing before the later starts
    inst, _ = reduce_to_rank_space(raws, strict=False)
    assert inst.segments == (Segment(1, 2, 1), Segment(3, 4, 2))

    with pytest.raises(TieError):
        reduce_to_rank_space([(0.0, 1.0, 5.0), (2.0, 3.0, 5.0)])


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)),
        min_size=1,
        max_size=12,
    )
)
def test_reduce_preserves_order(triples):
    raws = []
    seen_x: set[float] = set()
    seen_y: set[float] = set()
    for a, b, y in triples:
        lo, hi = (a, b) if a < b else (b, a)
        if lo == hi or lo in seen_x or hi in seen_x or y in seen_y:
            continue
        seen_x.update((lo, hi))
        seen_y.add(y)
        raws.append(RawSegment(lo, hi, y))
    if not raws:
        return
    inst, maps = reduce_to_rank_space(raws)
    # the coordinate maps invert the reduction exactly
    back = sorted(maps.segment_original(s) for s in inst.segments)
    assert back == sorted(raws)
    # ranks preserve coordinate order
    assert list(maps.x_values) == sorted(maps.x_values)
    assert list(maps.y_values) == sorted(maps.y_values)


def test_parse_rank_space():
    text = "# header\n\n1 3 1\n  2 4 2  # no inline comments, this fails\n"
    with pytest.raises(ParseError) as err:
        parse_segment_file(io.StringIO(text))
    assert err.value.line_no == 4
    good = parse_segment_file(io.StringIO("# c\n1 3 1\n2 4 2\n"))
    assert good == [Segment(1, 3, 1), Segment(2, 4, 2)]


def test_parse_raw_mode():
    raws = parse_segment_file(io.StringIO("0.5 9.0 -2.0\n"), raw=True)
    assert raws == [RawSegment(0.5, 9.0, -2.0)]
    with pytest.raises(ParseError) as err:
        parse_segment_file(io.StringIO("1 2\n"))
    assert "3 fields" in str(err.value)
