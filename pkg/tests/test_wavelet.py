from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segwt.errors import NotFoundError, RangeError, ValidationError
from segwt.wavelet import WaveletTree


def test_hand_example():
    wt = WaveletTree([3, 1, 4, 2], sigma=4)
    assert wt.access(3) == 4
    assert wt.access(2) == 1
    assert wt.rank(2, 4) == 1
    assert wt.rank(2, 0) == 0
    assert wt.select(4, 1) == 3
    assert wt.prefix_range_count(3, 2) == 1


def test_single_symbol_alphabet():
    wt = WaveletTree([1], sigma=1)
    assert wt.num_levels == 0
    assert wt.access(1) == 1
    assert wt.rank(1, 1) == 1
    assert wt.select(1, 1) == 1
    assert wt.prefix_range_count(1, 1) == 1
    assert wt.prefix_range_count(1, 0) == 0


def test_validation():
    with pytest.raises(ValidationError):
        WaveletTree([1, 5], sigma=4)
    with pytest.raises(ValidationError):
        WaveletTree([0], sigma=2)
    with pytest.raises(ValidationError):
        WaveletTree([], sigma=0)
    wt = WaveletTree([2, 1], sigma=2)
    with pytest.raises(ValidationError):
        wt.rank(3, 1)
    with pytest.raises(RangeError):
        wt.access(3)
    with pytest.raises(NotFoundError):
        wt.select(1, 2)


def test_exhaustive_small():
    # every sequence of length <= 6 over alphabets up to 4, every query
    for sigma in range(1, 5):
        for length in range(7):
            for seq in product(range(1, sigma + 1), repeat=length):
                wt = WaveletTree(seq, sigma)
                for i in range(1, length + 1):
                    assert wt.access(i) == seq[i - 1]
                for sym in range(1, sigma + 1):
                    occ = [p + 1 for p, x in enumerate(seq) if x == sym]
                    for i in range(length + 1):
                        assert wt.rank(sym, i) == sum(1 for x in seq[:i] if x == sym)
                    for j, p in enumerate(occ, 1):
                        assert wt.select(sym, j) == p
                    with pytest.raises(NotFoundError):
                        wt.select(sym, len(occ) + 1)
                for i in range(length + 1):
                    for c in range(sigma + 1):
                        want = sum(1 for x in seq[:i] if x <= c)
                        assert wt.prefix_range_count(i, c) == want


def test_random_vs_scan(rng):
    sigma = 64
    seq = rng.integers(1, sigma + 1, size=10_000)
    ref = seq.tolist()
    wt = WaveletTree(seq, sigma)
    for _ in range(1000):
        i = int(rng.integers(1, len(ref) + 1))
        assert wt.access(i) == ref[i - 1]
        sym = int(rng.integers(1, sigma + 1))
        p = int(rng.integers(0, len(ref) + 1))
        assert wt.rank(sym, p) == ref[:p].count(sym)
        c = int(rng.integers(0, sigma + 1))
        assert wt.prefix_range_count(p, c) == sum(1 for x in ref[:p] if x <= c)
        total = ref.count(sym)
        if total:
            j = int(rng.integers(1, total + 1))
            pos = wt.select(sym, j)
            assert ref[pos - 1] == sym and wt.rank(sym, pos) == j


def test_range_helpers(rng):
    sigma = 9
    seq = rng.integers(1, sigma + 1, size=400)
    ref = seq.tolist()
    wt = WaveletTree(seq, sigma)
    for _ in range(300):
        lo = int(rng.integers(0, len(ref)))
        hi = int(rng.integers(lo, len(ref) + 1))
        c = int(rng.integers(0, sigma + 1))
        sym = int(rng.integers(1, sigma + 1))
        assert wt.count_at_most(lo, hi, c) == sum(1 for x in ref[lo:hi] if x <= c)
        assert wt.rank_range(lo, hi, sym) == ref[lo:hi].count(sym)
        remaining = ref[lo:].count(sym)
        if remaining:
            t = int(rng.integers(1, remaining + 1))
            pos = wt._select_from(sym, lo, t)
            assert ref[pos - 1] == sym
            assert ref[lo:pos].count(sym) == t


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 9).flatmap(
        lambda s: st.tuples(st.just(s), st.lists(st.integers(1, s), max_size=80))
    ),
    st.data(),
)
def test_prefix_count_difference_is_rank(sigma_seq, data):
    sigma, seq = sigma_seq
    wt = WaveletTree(seq, sigma)
    i = data.draw(st.integers(0, len(seq)))
    c = data.draw(st.integers(1, sigma))
    assert wt.prefix_range_count(i, c) - wt.prefix_range_count(i, c - 1) == wt.rank(c, i)
    assert wt.prefix_range_count(i, sigma) == i


def test_payload_is_length_times_levels(rng):
    for sigma, length in ((1, 50), (2, 64), (5, 333), (64, 4096), (100, 777)):
        seq = rng.integers(1, sigma + 1, size=length)
        wt = WaveletTree(seq, sigma)
        payload, _ = wt.space_bits()
        assert wt.num_levels == (sigma - 1).bit_length()
        assert payload == length * wt.num_levels
        for bv in wt.levels:
            assert len(bv) == length
