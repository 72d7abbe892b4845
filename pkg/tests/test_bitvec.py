import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segwt.bitvec import BitVector
from segwt.errors import NotFoundError, RangeError


def brute(bits):
    pref = [0]
    for b in bits:
        pref.append(pref[-1] + b)
    return pref


def test_exhaustive_up_to_12():
    # every bitstring of length <= 12, every operation, vs linear scan
    for length in range(13):
        for value in range(1 << length):
            bits = [(value >> k) & 1 for k in range(length)]
            bv = BitVector(bits)
            pref = brute(bits)
            assert len(bv) == length
            for i in range(1, length + 1):
                assert bv.access(i) == bits[i - 1]
            for i in range(length + 1):
                assert bv.rank(1, i) == pref[i]
                assert bv.rank(0, i) == i - pref[i]
            for b in (0, 1):
                occ = [p + 1 for p, x in enumerate(bits) if x == b]
                assert bv.count(b) == len(occ)
                for j, p in enumerate(occ, 1):
                    assert bv.select(b, j) == p
                with pytest.raises(NotFoundError) as err:
                    bv.select(b, len(occ) + 1)
                assert err.value.available == len(occ)


def test_empty():
    bv = BitVector([])
    assert len(bv) == 0
    assert bv.rank(1, 0) == 0
    with pytest.raises(RangeError):
        bv.access(1)
    with pytest.raises(NotFoundError):
        bv.select(0, 1)


def test_hand_values():
    bv = BitVector([0, 1, 1, 0])
    assert bv.access(2) == 1
    assert bv.access(4) == 0
    assert bv.rank(1, 4) == 2
    assert bv.rank(1, 3) == 2
    assert bv.rank(0, 0) == 0
    assert bv.select(0, 2) == 4
    assert bv.select(1, 1) == 2


def test_range_errors():
    bv = BitVector([1, 0, 1])
    with pytest.raises(RangeError):
        bv.rank(1, 4)
    with pytest.raises(RangeError):
        bv.rank(1, -1)
    with pytest.raises(RangeError):
        bv.access(0)


def test_random_large_vs_scan(rng):
    bits = (rng.random(100_000) < 0.37).astype(np.uint8)
    bv = BitVector(bits)
    pref = np.concatenate([[0], np.cumsum(bits)])
    ones = np.flatnonzero(bits) + 1
    zeros = np.flatnonzero(bits == 0) + 1
    for i in rng.integers(0, bits.size + 1, size=1000):
        i = int(i)
        assert bv.rank(1, i) == pref[i]
        assert bv.rank(0, i) == i - pref[i]
    for j in rng.integers(1, ones.size + 1, size=500):
        assert bv.select(1, int(j)) == ones[j - 1]
    for j in rng.integers(1, zeros.size + 1, size=500):
        assert bv.select(0, int(j)) == zeros[j - 1]
    assert bv.to_numpy().tolist() == bits.tolist()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=600), st.data())
def test_duality(bits, data):
    bv = BitVector(bits)
    for b in (0, 1):
        total = bv.count(b)
        if total:
            j = data.draw(st.integers(1, total))
            assert bv.rank(b, bv.select(b, j)) == j
        i = data.draw(st.integers(0, len(bits)))
        r = bv.rank(b, i)
        if r:
            assert bv.select(b, r) <= i


def test_space_accounting(rng):
    for length in (1, 100, 2048, 50_000, 1 << 16):
        bits = (rng.random(length) < 0.5).astype(np.uint8)
        bv = BitVector(bits)
        payload, overhead = bv.space_bits()
        assert payload == length
        # fixed per-structure granularity plus a linear term well under 1 bit/bit
        assert overhead <= 208 + 0.25 * length
    big = BitVector((rng.random(1 << 16) < 0.5).astype(np.uint8))
    _, overhead = big.space_bits()
    assert overhead / (1 << 16) <= 0.25
