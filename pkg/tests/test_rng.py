import numpy as np
import pytest

from ksverify.rng import SplitMix64, random_bit_matrix, splitmix64_block

SEED0 = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_reference_vectors():
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == SEED0


def test_block_matches_stream():
    g = SplitMix64(123456789)
    stream = [g.next_u64() for _ in range(50)]
    assert [int(x) for x in splitmix64_block(123456789, 50)] == stream
    assert [int(x) for x in splitmix64_block(123456789, 10, start=40)] == stream[40:]


def test_bit_matrix_rows_match_bits():
    m = random_bit_matrix(9, 20, 33)
    g = SplitMix64(9)
    for row in m:
        assert tuple(row) == g.bits(33)


def test_below_range_and_determinism():
    a = [SplitMix64(0).below(3) for _ in range(2)]
    assert a[0] == a[1]
    g = SplitMix64(1)
    draws = [g.below(40) for _ in range(5000)]
    assert min(draws) == 0 and max(draws) == 39
    with pytest.raises(ValueError):
        g.below(0)


def test_bits_are_balanced():
    m = random_bit_matrix(42, 100_000, 33)
    assert np.abs(m.mean(axis=0) - 0.5).max() < 0.01
