import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tcith_sdp.field import (
    GF,
    BitReader,
    ExtField,
    get_field,
    is_irreducible,
    pack_vector,
    packed_bits,
    poly_divmod,
    poly_mul,
    sample_rows,
    sample_stream,
    sample_uniform,
    smallest_irreducible,
    unpack_vector,
)
from tcith_sdp.hashing import BytesStream, XofStream


def test_prime_field_examples():
    F127, F3 = GF(127), GF(3)
    assert (F127(64) * F127(2)).value == 1
    assert F3(2).inverse().value == 2
    # brute force the inverse of 2 mod 127
    assert F127(2).inverse().value == next(x for x in range(127) if 2 * x % 127 == 1) == 64
    with pytest.raises(ZeroDivisionError):
        F3(0).inverse()


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        GF(9)


@pytest.mark.parametrize("p, mu, expected", [
    (127, 2, (1, 0, 1)),
    (3, 2, (1, 0, 1)),
    (3, 6, (1, 0, 0, 0, 1, 1, 1)),
    (3, 7, (1, 0, 0, 0, 0, 1, 2, 1)),
])
def test_default_moduli(p, mu, expected):
    assert tuple(smallest_irreducible(p, mu)) == expected
    assert is_irreducible(list(expected), p)


def test_x_squared_reduces_by_modulus():
    K = ExtField(3, 2)
    x = K([0, 1])
    _, rem = poly_divmod([0, 0, 1], list(K.modulus), 3)
    assert (x * x).coeffs == tuple(rem + [0] * (2 - len(rem)))


@pytest.mark.parametrize("p", [3, 127])
def test_embedding_is_a_homomorphism(p):
    K = get_field(p, 2)
    assert K.embed(0) == K.zero() and K.embed(1) == K.one()
    for a in range(0, p, max(1, p // 9)):
        for b in range(0, p, max(1, p // 7)):
            assert K.embed(a) * K.embed(b) == K.embed(a * b % p)
            assert K.embed(a) + K.embed(b) == K.embed((a + b) % p)


@pytest.mark.parametrize("p, mu", [(3, 2), (3, 7), (127, 2)])
def test_inverse_of_random_elements(p, mu):
    K = get_field(p, mu)
    rng = np.random.default_rng(p * mu)
    for _ in range(100):
        a = K(rng.integers(0, p, mu))
        if a.is_zero():
            continue
        assert a * a.inverse() == K.one()


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_array_kernels_match_elementwise(data):
    p, mu = data.draw(st.sampled_from([(3, 2), (3, 6), (127, 2)]))
    K = get_field(p, mu)
    coeff = st.lists(st.integers(0, p - 1), min_size=mu, max_size=mu)
    a, b = data.draw(coeff), data.draw(coeff)
    got = K.mul(np.array(a), np.array(b))
    assert tuple(got) == (K(a) * K(b)).coeffs
    assert tuple(K.add(np.array(a), np.array(b))) == (K(a) + K(b)).coeffs


def test_pack_examples():
    assert pack_vector([2, 1], 3) == bytes([5])
    assert packed_bits(2, 3) == 4 == math.ceil(2 * math.log2(3))
    assert packed_bits(76, 127) == 532


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 127]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(0, p - 1), max_size=120))))
def test_pack_roundtrip(case):
    p, v = case
    assert list(unpack_vector(pack_vector(v, p), len(v), p)) == v


def test_unpack_rejects_out_of_range():
    # 4 bits hold 0..15 but only 0..8 are valid packings of two trits
    with pytest.raises(ValueError):
        unpack_vector(bytes([9]), 2, 3)


def test_rejection_examples():
    reader = BitReader(BytesStream(bytes([0x7F, 0x05])))
    # first 7-bit draw is 127 (rejected); next draw is 0x7F >> 7 | 0x05 << 1 = 10
    assert sample_uniform(reader, 127).value == 10
    assert sample_uniform(BytesStream(bytes([0b00_00_01_11])), 3).value == 1


def test_extension_sampling_is_coefficientwise():
    K = get_field(3, 2)
    x = sample_uniform(BytesStream(bytes([0b1001_1110])), K)
    # draws 2, 3 (rejected), 1 -> coefficients (2, 1)
    assert x.coeffs == (2, 1)


@pytest.mark.parametrize("p", [3, 5, 127])
def test_bulk_sampler_matches_scalar(p):
    rng = np.random.default_rng(p)
    rows = [rng.integers(0, 256, 12, dtype=np.uint8).tobytes() + bytes([0xFF] * 4)
            for _ in range(20)]
    streams = [r + rng.integers(0, 256, 400, dtype=np.uint8).tobytes() for r in rows]
    count = 9
    got = sample_rows(np.frombuffer(b"".join(rows), np.uint8).reshape(20, -1), p, count,
                      lambda row, size: streams[row][:size])
    for row, stream in zip(got, streams):
        reader = BitReader(BytesStream(stream))
        assert list(row) == [sample_uniform(reader, p).value for _ in range(count)]


@pytest.mark.parametrize("p", [3, 127])
def test_sampler_chi_square(p):
    vals = sample_stream(XofStream(128, 0x42, bytes([p])), p, 100_000)
    counts = np.bincount(vals, minlength=p)
    expected = len(vals) / p
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    dof = p - 1
    # about 4.5 standard deviations above the mean of a chi-square variable
    assert chi2 < dof + 4.5 * math.sqrt(2 * dof)


def test_poly_helpers():
    assert poly_mul([1, 1], [2, 1], 3) == [2, 0, 1]
    q, r = poly_divmod([2, 0, 1], [1, 1], 3)
    assert poly_mul(q, [1, 1], 3) == [2, 0, 1] and not any(r)


@pytest.mark.parametrize("p, mu", [(3, 6), (127, 2)])
def test_mul_matrix_matches_mul(p, mu):
    K = get_field(p, mu)
    rng = np.random.default_rng(mu)
    a, c = rng.integers(0, p, (50, mu)), rng.integers(0, p, mu)
    assert np.array_equal(a @ K.mul_matrix(c) % p, K.mul(a, c))
