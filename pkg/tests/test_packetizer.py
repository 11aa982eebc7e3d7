import numpy as np
import pytest
from hypothesis import given, strategies as st

from hamdec.codec import CodecError, bits_to_str, encode, parity_bit_count
from hamdec.packetizer import make_layout, merge, split


@pytest.mark.parametrize("bits,t,seg_k", [(10, 2, (5, 5)), (11, 3, (4, 4, 3))])
def test_make_layout_sizes(bits, t, seg_k):
    assert make_layout(bits, t).seg_k == seg_k


def test_make_layout_paper_size():
    layout = make_layout(3200, 2)
    assert layout.seg_k == (1600, 1600)
    # 2**11 = 2048 >= 1600 + 11 + 1, 2**10 = 1024 is not
    assert [(p.r, p.n) for p in layout.seg_params] == [(11, 1611), (11, 1611)]
    assert layout.seg_offsets == (0, 1611, 3222)


@pytest.mark.parametrize("bits,t", [(3, 4), (5, 0)])
def test_make_layout_rejects(bits, t):
    with pytest.raises(CodecError):
        make_layout(bits, t)


@given(st.integers(1, 20000), st.integers(1, 64))
def test_layout_invariants(bits, t):
    if t > bits:
        return
    layout = make_layout(bits, t)
    assert sum(layout.seg_k) == bits
    assert max(layout.seg_k) - min(layout.seg_k) <= 1
    assert list(layout.seg_k) == sorted(layout.seg_k, reverse=True)
    assert all(a < b for a, b in zip(layout.seg_offsets, layout.seg_offsets[1:]))
    assert layout.encoded_bits == sum(k + parity_bit_count(k) for k in layout.seg_k)
    assert [p.k for p in layout.seg_params] == list(layout.seg_k)
    assert make_layout(bits, t) == layout


def test_split_identity_and_halves():
    one = make_layout(4, 1)
    pkt = np.arange(7) % 2
    (only,) = split(pkt, one)
    assert np.array_equal(only, pkt)
    two = make_layout(8, 2)
    pkt = np.array([1, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1], dtype=np.uint8)
    a, b = split(pkt, two)
    assert bits_to_str(a) == "1011001" and bits_to_str(b) == "0001111"


def test_split_encode_side():
    layout = make_layout(8, 2)
    halves = split(np.array([1, 0, 1, 1, 0, 0, 0, 0], dtype=np.uint8), layout, encoded=False)
    assert [bits_to_str(h) for h in halves] == ["1011", "0000"]
    coded = [bits_to_str(encode(h, p)) for h, p in zip(halves, layout.seg_params)]
    assert coded == ["0110011", "0000000"]


def test_split_length_mismatch():
    with pytest.raises(CodecError):
        split(np.zeros(13, dtype=np.uint8), make_layout(8, 2))


def test_merge():
    assert bits_to_str(merge([np.array([1, 0, 1, 1])])) == "1011"
    assert bits_to_str(merge([[1, 0, 1, 1], [0, 0, 0, 1]])) == "10110001"
    with pytest.raises(CodecError):
        merge([])


@given(st.integers(1, 5000), st.integers(1, 16), st.integers(0, 2**32 - 1), st.booleans())
def test_merge_inverts_split(bits, t, seed, encoded):
    if t > bits:
        return
    layout = make_layout(bits, t)
    length = layout.encoded_bits if encoded else bits
    pkt = np.random.default_rng(seed).integers(0, 2, length, dtype=np.uint8)
    assert np.array_equal(merge(split(pkt, layout, encoded=encoded)), pkt)
