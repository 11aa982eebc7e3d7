"""Single-segment Hamming code arithmetic.

Codeword positions are numbered from 1. Parity bits sit at the power-of-two
positions, data bits fill the remaining positions in ascending order, and
every parity group uses even parity, so a non-zero syndrome equals the
position of a single flipped bit.

Bit blocks are plain ``numpy.uint8`` arrays holding 0/1 values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Tuple, Union

import numpy as np

BitBlock = np.ndarray
BitsLike = Union[str, Iterable[int], np.ndarray]


class CodecError(ValueError):
    """Invalid input to a codec operation (bad length, bad geometry)."""


class UncorrectableError(Exception):
    """The syndrome points past the end of the codeword."""

    def __init__(self, value: int, n: int):
        super().__init__(f"syndrome {value} names no position in a {n}-bit codeword")
        self.value = value
        self.n = n


def as_bits(bits: BitsLike) -> BitBlock:
    """Coerce a ``"0110"`` string, an iterable of ints, or an array to a bit block."""
    if isinstance(bits, str):
        bits = [int(c) for c in bits if not c.isspace()]
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise CodecError("bit blocks hold only 0 and 1")
    return arr


def bits_to_str(bits: BitBlock) -> str:
    return "".join("1" if b else "0" for b in bits)


def bit_at(bits: BitBlock, position: int) -> int:
    """Return the bit at 1-based codeword ``position``."""
    if not 1 <= position <= len(bits):
        raise IndexError(f"position {position} outside [1, {len(bits)}]")
    return int(bits[position - 1])


def parity_bit_count(k: int) -> int:
    """Smallest r with 2**r >= k + r + 1."""
    if k < 1:
        raise CodecError(f"segment must carry at least one data bit, got k={k}")
    r = 2
    while (1 << r) < k + r + 1:
        r += 1
    return r


@dataclass(frozen=True)
class CodeParams:
    """Geometry of one coded segment: ``k`` data bits plus ``r`` parity bits."""

    k: int
    r: int

    def __post_init__(self):
        if self.k < 1:
            raise CodecError(f"k must be >= 1, got {self.k}")
        if self.r != parity_bit_count(self.k):
            raise CodecError(f"r={self.r} is not the minimal parity count for k={self.k}")

    @classmethod
    def for_data_bits(cls, k: int) -> "CodeParams":
        return cls(k, parity_bit_count(k))

    @property
    def n(self) -> int:
        return self.k + self.r


@dataclass(frozen=True)
class Syndrome:
    """Recomputed parity bits; ``bits[0]`` is the least significant."""

    bits: Tuple[int, ...]

    @classmethod
    def from_value(cls, value: int, r: int) -> "Syndrome":
        if not 0 <= value < (1 << r):
            raise CodecError(f"syndrome value {value} does not fit in {r} bits")
        return cls(tuple((value >> j) & 1 for j in range(r)))

    @property
    def value(self) -> int:
        return sum(b << j for j, b in enumerate(self.bits))

    def __len__(self) -> int:
        return len(self.bits)


def _parity_count_for_length(n: int) -> int:
    r = 0
    while (1 << r) <= n:
        r += 1
    return r


def _index_array(j: int, n: int) -> np.ndarray:
    positions = np.arange(1, n + 1, dtype=np.int32)
    return positions[(positions >> j) & 1 == 1]


def index_positions(j: int, n: int) -> np.ndarray:
    """Like :func:`index_set` but as a 1-based ``int32`` array."""
    if n < 3:
        raise CodecError(f"codeword length must be >= 3, got {n}")
    if not 0 <= j < _parity_count_for_length(n):
        raise CodecError(f"parity index {j} out of range for n={n}")
    return _index_array(j, n)


def index_set(j: int, n: int) -> Tuple[int, ...]:
    """Positions in ``[1, n]`` whose binary index has bit ``j`` set.

    This is the coverage of the parity bit at position ``2**j``, which is
    itself included.
    """
    return tuple(index_positions(j, n).tolist())


@lru_cache(maxsize=64)
def _layout(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # 1-based positions, 0-based data slots, 0-based parity slots
    positions = np.arange(1, n + 1, dtype=np.int32)
    is_parity = (positions & (positions - 1)) == 0
    data = np.flatnonzero(~is_parity)
    parity = np.flatnonzero(is_parity)
    for arr in (positions, data, parity):
        arr.setflags(write=False)
    return positions, data, parity


def _groups(n: int):
    # scattered coverage masks, one parity group at a time
    positions, _, parity = _layout(n)
    for j in range(len(parity)):
        yield j, (positions >> j) & 1 == 1


def _check_length(bits: BitBlock, expected: int, what: str) -> None:
    if len(bits) != expected:
        raise CodecError(f"{what} has {len(bits)} bits, expected {expected}")


def encode(message: BitsLike, params: CodeParams) -> BitBlock:
    message = as_bits(message)
    _check_length(message, params.k, "message")
    _, data, parity = _layout(params.n)
    codeword = np.zeros(params.n, dtype=np.uint8)
    codeword[data] = message
    # parity slots are still zero, so each group's XOR is the parity to store
    for j, mask in _groups(params.n):
        codeword[parity[j]] = np.bitwise_xor.reduce(codeword[mask])
    return codeword


def syndrome(received: BitsLike, params: CodeParams) -> Syndrome:
    received = as_bits(received)
    _check_length(received, params.n, "received block")
    return Syndrome(tuple(int(np.bitwise_xor.reduce(received[mask])) for _, mask in _groups(params.n)))


def detect_and_correct(
    received: BitsLike, s: Syndrome, params: CodeParams
) -> Tuple[BitBlock, Optional[int]]:
    """Flip the bit named by ``s``.

    Returns the (possibly corrected) block and the 1-based error position,
    or ``None`` when the syndrome is zero. Raises :class:`UncorrectableError`
    when the syndrome value exceeds ``n``.
    """
    received = as_bits(received)
    _check_length(received, params.n, "received block")
    pos = s.value
    if pos == 0:
        return received.copy(), None
    if pos > params.n:
        raise UncorrectableError(pos, params.n)
    fixed = received.copy()
    fixed[pos - 1] ^= 1
    return fixed, pos


def remove_redundancy(codeword: BitsLike, params: CodeParams) -> BitBlock:
    codeword = as_bits(codeword)
    _check_length(codeword, params.n, "codeword")
    _, data, _ = _layout(params.n)
    return codeword[data]


def decode(received: BitsLike, params: CodeParams) -> BitBlock:
    """Syndrome, correct, and strip parity for one segment."""
    received = as_bits(received)
    fixed, _ = detect_and_correct(received, syndrome(received, params), params)
    return remove_redundancy(fixed, params)
