"""On-disk encoded packet.

Layout: 8-byte little-endian message bit count, 1-byte tolerance ``t``, then
the encoded bits packed MSB-first and zero-padded to a whole byte.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Tuple

import numpy as np

from .codec import BitBlock
from .packetizer import PacketLayout, make_layout

_HEADER = struct.Struct("<QB")


class FormatError(ValueError):
    pass


def bytes_to_bits(data: bytes) -> BitBlock:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits: BitBlock) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def dumps(encoded: BitBlock, layout: PacketLayout) -> bytes:
    if len(encoded) != layout.encoded_bits:
        raise FormatError(f"packet has {len(encoded)} bits, layout expects {layout.encoded_bits}")
    if layout.t > 255:
        raise FormatError(f"tolerance {layout.t} does not fit in one byte")
    return _HEADER.pack(layout.message_bits, layout.t) + bits_to_bytes(encoded)


def loads(blob: bytes) -> Tuple[BitBlock, PacketLayout]:
    if len(blob) < _HEADER.size:
        raise FormatError("truncated header")
    message_bits, t = _HEADER.unpack_from(blob)
    try:
        layout = make_layout(message_bits, t)
    except ValueError as exc:
        raise FormatError(f"bad header: {exc}") from exc
    payload = blob[_HEADER.size:]
    expected = (layout.encoded_bits + 7) // 8
    if len(payload) != expected:
        raise FormatError(f"payload is {len(payload)} bytes, header implies {expected}")
    bits = bytes_to_bits(payload)[: layout.encoded_bits]
    return bits, layout


def write_encoded(path, encoded: BitBlock, layout: PacketLayout) -> None:
    Path(path).write_bytes(dumps(encoded, layout))


def read_encoded(path) -> Tuple[BitBlock, PacketLayout]:
    return loads(Path(path).read_bytes())
