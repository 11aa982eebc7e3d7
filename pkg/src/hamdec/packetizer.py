"""Splitter and merger: cut a packet into ``t`` segments and join them back."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .codec import BitBlock, CodecError, CodeParams, as_bits


@dataclass(frozen=True)
class PacketLayout:
    """Segment geometry shared by sender and receiver.

    ``seg_offsets`` are the start offsets of each encoded segment inside the
    encoded packet, with the total encoded length appended as a final entry.
    """

    t: int
    seg_k: Tuple[int, ...]
    seg_params: Tuple[CodeParams, ...]
    seg_offsets: Tuple[int, ...]

    @property
    def message_bits(self) -> int:
        return sum(self.seg_k)

    @property
    def encoded_bits(self) -> int:
        return self.seg_offsets[-1]

    @property
    def data_offsets(self) -> Tuple[int, ...]:
        return tuple(np.concatenate(([0], np.cumsum(self.seg_k))).tolist())

    def segment_range(self, i: int) -> Tuple[int, int]:
        """Half-open ``[start, stop)`` of encoded segment ``i``."""
        return self.seg_offsets[i], self.seg_offsets[i + 1]


def make_layout(message_bits: int, t: int) -> PacketLayout:
    if t < 1:
        raise CodecError(f"error tolerance must be >= 1, got {t}")
    if message_bits < t:
        raise CodecError(f"cannot split {message_bits} bits into {t} non-empty segments")
    base, extra = divmod(message_bits, t)
    seg_k = tuple(base + 1 if i < extra else base for i in range(t))
    seg_params = tuple(CodeParams.for_data_bits(k) for k in seg_k)
    offsets = [0]
    for p in seg_params:
        offsets.append(offsets[-1] + p.n)
    return PacketLayout(t, seg_k, seg_params, tuple(offsets))


def split(packet: BitBlock, layout: PacketLayout, *, encoded: bool = True) -> List[BitBlock]:
    """Cut ``packet`` into the layout's segments.

    With ``encoded=True`` the packet is the coded stream (segment lengths
    ``n_i``); otherwise it is the plain message (lengths ``k_i``).
    """
    packet = as_bits(packet)
    bounds = layout.seg_offsets if encoded else layout.data_offsets
    if len(packet) != bounds[-1]:
        kind = "encoded" if encoded else "message"
        raise CodecError(f"{kind} packet has {len(packet)} bits, layout expects {bounds[-1]}")
    return [packet[a:b] for a, b in zip(bounds[:-1], bounds[1:])]


def merge(segments: Sequence[BitBlock]) -> BitBlock:
    if len(segments) == 0:
        raise CodecError("nothing to merge")
    return np.concatenate([as_bits(s) for s in segments])
