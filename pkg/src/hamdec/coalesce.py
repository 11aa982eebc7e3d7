"""Gather maps that make every parity group a contiguous run.

A segment's parity groups cover scattered positions. The gather map lists
each group's positions back to back (positions covered by several groups
appear once per group), so the checksum of group ``j`` becomes a reduction
over one contiguous slice of the gathered buffer.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from collections import OrderedDict
from typing import Tuple

import numpy as np

from .codec import BitBlock, CodecError, CodeParams, as_bits, index_positions


@dataclass(frozen=True, eq=False)
class GatherMap:
    indices: np.ndarray  # 1-based source positions
    group_offsets: Tuple[int, ...]
    n: int
    source: np.ndarray = field(repr=False)  # same positions, 0-based

    @property
    def groups(self) -> int:
        return len(self.group_offsets) - 1

    def group_slice(self, j: int) -> slice:
        return slice(self.group_offsets[j], self.group_offsets[j + 1])

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def nbytes(self) -> int:
        return self.indices.nbytes + self.source.nbytes


CACHE_BYTES = 256 * 2**20
_cache: "OrderedDict[int, GatherMap]" = OrderedDict()
_cache_lock = threading.Lock()


def _build(params: CodeParams) -> GatherMap:
    sets = [index_positions(j, params.n) for j in range(params.r)]
    offsets = np.concatenate(([0], np.cumsum([len(s) for s in sets]))).tolist()
    indices = np.concatenate(sets)
    source = indices - 1
    indices.setflags(write=False)
    source.setflags(write=False)
    return GatherMap(indices, tuple(offsets), params.n, source)


def build_gather_map(params: CodeParams) -> GatherMap:
    """Return the gather map for segments of length ``params.n``.

    Maps are cached by ``n``; least recently used maps are dropped once the
    cache holds more than ``CACHE_BYTES`` of index data. Lookups and
    insertions share one lock.
    """
    with _cache_lock:
        gmap = _cache.get(params.n)
        if gmap is not None:
            _cache.move_to_end(params.n)
            return gmap
        gmap = _cache[params.n] = _build(params)
        held = sum(m.nbytes for m in _cache.values())
        while held > CACHE_BYTES and len(_cache) > 1:
            _, dropped = _cache.popitem(last=False)
            held -= dropped.nbytes
        return gmap


def apply_gather(segment: BitBlock, gmap: GatherMap) -> BitBlock:
    segment = as_bits(segment)
    if len(segment) != gmap.n:
        raise CodecError(f"segment has {len(segment)} bits, gather map expects {gmap.n}")
    return segment[gmap.source]
