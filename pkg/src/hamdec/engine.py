"""Packet-level decode/encode driven by independent work items.

Decoding runs three phases over a packet of ``t`` segments:

* gather: one item per segment builds its contiguous-group buffer;
* checksum: one item per (segment, parity group) reduces that group's slice
  with an XOR tree and writes one syndrome bit;
* error: one item per segment corrects the flagged bit and strips parity.

Every item reads shared immutable inputs and writes a slot nobody else
touches, so the sequential and pooled backends give identical results.
"""

from __future__ import annotations

import atexit
import enum
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import codec
from .coalesce import GatherMap, apply_gather, build_gather_map
from .codec import BitBlock, CodecError, CodeParams, Syndrome, as_bits
from .packetizer import PacketLayout, merge, split


class Backend(str, enum.Enum):
    SEQUENTIAL = "sequential"
    POOLED = "pooled"


@dataclass(frozen=True)
class EngineConfig:
    backend: Backend = Backend.SEQUENTIAL
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "backend", Backend(self.backend))
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


SEQUENTIAL = EngineConfig()


@dataclass(frozen=True)
class WorkItem:
    segment_index: int
    group_index: Optional[int] = None


class DecodeError(Exception):
    """A segment's syndrome could not be mapped to a codeword position."""

    def __init__(self, segment: int, cause: codec.UncorrectableError):
        super().__init__(f"segment {segment}: {cause}")
        self.segment = segment
        self.cause = cause


def xor_reduce_tree(bits: BitBlock) -> int:
    """XOR of all bits via a halving-stride tree.

    The input is zero-padded to a power of two; each level folds the upper
    half onto the lower half, so element ``i`` combines with ``i + half``.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    size = len(bits)
    if size == 0:
        raise ValueError("cannot reduce an empty block")
    width = 1 << (size - 1).bit_length()
    buf = np.zeros(width, dtype=np.uint8)
    buf[:size] = bits
    while width > 1:
        width >>= 1
        np.bitwise_xor(buf[:width], buf[width : 2 * width], out=buf[:width])
    return int(buf[0])


def _group_checksum(reformed: BitBlock, gmap: GatherMap, j: int) -> int:
    # stage the group into item-local scratch before reducing
    scratch = np.array(reformed[gmap.group_slice(j)])
    return xor_reduce_tree(scratch)


def checksum_kernel(reformed: BitBlock, gmap: GatherMap) -> Syndrome:
    """Syndrome of one segment from its gathered buffer, one group at a time."""
    reformed = as_bits(reformed)
    if len(reformed) != len(gmap):
        raise CodecError(f"gathered buffer has {len(reformed)} bits, map expects {len(gmap)}")
    return Syndrome(tuple(_group_checksum(reformed, gmap, j) for j in range(gmap.groups)))


def error_kernel(original: BitBlock, s: Syndrome, params: CodeParams) -> BitBlock:
    fixed, _ = codec.detect_and_correct(original, s, params)
    return codec.remove_redundancy(fixed, params)


_pools: Dict[int, ThreadPoolExecutor] = {}
_pools_lock = threading.Lock()


def _pool(workers: int) -> ThreadPoolExecutor:
    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = _pools[workers] = ThreadPoolExecutor(workers, thread_name_prefix="hamdec")
        return pool


@atexit.register
def shutdown_pools() -> None:
    with _pools_lock:
        for pool in _pools.values():
            pool.shutdown(wait=True)
        _pools.clear()


def _run(items: Sequence[WorkItem], fn: Callable[[WorkItem], None], cfg: EngineConfig) -> None:
    if cfg.backend is Backend.SEQUENTIAL or not items:
        for item in items:
            fn(item)
        return

    def run_batch(batch: Sequence[WorkItem]) -> None:
        for item in batch:
            fn(item)

    # contiguous batches, a few per worker, keep queue traffic low
    n_batches = min(len(items), cfg.workers * 4)
    bounds = np.linspace(0, len(items), n_batches + 1).astype(int)
    batches = [items[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    for _ in _pool(cfg.workers).map(run_batch, batches):
        pass


def decode_packet(encoded: BitBlock, layout: PacketLayout, cfg: EngineConfig = SEQUENTIAL) -> BitBlock:
    """Recover the message from an encoded packet.

    Raises :class:`DecodeError` for the lowest-numbered segment whose
    syndrome is uncorrectable; no partial output is produced.
    """
    segments = split(encoded, layout)
    t = layout.t
    maps = [build_gather_map(p) for p in layout.seg_params]
    reformed: List[Optional[BitBlock]] = [None] * t
    syndromes = [np.zeros(p.r, dtype=np.uint8) for p in layout.seg_params]
    messages: List[Optional[BitBlock]] = [None] * t
    failures: List[Optional[codec.UncorrectableError]] = [None] * t

    def gather(item: WorkItem) -> None:
        i = item.segment_index
        reformed[i] = apply_gather(segments[i], maps[i])

    def checksum(item: WorkItem) -> None:
        i, j = item.segment_index, item.group_index
        syndromes[i][j] = _group_checksum(reformed[i], maps[i], j)

    def correct(item: WorkItem) -> None:
        i = item.segment_index
        s = Syndrome(tuple(int(b) for b in syndromes[i]))
        try:
            messages[i] = error_kernel(segments[i], s, layout.seg_params[i])
        except codec.UncorrectableError as exc:
            failures[i] = exc

    per_segment = [WorkItem(i) for i in range(t)]
    per_group = [WorkItem(i, j) for i in range(t) for j in range(layout.seg_params[i].r)]
    _run(per_segment, gather, cfg)
    _run(per_group, checksum, cfg)
    _run(per_segment, correct, cfg)

    for i, exc in enumerate(failures):
        if exc is not None:
            raise DecodeError(i, exc)
    return merge(messages)


def encode_packet(message: BitBlock, layout: PacketLayout, cfg: EngineConfig = SEQUENTIAL) -> BitBlock:
    pieces = split(message, layout, encoded=False)
    out: List[Optional[BitBlock]] = [None] * layout.t

    def enc(item: WorkItem) -> None:
        i = item.segment_index
        out[i] = codec.encode(pieces[i], layout.seg_params[i])

    _run([WorkItem(i) for i in range(layout.t)], enc, cfg)
    return merge(out)
