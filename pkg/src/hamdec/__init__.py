"""Segmented Hamming code decoding with data-parallel kernels."""

from .codec import (
    BitBlock,
    CodecError,
    CodeParams,
    Syndrome,
    UncorrectableError,
    as_bits,
    bits_to_str,
    detect_and_correct,
    encode,
    index_set,
    parity_bit_count,
    remove_redundancy,
    syndrome,
)
from .coalesce import GatherMap, apply_gather, build_gather_map
from .engine import (
    Backend,
    DecodeError,
    EngineConfig,
    WorkItem,
    checksum_kernel,
    decode_packet,
    encode_packet,
    error_kernel,
    xor_reduce_tree,
)
from .packetizer import PacketLayout, make_layout, merge, split

__version__ = "0.1.0"
