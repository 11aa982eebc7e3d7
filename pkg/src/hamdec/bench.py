"""Seeded error injection and the packet-size x tolerance timing sweep."""

from __future__ import annotations

import csv
import gc
import logging
import statistics
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .codec import BitBlock
from .engine import Backend, EngineConfig, SEQUENTIAL, decode_packet, encode_packet
from .packetizer import PacketLayout, make_layout

log = logging.getLogger(__name__)

RECORD_HEADER = ("packet_bytes", "tolerance", "backend", "workers", "trial", "decode_ms")
AGGREGATE_HEADER = ("packet_bytes", "tolerance", "seq_median_ms", "pooled_median_ms", "speedup")


@dataclass(frozen=True)
class ChannelModel:
    flips_per_segment: int = 1
    seed: int = 0
    stress: bool = False

    def __post_init__(self):
        if self.flips_per_segment < 0:
            raise ValueError("flips_per_segment must be >= 0")
        if not self.stress and self.flips_per_segment > 1:
            raise ValueError("more than one flip per segment needs stress=True")


def inject_errors(
    encoded: BitBlock, layout: PacketLayout, ch: ChannelModel
) -> Tuple[BitBlock, List[int]]:
    """Flip ``ch.flips_per_segment`` distinct bits inside every segment.

    Returns the corrupted copy and the flipped 0-based packet offsets in
    ascending order.
    """
    if len(encoded) != layout.encoded_bits:
        raise ValueError(f"packet has {len(encoded)} bits, layout expects {layout.encoded_bits}")
    rng = np.random.default_rng(ch.seed)
    out = np.array(encoded, dtype=np.uint8)
    flipped: List[int] = []
    if ch.flips_per_segment == 0:
        return out, flipped
    for i in range(layout.t):
        start, stop = layout.segment_range(i)
        picks = rng.choice(stop - start, size=min(ch.flips_per_segment, stop - start), replace=False)
        flipped.extend(int(start + p) for p in np.sort(picks))
    out[flipped] ^= 1
    return out, flipped


class VerificationError(Exception):
    """A benchmarked decode did not reproduce the original message."""


@dataclass(frozen=True)
class BenchRecord:
    packet_bytes: int
    tolerance: int
    backend: str
    workers: int
    trial: int
    decode_ms: float


@dataclass(frozen=True)
class CellAggregate:
    packet_bytes: int
    tolerance: int
    seq_median_ms: float
    pooled_median_ms: float

    @property
    def speedup(self) -> float:
        if self.pooled_median_ms == 0:
            return float("inf")
        return self.seq_median_ms / self.pooled_median_ms


def _cell_seed(seed: int, size: int, t: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, size, t, trial])


def _timed_decode(encoded: BitBlock, layout: PacketLayout, cfg: EngineConfig) -> Tuple[BitBlock, float]:
    start = time.perf_counter()
    out = decode_packet(encoded, layout, cfg)
    return out, (time.perf_counter() - start) * 1e3


def make_trial(size: int, t: int, trial: int, seed: int) -> Tuple[BitBlock, PacketLayout, BitBlock, List[int]]:
    """Message, layout, corrupted packet and flip offsets for one grid run."""
    ss = _cell_seed(seed, size, t, trial)
    msg_seed, channel_seed = ss.spawn(2)
    message = np.random.default_rng(msg_seed).integers(0, 2, size * 8, dtype=np.uint8)
    layout = make_layout(size * 8, t)
    encoded = encode_packet(message, layout)
    ch = ChannelModel(1, int(channel_seed.generate_state(1, np.uint64)[0]))
    corrupted, flips = inject_errors(encoded, layout, ch)
    return message, layout, corrupted, flips


@contextmanager
def _gc_paused():
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def run_grid(
    sizes: Sequence[int],
    tolerances: Sequence[int],
    cfg: EngineConfig,
    trials: int = 30,
    seed: int = 0,
    warmup: int = 3,
) -> List[BenchRecord]:
    """Time sequential and ``cfg`` decodes on every (size, tolerance) cell.

    Each trial decodes the same corrupted packet with both backends. A decode
    that does not reproduce the message raises :class:`VerificationError`
    before its time is recorded.

    Inputs are generated before any timing. Decodes run one at a time, but
    trials are interleaved across cells, one pass per trial in a seeded
    shuffled cell order, so drift and bursts in host speed land on every
    cell alike; ``warmup`` untimed decodes per cell and backend come first.
    Records are returned in cell-major order.
    """
    if not sizes or not tolerances:
        raise ValueError("grid axes must be non-empty")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    contenders = [SEQUENTIAL]
    if cfg.backend is Backend.POOLED:
        contenders.append(cfg)
    cells = [(size, t) for size in sizes for t in tolerances]
    runs = {cell: [make_trial(*cell, trial, seed) for trial in range(trials)] for cell in cells}

    for cell in cells:
        for c in contenders:
            for i in range(warmup):
                _, layout, corrupted, _ = runs[cell][i % trials]
                decode_packet(corrupted, layout, c)

    order_rng = np.random.default_rng(np.random.SeedSequence([seed, len(cells), trials]))
    timed = {}
    with _gc_paused():
        for trial in range(trials):
            for k in order_rng.permutation(len(cells)):
                size, t = cells[k]
                message, layout, corrupted, flips = runs[(size, t)][trial]
                for c in contenders:
                    decoded, ms = _timed_decode(corrupted, layout, c)
                    if not np.array_equal(decoded, message):
                        raise VerificationError(
                            f"{c.backend.value} decode mismatch at {size} bytes, t={t}, "
                            f"trial {trial}, flips {flips}"
                        )
                    timed[(size, t, trial, c.backend)] = BenchRecord(
                        size, t, c.backend.value, c.workers, trial, ms
                    )
        log.info("timed %d decodes", len(timed))
    return [
        timed[(size, t, trial, c.backend)]
        for size, t in cells
        for trial in range(trials)
        for c in contenders
    ]


def aggregate(records: Iterable[BenchRecord]) -> List[CellAggregate]:
    """Per-cell medians, in first-seen cell order."""
    cells: dict = {}
    for rec in records:
        seq, pooled = cells.setdefault((rec.packet_bytes, rec.tolerance), ([], []))
        (seq if rec.backend == Backend.SEQUENTIAL.value else pooled).append(rec.decode_ms)
    out = []
    for (size, t), (seq, pooled) in cells.items():
        seq_med = statistics.median(seq) if seq else float("nan")
        pooled_med = statistics.median(pooled) if pooled else float("nan")
        out.append(CellAggregate(size, t, seq_med, pooled_med))
    return out


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_csv(records: Iterable[BenchRecord], path) -> None:
    rows = (
        (r.packet_bytes, r.tolerance, r.backend, r.workers, r.trial, _fmt(r.decode_ms))
        for r in records
    )
    _write_rows(path, RECORD_HEADER, rows)


def emit_aggregate_csv(cells: Iterable[CellAggregate], path) -> None:
    rows = (
        (c.packet_bytes, c.tolerance, _fmt(c.seq_median_ms), _fmt(c.pooled_median_ms), _fmt(c.speedup))
        for c in cells
    )
    _write_rows(path, AGGREGATE_HEADER, rows)


def read_csv(path) -> List[BenchRecord]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            BenchRecord(
                int(row["packet_bytes"]),
                int(row["tolerance"]),
                row["backend"],
                int(row["workers"]),
                int(row["trial"]),
                float(row["decode_ms"]),
            )
            for row in reader
        ]


def read_aggregate_csv(path) -> List[CellAggregate]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != AGGREGATE_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            CellAggregate(
                int(row["packet_bytes"]),
                int(row["tolerance"]),
                float(row["seq_median_ms"]),
                float(row["pooled_median_ms"]),
            )
            for row in reader
        ]
