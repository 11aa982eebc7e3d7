"""Makespan model for moving N packets through send / kernel / receive stages.

In synchronous mode (SDT) each packet finishes all three stages before the
next one starts. In asynchronous mode (ADT) each stage is a single resource
that starts the next packet as soon as both the resource and the packet's
previous stage are free, so transfers overlap with kernel execution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Tuple


class Mode(str, enum.Enum):
    SDT = "sdt"
    ADT = "adt"


@dataclass(frozen=True)
class StageTimes:
    t_ps: float
    t_dke: float
    t_pr: float

    def __post_init__(self):
        for name in ("t_ps", "t_dke", "t_pr"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v}")

    @property
    def total(self) -> float:
        return self.t_ps + self.t_dke + self.t_pr

    @property
    def bottleneck(self) -> float:
        return max(self.t_ps, self.t_dke, self.t_pr)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.t_ps, self.t_dke, self.t_pr)


@dataclass(frozen=True)
class PipelineRun:
    n_packets: int
    times: StageTimes
    mode: Mode = Mode.ADT

    def __post_init__(self):
        if self.n_packets < 1:
            raise ValueError(f"need at least one packet, got {self.n_packets}")
        object.__setattr__(self, "mode", Mode(self.mode))


def sdt_makespan(run: PipelineRun) -> float:
    return run.n_packets * run.times.total


def adt_makespan(run: PipelineRun) -> float:
    """First packet's latency plus one bottleneck stage per further packet.

    Equals ``t_ps + N * t_dke + t_pr`` when the kernel is the slowest stage.
    """
    return run.times.total + (run.n_packets - 1) * run.times.bottleneck


def makespan(run: PipelineRun) -> float:
    return sdt_makespan(run) if run.mode is Mode.SDT else adt_makespan(run)


def adt_speedup(run: PipelineRun) -> float:
    adt = adt_makespan(run)
    if adt <= 0:
        raise ZeroDivisionError("speedup undefined when every stage takes zero time")
    return sdt_makespan(run) / adt


def savings(run: PipelineRun) -> float:
    """Time saved by overlapping; ``(N - 1) * (t_ps + t_pr)`` when the kernel dominates."""
    return sdt_makespan(run) - adt_makespan(run)


def simulate(run: PipelineRun) -> List[Tuple[float, float, float]]:
    """Event-by-event schedule: per-packet finish times of each stage.

    Each stage is a single resource processing packets in arrival order.
    """
    durations = run.times.as_tuple()
    finishes: List[Tuple[float, float, float]] = []
    stage_free = [0.0, 0.0, 0.0]
    for _ in range(run.n_packets):
        # SDT: a packet may not start until the previous one is back
        start = finishes[-1][2] if run.mode is Mode.SDT and finishes else 0.0
        row = []
        t = start
        for s, d in enumerate(durations):
            t = max(t, stage_free[s]) + d
            stage_free[s] = t
            row.append(t)
        finishes.append((row[0], row[1], row[2]))
    return finishes


def simulated_makespan(run: PipelineRun) -> float:
    return simulate(run)[-1][2]
