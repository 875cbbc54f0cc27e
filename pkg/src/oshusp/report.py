"""Mining results, run limits and the live-memory counter shared by the miners."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .model import MinedPattern

DEFAULT_TIME_LIMIT = 10_000.0


@dataclass
class MiningReport:
    algorithm: str
    patterns: list[MinedPattern] = field(default_factory=list)
    candidates_generated: int = 0
    projections_built: int = 0
    nodes_visited: int = 0
    utility_computations: int = 0
    peak_live_bytes: int = 0
    wall_time: float = 0.0
    phase_times: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    ot_mode: str = "intersection"
    aborted: str | None = None

    def sorted_patterns(self) -> list[MinedPattern]:
        return sorted(self.patterns, key=lambda m: m.pattern.sort_key())

    def pattern_set(self) -> set:
        return {m.pattern for m in self.patterns}

    def result_set(self) -> set:
        """``{(pattern, ou)}``, the comparison key between algorithms."""
        return {(m.pattern, m.ou) for m in self.patterns}


class MiningAborted(RuntimeError):
    """Raised when a run exceeds its time or memory budget; carries partial stats."""

    def __init__(self, reason: str, report: MiningReport):
        super().__init__(f"{report.algorithm} aborted: {reason}")
        self.reason = reason
        self.report = report


@dataclass
class Limits:
    time_limit: float | None = DEFAULT_TIME_LIMIT
    max_live_bytes: int | None = None


class Budget:
    """Live-byte counter plus deadline, checked by the miners as they grow."""

    def __init__(self, report: MiningReport, limits: Limits | None):
        limits = limits or Limits()
        self.report = report
        self.start = time.perf_counter()
        self.deadline = None if limits.time_limit is None else self.start + limits.time_limit
        self.max_bytes = limits.max_live_bytes
        self.live = 0
        self.peak = 0

    def alloc(self, nbytes: int):
        self.live += nbytes
        if self.live > self.peak:
            self.peak = self.live
            self.report.peak_live_bytes = self.peak
            if self.max_bytes is not None and self.peak > self.max_bytes:
                self.abort(f"live memory {self.peak} B exceeds limit {self.max_bytes} B")

    def free(self, nbytes: int):
        self.live -= nbytes

    def tick(self):
        if self.deadline is not None and time.perf_counter() > self.deadline:
            self.abort("time limit exceeded")

    def abort(self, reason: str):
        self.report.aborted = reason
        self.report.wall_time = time.perf_counter() - self.start
        raise MiningAborted(reason, self.report)
