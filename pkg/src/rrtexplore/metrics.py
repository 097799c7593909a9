"""Per-window and per-run records shared by the simulator and the harness."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class WindowMetrics:
    """One row of the per-window CSV. ``p`` is attempts per successful sample."""

    window_index: int
    detector: str
    seed: int
    attempts: int
    successes: int
    p: float
    duration_s: float
    s_total: float
    s_o: float
    s_n: float
    n_frontiers: int

    @staticmethod
    def attempts_per_success(attempts: int, successes: int) -> float:
        if successes > 0:
            return attempts / successes
        return float("inf") if attempts > 0 else 0.0


@dataclass(frozen=True)
class WindowDensity:
    """Node counts after a window was filled, split by region."""

    window_index: int
    s_o: float
    s_n: float
    nodes_overlap: int
    nodes_non_overlap: int
    successes: int
    successes_non_overlap: int

    @property
    def density_overlap(self) -> float:
        return self.nodes_overlap / self.s_o if self.s_o > 0 else float("nan")

    @property
    def density_non_overlap(self) -> float:
        return self.nodes_non_overlap / self.s_n if self.s_n > 0 else float("nan")

    @property
    def k(self) -> float:
        """Successful samples per successful non-overlap sample."""
        if self.successes_non_overlap == 0:
            return float("inf") if self.successes else 0.0
        return self.successes / self.successes_non_overlap

    @property
    def n(self) -> int:
        return self.successes_non_overlap
