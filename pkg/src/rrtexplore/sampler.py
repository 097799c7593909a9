"""Per-window sampling quotas and overlap/non-overlap region probabilities.

Given a target density ``theta`` (successful samples per m^2), the overlap
area ``s_o`` already holding ``n_o`` retained nodes and the newly covered
area ``s_n``, the expected additional samples are::

    n_eo = max(0, theta * s_o - n_o)
    n_en = theta * s_n

and a sample is drawn from the non-overlap region with probability
``n_en / (n_eo + n_en)``. Filling both regions this way leaves them at the
same node density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geometry import RegionDecomposition


class Region(Enum):
    OVERLAP = "overlap"
    NON_OVERLAP = "non_overlap"


class PlanSaturated(RuntimeError):
    """Both quotas are zero; the window needs no further samples."""


@dataclass(frozen=True)
class SamplingPlan:
    theta: float
    tau: int
    s_o: float
    s_n: float
    n_o: int
    n_eo: float
    n_en: float
    eta_o: float
    eta_n: float

    @property
    def saturated(self) -> bool:
        return self.n_eo + self.n_en <= 0


def compute_plan(theta: float, tau: int, decomposition: RegionDecomposition, n_o: int) -> SamplingPlan:
    if not theta > 0 or not tau > 0:
        raise ValueError("theta and tau must be positive")
    if n_o < 0:
        raise ValueError("n_o must be non-negative")
    s_o, s_n = decomposition.s_o, decomposition.s_n
    n_eo = max(0.0, theta * s_o - n_o)
    n_en = theta * s_n
    denom = n_eo + n_en
    if denom > 0:
        eta_n = n_en / denom
        eta_o = n_eo / denom
    else:
        eta_n = eta_o = 0.0
    return SamplingPlan(theta, tau, s_o, s_n, n_o, n_eo, n_en, eta_o, eta_n)


def draw_region(plan: SamplingPlan, rng) -> Region:
    """Overlap when a uniform draw exceeds ``eta_n``, otherwise non-overlap."""
    if plan.saturated:
        raise PlanSaturated("plan has no remaining quota")
    if rng.random() > plan.eta_n:
        return Region.OVERLAP
    return Region.NON_OVERLAP


def window_budget(theta: float, tau: int, s_total: float) -> int:
    """Target node count for a window: ``min(tau, ceil(theta * s_total))``."""
    if s_total < 0:
        raise ValueError("s_total must be non-negative")
    # tolerance keeps e.g. 0.1 * 30 from rounding up to 4
    return int(min(tau, math.ceil(theta * s_total - 1e-9)))
