"""Scoring: bin counts, utilization, the area lower bound, and Score ordering.

Scores order lexicographically: fewer bins beats more bins; on equal bins
higher total utilization wins; on equal bins and utilization lower runtime
wins (runtimes within 1e-6 s count as equal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoBinsUsed
from .model import Instance, Solution

RUNTIME_TOLERANCE_S = 1e-6


@dataclass(frozen=True)
class Score:
    bins_used: float
    utilization: float
    runtime_seconds: float


def bins_used(solution: Solution) -> int:
    """Number of nonempty bins."""
    return sum(1 for b in solution.bins if b.placements)


def total_utilization(instance: Instance, solution: Solution) -> float:
    """Total item area over (used bins x bin area)."""
    used = bins_used(solution)
    if used == 0:
        if instance.n > 0:
            raise NoBinsUsed("no bins used but instance has items")
        return 0.0
    return instance.total_item_area / (used * instance.bin.area)


def per_bin_utilization(instance: Instance, solution: Solution) -> list[float]:
    """Item-area fill of each used bin, in bin order."""
    bin_area = instance.bin.area
    out = []
    for b in solution.bins:
        if not b.placements:
            continue
        area = sum(instance.items[p.item].area for p in b.placements)
        out.append(area / bin_area)
    return out


def area_lower_bound(instance: Instance) -> int:
    """ceil(total item area / bin area): no valid solution uses fewer bins."""
    return math.ceil(instance.total_item_area / instance.bin.area)


def compare(a: Score, b: Score) -> int:
    """Lexicographic order; negative if a is better, positive if b is better."""
    if a.bins_used != b.bins_used:
        return -1 if a.bins_used < b.bins_used else 1
    if a.utilization != b.utilization:
        return -1 if a.utilization > b.utilization else 1
    if abs(a.runtime_seconds - b.runtime_seconds) <= RUNTIME_TOLERANCE_S:
        return 0
    return -1 if a.runtime_seconds < b.runtime_seconds else 1
