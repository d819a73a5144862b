"""Independent correctness checking of a Solution against its Instance.

The validator never trusts the producer: it re-derives containment,
pairwise non-overlap and the exactly-once assignment from scratch and
reports every violation it finds, in a deterministic order. Touching
edges are legal; only interior overlap beyond EPS counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance, Solution

EPS = 1e-9

CONTAINMENT = "Containment"
OVERLAP = "Overlap"
DUPLICATE_ITEM = "DuplicateItem"
MISSING_ITEM = "MissingItem"
UNKNOWN_ITEM = "UnknownItem"
DIMENSION_MISMATCH = "DimensionMismatch"


@dataclass(frozen=True)
class Violation:
    kind: str
    bin: int | None = None
    items: tuple[int, ...] = ()
    detail: str = ""

    def to_obj(self) -> dict:
        return {"kind": self.kind, "bin": self.bin, "items": list(self.items),
                "detail": self.detail}


def _sort_key(v: Violation):
    b = v.bin if v.bin is not None else float("inf")
    first = v.items[0] if v.items else float("inf")
    return (b, first, v.kind)


def validate(instance: Instance, solution: Solution) -> list[Violation]:
    """Return all violations; an empty list means the solution is valid."""
    W, H = instance.bin.width, instance.bin.height
    n = instance.n
    violations: list[Violation] = []
    seen: dict[int, int] = {}  # item index -> first bin seen in

    for bi, b in enumerate(solution.bins):
        rects = []  # (item, x, y, w, h) for placements usable in overlap checks
        for p in b.placements:
            if not 0 <= p.item < n:
                violations.append(Violation(UNKNOWN_ITEM, bin=bi, items=(p.item,),
                                            detail=f"no item {p.item} in instance"))
                continue
            if p.item in seen:
                violations.append(Violation(
                    DUPLICATE_ITEM, bin=bi, items=(p.item,),
                    detail=f"item {p.item} already placed in bin {seen[p.item]}"))
            else:
                seen[p.item] = bi
            it = instance.items[p.item]
            if it.width > W or it.height > H:
                violations.append(Violation(
                    DIMENSION_MISMATCH, bin=bi, items=(p.item,),
                    detail=f"item {it.width}x{it.height} exceeds bin {W}x{H}"))
                continue
            inside = (p.x >= -EPS and p.y >= -EPS
                      and p.x + it.width <= W + EPS and p.y + it.height <= H + EPS)
            if not inside:
                violations.append(Violation(
                    CONTAINMENT, bin=bi, items=(p.item,),
                    detail=f"item {p.item} at ({p.x},{p.y}) size "
                           f"{it.width}x{it.height} leaves bin {W}x{H}"))
            rects.append((p.item, p.x, p.y, it.width, it.height))

        rects.sort(key=lambda r: r[0])
        for i in range(len(rects)):
            ai, ax, ay, aw, ah = rects[i]
            for j in range(i + 1, len(rects)):
                bj, bx, by, bw, bh = rects[j]
                if ai == bj:
                    continue  # duplicate in same bin, already reported
                overlap_x = min(ax + aw, bx + bw) - max(ax, bx)
                overlap_y = min(ay + ah, by + bh) - max(ay, by)
                if overlap_x > EPS and overlap_y > EPS:
                    violations.append(Violation(
                        OVERLAP, bin=bi, items=(ai, bj),
                        detail=f"items {ai} and {bj} overlap on "
                               f"{overlap_x:.6g}x{overlap_y:.6g}"))

    for idx in range(n):
        if idx not in seen:
            violations.append(Violation(MISSING_ITEM, items=(idx,),
                                        detail=f"item {idx} not placed"))

    violations.sort(key=_sort_key)
    return violations
