"""Reference heuristics: Finite First-Fit and Hybrid First-Fit.

Both are level-based. HFF is the classical two-phase method: FFDH packs
items into infinite-height strips of the bin's width, then FFD stacks
those strips into bins by height. FFF packs level-by-level directly into
finite bins: each item goes to the first level of the first bin that can
take it, opening a new level (or bin) only when nothing earlier fits.

Item order is the same everywhere: height descending, then width
descending, then original index. This tie-break is part of the contract;
identical instances always produce byte-identical solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ItemTooLarge, ItemTooWide, StripTooTall
from .model import BinSpec, Instance, Item, Solution, make_solution


@dataclass
class Strip:
    """One level: items sit on the base line, height = tallest item."""
    height: int
    used_width: int = 0
    placements: list[tuple[Item, int]] = field(default_factory=list)  # (item, x offset)


def sorted_for_packing(items) -> list[Item]:
    return sorted(items, key=lambda it: (-it.height, -it.width, it.index))


def ffdh_strips(items, strip_width: int) -> list[Strip]:
    """First-Fit Decreasing Height strip packing.

    Items are placed tallest-first into the first strip with enough
    residual width; strips are returned in creation order, which by
    construction is non-increasing in height.
    """
    for it in items:
        if it.width > strip_width:
            raise ItemTooWide(f"item {it.index} width {it.width} > {strip_width}")
    strips: list[Strip] = []
    for it in sorted_for_packing(items):
        for strip in strips:
            if strip.used_width + it.width <= strip_width:
                strip.placements.append((it, strip.used_width))
                strip.used_width += it.width
                break
        else:
            strip = Strip(height=it.height)
            strip.placements.append((it, 0))
            strip.used_width = it.width
            strips.append(strip)
    return strips


def pack_strips_ffd(strips: list[Strip], bin_spec: BinSpec) -> Solution:
    """First-Fit Decreasing of strips into bins by height.

    Strips arrive height-sorted from ffdh_strips and are not re-sorted.
    Each goes to the first bin with enough residual height; its items get
    y = the stack height below it, x = their stored offsets.
    """
    for s in strips:
        if s.height > bin_spec.height:
            raise StripTooTall(f"strip height {s.height} > bin {bin_spec.height}")
    bins: list[list[tuple[int, float, float]]] = []
    heights: list[int] = []  # used height per bin
    for s in strips:
        for bi, used in enumerate(heights):
            if used + s.height <= bin_spec.height:
                base = used
                heights[bi] = used + s.height
                bins[bi].extend((it.index, float(x), float(base)) for it, x in s.placements)
                break
        else:
            bins.append([(it.index, float(x), 0.0) for it, x in s.placements])
            heights.append(s.height)
    return make_solution(bins)


def pack_hff(instance: Instance) -> Solution:
    """Hybrid First-Fit: FFDH strips, then FFD strip-to-bin stacking."""
    _check_items_fit(instance)
    strips = ffdh_strips(instance.items, instance.bin.width)
    return pack_strips_ffd(strips, instance.bin)


@dataclass
class _Level:
    y: int
    height: int
    used_width: int


def pack_fff(instance: Instance) -> Solution:
    """Finite First-Fit: level-based FFDH placement directly into bins.

    For each item (tallest first) scan bins in order; within a bin scan
    its levels bottom-to-top for one with enough residual width and a
    level height that admits the item; failing that, open a new level on
    top of the bin's stack if the item's height still fits the bin;
    failing every bin, open a new bin.
    """
    _check_items_fit(instance)
    W, H = instance.bin.width, instance.bin.height
    bins: list[list[_Level]] = []
    placements: list[list[tuple[int, float, float]]] = []
    for it in sorted_for_packing(instance.items):
        placed = False
        for bi, levels in enumerate(bins):
            for lvl in levels:
                if lvl.used_width + it.width <= W and lvl.height >= it.height:
                    placements[bi].append((it.index, float(lvl.used_width), float(lvl.y)))
                    lvl.used_width += it.width
                    placed = True
                    break
            if placed:
                break
            stack = levels[-1].y + levels[-1].height
            if H - stack >= it.height:
                bins[bi].append(_Level(y=stack, height=it.height, used_width=it.width))
                placements[bi].append((it.index, 0.0, float(stack)))
                placed = True
                break
        if not placed:
            bins.append([_Level(y=0, height=it.height, used_width=it.width)])
            placements.append([(it.index, 0.0, 0.0)])
    return make_solution(placements)


def _check_items_fit(instance: Instance) -> None:
    for it in instance.items:
        if it.width > instance.bin.width or it.height > instance.bin.height:
            raise ItemTooLarge(
                f"item {it.index} ({it.width}x{it.height}) exceeds bin "
                f"{instance.bin.width}x{instance.bin.height}")


ALGORITHMS = {"fff": pack_fff, "hff": pack_hff}
