"""Exact minimum-bin solver for tiny instances.

Partitions of the item set are enumerated in non-decreasing bin-count
order; a partition wins as soon as each of its blocks fits in one bin.
Single-bin feasibility is decided by exhaustive search over item orders
and corner placements: every normalized axis-aligned packing puts each
item at an x drawn from {0} union {x_k + w_k} and a y from {0} union
{y_k + h_k} of already-placed items, so branching over those candidate
points (lowest-then-leftmost first) while also branching over which item
to place next is a complete decision procedure. n is capped because the
search is factorial.
"""

from __future__ import annotations

from .errors import ItemTooLarge, TooLarge
from .metrics import area_lower_bound
from .model import Instance, Solution, make_solution
from .validate import EPS


def exact_min_bins(instance: Instance, max_n: int = 6) -> tuple[int, Solution]:
    """Minimum number of bins and a witness packing achieving it."""
    n = instance.n
    if n > max_n:
        raise TooLarge(f"instance has {n} items, exact solver capped at {max_n}")
    if n == 0:
        return 0, make_solution([])

    W, H = instance.bin.width, instance.bin.height
    for it in instance.items:
        if it.width > W or it.height > H:
            raise ItemTooLarge(f"item {it.index} ({it.width}x{it.height}) "
                               f"exceeds bin {W}x{H}")
    feasible_cache: dict[frozenset, list | None] = {}

    def block_layout(block: frozenset) -> list | None:
        """Placements for one bin, or None if the block cannot fit."""
        if block in feasible_cache:
            return feasible_cache[block]
        items = [instance.items[i] for i in sorted(block)]
        layout = None
        if all(it.width <= W and it.height <= H for it in items) \
                and sum(it.area for it in items) <= W * H:
            layout = _search(items, W, H)
        feasible_cache[block] = layout
        return layout

    lower = max(1, area_lower_bound(instance))
    indices = list(range(n))
    for k in range(lower, n + 1):
        for blocks in _partitions_into(indices, k):
            layouts = []
            for block in blocks:
                layout = block_layout(frozenset(block))
                if layout is None:
                    break
                layouts.append(layout)
            else:
                return k, make_solution(layouts)
    raise AssertionError("singleton partition must be feasible")  # pragma: no cover


def _search(items, W, H) -> list | None:
    """Complete corner-point search for packing all items into one W x H bin.

    placed: list of (index, x, y, w, h). Branches over the next item
    (one representative per distinct size) and over candidate corners.
    """
    def candidates(placed):
        xs = {0.0} | {x + w for _, x, _, w, _ in placed}
        ys = {0.0} | {y + h for _, _, y, _, h in placed}
        return sorted((y, x) for y in ys for x in xs)

    def fits(placed, x, y, w, h):
        if x + w > W + EPS or y + h > H + EPS:
            return False
        for _, px, py, pw, ph in placed:
            if min(x + w, px + pw) - max(x, px) > EPS \
                    and min(y + h, py + ph) - max(y, py) > EPS:
                return False
        return True

    def recurse(remaining, placed):
        if not remaining:
            return list(placed)
        points = candidates(placed)
        tried_sizes = set()
        for i, it in enumerate(remaining):
            if (it.width, it.height) in tried_sizes:
                continue
            tried_sizes.add((it.width, it.height))
            rest = remaining[:i] + remaining[i + 1:]
            for y, x in points:
                if fits(placed, x, y, it.width, it.height):
                    placed.append((it.index, x, y, it.width, it.height))
                    result = recurse(rest, placed)
                    placed.pop()
                    if result is not None:
                        return result
        return None

    ordered = sorted(items, key=lambda it: (-it.area, it.index))
    result = recurse(ordered, [])
    if result is None:
        return None
    return [(idx, x, y) for idx, x, y, _, _ in result]


def _partitions_into(elements: list, k: int):
    """Set partitions of elements into exactly k nonempty blocks."""
    n = len(elements)
    if k > n:
        return
    if k == n:
        yield [[e] for e in elements]
        return

    def helper(i, blocks):
        remaining = n - i
        open_slots = k - len(blocks)
        if remaining < open_slots:
            return
        if i == n:
            if len(blocks) == k:
                yield [list(b) for b in blocks]
            return
        e = elements[i]
        for b in blocks:
            b.append(e)
            yield from helper(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([e])
            yield from helper(i + 1, blocks)
            blocks.pop()

    yield from helper(0, [])
