import json

import pytest

from packbench.model import BinSpec, make_instance
from packbench.rng import SplitMix64


def fuzz_instance(seed: int, max_items: int = 200, bin_spec: BinSpec = BinSpec(200, 100)):
    """Random rectangle instance for fuzz tests (not the square profile)."""
    rng = SplitMix64(seed)
    n = rng.uniform_int(0, max_items)
    sizes = [(rng.uniform_int(1, bin_spec.width), rng.uniform_int(1, bin_spec.height))
             for _ in range(n)]
    return make_instance(sizes, bin_spec)


def strip_runtime_fields(obj):
    """Drop every *_seconds field, recursively; used to compare run state."""
    if isinstance(obj, dict):
        return {k: strip_runtime_fields(v) for k, v in obj.items()
                if not k.endswith("_seconds")}
    if isinstance(obj, list):
        return [strip_runtime_fields(v) for v in obj]
    return obj


CANDIDATE_MAIN = """
if __name__ == "__main__":
    import json, sys
    data = json.load(sys.stdin)
    result = pack([tuple(p) for p in data["items"]], tuple(data["capacity"]))
    out = {"bins": [{"placements": [{"item": i, "x": x, "y": y}
                                    for (i, x, y) in b]} for b in result]}
    json.dump(out, sys.stdout)
"""

ONE_PER_BIN_PACK = """\
def pack(items, capacity):
    return [[(i, 0, 0)] for i in range(len(items))]
"""

SHELF_FIRST_FIT_PACK = """\
def pack(items, capacity):
    W, H = capacity
    order = sorted(range(len(items)), key=lambda i: (-items[i][1], -items[i][0], i))
    bins, placements = [], []
    for i in order:
        w, h = items[i]
        placed = False
        for b, shelves in enumerate(bins):
            for shelf in shelves:
                if shelf[2] + w <= W and shelf[1] >= h:
                    placements[b].append((i, shelf[2], shelf[0]))
                    shelf[2] += w
                    placed = True
                    break
            if placed:
                break
            top = shelves[-1][0] + shelves[-1][1]
            if H - top >= h:
                shelves.append([top, h, w])
                placements[b].append((i, 0, top))
                placed = True
                break
        if not placed:
            bins.append([[0, h, w]])
            placements.append([(i, 0, 0)])
    return placements
"""


def write_candidate(path, pack_source: str) -> str:
    """Write a standalone wire-protocol candidate built from a pack function."""
    path.write_text(pack_source + CANDIDATE_MAIN, encoding="utf-8")
    return str(path)


MUTATION_KINDS = ("shift", "move_onto", "duplicate", "delete")


def mutate_solution(rng, instance, solution, kind):
    """Apply one named corruption to a valid solution; returns a Solution.

    shift: push an item fully out of bounds. move_onto: relocate an item
    into another placement's bin at that placement's exact position.
    duplicate: place a second copy of an item in a fresh bin.
    delete: drop a placement.
    """
    from packbench.model import make_solution

    bins = [[(p.item, p.x, p.y) for p in b.placements] for b in solution.bins]
    nonempty = [i for i, b in enumerate(bins) if b]
    bi = nonempty[rng.below(len(nonempty))]
    pi = rng.below(len(bins[bi]))
    item, x, y = bins[bi][pi]
    if kind == "shift":
        bins[bi][pi] = (item, x + instance.bin.width, y)
    elif kind == "move_onto":
        others = [(b, p) for b in nonempty for p in range(len(bins[b]))
                  if (b, p) != (bi, pi)]
        ob, op = others[rng.below(len(others))]
        target = bins[ob][op]
        del bins[bi][pi]
        bins[ob].append((item, target[1], target[2]))
    elif kind == "duplicate":
        bins.append([(item, 0.0, 0.0)])
    elif kind == "delete":
        del bins[bi][pi]
    return make_solution(bins)


def fence(source: str, prose: str = "Here is my heuristic.") -> str:
    """Wrap source in a fenced block the way a model response would."""
    return f"{prose}\n\n```python\n{source}```\n"


@pytest.fixture
def fixture_pool(tmp_path):
    """Factory for mock fixture directories built from pack sources."""
    def build(sources: dict[str, str]) -> str:
        pool = tmp_path / "pool"
        pool.mkdir(exist_ok=True)
        for name, pack_source in sources.items():
            (pool / f"{name}.md").write_text(
                fence(pack_source + CANDIDATE_MAIN), encoding="utf-8")
        return str(pool)
    return build
