"""Domain types and canonical wire/file formats.

Wire formats (UTF-8 JSON, one object per file/stream, no trailing data):

  instance:  {"capacity": [W, H], "items": [[w0, h0], ...]}
  solution:  {"bins": [{"placements": [{"item": i, "x": x, "y": y}, ...]}, ...]}
  dataset:   {"seed": s, "params": {...}, "instances": [instance, ...]}

An item's index is its position in the instance's item list.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import MalformedOutput, NonNumericCoordinate, UnknownItemIndex


@dataclass(frozen=True)
class Item:
    """A rectangle to pack. Index is its stable identity within the instance."""
    index: int
    width: int
    height: int

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class BinSpec:
    width: int
    height: int

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Placement:
    """Lower-left corner of an item inside a bin."""
    item: int
    x: float
    y: float


@dataclass(frozen=True)
class Bin:
    placements: tuple[Placement, ...]

    def __bool__(self) -> bool:
        return bool(self.placements)


@dataclass(frozen=True)
class Solution:
    bins: tuple[Bin, ...]


@dataclass(frozen=True)
class Instance:
    items: tuple[Item, ...]
    bin: BinSpec

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def total_item_area(self) -> int:
        return sum(it.area for it in self.items)


@dataclass(frozen=True)
class Dataset:
    seed: int
    params: dict
    instances: tuple[Instance, ...]


def make_instance(sizes: list[tuple[int, int]], bin_spec: BinSpec) -> Instance:
    """Build an Instance from (width, height) pairs; index = list position."""
    items = tuple(Item(i, w, h) for i, (w, h) in enumerate(sizes))
    return Instance(items=items, bin=bin_spec)


def make_solution(bins: list[list[tuple[int, float, float]]]) -> Solution:
    """Build a Solution from lists of (item, x, y) triples."""
    return Solution(bins=tuple(
        Bin(placements=tuple(Placement(i, x, y) for i, x, y in b)) for b in bins
    ))


# --- encoding ---

def encode_instance(instance: Instance) -> str:
    obj = {
        "capacity": [instance.bin.width, instance.bin.height],
        "items": [[it.width, it.height] for it in instance.items],
    }
    return json.dumps(obj, separators=(",", ":"))


def encode_solution(solution: Solution) -> str:
    obj = {
        "bins": [
            {"placements": [{"item": p.item, "x": p.x, "y": p.y} for p in b.placements]}
            for b in solution.bins
        ]
    }
    return json.dumps(obj, separators=(",", ":"))


def encode_dataset(dataset: Dataset) -> str:
    obj = {
        "seed": dataset.seed,
        "params": dataset.params,
        "instances": [json.loads(encode_instance(inst)) for inst in dataset.instances],
    }
    return json.dumps(obj, separators=(",", ":"))


# --- decoding ---

def _instance_from_obj(obj) -> Instance:
    if not isinstance(obj, dict):
        raise MalformedOutput("instance object expected")
    try:
        w, h = obj["capacity"]
        sizes = obj["items"]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedOutput(f"bad instance structure: {e}") from None
    if not isinstance(w, int) or not isinstance(h, int):
        raise MalformedOutput("capacity must be a pair of integers")
    items = []
    for i, pair in enumerate(sizes):
        try:
            iw, ih = pair
        except (TypeError, ValueError):
            raise MalformedOutput(f"item {i} is not a [w,h] pair") from None
        if not isinstance(iw, int) or not isinstance(ih, int) or iw <= 0 or ih <= 0:
            raise MalformedOutput(f"item {i} has non-positive or non-integer sides")
        items.append((iw, ih))
    return make_instance(items, BinSpec(w, h))


def decode_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedOutput(f"invalid JSON: {e}") from None
    return _instance_from_obj(obj)


def decode_solution(text: str, instance: Instance) -> Solution:
    """Parse candidate output and resolve item indices against the instance.

    Raises MalformedOutput for anything structurally wrong, UnknownItemIndex
    for an index outside 0..n-1, NonNumericCoordinate for a coordinate that
    is not a finite number.
    """
    try:
        obj = json.loads(text)
    except (json.JSONDecodeError, RecursionError) as e:
        raise MalformedOutput(f"invalid JSON: {e}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("bins"), list):
        raise MalformedOutput("top-level object with a 'bins' list expected")
    n = instance.n
    bins = []
    for bi, bobj in enumerate(obj["bins"]):
        if not isinstance(bobj, dict) or not isinstance(bobj.get("placements"), list):
            raise MalformedOutput(f"bin {bi} lacks a 'placements' list")
        placements = []
        for pobj in bobj["placements"]:
            if not isinstance(pobj, dict):
                raise MalformedOutput(f"bin {bi} holds a non-object placement")
            try:
                idx = pobj["item"]
                x = pobj["x"]
                y = pobj["y"]
            except KeyError as e:
                raise MalformedOutput(f"placement missing field {e}") from None
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise MalformedOutput(f"item index {idx!r} is not an integer")
            if not 0 <= idx < n:
                raise UnknownItemIndex(f"item {idx} not in 0..{n - 1}")
            for coord in (x, y):
                if isinstance(coord, bool) or not isinstance(coord, (int, float)) \
                        or not math.isfinite(coord):
                    raise NonNumericCoordinate(f"coordinate {coord!r} for item {idx}")
            placements.append((idx, float(x), float(y)))
        bins.append(placements)
    return make_solution(bins)


def decode_dataset(text: str) -> Dataset:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedOutput(f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise MalformedOutput("dataset object expected")
    try:
        seed = obj["seed"]
        params = obj["params"]
        raw_instances = obj["instances"]
    except KeyError as e:
        raise MalformedOutput(f"dataset missing field {e}") from None
    instances = tuple(_instance_from_obj(o) for o in raw_instances)
    return Dataset(seed=seed, params=params, instances=instances)
