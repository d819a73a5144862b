"""Seeded random instance and dataset generation.

Default profile: 50 square items per instance with integer sides drawn
uniformly (inclusive) from [10, 50], bins of 200x100 units. All draws
come from SplitMix64 so the same seed reproduces the same dataset
byte-for-byte; the generator name is recorded in each dataset's params.
Instance i of a dataset uses sub-seed (seed + i) mod 2^64.
"""

from __future__ import annotations

from .errors import BadParams
from .model import BinSpec, Dataset, Instance, make_instance
from .rng import MASK64, SplitMix64

GENERATOR_NAME = "splitmix64"

DEFAULT_BIN = BinSpec(200, 100)
DEFAULT_N_ITEMS = 50
DEFAULT_MIN_SIDE = 10
DEFAULT_MAX_SIDE = 50
DEFAULT_COUNT = 20


def gen_instance(seed: int, n_items: int = DEFAULT_N_ITEMS,
                 min_side: int = DEFAULT_MIN_SIDE, max_side: int = DEFAULT_MAX_SIDE,
                 bin_spec: BinSpec = DEFAULT_BIN) -> Instance:
    """n_items squares with integer sides uniform on [min_side, max_side]."""
    if n_items < 0:
        raise BadParams("n_items must be >= 0")
    if not (0 < min_side <= max_side <= min(bin_spec.width, bin_spec.height)):
        raise BadParams(
            f"need 0 < min_side <= max_side <= min bin dimension; got "
            f"[{min_side},{max_side}] for bin {bin_spec.width}x{bin_spec.height}")
    rng = SplitMix64(seed)
    sizes = []
    for _ in range(n_items):
        side = rng.uniform_int(min_side, max_side)
        sizes.append((side, side))
    return make_instance(sizes, bin_spec)


def gen_dataset(seed: int, count: int = DEFAULT_COUNT, n_items: int = DEFAULT_N_ITEMS,
                min_side: int = DEFAULT_MIN_SIDE, max_side: int = DEFAULT_MAX_SIDE,
                bin_spec: BinSpec = DEFAULT_BIN) -> Dataset:
    if count < 1:
        raise BadParams("count must be >= 1")
    instances = tuple(
        gen_instance((seed + i) & MASK64, n_items, min_side, max_side, bin_spec)
        for i in range(count)
    )
    params = {
        "generator": GENERATOR_NAME,
        "count": count,
        "n_items": n_items,
        "min_side": min_side,
        "max_side": max_side,
        "bin": [bin_spec.width, bin_spec.height],
    }
    return Dataset(seed=seed, params=params, instances=instances)
