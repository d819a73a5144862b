import pytest

from packbench.baselines import (ffdh_strips, pack_fff, pack_hff,
                                 pack_strips_ffd)
from packbench.errors import ItemTooLarge, ItemTooWide, StripTooTall
from packbench.metrics import area_lower_bound, bins_used
from packbench.model import BinSpec, Item, make_instance
from packbench.validate import validate

from conftest import fuzz_instance

BIN = BinSpec(200, 100)


def items_of(sizes):
    return [Item(i, w, h) for i, (w, h) in enumerate(sizes)]


# --- ffdh_strips ---

def test_ffdh_four_squares_two_strips():
    strips = ffdh_strips(items_of([(5, 5)] * 4), strip_width=10)
    assert len(strips) == 2
    assert [[it.index for it, _ in s.placements] for s in strips] == [[0, 1], [2, 3]]
    assert all(s.height == 5 for s in strips)


def test_ffdh_first_fit_rule():
    strips = ffdh_strips(items_of([(4, 9), (5, 7), (6, 3)]), strip_width=10)
    assert [s.height for s in strips] == [9, 3]
    first = strips[0].placements
    assert [(it.index, x) for it, x in first] == [(0, 0), (1, 4)]
    assert strips[1].placements[0][0].index == 2


def test_ffdh_empty():
    assert ffdh_strips([], strip_width=10) == []


def test_ffdh_item_too_wide():
    with pytest.raises(ItemTooWide):
        ffdh_strips(items_of([(11, 5)]), strip_width=10)


def test_ffdh_strip_heights_non_increasing():
    for seed in range(50):
        inst = fuzz_instance(seed, max_items=60)
        strips = ffdh_strips(inst.items, inst.bin.width)
        heights = [s.height for s in strips]
        assert heights == sorted(heights, reverse=True)


# --- pack_strips_ffd ---

def test_ffd_strips_two_bins():
    strips = ffdh_strips(items_of([(4, 9), (5, 7), (6, 3)]), strip_width=10)
    sol = pack_strips_ffd(strips, BinSpec(10, 10))
    assert bins_used(sol) == 2


def test_ffd_strips_stacked():
    strips = ffdh_strips(items_of([(10, 5), (10, 5)]), strip_width=10)
    sol = pack_strips_ffd(strips, BinSpec(10, 10))
    assert bins_used(sol) == 1
    ys = sorted(p.y for p in sol.bins[0].placements)
    assert ys == [0.0, 5.0]


def test_ffd_no_strips():
    assert pack_strips_ffd([], BIN).bins == ()


def test_ffd_strip_too_tall():
    strips = ffdh_strips(items_of([(5, 11)]), strip_width=10)
    with pytest.raises(StripTooTall):
        pack_strips_ffd(strips, BinSpec(10, 10))


# --- pack_hff ---

def test_hff_single_item():
    sol = pack_hff(make_instance([(50, 50)], BIN))
    assert bins_used(sol) == 1
    p = sol.bins[0].placements[0]
    assert (p.x, p.y) == (0.0, 0.0)


def test_hff_four_large_squares():
    sol = pack_hff(make_instance([(100, 100)] * 4, BIN))
    assert bins_used(sol) == 2
    assert all(len(b.placements) == 2 for b in sol.bins)


# --- pack_fff ---

def test_fff_single_item():
    sol = pack_fff(make_instance([(50, 50)], BIN))
    assert bins_used(sol) == 1


def test_fff_two_items_share_level():
    sol = pack_fff(make_instance([(100, 100), (100, 100)], BIN))
    assert bins_used(sol) == 1
    coords = sorted((p.x, p.y) for p in sol.bins[0].placements)
    assert coords == [(0.0, 0.0), (100.0, 0.0)]


def test_fff_item_too_large():
    with pytest.raises(ItemTooLarge):
        pack_fff(make_instance([(201, 50)], BIN))


def test_fff_reuses_earlier_bins():
    # two tall levels fill bin 1; a short item must revisit bin 1's free level
    inst = make_instance([(200, 60), (200, 40), (150, 40), (40, 35)], BIN)
    sol = pack_fff(inst)
    assert validate(inst, sol) == []
    # item 3 (40x35) fits level 2 of bin 0 next to the 150-wide item
    assert bins_used(sol) == 2


# --- shared properties ---

@pytest.mark.parametrize("algo", [pack_fff, pack_hff])
def test_baselines_validator_clean_and_bounded(algo):
    for seed in range(150):
        inst = fuzz_instance(seed, max_items=80)
        sol = algo(inst)
        assert validate(inst, sol) == [], f"seed {seed}"
        used = bins_used(sol)
        assert area_lower_bound(inst) <= used <= max(inst.n, 0) or inst.n == 0


@pytest.mark.parametrize("algo", [pack_fff, pack_hff])
def test_baselines_deterministic(algo):
    from packbench.model import encode_solution
    inst = fuzz_instance(7, max_items=120)
    assert encode_solution(algo(inst)) == encode_solution(algo(inst))
