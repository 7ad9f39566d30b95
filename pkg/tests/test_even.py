import numpy as np
import pytest

from cubeforge.catalog import load_catalog
from cubeforge.core import PairedPack
from cubeforge.errors import ExtensionInvalid, OutOfTheoremRange, PackInvalid, UnsupportedOrder
from cubeforge.even import (
    construct_even,
    in_even_range,
    paired_assembly,
    paired_construction,
    paired_route,
    plan_even,
)
from cubeforge.oa import ExtensionPair, extension_from_oa, oa_for_order

import oracles

PACK_221 = "pair-2-2-1/2-2-2"
PACK_332 = "pair-3-3-2/3-3-3"


@pytest.mark.parametrize("pack,t,c,partition", [
    (PACK_221, 4, 0, (8, 8, 4)),
    (PACK_221, 4, 1, (8, 8, 5)),
    (PACK_332, 5, 2, (15, 15, 12)),
    ("pair-4-4-2/4-4-3", 5, 3, (20, 20, 13)),
    ("pair-4-4-3/4-4-4", 4, 4, (16, 16, 16)),
])
def test_paired_construction(pack, t, c, partition):
    real = paired_construction(load_catalog(pack), extension_from_oa(oa_for_order(t), c))
    assert real.partition == partition
    assert oracles.is_normal_realization(real.cube, real.partition)


@pytest.mark.parametrize("pack,t,c", [(PACK_221, 4, 2), (PACK_332, 4, 3), ("pair-4-4-3/4-4-4", 5, 1)])
def test_every_cell_written_once(pack, t, c):
    grid = paired_assembly(load_catalog(pack), extension_from_oa(oa_for_order(t), c))
    assert grid.holes == 0 and grid.double_writes == 0
    assert set(grid.sources) == {"case 1", "case 2", "case 3", "case 4"}
    assert sum(grid.sources.values()) == grid.n ** 3


def test_invalid_pack_rejected():
    pack = load_catalog(PACK_221)
    broken = PairedPack(pack.first, pack.second, pack.transversal[:-1] + ((1, 1, 1),))
    with pytest.raises(PackInvalid):
        paired_assembly(broken, extension_from_oa(oa_for_order(4), 1))


def test_invalid_extension_rejected():
    ext = extension_from_oa(oa_for_order(4), 1)
    second = ext.second.copy()
    second[4, 4, 0] = 1
    with pytest.raises(ExtensionInvalid):
        paired_assembly(load_catalog(PACK_221), ExtensionPair(ext.first, second, 1))


def test_eight_five():
    real = construct_even(8, 5)
    assert real.order == 21 and real.partition == (8, 8, 5)
    assert oracles.is_normal_realization(real.cube, real.partition)


def test_twelve_seven_is_catalog():
    assert construct_even(12, 7) == load_catalog("lc-12-12-7")


@pytest.mark.parametrize("a,b", [(9, 5), (8, 3), (7, 5), (10, 11)])
def test_out_of_range(a, b):
    assert not in_even_range(a, b)
    with pytest.raises(OutOfTheoremRange):
        construct_even(a, b)


@pytest.mark.parametrize("a,b,plan", [
    (6, 5, ("catalog", "lc-6-6-5")),
    (10, 10, ("diagonal", 10)),
    (12, 10, ("inflate", (6, 5), 2)),
    (24, 14, ("inflate", (12, 7), 2)),
    (8, 6, ("inflate", (4, 3), 2)),
    (12, 11, ("paired", PACK_332, 4, 3)),
    (20, 13, ("paired", "pair-4-4-2/4-4-3", 5, 3)),
    (20, 17, ("paired", "pair-4-4-3/4-4-4", 5, 2)),
    (15, 11, ("paired", PACK_332, 5, 1)),
    (14, 9, ("paired", PACK_221, 7, 2)),
])
def test_routing(a, b, plan):
    assert plan_even(a, b) == plan


@pytest.mark.parametrize("a,b", [(24, 13), (30, 17)])
def test_declared_oa_gap(a, b):
    with pytest.raises(UnsupportedOrder):
        plan_even(a, b)


def test_inflation_from_odd_base():
    # (10, 6) shares the factor 2 with (5, 3), an odd-path instance
    assert plan_even(10, 6) == ("inflate", (5, 3), 2)
    real = construct_even(10, 6)
    assert real.check().valid


def test_route_parameters():
    assert paired_route(16, 9) == (PACK_221, 8, 1)
    assert paired_route(28, 22) == ("pair-4-4-3/4-4-4", 7, 1)
    assert paired_route(21, 14) == (PACK_332, 7, 0)
    assert paired_route(6, 4) is None


@pytest.mark.parametrize("a,b", [(14, 7), (16, 12), (18, 10), (20, 20)])
def test_symbols_stay_in_blocks(a, b):
    cube = construct_even(a, b).cube
    for lo, hi in ((0, a), (a, 2 * a), (2 * a, 2 * a + b)):
        block = cube[lo:hi, lo:hi, lo:hi]
        assert block.min() == lo + 1 and block.max() == hi
    assert oracles.is_latin_cube(cube)
