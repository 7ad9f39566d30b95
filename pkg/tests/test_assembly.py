import numpy as np
import pytest

from cubeforge.assembly import WriteOnceGrid
from cubeforge.basic import plain_cube
from cubeforge.errors import AssemblyOverlap


def test_counts_holes_and_sources():
    g = WriteOnceGrid(3)
    assert g.holes == 27
    g.put((slice(0, 2),) * 3, np.ones((2, 2, 2)), "block")
    assert g.holes == 19 and g.sources == {"block": 8}
    assert g.double_writes == 0


def test_zero_values_are_not_written():
    g = WriteOnceGrid(2)
    vals = np.zeros((2, 2, 2))
    vals[0, 0, 0] = 1
    g.put((slice(None),) * 3, vals, "one")
    g.put((slice(None),) * 3, np.where(vals == 0, 2, 0), "rest")
    assert g.holes == 0


def test_second_write_raises():
    g = WriteOnceGrid(2)
    g.put((0, 0, 0), 1, "first")
    with pytest.raises(AssemblyOverlap):
        g.put((slice(None), 0, 0), np.array([2, 2]), "second")


def test_mask_limits_write():
    g = WriteOnceGrid(2)
    mask = np.zeros((2, 2, 2), dtype=bool)
    mask[1, 1, 1] = True
    g.put((slice(None),) * 3, np.full((2, 2, 2), 2), "masked", where=mask)
    assert g.holes == 7 and g.cube[1, 1, 1] == 2


def test_fill_empty_must_agree():
    g = WriteOnceGrid(3)
    full = plain_cube(3)
    g.put((0, 0, 0), full[0, 0, 0], "seed")
    g.fill_empty(full, "rest")
    assert g.holes == 0 and np.array_equal(g.cube, full)
    h = WriteOnceGrid(3)
    h.put((0, 0, 0), 3, "seed")
    with pytest.raises(AssemblyOverlap):
        h.fill_empty(full, "rest")
