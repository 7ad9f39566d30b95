from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeforge.basic import plain_cube
from cubeforge.catalog import load_catalog
from cubeforge.errors import FormatError
from cubeforge.formats import (
    dumps_json,
    dumps_lcube,
    dumps_oa,
    loads_json,
    loads_lcube,
    loads_oa,
    read_cube_file,
    write_cube_file,
)
from cubeforge.oa import oa_prime_power

FIG1_PATH = Path(__file__).parent / "data" / "fig1.lcube"


def partial_cubes(max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.integers(0, n), min_size=n ** 3, max_size=n ** 3).map(
            lambda vals: np.array(vals).reshape(n, n, n)))


def test_exact_layout():
    text = dumps_lcube(plain_cube(2), (1, 1), [(1, 1, 1)])
    assert text == "lcube 1\norder 2\npartition 1 1\nt 1 1 1\n\n1 2\n2 1\n\n2 1\n1 2\n"


def test_empty_cells_written_as_dots():
    c = np.zeros((2, 2, 2), dtype=int)
    c[0, 1, 1] = 2
    text = dumps_lcube(c)
    assert text.endswith("\n\n. .\n. .\n\n. 2\n. .\n")
    assert np.array_equal(loads_lcube(text).cube, c)


def test_fig1_file_round_trips_byte_for_byte():
    text = FIG1_PATH.read_text()
    data = loads_lcube(text)
    assert dumps_lcube(data.cube, data.partition, data.transversal) == text


@settings(max_examples=60, deadline=None)
@given(partial_cubes())
def test_lcube_round_trip(cube):
    text = dumps_lcube(cube)
    data = loads_lcube(text)
    assert np.array_equal(data.cube, cube)
    assert dumps_lcube(data.cube) == text


@settings(max_examples=60, deadline=None)
@given(partial_cubes())
def test_json_round_trip(cube):
    text = dumps_json(cube)
    data = loads_json(text)
    assert np.array_equal(data.cube, cube)
    assert dumps_json(data.cube) == text


def test_json_cells_layer_major():
    c = plain_cube(2)
    doc = dumps_json(c)
    # layer 1 rows then layer 2 rows
    assert '"cells":[1,2,2,1,2,1,1,2]' in doc


def test_json_nulls():
    c = np.zeros((1, 1, 1), dtype=int)
    assert '"cells":[null]' in dumps_json(c)


def test_pack_transversal_survives():
    data = loads_lcube(dumps_lcube(load_catalog("lc-2-2-1").cube, (2, 2, 1),
                                   load_catalog("pair-2-2-1/2-2-2").transversal))
    assert len(data.transversal) == 4
    assert data.partition == (2, 2, 1)


def test_reader_accepts_runs_of_spaces():
    text = "lcube 1\norder 1\n\n  1 \n"
    assert loads_lcube(text).cube.tolist() == [[[1]]]


@pytest.mark.parametrize("text", [
    "lcube 2\norder 1\n\n1\n",
    "lcube 1\norder 1\n\n1",
    "lcube 1\norder x\n\n1\n",
    "lcube 1\norder 1\n\n2\n",
    "lcube 1\norder 1\n\n1 1\n",
    "lcube 1\norder 2\n\n1 2\n2 1\n",
    "lcube 1\norder 1\npartition 2\n\n1\n",
    "lcube 1\norder 1\nt 1 1 2\n\n1\n",
    "lcube 1\norder 1\nbogus\n\n1\n",
    "lcube 1\norder 1\n\n?\n",
])
def test_malformed_lcube(text):
    with pytest.raises(FormatError):
        loads_lcube(text)


@pytest.mark.parametrize("text", [
    "{", '{"order": 1}', '{"order": 2, "cells": [1]}', '{"order": 1, "cells": [2]}',
    '{"order": 1, "cells": [true]}', '{"order": 1, "cells": [1], "partition": [2]}',
])
def test_malformed_json(text):
    with pytest.raises(FormatError):
        loads_json(text)


def test_file_helpers_pick_format(tmp_path):
    cube = plain_cube(3)
    for name in ("c.lcube", "c.json"):
        path = tmp_path / name
        write_cube_file(path, cube, (3,))
        data = read_cube_file(path)
        assert np.array_equal(data.cube, cube) and data.partition == (3,)
    assert (tmp_path / "c.json").read_text().startswith("{")


def test_oa_table_round_trip():
    oa = oa_prime_power(4)
    text = dumps_oa(oa.array, 4)
    arr, t, n, lam = loads_oa(text)
    assert (t, n, lam) == (3, 4, 1)
    assert np.array_equal(arr, oa.array)
    assert dumps_oa(arr, n) == text


@pytest.mark.parametrize("text", ["oa 3 5\n", "xx 3 5 4 1\n", "oa 3 2 4 1\n1 2 3\n"])
def test_malformed_oa(text):
    with pytest.raises(FormatError):
        loads_oa(text)
