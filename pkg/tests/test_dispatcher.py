import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubeforge.basic import plain_cube
from cubeforge.dispatcher import (
    EXISTS,
    NOT_EXISTS,
    UNKNOWN,
    brute_force_search,
    construct,
    existence,
    search_problem,
)
from cubeforge.errors import BudgetExceeded, ProvablyNonexistent, Unsupported

import oracles


def two_size_partitions():
    return st.tuples(st.integers(2, 30), st.integers(1, 29), st.integers(1, 6), st.integers(1, 6)).filter(
        lambda t: t[1] < t[0]).map(lambda t: (t[0],) * t[2] + (t[1],) * t[3])


@pytest.mark.parametrize("parts,status,tag", [
    ((2, 2, 1), EXISTS, "Thm even-a"),
    ((4, 1, 1, 1), NOT_EXISTS, "Thm ab^(k-1)"),
    ((9, 9, 5), UNKNOWN, "open: a = 3 mod 6"),
    ((7, 7, 4), EXISTS, "Thm odd-a"),
    ((3, 1, 1), NOT_EXISTS, "Thm ab^(k-1)"),
    ((5,), EXISTS, "single block"),
    ((3, 3, 3, 3), EXISTS, "Thm a^k"),
    ((3, 2), NOT_EXISTS, "subcube bound"),
    ((3, 2, 1), UNKNOWN, "more than two part sizes"),
    ((5, 5, 5, 1), EXISTS, "Thm main result, u>=3"),
    ((9, 9, 1, 1), NOT_EXISTS, "Lemma a^2b^(k-2) bound"),
    ((5, 5, 3, 3), EXISTS, "Cor a<=(k-2)b"),
    ((7, 7, 2, 2), EXISTS, "Lemma greater k"),
    ((3, 1, 1, 1), EXISTS, "Thm ab^(k-1)"),
])
def test_verdicts(parts, status, tag):
    v = existence(parts)
    assert (v.status, v.justification) == (status, tag)


def test_verdict_text():
    assert str(existence((7, 7, 4))) == "Exists (Thm odd-a)"


def test_order_of_parts_is_irrelevant():
    assert existence((1, 2, 2)) == existence((2, 2, 1))


@given(two_size_partitions())
def test_exists_respects_two_large_parts_bound(parts):
    a, b = parts[0], parts[-1]
    k = len(parts)
    if parts.count(a) == 2 and k > 2 and existence(parts).status == EXISTS:
        assert a <= 2 * (k - 2) * b


@given(two_size_partitions())
def test_unknown_only_in_open_region(parts):
    a, b = parts[0], parts[-1]
    k = len(parts)
    if existence(parts).status == UNKNOWN:
        assert parts.count(a) == 2 and a % 6 == 3
        assert a < 2 * (k - 2) * b and 3 * (k - 2) * b < 2 * a


# --------------------------------------------------------------------------- construct


def test_construct_eight_eight_five():
    real = construct((8, 8, 5))
    assert oracles.is_normal_realization(real.cube, real.partition)


def test_construct_nonexistent_carries_verdict():
    with pytest.raises(ProvablyNonexistent) as info:
        construct((3, 1, 1))
    assert info.value.verdict.status == NOT_EXISTS


@pytest.mark.parametrize("parts", [(5, 5, 3, 3), (4, 4, 4, 2)])
def test_construct_citation_only(parts):
    with pytest.raises(Unsupported) as info:
        construct(parts)
    assert info.value.reason == "citation-only"


def test_construct_open_problem():
    with pytest.raises(Unsupported) as info:
        construct((9, 9, 5))
    assert info.value.reason == "open-problem"


def test_construct_oa_gap():
    with pytest.raises(Unsupported) as info:
        construct((24, 24, 13))
    assert info.value.reason == "OA-gap"


@pytest.mark.parametrize("parts", [(4,), (3, 3), (2, 2, 2, 2), (6, 6, 3, 3), (2, 2, 1, 1)])
def test_construct_other_routes(parts):
    real = construct(parts)
    assert real.partition == tuple(sorted(parts, reverse=True))
    assert oracles.is_normal_realization(real.cube, real.partition)


def test_unsupported_reason_checked():
    with pytest.raises(ValueError):
        Unsupported("because")


# --------------------------------------------------------------------------- search


def test_search_two_singletons():
    real = brute_force_search((1, 1))
    assert real.cube[0, 0, 0] == 1 and real.cube[1, 1, 1] == 2


def test_search_finds_fig1_partition():
    real = brute_force_search((2, 2, 1))
    assert oracles.is_normal_realization(real.cube, real.partition)


def test_search_refutes_three_one_one():
    assert brute_force_search((3, 1, 1)) is None


def test_search_budget():
    with pytest.raises(BudgetExceeded) as info:
        brute_force_search((2, 2, 2), budget=3)
    assert info.value.nodes >= 3


def test_seeded_blocks():
    fixed, allowed = search_problem((3, 2, 1))
    assert np.array_equal(fixed[:3, :3, :3], plain_cube(3))
    assert np.array_equal(fixed[3:5, 3:5, 3:5], plain_cube(2, 3))
    assert (allowed[:3, :3, :3] == 0b111).all()
    assert (allowed[5, 5, 5] == 0b100000)


def test_large_block_gets_reduced_form():
    fixed, allowed = search_problem((4, 1))
    assert fixed[0, 0, :4].tolist() == [1, 2, 3, 4]
    assert fixed[1:4, 1:4, 1:4].sum() == 0
    assert (allowed[:4, :4, :4] == 0b1111).all()


@pytest.mark.parametrize("n,count", [(2, 2), (3, 24)])
def test_every_small_cube_is_isotopic_to_plain_cube(n, count):
    # justifies fixing blocks of order <= 3 to the cyclic cube during search
    cubes = oracles.all_latin_cubes(n)
    assert len(cubes) == count
    orbit = oracles.isotopy_orbit(plain_cube(n))
    assert {oracles.cube_key(c) for c in cubes} <= orbit


@pytest.mark.parametrize("parts", [(1, 1), (2, 1), (1, 1, 1), (2, 2), (2, 1, 1), (3, 1), (2, 2, 1), (3, 1, 1),
                                   (1, 1, 1, 1, 1), (4, 1), (3, 2), (2, 1, 1, 1)])
def test_search_agrees_with_verdict_small(parts):
    v = existence(parts)
    found = brute_force_search(parts)
    assert (found is not None) == (v.status == EXISTS)
