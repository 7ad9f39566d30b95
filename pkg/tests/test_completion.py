from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeforge.basic import cube_with_subcube, move_corner_subcube, square_with_subsquare
from cubeforge.completion import (
    complete_right_corner_channel,
    equitable_coloring_regular,
    extend_rectangle,
    fill_back_entries,
    max_bipartite_matching,
    ryser_deficient,
)
from cubeforge.errors import ForcedUnsaturable, HypothesisViolated, NotRegular, RyserViolated

import oracles


def random_rectangle(rng, r, s, n, tries=5000):
    """A random r x s latin rectangle on [n], built row by row with restarts."""
    for _ in range(tries):
        rect = []
        for _ in range(r):
            row = []
            for j in range(s):
                used = set(row) | {prev[j] for prev in rect}
                options = [v for v in range(1, n + 1) if v not in used]
                if not options:
                    break
                row.append(int(rng.choice(options)))
            if len(row) < s:
                break
            rect.append(row)
        if len(rect) == r:
            return np.array(rect)
    return None


def ryser_ok(rect, n):
    r, s = rect.shape
    counts = Counter(rect.ravel().tolist())
    return all(counts.get(x, 0) >= r + s - n for x in range(1, n + 1))


def is_latin_rectangle(rect, n):
    rect = np.asarray(rect)
    return (all(len(set(row)) == len(row) for row in rect.tolist())
            and all(len(set(col)) == len(col) for col in rect.T.tolist())
            and rect.min() >= 1 and rect.max() <= n)


# --------------------------------------------------------------------------- matching


def test_complete_bipartite_matching():
    adj = {u: range(5) for u in range(5)}
    m = max_bipartite_matching(adj)
    assert len(m) == 5 and len(set(m.values())) == 5


def test_empty_relation():
    assert max_bipartite_matching({}) == {}


def test_forced_isolated_vertex():
    adj = {0: [0, 1], 1: [0, 1], 2: [1]}
    with pytest.raises(ForcedUnsaturable):
        max_bipartite_matching(adj, forced=[2])


def test_forced_vertex_is_covered():
    # a greedy first match would leave right vertex 2 free
    adj = {0: [0, 2], 1: [0]}
    m = max_bipartite_matching(adj, forced=[2])
    assert set(m.values()) == {0, 2}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sets(st.integers(0, 5), max_size=6), min_size=1, max_size=6))
def test_matching_is_maximum(neigh):
    adj = {u: sorted(vs) for u, vs in enumerate(neigh)}
    m = max_bipartite_matching(adj)
    assert len(set(m.values())) == len(m)
    assert all(v in adj[u] for u, v in m.items())
    # brute force maximum via exhaustive assignment
    best = 0

    def go(u, used, size):
        nonlocal best
        if u == len(neigh):
            best = max(best, size)
            return
        go(u + 1, used, size)
        for v in adj[u]:
            if v not in used:
                go(u + 1, used | {v}, size + 1)

    go(0, frozenset(), 0)
    assert len(m) == best


# --------------------------------------------------------------------------- rectangles


def test_full_square_unchanged():
    sq = square_with_subsquare(5, 0)
    assert np.array_equal(extend_rectangle(sq, 5), sq)


def test_one_by_one():
    out = extend_rectangle(np.array([[1]]), 2, to_square=True)
    assert out.tolist() == [[1, 2], [2, 1]]


def test_ryser_violation_reported():
    with pytest.raises(RyserViolated) as info:
        extend_rectangle(np.array([[1, 2], [2, 1]]), 3)
    assert info.value.symbol == 3
    assert info.value.count == 0 and info.value.required == 1


@pytest.mark.parametrize("seed", range(40))
def test_extension_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    r, s = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
    rect = random_rectangle(rng, r, s, n)
    if rect is None:
        pytest.skip("no rectangle drawn")
    completable = oracles.rectangle_completable(rect.tolist(), n)
    assert completable == ryser_ok(rect, n)
    if completable:
        out = extend_rectangle(rect, n, to_square=True)
        assert np.array_equal(out[:r, :s], rect)
        assert is_latin_rectangle(out, n) and out.shape == (n, n)
    else:
        with pytest.raises(RyserViolated):
            extend_rectangle(rect, n)


@pytest.mark.parametrize("seed", range(30))
def test_extension_larger_orders(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(6, 13))
    r, s = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
    rect = random_rectangle(rng, r, s, n)
    if rect is None:
        pytest.skip("no rectangle drawn")
    if ryser_ok(rect, n):
        out = extend_rectangle(rect, n)
        assert np.array_equal(out[:, :s], rect)
        assert is_latin_rectangle(out, n) and out.shape == (r, n)
    else:
        want = min(x for x, _, _ in ryser_deficient(rect, n))
        with pytest.raises(RyserViolated) as info:
            extend_rectangle(rect, n)
        assert info.value.symbol == want


# --------------------------------------------------------------------------- corner channel


def channel_box(n, s, r):
    """Layers are symbol shifts of a square with an s x s corner subsquare; the band is erased."""
    sq = square_with_subsquare(n, s)
    perm = [x + n - s if x <= s else x - s for x in range(1, n + 1)]
    moved = np.empty_like(sq)
    for i in range(n):
        for j in range(n):
            moved[perm[i] - 1, perm[j] - 1] = perm[sq[i, j] - 1]
    box = np.stack([(moved - 1 + k) % n + 1 for k in range(r)], axis=2)
    box[n - s:, n - s:, :] = 0
    return box


@pytest.mark.parametrize("n,s,r", [(7, 3, 4), (8, 4, 4), (9, 2, 6), (10, 5, 3), (6, 3, 6)])
def test_corner_channel_completes(n, s, r):
    box = channel_box(n, s, r)
    out = complete_right_corner_channel(box, s)
    assert (out != 0).all()
    assert np.array_equal(out[box != 0], box[box != 0])
    for k in range(r):
        layer = out[:, :, k]
        assert all(len(set(row)) == n for row in layer.tolist())
        assert all(len(set(col)) == n for col in layer.T.tolist())
        outside = set(box[n - s, : n - s, k].tolist())
        assert set(out[n - s:, n - s:, k].ravel().tolist()) == set(range(1, n + 1)) - outside
    for i in range(n):
        for j in range(n):
            assert len(set(out[i, j, :].tolist())) == r


def test_corner_channel_nothing_empty():
    box = channel_box(6, 3, 3)
    full = complete_right_corner_channel(box, 3)
    assert np.array_equal(complete_right_corner_channel(full, 0), full)


def test_corner_channel_unequal_sets():
    box = channel_box(7, 3, 4)
    row = box[5, :4, 0].copy()
    box[5, :4, 0] = box[5, :4, 1]
    box[5, :4, 1] = row
    with pytest.raises(HypothesisViolated):
        complete_right_corner_channel(box, 3)


def test_corner_channel_filled_outside_band_required():
    box = channel_box(7, 3, 4)
    box[0, 0, 0] = 0
    with pytest.raises(HypothesisViolated):
        complete_right_corner_channel(box, 3)


# --------------------------------------------------------------------------- colouring


def random_regular(rng, n, d):
    edges = []
    for _ in range(d):
        perm = rng.permutation(n)
        edges += [(u, int(perm[u])) for u in range(n)]
    return edges


def test_single_colour():
    edges = [(0, 1), (1, 0)]
    assert equitable_coloring_regular(edges, 1) == [1, 1]


@pytest.mark.parametrize("d", [1, 2, 5])
def test_complete_bipartite_colouring(d):
    edges = [(u, v) for u in range(d) for v in range(d)]
    colours = equitable_coloring_regular(edges, d)
    for c in range(1, d + 1):
        chosen = [e for e, col in zip(edges, colours) if col == c]
        assert sorted(u for u, _ in chosen) == list(range(d))
        assert sorted(v for _, v in chosen) == list(range(d))


@pytest.mark.parametrize("seed", range(20))
def test_random_multigraph_colouring(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 9))
    edges = random_regular(rng, 12, d)
    colours = equitable_coloring_regular(edges, d, 12, 12)
    left = Counter((u, c) for (u, _), c in zip(edges, colours))
    right = Counter((v, c) for (_, v), c in zip(edges, colours))
    assert set(left.values()) == {1} and len(left) == 12 * d
    assert set(right.values()) == {1} and len(right) == 12 * d


def test_not_regular():
    with pytest.raises(NotRegular):
        equitable_coloring_regular([(0, 0), (0, 1), (1, 1)], 2)


# --------------------------------------------------------------------------- back entries


def back_box(r):
    n = 2 * r
    cube = cube_with_subcube(n, r)
    box = cube[:r, :r, :].copy()
    box[:, :, r:] = 0
    return box, n


@pytest.mark.parametrize("r", [2, 3, 5])
def test_fill_back_entries(r):
    box, n = back_box(r)
    cells = [(i, j) for i in range(1, r + 1) for j in range(1, r + 1)]
    out = fill_back_entries(box, cells, range(r + 1, n + 1))
    assert np.array_equal(out[:, :, :r], box[:, :, :r])
    for i in range(r):
        for j in range(r):
            assert sorted(out[i, j, r:].tolist()) == list(range(r + 1, n + 1))
    for k in range(r, n):
        layer = out[:, :, k]
        assert all(len(set(row)) == r for row in layer.tolist())
        assert all(len(set(col)) == r for col in layer.T.tolist())


def test_fill_back_nothing_to_do():
    cube = move_corner_subcube(cube_with_subcube(4, 2), 2)
    box = cube[:4, :4, :]
    assert np.array_equal(fill_back_entries(box, [], []), box)


def test_fill_back_unequal_degrees():
    box, n = back_box(3)
    cells = [(i, j) for i in range(1, 4) for j in range(1, 4)][1:]
    box[0, 0, 3:] = [4, 5, 6]
    with pytest.raises(HypothesisViolated):
        fill_back_entries(box, cells, range(4, 7))
