import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import P, brute_global, brute_quadrant, random_points
from skydiag.core import Dataset, DimensionError, orthants
from skydiag.grid import build_cell_grid, merge_equal_results, representative
from skydiag.quadrant import (global_cells, global_partition, neighbour_multiset, qbase, qgraph, qscan,
                              qsweep, quadrant_partition)

pts2 = st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=1, max_size=14)
pts3 = st.lists(st.tuples(*[st.integers(0, 5)] * 3), min_size=1, max_size=10)


def _same(a, b):
    return all(a[idx] == b[idx] for idx in np.ndindex(*a.shape))


def test_first_cell_is_first_layer(hotels):
    grid = build_cell_grid(hotels)
    for algo in (qbase, qgraph, qscan):
        assert algo(hotels, grid)[0, 0] == P(1, 6, 11)


def test_graph_step_across_p6(hotels):
    res = qgraph(hotels, build_cell_grid(hotels))
    assert res[1, 0] == P(6, 11)
    assert res[2, 0] == P(3, 11)


@pytest.mark.parametrize("cell,labels", [
    ((4, 0), (8, 10)), ((4, 1), (8, 10)), ((3, 1), (8, 10)), ((1, 2), (6, 8, 9)), ((2, 2), (3, 8, 9)),
    ((1, 3), (6, 8)), ((2, 3), (3, 8)), ((4, 3), (8,)), ((6, 6), (5,)), ((0, 1), (1, 6, 8, 10)),
])
def test_running_example_cells(hotels, cell, labels):
    res = qscan(hotels, build_cell_grid(hotels))
    assert res[cell] == P(*labels)


def test_scan_example_recurrence(hotels):
    res = qscan(hotels, build_cell_grid(hotels))
    combo = neighbour_multiset(res, (1, 2))
    assert +combo == Counter(P(6, 8, 9))
    assert res[1, 2] == P(6, 8, 9)


def test_literal_neighbour_identity_fails_without_region_a():
    # cell (0, 0): right neighbour {a}, upper {b}, diagonal {c}; the signed sum
    # leaves c with multiplicity -1 although the true skyline is {a, b}
    ds = Dataset.from_points([(2, 1), (1, 2), (2, 2)])
    res = qbase(ds, build_cell_grid(ds))
    combo = neighbour_multiset(res, (0, 0))
    assert combo == Counter({0: 1, 1: 1, 2: -1})
    assert res[0, 0] == (0, 1)
    assert tuple(sorted(+combo)) == res[0, 0]
    assert qscan(ds, build_cell_grid(ds))[0, 0] == (0, 1)


def test_orthant_results_match_brute_force(hotels):
    grid = build_cell_grid(hotels)
    scaled = hotels.coords * 4
    for sign in orthants(2):
        for algo in (qbase, qgraph, qscan):
            res = algo(hotels, grid, sign)
            for cell in grid.cells():
                assert res[cell] == brute_quadrant(scaled, representative(grid, cell), sign)


def test_global_cell_of_query(hotels):
    grid = build_cell_grid(hotels)
    res = global_cells(hotels, grid)
    assert res[grid.locate((10, 80))] == P(3, 6, 8, 10, 11)
    assert global_partition(hotels).lookup((10, 80)) == P(3, 6, 8, 10, 11)


def test_sweep_chain_example(hotels):
    part = qsweep(hotels)
    chain = [c for c in part.chains.values() if c and c[0] == (16 * 4, 90 * 4)]
    assert chain == [[(64, 360), (48, 360), (48, 280), (56, 280), (56, -math.inf), (64, -math.inf)]]


def test_sweep_single_point_two_pieces():
    part = qsweep(Dataset.from_points([(3, 3)]))
    assert part.n_pieces == 2
    assert sorted(part.results) == [(), (0,)]


def test_sweep_rejects_3d():
    with pytest.raises(DimensionError):
        qsweep(Dataset.from_points([(1, 2, 3)]))


def test_empty_dataset():
    ds = Dataset.from_points([])
    grid = build_cell_grid(ds)
    for algo in (qbase, qgraph, qscan):
        assert algo(ds, grid)[0, 0] == ()
    assert qsweep(ds).n_pieces == 1


def test_threads_do_not_change_results(rng):
    ds = Dataset(random_points(rng, 30, s=20))
    grid = build_cell_grid(ds)
    assert _same(qbase(ds, grid), qbase(ds, grid, threads=4))


def test_unknown_backend(hotels):
    with pytest.raises(ValueError):
        quadrant_partition(hotels, "qfoo")
    with pytest.raises(ValueError):
        qbase(hotels, build_cell_grid(hotels), orthant=(1, 0))


@given(pts2)
def test_all_algorithms_agree_2d(pts):
    ds = Dataset.from_points(pts)
    grid = build_cell_grid(ds)
    base = qbase(ds, grid)
    assert _same(base, qgraph(ds, grid))
    assert _same(base, qscan(ds, grid))
    assert qsweep(ds, grid) == merge_equal_results(grid, base, "quadrant", ds)


@given(pts2)
def test_global_matches_brute_force(pts):
    ds = Dataset.from_points(pts)
    grid = build_cell_grid(ds)
    res = global_cells(ds, grid, "qgraph")
    for cell in grid.cells():
        assert res[cell] == brute_global(ds.coords * 4, representative(grid, cell))


@given(pts3)
def test_all_algorithms_agree_3d(pts):
    ds = Dataset.from_points(pts)
    grid = build_cell_grid(ds)
    for sign in ((1, 1, 1), (-1, 1, -1)):
        base = qbase(ds, grid, sign)
        assert _same(base, qgraph(ds, grid, sign))
        assert _same(base, qscan(ds, grid, sign))


@given(pts2)
def test_positive_part_identity_2d(pts):
    ds = Dataset.from_points(pts)
    grid = build_cell_grid(ds)
    res = qbase(ds, grid)
    ranks = {tuple(r) for r in grid.point_ranks(ds).tolist()}
    for cell in grid.cells():
        if any(c == s - 1 for c, s in zip(cell, grid.shape)) or cell in ranks:
            continue
        combo = neighbour_multiset(res, cell)
        assert max(combo.values(), default=0) <= 1
        assert tuple(sorted(+combo)) == res[cell]


@given(pts2)
def test_sweep_faces_are_connected_and_distinct(pts):
    part = qsweep(Dataset.from_points(pts))
    # every piece is one face; the outer face is the only one without a chain
    assert sum(1 for c in part.chains.values() if c is None) == 1
    assert len(part.chains) == part.n_pieces
    assert part.results[part.class_of[tuple(s - 1 for s in part.grid.shape)]] == ()
