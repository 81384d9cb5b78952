import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import P, brute_dynamic
from skydiag.core import Dataset
from skydiag.dynamic import dbase, dscan, dsubset, dynamic_partition
from skydiag.grid import build_cell_grid, build_subcell_grid, containing_cell, representative
from skydiag.quadrant import global_cells

pts2 = st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), min_size=1, max_size=8)
pts3 = st.lists(st.tuples(*[st.integers(0, 6)] * 3), min_size=1, max_size=5)


def _same(a, b):
    return all(a[idx] == b[idx] for idx in np.ndindex(*a.shape))


def _all_three(ds):
    sub = build_subcell_grid(ds)
    cells = build_cell_grid(ds)
    glob = global_cells(ds, cells)
    return sub, cells, glob, dbase(ds, sub), dsubset(ds, sub, glob, cells), dscan(ds, sub)


def test_subcell_figure_values(four):
    sub, cells, glob, base, subset, scan = _all_three(four)
    for res in (base, subset, scan):
        assert res[4, 2] == P(3)
        assert res[4, 1] == P(3, 4)
    assert set(scan[3, 1]) <= set(glob[containing_cell(cells, sub, (3, 1))])
    assert containing_cell(cells, sub, (3, 1)) == (1, 1)
    # the step from SC_{4,2} down to SC_{4,1} crosses the p3/p4 bisector
    assert set(scan[4, 1]) <= set(scan[4, 2]) | set(sub.contributor_ids(1, 1))


def test_running_example_query(hotels):
    assert dynamic_partition(hotels).lookup((10, 80)) == P(6, 11)
    assert dynamic_partition(hotels, "dbase").lookup((10.5 * 4, 80 * 4 + 1), scaled=True) == \
        brute_dynamic(hotels.coords * 4, (42, 321))


def test_single_point_every_subcell():
    ds = Dataset.from_points([(4, 7)])
    for res in _all_three(ds)[3:]:
        assert all(r == (0,) for r in res.flat)


def test_subset_degenerates_when_global_is_everything():
    ds = Dataset.from_points([(0, 3), (1, 2), (2, 1), (3, 0)])
    sub, cells, glob, base, subset, _ = _all_three(ds)
    assert glob[0, 0] == (0, 1, 2, 3)
    assert _same(base, subset)


def test_threads_do_not_change_results(hotels):
    sub = build_subcell_grid(hotels)
    assert _same(dbase(hotels, sub), dbase(hotels, sub, threads=3))


def test_unknown_algorithm(hotels):
    with pytest.raises(ValueError):
        dynamic_partition(hotels, "dfoo")


@given(pts2)
def test_three_algorithms_agree_with_definition(pts):
    ds = Dataset.from_points(pts)
    sub, cells, glob, base, subset, scan = _all_three(ds)
    scaled = ds.coords * 4
    for cell in sub.cells():
        ref = brute_dynamic(scaled, representative(sub, cell))
        assert base[cell] == subset[cell] == scan[cell] == ref
        # the subset law
        assert set(ref) <= set(glob[containing_cell(cells, sub, cell)])


@given(pts2)
def test_contributor_completeness(pts):
    ds = Dataset.from_points(pts)
    sub = build_subcell_grid(ds)
    res = dscan(ds, sub)
    for i, j in sub.cells():
        if i + 1 < sub.shape[0]:
            diff = set(res[i, j]) ^ set(res[i + 1, j])
            assert diff <= set(sub.contributor_ids(0, i))
        if j + 1 < sub.shape[1]:
            diff = set(res[i, j]) ^ set(res[i, j + 1])
            assert diff <= set(sub.contributor_ids(1, j))


@given(pts3)
def test_three_algorithms_agree_3d(pts):
    ds = Dataset.from_points(pts)
    sub = build_subcell_grid(ds)
    base = dbase(ds, sub)
    assert _same(base, dscan(ds, sub))
    assert _same(base, dsubset(ds, sub, global_cells(ds, build_cell_grid(ds))))
