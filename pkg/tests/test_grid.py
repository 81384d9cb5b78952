import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import P, brute_dynamic, brute_global, brute_quadrant
from skydiag.core import ConsistencyError, Dataset, DimensionError
from skydiag.grid import (SCALE, CellGrid, build_cell_grid, build_subcell_grid, containing_cell,
                          label_pieces, locate, merge_equal_results, representative)
from skydiag.quadrant import qbase

small = st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), min_size=1, max_size=8)


def test_hotels_have_144_cells(hotels):
    grid = build_cell_grid(hotels)
    assert grid.n_cells == 144
    assert grid.shape == (12, 12)
    assert all(int(v) % SCALE == 0 for a in grid.axes for v in a)


def test_four_points_have_121_subcells(four):
    sub = build_subcell_grid(four)
    assert sub.shape == (11, 11)
    assert sub.n_cells == 121
    # the y-line between subcell rows 1 and 2 is the bisector of p3 and p4
    assert sub.contributor_ids(1, 1) == P(3, 4)


def test_single_point_grids():
    ds = Dataset.from_points([(3, 5)])
    assert build_cell_grid(ds).n_cells == 4
    assert build_subcell_grid(ds).n_cells == 4  # its own bisector is its line
    assert build_subcell_grid(ds).contributors[0] == (((0, 0),),)


def test_empty_dataset_single_cell():
    grid = build_cell_grid(Dataset.from_points([]))
    assert grid.n_cells == 1
    assert representative(grid, (0, 0)) == (1, 1)


def test_grid_rejects_unsorted_lines():
    with pytest.raises(ValueError):
        CellGrid((np.array([4, 0]), np.array([0])))


def test_representative_and_locate_edges(hotels):
    grid = build_cell_grid(hotels)
    assert representative(grid, (0, 0)) == (2 * 4 - 1, 70 * 4 - 1)
    assert representative(grid, (11, 11)) == (40 * 4 + 1, 160 * 4 + 1)
    assert locate(grid, (2, 70)) == (1, 1)  # a point on a line belongs to the span above
    assert locate(grid, (1, 69)) == (0, 0)
    with pytest.raises(DimensionError):
        locate(grid, (1, 2, 3))
    with pytest.raises(IndexError):
        representative(grid, (12, 0))


def test_point_ranks_detects_foreign_grid(hotels):
    grid = build_cell_grid(Dataset.from_points([(0, 0)]))
    with pytest.raises(ConsistencyError):
        grid.point_ranks(hotels)


def test_subcell_grid_counts(four):
    sub = build_subcell_grid(four)
    cells = build_cell_grid(four)
    for k in range(2):
        assert set(cells.axes[k]) <= set(sub.axes[k])
        assert len(sub.axes[k]) <= 4 + 6


def test_example_cells_merge(hotels):
    part = merge_equal_results(build_cell_grid(hotels), qbase(hotels, build_cell_grid(hotels)), "quadrant", hotels)
    assert part.result_at((4, 0)) == part.result_at((4, 1)) == part.result_at((3, 1)) == P(8, 10)
    assert part.class_of[4, 0] == part.class_of[3, 1]
    assert part.piece_of[4, 0] == part.piece_of[3, 1]
    assert part.lookup((10, 80)) == P(3, 8, 10)


def test_label_pieces_four_connected():
    classes = np.array([[0, 1], [1, 0]])
    pieces = label_pieces(classes)
    assert len(set(pieces.ravel())) == 4
    results = np.empty((2, 2), dtype=object)
    results[0, 0] = results[1, 1] = (1,)
    results[0, 1] = results[1, 0] = (2,)
    merged = merge_equal_results(CellGrid((np.array([0]), np.array([0]))), results)
    assert merged.n_classes == 2 and merged.n_pieces == 4
    assert merged.disconnected_classes() == [0, 1]


def _random_inside(rng, grid, cell, k):
    lo, hi = [], []
    for c, lines in zip(cell, grid.axes):
        lo.append(int(lines[c - 1]) + 1 if c > 0 else int(lines[0]) - 40)
        hi.append(int(lines[c]) - 1 if c < len(lines) else int(lines[-1]) + 40)
    return [tuple(int(rng.integers(a, b + 1)) for a, b in zip(lo, hi)) for _ in range(k)]


@given(small, st.integers(0, 2**32 - 1))
def test_representative_soundness(pts, seed):
    rng = np.random.default_rng(seed)
    ds = Dataset.from_points(pts)
    scaled = ds.coords * SCALE
    grid = build_cell_grid(ds)
    for cell in list(grid.cells())[:: max(1, grid.n_cells // 12)]:
        rep = representative(grid, cell)
        assert locate(grid, rep, scaled=True) == cell
        for q in _random_inside(rng, grid, cell, 5):
            assert locate(grid, q, scaled=True) == cell
            assert brute_quadrant(scaled, q) == brute_quadrant(scaled, rep)
            assert brute_global(scaled, q) == brute_global(scaled, rep)
    sub = build_subcell_grid(ds)
    for cell in list(sub.cells())[:: max(1, sub.n_cells // 12)]:
        rep = representative(sub, cell)
        assert locate(sub, rep, scaled=True) == cell
        inner = containing_cell(grid, sub, cell)
        for q in _random_inside(rng, sub, cell, 5):
            assert brute_dynamic(scaled, q) == brute_dynamic(scaled, rep)
            assert locate(grid, q, scaled=True) == inner
