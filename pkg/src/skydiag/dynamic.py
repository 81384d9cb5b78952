"""Per-subcell dynamic skylines: baseline, subset and scanning algorithms."""
from __future__ import annotations

import itertools
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import ConsistencyError, Dataset, as_result, skyline_mask
from .grid import (CellGrid, DiagramPartition, SubcellGrid, build_cell_grid, build_subcell_grid,
                   locate, merge_equal_results, representative)


def _empty_results(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(())
    return out


def _dynamic_among(scaled: np.ndarray, ids: np.ndarray, rep) -> tuple:
    if ids.size == 0:
        return ()
    mapped = np.abs(scaled[ids] - np.asarray(rep, dtype=np.int64))
    return as_result(ids[skyline_mask(mapped)])


def _per_subcell(subgrid: SubcellGrid, threads: int, work) -> np.ndarray:
    out = _empty_results(subgrid.shape)

    def fill(first: int):
        for rest in itertools.product(*(range(s) for s in subgrid.shape[1:])):
            cell = (first,) + rest
            out[cell] = work(cell)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(fill, range(subgrid.shape[0])))
    else:
        for first in range(subgrid.shape[0]):
            fill(first)
    return out


def dbase(dataset: Dataset, subgrid: SubcellGrid, threads: int = 1) -> np.ndarray:
    """Map every point around each subcell representative and take the skyline."""
    scaled = dataset.coords * subgrid.scale
    everyone = np.arange(dataset.n)
    return _per_subcell(subgrid, threads,
                        lambda cell: _dynamic_among(scaled, everyone, representative(subgrid, cell)))


def dsubset(dataset: Dataset, subgrid: SubcellGrid, global_results: np.ndarray,
            cell_grid: CellGrid | None = None, threads: int = 1) -> np.ndarray:
    """Like dbase, but only over the global skyline of the containing cell."""
    if cell_grid is None:
        cell_grid = build_cell_grid(dataset)
    if global_results.shape != cell_grid.shape:
        raise ConsistencyError("global results do not match the cell grid")
    scaled = dataset.coords * subgrid.scale
    as_arrays = np.empty(cell_grid.shape, dtype=object)
    for idx, res in np.ndenumerate(global_results):
        as_arrays[idx] = np.array(res, dtype=np.int64)

    def work(cell):
        rep = representative(subgrid, cell)
        return _dynamic_among(scaled, as_arrays[locate(cell_grid, rep, scaled=True)], rep)

    return _per_subcell(subgrid, threads, work)


class _Staircase:
    """Two-dimensional skyline in mapped space, sorted by (x, y) ascending.

    Along a staircase y strictly decreases apart from exact duplicates, so
    the predecessor decides dominance and dominated entries follow the
    insertion point contiguously.
    """

    def __init__(self, scaled: np.ndarray):
        self.scaled = scaled
        self.ids: list[int] = []
        self.rep = (0, 0)

    def key(self, pid):
        x, y = self.scaled[pid]
        return abs(int(x) - self.rep[0]), abs(int(y) - self.rep[1])

    def insert(self, pid):
        k = self.key(pid)
        pos = bisect_left(self.ids, k, key=self.key)
        if pos:
            prev = self.key(self.ids[pos - 1])
            if prev[1] <= k[1] and prev != k:
                return
        start = pos
        while start < len(self.ids) and self.key(self.ids[start]) == k:
            start += 1
        end = start
        while end < len(self.ids) and self.key(self.ids[end])[1] >= k[1]:
            end += 1
        del self.ids[start:end]
        self.ids.insert(pos, pid)

    def step(self, rep, crossed):
        """Move to ``rep``, re-inserting the contributors of the crossed line."""
        crossed = set(crossed)
        kept = [p for p in self.ids if p not in crossed]
        self.rep = tuple(int(v) for v in rep)
        # no other pair of points changes order when only this line is crossed
        self.ids = kept
        for p in sorted(crossed):
            self.insert(p)
        return as_result(self.ids)


def dscan(dataset: Dataset, subgrid: SubcellGrid) -> np.ndarray:
    """Incremental scan: first row left to right, then every column bottom up.

    Each step starts from the previous subcell's skyline plus the points
    contributing to the crossed line and keeps only their skyline.
    """
    shape = subgrid.shape
    out = _empty_results(shape)
    if dataset.n == 0:
        return out
    scaled = dataset.coords * subgrid.scale
    d = subgrid.d
    origin = (0,) * d

    if d == 2:
        stair = _Staircase(scaled)
        out[origin] = stair.step(representative(subgrid, origin), range(dataset.n))
        row = [stair.ids[:]]
        for i in range(1, shape[0]):
            out[i, 0] = stair.step(representative(subgrid, (i, 0)), subgrid.contributor_ids(0, i - 1))
            row.append(stair.ids[:])
        for i in range(shape[0]):
            stair.ids = row[i][:]
            for j in range(1, shape[1]):
                out[i, j] = stair.step(representative(subgrid, (i, j)), subgrid.contributor_ids(1, j - 1))
        return out

    # higher dimensions: same slab order, recomputing the skyline of the candidates
    out[origin] = _dynamic_among(scaled, np.arange(dataset.n), representative(subgrid, origin))

    def extend(cell, axis):
        prev = list(cell)
        prev[axis] -= 1
        cand = set(out[tuple(prev)]) | set(subgrid.contributor_ids(axis, cell[axis] - 1))
        out[cell] = _dynamic_among(scaled, np.array(sorted(cand), dtype=np.int64),
                                   representative(subgrid, cell))

    for cell in itertools.product(*(range(s) for s in reversed(shape))):
        cell = cell[::-1]  # axis 0 varies fastest
        if cell == origin:
            continue
        # step along the outermost nonzero axis; that neighbour is already done
        axis = max(k for k in range(d) if cell[k])
        extend(cell, axis)
    return out


BACKENDS = ("dbase", "dsubset", "dscan")


def dynamic_partition(dataset: Dataset, algo: str = "dscan", subgrid: SubcellGrid | None = None,
                      threads: int = 1) -> DiagramPartition:
    if subgrid is None:
        subgrid = build_subcell_grid(dataset)
    if algo == "dbase":
        results = dbase(dataset, subgrid, threads)
    elif algo == "dsubset":
        from .quadrant import global_cells
        cell_grid = build_cell_grid(dataset)
        results = dsubset(dataset, subgrid, global_cells(dataset, cell_grid), cell_grid, threads)
    elif algo == "dscan":
        results = dscan(dataset, subgrid)
    else:
        raise ValueError(f"unknown dynamic algorithm {algo!r}")
    return merge_equal_results(subgrid, results, "dynamic", dataset)
