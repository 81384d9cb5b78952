"""Cell and subcell grids, representatives, point location and cell merging.

Every coordinate is multiplied by ``SCALE`` (4) before it becomes a grid line:
point lines sit at 4a and pairwise bisectors at 2(a + b), so all lines are
even and ``left line + 1`` is an exact interior point of every span.
"""
from __future__ import annotations

import itertools
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from skimage.measure import label as _label_regions

from .core import (ConsistencyError, Dataset, DimensionError, ResultSet, dynamic_skyline,
                   global_skyline, quadrant_skyline)

SCALE = 4


@dataclass(frozen=True, eq=False)
class CellGrid:
    """Half-open cells between consecutive point lines on every axis.

    Cell index ``i`` on an axis spans ``[lines[i-1], lines[i])`` with the
    outermost spans unbounded.
    """

    axes: tuple
    scale: int = SCALE

    def __post_init__(self):
        axes = []
        for a in self.axes:
            arr = np.asarray(a, dtype=np.int64)
            if arr.size > 1 and not (np.diff(arr) > 0).all():
                raise ValueError("axis lines must be strictly increasing")
            arr = arr.copy()
            arr.setflags(write=False)
            axes.append(arr)
        object.__setattr__(self, "axes", tuple(axes))

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) + 1 for a in self.axes)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.shape))

    def cells(self):
        return itertools.product(*(range(s) for s in self.shape))

    def representative(self, cell) -> tuple[int, ...]:
        return representative(self, cell)

    def locate(self, q, scaled: bool = False) -> tuple[int, ...]:
        return locate(self, q, scaled=scaled)

    def point_ranks(self, dataset: Dataset) -> np.ndarray:
        """Index of the line each point coordinate lies on, per axis."""
        scaled = dataset.coords * self.scale
        ranks = np.empty_like(scaled)
        for k, lines in enumerate(self.axes):
            ranks[:, k] = np.searchsorted(lines, scaled[:, k])
            if scaled.shape[0] and (len(lines) == 0 or ranks[:, k].max() >= len(lines)
                                    or not np.array_equal(lines[ranks[:, k]], scaled[:, k])):
                raise ConsistencyError("point coordinate missing from grid axis")
        return ranks

    def __eq__(self, other):
        if not isinstance(other, CellGrid):
            return NotImplemented
        return (type(self) is type(other) and self.scale == other.scale and self.d == other.d
                and all(np.array_equal(a, b) for a, b in zip(self.axes, other.axes)))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SubcellGrid(CellGrid):
    """Cell grid refined by every pairwise bisector.

    ``contributors[k][i]`` lists the unordered id pairs ``(a, b)`` (``a == b``
    for a point's own line) whose bisector on axis k is line i.
    """

    contributors: tuple = ()

    def contributor_ids(self, axis: int, line: int) -> tuple[int, ...]:
        return self._contributor_ids[axis][line]

    @cached_property
    def _contributor_ids(self):
        return tuple(
            tuple(tuple(sorted({i for pair in pairs for i in pair})) for pairs in per_axis)
            for per_axis in self.contributors
        )


def build_cell_grid(dataset: Dataset) -> CellGrid:
    if dataset.d < 2:
        raise DimensionError("grids need d >= 2")
    axes = tuple(np.unique(dataset.coords[:, k]) * SCALE for k in range(dataset.d))
    return CellGrid(axes)


def build_subcell_grid(dataset: Dataset) -> SubcellGrid:
    if dataset.d < 2:
        raise DimensionError("grids need d >= 2")
    axes, contributors = [], []
    for k in range(dataset.d):
        by_value = defaultdict(list)
        for i, v in enumerate(dataset.coords[:, k].tolist()):
            by_value[v].append(i)
        values = sorted(by_value)
        pairs_at = defaultdict(list)
        for ia, a in enumerate(values):
            for b in values[ia:]:
                line = 2 * (a + b)
                ids_a, ids_b = by_value[a], by_value[b]
                if a == b:
                    pairs_at[line].extend(
                        (x, y) for ix, x in enumerate(ids_a) for y in ids_a[ix:]
                    )
                else:
                    pairs_at[line].extend(
                        (min(x, y), max(x, y)) for x in ids_a for y in ids_b
                    )
        lines = sorted(pairs_at)
        axes.append(np.array(lines, dtype=np.int64))
        contributors.append(tuple(tuple(sorted(pairs_at[line])) for line in lines))
    return SubcellGrid(tuple(axes), contributors=tuple(contributors))


def _check_cell(grid: CellGrid, cell) -> tuple[int, ...]:
    cell = tuple(int(c) for c in cell)
    if len(cell) != grid.d:
        raise DimensionError(f"cell index has {len(cell)} components, grid is {grid.d}-d")
    for c, s in zip(cell, grid.shape):
        if not 0 <= c < s:
            raise IndexError(f"cell {cell} outside grid of shape {grid.shape}")
    return cell


def representative(grid: CellGrid, cell) -> tuple[int, ...]:
    """Scaled interior point of ``cell``: left line + 1, or min line - 1."""
    cell = _check_cell(grid, cell)
    rep = []
    for c, lines in zip(cell, grid.axes):
        if len(lines) == 0:
            rep.append(1)
        elif c == 0:
            rep.append(int(lines[0]) - 1)
        else:
            rep.append(int(lines[c - 1]) + 1)
    return tuple(rep)


def locate(grid: CellGrid, q, scaled: bool = False) -> tuple[int, ...]:
    """Cell containing ``q``; a query on a line belongs to the span above it."""
    q = tuple(int(v) for v in q)
    if len(q) != grid.d:
        raise DimensionError(f"query has {len(q)} coordinates, grid is {grid.d}-d")
    if not scaled:
        q = tuple(v * grid.scale for v in q)
    return tuple(bisect_right(lines, v) for lines, v in zip(grid.axes, q))


def on_line(grid: CellGrid, scaled_q) -> bool:
    for lines, v in zip(grid.axes, scaled_q):
        i = bisect_right(lines, v)
        if i and lines[i - 1] == v:
            return True
    return False


def exact_result(kind: str, dataset: Dataset, scaled_q, scale: int = SCALE) -> ResultSet:
    fn = {"quadrant": quadrant_skyline, "global": global_skyline, "dynamic": dynamic_skyline}[kind]
    return fn((dataset.coords * scale, np.arange(dataset.n)), scaled_q)


def containing_cell(cell_grid: CellGrid, subgrid: SubcellGrid, subcell) -> tuple[int, ...]:
    """Cell of ``cell_grid`` that contains ``subcell`` (the grids share scaling)."""
    rep = representative(subgrid, subcell)
    return locate(cell_grid, rep, scaled=True)


# ---------------------------------------------------------------------------
# diagram partitions

@dataclass(frozen=True)
class DiagramClass:
    id: int
    result: ResultSet
    cells: list
    pieces: list  # lists of indices into ``cells``


@dataclass(eq=False)
class DiagramPartition:
    """Cells grouped by identical result, with 4-connected pieces per class.

    ``class_of`` and ``piece_of`` are arrays of grid shape.  Class and piece
    ids are numbered in order of first appearance in C order, so two
    partitions describing the same subdivision compare equal.
    """

    kind: str
    grid: CellGrid
    dataset: Dataset
    results: list
    class_of: np.ndarray
    piece_of: np.ndarray
    chains: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        self.class_of, self.results = _renumber_classes(self.class_of, self.results)
        self.piece_of = _renumber(self.piece_of)
        if self.class_of.shape != self.grid.shape or self.piece_of.shape != self.grid.shape:
            raise ConsistencyError("partition arrays do not match the grid shape")

    @property
    def n_classes(self) -> int:
        return len(self.results)

    @property
    def n_pieces(self) -> int:
        return int(self.piece_of.max()) + 1 if self.piece_of.size else 0

    @cached_property
    def piece_class(self) -> np.ndarray:
        out = np.empty(self.n_pieces, dtype=np.int64)
        out[self.piece_of.ravel()] = self.class_of.ravel()
        return out

    @property
    def classes(self) -> list[DiagramClass]:
        flat_cls = self.class_of.ravel()
        flat_piece = self.piece_of.ravel()
        order = np.argsort(flat_cls, kind="stable")
        bounds = np.searchsorted(flat_cls[order], np.arange(self.n_classes + 1))
        out = []
        for c in range(self.n_classes):
            members = order[bounds[c]:bounds[c + 1]]
            cells = [tuple(int(v) for v in np.unravel_index(m, self.grid.shape)) for m in members]
            groups: dict[int, list[int]] = {}
            for pos, m in enumerate(members):
                groups.setdefault(int(flat_piece[m]), []).append(pos)
            out.append(DiagramClass(c, self.results[c], cells, list(groups.values())))
        return out

    def result_at(self, cell) -> ResultSet:
        return self.results[self.class_of[tuple(cell)]]

    def lookup(self, q, scaled: bool = False) -> ResultSet:
        """Result at ``q``.

        Cells are half-open, so a query lying exactly on a grid line would
        get the answer of the cell above it; for global and dynamic
        semantics that can differ from the answer on the line itself, so
        such queries are evaluated directly.
        """
        cell = locate(self.grid, q, scaled=scaled)
        sq = tuple(int(v) for v in q) if scaled else tuple(int(v) * self.grid.scale for v in q)
        if self.dataset.n and on_line(self.grid, sq):
            return exact_result(self.kind, self.dataset, sq, self.grid.scale)
        return self.results[self.class_of[cell]]

    def cell_results(self) -> np.ndarray:
        out = np.empty(self.grid.shape, dtype=object)
        for idx in np.ndindex(*self.grid.shape):
            out[idx] = self.results[self.class_of[idx]]
        return out

    def disconnected_classes(self) -> list[int]:
        """Classes made of more than one piece (a diagnostic, not an error)."""
        counts = np.bincount(self.piece_class, minlength=self.n_classes)
        return [int(c) for c in np.flatnonzero(counts > 1)]

    def __eq__(self, other):
        if not isinstance(other, DiagramPartition):
            return NotImplemented
        return (self.kind == other.kind and self.grid == other.grid and self.dataset == other.dataset
                and self.results == other.results
                and np.array_equal(self.class_of, other.class_of)
                and np.array_equal(self.piece_of, other.piece_of))

    __hash__ = None


def _renumber(labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels)
    flat = labels.ravel()
    _, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse].reshape(labels.shape)


def _renumber_classes(class_of: np.ndarray, results: list) -> tuple[np.ndarray, list]:
    class_of = np.asarray(class_of, dtype=np.int64)
    flat = class_of.ravel()
    used, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    order = np.argsort(first, kind="stable")
    rank[order] = np.arange(len(first))
    new_results = [results[used[o]] for o in order]
    if len(set(new_results)) != len(new_results):
        raise ConsistencyError("two classes carry the same result set")
    return rank[inverse].reshape(class_of.shape), new_results


def label_pieces(class_of: np.ndarray) -> np.ndarray:
    """4-connected components of equal class id (2d-neighbourhood in d dims)."""
    if class_of.size == 0:
        return np.zeros(class_of.shape, dtype=np.int64)
    return _label_regions(class_of, background=-1, connectivity=1) - 1


def merge_equal_results(grid: CellGrid, cell_results: np.ndarray, kind: str = "quadrant",
                        dataset: Dataset | None = None) -> DiagramPartition:
    """Group cells by identical result set and split each group into pieces."""
    cell_results = np.asarray(cell_results, dtype=object)
    if cell_results.shape != grid.shape:
        raise ValueError(f"expected results of shape {grid.shape}, got {cell_results.shape}")
    index: dict[ResultSet, int] = {}
    class_of = np.empty(grid.shape, dtype=np.int64)
    for idx, res in np.ndenumerate(cell_results):
        class_of[idx] = index.setdefault(tuple(res), len(index))
    results = list(index)
    if dataset is None:
        dataset = Dataset.from_points([])
    return DiagramPartition(kind, grid, dataset, results, class_of, label_pieces(class_of))
