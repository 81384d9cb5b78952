"""Approximate diagrams: rectangular tiles whose result union holds at most delta points.

Columns are grid axis 0 and rows axis 1.  Cut lists hold cell indices:
``vpls = [0, ..., n_cols]`` and band ``c`` covers columns
``vpls[c] <= i < vpls[c + 1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, DimensionError, SkydiagError, as_result
from .grid import CellGrid, DiagramPartition, locate


class InfeasibleError(SkydiagError, ValueError):
    """No partition can respect delta (delta < 1 or a single cell is too large)."""


@dataclass(eq=False)
class ApproxDiagram:
    delta: float
    vpls: list
    hpls: list
    tiles: dict  # (row band, column band) -> union ResultSet
    kind: str = "quadrant"
    grid: CellGrid | None = field(default=None, repr=False)
    dataset: Dataset | None = field(default=None, repr=False)

    @property
    def n_tiles(self) -> int:
        return len(self.tiles)

    def tile_of(self, cell) -> tuple[int, int]:
        i, j = cell
        col = int(np.searchsorted(self.vpls, i, side="right")) - 1
        row = int(np.searchsorted(self.hpls, j, side="right")) - 1
        return row, col

    def lookup(self, q, scaled: bool = False):
        if self.grid is None:
            raise ValueError("diagram carries no grid")
        return self.tiles[self.tile_of(locate(self.grid, q, scaled=scaled))]

    def __eq__(self, other):
        if not isinstance(other, ApproxDiagram):
            return NotImplemented
        return (self.delta == other.delta and list(self.vpls) == list(other.vpls)
                and list(self.hpls) == list(other.hpls) and self.tiles == other.tiles
                and self.kind == other.kind and self.grid == other.grid
                and self.dataset == other.dataset)

    __hash__ = None


@dataclass
class WeightGrid:
    """Per-cell result sizes with row and column totals."""

    weights: np.ndarray

    @classmethod
    def from_results(cls, results: np.ndarray) -> "WeightGrid":
        w = np.vectorize(len, otypes=[np.int64])(results) if results.size else np.zeros(results.shape, np.int64)
        return cls(w)

    @property
    def column_totals(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    @property
    def row_totals(self) -> np.ndarray:
        return self.weights.sum(axis=0)


def _as_grid(results) -> np.ndarray:
    if isinstance(results, DiagramPartition):
        results = results.cell_results()
    results = np.asarray(results, dtype=object)
    if results.ndim != 2:
        raise DimensionError("approximate diagrams need a two-dimensional result grid")
    return results


def check_feasible(results: np.ndarray, delta) -> None:
    if not delta >= 1:
        raise InfeasibleError(f"delta must be at least 1, got {delta}")
    for idx, res in np.ndenumerate(results):
        if len(res) > delta:
            raise InfeasibleError(f"cell {tuple(int(v) for v in idx)} holds {len(res)} points > delta={delta}")


def _tiles(results: np.ndarray, vpls, hpls) -> dict:
    tiles = {}
    for r in range(len(hpls) - 1):
        for c in range(len(vpls) - 1):
            block = results[vpls[c]:vpls[c + 1], hpls[r]:hpls[r + 1]]
            members = set()
            for res in block.flat:
                members.update(res)
            tiles[(r, c)] = as_result(members)
    return tiles


def _greedy_cuts(strips: list, delta) -> list:
    """Greedy cut positions along one axis.

    ``strips[k][t]`` is the set of ids of strip k at position t.  From the
    current start, each strip extends while its union stays within delta;
    the cut goes after the shortest extent.
    """
    length = len(strips[0]) if strips else 0
    cuts, start = [0], 0
    while start < length:
        shortest = length - 1
        for strip in strips:
            union = set(strip[start])
            end = start
            while end + 1 <= shortest and len(union | strip[end + 1]) <= delta:
                end += 1
                union |= strip[end]
            shortest = min(shortest, end)
        start = shortest + 1
        cuts.append(start)
    return cuts


def bum(results, delta, kind: str = "quadrant", grid=None, dataset=None) -> ApproxDiagram:
    """Bottom-up merging: greedy column cuts, then greedy row cuts over the column bands."""
    results = _as_grid(results)
    check_feasible(results, delta)
    n_cols, n_rows = results.shape
    sets = [[set(results[i, j]) for j in range(n_rows)] for i in range(n_cols)]
    # column pass: one strip per row, positions along the columns
    vpls = _greedy_cuts([[sets[i][j] for i in range(n_cols)] for j in range(n_rows)], delta)
    # row pass: one strip per column band
    bands = []
    for c in range(len(vpls) - 1):
        strip = []
        for j in range(n_rows):
            merged = set()
            for i in range(vpls[c], vpls[c + 1]):
                merged |= sets[i][j]
            strip.append(merged)
        bands.append(strip)
    hpls = _greedy_cuts(bands, delta)
    return ApproxDiagram(delta, vpls, hpls, _tiles(results, vpls, hpls), kind, grid, dataset)


def quantile_cuts(totals: np.ndarray, p: int) -> list:
    """Cut list with up to p - 2 interior cuts at weighted quantiles.

    Each target snaps to the nearest unused boundary that still leaves room
    for the cuts after it, so p = len(totals) + 1 gives one band per index.
    """
    size = len(totals)
    inner = min(max(p - 2, 0), size - 1)
    prefix = np.concatenate(([0], np.cumsum(totals)))
    total = prefix[-1]
    cuts, prev = [0], 0
    for k in range(1, inner + 1):
        target = total * k / (inner + 1)
        lo, hi = prev + 1, size - 1 - (inner - k)
        cand = np.arange(lo, hi + 1)
        b = int(cand[np.argmin(np.abs(prefix[cand] - target))])
        cuts.append(b)
        prev = b
    cuts.append(size)
    return cuts


def _fits(results, vpls, hpls, delta) -> bool:
    for r in range(len(hpls) - 1):
        for c in range(len(vpls) - 1):
            members = set()
            for res in results[vpls[c]:vpls[c + 1], hpls[r]:hpls[r + 1]].flat:
                members.update(res)
                if len(members) > delta:
                    return False
    return True


def tdp(results, delta, kind: str = "quadrant", grid=None, dataset=None) -> ApproxDiagram:
    """Top-down partitioning with p cut lines per axis placed on weight quantiles.

    p is doubled from 2 until feasible, then binary searched in (p/2, p].
    """
    results = _as_grid(results)
    check_feasible(results, delta)
    weights = WeightGrid.from_results(results)
    col_w, row_w = weights.column_totals, weights.row_totals
    top = max(results.shape) + 1  # per-cell tiles, always feasible here

    def attempt(p):
        vpls, hpls = quantile_cuts(col_w, p), quantile_cuts(row_w, p)
        return (vpls, hpls) if _fits(results, vpls, hpls, delta) else None

    p = 2
    found = attempt(p)
    while found is None:
        p = min(2 * p, top)
        found = attempt(p)
        if found is None and p == top:
            raise InfeasibleError("no feasible cut count found")  # unreachable after check_feasible
    lo, hi = p // 2, p
    while hi - lo > 1 and p > 2:
        mid = (lo + hi) // 2
        trial = attempt(mid)
        if trial is None:
            lo = mid
        else:
            hi, found = mid, trial
    vpls, hpls = found
    return ApproxDiagram(delta, vpls, hpls, _tiles(results, vpls, hpls), kind, grid, dataset)


def precision(approx: ApproxDiagram, results) -> float:
    """Mean over cells of |cell result| / |tile union|; an empty cell in an empty tile counts 1."""
    results = _as_grid(results)
    ratios = []
    for idx, res in np.ndenumerate(results):
        union = approx.tiles[approx.tile_of(idx)]
        ratios.append(1.0 if not union else len(res) / len(union))
    return float(np.mean(ratios)) if ratios else 1.0


def space_cost(diagram) -> int:
    """Stored point ids plus cut or grid-line count."""
    if isinstance(diagram, ApproxDiagram):
        return sum(len(u) for u in diagram.tiles.values()) + len(diagram.vpls) + len(diagram.hpls)
    if isinstance(diagram, DiagramPartition):
        stored = sum(len(diagram.results[c]) for c in diagram.piece_class)
        return int(stored) + sum(len(a) for a in diagram.grid.axes)
    raise TypeError(f"cannot cost {type(diagram).__name__}")


ALGOS = {"bum": bum, "tdp": tdp}


def approximate(results, delta, algo: str = "bum", **kw) -> ApproxDiagram:
    try:
        fn = ALGOS[algo]
    except KeyError:
        raise ValueError(f"unknown approximation algorithm {algo!r}") from None
    return fn(results, delta, **kw)


INF = math.inf
