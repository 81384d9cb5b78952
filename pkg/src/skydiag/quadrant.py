"""Per-cell quadrant skylines (four algorithms) and the global diagram.

qbase, qgraph and qscan return an object array of grid shape holding one
result tuple per cell.  qsweep builds the partition directly from the
arrangement of downward and leftward rays.  Any orthant other than the
first is handled by flipping axes through a sign vector.
"""
from __future__ import annotations

import itertools
import math
from bisect import bisect_left, insort
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import (ConsistencyError, Dataset, DimensionError, as_result, direct_dominance,
                   orthants, skyline_mask, quadrant_skyline)
from .grid import (CellGrid, DiagramPartition, build_cell_grid, label_pieces,
                   merge_equal_results, representative)


def _sign(grid: CellGrid, orthant) -> np.ndarray:
    if orthant is None:
        return np.ones(grid.d, dtype=np.int64)
    sign = np.asarray(orthant, dtype=np.int64)
    if sign.shape != (grid.d,) or not np.isin(sign, (1, -1)).all():
        raise ValueError(f"bad orthant {orthant!r}")
    return sign


def _oriented_ranks(dataset: Dataset, grid: CellGrid, sign: np.ndarray) -> np.ndarray:
    """Line ranks with flipped axes reversed, so every orthant looks like the first."""
    ranks = grid.point_ranks(dataset)
    u = np.array([len(a) for a in grid.axes], dtype=np.int64)
    return np.where(sign > 0, ranks, u - 1 - ranks)


def _actual_cell(oriented, sign, shape) -> tuple[int, ...]:
    return tuple(c if s > 0 else n - 1 - c for c, s, n in zip(oriented, sign, shape))


def _empty_results(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(())
    return out


# ---------------------------------------------------------------------------
# baseline

def qbase(dataset: Dataset, grid: CellGrid, orthant=None, threads: int = 1) -> np.ndarray:
    """Skyline of the orthant points at every cell representative, from scratch."""
    sign = _sign(grid, orthant)
    scaled = dataset.coords * grid.scale
    # points pre-sorted on the first axis once, as the candidate scan expects
    order = np.lexsort(scaled.T[::-1] * sign[::-1, None]) if dataset.n else np.zeros(0, dtype=np.int64)
    sorted_pts = scaled[order] * sign
    out = _empty_results(grid.shape)

    def fill(first: int):
        for rest in itertools.product(*(range(s) for s in grid.shape[1:])):
            cell = (first,) + rest
            rep = np.array(representative(grid, cell), dtype=np.int64) * sign
            cand = np.all(sorted_pts > rep, axis=1)
            if cand.any():
                keep = skyline_mask(sorted_pts[cand])
                out[cell] = as_result(order[cand][keep])

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(fill, range(grid.shape[0])))
    else:
        for first in range(grid.shape[0]):
            fill(first)
    return out


# ---------------------------------------------------------------------------
# directed skyline graph sweep

def qgraph(dataset: Dataset, grid: CellGrid, orthant=None) -> np.ndarray:
    """Incremental skylines: crossing a line removes its points from the graph.

    Children left without a remaining parent are promoted.  Axis 0 is the
    innermost sweep; each outer step hands a copy of the graph state to the
    inner sweep, the row snapshot of the two-dimensional algorithm.
    """
    sign = _sign(grid, orthant)
    shape = grid.shape
    out = _empty_results(shape)
    n, d = dataset.n, grid.d
    if n == 0:
        return out
    ranks = _oriented_ranks(dataset, grid, sign)
    direct = direct_dominance(ranks)
    children = [np.flatnonzero(direct[p]).tolist() for p in range(n)]
    parent_count = direct.sum(axis=0).astype(np.int64)
    on_line = []
    for k in range(d):
        lines = [[] for _ in range(shape[k] - 1)]
        for p in range(n):
            lines[ranks[p, k]].append(p)
        on_line.append(lines)

    def cross(axis, line, removed, pcount, sky):
        crossed = [p for p in on_line[axis][line] if not removed[p]]
        for p in crossed:
            removed[p] = True
            sky.discard(p)
        for p in crossed:
            for c in children[p]:
                pcount[c] -= 1
                if pcount[c] == 0 and not removed[c]:
                    sky.add(c)

    idx = [0] * d

    def sweep(axis, removed, pcount, sky):
        for t in range(shape[axis]):
            if t:
                cross(axis, t - 1, removed, pcount, sky)
            idx[axis] = t
            if axis == 0:
                out[_actual_cell(idx, sign, shape)] = as_result(sky)
            else:
                sweep(axis - 1, removed.copy(), pcount.copy(), set(sky))

    first_layer = {int(p) for p in np.flatnonzero(parent_count == 0)}
    sweep(d - 1, np.zeros(n, dtype=bool), parent_count.copy(), first_layer)
    return out


# ---------------------------------------------------------------------------
# scanning with the neighbour identity

def _neighbour_offsets(d: int):
    for e in itertools.product((0, 1), repeat=d):
        if any(e):
            yield e, (1 if sum(e) % 2 else -1)


def neighbour_multiset(results: np.ndarray, cell, orthant=None) -> Counter:
    """Signed multiset sum of the 2^d - 1 upper neighbours of ``cell``.

    In two dimensions this is Sky(right) + Sky(up) - Sky(up-right).  Cells
    beyond the grid count as empty.  Entries can be zero or negative.
    """
    shape = results.shape
    d = len(shape)
    sign = np.ones(d, dtype=np.int64) if orthant is None else np.asarray(orthant)
    total: Counter = Counter()
    for e, s in _neighbour_offsets(d):
        nb = tuple(c + (o if sg > 0 else -o) for c, o, sg in zip(cell, e, sign))
        if all(0 <= c < n for c, n in zip(nb, shape)):
            for pid in results[nb]:
                total[pid] += s
    return total


def qscan(dataset: Dataset, grid: CellGrid, orthant=None) -> np.ndarray:
    """Fill cells from the far corner using the neighbour identity.

    A cell whose far corner carries points gets exactly those points.
    Otherwise the signed sum of its upper neighbours is taken and only
    positive multiplicities are kept; in more than two dimensions the
    survivors are passed through a final skyline filter.
    """
    sign = _sign(grid, orthant)
    shape = grid.shape
    d = grid.d
    n = dataset.n
    work = _empty_results(shape)
    if n == 0:
        return work
    ranks = _oriented_ranks(dataset, grid, sign)
    corner: dict[tuple, list[int]] = {}
    for p in range(n):
        corner.setdefault(tuple(int(r) for r in ranks[p]), []).append(p)
    offsets = list(_neighbour_offsets(d))
    last = tuple(s - 1 for s in shape)

    for cell in itertools.product(*(range(s - 1, -1, -1) for s in shape)):
        if any(c == m for c, m in zip(cell, last)):
            continue  # nothing lies beyond the outermost line
        hosts = corner.get(cell)
        if hosts:
            work[cell] = tuple(sorted(hosts))
            continue
        total: Counter = Counter()
        for e, s in offsets:
            nb = tuple(c + o for c, o in zip(cell, e))
            for pid in work[nb]:
                total[pid] += s
        survivors = [pid for pid, m in total.items() if m > 0]
        if d == 2:
            if any(m > 1 for m in total.values()):
                raise ConsistencyError(f"multiplicity above one at cell {cell}")
            work[cell] = tuple(sorted(survivors))
        elif survivors:
            arr = np.array(sorted(survivors), dtype=np.int64)
            work[cell] = as_result(arr[skyline_mask(ranks[arr])])

    if not (sign < 0).any():
        return work
    out = _empty_results(shape)
    for cell in itertools.product(*(range(s) for s in shape)):
        out[_actual_cell(cell, sign, shape)] = work[cell]
    return out


# ---------------------------------------------------------------------------
# sweeping the ray arrangement

_NEG = -1  # line index standing for the boundary at minus infinity


class _Arrangement:
    """Vertices of the leftward/downward ray arrangement in line-index space."""

    def __init__(self, ranks: np.ndarray, ux: int, uy: int):
        self.ux, self.uy = ux, uy
        hx = np.full(uy, -1, dtype=np.int64)  # right end of the horizontal ray on y-line b
        vy = np.full(ux, -1, dtype=np.int64)  # top end of the vertical ray on x-line a
        for a, b in ranks.tolist():
            hx[b] = max(hx[b], a)
            vy[a] = max(vy[a], b)
        self.hx, self.vy = hx, vy
        self.left, self.right, self.lower, self.upper = {}, {}, {}, {}
        self.vertices: list[tuple[int, int]] = []
        self._link()

    def _link(self):
        # top to bottom; a vertical ray becomes active once its top is reached
        by_top: dict[int, list[int]] = {}
        for a, b in enumerate(self.vy.tolist()):
            by_top.setdefault(b, []).append(a)
        active: list[int] = []
        below: dict[int, tuple[int, int]] = {}
        for b in range(self.uy - 1, -1, -1):
            for a in by_top.get(b, ()):
                insort(active, a)
            end = bisect_left(active, self.hx[b] + 1)
            row = [(_NEG, b)] + [(a, b) for a in active[:end]]
            for g, h in zip(row, row[1:]):
                self.right[g] = h
                self.left[h] = g
            for g in row[1:]:
                self.vertices.append(g)
                if g[0] in below:
                    self.upper[g] = below[g[0]]
                    self.lower[below[g[0]]] = g
                below[g[0]] = g
            left_edge = (_NEG, b)
            if _NEG in below:
                self.upper[left_edge] = below[_NEG]
                self.lower[below[_NEG]] = left_edge
            below[_NEG] = left_edge
        bottom = [(_NEG, _NEG)] + [(a, _NEG) for a in range(self.ux)]
        for g, h in zip(bottom, bottom[1:]):
            self.right[g] = h
            self.left[h] = g
        for a, g in below.items():
            floor = (a, _NEG)
            self.lower[g] = floor
            self.upper[floor] = g

    def descend(self, g):
        """Next vertex below ``g`` where the boundary can turn right."""
        g = self.lower[g]
        while g[1] != _NEG and g[0] != _NEG and self.hx[g[1]] <= g[0]:
            g = self.lower[g]  # a ray from the left ends here; keep going down
        return g

    def advance(self, g):
        """Next vertex right of ``g`` where the boundary can turn down or stop."""
        g = self.right[g]
        while g[1] != _NEG and self.vy[g[0]] == g[1] and self.hx[g[1]] > g[0]:
            g = self.right[g]  # a ray from above ends here; the line goes on
        return g

    def chain(self, g0):
        """Boundary of the polyomino whose upper-right corner is ``g0``."""
        a0 = g0[0]
        g = self.left[g0]
        out = [g0, g]
        while g[0] != a0:
            g = self.descend(g)
            out.append(g)
            g = self.advance(g)
            if g[0] != a0 and g[1] != _NEG and self.vy[g[0]] > g[1]:
                raise ConsistencyError(f"walk from {g0} crossed a ray at {g}")
            out.append(g)
        return out


def qsweep(dataset: Dataset, grid: CellGrid | None = None) -> DiagramPartition:
    """Quadrant diagram straight from the ray arrangement (two dimensions only).

    Every arrangement vertex is the upper-right corner of exactly one
    polyomino; the single face without such a corner is the outer region,
    whose result is empty.
    """
    if dataset.d != 2:
        raise DimensionError(f"qsweep supports d = 2 only, got d = {dataset.d}")
    if grid is None:
        grid = build_cell_grid(dataset)
    shape = grid.shape
    ux, uy = shape[0] - 1, shape[1] - 1
    face_of = np.full(shape, -1, dtype=np.int64)
    chains: dict[int, list] = {}
    face_results: list = []
    face_cells: list = []  # one member cell per face
    scaled = dataset.coords * grid.scale

    def to_coord(g):
        a, b = g
        return (grid.axes[0][a].item() if a != _NEG else -math.inf,
                grid.axes[1][b].item() if b != _NEG else -math.inf)

    if dataset.n:
        arr = _Arrangement(grid.point_ranks(dataset), ux, uy)
        for g0 in arr.vertices:
            a0, b0 = g0
            chain = arr.chain(g0)
            face = len(face_results)
            a = chain[1][0]
            for t_vertex, a_next in zip(chain[2::2], chain[3::2]):
                t = t_vertex[1]
                face_of[a + 1:a_next[0] + 1, t + 1:b0 + 1] = face
                a = a_next[0]
            rep = representative(grid, (a0, b0))
            face_results.append(quadrant_skyline((scaled, np.arange(dataset.n)), rep))
            chains[face] = [to_coord(g) for g in chain]
            face_cells.append((a0, b0))
    outer = face_of < 0
    if outer.any():
        face = len(face_results)
        face_of[outer] = face
        top = tuple(s - 1 for s in shape)
        face_results.append(quadrant_skyline((scaled, np.arange(dataset.n)), representative(grid, top)))
        chains[face] = None
        face_cells.append(tuple(int(v) for v in np.argwhere(outer)[0]))
    index: dict = {}
    face_class = np.array([index.setdefault(r, len(index)) for r in face_results], dtype=np.int64)
    partition = DiagramPartition("quadrant", grid, dataset, list(index), face_class[face_of], face_of)
    # piece ids were renumbered; carry the chains over
    remap = {f: int(partition.piece_of[cell]) for f, cell in enumerate(face_cells)}
    partition.chains = {remap[f]: c for f, c in chains.items()}
    return partition


# ---------------------------------------------------------------------------
# global diagram

BACKENDS = {"qbase": qbase, "qgraph": qgraph, "qscan": qscan}


def global_cells(dataset: Dataset, grid: CellGrid, backend: str = "qscan") -> np.ndarray:
    """Union over all 2^d orthants of the per-cell quadrant results."""
    try:
        fn = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown quadrant backend {backend!r}") from None
    per_orthant = [fn(dataset, grid, orthant=s) for s in orthants(grid.d)]
    out = _empty_results(grid.shape)
    for idx in np.ndindex(*grid.shape):
        merged = set()
        for res in per_orthant:
            merged.update(res[idx])
        out[idx] = as_result(merged)
    return out


def quadrant_partition(dataset: Dataset, algo: str = "qscan", grid: CellGrid | None = None) -> DiagramPartition:
    if grid is None:
        grid = build_cell_grid(dataset)
    if algo == "qsweep":
        return qsweep(dataset, grid)
    try:
        fn = BACKENDS[algo]
    except KeyError:
        raise ValueError(f"unknown quadrant algorithm {algo!r}") from None
    return merge_equal_results(grid, fn(dataset, grid), "quadrant", dataset)


def global_partition(dataset: Dataset, algo: str = "qscan", grid: CellGrid | None = None) -> DiagramPartition:
    if grid is None:
        grid = build_cell_grid(dataset)
    return merge_equal_results(grid, global_cells(dataset, grid, algo), "global", dataset)
