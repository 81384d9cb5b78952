"""Dominance primitives, skylines, skyline layers and the directed skyline graph.

All coordinates are integers and smaller is better unless a direction vector
flips an axis.  Result sets are tuples of point ids in increasing order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

ResultSet = tuple  # strictly increasing tuple of point ids


class SkydiagError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(SkydiagError, ValueError):
    pass


class ConsistencyError(SkydiagError, RuntimeError):
    """An internal invariant was violated (indicates a bug, not bad input)."""


class Point(NamedTuple):
    id: int
    coords: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable set of d-dimensional integer points with ids 0..n-1."""

    coords: np.ndarray
    domain: tuple[int, ...] | None = None
    _points: tuple[Point, ...] = field(init=False, repr=False)

    def __post_init__(self):
        arr = np.asarray(self.coords)
        if arr.size == 0:
            d = arr.shape[1] if arr.ndim == 2 else 2
            arr = np.zeros((0, d), dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionError(f"coords must be a 2-D array, got shape {arr.shape}")
        if arr.shape[1] < 2:
            raise DimensionError("datasets need d >= 2")
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.array_equal(rounded, arr):
                raise ValueError("coordinates must be integers")
            arr = rounded
        arr = np.array(arr, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        if self.domain is not None:
            dom = tuple(int(s) for s in self.domain)
            if len(dom) != arr.shape[1]:
                raise DimensionError("domain length must equal d")
            if arr.size and ((arr.min(axis=0) < 0).any() or (arr.max(axis=0) >= dom).any()):
                raise ValueError("coordinate outside declared domain")
            object.__setattr__(self, "domain", dom)
        pts = tuple(Point(i, tuple(int(v) for v in row)) for i, row in enumerate(arr))
        object.__setattr__(self, "_points", pts)

    @classmethod
    def from_points(cls, coords: Iterable[Sequence[int]], domain=None) -> "Dataset":
        rows = [tuple(c) for c in coords]
        if not rows:
            return cls(np.zeros((0, 2), dtype=np.int64), domain)
        return cls(np.array(rows, dtype=np.int64), domain)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self._points)

    def __getitem__(self, i) -> Point:
        return self._points[i]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.coords, other.coords) and self.d == other.d

    def __hash__(self):
        return hash((self.coords.shape, self.coords.tobytes(), self.domain))

    def scaled(self, factor: int) -> "Dataset":
        return Dataset(self.coords * factor)


# ---------------------------------------------------------------------------
# helpers

def _arrays(points) -> tuple[np.ndarray, np.ndarray]:
    """Normalise a Dataset / sequence of Points / (coords, ids) pair."""
    if isinstance(points, Dataset):
        return points.coords, np.arange(points.n)
    if isinstance(points, tuple) and len(points) == 2 and isinstance(points[0], np.ndarray):
        return points
    pts = list(points)
    if not pts:
        return np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.int64)
    ids = np.array([p.id for p in pts], dtype=np.int64)
    coords = np.array([p.coords for p in pts], dtype=np.int64)
    return coords, ids


def _check_dim(coords: np.ndarray, q) -> np.ndarray:
    q = np.asarray(q, dtype=np.int64)
    if coords.shape[0] and q.shape != (coords.shape[1],):
        raise DimensionError(f"query has {q.size} coordinates, data has {coords.shape[1]}")
    return q


def as_result(ids: Iterable[int]) -> ResultSet:
    return tuple(sorted(int(i) for i in ids))


def orthants(d: int) -> list[tuple[int, ...]]:
    """All 2^d sign vectors; the all-positive (first) orthant comes first."""
    return [tuple(s) for s in itertools.product((1, -1), repeat=d)]


# ---------------------------------------------------------------------------
# dominance and skyline

def dominates(p, other, direction: Sequence[int] | None = None) -> bool:
    """True iff ``p`` is no worse than ``other`` on every axis and better on one.

    ``direction[k] == -1`` makes larger values better on axis k.
    """
    a = p.coords if isinstance(p, Point) else tuple(p)
    b = other.coords if isinstance(other, Point) else tuple(other)
    if len(a) != len(b):
        raise DimensionError(f"cannot compare {len(a)}-d and {len(b)}-d points")
    if direction is None:
        direction = (1,) * len(a)
    elif len(direction) != len(a):
        raise DimensionError("direction vector has the wrong length")
    strict = False
    for x, y, s in zip(a, b, direction):
        x, y = s * x, s * y
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def _skyline_2d(coords: np.ndarray) -> np.ndarray:
    """Boolean mask of the 2-D skyline: sort on x, keep running minimum of y."""
    n = coords.shape[0]
    x, y = coords[:, 0], coords[:, 1]
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    new_group = np.empty(n, dtype=bool)
    new_group[0] = True
    new_group[1:] = xs[1:] != xs[:-1]
    starts = np.flatnonzero(new_group)
    group = np.cumsum(new_group) - 1
    cummin = np.minimum.accumulate(ys)
    prev_min = np.empty(len(starts), dtype=np.float64)
    prev_min[0] = np.inf
    prev_min[1:] = cummin[starts[1:] - 1]
    keep_sorted = (ys == ys[starts][group]) & (ys < prev_min[group])
    mask = np.zeros(n, dtype=bool)
    mask[order[keep_sorted]] = True
    return mask


def _skyline_nd(coords: np.ndarray) -> np.ndarray:
    """Boolean mask of the skyline by filtering against a growing window."""
    n = coords.shape[0]
    order = np.lexsort(coords.T[::-1])
    order = order[np.argsort(coords[order].sum(axis=1), kind="stable")]
    window: list[int] = []
    for i in order:
        p = coords[i]
        if window:
            w = coords[window]
            if (np.all(w <= p, axis=1) & np.any(w < p, axis=1)).any():
                continue
        window.append(i)
    # sorting by coordinate sum means no later point can dominate an earlier one
    mask = np.zeros(n, dtype=bool)
    mask[window] = True
    return mask


def skyline_mask(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords)
    if coords.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if coords.shape[1] == 2:
        return _skyline_2d(coords)
    return _skyline_nd(coords)


def skyline(points, direction: Sequence[int] | None = None) -> ResultSet:
    """Ids of the points not dominated by any other point."""
    coords, ids = _arrays(points)
    if coords.shape[0] == 0:
        return ()
    if direction is not None:
        coords = coords * np.asarray(direction, dtype=np.int64)
    return as_result(ids[skyline_mask(coords)])


def skyline_layers(points) -> list[ResultSet]:
    """Peel skylines repeatedly; layer 1 is the skyline of the whole set."""
    coords, ids = _arrays(points)
    layers = []
    remaining = np.arange(coords.shape[0])
    while remaining.size:
        mask = skyline_mask(coords[remaining])
        layers.append(as_result(ids[remaining[mask]]))
        remaining = remaining[~mask]
    return layers


@dataclass(frozen=True)
class DirectedSkylineGraph:
    layers: list
    edges: dict  # parent id -> tuple of child ids (direct dominance only)

    @property
    def parents(self) -> dict:
        out: dict[int, list[int]] = {i: [] for layer in self.layers for i in layer}
        for p, children in self.edges.items():
            for c in children:
                out[c].append(p)
        return {c: tuple(sorted(ps)) for c, ps in out.items()}


def dominance_matrix(coords: np.ndarray) -> np.ndarray:
    """``m[a, b]`` is True iff point a dominates point b."""
    le = np.all(coords[:, None, :] <= coords[None, :, :], axis=2)
    lt = np.any(coords[:, None, :] < coords[None, :, :], axis=2)
    return le & lt


def direct_dominance(coords: np.ndarray) -> np.ndarray:
    """Transitive reduction of the dominance relation as a boolean matrix."""
    n = coords.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    dom = dominance_matrix(coords)
    step = dom.astype(np.float32)
    # a -> c is indirect iff some s has a -> s -> c
    two_step = (step @ step) > 0
    return dom & ~two_step


def build_dsg(points) -> DirectedSkylineGraph:
    coords, ids = _arrays(points)
    layers = skyline_layers((coords, ids))
    direct = direct_dominance(coords)
    edges = {}
    for a in range(coords.shape[0]):
        children = np.flatnonzero(direct[a])
        edges[int(ids[a])] = as_result(ids[children])
    return DirectedSkylineGraph(layers=layers, edges=edges)


# ---------------------------------------------------------------------------
# query semantics

def map_to_query(points, q) -> list[Point]:
    """Fold every point into the first orthant of ``q``: t = |p - q| + q."""
    coords, ids = _arrays(points)
    q = _check_dim(coords, q)
    mapped = np.abs(coords - q) + q
    return [Point(int(i), tuple(int(v) for v in row)) for i, row in zip(ids, mapped)]


def dynamic_skyline(points, q) -> ResultSet:
    coords, ids = _arrays(points)
    if coords.shape[0] == 0:
        return ()
    q = _check_dim(coords, q)
    return as_result(ids[skyline_mask(np.abs(coords - q))])


def quadrant_skyline(points, q, orthant: Sequence[int] | None = None) -> ResultSet:
    """Skyline of the points strictly inside one orthant of ``q``.

    Dominance is measured by closeness to ``q``, so an orthant with sign -1 on
    an axis prefers larger values there.
    """
    coords, ids = _arrays(points)
    if coords.shape[0] == 0:
        return ()
    q = _check_dim(coords, q)
    sign = np.ones(coords.shape[1], dtype=np.int64) if orthant is None else np.asarray(orthant, dtype=np.int64)
    rel = (coords - q) * sign
    inside = np.all(rel > 0, axis=1)
    if not inside.any():
        return ()
    sub = rel[inside]
    return as_result(ids[inside][skyline_mask(sub)])


def global_skyline(points, q) -> ResultSet:
    coords, ids = _arrays(points)
    if coords.shape[0] == 0:
        return ()
    out: set[int] = set()
    for sign in orthants(coords.shape[1]):
        out.update(quadrant_skyline((coords, ids), q, sign))
    return as_result(out)
