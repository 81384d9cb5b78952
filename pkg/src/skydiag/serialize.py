"""JSON files for exact diagrams and approximate diagrams.

Exact::

    {version, kind, d, scale, points: [{id, coords}], axes,
     classes: [{id, result, cells, pieces}]}

``pieces`` holds lists of indices into the class's ``cells``.  Approximate
diagrams share the header (``classes`` dropped) and add ``delta`` (null
when unbounded), ``vpls``, ``hpls`` and ``tiles: [{row, col, union}]``.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .approx import ApproxDiagram
from .core import Dataset, SkydiagError
from .grid import SCALE, CellGrid, DiagramPartition, build_subcell_grid

VERSION = 1
KINDS = ("quadrant", "global", "dynamic")
_HEADER = {"version", "kind", "d", "scale", "points", "axes"}
_EXACT = _HEADER | {"classes"}
_APPROX = _HEADER | {"delta", "vpls", "hpls", "tiles"}


class SchemaError(SkydiagError, ValueError):
    pass


def _header(kind, grid, dataset) -> dict:
    return {
        "version": VERSION,
        "kind": kind,
        "d": grid.d if grid is not None else dataset.d,
        "scale": SCALE,
        "points": [{"id": p.id, "coords": list(p.coords)} for p in dataset] if dataset is not None else None,
        "axes": [a.tolist() for a in grid.axes] if grid is not None else None,
    }


def diagram_to_dict(obj) -> dict:
    if isinstance(obj, ApproxDiagram):
        doc = _header(obj.kind, obj.grid, obj.dataset) if (obj.grid is not None or obj.dataset is not None) \
            else {"version": VERSION, "kind": obj.kind, "d": 2, "scale": SCALE, "points": None, "axes": None}
        doc.update({
            "delta": None if math.isinf(obj.delta) else obj.delta,
            "vpls": [int(v) for v in obj.vpls],
            "hpls": [int(v) for v in obj.hpls],
            "tiles": [{"row": r, "col": c, "union": list(u)} for (r, c), u in sorted(obj.tiles.items())],
        })
        return doc
    if isinstance(obj, DiagramPartition):
        doc = _header(obj.kind, obj.grid, obj.dataset)
        doc["classes"] = [
            {"id": c.id, "result": list(c.result), "cells": [list(x) for x in c.cells], "pieces": c.pieces}
            for c in obj.classes
        ]
        return doc
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def save_diagram(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(diagram_to_dict(obj), fh)


# ---------------------------------------------------------------------------
# loading

def _need(cond, field, msg):
    if not cond:
        raise SchemaError(f"{field}: {msg}")


def _int_list(value, field):
    _need(isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value),
          field, "expected a list of integers")
    return value


def _load_header(doc):
    _need(isinstance(doc, dict), "<root>", "expected an object")
    _need(doc.get("version") == VERSION, "version", f"expected {VERSION}, got {doc.get('version')!r}")
    is_approx = "tiles" in doc or "delta" in doc
    allowed = _APPROX if is_approx else _EXACT
    for key in doc:
        _need(key in allowed, key, "unknown field")
    for key in allowed:
        _need(key in doc, key, "missing field")
    _need(doc["kind"] in KINDS, "kind", f"expected one of {KINDS}")
    _need(isinstance(doc["d"], int) and doc["d"] >= 2, "d", "expected an integer >= 2")
    _need(doc["scale"] == SCALE, "scale", f"expected {SCALE}")
    d = doc["d"]
    dataset = grid = None
    if doc["points"] is not None or not is_approx:
        pts = doc["points"]
        _need(isinstance(pts, list), "points", "expected a list")
        coords = []
        for i, p in enumerate(pts):
            _need(isinstance(p, dict) and set(p) == {"id", "coords"}, f"points[{i}]", "expected {id, coords}")
            _need(p["id"] == i, f"points[{i}].id", "ids must be 0..n-1 in order")
            coords.append(_int_list(p["coords"], f"points[{i}].coords"))
            _need(len(p["coords"]) == d, f"points[{i}].coords", f"expected {d} coordinates")
        dataset = Dataset(np.array(coords, dtype=np.int64).reshape(len(coords), d))
    if doc["axes"] is not None or not is_approx:
        axes = doc["axes"]
        _need(isinstance(axes, list) and len(axes) == d, "axes", f"expected {d} lists")
        for k, a in enumerate(axes):
            _int_list(a, f"axes[{k}]")
        try:
            grid = CellGrid(tuple(axes))
        except ValueError as exc:
            raise SchemaError(f"axes: {exc}") from None
    return doc, is_approx, dataset, grid


def diagram_from_dict(doc):
    doc, is_approx, dataset, grid = _load_header(doc)
    if doc["kind"] == "dynamic" and dataset is not None and grid is not None:
        sub = build_subcell_grid(dataset)
        _need(all(np.array_equal(a, b) for a, b in zip(sub.axes, grid.axes)), "axes",
              "do not match the bisector lines of the points")
        grid = sub
    if is_approx:
        return _load_approx(doc, dataset, grid)
    return _load_exact(doc, dataset, grid)


def _load_exact(doc, dataset, grid):
    classes = doc["classes"]
    _need(isinstance(classes, list), "classes", "expected a list")
    class_of = np.full(grid.shape, -1, dtype=np.int64)
    piece_of = np.full(grid.shape, -1, dtype=np.int64)
    results, next_piece = [], 0
    for ci, cls in enumerate(classes):
        where = f"classes[{ci}]"
        _need(isinstance(cls, dict) and set(cls) == {"id", "result", "cells", "pieces"}, where,
              "expected {id, result, cells, pieces}")
        _need(cls["id"] == ci, f"{where}.id", "class ids must be 0..k-1 in order")
        result = tuple(_int_list(cls["result"], f"{where}.result"))
        _need(list(result) == sorted(set(result)), f"{where}.result", "ids must be strictly increasing")
        _need(all(0 <= i < dataset.n for i in result), f"{where}.result", "unknown point id")
        results.append(result)
        cells = cls["cells"]
        _need(isinstance(cells, list), f"{where}.cells", "expected a list")
        idx = []
        for k, cell in enumerate(cells):
            _int_list(cell, f"{where}.cells[{k}]")
            _need(len(cell) == grid.d and all(0 <= c < s for c, s in zip(cell, grid.shape)),
                  f"{where}.cells[{k}]", "cell outside the grid")
            _need(class_of[tuple(cell)] < 0, f"{where}.cells[{k}]", "cell listed twice")
            class_of[tuple(cell)] = ci
            idx.append(tuple(cell))
        pieces = cls["pieces"]
        _need(isinstance(pieces, list), f"{where}.pieces", "expected a list")
        covered = 0
        for k, piece in enumerate(pieces):
            _int_list(piece, f"{where}.pieces[{k}]")
            for ref in piece:
                _need(0 <= ref < len(idx), f"{where}.pieces[{k}]", "cell reference out of range")
                _need(piece_of[idx[ref]] < 0, f"{where}.pieces[{k}]", "cell in two pieces")
                piece_of[idx[ref]] = next_piece
                covered += 1
            next_piece += 1
        _need(covered == len(idx), f"{where}.pieces", "pieces do not cover the class cells")
    _need((class_of >= 0).all(), "classes", "cells missing from every class")
    return DiagramPartition(doc["kind"], grid, dataset, results, class_of, piece_of)


def _load_approx(doc, dataset, grid):
    delta = doc["delta"]
    _need(delta is None or (isinstance(delta, (int, float)) and delta >= 1), "delta", "expected a number >= 1 or null")
    vpls = _int_list(doc["vpls"], "vpls")
    hpls = _int_list(doc["hpls"], "hpls")
    for name, cuts in (("vpls", vpls), ("hpls", hpls)):
        _need(len(cuts) >= 2 and cuts[0] == 0 and all(a < b for a, b in zip(cuts, cuts[1:])), name,
              "expected strictly increasing cuts starting at 0")
    if grid is not None:
        _need(vpls[-1] == grid.shape[0], "vpls", "last cut must equal the column count")
        _need(hpls[-1] == grid.shape[1], "hpls", "last cut must equal the row count")
    tiles = {}
    _need(isinstance(doc["tiles"], list), "tiles", "expected a list")
    for k, t in enumerate(doc["tiles"]):
        _need(isinstance(t, dict) and set(t) == {"row", "col", "union"}, f"tiles[{k}]", "expected {row, col, union}")
        _need(isinstance(t["row"], int) and 0 <= t["row"] < len(hpls) - 1, f"tiles[{k}].row", "out of range")
        _need(isinstance(t["col"], int) and 0 <= t["col"] < len(vpls) - 1, f"tiles[{k}].col", "out of range")
        tiles[(t["row"], t["col"])] = tuple(_int_list(t["union"], f"tiles[{k}].union"))
    _need(len(tiles) == (len(hpls) - 1) * (len(vpls) - 1), "tiles", "tiles do not cover the band grid")
    return ApproxDiagram(math.inf if delta is None else delta, vpls, hpls, tiles, doc["kind"], grid, dataset)


def load_diagram(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"<root>: not valid JSON ({exc})") from None
    return diagram_from_dict(doc)
