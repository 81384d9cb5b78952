"""Synthetic datasets (INDE / CORR / ANTI) and CSV input/output."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import Dataset, SkydiagError

DISTRIBUTIONS = ("inde", "corr", "anti")
JITTER = 0.1  # jitter width as a fraction of the domain size
REAL_SCALE = 1000  # fixed-point factor for real-valued CSV columns


class ParseError(SkydiagError, ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    distribution: str = "inde"
    n: int = 100
    d: int = 2
    s: int = 1000
    distinct: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.n < 0 or self.d < 2 or self.s < 1:
            raise ValueError("need n >= 0, d >= 2, s >= 1")
        if self.distinct and self.n > self.s:
            raise ValueError(f"distinct mode needs n <= s, got n={self.n}, s={self.s}")


def _raw(cfg: GenConfig, rng: np.random.Generator) -> np.ndarray:
    n, d, s = cfg.n, cfg.d, cfg.s
    width = JITTER * s
    if cfg.distribution == "inde":
        return rng.uniform(0, s, (n, d))
    if cfg.distribution == "corr":
        base = rng.uniform(0, s, (n, 1))
        return base + rng.uniform(-width / 2, width / 2, (n, d))
    # anti: spread along the hyperplane sum(x) = d (s - 1) / 2, then jitter
    u = rng.uniform(0, s, (n, d))
    u += ((d * (s - 1) / 2) - u.sum(axis=1, keepdims=True)) / d
    return u + rng.uniform(-width / 2, width / 2, (n, d))


def generate(cfg: GenConfig) -> Dataset:
    """Deterministic integer dataset in [0, s)^d for a given seed."""
    rng = np.random.default_rng(cfg.seed)
    raw = _raw(cfg, rng)
    if not cfg.distinct:
        return Dataset(np.clip(np.floor(raw), 0, cfg.s - 1).astype(np.int64), domain=(cfg.s,) * cfg.d)
    # keep the order of the raw values but spread them over distinct integers
    coords = np.empty((cfg.n, cfg.d), dtype=np.int64)
    for k in range(cfg.d):
        values = np.sort(rng.choice(cfg.s, cfg.n, replace=False))
        order = np.lexsort((rng.random(cfg.n), raw[:, k]))
        coords[order, k] = values
    return Dataset(coords, domain=(cfg.s,) * cfg.d)


# ---------------------------------------------------------------------------
# CSV

def save_csv(dataset: Dataset, path_or_file) -> None:
    if hasattr(path_or_file, "write"):
        _write_rows(dataset, path_or_file)
        return
    with open(path_or_file, "w", newline="") as fh:
        _write_rows(dataset, fh)


def _write_rows(dataset: Dataset, fh) -> None:
    w = csv.writer(fh)
    w.writerow(["id"] + [f"x{k + 1}" for k in range(dataset.d)])
    for p in dataset:
        w.writerow([p.id, *p.coords])


def load_dataset_csv(path) -> Dataset:
    """Read the ``id,x1,...,xd`` format written by :func:`save_csv`."""
    with open(path, newline="") as fh:
        header = next(csv.reader(fh), None)
    if not header or header[0] != "id" or len(header) < 3:
        raise ParseError(f"{path}: expected header id,x1,...,xd")
    ds = load_csv(path, columns=header[1:], scale=1)
    return ds


def _number(text: str, row: int, col: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ParseError(f"row {row}: column {col!r} is not numeric: {text!r}") from None


def load_csv(path, columns=None, maximize=(), scale: int | None = None) -> Dataset:
    """Select numeric columns of a CSV file as a dataset.

    ``maximize`` names the columns where larger is better; they are negated.
    ``scale`` is a fixed-point factor applied before rounding.  By default
    it is 1 when every value is integral and ``REAL_SCALE`` otherwise.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if columns is None:
            columns = [f for f in fields if f != "id"]
        missing = [c for c in columns if c not in fields]
        if missing:
            raise ParseError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            rows.append([_number(rec[c], lineno, c) for c in columns])
    if len(columns) < 2:
        raise ParseError("need at least two columns")
    unknown = set(maximize) - set(columns)
    if unknown:
        raise ParseError(f"maximize names unselected column(s) {', '.join(sorted(unknown))}")
    arr = np.array(rows, dtype=np.float64).reshape(len(rows), len(columns))
    if scale is None:
        scale = 1 if np.all(arr == np.round(arr)) else REAL_SCALE
    if not np.isfinite(arr).all():
        bad = int(np.argwhere(~np.isfinite(arr))[0, 0]) + 2
        raise ParseError(f"row {bad}: non-finite value")
    sign = np.array([-1 if c in set(maximize) else 1 for c in columns])
    ints = np.rint(arr * scale).astype(np.int64) * sign
    return Dataset(ints.reshape(len(rows), len(columns)))

