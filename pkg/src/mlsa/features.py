"""Feature layouts, standardization and equal-probability binning."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.stats import norm

# widths of the (mlpca, plh, coords) blocks
LAYOUTS = {
    "crossing-36": (18, 18, 0),
    "sides-14": (12, 2, 0),
    "lidar-31": (24, 4, 3),
}

DECILE_BOUNDARIES = (-np.inf, -1.2816, -0.8416, -0.5244, -0.2533, 0.0,
                    0.2533, 0.5244, 0.8416, 1.2816, np.inf)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    layout: str
    columns: tuple[str, ...]
    values: np.ndarray
    labels: np.ndarray
    blocks: dict = field(default_factory=dict)  # block name -> column slice

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("feature values must be a 2-D array")
        y = np.asarray(self.labels).reshape(-1)
        if len(y) != len(v):
            raise ValueError(f"{len(v)} rows but {len(y)} labels")
        if len(self.columns) != v.shape[1]:
            raise ValueError(f"{v.shape[1]} columns but {len(self.columns)} names")
        if len(y) and not np.all(np.isin(y, (-1, 1))):
            raise ValueError("labels must be -1 or +1")
        if self.layout in LAYOUTS and v.shape[1] != sum(LAYOUTS[self.layout]):
            raise ValueError(f"layout {self.layout} needs {sum(LAYOUTS[self.layout])} columns, "
                             f"got {v.shape[1]}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "labels", y.astype(int))
        object.__setattr__(self, "columns", tuple(self.columns))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def select(self, blocks) -> "FeatureMatrix":
        """Column mask keeping the named blocks, in matrix order."""
        cols = np.zeros(self.n_features, dtype=bool)
        for b in blocks:
            if b not in self.blocks:
                raise KeyError(f"no block {b!r} in layout {self.layout}")
            cols[self.blocks[b]] = True
        idx = np.flatnonzero(cols)
        return FeatureMatrix(f"{self.layout}[{'+'.join(blocks)}]",
                             tuple(self.columns[i] for i in idx),
                             self.values[:, idx], self.labels, {})

    def with_values(self, values) -> "FeatureMatrix":
        return replace(self, values=values)

    def concat(self, other: "FeatureMatrix") -> "FeatureMatrix":
        if self.columns != other.columns:
            raise ValueError("cannot stack matrices with different columns")
        return FeatureMatrix(self.layout, self.columns, np.vstack([self.values, other.values]),
                             np.concatenate([self.labels, other.labels]), self.blocks)


def mlpca_column_names(radii, dim: int) -> list[str]:
    axes = "xyz"[:dim]
    names = []
    for R in radii:
        names += [f"mlpca_r{R:g}_eval{i + 1}" for i in range(dim)]
        names += [f"mlpca_r{R:g}_evec{i + 1}_{a}" for i in range(dim) for a in axes]
    return names


def plh_column_names(radii, spec) -> list[str]:
    return [f"plh_r{R:g}_h{k}_{j + 1}" for R in radii for k, c in spec for j in range(c)]


def assemble(layout: str, mlpca_part, plh_part, coords=None, labels=None,
             mlpca_names=None, plh_names=None) -> FeatureMatrix:
    """Concatenate MLPCA, PLH and (optionally) coordinate blocks.

    Named layouts check each block width; ``"generic"`` accepts any widths.
    """
    mlpca_part = np.atleast_2d(np.asarray(mlpca_part, dtype=float))
    plh_part = np.atleast_2d(np.asarray(plh_part, dtype=float))
    parts = {"mlpca": mlpca_part, "plh": plh_part}
    if coords is not None:
        parts["coords"] = np.atleast_2d(np.asarray(coords, dtype=float))
    if layout in LAYOUTS:
        for (name, arr), want in zip((("mlpca", mlpca_part), ("plh", plh_part),
                                      ("coords", parts.get("coords"))), LAYOUTS[layout]):
            got = 0 if arr is None else arr.shape[1]
            if got != want:
                raise ValueError(f"layout {layout}: {name} block has width {got}, expected {want}")
    elif layout != "generic":
        raise ValueError(f"unknown layout {layout!r}")
    n = len(mlpca_part)
    for name, arr in parts.items():
        if len(arr) != n:
            raise ValueError(f"{name} block has {len(arr)} rows, expected {n}")
    names = []
    blocks = {}
    start = 0
    for name, arr in parts.items():
        given = {"mlpca": mlpca_names, "plh": plh_names}.get(name)
        if given is None:
            given = [f"{name}_{j}" for j in range(arr.shape[1])] if name != "coords" \
                else ["x", "y", "z"][:arr.shape[1]]
        if len(given) != arr.shape[1]:
            raise ValueError(f"{name} block: {len(given)} names for {arr.shape[1]} columns")
        names += list(given)
        blocks[name] = slice(start, start + arr.shape[1])
        start += arr.shape[1]
    if labels is None:
        labels = np.ones(n, dtype=int)
    return FeatureMatrix(layout, tuple(names), np.hstack(list(parts.values())), labels, blocks)


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    def apply(self, m: FeatureMatrix) -> FeatureMatrix:
        ok = self.std >= 1e-12
        out = np.zeros_like(m.values)
        out[:, ok] = (m.values[:, ok] - self.mean[ok]) / self.std[ok]
        return m.with_values(out)


def standardize(train: FeatureMatrix, apply_to: FeatureMatrix | None = None):
    """Z-score with train-set mean and population standard deviation.

    Columns whose deviation is below 1e-12 map to zero.  Returns the
    transformed ``apply_to`` (``train`` if omitted) and the fitted
    :class:`Standardizer`.
    """
    if len(train) == 0:
        raise ValueError("cannot standardize with an empty training set")
    st = Standardizer(train.values.mean(axis=0), train.values.std(axis=0))
    return st.apply(train if apply_to is None else apply_to), st


@dataclass(frozen=True)
class BinningSpec:
    boundaries: tuple[float, ...] = DECILE_BOUNDARIES
    representatives: tuple[float, ...] = tuple(norm.ppf((np.arange(1, 11) - 0.5) / 10))

    def __post_init__(self):
        b, r = np.asarray(self.boundaries), np.asarray(self.representatives)
        if len(b) != len(r) + 1:
            raise ValueError("need one more boundary than representatives")
        if np.any(np.diff(b) <= 0):
            raise ValueError("bin boundaries must be strictly increasing")
        if np.any(r <= b[:-1]) or np.any(r >= b[1:]):
            raise ValueError("each representative must lie strictly inside its bin")

    def bin_index(self, x) -> np.ndarray:
        """1-based bin number using left-closed intervals ``[b_i, b_i+1)``."""
        x = np.asarray(x, dtype=float)
        if np.any(np.isnan(x)):
            raise ValueError("cannot bin NaN")
        return np.searchsorted(np.asarray(self.boundaries[1:-1]), x, side="right") + 1


def discretize(m: FeatureMatrix, spec: BinningSpec | None = None) -> FeatureMatrix:
    """Replace every entry by its bin's representative value."""
    spec = spec or BinningSpec()
    reps = np.asarray(spec.representatives)
    return m.with_values(reps[spec.bin_index(m.values) - 1])


def write_csv(path, m: FeatureMatrix) -> None:
    """Header of column names plus ``label``, one numeric row per point."""
    with open(path, "w") as fh:
        fh.write(",".join(m.columns + ("label",)) + "\n")
        for row, y in zip(m.values.tolist(), m.labels.tolist()):
            fh.write(",".join(repr(v) for v in row) + f",{y}\n")


def read_csv(path, layout: str = "generic") -> FeatureMatrix:
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    if header[-1] != "label":
        raise ValueError(f"{path}: last column must be 'label'")
    data = np.array([ln.split(",") for ln in lines[1:] if ln], dtype=float).reshape(-1, len(header))
    return FeatureMatrix(layout, tuple(header[:-1]), data[:, :-1], data[:, -1].astype(int))
