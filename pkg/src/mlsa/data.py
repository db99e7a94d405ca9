"""Synthetic stratified point clouds and labeled xyz ingestion."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import PointCloud

DISK_RADIUS = 0.4


def _line(dx, dy):
    """Full chord of the 0.4-disk through the origin along ``(dx, dy)``."""
    d = np.array([dx, dy], dtype=float)
    d /= np.linalg.norm(d)
    return (-DISK_RADIUS * d, DISK_RADIUS * d)


def _ray(dx, dy):
    d = np.array([dx, dy], dtype=float)
    d /= np.linalg.norm(d)
    return (np.zeros(2), DISK_RADIUS * d)


# each shape is a union of segments (start, end) inside the closed 0.4-disk
CROSSING_SHAPES = {
    "plus": [_line(1, 0), _line(0, 1)],
    "x": [_line(1, -2), _line(1, 3)],
    "y": [_ray(-1, 1), _ray(1, 1), _ray(0, -1)],
    "triple": [_line(1, 0), _line(0, 1), _line(1, 1)],
}


def crossing_segments(shape: str) -> list[tuple[np.ndarray, np.ndarray]]:
    try:
        return CROSSING_SHAPES[shape]
    except KeyError:
        raise ValueError(f"unknown crossing shape {shape!r}; "
                         f"choose from {sorted(CROSSING_SHAPES)}") from None


def sample_segments(segments, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform in arc length over a union of segments."""
    starts = np.array([s for s, _ in segments])
    ends = np.array([e for _, e in segments])
    lengths = np.linalg.norm(ends - starts, axis=1)
    which = rng.choice(len(segments), size=n, p=lengths / lengths.sum())
    t = rng.random(n)[:, None]
    return starts[which] + t * (ends[which] - starts[which])


def generate_crossing(shape: str, n: int, seed: int, jitter: float = 0.0) -> PointCloud:
    """Sample ``n`` points from one of the crossing shapes (plus, x, y, triple)."""
    segs = crossing_segments(shape)
    if n < 1:
        raise ValueError("need at least one point")
    rng = np.random.default_rng(seed)
    pts = sample_segments(segs, n, rng)
    if jitter:
        pts = pts + rng.normal(scale=jitter, size=pts.shape)
    return PointCloud(pts)


def generate_sides(which: str, n_segment: int, n_ambient: int, seed: int,
                   jitter: float = 0.0) -> tuple[PointCloud, np.ndarray]:
    """Dense segment ``x = 0, 0 <= y <= 1`` plus ambient points beside it.

    ``which="one"`` puts all ambient points in the unit square to the right;
    ``"both"`` splits them evenly between ``[-1, 0) x [0, 1]`` and
    ``[0, 1] x [0, 1]``.  Returns the cloud and a boolean mask flagging the
    segment points (they come first).
    """
    if which not in ("one", "both"):
        raise ValueError(f"which must be 'one' or 'both', got {which!r}")
    if n_segment < 1 or n_ambient < 1:
        raise ValueError("counts must be positive")
    rng = np.random.default_rng(seed)
    seg = np.column_stack([np.zeros(n_segment), rng.random(n_segment)])
    if which == "one":
        amb = rng.random((n_ambient, 2))
    else:
        left = n_ambient // 2
        amb_l = rng.random((left, 2))
        amb_l[:, 0] = -amb_l[:, 0]
        # rng.random is in [0, 1); keep the left half strictly negative
        amb_l[amb_l[:, 0] == 0, 0] = -np.finfo(float).tiny
        amb = np.vstack([amb_l, rng.random((n_ambient - left, 2))])
    pts = np.vstack([seg, amb])
    if jitter:
        pts = pts + rng.normal(scale=jitter, size=pts.shape)
    mask = np.zeros(len(pts), dtype=bool)
    mask[:n_segment] = True
    return PointCloud(pts), mask


@dataclass(frozen=True, eq=False)
class LabeledCloud:
    cloud: PointCloud
    label: int
    subset: int


@dataclass(frozen=True, eq=False)
class LabeledCloudSet:
    clouds: tuple[LabeledCloud, ...]
    source: str = ""
    labels: tuple[int, ...] = field(default=(0, 1))

    def __post_init__(self):
        keys = [(c.subset, c.label) for c in self.clouds]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (subset, label) entries")
        object.__setattr__(self, "clouds", tuple(self.clouds))

    def __len__(self) -> int:
        return len(self.clouds)

    @property
    def subset_ids(self) -> set[int]:
        return {c.subset for c in self.clouds}


def load_labeled_xyz(path, labels=(0, 1)) -> LabeledCloudSet:
    """Read ``x y [z] label subset_id`` lines into per-(subset, label) clouds.

    ``labels`` lists the two accepted label values; the first is class A.
    """
    path = Path(path)
    groups: dict[tuple[int, int], list] = {}
    ncoord = None
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) not in (4, 5):
            raise ValueError(f"{path}:{lineno}: expected 4 or 5 fields, got {len(toks)}")
        try:
            coords = [float(t) for t in toks[:-2]]
            label, subset = int(toks[-2]), int(toks[-1])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: cannot parse {line!r}") from exc
        if not all(np.isfinite(coords)):
            raise ValueError(f"{path}:{lineno}: non-finite coordinate")
        if ncoord is None:
            ncoord = len(coords)
        elif len(coords) != ncoord:
            raise ValueError(f"{path}:{lineno}: mixed 2-D and 3-D rows")
        if label not in labels:
            raise ValueError(f"{path}:{lineno}: unknown label {label}")
        groups.setdefault((subset, label), []).append(coords)
    clouds = [LabeledCloud(PointCloud(np.array(p)), lab, sub)
              for (sub, lab), p in sorted(groups.items())]
    return LabeledCloudSet(tuple(clouds), str(path), tuple(labels))


def save_labeled_xyz(path, sets: LabeledCloudSet) -> None:
    with open(path, "w") as fh:
        for c in sets.clouds:
            for p in c.cloud.points.tolist():
                fh.write(" ".join(repr(v) for v in p) + f" {c.label} {c.subset}\n")


def split(sets: LabeledCloudSet, train_ids, test_ids) -> tuple[LabeledCloudSet, LabeledCloudSet]:
    """Partition by subset id."""
    train_ids, test_ids = set(train_ids), set(test_ids)
    if not train_ids or not test_ids:
        raise ValueError("train and test id lists must be non-empty")
    if train_ids & test_ids:
        raise ValueError(f"subset ids in both lists: {sorted(train_ids & test_ids)}")
    missing = (train_ids | test_ids) - sets.subset_ids
    if missing:
        raise ValueError(f"subset ids not present: {sorted(missing)}")
    pick = lambda ids: LabeledCloudSet(tuple(c for c in sets.clouds if c.subset in ids),
                                       sets.source, sets.labels)
    return pick(train_ids), pick(test_ids)
