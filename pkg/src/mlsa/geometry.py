"""Point clouds, ball queries and distance functions.

A :class:`PointCloud` wraps an ``(n, D)`` array (``D`` is 2 or 3) together
with a k-d tree built once at construction.  Point indices are stable and
are used as identifiers by every other module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree


class EmptyCloudError(ValueError):
    pass


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Immutable indexed point sample in R^2 or R^3."""

    points: np.ndarray
    tree: cKDTree = field(init=False, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1 and pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise ValueError(f"points must have shape (n, 2) or (n, 3), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "tree", cKDTree(pts) if len(pts) else None)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def _require_nonempty(self):
        if len(self) == 0:
            raise EmptyCloudError("empty cloud has no distance function")


def range_query(cloud: PointCloud, ball: Ball) -> list[int]:
    """Indices of all points with ``||p - center|| <= radius``, ascending."""
    if len(cloud) == 0:
        return []
    # the tree uses its own distance evaluation; re-check candidates exactly
    # so boundary points agree with a brute-force scan bit for bit
    cand = cloud.tree.query_ball_point(ball.center, ball.radius * (1 + 1e-12) + 1e-300)
    if not cand:
        return []
    cand = np.sort(np.asarray(cand, dtype=int))
    d = np.linalg.norm(cloud.points[cand] - ball.center, axis=1)
    return cand[d <= ball.radius].tolist()


def neighborhoods(cloud: PointCloud, centers: np.ndarray, radius: float) -> list[np.ndarray]:
    """Batched :func:`range_query` for many centers sharing one radius."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if len(cloud) == 0:
        return [np.empty(0, dtype=int) for _ in centers]
    cands = cloud.tree.query_ball_point(centers, radius * (1 + 1e-12) + 1e-300)
    out = []
    for c, cand in zip(centers, cands):
        cand = np.sort(np.asarray(cand, dtype=int))
        if cand.size:
            d = np.linalg.norm(cloud.points[cand] - c, axis=1)
            cand = cand[d <= radius]
        out.append(cand)
    return out


def dist_to_cloud(cloud: PointCloud, x) -> float | np.ndarray:
    """Distance from ``x`` to the nearest cloud point.

    ``x`` may be a single point or an ``(m, D)`` array of query points, in
    which case an array of ``m`` distances is returned.
    """
    cloud._require_nonempty()
    x = np.asarray(x, dtype=float)
    d, _ = cloud.tree.query(x, k=1)
    return float(d) if x.ndim == 1 else np.asarray(d, dtype=float)


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""
    if len(a) == 0 or len(b) == 0:
        raise EmptyCloudError("Hausdorff distance of an empty cloud is undefined")
    return float(max(dist_to_cloud(b, a.points).max(), dist_to_cloud(a, b.points).max()))


def load_points(path, labeled: bool = False) -> tuple[PointCloud, np.ndarray | None]:
    """Read the whitespace point-cloud format.

    One point per line, ``#`` comments.  With ``labeled=True`` the last
    column of every line is an integer label, returned as a second array;
    otherwise the label array is ``None``.
    """
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            coords = [float(t) for t in (toks[:-1] if labeled else toks)]
            label = int(toks[-1]) if labeled else None
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: cannot parse {line!r}") from exc
        if len(coords) not in (2, 3):
            raise ValueError(f"{path}:{lineno}: expected 2 or 3 coordinates, got {len(coords)}")
        rows.append((coords, label))
    if not rows:
        return PointCloud(np.empty((0, 2))), (np.empty(0, dtype=int) if labeled else None)
    if len({len(c) for c, _ in rows}) != 1:
        raise ValueError(f"{path}: mixed 2-D and 3-D points")
    pts = np.array([c for c, _ in rows], dtype=float)
    labels = np.array([lab for _, lab in rows], dtype=int) if labeled else None
    return PointCloud(pts), labels


def save_points(path, cloud: PointCloud, labels=None) -> None:
    with open(path, "w") as fh:
        for i, p in enumerate(cloud.points):
            toks = [repr(float(v)) for v in p]
            if labels is not None:
                toks.append(str(int(labels[i])))
            fh.write(" ".join(toks) + "\n")
