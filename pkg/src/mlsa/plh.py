"""Persistent local homology on a discretized sphere.

The sphere ``S_R(z)`` is replaced by a regular polygon (2-D) or a subdivided
icosahedron (3-D).  Each vertex gets the distance to the cloud, higher
simplices take the max over their vertices, and the diagram of that
lower-star filtration approximates the persistence of the distance function
restricted to the sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .diagrams import top_k_persistences
from .geometry import PointCloud, dist_to_cloud
from .persistence import FilteredComplex, PersistenceDiagram, persistence

DEFAULT_RESOLUTION = {2: 360, 3: 4}


@dataclass(frozen=True, eq=False)
class SphereComplex:
    center: np.ndarray
    radius: float
    resolution: int
    complex: FilteredComplex

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def vertices(self) -> np.ndarray:
        return _template(self.dim, self.resolution)[0] * self.radius + self.center

    @property
    def max_edge_length(self) -> float:
        return _template(self.dim, self.resolution)[3] * self.radius


def _icosahedron():
    phi = (1 + 5 ** 0.5) / 2
    v = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    return v / np.linalg.norm(v, axis=1, keepdims=True), f


def icosphere(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit icosphere: ``level`` rounds of 1-to-4 triangle splits.

    Edge midpoints are pushed onto the sphere.  Vertices of coarser levels
    keep their indices, so level ``L`` vertices are a prefix of level
    ``L + 1``.
    """
    verts, faces = _icosahedron()
    verts = list(verts)
    for _ in range(level):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in midpoint:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        new = []
        for a, b, c in faces.tolist():
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        faces = np.array(new)
    return np.array(verts), faces


def _edges_of(faces: np.ndarray) -> np.ndarray:
    e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [0, 2]]])
    return np.unique(np.sort(e, axis=1), axis=0)


@lru_cache(maxsize=None)
def _template(dim: int, resolution: int):
    """Unit-sphere vertices, edges, triangles and max edge length (cached)."""
    if dim == 2:
        if resolution < 3:
            raise ValueError(f"a circle needs at least 3 vertices, got {resolution}")
        theta = 2 * np.pi * np.arange(resolution) / resolution
        verts = np.column_stack([np.cos(theta), np.sin(theta)])
        # exact values at the quarter points keep the 4-gon clean
        verts[np.isclose(verts, 0, atol=1e-15)] = 0.0
        idx = np.arange(resolution)
        edges = np.sort(np.column_stack([idx, (idx + 1) % resolution]), axis=1)
        tris = np.empty((0, 3), dtype=int)
    elif dim == 3:
        if resolution < 0:
            raise ValueError(f"subdivision level must be non-negative, got {resolution}")
        verts, tris = icosphere(resolution)
        tris = np.sort(tris, axis=1)
        edges = _edges_of(tris)
    else:
        raise ValueError(f"only 2-D and 3-D spheres are supported, got D={dim}")
    for arr in (verts, edges, tris):
        arr.setflags(write=False)
    h = float(np.linalg.norm(verts[edges[:, 0]] - verts[edges[:, 1]], axis=1).max())
    return verts, edges, tris, h


def build_sphere_complex(z, R: float, resolution: int | None = None,
                         min_resolution: bool = True) -> SphereComplex:
    """Discretize ``S_R(z)``; filtration values are left at zero.

    ``resolution`` is the vertex count of the polygon in 2-D and the
    subdivision level in 3-D.  Working resolutions must be at least 8
    (2-D) or 2 (3-D); pass ``min_resolution=False`` to build coarser
    shapes for inspection.
    """
    z = np.asarray(z, dtype=float)
    if not R > 0:
        raise ValueError(f"radius must be positive, got {R}")
    dim = len(z)
    if dim not in (2, 3):
        raise ValueError(f"only 2-D and 3-D spheres are supported, got D={dim}")
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[dim]
    resolution = int(resolution)
    if min_resolution and resolution < (8 if dim == 2 else 2):
        raise ValueError(f"resolution {resolution} too coarse for a {dim}-D sphere")
    verts, edges, tris, _ = _template(dim, resolution)
    cx = FilteredComplex(np.zeros(len(verts)), edges, np.zeros(len(edges)),
                         tris, np.zeros(len(tris)))
    return SphereComplex(z, float(R), resolution, cx)


def _diagram_from_values(values: np.ndarray, dim: int, resolution: int, k: int) -> PersistenceDiagram:
    _, edges, tris, _ = _template(dim, resolution)
    cx = FilteredComplex.lower_star(values, edges, tris)
    return persistence(cx, k, check=False)


def sphere_values(cloud: PointCloud, z, R: float, resolution: int | None = None) -> np.ndarray:
    """Distance-to-cloud at every vertex of the discretized sphere."""
    z = np.asarray(z, dtype=float)
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[len(z)]
    verts = _template(len(z), resolution)[0]
    return dist_to_cloud(cloud, verts * R + z)


def plh_diagram(cloud: PointCloud, z, R: float, k: int,
                resolution: int | None = None) -> PersistenceDiagram:
    """PLH_k(cloud, z, R) on the default (or given) sphere discretization."""
    z = np.asarray(z, dtype=float)
    if len(z) != cloud.dim:
        raise ValueError(f"center has dimension {len(z)}, cloud has {cloud.dim}")
    sphere = build_sphere_complex(z, R, resolution)
    values = sphere_values(cloud, z, R, sphere.resolution)
    return _diagram_from_values(values, sphere.dim, sphere.resolution, k)


def plh_diagram_on(sphere: SphereComplex, cloud: PointCloud, k: int) -> PersistenceDiagram:
    """PLH on a prebuilt sphere complex (lets two clouds share one sphere)."""
    values = dist_to_cloud(cloud, sphere.vertices)
    return _diagram_from_values(values, sphere.dim, sphere.resolution, k)


def _check_radii(radii) -> np.ndarray:
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if len(radii) == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError(f"radii must be positive and strictly increasing, got {radii.tolist()}")
    return radii


def plh_features(cloud: PointCloud, z, radii, spec, resolution: int | None = None) -> np.ndarray:
    """Top-k persistences for each radius and degree.

    ``spec`` is a sequence of ``(degree, count)`` pairs, e.g. ``[(0, 6)]``.
    Output blocks are ordered by radius, then by the order of ``spec``;
    every diagram is capped at its own radius.
    """
    return plh_features_batch(cloud, np.atleast_2d(z), radii, spec, resolution)[0]


def plh_features_batch(cloud: PointCloud, centers, radii, spec,
                       resolution: int | None = None) -> np.ndarray:
    """:func:`plh_features` for many centers, one row per center."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = _check_radii(radii)
    dim = centers.shape[1]
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[dim]
    spec = [(int(k), int(c)) for k, c in spec]
    width = sum(c for _, c in spec)
    out = np.zeros((len(centers), len(radii) * width))
    if len(cloud) == 0:
        return out
    verts = _template(dim, resolution)[0]
    for ri, R in enumerate(radii):
        # one k-d tree query for all sphere vertices of all centers
        q = (centers[:, None, :] + R * verts[None, :, :]).reshape(-1, dim)
        vals = dist_to_cloud(cloud, q).reshape(len(centers), len(verts))
        for i in range(len(centers)):
            col = ri * width
            for k, cnt in spec:
                dgm = _diagram_from_values(vals[i], dim, resolution, k)
                out[i, col:col + cnt] = top_k_persistences(dgm, cnt, cap=R)
                col += cnt
    return out
