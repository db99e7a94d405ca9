"""Sublevel-set persistence of filtered 2-complexes over Z/2.

Degree 0 uses a union-find sweep with the elder rule; degree 1 reduces the
triangle boundary columns.  Simplices are processed in the order
``(value, dimension, sorted vertex tuple)``; vertices of equal value are
ordered by index, so ties in the elder rule kill the larger index.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Vertices, edges and triangles with one filtration value each.

    Edges and triangles are stored with sorted vertex indices.  Use
    :meth:`lower_star` to build a complex whose higher simplices take the
    max of their vertex values.
    """

    vertex_values: np.ndarray
    edges: np.ndarray
    edge_values: np.ndarray
    triangles: np.ndarray
    triangle_values: np.ndarray

    def __post_init__(self):
        vv = np.asarray(self.vertex_values, dtype=float).reshape(-1)
        e = np.sort(np.asarray(self.edges, dtype=np.int64).reshape(-1, 2), axis=1)
        ev = np.asarray(self.edge_values, dtype=float).reshape(-1)
        t = np.sort(np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3), axis=1)
        tv = np.asarray(self.triangle_values, dtype=float).reshape(-1)
        if len(e) != len(ev) or len(t) != len(tv):
            raise ValueError("one filtration value per simplex required")
        for name, arr in (("vertex", vv), ("edge", ev), ("triangle", tv)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} filtration values must be finite")
        for name, arr in (("vertex_values", vv), ("edges", e), ("edge_values", ev),
                          ("triangles", t), ("triangle_values", tv)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def lower_star(cls, vertex_values, edges, triangles=()) -> "FilteredComplex":
        vv = np.asarray(vertex_values, dtype=float)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        t = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        return cls(vv, e, vv[e].max(axis=1) if len(e) else np.empty(0),
                   t, vv[t].max(axis=1) if len(t) else np.empty(0))

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_values)

    def with_vertex_values(self, values) -> "FilteredComplex":
        """Same combinatorics, new lower-star values."""
        return FilteredComplex.lower_star(values, self.edges, self.triangles)

    def validate(self) -> None:
        """Check faces are present and values never decrease along cofaces."""
        n = self.n_vertices
        e, t = self.edges, self.triangles
        if (len(e) and (e.min() < 0 or e.max() >= n)) or (len(t) and (t.min() < 0 or t.max() >= n)):
            raise FiltrationError("simplex refers to a missing vertex")
        if len(e) and np.any(e[:, 0] == e[:, 1]):
            raise FiltrationError("degenerate edge")
        vv = self.vertex_values
        if len(e) and np.any(self.edge_values < vv[e].max(axis=1)):
            raise FiltrationError("filtration violates face ordering")
        if len(t):
            index = {(int(a), int(b)): i for i, (a, b) in enumerate(e)}
            for (a, b, c), val in zip(t.tolist(), self.triangle_values.tolist()):
                for face in ((a, b), (a, c), (b, c)):
                    j = index.get(face)
                    if j is None:
                        raise FiltrationError(f"triangle {(a, b, c)} is missing edge {face}")
                    if val < self.edge_values[j]:
                        raise FiltrationError("filtration violates face ordering")


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Off-diagonal dots ``(birth, death)`` of one homology degree."""

    degree: int
    dots: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dots, dtype=float).reshape(-1, 2)
        if np.any(np.isnan(d)) or np.any(d[:, 1] < d[:, 0]):
            raise ValueError("every dot needs birth <= death")
        d = d[d[:, 1] > d[:, 0]]
        # canonical order: by birth, then death
        d = d[np.lexsort((d[:, 1], d[:, 0]))]
        d.setflags(write=False)
        object.__setattr__(self, "dots", d)

    def __len__(self) -> int:
        return len(self.dots)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PersistenceDiagram) and self.degree == other.degree
                and self.dots.shape == other.dots.shape and bool(np.all(self.dots == other.dots)))

    @property
    def persistences(self) -> np.ndarray:
        return self.dots[:, 1] - self.dots[:, 0]

    @property
    def finite(self) -> np.ndarray:
        return self.dots[np.isfinite(self.dots[:, 1])]

    @property
    def essential(self) -> np.ndarray:
        return self.dots[~np.isfinite(self.dots[:, 1])]


def _vertex_order(c: FilteredComplex) -> np.ndarray:
    return np.lexsort((np.arange(c.n_vertices), c.vertex_values))


def _edge_order(c: FilteredComplex) -> np.ndarray:
    e = c.edges
    return np.lexsort((e[:, 1], e[:, 0], c.edge_values)) if len(e) else np.empty(0, dtype=int)


def _check(c: FilteredComplex, check: bool) -> None:
    if check:
        c.validate()


def _union_find_sweep(c: FilteredComplex):
    """Degree-0 pairs plus the filtration-ordered list of cycle-creating edges."""
    vv = c.vertex_values
    # age key of a vertex: its position in the vertex order
    rank = np.empty(c.n_vertices, dtype=np.int64)
    rank[_vertex_order(c)] = np.arange(c.n_vertices)
    rank = rank.tolist()
    parent = list(range(c.n_vertices))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    pairs = []
    positive = []
    order = _edge_order(c)
    edges = c.edges[order].tolist()
    evals = c.edge_values[order].tolist()
    vlist = vv.tolist()
    for k, ((a, b), val) in enumerate(zip(edges, evals)):
        ra, rb = find(a), find(b)
        if ra == rb:
            positive.append(k)
            continue
        # roots always hold the oldest vertex of their component
        if rank[ra] > rank[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        if vlist[rb] < val:
            pairs.append((vlist[rb], val))
    roots = {find(v) for v in range(c.n_vertices)}
    pairs.extend((vlist[r], np.inf) for r in sorted(roots))
    return pairs, order, positive


def persistence_deg0(complex: FilteredComplex, check: bool = True) -> PersistenceDiagram:
    """Degree-0 diagram: one dot per merge, one infinite dot per component."""
    _check(complex, check)
    pairs, _, _ = _union_find_sweep(complex)
    return PersistenceDiagram(0, np.array(pairs, dtype=float).reshape(-1, 2))


def persistence_deg1(complex: FilteredComplex, check: bool = True) -> PersistenceDiagram:
    """Degree-1 diagram by column reduction of the triangle boundary matrix.

    Rows are edges in filtration order; columns are triangles in filtration
    order.  Each column is kept as a Python int bitset, so adding columns is
    a single xor.  Cycle-creating edges left unpaired are essential.
    """
    _check(complex, check)
    c = complex
    _, edge_order, positive = _union_find_sweep(c)
    evals = c.edge_values[edge_order]
    pos_in_order = np.empty(len(edge_order), dtype=np.int64)
    pos_in_order[edge_order] = np.arange(len(edge_order))
    index = {(int(a), int(b)): int(pos_in_order[i]) for i, (a, b) in enumerate(c.edges)}

    t = c.triangles
    tri_order = (np.lexsort((t[:, 2], t[:, 1], t[:, 0], c.triangle_values))
                 if len(t) else np.empty(0, dtype=int))
    low_owner: dict[int, int] = {}
    reduced: list[int] = []
    death_of: dict[int, float] = {}
    for j in tri_order.tolist():
        a, b, cc = t[j].tolist()
        col = (1 << index[(a, b)]) | (1 << index[(a, cc)]) | (1 << index[(b, cc)])
        while col:
            low = col.bit_length() - 1
            other = low_owner.get(low)
            if other is None:
                low_owner[low] = len(reduced)
                death_of[low] = float(c.triangle_values[j])
                break
            col ^= reduced[other]
        reduced.append(col)

    dots = []
    for k in positive:
        birth = float(evals[k])
        dots.append((birth, death_of.get(k, np.inf)))
    return PersistenceDiagram(1, np.array(dots, dtype=float).reshape(-1, 2))


def persistence(complex: FilteredComplex, degree: int, check: bool = True) -> PersistenceDiagram:
    if degree == 0:
        return persistence_deg0(complex, check)
    if degree == 1:
        return persistence_deg1(complex, check)
    raise ValueError(f"only degrees 0 and 1 are supported, got {degree}")


def restrict_to_cap(diagram: PersistenceDiagram, cap: float) -> PersistenceDiagram:
    """Drop dots born at or after ``cap`` and clamp deaths (incl. infinity) to ``cap``."""
    d = diagram.dots
    d = d[d[:, 0] < cap]
    d = np.column_stack([d[:, 0], np.minimum(d[:, 1], cap)])
    return PersistenceDiagram(diagram.degree, d)


def write_diagrams(path, diagrams) -> None:
    """Write ``k birth death`` lines; infinite deaths are written as ``inf``."""
    with open(path, "w") as fh:
        for dgm in diagrams:
            for b, d in dgm.dots.tolist():
                fh.write(f"{dgm.degree} {b!r} {'inf' if np.isinf(d) else repr(d)}\n")


def read_diagrams(path) -> dict[int, PersistenceDiagram]:
    rows: dict[int, list] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            k, b, d = line.split()
            rows.setdefault(int(k), []).append((float(b), float(d)))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad diagram line {line!r}") from exc
    return {k: PersistenceDiagram(k, np.array(v)) for k, v in sorted(rows.items())}
