"""Brute-force reference computations, independent of the package code paths."""

from __future__ import annotations

import itertools
import math

import numpy as np


# --- GF(2) linear algebra ---------------------------------------------------

def gf2_rank(rows: list[int]) -> int:
    """Rank over Z/2 of vectors given as int bitmasks."""
    basis: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                rank += 1
                break
    return rank


def gf2_nullspace(columns: list[int], n_rows: int) -> list[int]:
    """Basis of the kernel of the matrix whose j-th column is ``columns[j]``.

    Kernel vectors are bitmasks over the column indices.
    """
    # reduce columns, tracking which original columns were combined
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for j, col in enumerate(columns):
        combo = 1 << j
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                pc, pcombo = pivots[top]
                col ^= pc
                combo ^= pcombo
            else:
                pivots[top] = (col, combo)
                break
        if col == 0:
            kernel.append(combo)
    return kernel


# --- persistent Betti numbers ------------------------------------------------

def _boundary_cols(faces_index, simplices):
    cols = []
    for s in simplices:
        m = 0
        for f in itertools.combinations(s, len(s) - 1):
            m |= 1 << faces_index[f]
        cols.append(m)
    return cols


def persistent_betti(vertex_values, edges, edge_values, triangles, triangle_values, k, s, t):
    """dim of the image of H_k(K_s) -> H_k(K_t) for thresholds ``s <= t``.

    Computed as ``dim Z_k(K_s) - dim(Z_k(K_s) ∩ B_k(K_t))`` with plain
    Gaussian elimination; no filtration order is involved.
    """
    vv = list(vertex_values)
    edges = [tuple(sorted(e)) for e in edges]
    tris = [tuple(sorted(x)) for x in triangles]
    if k == 0:
        chains_s = [i for i, v in enumerate(vv) if v <= s]
        # Z_0 = all vertex chains; B_0(K_t) = image of edge boundaries
        z = [1 << i for i in chains_s]
        b = [(1 << a) | (1 << c) for (a, c), v in zip(edges, edge_values) if v <= t]
    elif k == 1:
        eidx = {e: i for i, e in enumerate(edges)}
        es = [i for i, v in enumerate(edge_values) if v <= s]
        bcols = [(1 << edges[i][0]) | (1 << edges[i][1]) for i in es]
        z = []
        for combo in gf2_nullspace(bcols, len(vv)):
            m = 0
            for j in range(len(es)):
                if combo >> j & 1:
                    m |= 1 << es[j]
            z.append(m)
        tt = [x for x, v in zip(tris, triangle_values) if v <= t]
        b = _boundary_cols(eidx, tt)
    else:
        raise ValueError(k)
    dz = gf2_rank(z)
    dzb = dz + gf2_rank(b) - gf2_rank(z + b)
    return dz - dzb


def betti_from_diagram(dots, s, t):
    """Number of dots alive across ``[s, t]``: birth <= s and death > t."""
    return sum(1 for b, d in dots if b <= s and d > t)


# --- diagram distances --------------------------------------------------------

def _sup(u, v):
    return max(abs(u[0] - v[0]), abs(u[1] - v[1]))


def _diag(u):
    return (u[1] - u[0]) / 2


def enumerate_matching_costs(a, b):
    """Yield the list of per-pair costs for every partial bijection.

    Unmatched dots go to the diagonal.  Only finite dots are supported.
    """
    a, b = list(map(tuple, a)), list(map(tuple, b))
    n, m = len(a), len(b)
    for r in range(min(n, m) + 1):
        for ia in itertools.combinations(range(n), r):
            for ib in itertools.permutations(range(m), r):
                costs = [_sup(a[i], b[j]) for i, j in zip(ia, ib)]
                costs += [_diag(a[i]) for i in range(n) if i not in ia]
                costs += [_diag(b[j]) for j in range(m) if j not in ib]
                yield costs


def brute_bottleneck(a, b):
    return min((max(c) if c else 0.0) for c in enumerate_matching_costs(a, b))


def brute_wasserstein(a, b, p=1.0):
    return min(sum(x ** p for x in c) for c in enumerate_matching_costs(a, b)) ** (1 / p)


# --- normal quantiles -------------------------------------------------------

def normal_cdf(x):
    return 0.5 * (1 + math.erf(x / math.sqrt(2)))


def normal_ppf_bisect(q, lo=-10.0, hi=10.0):
    for _ in range(200):
        mid = (lo + hi) / 2
        if normal_cdf(mid) < q:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# --- random test inputs -------------------------------------------------------

def random_filtered_complex(rng: np.random.Generator, max_vertices: int = 12, integer_values=True):
    """Random monotone filtration on a random 2-complex (not necessarily lower-star).

    Integer values produce plenty of ties.
    """
    n = int(rng.integers(1, max_vertices + 1))
    draw = (lambda size: rng.integers(0, 6, size).astype(float)) if integer_values \
        else (lambda size: rng.random(size))
    vv = draw(n)
    p_edge = rng.uniform(0.2, 0.8)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p_edge]
    eset = set(edges)
    ev = [max(vv[a], vv[b]) + (draw(1)[0] if rng.random() < 0.5 else 0.0) for a, b in edges]
    eval_of = dict(zip(edges, ev))
    p_tri = rng.uniform(0.1, 0.9)
    tris = [(a, b, c) for a, b, c in itertools.combinations(range(n), 3)
            if {(a, b), (a, c), (b, c)} <= eset and rng.random() < p_tri]
    tv = [max(eval_of[(a, b)], eval_of[(a, c)], eval_of[(b, c)])
          + (draw(1)[0] if rng.random() < 0.5 else 0.0) for a, b, c in tris]
    return vv, edges, ev, tris, tv
