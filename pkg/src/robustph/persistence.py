"""Persistent homology over Z/2.

Two routes compute the same diagrams:

* :func:`persistent_homology` reduces the explicit boundary matrix of a
  :class:`~robustph.rips.Filtration` (column reduction with clearing).
* :func:`rips_persistence` never materialises the filtration; it runs the
  compiled cohomology kernel in :mod:`robustph._cohomology` directly on the
  distance matrix and is the route used by the experiments.

:func:`brute_force_betti` is a third, independent check that builds dense
boundary matrices at a single scale.
"""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .diagram import PersistenceDiagram
from .exceptions import InputError
from .metricspace import check_distance_matrix
from .rips import resolve_threshold

__all__ = [
    "persistent_homology",
    "rips_persistence",
    "betti_at_scale",
    "betti_profile",
    "brute_force_betti",
    "dominant_feature",
    "boundary_matrices",
    "PersistenceDiagram",
]


def _position_maps(filtration):
    """Map every simplex to its position in filtration order."""
    pos = [np.empty(len(v), dtype=np.intp) for v in filtration.values]
    for p, (k, i) in enumerate(filtration.order):
        pos[k][i] = p
    lookup = [
        {tuple(row): int(pos[k][i]) for i, row in enumerate(filtration.faces[k].tolist())}
        for k in range(len(filtration.faces))
    ]
    return pos, lookup


def persistent_homology(filtration, max_hom_dim=1):
    """Persistence diagram of a filtration by boundary-matrix reduction.

    Columns are reduced dimension by dimension from the top down; whenever
    a column of dimension ``k`` gets pivot ``p``, column ``p`` is known to
    reduce to zero and is skipped ("clearing").

    Parameters
    ----------
    filtration : Filtration
    max_hom_dim : int, default=1
        Highest homology dimension reported. The filtration must contain
        simplices up to ``max_hom_dim + 1``.

    Returns
    -------
    PersistenceDiagram
    """
    max_hom_dim = int(max_hom_dim)
    if max_hom_dim < 0:
        raise InputError("max_hom_dim must be >= 0")
    if filtration.max_dim < max_hom_dim + 1:
        raise InputError(
            f"filtration has max_dim={filtration.max_dim}; homology in dimension "
            f"{max_hom_dim} needs simplices up to dimension {max_hom_dim + 1}"
        )
    top = max_hom_dim + 1
    pos, lookup = _position_maps(filtration)
    value_at = np.empty(len(filtration))
    for k, vals in enumerate(filtration.values):
        value_at[pos[k]] = vals
    dim_at = filtration.order[:, 0]

    low_owner = {}   # pivot position -> column position
    cleared = set()
    reduced = {}
    for k in range(top, 0, -1):
        faces = filtration.faces[k]
        cols = np.argsort(pos[k], kind="stable")
        for i in cols:
            j = int(pos[k][i])
            if j in cleared:
                continue
            verts = tuple(faces[i].tolist())
            col = {lookup[k - 1][verts[:r] + verts[r + 1:]] for r in range(k + 1)}
            while col:
                p = max(col)
                owner = low_owner.get(p)
                if owner is None:
                    low_owner[p] = j
                    reduced[j] = col
                    cleared.add(p)
                    break
                col ^= reduced[owner]

    dims, births, deaths = [], [], []
    for p, j in low_owner.items():
        d = int(dim_at[p])
        if d > max_hom_dim:
            continue
        b, e = value_at[p], value_at[j]
        if e > b:
            dims.append(d)
            births.append(b)
            deaths.append(e)
    killers = set(low_owner.values())
    for p in range(len(value_at)):
        d = int(dim_at[p])
        if d > max_hom_dim or p in low_owner or p in killers:
            continue
        dims.append(d)
        births.append(value_at[p])
        deaths.append(math.inf)
    return PersistenceDiagram(dims, births, deaths)


def rips_persistence(D, max_hom_dim=1, threshold=None):
    """Rips persistence diagram straight from a distance matrix.

    Same output contract as ``persistent_homology(rips_filtration(D,
    max_hom_dim + 1, threshold), max_hom_dim)`` but with simplices generated
    on the fly by a compiled kernel.
    """
    from ._cohomology import compute_rips_persistence

    D = check_distance_matrix(D)
    max_hom_dim = int(max_hom_dim)
    if max_hom_dim < 0:
        raise InputError("max_hom_dim must be >= 0")
    thr = resolve_threshold(D, threshold)
    dims, births, deaths = compute_rips_persistence(D, max_hom_dim, thr)
    return PersistenceDiagram(dims, births, deaths)


def betti_at_scale(dgm, dim, t):
    """Number of bars of dimension ``dim`` alive at scale ``t`` (birth <= t < death)."""
    t = float(t)
    if t < 0:
        raise InputError("scale must be >= 0")
    mask = (dgm.dims == dim) & (dgm.births <= t) & (t < dgm.deaths)
    return int(mask.sum())


def betti_profile(dgm, dim):
    """Betti number of ``dim`` after each event scale.

    Returns
    -------
    list of (scale, betti)
        Scales strictly increasing; the Betti number holds on
        ``[scale, next_scale)``.
    """
    bars = dgm.in_dim(dim)
    events = np.unique(np.concatenate([bars[:, 0], bars[:, 1][np.isfinite(bars[:, 1])]]))
    return [(float(s), betti_at_scale(dgm, dim, s)) for s in events]


def _gf2_rank(M):
    M = (np.asarray(M, dtype=np.uint8) & 1).copy()
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        hits = np.nonzero(M[rank:, c])[0]
        if len(hits) == 0:
            continue
        r = rank + hits[0]
        if r != rank:
            M[[rank, r]] = M[[r, rank]]
        below = np.nonzero(M[:, c])[0]
        below = below[below != rank]
        M[below] ^= M[rank]
        rank += 1
    return rank


def boundary_matrices(D, t, max_dim):
    """Dense Z/2 boundary matrices of the Rips complex at fixed scale ``t``.

    Simplices are enumerated as vertex subsets (no clique search).

    Returns
    -------
    simplices : list of list of tuple
        ``simplices[k]`` lists the k-simplices present at scale ``t``.
    boundaries : list of ndarray
        ``boundaries[k]`` has shape ``(len(simplices[k-1]), len(simplices[k]))``;
        ``boundaries[0]`` is an empty ``(0, n)`` matrix.
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    simplices = []
    for k in range(max_dim + 1):
        simplices.append(
            [
                s
                for s in combinations(range(n), k + 1)
                if all(D[a, b] <= t for a, b in combinations(s, 2))
            ]
        )
    boundaries = [np.zeros((0, len(simplices[0])), dtype=np.uint8)]
    for k in range(1, max_dim + 1):
        index = {s: i for i, s in enumerate(simplices[k - 1])}
        B = np.zeros((len(simplices[k - 1]), len(simplices[k])), dtype=np.uint8)
        for j, s in enumerate(simplices[k]):
            for r in range(k + 1):
                B[index[s[:r] + s[r + 1:]], j] = 1
        boundaries.append(B)
    return simplices, boundaries


def brute_force_betti(D, dim, t, max_dim=None):
    """Betti number of the Rips complex at scale ``t`` by dense linear algebra.

    Computes ``nullity(boundary_dim) - rank(boundary_{dim+1})`` over Z/2.
    Meant for tiny inputs only (``n <= 10``).
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if n > 10:
        raise InputError(f"brute-force Betti numbers are limited to n <= 10, got {n}")
    if max_dim is None:
        max_dim = dim + 1
    if max_dim < dim + 1:
        raise InputError("max_dim must be at least dim + 1")
    simplices, B = boundary_matrices(D, t, dim + 1)
    n_k = len(simplices[dim])
    rank_k = _gf2_rank(B[dim]) if dim > 0 and B[dim].size else 0
    rank_k1 = _gf2_rank(B[dim + 1]) if B[dim + 1].size else 0
    return n_k - rank_k - rank_k1


def dominant_feature(dgm, dim):
    """Finite bar of ``dim`` with the largest persistence.

    Ties go to the smaller birth, then the smaller death.

    Returns
    -------
    (birth, death, length) or None
    """
    bars = dgm.in_dim(dim)
    bars = bars[np.isfinite(bars[:, 1])]
    if len(bars) == 0:
        return None
    length = bars[:, 1] - bars[:, 0]
    i = np.lexsort((bars[:, 1], bars[:, 0], -length))[0]
    return float(bars[i, 0]), float(bars[i, 1]), float(length[i])
