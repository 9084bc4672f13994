"""Compiled Rips persistence by implicit persistent cohomology.

Simplices are never stored as a filtration. A k-simplex is named by its
combinatorial-number-system index ``sum_i C(v_i, i + 1)`` over its sorted
vertices, and its filtration value by the dense rank of its longest edge.
Within one dimension the filtration order is (rank ascending, index
descending), encoded in a single int64 key ``rank * M + (M - 1 - index)``.

Coboundary columns are processed in reverse filtration order. Dimension 0
is handled by union-find; in higher dimensions a column whose lowest
cofacet has the same value and is not yet claimed is paired immediately
(zero persistence), and pivots found in dimension k clear the matching
columns in dimension k + 1.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit, types
from numba.typed import Dict, List

from .exceptions import ResourceError

_INT64_MAX = np.iinfo(np.int64).max

def _binomials(n, k):
    B = np.zeros((n + 1, k + 1), dtype=np.int64)
    for i in range(n + 1):
        B[i, 0] = 1
        for j in range(1, min(i, k) + 1):
            B[i, j] = B[i - 1, j - 1] + (B[i - 1, j] if j <= i - 1 else 0)
    return B


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _edges(rank_mat):
    n = rank_mat.shape[0]
    m = 0
    for i in range(n):
        for j in range(i + 1, n):
            if rank_mat[i, j] >= 0:
                m += 1
    verts = np.empty((m, 2), dtype=np.int32)
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            if rank_mat[i, j] >= 0:
                verts[c, 0] = i
                verts[c, 1] = j
                c += 1
    return verts


@njit(cache=True)
def _extend(rank_mat, faces):
    """All (k+1)-simplices obtained by appending a larger vertex to a k-simplex."""
    n = rank_mat.shape[0]
    k1 = faces.shape[1]
    count = 0
    for r in range(faces.shape[0]):
        for w in range(faces[r, k1 - 1] + 1, n):
            ok = True
            for a in range(k1):
                if rank_mat[faces[r, a], w] < 0:
                    ok = False
                    break
            if ok:
                count += 1
    out = np.empty((count, k1 + 1), dtype=np.int32)
    c = 0
    for r in range(faces.shape[0]):
        for w in range(faces[r, k1 - 1] + 1, n):
            ok = True
            for a in range(k1):
                if rank_mat[faces[r, a], w] < 0:
                    ok = False
                    break
            if ok:
                for a in range(k1):
                    out[c, a] = faces[r, a]
                out[c, k1] = w
                c += 1
    return out


@njit(cache=True)
def _keys(rank_mat, faces, binom, M):
    m, k1 = faces.shape
    keys = np.empty(m, dtype=np.int64)
    for r in range(m):
        rank = 0
        idx = 0
        for a in range(k1):
            idx += binom[faces[r, a], a + 1]
            for b in range(a + 1, k1):
                e = rank_mat[faces[r, a], faces[r, b]]
                if e > rank:
                    rank = e
        keys[r] = rank * M + (M - 1 - idx)
    return keys


@njit(cache=True)
def _cofacet_key(rank_mat, verts, w, base_rank, binom, M):
    """Key of ``verts + {w}`` or -1 if some new edge is above threshold."""
    k1 = verts.shape[0]
    rank = base_rank
    for a in range(k1):
        e = rank_mat[verts[a], w]
        if e < 0:
            return -1
        if e > rank:
            rank = e
    idx = 0
    pos = 0
    placed = False
    for a in range(k1):
        v = verts[a]
        if not placed and w < v:
            idx += binom[w, pos + 1]
            pos += 1
            placed = True
        idx += binom[v, pos + 1]
        pos += 1
    if not placed:
        idx += binom[w, pos + 1]
    return rank * M + (M - 1 - idx)


@njit(cache=True)
def _heap_push(h, size, x):
    if size == h.shape[0]:
        grown = np.empty(2 * size, dtype=np.int64)
        grown[:size] = h[:size]
        h = grown
    i = size
    h[i] = x
    while i > 0:
        parent = (i - 1) >> 1
        if h[parent] <= x:
            break
        h[i] = h[parent]
        i = parent
    h[i] = x
    return h, size + 1


@njit(cache=True)
def _heap_pop(h, size):
    top = h[0]
    size -= 1
    if size == 0:
        return top, 0
    x = h[size]
    i = 0
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and h[child + 1] < h[child]:
            child += 1
        if x <= h[child]:
            break
        h[i] = h[child]
        i = child
    h[i] = x
    return top, size


@njit(cache=True)
def _pop_pivot(h, size):
    """Smallest key of odd multiplicity (the Z/2 pivot), or -1 if none."""
    while size > 0:
        p, size = _heap_pop(h, size)
        if size == 0 or h[0] != p:
            return p, size
        _, size = _heap_pop(h, size)
    return -1, size


@njit(cache=True)
def _push_coboundary(h, size, rank_mat, verts, base_rank, binom, M):
    n = rank_mat.shape[0]
    k1 = verts.shape[0]
    a = k1 - 1
    for w in range(n - 1, -1, -1):
        if a >= 0 and verts[a] == w:
            a -= 1
            continue
        key = _cofacet_key(rank_mat, verts, w, base_rank, binom, M)
        if key >= 0:
            h, size = _heap_push(h, size, key)
    return h, size


@njit(cache=True)
def _mod2(cols):
    """Entries of ``cols`` that occur an odd number of times, sorted."""
    cols = np.sort(cols)
    out = np.empty(cols.shape[0], dtype=np.int64)
    c = 0
    i = 0
    while i < cols.shape[0]:
        j = i
        while j < cols.shape[0] and cols[j] == cols[i]:
            j += 1
        if (j - i) & 1:
            out[c] = cols[i]
            c += 1
        i = j
    return out[:c]


@njit(cache=True)
def _dim0(rank_mat, edge_verts, edge_keys, n, M):
    order = np.argsort(edge_keys, kind="mergesort")
    parent = np.arange(n)
    deaths = np.empty(n, dtype=np.int64)
    nd = 0
    paired = np.zeros(edge_keys.shape[0], dtype=np.bool_)
    for t in range(order.shape[0]):
        e = order[t]
        ru = _find(parent, edge_verts[e, 0])
        rv = _find(parent, edge_verts[e, 1])
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
            paired[e] = True
            deaths[nd] = edge_keys[e] // M
            nd += 1
    return deaths[:nd], paired


@njit(cache=True)
def _reduce_dim(rank_mat, faces, keys, binom, M, pivots):
    """Reduce the coboundary columns of one dimension.

    ``pivots`` (cofacet key -> slot) is filled in place. The working column
    is a heap of cofacet keys in which equal keys cancel lazily; each slot
    remembers which columns were summed to reach its pivot, so additions
    push fresh coboundaries instead of merging long reduced columns.
    Returns the birth and death ranks of every pair with positive
    persistence, plus the birth ranks of essential classes.
    """
    order = np.argsort(-keys, kind="mergesort")
    m = keys.shape[0]
    slot_col = np.empty(m, dtype=np.int64)
    slot_store = np.empty(m, dtype=np.int64)
    stored = List()
    stored.append(np.empty(0, dtype=np.int64))
    births = np.empty(m, dtype=np.int64)
    deaths = np.empty(m, dtype=np.int64)
    nb = 0
    ess = np.empty(m, dtype=np.int64)
    ne = 0
    n_slots = 0
    n = rank_mat.shape[0]
    k1 = faces.shape[1]
    heap = np.empty(4096, dtype=np.int64)
    summed = np.empty(64, dtype=np.int64)
    for t in range(m):
        c = order[t]
        verts = faces[c]
        r = keys[c] // M
        # lowest cofacet: among cofacets of the same value, the one with
        # the largest index, i.e. the first hit scanning w downwards
        cand = -1
        a = k1 - 1
        for w in range(n - 1, -1, -1):
            if a >= 0 and verts[a] == w:
                a -= 1
                continue
            key = _cofacet_key(rank_mat, verts, w, r, binom, M)
            if key >= 0 and key // M == r:
                cand = key
                break
        if cand >= 0 and cand not in pivots:
            pivots[cand] = n_slots
            slot_col[n_slots] = c
            slot_store[n_slots] = -1
            n_slots += 1
            continue
        size = 0
        heap, size = _push_coboundary(heap, size, rank_mat, verts, r, binom, M)
        summed[0] = c
        n_summed = 1
        while True:
            p, size = _pop_pivot(heap, size)
            if p < 0:
                ess[ne] = r
                ne += 1
                break
            if p in pivots:
                s = pivots[p]
                heap, size = _heap_push(heap, size, p)
                if slot_store[s] >= 0:
                    members = stored[slot_store[s]]
                else:
                    members = slot_col[s:s + 1]
                for oc in members:
                    heap, size = _push_coboundary(
                        heap, size, rank_mat, faces[oc], keys[oc] // M, binom, M
                    )
                    if n_summed == summed.shape[0]:
                        grown = np.empty(2 * n_summed, dtype=np.int64)
                        grown[:n_summed] = summed
                        summed = grown
                    summed[n_summed] = oc
                    n_summed += 1
            else:
                pivots[p] = n_slots
                slot_col[n_slots] = c
                slot_store[n_slots] = len(stored)
                stored.append(_mod2(summed[:n_summed]))
                n_slots += 1
                pr = p // M
                if pr != r:
                    births[nb] = r
                    deaths[nb] = pr
                    nb += 1
                break
    return births[:nb], deaths[:nb], ess[:ne]


@njit(cache=True)
def _filter_cleared(keys, cleared):
    keep = np.ones(keys.shape[0], dtype=np.bool_)
    for i in range(keys.shape[0]):
        if keys[i] in cleared:
            keep[i] = False
    return keep


def _new_pivot_dict():
    return Dict.empty(key_type=types.int64, value_type=types.int64)


def compute_rips_persistence(D, max_hom_dim, threshold):
    """Rips persistence up to ``max_hom_dim`` at edge-length ``threshold``.

    Returns
    -------
    dims, births, deaths : ndarray
        Bars with positive persistence; essential classes have ``inf`` death.
    """
    n = D.shape[0]
    top = max_hom_dim + 1
    # dense ranks of admissible edge lengths
    iu = np.triu_indices(n, 1)
    lengths = D[iu]
    admissible = lengths <= threshold
    values = np.unique(lengths[admissible])
    rank_mat = np.full((n, n), -1, dtype=np.int64)
    ranks = np.searchsorted(values, lengths[admissible])
    rank_mat[iu[0][admissible], iu[1][admissible]] = ranks
    rank_mat[iu[1][admissible], iu[0][admissible]] = ranks

    binom = _binomials(n, top + 1)
    M = int(binom[n, top + 1]) + 1 if n > top else 1
    M = max(M, int(binom[n, 2]) + 1)
    if len(values) and (len(values) + 1) > _INT64_MAX // M:
        raise ResourceError(
            f"simplex keys overflow int64 for n={n} at homology dimension {max_hom_dim}"
        )

    dims, births, deaths = [], [], []

    edge_verts = _edges(rank_mat)
    edge_keys = _keys(rank_mat, edge_verts, binom, M)
    d0, paired = _dim0(rank_mat, edge_verts, edge_keys, n, M)
    death_vals = values[d0] if len(d0) else np.empty(0)
    for v in death_vals:
        if v > 0:
            dims.append(0)
            births.append(0.0)
            deaths.append(float(v))
    n_components = n - len(d0)
    dims.extend([0] * n_components)
    births.extend([0.0] * n_components)
    deaths.extend([math.inf] * n_components)

    faces, keys = edge_verts, edge_keys
    keep = ~paired
    for d in range(1, max_hom_dim + 1):
        cols, col_keys = faces[keep], keys[keep]
        pivots = _new_pivot_dict()
        b, e, ess = _reduce_dim(rank_mat, np.ascontiguousarray(cols), col_keys, binom, M, pivots)
        for bi, ei in zip(b, e):
            dims.append(d)
            births.append(float(values[bi]))
            deaths.append(float(values[ei]))
        for bi in ess:
            dims.append(d)
            births.append(float(values[bi]))
            deaths.append(math.inf)
        if d < max_hom_dim:
            faces = _extend(rank_mat, faces)
            keys = _keys(rank_mat, faces, binom, M)
            keep = _filter_cleared(keys, pivots)
    return np.asarray(dims, dtype=np.intp), np.asarray(births), np.asarray(deaths)
