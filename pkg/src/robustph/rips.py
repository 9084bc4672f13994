"""Vietoris-Rips (flag) filtrations on a distance matrix.

Filtration values are edge lengths: a simplex enters at the length of its
longest edge. A scale ``eps`` in the ball-radius convention corresponds to
the edge length ``2 * eps``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import InputError, ResourceError
from .metricspace import check_distance_matrix, enclosing_radius

__all__ = [
    "DEFAULT_SIMPLEX_BUDGET",
    "Simplex",
    "Filtration",
    "resolve_threshold",
    "rips_filtration",
]

DEFAULT_SIMPLEX_BUDGET = 50_000_000

# rows of the candidate mask are processed in blocks of this many simplices
_BLOCK = 4096


class Simplex(NamedTuple):
    vertices: tuple
    value: float

    @property
    def dim(self):
        return len(self.vertices) - 1


class Filtration:
    """A Rips filtration stored dimension by dimension.

    Attributes
    ----------
    faces : list of ndarray
        ``faces[k]`` has shape ``(n_k, k + 1)``; rows are strictly
        increasing vertex tuples in lexicographic order.
    values : list of ndarray
        ``values[k][i]`` is the filtration value of ``faces[k][i]``.
    order : ndarray of shape (n_simplices, 2)
        ``(dim, row)`` pairs in filtration order: value ascending, then
        dimension ascending, then lexicographic.
    """

    def __init__(self, faces, values, n_vertices, max_dim, threshold):
        self.faces = faces
        self.values = values
        self.n_vertices = int(n_vertices)
        self.max_dim = int(max_dim)
        self.threshold = float(threshold)
        dims = np.concatenate(
            [np.full(len(v), k, dtype=np.intp) for k, v in enumerate(values)]
        )
        rows = np.concatenate([np.arange(len(v), dtype=np.intp) for v in values])
        vals = np.concatenate(values)
        # lexsort is stable, so ties keep the per-dimension lexicographic order
        perm = np.lexsort((dims, vals))
        self.order = np.column_stack([dims[perm], rows[perm]])

    def __len__(self):
        return int(self.order.shape[0])

    def __iter__(self):
        for k, i in self.order:
            yield Simplex(tuple(int(v) for v in self.faces[k][i]), float(self.values[k][i]))

    @property
    def simplices(self):
        return list(self)

    def count_by_dim(self):
        return [len(v) for v in self.values]

    def dump(self, fh):
        """Write ``value dim v0 v1 ...`` lines in filtration order."""
        for s in self:
            fh.write(f"{s.value!r} {s.dim} " + " ".join(map(str, s.vertices)) + "\n")


def resolve_threshold(D, threshold):
    """Map ``None`` or ``"auto"`` to the enclosing radius; validate otherwise."""
    if threshold is None or (isinstance(threshold, str) and threshold.lower() == "auto"):
        return enclosing_radius(D)
    threshold = float(threshold)
    if not threshold > 0 or np.isnan(threshold):
        raise InputError(f"threshold must be positive, got {threshold}")
    return threshold


def rips_filtration(D, max_dim=2, threshold=None, *, budget=DEFAULT_SIMPLEX_BUDGET):
    """Build the Vietoris-Rips filtration of a distance matrix.

    Parameters
    ----------
    D : array-like of shape (n, n)
        Distance matrix.
    max_dim : int, default=2
        Largest simplex dimension to include.
    threshold : float or None or "auto", default=None
        Largest edge length; ``None``/``"auto"`` uses the enclosing radius.
    budget : int
        Maximum total number of simplices.

    Returns
    -------
    Filtration
    """
    D = check_distance_matrix(D)
    max_dim = int(max_dim)
    if max_dim < 0:
        raise InputError("max_dim must be >= 0")
    thr = resolve_threshold(D, threshold)
    n = D.shape[0]
    adj = D <= thr
    np.fill_diagonal(adj, False)

    total = n
    if total > budget:
        raise ResourceError(f"{n} vertices exceed the simplex budget {budget}")
    faces = [np.arange(n, dtype=np.int32).reshape(-1, 1)]
    values = [np.zeros(n)]
    for k in range(1, max_dim + 1):
        prev, prev_val = faces[-1], values[-1]
        new_faces, new_vals = [], []
        for start in range(0, len(prev), _BLOCK):
            block = prev[start:start + _BLOCK]
            cand = adj[block[:, 0]].copy()
            for j in range(1, block.shape[1]):
                cand &= adj[block[:, j]]
            # only extend by vertices above the current maximum
            cand &= np.arange(n)[None, :] > block[:, -1:]
            rows, w = np.nonzero(cand)
            total += len(w)
            if total > budget:
                raise ResourceError(
                    f"Rips filtration at threshold {thr:g} exceeds the simplex "
                    f"budget {budget} while building dimension {k}"
                )
            if len(w) == 0:
                continue
            base = block[rows]
            val = np.maximum(prev_val[start + rows], D[base, w[:, None]].max(axis=1))
            new_faces.append(np.column_stack([base, w.astype(np.int32)]))
            new_vals.append(val)
        if new_faces:
            faces.append(np.concatenate(new_faces))
            values.append(np.concatenate(new_vals))
        else:
            faces.append(np.empty((0, k + 1), dtype=np.int32))
            values.append(np.empty(0))
    return Filtration(faces, values, n, max_dim, thr)
