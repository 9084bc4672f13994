"""Bottleneck distance between persistence diagrams."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .diagram import PersistenceDiagram
from .metricspace import check_cloud, distance_matrix, hausdorff
from .exceptions import InputError

__all__ = ["BottleneckResult", "bottleneck", "stability_gap"]

DIAGONAL = "diagonal"


@dataclass(frozen=True)
class BottleneckResult:
    """Bottleneck value and one matching achieving it.

    ``matching`` lists pairs ``(left, right)`` where each side is either a
    ``(birth, death)`` tuple or the string ``"diagonal"``.
    """

    value: float
    matching: list = field(default_factory=list)

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        def enc(x):
            if x == DIAGONAL:
                return DIAGONAL
            return [x[0], "inf" if math.isinf(x[1]) else x[1]]

        return {
            "value": "inf" if math.isinf(self.value) else self.value,
            "matching": [[enc(a), enc(b)] for a, b in self.matching],
        }


def _bars(dgm, dim):
    if isinstance(dgm, PersistenceDiagram):
        bars = dgm.in_dim(dim)
    else:
        bars = np.asarray(dgm, dtype=np.float64).reshape(-1, 2)
    finite = np.isfinite(bars[:, 1])
    return bars[finite], np.sort(bars[~finite, 0])


def _cost_matrix(A, B):
    """Costs of the augmented bipartite problem.

    Rows are the bars of A followed by diagonal slots for B; columns are the
    bars of B followed by diagonal slots for A. Forbidden pairs are ``inf``.
    """
    p, q = len(A), len(B)
    C = np.full((p + q, q + p), np.inf)
    if p and q:
        C[:p, :q] = np.maximum(
            np.abs(A[:, None, 0] - B[None, :, 0]), np.abs(A[:, None, 1] - B[None, :, 1])
        )
    half_a = (A[:, 1] - A[:, 0]) / 2
    half_b = (B[:, 1] - B[:, 0]) / 2
    C[np.arange(p), q + np.arange(p)] = half_a
    C[p + np.arange(q), np.arange(q)] = half_b
    C[p:, q:] = 0.0
    return C


def _perfect(C, c):
    graph = csr_matrix((C <= c).astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="row")
    return match, bool(np.all(match >= 0))


def bottleneck(a, b, dim=None):
    """Bottleneck distance between the ``dim`` parts of two diagrams.

    Finite bars are matched to finite bars (sup-norm cost) or to the
    diagonal (half their persistence). Essential bars match only each
    other, in birth order; unequal numbers of essential bars give ``inf``.
    The optimum is found exactly by binary search over all candidate costs
    with a bipartite perfect-matching test at each step.

    Parameters
    ----------
    a, b : PersistenceDiagram or array-like of shape (m, 2)
    dim : int, optional
        Homology dimension; required for :class:`PersistenceDiagram` input.

    Returns
    -------
    BottleneckResult
    """
    if dim is None and (isinstance(a, PersistenceDiagram) or isinstance(b, PersistenceDiagram)):
        raise InputError("dim is required when comparing PersistenceDiagram objects")
    A, inf_a = _bars(a, dim)
    B, inf_b = _bars(b, dim)
    if len(inf_a) != len(inf_b):
        return BottleneckResult(math.inf)
    inf_cost = float(np.max(np.abs(inf_a - inf_b))) if len(inf_a) else 0.0
    inf_pairs = [((float(x), math.inf), (float(y), math.inf)) for x, y in zip(inf_a, inf_b)]

    p, q = len(A), len(B)
    if p + q == 0:
        return BottleneckResult(inf_cost, inf_pairs)
    C = _cost_matrix(A, B)
    candidates = np.unique(np.concatenate([[0.0], C[np.isfinite(C)]]))
    lo, hi = 0, len(candidates) - 1
    best, _ = _perfect(C, candidates[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        match, ok = _perfect(C, candidates[mid])
        if ok:
            hi, best = mid, match
        else:
            lo = mid + 1
    value = max(float(candidates[lo]), inf_cost)

    pairs = list(inf_pairs)
    # match[col] = row
    for col, row in enumerate(best):
        left = (float(A[row, 0]), float(A[row, 1])) if row < p else DIAGONAL
        right = (float(B[col, 0]), float(B[col, 1])) if col < q else DIAGONAL
        if left == DIAGONAL and right == DIAGONAL:
            continue
        pairs.append((left, right))
    return BottleneckResult(value, pairs)


def stability_gap(cloud_a, cloud_b, dim=1, max_dim=None):
    """Bottleneck distance of Rips diagrams against twice the Hausdorff distance.

    Returns
    -------
    w : float
        Bottleneck distance between the two clouds' diagrams in ``dim``.
    h : float
        Hausdorff distance between the clouds. Stability guarantees
        ``w <= 2 * h`` with edge-length filtration values.
    """
    from .persistence import rips_persistence

    if max_dim is None:
        max_dim = dim + 1
    if max_dim < dim + 1:
        raise InputError("max_dim must be at least dim + 1")
    A = check_cloud(cloud_a, name="cloud_a")
    B = check_cloud(cloud_b, name="cloud_b")
    h = hausdorff(A, B)
    da = rips_persistence(distance_matrix(A), dim)
    db = rips_persistence(distance_matrix(B), dim)
    return bottleneck(da, db, dim).value, h
