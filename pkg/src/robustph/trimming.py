"""Trimming of point clouds by average pairwise distance.

Each point is scored by its mean distance to the rest of the sample. The
asymmetric trim drops the ``floor(alpha1 * n)`` highest-scoring points
(far from the bulk) and the ``floor(alpha2 * n)`` lowest-scoring points
(crowded in the middle); the one-sided trim only drops the high end.

Ties on equal scores are broken by original index: points are ranked by
``(score, index)`` ascending and the kept set is a contiguous slice of that
ranking, so low-end removal takes the smallest indices first and high-end
removal takes the largest indices first.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import InputError
from .metricspace import check_cloud

__all__ = [
    "TrimSpec",
    "TrimResult",
    "trim_count",
    "avg_pairwise_distances",
    "trim_asymmetric",
    "trim_one_sided",
    "reference_population_trim",
]

_ALPHA_SCALE = 10**9


def trim_count(alpha, n):
    """Exact ``floor(alpha * n)``.

    ``alpha`` is first rounded to nine decimals and the product is taken in
    integer arithmetic, so ``trim_count(0.2, 5) == 1`` even though
    ``0.2 * 5`` is not exactly representable.
    """
    num = round(float(alpha) * _ALPHA_SCALE)
    return (num * int(n)) // _ALPHA_SCALE


@dataclass(frozen=True)
class TrimSpec:
    """Upper (``alpha1``) and lower (``alpha2``) trimming proportions.

    ``one_sided=True`` allows ``alpha1`` anywhere in [0, 1) and forces
    ``alpha2 = 0``.
    """

    alpha1: float = 0.0
    alpha2: float = 0.0
    one_sided: bool = False

    def __post_init__(self):
        a1, a2 = float(self.alpha1), float(self.alpha2)
        if not (np.isfinite(a1) and np.isfinite(a2)):
            raise InputError("trimming proportions must be finite")
        if self.one_sided:
            if not 0.0 <= a1 < 1.0:
                raise InputError(f"alpha must lie in [0, 1), got {a1}")
            if a2 != 0.0:
                raise InputError("one-sided trimming has no lower proportion")
        else:
            if not 0.0 <= a1 < 0.5:
                raise InputError(f"alpha1 must lie in [0, 1/2), got {a1}")
            if not 0.0 <= a2 < 0.5:
                raise InputError(f"alpha2 must lie in [0, 1/2), got {a2}")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)

    def counts(self, n):
        """Return ``(n_upper, n_lower)``, the number of points dropped at each end."""
        k1, k2 = trim_count(self.alpha1, n), trim_count(self.alpha2, n)
        if k1 + k2 >= n:
            raise InputError(
                f"trimming exhausts sample: floor({self.alpha1}*{n}) + "
                f"floor({self.alpha2}*{n}) = {k1 + k2} >= n = {n}"
            )
        return k1, k2


@dataclass(frozen=True)
class TrimResult:
    """Outcome of a trim.

    Attributes
    ----------
    kept : ndarray of int
        Original indices of retained points, strictly increasing.
    avg_dists : ndarray of float
        Average pairwise distance of every original point.
    lower_threshold, upper_threshold : float
        Smallest and largest retained scores (the order statistics
        bounding the kept band).
    """

    kept: np.ndarray
    avg_dists: np.ndarray
    lower_threshold: float
    upper_threshold: float
    removed_low: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.intp))
    removed_high: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.intp))

    def to_dict(self):
        return {
            "kept": [int(i) for i in self.kept],
            "lower_threshold": float(self.lower_threshold),
            "upper_threshold": float(self.upper_threshold),
            "avg_dists": [float(v) for v in self.avg_dists],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        return cls(
            kept=np.asarray(data["kept"], dtype=np.intp),
            avg_dists=np.asarray(data["avg_dists"], dtype=np.float64),
            lower_threshold=float(data["lower_threshold"]),
            upper_threshold=float(data["upper_threshold"]),
        )


def avg_pairwise_distances(D):
    """Mean distance from each point to the other ``n - 1`` points."""
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if n < 2:
        raise InputError("average pairwise distance needs at least 2 points")
    return D.sum(axis=1) / (n - 1)


def _trim(avg, k1, k2):
    n = avg.shape[0]
    # lexsort: last key is primary
    order = np.lexsort((np.arange(n), avg))
    band = order[k2:n - k1]
    return TrimResult(
        kept=np.sort(band),
        avg_dists=avg,
        lower_threshold=float(avg[order[k2]]),
        upper_threshold=float(avg[order[n - k1 - 1]]),
        removed_low=np.sort(order[:k2]),
        removed_high=np.sort(order[n - k1:]),
    )


def trim_asymmetric(D, spec):
    """Keep points whose score lies between the trimmed order statistics.

    Parameters
    ----------
    D : ndarray of shape (n, n)
        Distance matrix.
    spec : TrimSpec or tuple of (alpha1, alpha2)

    Returns
    -------
    TrimResult
    """
    if not isinstance(spec, TrimSpec):
        spec = TrimSpec(*spec)
    avg = avg_pairwise_distances(D)
    k1, k2 = spec.counts(avg.shape[0])
    return _trim(avg, k1, k2)


def trim_one_sided(D, alpha):
    """Drop the ``floor(alpha * n)`` points with the largest scores."""
    return trim_asymmetric(D, TrimSpec(alpha, 0.0, one_sided=True))


def reference_population_trim(reference, spec):
    """Trim a large reference sample as a stand-in for the population trim.

    The population score of a point (its expected distance to a random
    draw) is estimated against the reference sample itself.

    Returns
    -------
    kept : ndarray of int
        Indices into ``reference``.
    """
    if not isinstance(spec, TrimSpec):
        spec = TrimSpec(*spec)
    X = check_cloud(reference, name="reference")
    n = X.shape[0]
    if n < 2:
        raise InputError("average pairwise distance needs at least 2 points")
    k1, k2 = spec.counts(n)
    # row sums in blocks; the full n x n table is never held in memory
    sums = np.empty(n)
    for start in range(0, n, 1024):
        sums[start:start + 1024] = cdist(X[start:start + 1024], X).sum(axis=1)
    return _trim(sums / (n - 1), k1, k2).kept
