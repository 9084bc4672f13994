"""scikit-learn style wrappers.

``AveragePairwiseTrimmer`` is a transformer, so it can sit in a
:class:`sklearn.pipeline.Pipeline` in front of :class:`RipsPersistence`::

    pipe = make_pipeline(AveragePairwiseTrimmer(0.3, 0.08), RipsPersistence(max_hom_dim=1))
    pipe.fit(X)
    pipe[-1].diagram_
"""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InputError
from .metricspace import check_cloud, check_distance_matrix, distance_matrix
from .persistence import dominant_feature, rips_persistence
from .selection import SelectionConfig, select_asymmetric, select_one_sided
from .trimming import TrimSpec, trim_asymmetric

__all__ = ["AveragePairwiseTrimmer", "RipsPersistence", "TrimmedRipsPersistence", "TrimmingSelector"]


class AveragePairwiseTrimmer(TransformerMixin, BaseEstimator):
    """Drop points by their average distance to the rest of the sample.

    Parameters
    ----------
    alpha1 : float, default=0.0
        Proportion removed from the top (largest average distance).
    alpha2 : float, default=0.0
        Proportion removed from the bottom. Must be 0 when ``one_sided``.
    one_sided : bool, default=False
        Allow ``alpha1`` up to 1 and forbid lower trimming.

    Attributes
    ----------
    kept_ : ndarray of int
        Indices of the retained training points.
    avg_dists_ : ndarray of float
        Average pairwise distance of each training point.
    lower_threshold_, upper_threshold_ : float
        Score band of the retained points.
    """

    def __init__(self, alpha1=0.0, alpha2=0.0, one_sided=False):
        self.alpha1 = alpha1
        self.alpha2 = alpha2
        self.one_sided = one_sided

    def _spec(self):
        return TrimSpec(self.alpha1, self.alpha2, one_sided=self.one_sided)

    def fit(self, X, y=None):
        X = check_cloud(X)
        res = trim_asymmetric(distance_matrix(X), self._spec())
        self.X_fit_ = X
        self.kept_ = res.kept
        self.avg_dists_ = res.avg_dists
        self.lower_threshold_ = res.lower_threshold
        self.upper_threshold_ = res.upper_threshold
        # an end that removed nothing places no bound on new points
        self._band = (
            res.lower_threshold if len(res.removed_low) else -np.inf,
            res.upper_threshold if len(res.removed_high) else np.inf,
        )
        self.n_features_in_ = X.shape[1]
        return self

    def fit_transform(self, X, y=None):
        self.fit(X)
        return self.X_fit_[self.kept_]

    def transform(self, X):
        """Keep rows of ``X`` whose mean distance to the training sample
        falls inside the fitted score band.

        The band is open on any side where fitting removed no points.

        On the training data itself use :meth:`fit_transform`, which
        returns exactly the points selected by the order statistics.
        """
        check_is_fitted(self, "kept_")
        X = check_cloud(X)
        if X.shape[1] != self.n_features_in_:
            raise InputError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        score = cdist(X, self.X_fit_).mean(axis=1)
        lo, hi = self._band
        mask = (score >= lo) & (score <= hi)
        return X[mask]

    def get_support(self, indices=False):
        check_is_fitted(self, "kept_")
        if indices:
            return self.kept_.copy()
        mask = np.zeros(len(self.avg_dists_), dtype=bool)
        mask[self.kept_] = True
        return mask


class RipsPersistence(BaseEstimator):
    """Vietoris-Rips persistence diagram of a point cloud.

    Parameters
    ----------
    max_hom_dim : int, default=1
    threshold : float or None, default=None
        Edge-length cap; ``None`` uses the enclosing radius.
    metric : {"euclidean", "precomputed"}, default="euclidean"

    Attributes
    ----------
    diagram_ : PersistenceDiagram
    """

    def __init__(self, max_hom_dim=1, threshold=None, metric="euclidean"):
        self.max_hom_dim = max_hom_dim
        self.threshold = threshold
        self.metric = metric

    def _distances(self, X):
        if self.metric == "precomputed":
            return check_distance_matrix(X)
        if self.metric == "euclidean":
            return distance_matrix(X)
        raise InputError(f"unknown metric {self.metric!r}")

    def fit(self, X, y=None):
        self.diagram_ = rips_persistence(self._distances(X), self.max_hom_dim, self.threshold)
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).diagram_

    def transform(self, X):
        return rips_persistence(self._distances(X), self.max_hom_dim, self.threshold)

    def dominant_feature(self, dim=None):
        check_is_fitted(self, "diagram_")
        return dominant_feature(self.diagram_, self.max_hom_dim if dim is None else dim)


class TrimmedRipsPersistence(BaseEstimator):
    """Trim, then compute the Rips diagram of the retained points.

    Attributes
    ----------
    kept_ : ndarray of int
    diagram_ : PersistenceDiagram
    """

    def __init__(self, alpha1=0.0, alpha2=0.0, one_sided=False, max_hom_dim=1, threshold=None):
        self.alpha1 = alpha1
        self.alpha2 = alpha2
        self.one_sided = one_sided
        self.max_hom_dim = max_hom_dim
        self.threshold = threshold

    def fit(self, X, y=None):
        X = check_cloud(X)
        D = distance_matrix(X)
        res = trim_asymmetric(D, TrimSpec(self.alpha1, self.alpha2, one_sided=self.one_sided))
        self.kept_ = res.kept
        self.diagram_ = rips_persistence(
            D[np.ix_(res.kept, res.kept)], self.max_hom_dim, self.threshold
        )
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).diagram_

    def dominant_feature(self, dim=None):
        check_is_fitted(self, "diagram_")
        return dominant_feature(self.diagram_, self.max_hom_dim if dim is None else dim)


class TrimmingSelector(BaseEstimator):
    """Pick trimming proportions by lowering them until a persistent bar appears.

    Parameters mirror :class:`~robustph.selection.SelectionConfig`;
    ``mode`` is ``"asym"`` or ``"one"``.

    Attributes
    ----------
    outcome_ : SelectionOutcome
    alphas_ : tuple
    diagram_ : PersistenceDiagram
    """

    def __init__(self, mode="asym", alpha1=0.0, alpha2=0.0, step1=0.05, step2=0.01,
                 hom_dim=1, tau_min=0.5, max_iter=10, threshold=None):
        self.mode = mode
        self.alpha1 = alpha1
        self.alpha2 = alpha2
        self.step1 = step1
        self.step2 = step2
        self.hom_dim = hom_dim
        self.tau_min = tau_min
        self.max_iter = max_iter
        self.threshold = threshold

    def fit(self, X, y=None):
        cfg = SelectionConfig(
            alpha1=self.alpha1, alpha2=self.alpha2, step1=self.step1, step2=self.step2,
            hom_dim=self.hom_dim, tau_min=self.tau_min, max_iter=self.max_iter,
            threshold=self.threshold,
        )
        if self.mode == "asym":
            out = select_asymmetric(X, cfg)
        elif self.mode == "one":
            out = select_one_sided(X, cfg)
        else:
            raise InputError(f"mode must be 'asym' or 'one', got {self.mode!r}")
        self.outcome_ = out
        self.alphas_ = out.alphas
        self.diagram_ = out.diagram
        return self
