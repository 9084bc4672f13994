"""Data-driven choice of trimming proportions.

Both selectors start from initial proportions, compute the trimmed Rips
diagram and stop as soon as some finite bar of the target dimension has
persistence at least ``tau_min``. Otherwise every proportion is lowered by
its step (never below zero) and the loop repeats, for at most
``max_iter`` rounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import PersistenceDiagram
from .exceptions import InputError
from .metricspace import check_cloud, distance_matrix
from .persistence import rips_persistence
from .trimming import TrimSpec, avg_pairwise_distances, _trim

__all__ = ["SelectionConfig", "SelectionOutcome", "select_asymmetric", "select_one_sided"]


@dataclass(frozen=True)
class SelectionConfig:
    """Inputs of the selection loop.

    For one-sided selection only ``alpha1`` and ``step1`` are used.
    ``tau_min`` is in edge-length units, like every filtration value.
    """

    alpha1: float = 0.0
    alpha2: float = 0.0
    step1: float = 0.05
    step2: float = 0.01
    hom_dim: int = 1
    tau_min: float = 0.5
    max_iter: int = 10
    threshold: float | None = None
    max_dim: int | None = None

    def __post_init__(self):
        if not self.tau_min > 0:
            raise InputError("tau_min must be > 0")
        if self.step1 <= 0 or self.step2 <= 0:
            raise InputError("step sizes must be > 0")
        if int(self.max_iter) < 1:
            raise InputError("max_iter must be >= 1")
        if self.hom_dim < 0:
            raise InputError("hom_dim must be >= 0")
        if self.max_dim is not None and self.max_dim < self.hom_dim + 1:
            raise InputError("max_dim must be at least hom_dim + 1")


@dataclass
class SelectionOutcome:
    diagram: PersistenceDiagram
    alphas: tuple
    iterations_used: int
    threshold_met: bool
    history: list = field(default_factory=list)

    def to_dict(self):
        return {
            "alphas": list(self.alphas),
            "iterations_used": self.iterations_used,
            "threshold_met": self.threshold_met,
            "history": self.history,
            "diagram": self.diagram.to_dict(),
        }


def _max_finite_persistence(dgm, dim):
    bars = dgm.in_dim(dim)
    bars = bars[np.isfinite(bars[:, 1])]
    return float((bars[:, 1] - bars[:, 0]).max()) if len(bars) else 0.0


def _run(cloud, cfg, inits, steps, one_sided):
    X = check_cloud(cloud)
    D = distance_matrix(X)
    avg = avg_pairwise_distances(D)
    n = X.shape[0]
    k = int(cfg.hom_dim)

    def alphas_at(t):
        return tuple(max(0.0, a - t * s) for a, s in zip(inits, steps))

    def diagram_at(alphas):
        spec = TrimSpec(alphas[0], 0.0, one_sided=True) if one_sided else TrimSpec(*alphas)
        kept = _trim(avg, *spec.counts(n)).kept
        return rips_persistence(D[np.ix_(kept, kept)], k, cfg.threshold)

    # validates the initial proportions before any work is done
    (TrimSpec(inits[0], 0.0, one_sided=True) if one_sided else TrimSpec(*inits)).counts(n)

    history = []
    T = int(cfg.max_iter)
    for t in range(T):
        alphas = alphas_at(t)
        dgm = diagram_at(alphas)
        best = _max_finite_persistence(dgm, k)
        history.append({"alphas": list(alphas), "max_persistence": best})
        if best >= cfg.tau_min:
            return SelectionOutcome(dgm.restrict(k), alphas, t, True, history)
    alphas = alphas_at(T)
    dgm = diagram_at(alphas)
    return SelectionOutcome(dgm.restrict(k), alphas, T, False, history)


def select_asymmetric(cloud, cfg):
    """Select ``(alpha1, alpha2)`` for asymmetric trimming.

    Parameters
    ----------
    cloud : array-like of shape (n_points, n_dims)
    cfg : SelectionConfig

    Returns
    -------
    SelectionOutcome
        ``alphas`` is ``(alpha1, alpha2)``; ``diagram`` holds the bars of
        dimension ``cfg.hom_dim`` computed at those proportions.
    """
    return _run(cloud, cfg, (cfg.alpha1, cfg.alpha2), (cfg.step1, cfg.step2), False)


def select_one_sided(cloud, cfg):
    """Select the single proportion ``alpha`` for one-sided trimming.

    ``alphas`` in the outcome is the 1-tuple ``(alpha,)``.
    """
    return _run(cloud, cfg, (cfg.alpha1,), (cfg.step1,), True)
