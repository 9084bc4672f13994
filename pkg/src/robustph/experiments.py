"""Desk-scale reproductions of the simulation and convergence studies."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bottleneck import bottleneck
from .exceptions import InputError
from .metricspace import distance_matrix, hausdorff
from .persistence import dominant_feature, rips_persistence
from .synth import gen_case_study_1, gen_case_study_2, gen_uniform_circle
from .trimming import TrimSpec, reference_population_trim, trim_asymmetric

__all__ = [
    "CASE1_GRID",
    "CASE2_GRID",
    "PROTEIN_GRID",
    "CaseStudyReport",
    "trimming_study",
    "run_case_study_1",
    "run_case_study_2",
    "run_protein_study",
    "ConvergenceConfig",
    "ConvergenceResult",
    "convergence_experiment",
    "stability_suite",
]

CASE1_GRID = [(a1, a2) for a2 in (0.01, 0.05, 0.07, 0.08, 0.10) for a1 in (0.1, 0.2, 0.3)]
CASE2_GRID = [
    (a1, a2) for a2 in (0.01, 0.02, 0.03, 0.035, 0.04, 0.05, 0.06) for a1 in (0.1, 0.2, 0.3, 0.4)
]
PROTEIN_GRID = [
    (a1, a2) for a2 in (0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08) for a1 in (0.1, 0.2, 0.3, 0.4)
]


def _as_spec(s):
    return s if isinstance(s, TrimSpec) else TrimSpec(*s)


def _feature(dgm, dim):
    f = dominant_feature(dgm, dim)
    return (math.nan, math.nan, 0.0) if f is None else f


@dataclass
class CaseStudyReport:
    """Dominant-feature summary per seed and trimming proportion.

    ``rows`` holds one dict per ``(seed, alpha1, alpha2)`` with the
    untrimmed and trimmed dominant intervals and lengths.
    """

    hom_dim: int
    n: int
    rows: list = field(default_factory=list)

    def lengths(self, spec):
        spec = _as_spec(spec)
        sel = [r for r in self.rows if (r["alpha1"], r["alpha2"]) == (spec.alpha1, spec.alpha2)]
        return (
            np.array([r["untrimmed_length"] for r in sel]),
            np.array([r["trimmed_length"] for r in sel]),
        )

    def summary(self):
        """Median lengths and median trimmed/untrimmed ratio per grid point."""
        out = []
        seen = []
        for r in self.rows:
            key = (r["alpha1"], r["alpha2"])
            if key not in seen:
                seen.append(key)
        for a1, a2 in seen:
            base, trimmed = self.lengths((a1, a2))
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(base > 0, trimmed / base, np.nan)
            out.append(
                {
                    "alpha1": a1,
                    "alpha2": a2,
                    "n_seeds": len(base),
                    "median_untrimmed_length": float(np.median(base)),
                    "median_trimmed_length": float(np.median(trimmed)),
                    "median_ratio": float(np.nanmedian(ratio)) if np.any(np.isfinite(ratio)) else math.nan,
                }
            )
        return out

    def median_ratio(self, spec):
        spec = _as_spec(spec)
        for s in self.summary():
            if (s["alpha1"], s["alpha2"]) == (spec.alpha1, spec.alpha2):
                return s["median_ratio"]
        raise KeyError(spec)

    def to_dict(self):
        return {"hom_dim": self.hom_dim, "n": self.n, "rows": self.rows, "summary": self.summary()}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    def to_csv(self):
        """One row per seed and grid point, intervals written as ``(birth, death)``."""
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(
            ["seed", "n", "sample_interval", "sample_length", "alpha1", "alpha2",
             "trimmed_interval", "trimmed_length"]
        )
        for r in self.rows:
            w.writerow(
                [
                    r["seed"], self.n,
                    f"({r['untrimmed_birth']:.7g}, {r['untrimmed_death']:.7g})",
                    f"{r['untrimmed_length']:.7g}",
                    r["alpha1"], r["alpha2"],
                    f"({r['trimmed_birth']:.7g}, {r['trimmed_death']:.7g})",
                    f"{r['trimmed_length']:.7g}",
                ]
            )
        return out.getvalue()


def trimming_study(X, grid, hom_dim, threshold=None, seed=None, report=None):
    """Dominant feature of ``X`` untrimmed and at each grid point.

    Appends rows to ``report`` (a fresh one when omitted) and returns it.
    """
    D = distance_matrix(X)
    n = D.shape[0]
    if report is None:
        report = CaseStudyReport(hom_dim, n)
    base = _feature(rips_persistence(D, hom_dim, threshold), hom_dim)
    for spec in grid:
        spec = _as_spec(spec)
        kept = trim_asymmetric(D, spec).kept
        f = _feature(rips_persistence(D[np.ix_(kept, kept)], hom_dim, threshold), hom_dim)
        report.rows.append(
            {
                "seed": seed,
                "alpha1": spec.alpha1,
                "alpha2": spec.alpha2,
                "n_kept": int(len(kept)),
                "untrimmed_birth": base[0],
                "untrimmed_death": base[1],
                "untrimmed_length": base[2],
                "trimmed_birth": f[0],
                "trimmed_death": f[1],
                "trimmed_length": f[2],
            }
        )
    return report


def _run_seeds(gen, seeds, grid, hom_dim, n):
    if not grid:
        raise InputError("grid must be non-empty")
    report = CaseStudyReport(hom_dim, n)
    for seed in seeds:
        trimming_study(gen(seed), grid, hom_dim, seed=int(seed), report=report)
    return report


def run_case_study_1(seeds, grid=CASE1_GRID):
    """Dominant H1 feature of circle-plus-clusters clouds, per seed and grid point."""
    return _run_seeds(gen_case_study_1, seeds, grid, 1, 200)


def run_case_study_2(seeds, grid=CASE2_GRID):
    """Dominant H2 feature of sphere-plus-clusters clouds, per seed and grid point."""
    return _run_seeds(gen_case_study_2, seeds, grid, 2, 400)


def run_protein_study(X, grid=PROTEIN_GRID, threshold=13.0):
    """Dominant H2 cavity of a heavy-atom cloud, untrimmed and per grid point."""
    return trimming_study(X, grid, 2, threshold=threshold)


@dataclass(frozen=True)
class ConvergenceConfig:
    """Settings for the empirical rate check.

    ``b`` is the intrinsic-dimension exponent of the mass condition on
    small balls; only it enters the predicted rate.
    """

    b: float = 1.0
    sample_sizes: tuple = (100, 200, 400, 800, 1600)
    reps: int = 20
    spec: TrimSpec = TrimSpec(0.05, 0.05)
    reference_size: int = 5000
    signal: object = None

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.sample_sizes)
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "spec", _as_spec(self.spec))
        if not self.b > 0:
            raise InputError("b must be > 0")
        if len(set(sizes)) < 4 or list(sizes) != sorted(sizes):
            raise InputError("need at least 4 distinct increasing sample sizes")
        if self.reps < 1:
            raise InputError("reps must be >= 1")


@dataclass
class ConvergenceResult:
    slope: float
    intercept: float
    points: list
    mean_hausdorff: list

    def to_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "points": [list(p) for p in self.points],
            "mean_hausdorff": self.mean_hausdorff,
        }


def convergence_experiment(cfg, seed=0):
    """Regress log mean Hausdorff error on the predicted log rate.

    For each sample size ``m`` the trimmed sample (``m'`` points kept) is
    compared with the trimmed reference sample; the x coordinate is
    ``log(log(m') / m') / b``. A slope near 1 matches the predicted rate.
    """
    signal = cfg.signal or gen_uniform_circle
    ss = np.random.SeedSequence(seed)
    ref_seq, *size_seqs = ss.spawn(1 + len(cfg.sample_sizes))
    reference = signal(cfg.reference_size, ref_seq)
    ref_trim = reference[reference_population_trim(reference, cfg.spec)]

    points, means = [], []
    for m, seq in zip(cfg.sample_sizes, size_seqs):
        errs = []
        for rep_seq in seq.spawn(cfg.reps):
            Xm = signal(m, rep_seq)
            kept = trim_asymmetric(distance_matrix(Xm), cfg.spec).kept
            errs.append(hausdorff(Xm[kept], ref_trim))
        k1, k2 = cfg.spec.counts(m)
        m_eff = m - k1 - k2
        mean = float(np.mean(errs))
        means.append(mean)
        points.append((math.log(math.log(m_eff) / m_eff) / cfg.b, math.log(mean)))
    xy = np.array(points)
    slope, intercept = np.polyfit(xy[:, 0], xy[:, 1], 1)
    return ConvergenceResult(float(slope), float(intercept), points, means)


def stability_suite(n_trials=50, seed=0, max_points=40, dims=(0, 1)):
    """Check ``W_inf <= 2 d_H`` on random clouds and perturbations.

    Each trial draws a cloud of 5 to ``max_points`` points in the plane or
    in space and perturbs it by Gaussian jitter of random magnitude
    (exactly zero in every fifth trial), sometimes also dropping points.

    Returns
    -------
    dict
        ``passed`` plus one record per trial.
    """
    rng = np.random.default_rng(seed)
    trials = []
    for t in range(int(n_trials)):
        n = int(rng.integers(5, max_points + 1))
        m = int(rng.integers(2, 4))
        A = rng.random((n, m))
        scale = 0.0 if t % 5 == 0 else float(rng.choice([1e-3, 1e-2, 0.05, 0.2]))
        B = A + scale * rng.standard_normal(A.shape)
        if t % 7 == 3 and n > 6:
            B = B[rng.permutation(n)[: n - int(rng.integers(1, 4))]]
        h = hausdorff(A, B)
        DA, DB = distance_matrix(A), distance_matrix(B)
        top = max(dims)
        da, db = rips_persistence(DA, top), rips_persistence(DB, top)
        rec = {"trial": t, "n": n, "ambient_dim": m, "scale": scale, "hausdorff": h}
        ok = True
        for d in dims:
            w = bottleneck(da, db, d).value
            rec[f"w{d}"] = w
            ok &= w <= 2 * h + 1e-9
        rec["passed"] = bool(ok)
        trials.append(rec)
    return {"passed": all(r["passed"] for r in trials), "trials": trials}
