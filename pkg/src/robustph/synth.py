"""Seeded generators for the simulation designs.

Random streams
--------------
Every generator draws from NumPy's PCG64 bit generator. A master
``SeedSequence(seed)`` is spawned into one child stream per mixture
component (signal first, then each outlier cluster in the order given),
so adding or reordering components never perturbs the other components'
draws.

Normal variates come from the Box-Muller transform of PCG64 uniforms
(``z = sqrt(-2 log(1 - u1)) * cos(2 pi u2)``, one variate per pair of
uniforms), which keeps the sampler reproducible from the uniform stream
alone. Variance parameters are variances, not standard deviations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError

__all__ = [
    "GENERATOR_VERSION",
    "Cluster",
    "MixtureSpec",
    "CASE1_SPEC",
    "CASE2_SPEC",
    "gen_mixture",
    "gen_case_study_1",
    "gen_case_study_2",
    "gen_uniform_circle",
    "standard_normal",
]

GENERATOR_VERSION = 1


def _streams(seed, k):
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(k)]


def standard_normal(rng, size):
    """Standard normal variates by Box-Muller on the generator's uniforms."""
    u = rng.random((2,) + tuple(np.atleast_1d(size)))
    return np.sqrt(-2.0 * np.log1p(-u[0])) * np.cos(2.0 * np.pi * u[1])


def _noisy_circle(rng, n, radius_var=0.0):
    theta = rng.random(n) * 2.0 * np.pi
    r = 1.0 + np.sqrt(radius_var) * standard_normal(rng, n) if radius_var > 0 else np.ones(n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def _noisy_sphere(rng, n, radius_var=0.0):
    theta = rng.random(n) * np.pi
    phi = rng.random(n) * 2.0 * np.pi
    r = 1.0 + np.sqrt(radius_var) * standard_normal(rng, n) if radius_var > 0 else np.ones(n)
    return np.column_stack(
        [r * np.sin(theta) * np.cos(phi), r * np.sin(theta) * np.sin(phi), r * np.cos(theta)]
    )


_SIGNALS = {"circle": (_noisy_circle, 2), "sphere": (_noisy_sphere, 3)}


@dataclass(frozen=True)
class Cluster:
    center: tuple
    variance: float
    count: int


@dataclass(frozen=True)
class MixtureSpec:
    """Signal component plus isotropic Gaussian outlier clusters.

    ``signal`` names a generator (``"circle"`` or ``"sphere"``, both of unit
    radius) and ``radius_var`` the variance of the radial noise.
    """

    n_signal: int
    signal: str = "circle"
    radius_var: float = 0.0
    clusters: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.signal not in _SIGNALS:
            raise InputError(f"unknown signal generator {self.signal!r}")
        if self.n_signal < 0:
            raise InputError("n_signal must be >= 0")
        if self.radius_var < 0:
            raise InputError("radius variance must be >= 0")
        dim = _SIGNALS[self.signal][1]
        for c in self.clusters:
            if len(c.center) != dim:
                raise InputError(f"cluster center {c.center} is not {dim}-dimensional")
            if not c.variance > 0:
                raise InputError("cluster variance must be > 0")
            if c.count < 0:
                raise InputError("cluster count must be >= 0")
        if self.n_signal + self.n_outlier < 1:
            raise InputError("mixture has no points")

    @property
    def n_outlier(self):
        return sum(c.count for c in self.clusters)

    @property
    def n(self):
        return self.n_signal + self.n_outlier

    @property
    def dim(self):
        return _SIGNALS[self.signal][1]


def gen_mixture(spec, seed):
    """Sample a mixture.

    Returns
    -------
    X : ndarray of shape (n, dim)
        Signal points first, then each cluster in order.
    labels : ndarray of int
        0 for signal points, ``j`` for points of the j-th cluster (1-based).
    """
    streams = _streams(seed, 1 + len(spec.clusters))
    gen = _SIGNALS[spec.signal][0]
    parts = [gen(streams[0], spec.n_signal, spec.radius_var)]
    labels = [np.zeros(spec.n_signal, dtype=np.intp)]
    for j, (c, rng) in enumerate(zip(spec.clusters, streams[1:]), 1):
        center = np.asarray(c.center, dtype=np.float64)
        z = standard_normal(rng, (c.count, len(center)))
        parts.append(center + np.sqrt(c.variance) * z)
        labels.append(np.full(c.count, j, dtype=np.intp))
    return np.concatenate(parts), np.concatenate(labels)


CASE1_SPEC = MixtureSpec(
    n_signal=120,
    signal="circle",
    radius_var=0.04,
    clusters=tuple(
        Cluster(c, 0.0144, 16)
        for c in [(1.25, 1.25), (1.25, -1.25), (-1.25, 1.25), (-1.25, -1.25), (0.0, 0.0)]
    ),
)

_S = 1.01
CASE2_SPEC = MixtureSpec(
    n_signal=265,
    signal="sphere",
    radius_var=0.01,
    clusters=tuple(
        Cluster(c, 0.04, 15)
        for c in [
            (_S, _S, _S), (_S, _S, -_S), (_S, -_S, _S), (_S, -_S, -_S),
            (-_S, _S, _S), (-_S, _S, -_S), (-_S, -_S, _S), (-_S, -_S, -_S),
            (0.0, 0.0, 0.0),
        ]
    ),
)


def gen_case_study_1(seed, return_labels=False):
    """200 points: noisy unit circle (120) plus five Gaussian clusters of 16."""
    X, labels = gen_mixture(CASE1_SPEC, seed)
    return (X, labels) if return_labels else X


def gen_case_study_2(seed, return_labels=False):
    """400 points: noisy unit sphere (265) plus nine Gaussian clusters of 15."""
    X, labels = gen_mixture(CASE2_SPEC, seed)
    return (X, labels) if return_labels else X


def gen_uniform_circle(n, seed):
    """``n`` points uniform on the unit circle."""
    if int(n) < 1:
        raise InputError("n must be >= 1")
    return _noisy_circle(_streams(seed, 1)[0], int(n))
