import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustph.diagram import PersistenceDiagram
from robustph.exceptions import InputError, ParseError
from robustph.metricspace import distance_matrix
from robustph.persistence import (
    betti_at_scale,
    betti_profile,
    boundary_matrices,
    brute_force_betti,
    dominant_feature,
    persistent_homology,
    rips_persistence,
)
from robustph.rips import rips_filtration

SQRT2 = math.sqrt(2)


def explicit(D, k, t=None):
    return persistent_homology(rips_filtration(D, k + 1, t), k)


@pytest.fixture
def square_dgm(square):
    return explicit(distance_matrix(square), 1, 2)


def test_square(square, square_dgm):
    expected = PersistenceDiagram.from_bars(
        [(0, 0, 1), (0, 0, 1), (0, 0, 1), (0, 0, math.inf), (1, 1, SQRT2)]
    )
    assert square_dgm == expected
    assert rips_persistence(distance_matrix(square), 1, 2) == expected
    assert rips_persistence(distance_matrix(square), 1) == expected


def test_point_and_triangle():
    one = PersistenceDiagram.from_bars([(0, 0, math.inf)])
    assert explicit(np.zeros((1, 1)), 1, 1) == one
    assert rips_persistence(np.zeros((1, 1)), 1, 1) == one
    D = np.ones((3, 3)) - np.eye(3)
    tri = PersistenceDiagram.from_bars([(0, 0, 1), (0, 0, 1), (0, 0, math.inf)])
    assert explicit(D, 1, 2) == tri
    assert rips_persistence(D, 1, 2) == tri


def test_requires_cofaces(square):
    f = rips_filtration(distance_matrix(square), 1, 2)
    with pytest.raises(InputError):
        persistent_homology(f, 1)
    with pytest.raises(InputError):
        rips_persistence(distance_matrix(square), -1)


def test_small_threshold_gives_essential_h1(square):
    # at t = 1.2 the diagonals are absent so the 4-cycle never dies
    dgm = rips_persistence(distance_matrix(square), 1, 1.2)
    assert list(map(tuple, dgm.in_dim(1))) == [(1.0, math.inf)]
    assert dominant_feature(dgm, 1) is None
    assert explicit(distance_matrix(square), 1, 1.2) == dgm


def test_betti_examples(square, square_dgm):
    D = distance_matrix(square)
    assert betti_at_scale(square_dgm, 1, 1.2) == 1
    assert betti_at_scale(square_dgm, 1, 1.5) == 0
    assert betti_at_scale(square_dgm, 0, 1e9) == 1
    assert brute_force_betti(D, 1, 1.2) == 1
    assert brute_force_betti(D, 1, 1.5) == 0
    assert brute_force_betti(D, 0, 0) == 4
    assert betti_profile(square_dgm, 1) == [(1.0, 1), (SQRT2, 0)]
    with pytest.raises(InputError):
        brute_force_betti(np.zeros((11, 11)), 0, 1)
    with pytest.raises(InputError):
        brute_force_betti(D, 1, 1, max_dim=1)


def test_dominant_feature(square_dgm):
    b, d, L = dominant_feature(square_dgm, 1)
    assert (b, d) == (1.0, SQRT2) and L == SQRT2 - 1
    assert dominant_feature(PersistenceDiagram.from_bars([]), 1) is None
    dgm = PersistenceDiagram.from_bars([(1, 1, 2), (1, 0, 1.5)])
    assert dominant_feature(dgm, 1) == (0, 1.5, 1.5)
    tie = PersistenceDiagram.from_bars([(1, 1, 2), (1, 0.5, 1.5), (1, 0.5, 1.5)])
    assert dominant_feature(tie, 1) == (0.5, 1.5, 1.0)


def test_oracle_equivalence():
    rng = np.random.default_rng(7)
    for trial in range(120):
        n = int(rng.integers(1, 9))
        X = rng.random((n, 2)) if trial % 2 else rng.integers(0, 3, (n, 2)).astype(float)
        D = distance_matrix(X)
        full = explicit(D, 1, float(D.max()) + 1)
        fast = rips_persistence(D, 1, float(D.max()) + 1)
        assert full.allclose(fast, atol=0)
        for t in rng.random(4) * 1.6:
            for k in (0, 1):
                assert betti_at_scale(full, k, t) == brute_force_betti(D, k, t, k + 1)


def test_boundary_of_boundary():
    rng = np.random.default_rng(3)
    for _ in range(30):
        D = distance_matrix(rng.random((int(rng.integers(2, 9)), 3)))
        _, B = boundary_matrices(D, 0.8, 3)
        for k in range(1, 3):
            if B[k].size and B[k + 1].size:
                assert not np.any((B[k].astype(int) @ B[k + 1].astype(int)) % 2)


def test_pairing_sanity():
    D = distance_matrix(np.random.default_rng(1).random((25, 3)))
    for dgm in (explicit(D, 2), rips_persistence(D, 2)):
        assert np.all(dgm.deaths > dgm.births)
        assert np.all(dgm.births >= 0)
        assert np.sum((dgm.dims == 0) & np.isinf(dgm.deaths)) == 1


def test_explicit_matches_implicit_larger():
    rng = np.random.default_rng(9)
    for n, dim in [(40, 1), (30, 2), (18, 3)]:
        D = distance_matrix(rng.random((n, 3)))
        assert explicit(D, dim) == rips_persistence(D, dim)
    # ties on a grid
    D = distance_matrix(rng.integers(0, 4, (30, 2)).astype(float))
    assert explicit(D, 2) == rips_persistence(D, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**31))
def test_permutation_invariance(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.random((n, 2))
    perm = rng.permutation(n)
    assert rips_persistence(distance_matrix(X), 1) == rips_persistence(distance_matrix(X[perm]), 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 20), st.sampled_from([0.5, 2.0, 4.0, 0.25]), st.integers(0, 2**31))
def test_scaling_covariance(n, c, seed):
    # powers of two keep the scaled distances exact
    X = np.random.default_rng(seed).random((n, 2))
    a = rips_persistence(distance_matrix(X), 1)
    b = rips_persistence(distance_matrix(c * X), 1)
    assert a.scale(c) == b


def test_diagram_formats(square_dgm, tmp_path):
    text = square_dgm.to_csv()
    assert text.splitlines()[0] == "dim,birth,death"
    assert "0,0,inf" in text.splitlines()
    assert PersistenceDiagram.from_csv(io.StringIO(text)) == square_dgm
    assert PersistenceDiagram.from_json(square_dgm.to_json()) == square_dgm
    with pytest.raises(ParseError):
        PersistenceDiagram.from_csv(io.StringIO("dim,birth,death\n1,2\n"))
    with pytest.raises(InputError):
        PersistenceDiagram.from_bars([(1, 2.0, 1.0)])
