import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from robustph.exceptions import InputError, ParseError
from robustph.metricspace import (
    check_distance_matrix,
    distance_matrix,
    enclosing_radius,
    hausdorff,
    read_distance_csv,
    read_points_csv,
    write_points_csv,
)

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def clouds(max_n=8, dim=2):
    return st.integers(1, max_n).flatmap(lambda n: arrays(np.float64, (n, dim), elements=coords))


def test_distance_examples(square):
    assert distance_matrix([[0.0], [3.0]])[0, 1] == 3
    assert distance_matrix([[0.0, 0.0], [3.0, 4.0]])[0, 1] == 5
    D = distance_matrix(square)
    assert np.all(np.diag(D) == 0)
    assert np.array_equal(D, D.T)


def test_distance_rejects_nonfinite():
    with pytest.raises(InputError):
        distance_matrix([[0.0, np.nan]])
    with pytest.raises(InputError):
        distance_matrix([[np.inf]])
    with pytest.raises(InputError):
        distance_matrix(np.empty((0, 2)))


@settings(max_examples=50, deadline=None)
@given(clouds(max_n=10, dim=3))
def test_distance_triangle_inequality(X):
    D = distance_matrix(X)
    # via[i, j, k] = D[i, j] + D[j, k] must bound D[i, k]
    via = D[:, :, None] + D[None, :, :]
    assert np.all(D[:, None, :] <= via + 1e-9 * (1 + via))


def test_hausdorff_examples(square):
    assert hausdorff([[0.0]], [[1.0]]) == 1
    assert hausdorff([[0.0], [2.0]], [[0.0], [1.0], [2.0]]) == 1
    assert hausdorff(square, square) == 0


def test_hausdorff_errors():
    with pytest.raises(InputError):
        hausdorff(np.empty((0, 2)), [[0.0, 0.0]])
    with pytest.raises(InputError):
        hausdorff([[0.0, 0.0]], [[0.0, 0.0, 0.0]])


@settings(max_examples=60, deadline=None)
@given(clouds(), clouds(), clouds())
def test_hausdorff_metric_properties(A, B, C):
    assert hausdorff(A, B) == hausdorff(B, A)
    assert hausdorff(A, B) <= hausdorff(A, C) + hausdorff(C, B) + 1e-9
    assert hausdorff(A, np.vstack([A, B])) <= hausdorff(A, B) + 1e-12


@settings(max_examples=30, deadline=None)
@given(clouds())
def test_hausdorff_zero_iff_same_set(A):
    assert hausdorff(A, A[::-1]) == 0
    B = A.copy()
    B[0, 0] += 1.0
    if not any(np.array_equal(B[0], a) for a in A):
        assert hausdorff(A, B) > 0


def test_enclosing_radius_examples(square):
    assert enclosing_radius(distance_matrix([[0.0], [1.0], [2.0]])) == 1
    assert enclosing_radius(distance_matrix([[5.0, 5.0]])) == 0
    assert enclosing_radius(distance_matrix(square)) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_check_distance_matrix():
    with pytest.raises(InputError):
        check_distance_matrix([[0, 1], [2, 0]])
    with pytest.raises(InputError):
        check_distance_matrix([[1, 1], [1, 0]])
    with pytest.raises(InputError):
        check_distance_matrix([[0, -1], [-1, 0]])
    with pytest.raises(InputError):
        check_distance_matrix([[0, 1, 2], [1, 0, 3]])
    with pytest.raises(InputError):
        check_distance_matrix(np.zeros((5001, 5001), dtype=np.float32))


def test_points_csv_roundtrip(tmp_path, square):
    path = tmp_path / "pts.csv"
    write_points_csv(path, square, header="x,y")
    assert path.read_text().startswith("# x,y\n")
    assert np.array_equal(read_points_csv(path), square)


def test_points_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# header\n1,2\n3\n")
    with pytest.raises(ParseError, match="line 3"):
        read_points_csv(bad)
    bad.write_text("1,abc\n")
    with pytest.raises(ParseError, match="line 1"):
        read_points_csv(bad)


def test_distance_csv(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("0,3\n3,0\n")
    assert read_distance_csv(path)[0, 1] == 3
    path.write_text("0,3\n3,0,1\n")
    with pytest.raises(InputError):
        read_distance_csv(path)
