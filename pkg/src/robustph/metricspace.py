"""Point clouds, Euclidean distance matrices and Hausdorff distance."""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import InputError, ParseError

__all__ = [
    "MAX_POINTS",
    "check_cloud",
    "check_distance_matrix",
    "distance_matrix",
    "hausdorff",
    "enclosing_radius",
    "read_points_csv",
    "write_points_csv",
    "read_distance_csv",
]

#: Largest cardinality for which a dense n x n table is materialised.
MAX_POINTS = 5000


def check_cloud(points, *, name="cloud"):
    """Validate a point cloud and return it as a 2-D float64 array.

    A 1-D input is read as ``n`` points on a line.

    Parameters
    ----------
    points : array-like of shape (n_points, n_dims) or (n_points,)
        Coordinates, one row per point.
    name : str, default="cloud"
        Used in error messages.

    Returns
    -------
    X : ndarray of shape (n_points, n_dims)
    """
    try:
        X = np.asarray(points, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: coordinates are not numeric ({exc})") from None
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise InputError(f"{name}: expected a 2-D array, got ndim={X.ndim}")
    if X.shape[0] < 1:
        raise InputError(f"{name}: empty point cloud")
    if X.shape[1] < 1:
        raise InputError(f"{name}: points have dimension 0")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name}: non-finite coordinate")
    return X


def check_distance_matrix(D, *, atol=1e-9):
    """Validate a precomputed distance table.

    Symmetry is checked to ``atol`` and then enforced exactly by averaging
    with the transpose.
    """
    try:
        D = np.array(D, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"distance matrix is not numeric ({exc})") from None
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise InputError(f"distance matrix must be square, got shape {D.shape}")
    if D.shape[0] < 1:
        raise InputError("distance matrix is empty")
    if D.shape[0] > MAX_POINTS:
        raise InputError(
            f"{D.shape[0]} points exceeds the dense limit of {MAX_POINTS}"
        )
    if not np.all(np.isfinite(D)):
        raise InputError("distance matrix has non-finite entries")
    if np.any(D < 0):
        raise InputError("distance matrix has negative entries")
    if np.any(np.abs(np.diag(D)) > atol):
        raise InputError("distance matrix has a non-zero diagonal")
    if np.any(np.abs(D - D.T) > atol):
        raise InputError("distance matrix is not symmetric")
    D = 0.5 * (D + D.T)
    np.fill_diagonal(D, 0.0)
    return D


def distance_matrix(points):
    """Euclidean distance matrix of a point cloud.

    Parameters
    ----------
    points : array-like of shape (n_points, n_dims)

    Returns
    -------
    D : ndarray of shape (n_points, n_points)
        Symmetric with an exactly zero diagonal.
    """
    X = check_cloud(points)
    if X.shape[0] > MAX_POINTS:
        raise InputError(f"{X.shape[0]} points exceeds the dense limit of {MAX_POINTS}")
    D = cdist(X, X)
    # exact symmetry regardless of rounding in the subtraction
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    return D


def _directed_hausdorff(A, B, chunk=2048):
    worst = 0.0
    for start in range(0, A.shape[0], chunk):
        d = cdist(A[start:start + chunk], B)
        worst = max(worst, float(d.min(axis=1).max()))
    return worst


def hausdorff(A, B):
    """Hausdorff distance between two finite point sets.

    Exhaustive O(|A| |B|) scan.

    Parameters
    ----------
    A, B : array-like of shape (n_a, m) and (n_b, m)

    Returns
    -------
    float
    """
    A = check_cloud(A, name="A")
    B = check_cloud(B, name="B")
    if A.shape[1] != B.shape[1]:
        raise InputError(
            f"dimension mismatch: A has dim {A.shape[1]}, B has dim {B.shape[1]}"
        )
    return max(_directed_hausdorff(A, B), _directed_hausdorff(B, A))


def enclosing_radius(D):
    """Smallest radius of a ball centred at a data point containing all points.

    Beyond this filtration value the Rips complex is a cone, so no
    homology in dimension >= 1 survives past it.
    """
    D = np.asarray(D, dtype=np.float64)
    if D.shape[0] == 0:
        raise InputError("distance matrix is empty")
    return float(D.max(axis=1).min())


def read_points_csv(path):
    """Read a point-cloud CSV: one point per row, optional ``#`` header lines."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError:
                raise ParseError(f"non-numeric field in {line!r}", lineno) from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
            rows.append(row)
    if not rows:
        raise InputError(f"{path}: no points")
    return check_cloud(rows, name=str(path))


def write_points_csv(path, points, header=None):
    X = check_cloud(points)
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_distance_csv(path):
    """Read an n x n distance-matrix CSV."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError:
                raise ParseError(f"non-numeric field in {line!r}", lineno) from None
    if any(len(r) != len(rows) for r in rows):
        raise InputError(f"{path}: distance matrix is not square")
    return check_distance_matrix(rows)
