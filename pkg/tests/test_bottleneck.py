import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustph.bottleneck import BottleneckResult, bottleneck, stability_gap
from robustph.diagram import PersistenceDiagram
from robustph.exceptions import InputError

from conftest import exhaustive_bottleneck


def random_bars(rng, k, grid=None):
    b = rng.random(k) * 2
    L = rng.random(k) * 2
    if grid:
        b, L = np.round(b * grid) / grid, np.round(L * grid) / grid + 1 / grid
    return np.column_stack([b, b + L])


def test_examples():
    a = PersistenceDiagram.from_bars([(1, 0.0, 2.0)])
    assert bottleneck(a, a, 1).value == 0
    assert bottleneck(a, PersistenceDiagram.from_bars([]), 1).value == 1
    assert bottleneck(a, PersistenceDiagram.from_bars([(1, 0.0, 3.0)]), 1).value == 1
    assert bottleneck([[0.0, 2.0]], np.empty((0, 2))).value == 1


def test_dim_restriction():
    a = PersistenceDiagram.from_bars([(0, 0.0, 5.0), (1, 0.0, 2.0)])
    b = PersistenceDiagram.from_bars([(1, 0.0, 2.0)])
    assert bottleneck(a, b, 1).value == 0
    assert bottleneck(a, b, 0).value == 2.5
    with pytest.raises(InputError):
        bottleneck(a, b)


def test_essential_bars():
    a = [[0.0, math.inf], [1.0, math.inf]]
    b = [[0.5, math.inf], [1.25, math.inf]]
    assert bottleneck(a, b).value == 0.5
    assert bottleneck(a, [[0.0, math.inf]]).value == math.inf
    assert bottleneck([[0.0, math.inf], [0.0, 0.2]], [[0.0, math.inf]]).value == pytest.approx(0.1)


def test_matching_achieves_value():
    rng = np.random.default_rng(0)
    A, B = random_bars(rng, 4), random_bars(rng, 3)
    res = bottleneck(A, B)
    assert isinstance(res, BottleneckResult)
    worst = 0.0
    used_a, used_b = [], []
    for left, right in res.matching:
        if left == "diagonal":
            worst = max(worst, (right[1] - right[0]) / 2)
            used_b.append(right)
        elif right == "diagonal":
            worst = max(worst, (left[1] - left[0]) / 2)
            used_a.append(left)
        else:
            worst = max(worst, abs(left[0] - right[0]), abs(left[1] - right[1]))
            used_a.append(left)
            used_b.append(right)
    assert worst == res.value
    assert sorted(used_a) == sorted(map(tuple, A.tolist()))
    assert sorted(used_b) == sorted(map(tuple, B.tolist()))
    d = res.to_dict()
    assert d["value"] == res.value


def test_oracle_200_pairs():
    rng = np.random.default_rng(2024)
    for t in range(200):
        grid = 4 if t % 2 else None  # coarse grids force ties
        A = random_bars(rng, rng.integers(0, 7), grid)
        B = random_bars(rng, rng.integers(0, 7), grid)
        assert bottleneck(A, B).value == exhaustive_bottleneck(A, B)


diagrams = st.lists(
    st.tuples(st.integers(0, 8), st.integers(1, 8)).map(lambda t: (t[0] / 4, (t[0] + t[1]) / 4)),
    max_size=5,
)


@settings(max_examples=150, deadline=None)
@given(diagrams, diagrams, diagrams)
def test_metric_axioms(a, b, c):
    A, B, C = (np.array(x, dtype=float).reshape(-1, 2) for x in (a, b, c))
    ab = bottleneck(A, B).value
    assert ab == bottleneck(B, A).value
    assert bottleneck(A, A).value == 0
    if ab == 0:
        assert sorted(a) == sorted(b)
    assert bottleneck(A, C).value <= ab + bottleneck(B, C).value + 1e-9


def test_stability_examples(square):
    assert stability_gap(square, square) == (0.0, 0.0)
    w, h = stability_gap(square, square + np.array([3.0, -1.0]))
    assert w == 0 and h == pytest.approx(math.sqrt(10))
    moved = square.copy()
    moved[2] += np.array([0.03, 0.04])
    w, h = stability_gap(square, moved, dim=1)
    assert w <= 0.1 + 1e-9
    with pytest.raises(InputError):
        stability_gap(square, square, dim=1, max_dim=1)


def test_stability_random():
    rng = np.random.default_rng(11)
    for t in range(60):
        n = int(rng.integers(3, 41))
        A = rng.random((n, 2))
        B = A + rng.normal(scale=0.03, size=A.shape)
        if t % 3 == 0:
            B = B[: max(1, n - 2)]
        for dim in (0, 1):
            w, h = stability_gap(A, B, dim=dim)
            assert w <= 2 * h + 1e-9
