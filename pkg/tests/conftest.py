import itertools

import numpy as np
import pytest

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
LINE5 = np.array([[0.0], [1.0], [2.0], [3.0], [100.0]])


@pytest.fixture
def square():
    return SQUARE.copy()


@pytest.fixture
def line5():
    return LINE5.copy()


def exhaustive_bottleneck(A, B):
    """Minimax matching cost by enumerating every partial matching.

    A and B are (p, 2) and (q, 2) arrays of finite bars.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    p, q = len(A), len(B)
    half_a = [(A[i, 1] - A[i, 0]) / 2 for i in range(p)]
    half_b = [(B[j, 1] - B[j, 0]) / 2 for j in range(q)]
    best = np.inf
    for k in range(min(p, q) + 1):
        for rows in itertools.combinations(range(p), k):
            for cols in itertools.permutations(range(q), k):
                cost = 0.0
                for i, j in zip(rows, cols):
                    cost = max(cost, max(abs(A[i, 0] - B[j, 0]), abs(A[i, 1] - B[j, 1])))
                for i in set(range(p)) - set(rows):
                    cost = max(cost, half_a[i])
                for j in set(range(q)) - set(cols):
                    cost = max(cost, half_b[j])
                best = min(best, cost)
    return best


def brute_cliques(D, t, max_dim):
    """All vertex subsets of size <= max_dim + 1 whose edges are all <= t."""
    n = len(D)
    out = set()
    for k in range(1, max_dim + 2):
        for s in itertools.combinations(range(n), k):
            if all(D[a, b] <= t for a, b in itertools.combinations(s, 2)):
                out.add(s)
    return out


# one summary line per acceptance criterion, echoed after the test run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[0].split()[-1])):
            terminalreporter.write_line(line)
