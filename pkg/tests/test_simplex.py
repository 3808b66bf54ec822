import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from gptd.errors import LPFailure
from gptd.simplex import maximize_free, simplex_max


def test_textbook_problem():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
    x, value = simplex_max([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    np.testing.assert_allclose(x, [2, 6], atol=1e-12)
    assert value == pytest.approx(36, abs=1e-12)


def test_unbounded():
    with pytest.raises(LPFailure, match="unbounded"):
        simplex_max([1, 0], [[0, 1]], [1])


def test_negative_rhs_rejected():
    with pytest.raises(LPFailure):
        simplex_max([1], [[1]], [-1])


def test_degenerate_vertex_terminates():
    # a classic cycling example for the largest-coefficient rule
    c = [10, -57, -9, -24]
    a = [[0.5, -5.5, -2.5, 9], [0.5, -1.5, -0.5, 1], [1, 0, 0, 0]]
    x, value = simplex_max(c, a, [0, 0, 1])
    assert value == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.asarray(a) @ x <= np.array([0, 0, 1]) + 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 8))
def test_matches_scipy_on_random_bounded_problems(seed, n, m):
    rng = np.random.default_rng(seed)
    a = np.vstack([rng.uniform(-1, 1, size=(m, n)), np.ones((1, n))])
    b = np.concatenate([rng.uniform(0, 2, m), [5.0]])
    c = rng.normal(size=n)
    x, value = simplex_max(c, a, b)
    ref = linprog(-c, A_ub=a, b_ub=b, bounds=[(0, None)] * n, method="highs")
    assert ref.status == 0
    assert value == pytest.approx(-ref.fun, abs=1e-9)
    assert np.all(a @ x <= b + 1e-9) and np.all(x >= -1e-12)
    assert c @ x == pytest.approx(value, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_free_variables_with_box_match_scipy(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n + 2, n))
    b = rng.uniform(0, 1, n + 2)
    c = rng.normal(size=n)
    x, value = maximize_free(c, a, b, bound=1.0)
    ref = linprog(-c, A_ub=a, b_ub=b, bounds=[(-1, 1)] * n, method="highs")
    assert value == pytest.approx(-ref.fun, abs=1e-9)
    assert np.all(np.abs(x) <= 1 + 1e-12)
