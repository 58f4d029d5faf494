import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from worg.dtw import abs_difference_matrix, cost_matrix, distance, distance_many, warp_path

from oracles import brute_force_dtw

small_series = st.lists(st.integers(0, 9), min_size=1, max_size=5)
real_series = st.lists(
    st.floats(0, 200, allow_nan=False, allow_infinity=False), min_size=1, max_size=12
)


def published_pair():
    t = np.arange(50)
    f = 90 * 1.01**t
    g = np.where(t < 25, 0.95 * f, 1.05 * f)
    return f, g


def test_abs_difference_matrix():
    np.testing.assert_array_equal(abs_difference_matrix([1, 2], [1, 3]), [[0, 2], [1, 1]])
    d = abs_difference_matrix([3.0, 4.0, 5.0], [3.0, 4.0, 5.0])
    np.testing.assert_array_equal(np.diag(d), 0.0)


def test_abs_difference_published_inputs():
    f, g = published_pair()
    d = abs_difference_matrix(f, g)
    np.testing.assert_allclose(np.diag(d)[:25], 0.05 * f[:25], rtol=1e-12)


def test_empty_series_rejected():
    with pytest.raises(ValueError):
        abs_difference_matrix([], [1.0])
    with pytest.raises(ValueError):
        distance([1.0], [])


def test_cost_matrix_hand_example():
    C = cost_matrix(abs_difference_matrix([1, 2, 3], [1, 2, 4]))
    np.testing.assert_array_equal(C, [[0, 1, 4], [1, 0, 2], [3, 1, 1]])


def test_cost_matrix_fiducial_and_single():
    np.testing.assert_array_equal(cost_matrix(np.zeros((4, 3))), np.zeros((4, 3)))
    np.testing.assert_array_equal(cost_matrix([[2.5]]), [[2.5]])


def test_warp_path_hand_example():
    C = cost_matrix(abs_difference_matrix([1, 2, 3], [1, 2, 4]))
    assert warp_path(C) == [(0, 0), (1, 1), (2, 2)]


def test_warp_path_identical_is_diagonal():
    f = [5.0, 1.0, 7.0, 2.0]
    path = warp_path(cost_matrix(abs_difference_matrix(f, f)))
    assert path == [(i, i) for i in range(4)]


def test_warp_path_tie_prefers_diagonal_then_row():
    # all zero costs: every predecessor ties
    assert warp_path(np.zeros((3, 2))) == [(0, 0), (1, 0), (2, 1)]


def test_distance_hand_example():
    assert distance([1, 2, 3], [1, 2, 4]) == pytest.approx(1 / 6, abs=1e-15)
    assert brute_force_dtw([1, 2, 3], [1, 2, 4]) == pytest.approx(1 / 6)


def test_distance_published_value():
    f, g = published_pair()
    assert distance(f, g) == pytest.approx(0.756, abs=0.005)


def test_published_path_avoids_costly_cells():
    f, g = published_pair()
    C = cost_matrix(abs_difference_matrix(f, g))
    path = warp_path(C)
    delta = abs_difference_matrix(f, g)
    on_path = np.mean([delta[p] for p in path])
    # the path should sit far below the matrix average cost
    assert on_path < 0.25 * delta.mean()


def test_unequal_lengths():
    assert distance([1, 2, 3, 4], [1, 4]) == pytest.approx(float(brute_force_dtw([1, 2, 3, 4], [1, 4])))


@settings(max_examples=200, deadline=None)
@given(small_series, small_series)
def test_matches_exhaustive_paths(f, g):
    assert distance(f, g) == pytest.approx(float(brute_force_dtw(f, g)), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(small_series, small_series)
def test_path_cost_equals_corner(f, g):
    delta = abs_difference_matrix(f, g)
    C = cost_matrix(delta)
    path = warp_path(C)
    assert path[0] == (0, 0) and path[-1] == (len(f) - 1, len(g) - 1)
    for (a0, b0), (a1, b1) in zip(path, path[1:]):
        assert (a1 - a0, b1 - b0) in {(1, 0), (0, 1), (1, 1)}
    assert len(path) <= len(f) + len(g)
    assert sum(delta[p] for p in path) == pytest.approx(C[-1, -1])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0, 200), min_size=n, max_size=n),
    st.lists(st.floats(0, 200), min_size=n, max_size=n),
)))
def test_symmetric_equal_length(pair):
    f, g = pair
    assert distance(f, g) == pytest.approx(distance(g, f), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(real_series, real_series, st.floats(0.01, 100))
def test_nonnegative_and_scale_covariant(f, g, alpha):
    d = distance(f, g)
    assert d >= 0
    assert distance(f, f) == 0
    scaled = distance(np.multiply(alpha, f), np.multiply(alpha, g))
    assert scaled == pytest.approx(alpha * d, rel=1e-9, abs=1e-9)


def test_identity_of_indiscernibles():
    assert distance([1.0, 2.0], [1.0, 2.0]) == 0
    assert distance([1.0, 2.0], [1.0, 2.5]) > 0


@settings(max_examples=50, deadline=None)
@given(real_series, st.lists(real_series, min_size=1, max_size=4))
def test_batched_matches_single(f, rows):
    n = min(len(r) for r in rows)
    G = np.array([r[:n] for r in rows])
    expected = [distance(f, row) for row in G]
    np.testing.assert_allclose(distance_many(f, G), expected, rtol=1e-12, atol=1e-12)
