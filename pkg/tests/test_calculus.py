import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import finite_difference_jacobian
from multisym.basis import enumerate_generators
from multisym.calculus import classify_rank, find_coincident_pair, jacobian, singularity_predicate
from multisym.embed import Configuration, permute
from multisym.errors import DimensionMismatch, InvalidParameter

B12 = enumerate_generators(1, 2)


def test_jacobian_line_examples():
    np.testing.assert_array_equal(jacobian(B12, Configuration([(0,), (1,)])), [[1, 1], [0, 2]])
    np.testing.assert_array_equal(jacobian(B12, Configuration([(1,), (1,)])), [[1, 1], [2, 2]])


def test_constant_row_is_zero():
    b = enumerate_generators(2, 3, include_constant=True)
    J = jacobian(b, Configuration([(0.3, -0.2), (1.0, 0.5), (-0.7, 0.1)]))
    assert b.order[0] == (0, 0)
    assert not J[0].any()


def test_jacobian_shape_and_mismatch():
    b = enumerate_generators(3, 2)
    assert jacobian(b, Configuration([(0, 0, 0), (1, 1, 1)])).shape == (9, 6)
    with pytest.raises(DimensionMismatch):
        jacobian(b, Configuration([(0, 0), (1, 1)]))


def test_jacobian_matches_finite_differences(rng):
    for _ in range(100):
        d, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        pts = rng.uniform(-1, 1, (n, d))
        b = enumerate_generators(d, n, include_constant=bool(rng.integers(2)))
        J = jacobian(b, Configuration(pts))
        np.testing.assert_allclose(J, finite_difference_jacobian(b, pts), rtol=0, atol=1e-6)


def test_duplicate_columns_bit_identical(rng):
    for _ in range(50):
        d, n = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        pts = rng.uniform(-1, 1, (n, d))
        i1, i2 = sorted(rng.choice(n, 2, replace=False))
        pts[i2] = pts[i1]
        J = jacobian(enumerate_generators(d, n), Configuration(pts))
        for j in range(d):
            assert np.array_equal(J[:, i1 * d + j], J[:, i2 * d + j])


@settings(max_examples=100)
@given(st.integers(1, 3), st.integers(1, 4), st.randoms(use_true_random=False), st.integers(0, 2**32 - 1))
def test_permutation_equivariance(d, n, r, seed):
    pts = np.random.default_rng(seed).uniform(-1, 1, (n, d))
    x = Configuration(pts)
    image = list(range(n))
    r.shuffle(image)
    b = enumerate_generators(d, n)
    cols = [k * d + j for k in image for j in range(d)]
    assert np.array_equal(jacobian(b, permute(x, image)), jacobian(b, x)[:, cols])


def test_classify_rank_examples():
    full = classify_rank(B12, Configuration([(0,), (1,)]))
    assert full.full_column_rank and full.rank == 2 and full.coincident_pair is None
    # |det [[1,1],[0,2]]| = 2 = product of the singular values
    assert full.smallest_singular_value * full.largest_singular_value == pytest.approx(2)

    dup = classify_rank(B12, Configuration([(1,), (1,)]))
    assert not dup.full_column_rank and dup.coincident_pair == (1, 2)

    b = enumerate_generators(2, 2)
    rep = classify_rank(b, Configuration([(0.3, -0.7), (0.3, -0.7)]))
    assert not rep.full_column_rank and rep.coincident_pair == (1, 2)
    assert not rep.numerically_singular


@pytest.mark.parametrize("tol", [0.0, -1e-3, 1.0, 2.0])
def test_classify_rank_rejects_bad_tol(tol):
    with pytest.raises(InvalidParameter):
        classify_rank(B12, Configuration([(0,), (1,)]), tol)


def test_near_coincidence_flagged():
    rep = classify_rank(B12, Configuration([(0.5,), (0.5 + 1e-12,)]), eps=1e-9)
    assert rep.coincident_pair == (1, 2)
    assert rep.numerically_singular


def test_report_json_schema():
    rep = classify_rank(B12, Configuration([(1,), (1,)]))
    raw = json.loads(rep.to_json())
    assert set(raw) == {"sigma_min", "rank", "full_column_rank", "coincident_pair"}
    assert raw["coincident_pair"] == [1, 2] and raw["full_column_rank"] is False
    assert json.loads(classify_rank(B12, Configuration([(0,), (1,)])).to_json())["coincident_pair"] is None


def test_report_consistency(rng):
    for _ in range(100):
        d, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        pts = np.round(rng.uniform(-1, 1, (n, d)), 1)
        rep = classify_rank(enumerate_generators(d, n), Configuration(pts))
        assert rep.full_column_rank == (rep.rank == n * d)
        if rep.coincident_pair:
            i1, i2 = rep.coincident_pair
            assert np.array_equal(pts[i1 - 1], pts[i2 - 1])


def test_singularity_predicate_examples():
    assert singularity_predicate(Configuration([(0,), (0,)]), 0)
    assert not singularity_predicate(Configuration([(0,), (1,)]), 0)
    assert singularity_predicate(Configuration([(0, 0), (1e-12, 0)]), 1e-9)
    with pytest.raises(InvalidParameter):
        singularity_predicate(Configuration([(0,), (1,)]), -1)


def test_first_pair_reported():
    x = Configuration([(1,), (2,), (2,), (1,)])
    assert find_coincident_pair(x) == (1, 4)
