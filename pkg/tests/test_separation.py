import itertools
import json
import math

import numpy as np
import pytest

from conftest import brute_force_distance
from multisym.basis import enumerate_generators
from multisym.calculus import jacobian
from multisym.embed import Configuration, embed, permute
from multisym.errors import DimensionMismatch, InputFormatError, PreconditionViolation
from multisym.separation import (
    SeparatingPolynomial,
    evaluate_separating,
    optimal_matching,
    orbit_equal,
    quotient_distance,
    separating_polynomial,
)


def C(*pts):
    return Configuration(pts)


def grid_config(rng, n, d):
    return Configuration(rng.integers(-4, 5, (n, d)) * 0.25)


def test_orbit_equal_examples():
    assert orbit_equal(C((0,), (1,)), C((1,), (0,)), 0)
    assert not orbit_equal(C((0,), (1,)), C((0,), (0,)), 0)
    assert orbit_equal(C((0, 1), (2, 3)), C((2, 3), (0, 1)))


def test_orbit_equal_with_tolerance_needs_matching():
    # greedy pairing of x[0] with y[0] would strand x[1]
    x = C((0.0,), (0.1,))
    y = C((0.05,), (0.2,))
    assert orbit_equal(x, y, eps=0.1)
    assert not orbit_equal(x, y, eps=0.09)


def test_orbit_equal_multiplicities():
    assert not orbit_equal(C((0,), (0,), (1,)), C((0,), (1,), (1,)))
    assert orbit_equal(C((1,), (0,), (1,)), C((1,), (1,), (0,)))


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        orbit_equal(C((0,), (1,)), C((0,), (1,), (2,)))
    with pytest.raises(DimensionMismatch):
        quotient_distance(C((0,), (1,)), C((0, 0), (1, 1)))


def test_quotient_distance_examples():
    assert quotient_distance(C((0,), (1,)), C((1,), (0,))) == 0
    x, y = C((0,), (0,)), C((1,), (1,))
    assert brute_force_distance(x.points, y.points) == math.sqrt(2)
    assert quotient_distance(x, y) == math.sqrt(2)
    x, y = C((0, 0), (1, 0)), C((0, 0), (0, 1))
    expected = brute_force_distance(x.points, y.points)
    assert expected == math.sqrt(2)
    assert quotient_distance(x, y) == expected


def test_assignment_matches_brute_force(rng):
    for _ in range(60):
        n, d = int(rng.integers(1, 7)), int(rng.integers(1, 4))
        x = Configuration(rng.uniform(-1, 1, (n, d)))
        y = Configuration(rng.uniform(-1, 1, (n, d)))
        assert abs(quotient_distance(x, y) - brute_force_distance(x.points, y.points)) <= 1e-12


def test_optimal_matching_realises_distance(rng):
    x = Configuration(rng.uniform(-1, 1, (5, 2)))
    y = Configuration(rng.uniform(-1, 1, (5, 2)))
    image = optimal_matching(x, y)
    direct = math.sqrt(sum((a - b) ** 2 for k in range(5) for a, b in zip(x[k], y[image[k]])))
    assert direct == pytest.approx(quotient_distance(x, y), abs=1e-14)


def test_zero_distance_iff_orbit_equal(rng):
    for _ in range(200):
        n, d = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        x = grid_config(rng, n, d)
        y = grid_config(rng, n, d) if rng.integers(2) else permute(x, rng.permutation(n))
        assert (quotient_distance(x, y) == 0) == orbit_equal(x, y, 0)


def test_metric_axioms(rng):
    for _ in range(200):
        n, d = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        x, y, z = (Configuration(rng.uniform(-1, 1, (n, d))) for _ in range(3))
        assert quotient_distance(x, y) == pytest.approx(quotient_distance(y, x), abs=1e-15)
        assert quotient_distance(x, z) <= quotient_distance(x, y) + quotient_distance(y, z) + 1e-12
        assert quotient_distance(x, permute(x, rng.permutation(n))) == 0


def test_separating_polynomial_hand_example():
    x, y = C((0,), (1,)), C((0,), (0,))
    p = separating_polynomial(x, y)
    # support (0), (1); c = (1, 1), c' = (2, 0); first c_j > c'_j at j = 1 -> q(0)=0, q(1)=1
    coeffs = dict(p.inner_terms)
    assert coeffs[(1,)] == pytest.approx(1, abs=1e-12)
    assert coeffs[(0,)] == pytest.approx(0, abs=1e-12)
    assert evaluate_separating(p, x) == pytest.approx(1, abs=1e-12)
    assert evaluate_separating(p, y) == pytest.approx(0, abs=1e-12)


def test_separating_polynomial_repeated_point():
    x, y = C((1,), (1,)), C((1,), (2,))
    p = separating_polynomial(x, y)
    px, py = evaluate_separating(p, x), evaluate_separating(p, y)
    assert px == pytest.approx(2 * p.q((1.0,)))
    assert py == pytest.approx(p.q((1.0,)) + p.q((2.0,)))
    assert abs(px - py) > 1e-9


def test_separating_polynomial_plane():
    x, y = C((0, 0), (1, 1)), C((0, 1), (1, 0))
    p = separating_polynomial(x, y)
    assert abs(evaluate_separating(p, x) - evaluate_separating(p, y)) > 1e-9
    b = enumerate_generators(2, 2)
    assert embed(b, x).values != embed(b, y).values


def test_separating_polynomial_rejects_equal_orbits():
    with pytest.raises(PreconditionViolation):
        separating_polynomial(C((0,), (1,)), C((1,), (0,)))


def test_evaluate_examples():
    lin = SeparatingPolynomial(1, (((1,), 1.0),))
    sq = SeparatingPolynomial(1, (((2,), 1.0),))
    assert evaluate_separating(lin, C((0,), (1,))) == 1
    assert evaluate_separating(sq, C((1,), (2,))) == 5
    with pytest.raises(DimensionMismatch):
        evaluate_separating(sq, C((1, 2), (2, 3)))


def test_evaluate_permutation_bit_exact(rng):
    for _ in range(100):
        n, d = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        x, y = grid_config(rng, n, d), grid_config(rng, n, d)
        if orbit_equal(x, y):
            continue
        p = separating_polynomial(x, y)
        assert evaluate_separating(p, permute(x, rng.permutation(n))) == evaluate_separating(p, x)


def test_json_round_trip():
    p = separating_polynomial(C((0,), (1,)), C((0,), (0,)))
    raw = json.loads(p.to_json())
    assert all(set(t) == {"exponent", "coeff"} for t in raw)
    assert SeparatingPolynomial.from_list(raw) == p
    with pytest.raises(InputFormatError):
        SeparatingPolynomial.from_list([{"exponent": [1]}])


def test_separation_soundness_on_grid_pairs(rng):
    count = 0
    while count < 300:
        n, d = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        x, y = grid_config(rng, n, d), grid_config(rng, n, d)
        if orbit_equal(x, y):
            continue
        count += 1
        p = separating_polynomial(x, y)
        assert abs(evaluate_separating(p, x) - evaluate_separating(p, y)) > 1e-9
        b = enumerate_generators(d, n)
        assert max(abs(u - v) for u, v in zip(embed(b, x).values, embed(b, y).values)) > 0


def test_forward_lipschitz_bound(rng):
    for d, n in [(1, 2), (2, 2), (1, 3), (2, 3), (3, 2)]:
        b = enumerate_generators(d, n)
        samples = [rng.uniform(-1, 1, (n, d)) for _ in range(400)]
        # all points on one corner maximises entries; include every such corner
        samples += [np.tile(c, (n, 1)) for c in itertools.product((-1.0, 1.0), repeat=d)]
        L = max(np.linalg.norm(jacobian(b, Configuration(s)), 2) for s in samples)
        for _ in range(200):
            x = Configuration(rng.uniform(-1, 1, (n, d)))
            y = Configuration(rng.uniform(-1, 1, (n, d)))
            gap = np.linalg.norm(np.subtract(embed(b, x).values, embed(b, y).values))
            assert gap <= L * quotient_distance(x, y) + 1e-12
