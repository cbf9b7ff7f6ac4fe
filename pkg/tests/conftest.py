import itertools
import math

import numpy as np
import pytest

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def brute_force_distance(x, y):
    """min over all n! relabellings of y, straight from the definition."""
    best = math.inf
    for perm in itertools.permutations(range(len(y))):
        total = 0.0
        for i, k in enumerate(perm):
            total += sum((a - b) ** 2 for a, b in zip(x[i], y[k]))
        best = min(best, total)
    return math.sqrt(best)


def power_sums_direct(points, exponents):
    """Power sums by naive pow(), independent of the library's evaluator."""
    return [sum(math.prod(c ** e for c, e in zip(p, s)) for p in points) for s in exponents]


def finite_difference_jacobian(basis, points, h=1e-6):
    from multisym import Configuration, embed

    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    J = np.zeros((len(basis), n * d))
    for i in range(n):
        for j in range(d):
            up, dn = pts.copy(), pts.copy()
            up[i, j] += h
            dn[i, j] -= h
            fu = np.array(embed(basis, Configuration(up)).values)
            fd = np.array(embed(basis, Configuration(dn)).values)
            J[:, i * d + j] = (fu - fd) / (2 * h)
    return J
