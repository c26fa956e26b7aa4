"""Cross-checks against classical optimal transport.

When both states and the observable are diagonal in one basis, dephasing
in the product basis preserves feasibility, PPT and the cost, so some
optimal coupling is diagonal and the quantum problem collapses to a
classical transport problem on the line.  For the squared-difference
cost the classical optimum is the monotone rearrangement (north-west
corner rule) and the maximum is the anti-monotone one, which gives an
exact oracle that never touches the SDP machinery.
"""

import numpy as np
import pytest

from qot import coupling as cp
from qot import qstates as qs
from qot import wasserstein as ws


def nw_corner_cost(r, s, h, maximize=False):
    """Exact classical transport cost (1/2) sum p_ij (h_i - h_j)^2 under
    the (anti-)monotone coupling."""
    order = np.argsort(h)
    r = np.array(r, dtype=float)[order]
    s = np.array(s, dtype=float)[order]
    hs = np.array(h, dtype=float)[order]
    if maximize:
        s = s[::-1]
    i = j = 0
    ri, sj = r[0], s[0]
    total = 0.0
    while i < len(r) and j < len(s):
        move = min(ri, sj)
        hj = hs[len(hs) - 1 - j] if maximize else hs[j]
        total += 0.5 * move * (hs[i] - hj) ** 2
        ri -= move
        sj -= move
        if ri <= 1e-15:
            i += 1
            ri = r[i] if i < len(r) else 0.0
        if sj <= 1e-15:
            j += 1
            sj = s[j] if j < len(s) else 0.0
    return total


def random_probabilities(d, rng):
    p = rng.uniform(0.05, 1.0, d)
    return p / p.sum()


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("convention", ["dpt", "gmpc"])
def test_diagonal_distance_matches_classical_transport(d, convention):
    rng = np.random.default_rng(600 + d)
    for _ in range(5):
        r = random_probabilities(d, rng)
        s = random_probabilities(d, rng)
        h = np.sort(rng.standard_normal(d) * 2.0)
        rho, sigma = np.diag(r), np.diag(s)
        spec = ws.CostSpec((np.diag(h),), convention)
        want = nw_corner_cost(r, s, h)
        for cset in (cp.GENERAL, cp.PPT):
            res = ws.distance_squared(rho, sigma, spec, cset)
            assert res.value == pytest.approx(want, abs=1e-7), (d, cset.label())


@pytest.mark.parametrize("d", [2, 3])
def test_diagonal_variance_matches_antimonotone_transport(d):
    # The maximization over general or PPT couplings is reached by the
    # anti-monotone classical coupling for diagonal data.
    rng = np.random.default_rng(700 + d)
    for _ in range(5):
        r = random_probabilities(d, rng)
        s = random_probabilities(d, rng)
        h = np.sort(rng.standard_normal(d) * 2.0)
        spec = ws.CostSpec((np.diag(h),), "gmpc")
        want = nw_corner_cost(r, s, h, maximize=True)
        for cset in (cp.GENERAL, cp.PPT):
            res = ws.wasserstein_variance(np.diag(r), np.diag(s), spec, cset)
            assert res.value == pytest.approx(want, abs=1e-7), (d, cset.label())


def test_classical_oracle_against_exhaustive_qubit_plan():
    # d = 2 admits a one-parameter family of diagonal couplings; scan it.
    rng = np.random.default_rng(800)
    for _ in range(10):
        r = random_probabilities(2, rng)
        s = random_probabilities(2, rng)
        h = np.sort(rng.standard_normal(2))
        lo, hi = max(0.0, r[0] + s[0] - 1.0), min(r[0], s[0])
        values = []
        for t in np.linspace(lo, hi, 101):
            plan = np.array(
                [[t, r[0] - t], [s[0] - t, 1.0 - r[0] - s[0] + t]]
            )
            values.append(
                0.5 * sum(
                    plan[i, j] * (h[i] - h[j]) ** 2
                    for i in range(2)
                    for j in range(2)
                )
            )
        assert nw_corner_cost(r, s, h) == pytest.approx(min(values), abs=1e-12)
        assert nw_corner_cost(r, s, h, maximize=True) == pytest.approx(
            max(values), abs=1e-12
        )


def test_example3_is_the_degenerate_classical_case():
    # equal diagonal states transport for free along the diagonal
    for p in (0.2, 0.5, 0.8):
        assert nw_corner_cost([p, 1 - p], [p, 1 - p], [1.0, -1.0]) == 0.0
