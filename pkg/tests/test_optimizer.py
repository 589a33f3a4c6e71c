import numpy as np
import pytest
from scipy.optimize import linprog

from leastdoubling.graph import Graph, build_named, distance_table
from leastdoubling.lp import FeasibilityError, solve_phase1
from leastdoubling.measures import doubling_constant
from leastdoubling.optimizer import ball_constraints, feasible_at, least_doubling


def random_graph(rng, n):
    edges = {(int(rng.integers(v)), v) for v in range(1, n)}
    edges |= {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.15}
    return Graph.from_edges(n, sorted(edges))


def highs_phase1(g, h):
    """Phase-1 optimum of ``G y - e <= h`` via scipy, the independent oracle."""
    m, n = g.shape
    c = np.zeros(n + 1)
    c[-1] = 1
    a = np.hstack([g, -np.ones((m, 1))])
    res = linprog(c, A_ub=a, b_ub=h, bounds=[(0, None)] * (n + 1), method="highs")
    assert res.status == 0
    return res.fun


def test_phase1_matches_highs_on_random_systems():
    rng = np.random.default_rng(21)
    for _ in range(60):
        m, n = int(rng.integers(2, 25)), int(rng.integers(1, 8))
        g = rng.normal(size=(m, n))
        h = rng.normal(size=m)
        res = solve_phase1(g, h)
        assert res.infeasibility == pytest.approx(highs_phase1(g, h), abs=1e-8)
        if res.feasible:
            assert np.all(g @ res.y <= h + 1e-9)
            assert np.all(res.y >= 0)
        else:
            # Farkas certificate: z >= 0, G^T z >= 0, h.z < 0
            z = res.certificate
            assert np.all(z >= 0)
            assert np.all(g.T @ z >= -1e-9)
            assert h @ z < 0


def test_phase1_trivial_cases():
    assert solve_phase1(np.zeros((0, 3)), np.zeros(0)).feasible
    assert not solve_phase1(np.array([[1.0]]), np.array([-1.0])).feasible


def test_pivot_budget():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(30, 6))
    h = rng.normal(size=30) - 2
    with pytest.raises(FeasibilityError):
        solve_phase1(g, h, max_pivots=0)


def test_level_decisions_match_highs_on_random_graphs():
    rng = np.random.default_rng(8)
    checked = 0
    for _ in range(15):
        g = random_graph(rng, int(rng.integers(3, 10)))
        idx = distance_table(g)
        outer, inner = ball_constraints(idx)
        for t in rng.uniform(2.0, 6.0, size=4):
            gm = outer - t * inner
            h = -gm.sum(axis=1)
            ref = highs_phase1(gm, h)
            if abs(ref) < 1e-6:
                continue  # too close to the boundary to call
            mu = feasible_at(idx, t, (outer, inner))
            assert (mu is not None) == (ref <= 1e-6)
            if mu is not None:
                assert doubling_constant(idx, mu).c_mu <= t + 1e-9
                assert mu.weights.min() >= 1 - 1e-12
            checked += 1
    assert checked > 20


def test_ball_constraints_drop_trivial_pairs():
    outer, inner = ball_constraints(distance_table(build_named("complete", 4)))
    # only k = 0 matters on K_4, one row per vertex
    assert outer.shape == (4, 4)
    assert np.all(outer.sum(axis=1) == 4)
    assert np.all(inner.sum(axis=1) == 1)


def test_feasible_at_rejects_low_level():
    with pytest.raises(ValueError):
        feasible_at(distance_table(build_named("path", 3)), 0.5)


def test_least_doubling_examples():
    res = least_doubling(distance_table(build_named("star", 10)))
    assert res.c_estimate == pytest.approx(4.0, abs=1e-9)
    assert res.bracket[1] - res.bracket[0] <= 1e-10
    c = doubling_constant(distance_table(build_named("star", 10)), res.minimizer).c_mu
    assert res.c_estimate - 1e-9 <= c <= res.bracket[1] + 1e-9


def test_least_doubling_path_two_is_two():
    res = least_doubling(distance_table(build_named("path", 2)))
    assert res.c_estimate == 2.0
    assert res.iterations == 0


def test_least_doubling_random_graphs_bracket_minimizer():
    rng = np.random.default_rng(13)
    for _ in range(5):
        idx = distance_table(random_graph(rng, int(rng.integers(4, 9))))
        res = least_doubling(idx, tol=1e-8)
        c = doubling_constant(idx, res.minimizer).c_mu
        assert res.bracket[0] - 1e-9 <= c <= res.bracket[1] + 1e-9
        # no measure beats the lower bracket end
        assert feasible_at(idx, res.bracket[0] - 1e-6) is None


def test_least_doubling_argument_checks():
    with pytest.raises(ValueError):
        least_doubling(distance_table(build_named("path", 1)))
    with pytest.raises(ValueError):
        least_doubling(distance_table(build_named("path", 3)), tol=0)


def test_cycle_counting_is_optimal():
    for n in (5, 8):
        res = least_doubling(distance_table(build_named("cycle", n)))
        assert res.c_estimate == pytest.approx(3.0, abs=1e-9)
