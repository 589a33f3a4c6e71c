import math

import numpy as np
import pytest

from leastdoubling.graph import Graph, build_named, distance_table
from leastdoubling.measures import local_constant, make_measure
from leastdoubling.spectral import (
    SpectralError,
    c0_path_closed_form,
    c0_spectral,
    chebyshev_u,
    power_iteration,
)


@pytest.mark.parametrize(
    "family,n,expected",
    [("star", 5, 2.0), ("complete", 4, 3.0), ("cycle", 6, 2.0), ("path", 2, 1.0), ("path", 1, 0.0)],
)
def test_lambda1_examples(family, n, expected):
    assert power_iteration(build_named(family, n)).lambda1 == pytest.approx(expected, abs=1e-12)


def test_closed_form_small():
    assert c0_path_closed_form(2) == pytest.approx(2.0)
    assert c0_path_closed_form(3) == pytest.approx(1 + math.sqrt(2))
    assert c0_path_closed_form(5) == pytest.approx(1 + math.sqrt(3))
    with pytest.raises(ValueError):
        c0_path_closed_form(1)


def test_perron_vector_of_path_is_sine():
    for n in (5, 12, 40):
        res = power_iteration(build_named("path", n))
        sine = make_measure("sine", n).normalized("max").weights
        assert np.max(np.abs(res.perron.weights - sine)) < 1e-10


def test_perron_attains_local_constant():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = int(rng.integers(3, 15))
        edges = {(int(rng.integers(v)), v) for v in range(1, n)}
        edges |= {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.2}
        g = Graph.from_edges(n, sorted(edges))
        res = power_iteration(g)
        c0, _ = local_constant(distance_table(g), res.perron)
        assert c0 == pytest.approx(1 + res.lambda1, abs=1e-9)
        assert res.lambda1 == pytest.approx(np.linalg.eigvalsh(g.adjacency_matrix())[-1], abs=1e-10)


def test_plain_power_method_agrees():
    g = build_named("path", 10)
    a = power_iteration(g, method="power", tol=1e-14)
    b = power_iteration(g)
    assert a.lambda1 == pytest.approx(b.lambda1, abs=1e-10)


def test_power_method_budget():
    with pytest.raises(SpectralError) as info:
        power_iteration(build_named("path", 80), method="power", max_iter=5)
    assert info.value.iterations == 5


def test_bad_arguments():
    with pytest.raises(ValueError):
        power_iteration(build_named("path", 3), tol=0)
    with pytest.raises(ValueError):
        power_iteration(build_named("path", 3), method="lanczos")


def test_chebyshev_values():
    assert chebyshev_u(0, 0.3) == 1
    assert chebyshev_u(1, 0.3) == pytest.approx(0.6)
    for k in range(8):
        theta = 0.7
        assert chebyshev_u(k, math.cos(theta)) == pytest.approx(
            math.sin((k + 1) * theta) / math.sin(theta), abs=1e-12
        )


def test_chebyshev_roots():
    # roots of U_n are cos(pi (n - j + 1) / (n + 1)), j = 1..n
    for n in range(1, 51):
        for j in range(1, n + 1):
            x = math.cos(math.pi * (n - j + 1) / (n + 1))
            assert abs(chebyshev_u(n, x)) < 1e-10 * (n + 1) ** 2


def test_largest_chebyshev_root_gives_c0():
    for n in range(2, 40):
        assert 1 + 2 * math.cos(math.pi / (n + 1)) == pytest.approx(c0_spectral(build_named("path", n)), abs=1e-12)
