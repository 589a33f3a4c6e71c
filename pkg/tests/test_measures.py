import math

import numpy as np
import pytest

from leastdoubling.graph import build_named, distance_table
from leastdoubling.measures import (
    Measure,
    MeasureError,
    doubling_constant,
    local_constant,
    make_measure,
    parse_measure_text,
    perturb,
    symmetrize,
)


def brute_force_c(idx, w):
    """Direct enumeration over every radius up to the diameter."""
    best = 1.0
    for x in range(idx.n):
        for k in range(idx.diameter + 1):
            inner = sum(w[y] for y in range(idx.n) if idx.dist[x, y] <= k)
            outer = sum(w[y] for y in range(idx.n) if idx.dist[x, y] <= 2 * k + 1)
            best = max(best, outer / inner)
    return best


def test_make_measure_examples():
    s = make_measure("sine", 3)
    assert s.weights == pytest.approx([math.sqrt(2) / 2, 1, math.sqrt(2) / 2], abs=1e-15)
    assert make_measure("counting", 4).tolist() == [1, 1, 1, 1]
    assert make_measure("lambda_alpha", 5, alpha=0.5).tolist() == [0.5, 1, 1, 1, 1]
    assert make_measure("explicit", 2, weights=[2, 3]).tolist() == [2, 3]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="lambda_alpha", n=3, alpha=0.4),
        dict(kind="lambda_alpha", n=3, alpha=1.1),
        dict(kind="explicit", n=2, weights=[1, 0]),
        dict(kind="explicit", n=2, weights=[1, -1]),
        dict(kind="explicit", n=2, weights=[1]),
        dict(kind="gaussian", n=2),
    ],
)
def test_make_measure_rejects(kwargs):
    with pytest.raises(MeasureError):
        make_measure(**kwargs)


def test_measure_is_immutable_and_positive():
    mu = Measure([1, 2])
    with pytest.raises(ValueError):
        mu.weights[0] = 5
    for bad in ([], [1, float("nan")], [1, float("inf")], [0.0]):
        with pytest.raises(MeasureError):
            Measure(bad)


@pytest.mark.parametrize(
    "w,expected", [([1, 2, 3], [4, 4, 4]), ([1, 1, 1], [2, 2, 2]), ([1, 2, 2, 5], [6, 4, 4, 6])]
)
def test_symmetrize_examples(w, expected):
    out = symmetrize(Measure(w))
    assert out.tolist() == expected
    assert out.is_symmetric()


def test_perturb():
    mu = Measure([1, 2, 3])
    assert perturb(mu, 1, 0.5).tolist() == [1, 2.5, 3]
    assert mu.tolist() == [1, 2, 3]
    with pytest.raises(MeasureError):
        perturb(mu, 0, -1)


def test_parse_measure_text():
    assert parse_measure_text("1\n2.5\n# note\n3\n").tolist() == [1, 2.5, 3]
    assert parse_measure_text("[1, 2, 3]").tolist() == [1, 2, 3]
    with pytest.raises(MeasureError, match="line 2"):
        parse_measure_text("1\nabc\n")
    with pytest.raises(MeasureError):
        parse_measure_text("[1, true]")
    with pytest.raises(MeasureError):
        parse_measure_text("1\n-2\n")


def test_counting_on_paths_is_three():
    for n in range(3, 20):
        rep = doubling_constant(distance_table(build_named("path", n)), make_measure("counting", n))
        assert rep.c_mu == 3.0
        assert rep.c_mu0 == 3.0


def test_small_cases():
    idx1 = distance_table(build_named("path", 1))
    assert doubling_constant(idx1, Measure([2.0])).c_mu == 1.0
    idx2 = distance_table(build_named("path", 2))
    rep = doubling_constant(idx2, Measure([1.0, 1.0]))
    assert rep.c_mu == 2.0
    assert rep.witness.center == 0 and rep.witness.k == 0


def test_sine_local_constant():
    for n in range(2, 40):
        idx = distance_table(build_named("path", n))
        c0, _ = local_constant(idx, make_measure("sine", n))
        assert c0 == pytest.approx(1 + 2 * math.cos(math.pi / (n + 1)), abs=1e-13)


def test_against_brute_force():
    rng = np.random.default_rng(5)
    graphs = [build_named(f, n) for f, n in [("path", 7), ("cycle", 8), ("star", 6), ("complete", 5)]]
    for g in graphs:
        idx = distance_table(g)
        for _ in range(20):
            w = rng.random(g.n) + 0.05
            rep = doubling_constant(idx, Measure(w))
            assert rep.c_mu == pytest.approx(brute_force_c(idx, w), rel=1e-14)
            assert rep.c_mu0 <= rep.c_mu
            assert rep.c_mu >= 2
            assert rep.witness.ratio == rep.c_mu


def test_table_and_witness_ties():
    idx = distance_table(build_named("path", 6))
    rep = doubling_constant(idx, make_measure("counting", 6), table=True)
    assert len(rep.table) == 6 * (1 + math.ceil((5 - 1) / 2))
    assert max(w.ratio for w in rep.table) == rep.c_mu
    # first (center, k) in lexicographic order attaining 3
    assert (rep.witness.center, rep.witness.k) == (1, 0)
    assert all(w.ratio >= 1 for w in rep.table)


def test_scaling_invariance_powers_of_two():
    rng = np.random.default_rng(1)
    idx = distance_table(build_named("cycle", 9))
    w = Measure(rng.random(9) + 0.1)
    base = doubling_constant(idx, w).c_mu
    for e in range(-5, 6):
        assert doubling_constant(idx, w.scaled(2.0**e)).c_mu == base


def test_scaling_invariance_random_factor():
    rng = np.random.default_rng(2)
    idx = distance_table(build_named("star", 7))
    for _ in range(50):
        w = Measure(rng.random(7) + 0.1)
        a = float(np.exp(rng.normal(0, 3)))
        assert doubling_constant(idx, w.scaled(a)).c_mu == pytest.approx(
            doubling_constant(idx, w).c_mu, rel=1e-13
        )


def test_length_mismatch():
    idx = distance_table(build_named("path", 4))
    with pytest.raises(MeasureError):
        doubling_constant(idx, Measure([1, 1, 1]))
