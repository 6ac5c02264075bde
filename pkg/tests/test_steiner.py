import itertools
import math

import numpy as np
import pytest

from _oracles import euclid_one_steiner, euclid_two_steiner, square_smt_length
from mink.errors import BoundViolation, InvariantError
from mink.geometry import EuclideanGauge, gauge_eval, standard_body
from mink.steiner import (SteinerTopology, degree_bound_check, degree_report, double_factorial,
                          enumerate_full_topologies, minimize_fixed_topology, mst_length,
                          solve_smt, star_smt_test, steiner_angles, steiner_star_test,
                          thm2_local_move)

SQ = standard_body("cube", 2)
HEX = standard_body("hexagon")
E2 = EuclideanGauge(2)
TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.mark.parametrize("n", range(3, 8))
def test_topology_counts(n):
    tops = enumerate_full_topologies(n)
    assert len(tops) == double_factorial(2 * n - 5)
    assert all(t.is_full() for t in tops)
    assert len({t.encoding() for t in tops}) == len(tops)


def test_topology_enumeration_deterministic_and_range():
    assert enumerate_full_topologies(5) == enumerate_full_topologies(5)
    for n in (2, 10):
        with pytest.raises(InvariantError):
            enumerate_full_topologies(n)


def test_topology_validation():
    with pytest.raises(InvariantError) as e:
        SteinerTopology(3, ((0, 3), (1, 3), (3, 0)))
    assert e.value.invariant == "acyclic"
    with pytest.raises(InvariantError):
        SteinerTopology(3, ((0, 1), (0, 1), (2, 2)))


def test_collinear_square():
    top = enumerate_full_topologies(3)[0]
    tree = minimize_fixed_topology(top, [[0, 0], [1, 0], [2, 0]], SQ)
    assert tree.length == pytest.approx(2.0, abs=1e-9)
    assert tree.length == pytest.approx(tree.edge_lengths.sum(), abs=1e-9)
    assert np.all(tree.edge_lengths >= 0)


def test_equilateral_euclidean_fixed_topology():
    tree = minimize_fixed_topology(enumerate_full_topologies(3)[0], TRIANGLE, E2)
    assert tree.length == pytest.approx(math.sqrt(3), abs=1e-6)


def test_two_terminals():
    for g in (SQ, HEX, E2):
        tree, rep = solve_smt([[0.3, 0.1], [-0.5, 0.9]], g)
        assert tree.length == pytest.approx(gauge_eval([0.8, -0.8], g))
        assert rep.max_degree == 1


def test_relabel_steiner_invariance():
    rng = np.random.default_rng(3)
    T = rng.uniform(-1, 1, size=(5, 2))
    for top in enumerate_full_topologies(5)[:5]:
        n = top.n_terminals
        perm = {n: n + 2, n + 1: n, n + 2: n + 1}
        f = lambda a: perm.get(a, a)
        other = SteinerTopology(n, tuple((f(u), f(v)) for u, v in top.edges))
        a = minimize_fixed_topology(top, T, HEX).length
        b = minimize_fixed_topology(other, T, HEX).length
        assert a == pytest.approx(b, abs=1e-9)


def test_hexagon_star():
    T = np.vstack([np.zeros(2), HEX.vertices.points])
    tree, rep = solve_smt(T, HEX)
    assert tree.length == pytest.approx(6.0, abs=1e-9)
    assert rep.max_degree == 6


def test_euclidean_triangle_against_oracle():
    tree, rep = solve_smt(TRIANGLE, E2)
    assert tree.length == pytest.approx(math.sqrt(3), abs=1e-4)
    assert tree.length == pytest.approx(euclid_one_steiner(TRIANGLE), abs=1e-4)
    assert rep.max_steiner_degree == 3
    angles = steiner_angles(tree)
    assert len(angles) == 1
    for a in next(iter(angles.values())):
        assert a == pytest.approx(120.0, abs=0.1)


def test_euclidean_square_against_oracle():
    tree, rep = solve_smt(UNIT_SQUARE, E2)
    assert tree.length == pytest.approx(1 + math.sqrt(3), abs=1e-4)
    assert tree.length == pytest.approx(euclid_two_steiner(UNIT_SQUARE), abs=1e-4)
    steiner = [c for c in rep.classes if not c[2]]
    assert len(steiner) == 2 and all(c[1] == 3 for c in steiner)
    for angles in steiner_angles(tree).values():
        assert min(angles) >= 120.0 - 0.1


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("n", [3, 4])
def test_square_against_grid_oracle(seed, n):
    T = np.random.default_rng(seed).uniform(-1, 1, size=(n, 2))
    assert solve_smt(T, SQ)[0].length == pytest.approx(square_smt_length(T), abs=1e-3)


@pytest.mark.parametrize("body", ["hexagon", "cube", "cross", "euclidean"])
def test_mst_bounds(body):
    g = E2 if body == "euclidean" else standard_body(body, 2)
    rng = np.random.default_rng(17)
    for _ in range(8):
        T = rng.uniform(-1, 1, size=(int(rng.integers(3, 6)), 2))
        L = solve_smt(T, g)[0].length
        M = mst_length(T, g)
        assert L <= M + 1e-6
        assert L >= M / 2 - 1e-6


def test_mst_bounds_three_dimensional():
    K = standard_body("cross", 3)
    rng = np.random.default_rng(4)
    for _ in range(5):
        T = rng.uniform(-1, 1, size=(5, 3))
        L, M = solve_smt(T, K)[0].length, mst_length(T, K)
        assert M / 2 - 1e-6 <= L <= M + 1e-6


CANONICAL = [(HEX, np.vstack([np.zeros(2), HEX.vertices.points])),
             (SQ, np.vstack([np.zeros(2), SQ.vertices.points])),
             (standard_body("cross", 2), np.vstack([np.zeros(2), [[1, 0], [0, 1], [-1, 0],
                                                                  [0, -1]]])),
             (standard_body("cross", 3), np.vstack([np.zeros(3), np.eye(3), -np.eye(3)])),
             (HEX, HEX.vertices.points[[0, 1, 3, 4]])]


@pytest.mark.parametrize("K,T", CANONICAL)
def test_collapse_tolerance_not_knife_edge(K, T):
    tree, _ = solve_smt(T, K)
    a, b = degree_report(tree, 1e-6), degree_report(tree, 1e-7)
    assert (a.max_degree, a.max_steiner_degree, a.classes) == (
        b.max_degree, b.max_steiner_degree, b.classes)
    assert a.max_steiner_degree <= a.max_degree


def test_deterministic_output():
    T = np.random.default_rng(8).uniform(-1, 1, size=(6, 2))
    assert solve_smt(T, HEX)[0].to_json() == solve_smt(T, HEX)[0].to_json()


def test_star_tests():
    assert star_smt_test(HEX, HEX.vertices.points).is_smt
    sq = star_smt_test(SQ, SQ.vertices.points)
    assert sq.is_smt and sq.star_length == 4.0
    four = star_smt_test(E2, np.vstack([np.eye(2), -np.eye(2)]))
    assert not four.is_smt and four.smt_length < 4.0 - 1e-3


def test_star_rejects_non_unit():
    with pytest.raises(InvariantError):
        star_smt_test(SQ, [[0.5, 0.5], [1, 1]])


def test_hexagon_steiner_degree_four():
    res = steiner_star_test(HEX, HEX.vertices.points[[0, 1, 3, 4]])
    assert res.is_smt and res.degrees.max_steiner_degree == 4
    for k in (5, 6):
        for idx in itertools.combinations(range(6), k):
            assert not steiner_star_test(HEX, HEX.vertices.points[list(idx)]).is_smt


def test_local_move_square():
    mv = thm2_local_move(SQ, SQ.vertices.points, (2, 2), 1e-3)
    lit = [tuple(SQ.vertices.points[i]) for i in mv.illuminated]
    assert lit == [(1.0, 1.0)]
    assert mv.light_norm == 2.0 and mv.implied_bound_holds
    assert mv.modified_length >= mv.star_length - 1e-12


def test_local_move_hexagon_with_witness():
    from mink.illumination import bezdek_parameter
    p = bezdek_parameter(HEX).B_witness.lights[0]
    mv = thm2_local_move(HEX, HEX.vertices.points, p, 1e-4)
    assert len(mv.illuminated) == 2
    assert mv.light_norm >= 2 - 1e-6
    assert mv.modified_length >= mv.star_length - 1e-9


def test_local_move_eps_zero():
    with pytest.raises(InvariantError):
        thm2_local_move(SQ, SQ.vertices.points, (2, 2), 0.0)


def test_degree_check_skips_euclidean():
    rep = degree_bound_check(E2, trials=3)
    assert rep.skipped and "skip" in rep.notice


def test_degree_check_star_consistency():
    for K in (SQ, HEX):
        U = K.vertices.points
        assert star_smt_test(K, U).is_smt
        assert degree_bound_check(K, trials=5, seed=1).max_degree >= len(U)


def test_degree_violation_reports_instance(monkeypatch):
    import mink.illumination as ill

    class Fake:
        B_value = 2.0

    monkeypatch.setattr(ill, "bezdek_parameter", lambda K, cap=None: Fake())
    with pytest.raises(BoundViolation) as e:
        degree_bound_check(SQ, trials=0)
    assert "points" in e.value.instance
