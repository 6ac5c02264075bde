import json
import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from mink.covering import (COVERED, UNDETERMINED, CoveringCertificate, Homothet,
                           boundary_simplices, certify, corner_covering, covering_cost,
                           cube_halfcover, verify_covering)
from mink.errors import InvariantError
from mink.geometry import random_symmetric_polygon, standard_body

SQ = standard_body("cube", 2)


def test_costs():
    four = CoveringCertificate.make(SQ, [(0.5, (0, 0))] * 4)
    assert covering_cost(four) == 8.0
    assert covering_cost(CoveringCertificate.make(SQ, [(0.9, (0, 0))])) == pytest.approx(10.0)


def test_ratio_must_be_open_unit_interval():
    for lam in (0.0, 1.0, 1.5):
        with pytest.raises(InvariantError):
            Homothet(lam, (0.0, 0.0))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_halfcover(d):
    cert = cube_halfcover(d)
    assert cert.verdict == COVERED
    assert len(cert.homothets) == 2 ** d
    assert covering_cost(cert) == 2 ** (d + 1)


def test_halfcover_square_shallow():
    cert = cube_halfcover(2)
    assert verify_covering(SQ, cert, max_depth=2)[0] == COVERED


@pytest.mark.parametrize("name,d", [("cube", 2), ("hexagon", 2), ("cross", 3), ("cube", 4)])
def test_triangulation_volume(name, d):
    K = standard_body(name, d)
    vol = sum(abs(np.linalg.det(S[1:] - S[0])) for S in boundary_simplices(K))
    assert vol / math.factorial(d) == pytest.approx(ConvexHull(K.vertices.points).volume)


def test_missing_quadrant_witness():
    cert = cube_halfcover(2)
    idx = [i for i, h in enumerate(cert.homothets) if h.translate == (-0.5, -0.5)][0]
    verdict, witnesses = verify_covering(SQ, cert.without(idx))
    assert verdict == UNDETERMINED and witnesses
    centres = np.array([w.points.mean(axis=0) for w in witnesses])
    assert np.all(centres <= 1e-12)


@pytest.mark.parametrize("lam", [0.5, 0.99])
def test_single_central_homothet(lam):
    cert = CoveringCertificate.make(SQ, [(lam, (0, 0))])
    verdict, witnesses = verify_covering(SQ, cert)
    assert verdict == UNDETERMINED
    assert any(w.uncovered_corner for w in witnesses)
    corners = {tuple(np.sign(w.points.sum(axis=0))) for w in witnesses}
    assert {(1, 1), (-1, 1), (1, -1), (-1, -1)} <= corners


def test_bad_depth():
    with pytest.raises(InvariantError):
        verify_covering(SQ, cube_halfcover(2), max_depth=0)


def test_permutation_invariant_cost():
    rng = np.random.default_rng(0)
    cert = corner_covering(standard_body("hexagon"), rng)
    hs = list(cert.homothets)
    rng.shuffle(hs)
    assert covering_cost(CoveringCertificate(cert.body, tuple(hs))) == pytest.approx(
        covering_cost(cert), abs=1e-12)


def test_json_round_trip():
    cert = cube_halfcover(3)
    back = CoveringCertificate.from_json(json.dumps(cert.to_json()))
    assert back.homothets == cert.homothets
    with pytest.raises(InvariantError):
        CoveringCertificate.from_json({"body": {"dim": 2, "normals": SQ.to_json()["normals"]}})


def _sample_body(K, rng, n):
    lo = K.vertices.points.min(axis=0)
    hi = K.vertices.points.max(axis=0)
    X = rng.uniform(lo, hi, size=(n, K.dim))
    return X[K.gauge(X) <= 1.0]


def _covered_by_some(cert, X):
    T, lam = cert.translates, cert.ratios
    g = np.max((X[None] - T[:, None]) @ cert.body.normals.T, axis=2)
    return np.any(g <= lam[:, None] + 1e-12, axis=0)


@pytest.mark.parametrize("name,d", [("cube", 2), ("cube", 3), ("cube", 4)])
def test_soundness_by_sampling_halfcover(name, d):
    cert = cube_halfcover(d)
    X = _sample_body(cert.body, np.random.default_rng(d), 100_000)
    assert np.all(_covered_by_some(cert, X))


def test_soundness_by_sampling_random_coverings():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 10:
        K = random_symmetric_polygon(rng, int(rng.integers(4, 9)))
        cert = certify(corner_covering(K, rng))
        if cert.verdict != COVERED:
            continue
        X = _sample_body(K, rng, 100_000)
        assert np.all(_covered_by_some(cert, X))
        checked += 1
