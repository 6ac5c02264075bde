"""Homothetic covering certificates and a one-sided coverage verifier."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvariantError
from .geometry import TOL, SymmetricPolytope

UNVERIFIED = "unverified"
COVERED = "covered"
UNDETERMINED = "undetermined"
DEFAULT_MAX_DEPTH = 12


@dataclass(frozen=True)
class Homothet:
    ratio: float
    translate: tuple

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise InvariantError(f"ratio {self.ratio} not in (0, 1)", "ratio")


@dataclass(frozen=True)
class Cell:
    """A simplex of the subdivision, with the reason it stayed uncertified."""

    points: np.ndarray
    depth: int
    # True when some corner lies in no homothet at all
    uncovered_corner: bool = False

    def to_json(self):
        return {"points": self.points.tolist(), "depth": self.depth,
                "uncoveredCorner": self.uncovered_corner}


@dataclass(frozen=True)
class CoveringCertificate:
    body: SymmetricPolytope
    homothets: tuple
    verdict: str = UNVERIFIED
    witnesses: tuple = field(default=(), compare=False)

    @classmethod
    def make(cls, body, homothets):
        hs = []
        for h in homothets:
            if not isinstance(h, Homothet):
                lam, t = h
                h = Homothet(float(lam), tuple(float(c) for c in t))
            if len(h.translate) != body.dim:
                raise InvariantError("translate dimension does not match body", "dimension")
            hs.append(h)
        return cls(body, tuple(hs))

    @property
    def ratios(self):
        return np.array([h.ratio for h in self.homothets])

    @property
    def translates(self):
        return np.array([h.translate for h in self.homothets]).reshape(-1, self.body.dim)

    def without(self, index):
        hs = self.homothets[:index] + self.homothets[index + 1:]
        return CoveringCertificate(self.body, hs)

    def to_json(self, body_label=None):
        out = {"body": body_label if body_label is not None else self.body.to_json(),
               "homothets": [{"lambda": h.ratio, "t": list(h.translate)}
                             for h in self.homothets],
               "verdict": self.verdict}
        if self.witnesses:
            out["witnesses"] = [w.to_json() for w in self.witnesses]
        return out

    @classmethod
    def from_json(cls, data, body=None):
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        if "homothets" not in data:
            raise InvariantError("certificate JSON needs 'homothets'", "schema")
        if body is None:
            raw = data.get("body")
            if isinstance(raw, dict):
                body = SymmetricPolytope.from_json(raw)
            else:
                raise InvariantError("certificate body must be a polytope object", "schema")
        try:
            hs = [(h["lambda"], h["t"]) for h in data["homothets"]]
        except (KeyError, TypeError):
            raise InvariantError("each homothet needs 'lambda' and 't'", "schema") from None
        return cls.make(body, hs)


def covering_cost(cert: CoveringCertificate) -> float:
    """``sum_i 1 / (1 - lambda_i)``."""
    return float(sum(1.0 / (1.0 - h.ratio) for h in cert.homothets))


def cube_halfcover(d: int) -> CoveringCertificate:
    """The d-cube covered by its ``2**d`` half-size orthant cubes, verified."""
    from .geometry import standard_body
    if not 2 <= d <= 4:
        raise InvariantError(f"dimension {d} outside [2, 4]", "dimension")
    K = standard_body("cube", d)
    hs = [(0.5, t) for t in itertools.product((0.5, -0.5), repeat=d)]
    cert = CoveringCertificate.make(K, hs)
    return certify(cert)


def boundary_simplices(K: SymmetricPolytope):
    """Fan triangulation of ``K``: the origin joined to each boundary simplex.

    The boundary is triangulated by face flags: each simplex has the
    centroids of a facet, one of its ridges, ..., an edge, and a vertex of
    that edge as corners.  The simplices therefore follow the face
    structure of ``K`` and never cut across a face diagonal.
    """
    pts = K.vertices.points
    act = K.vertices.active
    d = K.dim
    origin = np.zeros(d)

    def affine_dim(W):
        P = pts[sorted(W)]
        if len(P) == 1:
            return 0
        return int(np.linalg.matrix_rank(P[1:] - P[0], tol=1e-9))

    def chains(W, k):
        c = pts[sorted(W)].mean(axis=0)
        if k == 0:
            yield [c]
            return
        common = frozenset.intersection(*(act[w] for w in W))
        subs = set()
        for j in range(K.num_facets):
            if j in common:
                continue
            S = frozenset(w for w in W if j in act[w])
            if S and affine_dim(S) == k - 1:
                subs.add(S)
        for S in sorted(subs, key=sorted):
            for tail in chains(S, k - 1):
                yield [c] + tail

    out = []
    for j in range(K.num_facets):
        W = frozenset(i for i in range(len(pts)) if j in act[i])
        if not W or affine_dim(W) != d - 1:
            continue
        for chain in chains(W, d - 1):
            out.append(np.vstack([origin] + chain))
    return out


def _membership(K, cert, X):
    """Boolean ``(homothets, points)``: point lies in homothet (to 1e-9)."""
    T = cert.translates
    lam = cert.ratios
    diff = X[None, :, :] - T[:, None, :]
    g = np.max(diff @ K.normals.T, axis=2)
    return g <= lam[:, None] + TOL


def verify_covering(K: SymmetricPolytope, cert: CoveringCertificate,
                    max_depth: int = DEFAULT_MAX_DEPTH):
    """Decide ``K subset union(lambda_i K + t_i)`` one-sidedly.

    Returns ``(verdict, witnesses)``.  A simplex is certified when all its
    corners lie in one common homothet, which is sound because homothets
    are convex.  Others are bisected at their longest edge until
    ``max_depth``.  A cell with a corner outside every homothet is a proof
    of non-coverage and is not refined further.  ``covered`` is never
    returned unless every leaf was certified.
    """
    if max_depth < 1:
        raise InvariantError("max_depth must be at least 1", "depth")
    if cert.body is not K and not np.array_equal(cert.body.normals, K.normals):
        raise InvariantError("certificate homothets are of a different body", "body")
    if not cert.homothets:
        return UNDETERMINED, tuple(Cell(s, 0, True) for s in boundary_simplices(K))
    stack = [(s, 0) for s in reversed(boundary_simplices(K))]
    witnesses = []
    while stack:
        S, depth = stack.pop()
        inside = _membership(K, cert, S)
        if np.any(np.all(inside, axis=1)):
            continue
        if not np.all(np.any(inside, axis=0)):
            witnesses.append(Cell(S, depth, True))
            continue
        if depth >= max_depth:
            witnesses.append(Cell(S, depth, False))
            continue
        i, j = _longest_edge(S)
        mid = 0.5 * (S[i] + S[j])
        A, B = S.copy(), S.copy()
        A[i] = mid
        B[j] = mid
        stack.append((B, depth + 1))
        stack.append((A, depth + 1))
    if witnesses:
        return UNDETERMINED, tuple(witnesses)
    return COVERED, ()


def _longest_edge(S):
    best, pair = -1.0, (0, 1)
    for i in range(len(S)):
        for j in range(i + 1, len(S)):
            L = float(np.sum((S[i] - S[j]) ** 2))
            if L > best + 1e-15:
                best, pair = L, (i, j)
    return pair


def certify(cert: CoveringCertificate, max_depth: int = DEFAULT_MAX_DEPTH):
    """Return a copy of ``cert`` carrying the verifier's verdict."""
    verdict, witnesses = verify_covering(cert.body, cert, max_depth)
    return replace(cert, verdict=verdict, witnesses=witnesses)


def corner_covering(K: SymmetricPolytope, rng, ratio_range=(0.7, 0.9), shift=0.05):
    """Random covering candidate: one homothet per vertex plus a central one.

    With ratio at least 2/3, the vertex homothets ``lam K + (1 - lam) v``
    together with ``lam K`` cover a centred polygon.  Each vertex homothet is
    pushed outward by a random fraction of ``(1 - lam) v`` and wiggled by
    half that amount, which keeps ``v`` strictly inside it.  The result is
    unverified.
    """
    hs = []
    for v in K.vertices.points:
        lam = rng.uniform(*ratio_range)
        s = rng.uniform(0.0, shift)
        w = rng.normal(size=K.dim)
        w /= K.gauge(w)
        t = (1.0 - lam) * (1.0 + s) * v + 0.5 * s * (1.0 - lam) * w
        hs.append((lam, t))
    hs.append((rng.uniform(*ratio_range), np.zeros(K.dim)))
    return CoveringCertificate.make(K, hs)
