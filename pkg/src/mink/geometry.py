"""Centred polytopes in facet form and the norms they induce.

A :class:`SymmetricPolytope` is ``K = {x : a_i . x <= 1}`` with the normals
``a_i`` closed under negation, so ``K = -K`` and its gauge
``||x||_K = max_i a_i . x`` is a norm.  Vertices are always derived from the
normals (d-subset intersection), never supplied.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvariantError
from .lp import LinearProgram, solve_lp

TOL = 1e-9
MIN_DIM, MAX_DIM = 2, 4


def _as_vector(x, dim=None):
    v = np.asarray(x, dtype=float).ravel()
    if dim is not None and v.shape != (dim,):
        raise InvariantError(f"expected a {dim}-vector, got shape {v.shape}", "dimension")
    if not np.all(np.isfinite(v)):
        raise InvariantError("vector has non-finite entries", "finite")
    return v


@dataclass(frozen=True)
class VertexList:
    """Vertices of a polytope together with the facets active at each."""

    points: np.ndarray
    active: tuple

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(zip(self.points, self.active))


class SymmetricPolytope:
    """Centred convex polytope ``{x : a_i . x <= 1}``.

    Construction validates, in order: dimension, finiteness, nonzero
    normals, no duplicates, closure under negation, boundedness.  The first
    violation raises :class:`InvariantError` naming the invariant.
    """

    def __init__(self, normals, name=None, validate=True):
        A = np.array(normals, dtype=float)
        if A.ndim != 2:
            raise InvariantError("normals must be a list of covectors", "shape")
        A.setflags(write=False)
        self.normals = A
        self.name = name
        if validate:
            self._validate()

    @property
    def dim(self):
        return self.normals.shape[1]

    @property
    def num_facets(self):
        return self.normals.shape[0]

    def _validate(self):
        A = self.normals
        d = A.shape[1]
        if not MIN_DIM <= d <= MAX_DIM:
            raise InvariantError(f"dimension {d} outside [{MIN_DIM}, {MAX_DIM}]", "dimension")
        if not np.all(np.isfinite(A)):
            raise InvariantError("normals have non-finite entries", "finite")
        if np.any(np.max(np.abs(A), axis=1) <= TOL):
            raise InvariantError("zero normal", "nonzero")
        diff = np.max(np.abs(A[:, None, :] - A[None, :, :]), axis=2)
        np.fill_diagonal(diff, np.inf)
        if np.any(diff <= TOL):
            i, j = np.argwhere(diff <= TOL)[0]
            raise InvariantError(f"normals {i} and {j} coincide", "distinct")
        neg = np.max(np.abs(A[:, None, :] + A[None, :, :]), axis=2)
        unmatched = np.nonzero(np.all(neg > TOL, axis=1))[0]
        if unmatched.size:
            raise InvariantError(
                f"normal {int(unmatched[0])} has no opposite normal", "centred")
        for j in range(d):
            e = np.zeros(d)
            e[j] = 1.0
            for sign in (1.0, -1.0):
                res = solve_lp(LinearProgram(-sign * e, [(a, 1.0, "<=") for a in A]))
                if res.status != "optimal":
                    raise InvariantError(
                        f"unbounded in direction {'+' if sign > 0 else '-'}e{j}",
                        "bounded")

    def gauge(self, x):
        """``||x||_K``; accepts a single vector or an ``(N, d)`` stack."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise InvariantError(
                f"point of dimension {x.shape[-1]} for a {self.dim}-polytope", "dimension")
        return np.maximum(x @ self.normals.T, 0.0).max(axis=-1)

    def contains(self, x, tol=TOL):
        return bool(np.all(self.normals @ _as_vector(x, self.dim) <= 1.0 + tol))

    @cached_property
    def vertices(self):
        return enumerate_vertices(self)

    def to_json(self):
        return {"dim": self.dim, "normals": self.normals.tolist()}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        if not isinstance(data, dict) or "normals" not in data:
            raise InvariantError("polytope JSON needs a 'normals' list", "schema")
        normals = data["normals"]
        try:
            A = np.array(normals, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvariantError(f"normals not numeric: {exc}", "schema") from None
        if A.ndim != 2:
            raise InvariantError("normals must be a list of equal-length lists", "schema")
        if "dim" in data and int(data["dim"]) != A.shape[1]:
            raise InvariantError(
                f"dim {data['dim']} does not match normals of length {A.shape[1]}",
                "dimension")
        return cls(A, name=data.get("name"))

    def __repr__(self):
        label = self.name or "polytope"
        return f"SymmetricPolytope({label}, dim={self.dim}, facets={self.num_facets})"


class Gauge:
    """Norm evaluator; ``kind`` is ``"polyhedral"`` or ``"euclidean"``."""

    kind = None
    dim: int

    def __call__(self, x):
        raise NotImplementedError

    def distance(self, x, y):
        return self(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))


class PolyhedralGauge(Gauge):
    kind = "polyhedral"

    def __init__(self, body: SymmetricPolytope):
        self.body = body
        self.dim = body.dim

    @property
    def normals(self):
        return self.body.normals

    def __call__(self, x):
        return self.body.gauge(x)

    def __repr__(self):
        return f"PolyhedralGauge({self.body!r})"


class EuclideanGauge(Gauge):
    kind = "euclidean"

    def __init__(self, dim):
        if not MIN_DIM <= dim <= MAX_DIM:
            raise InvariantError(f"dimension {dim} outside [{MIN_DIM}, {MAX_DIM}]", "dimension")
        self.dim = int(dim)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise InvariantError("dimension mismatch", "dimension")
        return np.linalg.norm(x, axis=-1)

    def __repr__(self):
        return f"EuclideanGauge({self.dim})"


def as_gauge(obj):
    if isinstance(obj, Gauge):
        return obj
    if isinstance(obj, SymmetricPolytope):
        return PolyhedralGauge(obj)
    raise TypeError(f"cannot make a gauge from {type(obj).__name__}")


def gauge_eval(x, g) -> float:
    """Evaluate ``||x||`` for a single vector under gauge (or polytope) ``g``."""
    g = as_gauge(g)
    return float(g(_as_vector(x, g.dim)))


def standard_body(name: str, d: int = 2) -> SymmetricPolytope:
    """The d-cube, the d-cross-polytope, or the regular hexagon.

    The hexagon has unit facet normals at angles 0, 60, ..., 300 degrees,
    so its inradius is 1 and its vertices lie at angles 30 + 60k.
    """
    key = name.lower().replace("-", "").replace("_", "")
    if key in ("cube", "square"):
        if key == "square":
            d = 2
        if not MIN_DIM <= d <= MAX_DIM:
            raise InvariantError(f"cube of dimension {d} not supported", "dimension")
        eye = np.eye(d)
        return SymmetricPolytope(np.vstack([eye, -eye]), name=f"cube{d}")
    if key in ("crosspolytope", "cross", "octahedron"):
        if not MIN_DIM <= d <= MAX_DIM:
            raise InvariantError(f"cross-polytope of dimension {d} not supported", "dimension")
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=d)))
        return SymmetricPolytope(signs, name=f"cross{d}")
    if key == "hexagon":
        if d != 2:
            raise InvariantError("the hexagon exists only for d=2", "dimension")
        ang = np.arange(6) * math.pi / 3
        normals = np.column_stack([np.cos(ang), np.sin(ang)])
        normals[np.abs(normals) < 1e-15] = 0.0
        return SymmetricPolytope(normals, name="hexagon")
    raise InvariantError(f"unknown body {name!r}", "name")


def enumerate_vertices(K: SymmetricPolytope) -> VertexList:
    """All vertices of ``K`` with their active facet index sets.

    Every d-subset of normals with a nonsingular matrix is solved; solutions
    feasible for all facets (to 1e-9) are kept and deduplicated at 1e-9.
    """
    A = K.normals
    d = K.dim
    found = []
    for idx in itertools.combinations(range(len(A)), d):
        M = A[list(idx)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        v = np.linalg.solve(M, np.ones(d))
        if np.any(A @ v > 1.0 + TOL):
            continue
        if any(np.max(np.abs(v - w)) <= TOL for w in found):
            continue
        found.append(v)
    if not found:
        raise InvariantError("no vertices found; polytope degenerate", "bounded")
    if d == 2:
        key = lambda v: round(math.atan2(v[1], v[0]) % (2 * math.pi), 9)
    else:
        key = lambda v: tuple(np.round(-v, 9))
    pts = np.array(sorted(found, key=key))
    pts[np.abs(pts) < 1e-15] = 0.0
    active = []
    for v in pts:
        act = frozenset(np.nonzero(np.abs(A @ v - 1.0) <= TOL)[0].tolist())
        if np.linalg.matrix_rank(A[sorted(act)], tol=1e-9) < d:
            raise InvariantError("vertex with rank-deficient active set", "degenerate")
        active.append(act)
    return VertexList(pts, tuple(active))


def active_facets(q, K: SymmetricPolytope, tol: float = TOL) -> frozenset:
    """Indices of the facets of ``K`` through the boundary point ``q``."""
    q = _as_vector(q, K.dim)
    vals = K.normals @ q
    g = max(vals.max(), 0.0)
    if abs(g - 1.0) > tol:
        raise InvariantError(f"point has gauge {g:.12g}, not on the boundary", "boundary")
    return frozenset(np.nonzero(np.abs(vals - 1.0) <= tol)[0].tolist())


def random_symmetric_polygon(rng, pairs: int, radius_range=(0.85, 1.15)) -> SymmetricPolytope:
    """Random centred polygon whose ``2 * pairs`` normals are all facets.

    Normal directions are drawn until every one of them supports an edge;
    lengths vary within ``radius_range`` so the polygon is irregular.
    """
    for _ in range(10000):
        ang = np.sort(rng.uniform(0.0, math.pi, size=pairs))
        if np.min(np.diff(np.append(ang, ang[0] + math.pi))) < 0.15:
            continue
        r = rng.uniform(*radius_range, size=pairs)
        half = np.column_stack([r * np.cos(ang), r * np.sin(ang)])
        K = SymmetricPolytope(np.vstack([half, -half]))
        used = set().union(*K.vertices.active)
        if len(used) == 2 * pairs and len(K.vertices) == 2 * pairs:
            return K
    raise RuntimeError("could not draw an irredundant polygon")
