"""Illumination of centred polytopes: L(K), B(K) and light sets.

Reduction to vertices
---------------------
A point ``p`` illuminates the boundary point ``q`` iff the ray leaving ``q``
in direction ``q - p`` enters the interior, i.e. iff ``a_i . p > 1`` for
every facet ``i`` active at ``q``.  If ``q`` lies in the relative interior
of a face ``F`` and ``v`` is a vertex of ``F``, every facet containing
``q`` contains ``F`` and hence ``v``; so a light that illuminates ``v``
illuminates ``q``.  Checking the vertices is therefore enough.

Closed relaxation
-----------------
The strict inequalities ``a_i . p > 1`` are replaced by ``a_i . p >= 1``.
If ``p`` is optimal for the closed system then ``(1 + delta) p`` satisfies
the strict one and costs ``(1 + delta) ||p||``, so the closed minimum is
the infimum.  Returned witnesses are scaled by ``1 + 1e-7``.

Partitions versus covers
------------------------
A set of lights illuminates ``K`` iff the vertex set can be covered by
groups, one per light, whose combined active-facet systems are feasible.
Feasible groups are closed under taking subsets and dropping vertices from
a group only relaxes its system, so every cover can be shrunk to a
partition of no larger cost; enumerating partitions loses nothing.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError, InvariantError, MinkError
from .geometry import TOL, SymmetricPolytope, active_facets, _as_vector
from .lp import min_gauge_subject_to

STRICTIFY = 1.0 + 1e-7
DEFAULT_MAX_PARTITIONS = 4140  # Bell(8)
MAX_L_VERTICES = 12


def bell_number(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def max_partitions():
    """Partition cap, overridable through ``MINK_MAX_PARTITIONS``."""
    raw = os.environ.get("MINK_MAX_PARTITIONS")
    if raw is None:
        return DEFAULT_MAX_PARTITIONS
    try:
        return int(raw)
    except ValueError:
        raise InvariantError(f"MINK_MAX_PARTITIONS={raw!r} is not an integer",
                             "config") from None


@dataclass(frozen=True)
class LightConfiguration:
    lights: np.ndarray
    cost: float
    assignment: dict = field(default_factory=dict)
    slack: float = 0.0

    @classmethod
    def build(cls, lights, K: SymmetricPolytope, assignment=None, slack=0.0):
        P = np.asarray(lights, dtype=float).reshape(-1, K.dim)
        norms = K.gauge(P) if len(P) else np.zeros(0)
        if np.any(norms <= 1.0):
            bad = int(np.argmax(norms <= 1.0))
            raise InvariantError(f"light {bad} lies inside the body", "outside")
        if assignment is None:
            assignment = {}
            for i, (_, act) in enumerate(K.vertices):
                lit = np.nonzero(np.all(P @ K.normals[sorted(act)].T > 1.0 + TOL, axis=1))[0]
                if lit.size:
                    assignment[i] = int(lit[0])
        return cls(P, float(norms.sum()), dict(assignment), float(slack))

    def to_json(self):
        return {"dim": int(self.lights.shape[1]) if self.lights.ndim == 2 else 0,
                "lights": self.lights.tolist(),
                "cost": self.cost,
                "assignment": {str(k): v for k, v in sorted(self.assignment.items())},
                "slack": self.slack}


@dataclass(frozen=True)
class IlluminationReport:
    body: SymmetricPolytope
    L_value: int
    B_value: float
    B_witness: LightConfiguration
    partitions_examined: int
    best_partition: tuple = ()

    def to_json(self):
        return {"L": self.L_value, "B": self.B_value,
                "witness": self.B_witness.to_json(),
                "partition": [list(b) for b in self.best_partition],
                "partitionsExamined": self.partitions_examined}


def illuminates_point(p, q, K: SymmetricPolytope) -> bool:
    """Does ``p`` illuminate the boundary point ``q`` of ``K``?"""
    p = _as_vector(p, K.dim)
    act = active_facets(q, K)
    return bool(np.all(K.normals[sorted(act)] @ p > 1.0 + TOL))


def unlit_vertices(P, K: SymmetricPolytope):
    """Indices of vertices of ``K`` that no point of ``P`` illuminates."""
    P = np.asarray(P, dtype=float).reshape(-1, K.dim)
    out = []
    for i, (_, act) in enumerate(K.vertices):
        vals = P @ K.normals[sorted(act)].T if len(P) else np.zeros((0, len(act)))
        if not np.any(np.all(vals > 1.0 + TOL, axis=1)):
            out.append(i)
    return out


def illuminates_body(P, K: SymmetricPolytope) -> bool:
    """True iff every vertex, hence every boundary point, of ``K`` is lit."""
    P = np.asarray(P, dtype=float).reshape(-1, K.dim)
    if len(P) == 0:
        return False
    return not unlit_vertices(P, K)


class _BlockSolver:
    """Cached ``min ||p||`` over lights that illuminate a block of vertices."""

    def __init__(self, K):
        self.K = K
        self.active = [sorted(a) for a in K.vertices.active]
        self.cache = {}
        self.lp_solves = 0

    def facets(self, mask):
        idx = set()
        for i, act in enumerate(self.active):
            if mask >> i & 1:
                idx.update(act)
        return sorted(idx)

    def solve(self, mask):
        """Return ``(cost, p)``; cost is ``inf`` for infeasible blocks."""
        hit = self.cache.get(mask)
        if hit is not None:
            return hit
        # any infeasible sub-block already seen dooms the superset
        for sub, (c, _) in self.cache.items():
            if c == math.inf and sub & mask == sub:
                self.cache[mask] = (math.inf, None)
                return self.cache[mask]
        cons = [(self.K.normals[j], 1.0, ">=") for j in self.facets(mask)]
        res = min_gauge_subject_to(self.K, cons)
        self.lp_solves += 1
        if res.status == "infeasible":
            out = (math.inf, None)
        elif res.optimal:
            out = (res.value, res.x)
        else:
            raise MinkError(f"block LP returned {res.status}")
        self.cache[mask] = out
        return out

    def feasible(self, mask):
        return self.solve(mask)[0] < math.inf


def set_partitions(n):
    """Set partitions of ``range(n)`` as restricted growth strings, in
    lexicographic order."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(rgs)
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


def _blocks(rgs):
    masks = [0] * (max(rgs) + 1)
    for i, b in enumerate(rgs):
        masks[b] |= 1 << i
    return masks


def illumination_number(K: SymmetricPolytope) -> int:
    """Smallest number of lights illuminating ``K`` (exact search)."""
    V = len(K.vertices)
    if V > MAX_L_VERTICES:
        raise CapExceededError(f"{V} vertices exceeds the cap of {MAX_L_VERTICES}")
    solver = _BlockSolver(K)
    return _min_cover_size(solver, V)


def _maximal_feasible(solver, V):
    """Maximal feasible vertex groups (feasibility is subset-closed)."""
    feasible = []
    frontier = [1 << i for i in range(V) if solver.feasible(1 << i)]
    if len(frontier) < V:
        raise MinkError("a single vertex cannot be illuminated")
    seen = set(frontier)
    feasible.extend(frontier)
    while frontier:
        nxt = []
        for mask in frontier:
            top = mask.bit_length()
            for i in range(top, V):
                sup = mask | 1 << i
                if sup not in seen and solver.feasible(sup):
                    seen.add(sup)
                    nxt.append(sup)
        feasible.extend(nxt)
        frontier = nxt
    fs = set(feasible)
    maximal = [m for m in feasible
               if not any((m | 1 << i) in fs for i in range(V) if not m >> i & 1)]
    return sorted(maximal)


def _min_cover_size(solver, V):
    maximal = _maximal_feasible(solver, V)
    by_vertex = [[m for m in maximal if m >> i & 1] for i in range(V)]
    full = (1 << V) - 1

    def can_cover(covered, k):
        if covered == full:
            return True
        if k == 0:
            return False
        # branch on the lowest uncovered vertex
        i = (~covered & full & -(~covered & full)).bit_length() - 1
        return any(can_cover(covered | m, k - 1) for m in by_vertex[i])

    for k in range(1, V + 1):
        if can_cover(0, k):
            return k
    raise MinkError("no cover found")


def bezdek_parameter(K: SymmetricPolytope, cap=None) -> IlluminationReport:
    """Compute ``B(K)`` by exhaustive set-partition search over vertices.

    Each block's cost is ``min ||p||_K`` subject to ``a_j . p >= 1`` for all
    facets active at a block vertex; a partition's cost is the sum over its
    blocks.  Ties go to the lexicographically smallest restricted growth
    string.  ``L(K)`` is reported alongside.
    """
    V = len(K.vertices)
    cap = max_partitions() if cap is None else cap
    total = bell_number(V)
    if total > cap:
        raise CapExceededError(
            f"{V} vertices give {total} partitions, above the cap of {cap}")
    solver = _BlockSolver(K)
    best, best_rgs, examined = math.inf, None, 0
    for rgs in set_partitions(V):
        examined += 1
        cost = 0.0
        for mask in _blocks(rgs):
            c, _ = solver.solve(mask)
            cost += c
            if cost >= best:
                break
        if cost < best - 1e-12:
            best, best_rgs = cost, rgs
    if best_rgs is None:
        raise MinkError("internal error: every partition infeasible")

    lights, assignment = [], {}
    for j, mask in enumerate(_blocks(best_rgs)):
        lights.append(solver.solve(mask)[1] * STRICTIFY)
        for i in range(V):
            if mask >> i & 1:
                assignment[i] = j
    witness = LightConfiguration.build(lights, K, assignment)
    witness = LightConfiguration(witness.lights, witness.cost, witness.assignment,
                                 witness.cost - best)
    if not illuminates_body(witness.lights, K):
        raise MinkError("internal error: witness fails to illuminate")
    L = _min_cover_size(solver, V)
    partition = tuple(tuple(i for i in range(V) if m >> i & 1) for m in _blocks(best_rgs))
    return IlluminationReport(K, L, float(best), witness, examined, partition)


def convert_covering_to_lights(cert, K: SymmetricPolytope = None, eps=1e-6):
    """Turn a homothetic covering into a light set.

    Each homothet ``lam K + t`` yields the light ``t / (1 - lam - eps)``,
    the centre of the homothety taking ``K`` to ``(lam + eps) K + t``.
    Lights that land inside ``K`` (homothets touching no boundary point)
    illuminate nothing and are dropped.  ``slack`` on the result is
    ``2 * sum(1/(1-lam-eps) - 1/(1-lam))``, the excess over the bound
    ``2 * covering_cost`` permitted at this ``eps``.
    """
    K = K if K is not None else cert.body
    ratios = np.array([h.ratio for h in cert.homothets], dtype=float)
    if len(ratios) == 0:
        raise InvariantError("certificate has no homothets", "nonempty")
    limit = float(np.min(1.0 - ratios))
    if not 0.0 < eps < limit:
        raise InvariantError(f"eps={eps} must lie in (0, {limit:.6g})", "eps")
    lights = []
    for h in cert.homothets:
        p = np.asarray(h.translate, dtype=float) / (1.0 - h.ratio - eps)
        if K.gauge(p) > 1.0:
            lights.append(p)
    slack = 2.0 * float(np.sum(1.0 / (1.0 - ratios - eps) - 1.0 / (1.0 - ratios)))
    return LightConfiguration.build(np.array(lights).reshape(-1, K.dim), K, slack=slack)


def lemma1_margin(u, p, K: SymmetricPolytope, eps: float) -> float:
    """``(1 - eps) - ||u - eps p||_K`` for a boundary point ``u``.

    Positive for all small ``eps`` whenever ``p`` illuminates ``u``.
    """
    u = _as_vector(u, K.dim)
    p = _as_vector(p, K.dim)
    active_facets(u, K)
    if not eps > 0:
        raise InvariantError("eps must be positive", "eps")
    return float((1.0 - eps) - K.gauge(u - eps * p))


def lemma1_smallest_k(u, p, K, kmax=30):
    """First ``k <= kmax`` with ``lemma1_margin(u, p, K, 2**-k) > 0``, else None."""
    for k in range(kmax + 1):
        if lemma1_margin(u, p, K, 2.0 ** -k) > 0:
            return k
    return None
