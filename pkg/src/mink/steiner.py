"""Steiner minimal trees under polyhedral and Euclidean norms.

Polyhedral norms are handled exactly: for a fixed topology the tree length
``sum_e max_i a_i . (x_u - x_v)`` is minimized by a linear program, and
the topology search is a branch and bound over sequential edge insertion.
A partial topology on the first ``m`` terminals is itself a Steiner tree
problem whose optimum bounds every completion from below, so whole
subtrees of the insertion tree are discarded once that bound reaches the
incumbent.

The Euclidean case uses smoothed Weiszfeld coordinate descent and is
accurate to about 1e-4 in length.

Degenerate topologies (Steiner points of degree other than 3, terminals of
degree above 1) appear as full topologies with zero-length edges.  After
the search, the winning tree is greedily contracted edge by edge while the
optimum length is preserved, so high-degree vertices show up as collapsed
clusters.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolation, InvariantError, MinkError
from .geometry import EuclideanGauge, Gauge, SymmetricPolytope, as_gauge
from .lp import LinearProgram, solve_lp

MAX_TERMINALS = 9
COLLAPSE_TOL = 1e-6
STAR_TOL = 1e-6
# relative tolerance for "no longer than the optimum" during contraction
# and for pruning ties in the topology search
LENGTH_TOL = 1e-9
DELTAS = tuple(10.0 ** -k for k in range(3, 11))


def double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


@dataclass(frozen=True)
class SteinerTopology:
    """Tree over terminal labels ``0..n-1`` and Steiner labels ``n..n+k-1``."""

    n_terminals: int
    edges: tuple

    def __post_init__(self):
        n, E = self.n_terminals, self.edges
        N = len(E) + 1
        if n < 2 or N < n:
            raise InvariantError("topology needs at least 2 terminals", "topology")
        parent = list(range(N))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in E:
            if not (0 <= u < N and 0 <= v < N) or u == v:
                raise InvariantError(f"bad edge ({u}, {v})", "topology")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise InvariantError("topology has a cycle", "acyclic")
            parent[ru] = rv
        if len({find(a) for a in range(N)}) != 1:
            raise InvariantError("topology is disconnected", "connected")

    @property
    def n_steiner(self):
        return len(self.edges) + 1 - self.n_terminals

    @property
    def n_vertices(self):
        return len(self.edges) + 1

    def degrees(self):
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_full(self):
        deg = self.degrees()
        n = self.n_terminals
        return all(d == 1 for d in deg[:n]) and all(d == 3 for d in deg[n:])

    def encoding(self):
        return tuple(sorted(tuple(sorted(e)) for e in self.edges))

    def relabel_terminals(self, perm):
        """Topology with terminal ``i`` renamed ``perm[i]``."""
        n = self.n_terminals
        f = lambda a: perm[a] if a < n else a
        return SteinerTopology(n, tuple((f(u), f(v)) for u, v in self.edges))


def _insertions(edges, terminal, steiner):
    """Children of a partial topology: ``terminal`` spliced into each edge."""
    for i, (u, v) in enumerate(edges):
        rest = edges[:i] + edges[i + 1:]
        yield rest[:i] + ((u, steiner), (steiner, v), (terminal, steiner)) + rest[i:]


def _root_edges(n):
    return ((0, n), (1, n), (2, n))


def enumerate_full_topologies(n: int):
    """All ``(2n-5)!!`` full Steiner topologies on ``n`` terminals.

    Generated depth-first by inserting terminals ``3, 4, ...`` into every
    edge in turn; the order is deterministic.
    """
    if not 3 <= n <= MAX_TERMINALS:
        raise InvariantError(f"n={n} outside [3, {MAX_TERMINALS}]", "range")
    out = []

    def rec(edges, m):
        if m == n:
            out.append(SteinerTopology(n, edges))
            return
        for child in _insertions(edges, m, n + m - 2):
            rec(child, m + 1)

    rec(_root_edges(n), 3)
    return out


@dataclass(frozen=True)
class EmbeddedTree:
    topology: SteinerTopology
    terminals: np.ndarray
    steiner: np.ndarray
    edge_lengths: np.ndarray
    length: float
    converged: bool = True
    info: dict = field(default_factory=dict, compare=False)

    @property
    def positions(self):
        return np.vstack([self.terminals, self.steiner]) if len(self.steiner) else self.terminals

    def to_json(self):
        return {"dim": int(self.terminals.shape[1]),
                "points": self.terminals.tolist(),
                "steiner": self.steiner.tolist(),
                "edges": [list(e) for e in self.topology.edges],
                "edgeLengths": self.edge_lengths.tolist(),
                "length": self.length,
                "converged": self.converged}


@dataclass(frozen=True)
class DegreeReport:
    tolerance: float
    max_degree: int
    max_steiner_degree: int
    # (members, degree, contains_terminal) per collapsed vertex
    classes: tuple

    def to_json(self):
        return {"tolerance": self.tolerance,
                "maxDegree": self.max_degree,
                "maxSteinerDegree": self.max_steiner_degree,
                "classes": [{"members": list(m), "degree": d, "terminal": t}
                            for m, d, t in self.classes]}


def degree_report(tree: EmbeddedTree, tol: float = COLLAPSE_TOL) -> DegreeReport:
    """Vertex degrees after merging endpoints of edges no longer than ``tol``."""
    top = tree.topology
    N = top.n_vertices
    parent = list(range(N))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (u, v), L in zip(top.edges, tree.edge_lengths):
        if L <= tol:
            parent[find(u)] = find(v)
    members = {}
    for a in range(N):
        members.setdefault(find(a), []).append(a)
    degree = dict.fromkeys(members, 0)
    for (u, v), L in zip(top.edges, tree.edge_lengths):
        if L > tol:
            degree[find(u)] += 1
            degree[find(v)] += 1
    classes = sorted((tuple(ms), degree[r], ms[0] < top.n_terminals)
                     for r, ms in members.items())
    max_deg = max(d for _, d, _ in classes)
    max_st = max((d for _, d, t in classes if not t), default=0)
    return DegreeReport(tol, max_deg, max_st, tuple(classes))


# ---------------------------------------------------------------- polyhedral

def _polyhedral_lp(edges, terminals, normals, rep):
    """Minimum length of a tree with Steiner labels merged according to ``rep``.

    ``rep`` maps every label to its representative; a representative below
    ``n`` is a terminal (fixed point), otherwise a free Steiner position.
    Returns ``(value, positions_by_rep)``.
    """
    n, d = terminals.shape
    free = sorted({rep[a] for a in rep if rep[a] >= n})
    col = {r: i * d for i, r in enumerate(free)}
    live = [(rep[u], rep[v]) for u, v in edges if rep[u] != rep[v]]
    nx, ne = len(free) * d, len(live)
    if ne == 0:
        return 0.0, {r: np.zeros(d) for r in free}
    if nx == 0:
        L = sum(float(np.max(normals @ (terminals[u] - terminals[v]))) for u, v in live)
        return L, {}
    m = len(normals)
    A = np.zeros((ne * m, nx + ne))
    b = np.zeros(ne * m)
    for e, (u, v) in enumerate(live):
        rows = slice(e * m, (e + 1) * m)
        A[rows, nx + e] = 1.0
        const = np.zeros(d)
        if u >= n:
            A[rows, col[u]:col[u] + d] -= normals
        else:
            const += terminals[u]
        if v >= n:
            A[rows, col[v]:col[v] + d] += normals
        else:
            const -= terminals[v]
        b[rows] = normals @ const
    c = np.zeros(nx + ne)
    c[nx:] = 1.0
    nonneg = np.zeros(nx + ne, dtype=bool)
    nonneg[nx:] = True
    res = solve_lp(LinearProgram.from_arrays(c, A_lb=A, b_lb=b, nonneg=nonneg))
    if not res.optimal:
        raise MinkError(f"fixed-topology LP {res.status}")
    x = res.x
    return res.value, {r: x[col[r]:col[r] + d].copy() for r in free}


def _embed(top, terminals, gauge, rep, coords, **info):
    n = top.n_terminals
    pos = np.zeros((top.n_vertices, terminals.shape[1]))
    pos[:n] = terminals
    for a in range(n, top.n_vertices):
        r = rep[a]
        pos[a] = terminals[r] if r < n else coords[r]
    diffs = np.array([pos[u] - pos[v] for u, v in top.edges])
    lengths = gauge(diffs)
    return EmbeddedTree(top, terminals.copy(), pos[n:].copy(), lengths,
                        float(lengths.sum()), True, dict(info))


def _identity_rep(top):
    return {a: a for a in range(top.n_vertices)}


def minimize_fixed_topology(top: SteinerTopology, terminals, g) -> EmbeddedTree:
    """Shortest embedding of ``top`` with the terminals held fixed.

    Polyhedral gauges are solved exactly by LP; the Euclidean gauge by
    smoothed coordinate descent (see :func:`_weiszfeld`).
    """
    g = as_gauge(g)
    T = _terminal_array(terminals, g)
    if len(T) != top.n_terminals:
        raise InvariantError("terminal count does not match topology", "topology")
    if g.kind == "polyhedral":
        rep = _identity_rep(top)
        value, coords = _polyhedral_lp(top.edges, T, g.normals, rep)
        tree = _embed(top, T, g, rep, coords, lp_value=value)
        if abs(tree.length - value) > 1e-7 * max(1.0, value):
            raise MinkError(f"LP value {value} disagrees with tree length {tree.length}")
        return tree
    return _weiszfeld(top, T)


def _collapse(top, T, gauge, target):
    """Greedily contract edges of ``top`` while the optimum stays ``target``.

    Steiner-Steiner edges are tried first, then Steiner-terminal edges, each
    in edge order; an edge is kept contracted when the re-solved LP is no
    longer than ``target`` (relative tolerance 1e-9).
    """
    n = top.n_terminals
    rep = _identity_rep(top)
    _, coords = _polyhedral_lp(top.edges, T, gauge.normals, rep)
    internal = [e for e in top.edges if e[0] >= n and e[1] >= n]
    leaf = [e for e in top.edges if (e[0] >= n) != (e[1] >= n)]
    limit = target + LENGTH_TOL * max(1.0, target)
    for u, v in internal + leaf:
        ru, rv = rep[u], rep[v]
        if ru == rv or (ru < n and rv < n):
            continue
        keep, drop = (ru, rv) if ru < rv else (rv, ru)
        trial = {a: (keep if r == drop else r) for a, r in rep.items()}
        value, c2 = _polyhedral_lp(top.edges, T, gauge.normals, trial)
        if value <= limit:
            rep, coords = trial, c2
    return rep, coords


def _terminal_array(terminals, g):
    T = np.asarray(terminals, dtype=float)
    if T.ndim != 2 or T.shape[1] != g.dim:
        raise InvariantError(
            f"terminals must be an (n, {g.dim}) array, got {T.shape}", "dimension")
    if not np.all(np.isfinite(T)):
        raise InvariantError("terminals have non-finite coordinates", "finite")
    return T


def _insertion_order(T, gauge):
    c = T.mean(axis=0)
    dist = gauge(T - c)
    return sorted(range(len(T)), key=lambda i: (-round(float(dist[i]), 12), i))


def _solve_polyhedral(T, gauge):
    n = len(T)
    order = _insertion_order(T, gauge)
    P = T[order]
    stats = {"lp_solves": 0, "pruned": 0, "full_examined": 0}
    best = {"value": math.inf, "edges": None}

    def bound(edges, m):
        rep = {a: a for a in range(m)}
        rep.update({n + j: n + j for j in range(m - 2)})
        stats["lp_solves"] += 1
        return _polyhedral_lp(edges, P[:m], gauge.normals, rep)[0]

    def rec(edges, m):
        value = bound(edges, m)
        incumbent = best["value"]
        if value >= incumbent - LENGTH_TOL * max(1.0, incumbent):
            stats["pruned"] += 1
            return
        if m == n:
            stats["full_examined"] += 1
            best["value"], best["edges"] = value, edges
            return
        for child in _insertions(edges, m, n + m - 2):
            rec(child, m + 1)

    rec(_root_edges(n), 3)
    top = SteinerTopology(n, best["edges"]).relabel_terminals(order)
    return top, best["value"], stats


def solve_smt(terminals, g, collapse_tol: float = COLLAPSE_TOL):
    """Steiner minimal tree of ``terminals`` under gauge ``g``.

    Returns ``(tree, degree_report)``.  Ties between topologies of equal
    length go to the first one in depth-first insertion order.
    """
    g = as_gauge(g)
    T = _terminal_array(terminals, g)
    n = len(T)
    if not 2 <= n <= MAX_TERMINALS:
        raise InvariantError(f"n={n} outside [2, {MAX_TERMINALS}]", "range")
    if n == 2:
        top = SteinerTopology(2, ((0, 1),))
        L = g(T[0] - T[1])
        tree = EmbeddedTree(top, T.copy(), np.zeros((0, g.dim)), np.array([L]), float(L))
        return tree, degree_report(tree, collapse_tol)
    if g.kind == "polyhedral":
        top, value, stats = _solve_polyhedral(T, g)
        rep, coords = _collapse(top, T, g, value)
        tree = _embed(top, T, g, rep, coords, lp_value=value, **stats)
        if tree.length > value + 1e-7 * max(1.0, value):
            raise MinkError(f"collapsed tree {tree.length} longer than optimum {value}")
    else:
        tree = None
        for top in enumerate_full_topologies(n):
            cand = _weiszfeld(top, T)
            if tree is None or cand.length < tree.length - 1e-12:
                tree = cand
    return tree, degree_report(tree, collapse_tol)


# ----------------------------------------------------------------- euclidean

def _weiszfeld(top, T, deltas=DELTAS, max_sweeps=20000, rtol=1e-12):
    """Gauss-Seidel Weiszfeld sweeps on ``sum sqrt(|x_u - x_v|^2 + delta^2)``.

    ``delta`` is annealed through ``deltas``; each stage stops when a sweep
    improves the smoothed length by less than ``rtol`` relatively.
    """
    n, d = T.shape
    N = top.n_vertices
    nbrs = [[] for _ in range(N)]
    for u, v in top.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    pos = [list(map(float, p)) for p in T] + [list(map(float, T.mean(axis=0)))
                                              for _ in range(N - n)]
    # harmonic start: Steiner points at the average of their neighbours
    for _ in range(200):
        for s in range(n, N):
            nb = nbrs[s]
            pos[s] = [sum(pos[j][c] for j in nb) / len(nb) for c in range(d)]

    def smoothed(delta):
        dd = delta * delta
        total = 0.0
        for u, v in top.edges:
            pu, pv = pos[u], pos[v]
            total += math.sqrt(sum((pu[c] - pv[c]) ** 2 for c in range(d)) + dd)
        return total

    converged = True
    sweeps = 0
    for delta in deltas:
        dd = delta * delta
        prev = smoothed(delta)
        for _ in range(max_sweeps):
            for s in range(n, N):
                ps = pos[s]
                wsum = 0.0
                acc = [0.0] * d
                for j in nbrs[s]:
                    pj = pos[j]
                    w = 1.0 / math.sqrt(sum((ps[c] - pj[c]) ** 2 for c in range(d)) + dd)
                    wsum += w
                    for c in range(d):
                        acc[c] += w * pj[c]
                pos[s] = [a / wsum for a in acc]
            sweeps += 1
            cur = smoothed(delta)
            if prev - cur <= rtol * cur:
                break
            prev = cur
        else:
            converged = False
    P = np.array(pos)
    gauge = EuclideanGauge(d)
    diffs = np.array([P[u] - P[v] for u, v in top.edges])
    lengths = gauge(diffs)
    return EmbeddedTree(top, T.copy(), P[n:].copy(), lengths, float(lengths.sum()),
                        converged, {"sweeps": sweeps})


def steiner_angles(tree: EmbeddedTree, tol: float = COLLAPSE_TOL):
    """Angles (degrees) between edges at each Steiner point of degree 3.

    Returns ``{label: [angles]}`` for Steiner points whose three edges are
    all longer than ``tol``.
    """
    top = tree.topology
    P = tree.positions
    inc = {}
    for (u, v), L in zip(top.edges, tree.edge_lengths):
        if L > tol:
            inc.setdefault(u, []).append(v)
            inc.setdefault(v, []).append(u)
    out = {}
    for s in range(top.n_terminals, top.n_vertices):
        nb = inc.get(s, [])
        if len(nb) != 3:
            continue
        vecs = [(P[j] - P[s]) / np.linalg.norm(P[j] - P[s]) for j in nb]
        out[s] = [math.degrees(math.acos(max(-1.0, min(1.0, float(a @ b)))))
                  for a, b in itertools.combinations(vecs, 2)]
    return out


def mst_length(terminals, g) -> float:
    """Minimum spanning tree length under ``g`` (Prim)."""
    g = as_gauge(g)
    T = np.asarray(terminals, dtype=float)
    n = len(T)
    dist = np.full(n, np.inf)
    used = np.zeros(n, dtype=bool)
    dist[0] = 0.0
    total = 0.0
    for _ in range(n):
        i = int(np.argmin(np.where(used, np.inf, dist)))
        used[i] = True
        total += dist[i]
        dist = np.minimum(dist, g(T - T[i]))
    return float(total)


# ----------------------------------------------------- degree certificates

def _unit_directions(U, g):
    U = _terminal_array(U, g)
    norms = g(U)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        i = int(np.argmax(np.abs(norms - 1.0)))
        raise InvariantError(f"direction {i} has norm {norms[i]:.12g}, not 1", "unit")
    return U


@dataclass(frozen=True)
class StarTest:
    is_smt: bool
    star_length: float
    smt_length: float
    tree: EmbeddedTree
    degrees: DegreeReport

    def to_json(self):
        return {"isSMT": self.is_smt, "starLength": self.star_length,
                "smtLength": self.smt_length,
                "maxDegree": self.degrees.max_degree,
                "maxSteinerDegree": self.degrees.max_steiner_degree}


def star_smt_test(body, U) -> StarTest:
    """Is the star joining the origin to the unit vectors ``U`` a minimal tree?

    A positive answer certifies a vertex of degree ``len(U)`` in a minimal
    tree for this norm.
    """
    g = as_gauge(body)
    U = _unit_directions(U, g)
    if len(U) > MAX_TERMINALS - 1:
        raise InvariantError(f"at most {MAX_TERMINALS - 1} directions", "range")
    terminals = np.vstack([np.zeros(g.dim), U])
    tree, rep = solve_smt(terminals, g)
    star = float(len(U))
    return StarTest(star <= tree.length + STAR_TOL, star, tree.length, tree, rep)


def steiner_star_test(body, U) -> StarTest:
    """Like :func:`star_smt_test` but the centre is a Steiner point, not a
    terminal; a positive answer certifies a Steiner point of degree
    ``len(U)``."""
    g = as_gauge(body)
    U = _unit_directions(U, g)
    if len(U) > MAX_TERMINALS:
        raise InvariantError(f"at most {MAX_TERMINALS} directions", "range")
    tree, rep = solve_smt(U, g)
    star = float(len(U))
    return StarTest(star <= tree.length + STAR_TOL, star, tree.length, tree, rep)


@dataclass(frozen=True)
class LocalMove:
    star_length: float
    modified_length: float
    illuminated: tuple
    light_norm: float
    eps: float

    @property
    def implied_bound_holds(self):
        """``|U_j| < ||p||`` as derived from ``modified >= star``."""
        return len(self.illuminated) < self.light_norm


def thm2_local_move(K: SymmetricPolytope, U, p, eps: float) -> LocalMove:
    """Length of the star versus the tree re-routed through ``eps * p``.

    The edges from the origin to the directions lit by ``p`` are replaced
    by edges from the Steiner point ``eps * p``, which is joined to the
    origin.
    """
    from .illumination import illuminates_point
    if not eps > 0:
        raise InvariantError("eps must be positive", "eps")
    U = _unit_directions(U, as_gauge(K))
    p = np.asarray(p, dtype=float)
    lit = tuple(i for i, u in enumerate(U) if illuminates_point(p, u, K))
    s = eps * p
    modified = (len(U) - len(lit)) + float(K.gauge(s)) + sum(float(K.gauge(U[i] - s))
                                                            for i in lit)
    return LocalMove(float(len(U)), modified, lit, float(K.gauge(p)), eps)


@dataclass
class DegreeCheck:
    body: object
    B: float | None
    bound: int | None
    max_degree: int = 0
    max_steiner_degree: int = 0
    instances: int = 0
    skipped: bool = False
    notice: str = ""
    canonical_degree: int | None = None

    def to_json(self):
        return {"B": self.B, "bound": self.bound, "maxDegree": self.max_degree,
                "maxSteinerDegree": self.max_steiner_degree,
                "canonicalDegree": self.canonical_degree,
                "instances": self.instances, "skipped": self.skipped,
                "notice": self.notice}


def degree_bound_check(body, trials: int = 50, seed: int = 0, max_terminals: int = 6,
                       canonical_limit: int = 8) -> DegreeCheck:
    """Empirically test that no vertex of a minimal tree has degree above B(K).

    Solves ``trials`` random instances (3 to ``max_terminals`` terminals
    uniform in ``[-1, 1]^d``) and the canonical star on the origin and the
    vertices of ``K`` (when it has at most ``canonical_limit`` terminals).
    Raises :class:`BoundViolation` with the offending instance.
    """
    if isinstance(body, Gauge) and body.kind == "euclidean":
        return DegreeCheck(body, None, None, skipped=True,
                           notice="B(K) is not defined here for non-polytopal norms; skipped")
    from .illumination import bezdek_parameter
    K = body.body if isinstance(body, Gauge) else body
    B = bezdek_parameter(K).B_value
    bound = int(math.floor(B + 1e-6))
    check = DegreeCheck(K, B, bound)
    rng = np.random.default_rng(seed)
    instances = [rng.uniform(-1.0, 1.0, size=(int(rng.integers(3, max_terminals + 1)), K.dim))
                 for _ in range(trials)]
    canonical = np.vstack([np.zeros(K.dim), K.vertices.points])
    if len(canonical) <= canonical_limit:
        instances.append(canonical)
    for i, pts in enumerate(instances):
        tree, rep = solve_smt(pts, K)
        check.instances += 1
        check.max_degree = max(check.max_degree, rep.max_degree)
        check.max_steiner_degree = max(check.max_steiner_degree, rep.max_steiner_degree)
        if pts is canonical:
            check.canonical_degree = rep.max_degree
        if rep.max_degree > bound:
            raise BoundViolation(
                f"vertex of degree {rep.max_degree} exceeds floor(B)={bound}",
                instance={"points": pts.tolist(), "tree": tree.to_json()})
    return check
