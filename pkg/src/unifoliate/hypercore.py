"""Core r-uniform hypergraph type and exact small-instance invariants.

A hypergraph is a finite vertex set together with a family of r-element
edges.  This module carries the structural predicates the rest of the
package builds on: cycles (t distinct vertices and t distinct edges with
consecutive vertex pairs inside consecutive edges), linearity, hyperforests,
independent and strong independent sets, and exact solvers for the
independence number and the chromatic number at desk scale.

Vertices are opaque strings.  Hypergraph values are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .budgets import NodeBudget, as_budget


class HypergraphError(ValueError):
    """Malformed hypergraph or invalid operation input."""


class Hypergraph:
    """Immutable r-uniform hypergraph over named vertices.

    Edges are stored as sorted vertex tuples, with the edge list itself
    sorted, so equal hypergraphs have identical representations and JSON
    output is byte stable.  Duplicate edges are rejected: the edge family
    is a set, not a multiset.
    """

    __slots__ = ("r", "vertices", "edges", "_vset", "_edge_sets", "_edge_index", "_incidence")

    def __init__(self, r: int, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        if not isinstance(r, int) or r < 2:
            raise HypergraphError(f"uniformity must be an integer >= 2, got {r!r}")
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise HypergraphError("duplicate vertex identifiers")
        vset = frozenset(verts)
        norm = []
        seen = set()
        for e in edges:
            tup = tuple(sorted(str(v) for v in e))
            if len(tup) != r or len(set(tup)) != r:
                raise HypergraphError(f"edge {tup!r} does not have exactly {r} distinct vertices")
            for v in tup:
                if v not in vset:
                    raise HypergraphError(f"edge {tup!r} uses unknown vertex {v!r}")
            fs = frozenset(tup)
            if fs in seen:
                raise HypergraphError(f"duplicate edge {tup!r}")
            seen.add(fs)
            norm.append(tup)
        norm.sort()
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "_vset", vset)
        object.__setattr__(self, "_edge_sets", tuple(frozenset(e) for e in norm))
        object.__setattr__(self, "_edge_index", {fs: i for i, fs in enumerate(self._edge_sets)})
        inc: dict[str, list[int]] = {v: [] for v in verts}
        for i, e in enumerate(norm):
            for v in e:
                inc[v].append(i)
        object.__setattr__(self, "_incidence", {v: tuple(ix) for v, ix in inc.items()})

    def __setattr__(self, name, value):
        raise AttributeError("Hypergraph is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Hypergraph)
            and self.r == other.r
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.r, self.vertices, self.edges))

    def __repr__(self):
        return f"Hypergraph(r={self.r}, n={len(self.vertices)}, m={len(self.edges)})"

    # -- basic accessors -------------------------------------------------

    @property
    def edge_sets(self) -> tuple[frozenset, ...]:
        return self._edge_sets

    def has_vertex(self, v: str) -> bool:
        return v in self._vset

    def has_edge(self, e: Iterable[str]) -> bool:
        return frozenset(e) in self._edge_index

    def incident_edges(self, v: str) -> tuple[int, ...]:
        """Indices into ``edges`` of the edges containing v."""
        if v not in self._vset:
            raise HypergraphError(f"unknown vertex {v!r}")
        return self._incidence[v]

    def degree(self, v: str) -> int:
        """Number of edges containing v."""
        return len(self.incident_edges(v))

    def min_degree(self) -> int:
        if not self.vertices:
            raise HypergraphError("minimum degree of an empty vertex set is undefined")
        return min(len(self._incidence[v]) for v in self.vertices)

    def induced(self, X: Iterable[str]) -> "Hypergraph":
        """Subhypergraph on X: keeps the edges completely contained in X."""
        xs = tuple(str(v) for v in X)
        xset = set(xs)
        for v in xset:
            if v not in self._vset:
                raise HypergraphError(f"induced set uses unknown vertex {v!r}")
        ordered = tuple(v for v in self.vertices if v in xset)
        kept = [e for e, fs in zip(self.edges, self._edge_sets) if fs <= xset]
        return Hypergraph(self.r, ordered, kept)

    def without_edges(self, drop: Iterable[Iterable[str]]) -> "Hypergraph":
        gone = {frozenset(e) for e in drop}
        kept = [e for e, fs in zip(self.edges, self._edge_sets) if fs not in gone]
        return Hypergraph(self.r, self.vertices, kept)

    def components(self) -> list[frozenset]:
        """Maximal sets connected through overlapping edges; isolated
        vertices form singleton components.  Sorted by least vertex."""
        parent = {v: v for v in self.vertices}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for fs in self._edge_sets:
            it = iter(fs)
            first = find(next(it))
            for v in it:
                parent[find(v)] = first
        groups: dict[str, set] = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_linear(self) -> bool:
        """True iff every pair of edges shares at most one vertex."""
        sets = self._edge_sets
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if len(sets[i] & sets[j]) > 1:
                    return False
        return True

    def _check_subset(self, X: Iterable[str]) -> frozenset:
        xs = frozenset(str(v) for v in X)
        bad = xs - self._vset
        if bad:
            raise HypergraphError(f"unknown vertices {sorted(bad)!r}")
        return xs

    def is_independent(self, X: Iterable[str]) -> bool:
        """True iff every edge has at least one vertex outside X."""
        xs = self._check_subset(X)
        return all(not fs <= xs for fs in self._edge_sets)

    def is_strong_independent(self, X: Iterable[str]) -> bool:
        """True iff every edge intersects X in at most one vertex."""
        xs = self._check_subset(X)
        return all(len(fs & xs) <= 1 for fs in self._edge_sets)

    # -- interchange ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"r": self.r, "vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Hypergraph":
        try:
            return cls(data["r"], data["vertices"], data["edges"])
        except KeyError as exc:
            raise HypergraphError(f"missing hypergraph field {exc}") from exc


def dump_hypergraph(H: Hypergraph) -> str:
    return json.dumps(H.to_json_dict(), sort_keys=True)


def load_hypergraph(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"invalid hypergraph JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise HypergraphError("hypergraph JSON must be an object")
    return Hypergraph.from_json_dict(data)


# -- cycles ----------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A cycle: t >= 2 distinct vertices and t distinct edges, with
    {x_i, x_{i+1}} inside edge i (indices cyclic).  Stored canonically:
    the least representative over all rotations and reflections."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, ...], ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def span(self) -> frozenset:
        out: set[str] = set()
        for e in self.edges:
            out.update(e)
        return frozenset(out)

    def validate(self, H: Hypergraph) -> None:
        t = len(self.vertices)
        if t < 2 or len(self.edges) != t:
            raise HypergraphError("cycle needs t >= 2 vertices and t edges")
        if len(set(self.vertices)) != t or len(set(self.edges)) != t:
            raise HypergraphError("cycle vertices and edges must be distinct")
        for i in range(t):
            if not H.has_edge(self.edges[i]):
                raise HypergraphError(f"cycle edge {self.edges[i]!r} not in hypergraph")
            pair = {self.vertices[i], self.vertices[(i + 1) % t]}
            if not pair <= set(self.edges[i]):
                raise HypergraphError(f"consecutive pair {sorted(pair)!r} not inside edge {i}")

    @staticmethod
    def canonical(vertices: Sequence[str], edges: Sequence[tuple[str, ...]]) -> "Cycle":
        xs = tuple(vertices)
        es = tuple(edges)
        t = len(xs)
        best = None
        for k in range(t):
            fx = xs[k:] + xs[:k]
            fe = es[k:] + es[:k]
            if best is None or (fx, fe) < best:
                best = (fx, fe)
            rx = (fx[0],) + tuple(reversed(fx[1:]))
            re_ = tuple(reversed(fe))
            if (rx, re_) < best:
                best = (rx, re_)
        return Cycle(best[0], best[1])


class BudgetSignal(Exception):
    """Internal: unwinds a budgeted cycle search."""


def iter_cycles(
    H: Hypergraph,
    max_t: int | None = None,
    max_span: int | None = None,
    budget: NodeBudget | None = None,
) -> Iterator[Cycle]:
    """Yield the cycles of H (canonical, deduplicated) in a deterministic
    depth-first order.  ``max_t`` bounds the number of spine vertices,
    ``max_span`` bounds the number of vertices covered by the cycle's
    edges.  Enumeration is exponential; callers bound it."""
    if max_t is None:
        max_t = len(H.edges)
    if max_t < 2 or len(H.edges) < 2:
        return
    edge_sets = H.edge_sets
    edges = H.edges
    emitted: set[Cycle] = set()

    def walk(s, path_v, path_e, used_v, used_e, span):
        v = path_v[-1]
        for ei in H.incident_edges(v):
            if ei in used_e:
                continue
            if budget is not None and not budget.tick():
                raise BudgetSignal
            fs = edge_sets[ei]
            if max_span is not None:
                nspan = span | fs
                if len(nspan) > max_span:
                    continue
            else:
                nspan = span
            if len(path_v) >= 2 and s in fs:
                cyc = Cycle.canonical(tuple(path_v), tuple(edges[i] for i in path_e) + (edges[ei],))
                if cyc not in emitted:
                    emitted.add(cyc)
                    yield cyc
            if len(path_v) < max_t:
                for w in sorted(fs):
                    if w <= s or w in used_v:
                        continue
                    path_v.append(w)
                    path_e.append(ei)
                    used_v.add(w)
                    used_e.add(ei)
                    yield from walk(s, path_v, path_e, used_v, used_e, nspan)
                    used_e.discard(ei)
                    used_v.discard(w)
                    path_e.pop()
                    path_v.pop()

    for s in sorted(H.vertices):
        yield from walk(s, [s], [], {s}, set(), frozenset([s]))


def enumerate_cycles(H: Hypergraph, max_t: int) -> list[Cycle]:
    """All cycles with at most ``max_t`` spine vertices, up to rotation and
    reflection, in a deterministic sorted order."""
    if max_t < 2:
        raise HypergraphError("max_t must be at least 2")
    found = list(iter_cycles(H, max_t=max_t))
    found.sort(key=lambda c: (c.length, c.vertices, c.edges))
    return found


def is_hyperforest(H: Hypergraph) -> bool:
    """True iff H contains no cycles (of any length up to |E(H)|)."""
    return next(iter_cycles(H), None) is None


def is_hypertree(H: Hypergraph) -> bool:
    return is_hyperforest(H) and len(H.components()) == 1


# -- colorings ---------------------------------------------------------------


@dataclass
class Coloring:
    """Vertex -> color index (1..k).  Proper iff no edge is monochromatic."""

    assignment: dict

    @property
    def colors_used(self) -> int:
        return len(set(self.assignment.values()))

    def is_proper(self, H: Hypergraph) -> bool:
        for fs in H.edge_sets:
            colors = {self.assignment[v] for v in fs}
            if len(colors) == 1:
                return False
        return True


def greedy_color(H: Hypergraph, order: Sequence[str]) -> Coloring:
    """Greedy coloring along ``order``: each vertex takes the least color
    that does not complete a monochromatic edge among already-colored
    vertices.  The result is always proper."""
    if sorted(order) != sorted(H.vertices):
        raise HypergraphError("order must be a permutation of the vertex set")
    assignment: dict = {}
    for v in order:
        blocked = set()
        for ei in H.incident_edges(v):
            others = H.edge_sets[ei] - {v}
            if all(u in assignment for u in others):
                cs = {assignment[u] for u in others}
                if len(cs) == 1:
                    blocked.add(next(iter(cs)))
        c = 1
        while c in blocked:
            c += 1
        assignment[v] = c
    return Coloring(assignment)


# -- exact solvers ------------------------------------------------------------


@dataclass(frozen=True)
class AlphaResult:
    """Outcome of the exact independence-number search.

    status "exact" means value is the independence number; "budget" means
    the search ran out of nodes and value is the best certified lower
    bound.  ``independent_set`` is the witnessing set either way."""

    status: str
    value: int
    independent_set: tuple[str, ...]


def independence_number(H: Hypergraph, budget: int | NodeBudget | None = None) -> AlphaResult:
    """Largest independent set, exact, by branch and bound on edge covers."""
    nb = as_budget(budget)
    n = len(H.vertices)
    all_v = frozenset(H.vertices)
    edge_sets = H.edge_sets
    state = {"best": -1, "best_set": frozenset(), "out": False}

    def rec(excluded: frozenset, banned: frozenset):
        if state["out"]:
            return
        if not nb.tick():
            state["out"] = True
            return
        viol = None
        for fs in edge_sets:
            if not fs & excluded:
                viol = fs
                break
        if viol is None:
            size = n - len(excluded)
            if size > state["best"]:
                state["best"] = size
                state["best_set"] = all_v - excluded
            return
        if n - len(excluded) - 1 <= state["best"]:
            return
        kept: list[str] = []
        for u in sorted(viol):
            if u not in banned:
                rec(excluded | {u}, banned | frozenset(kept))
            kept.append(u)

    rec(frozenset(), frozenset())
    witness = tuple(sorted(state["best_set"])) if state["best"] >= 0 else ()
    value = max(state["best"], 0)
    if witness and not H.is_independent(witness):
        raise AssertionError("independence certificate failed verification")
    status = "budget" if state["out"] else "exact"
    return AlphaResult(status, value, witness)


@dataclass(frozen=True)
class ChiResult:
    """Outcome of the exact chromatic-number search.

    status is "exact" (value = chromatic number), "exceeds_limit" (no
    proper coloring with <= limit colors), or "budget" (value is the best
    upper bound found, witnessed by ``coloring``)."""

    status: str
    value: int
    coloring: Coloring | None


def chromatic_number(
    H: Hypergraph, limit: int | None = None, budget: int | NodeBudget | None = None
) -> ChiResult:
    """Least k with a proper k-coloring, searched exactly up to ``limit``."""
    n = len(H.vertices)
    if n == 0:
        return ChiResult("exact", 0, Coloring({}))
    if limit is None:
        limit = n
    if not H.edges:
        one = Coloring({v: 1 for v in H.vertices})
        return ChiResult("exact", 1, one) if limit >= 1 else ChiResult("exceeds_limit", limit, None)
    nb = as_budget(budget)
    incumbent = greedy_color(H, sorted(H.vertices))
    g = incumbent.colors_used
    order = sorted(H.vertices, key=lambda v: (-H.degree(v), v))
    edge_sets = H.edge_sets
    out = {"exhausted": False}

    def colorable(k: int) -> Coloring | None:
        assignment: dict = {}

        def place(i: int, used: int):
            if out["exhausted"]:
                return None
            if i == n:
                return dict(assignment)
            v = order[i]
            top = min(k, used + 1)
            for c in range(1, top + 1):
                if not nb.tick():
                    out["exhausted"] = True
                    return None
                assignment[v] = c
                ok = True
                for ei in H.incident_edges(v):
                    fs = edge_sets[ei]
                    if all(u in assignment for u in fs) and len({assignment[u] for u in fs}) == 1:
                        ok = False
                        break
                if ok:
                    res = place(i + 1, max(used, c))
                    if res is not None:
                        return res
                del assignment[v]
            return None

        found = place(0, 0)
        return Coloring(found) if found is not None else None

    for k in range(2, min(g - 1, limit) + 1):
        col = colorable(k)
        if out["exhausted"]:
            return ChiResult("budget", g, incumbent)
        if col is not None:
            return ChiResult("exact", k, col)
    if g <= limit:
        return ChiResult("exact", g, incumbent)
    return ChiResult("exceeds_limit", limit, None)


__all__ = [
    "AlphaResult",
    "ChiResult",
    "Coloring",
    "Cycle",
    "Hypergraph",
    "HypergraphError",
    "chromatic_number",
    "dump_hypergraph",
    "enumerate_cycles",
    "greedy_color",
    "independence_number",
    "is_hyperforest",
    "is_hypertree",
    "iter_cycles",
    "load_hypergraph",
]
