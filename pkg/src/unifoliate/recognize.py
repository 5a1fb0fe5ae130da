"""Recognition of unifoliate and strong unifoliate r-partite structure.

A hypergraph F is unifoliate r-partite when some ordered partition
V_1..V_r of its vertices satisfies: F[V_1] is a linear hyperforest, every
edge not inside V_1 has exactly one vertex in each part, and every cycle
either touches at least two components of F[V_1] or uses zero or at least
two edges of F[V_1].  It is strong unifoliate when, in addition, no two
distinct vertices of one F[V_1] component are linked by a chain of edges
whose consecutive intersections contain a vertex outside V_1.

The searches here enumerate ordered partitions lexicographically (by the
part-index vector over the hypergraph's vertex order), so witnesses are
reproducible.  Everything is exponential and budgeted.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .budgets import NodeBudget, as_budget
from .hypercore import Cycle, Hypergraph, HypergraphError, iter_cycles


class WitnessError(ValueError):
    """Invalid partition witness or violated precondition."""


@dataclass(frozen=True)
class PartitionWitness:
    """Ordered r-part vertex partition; part 0 plays the forest role."""

    parts: tuple[tuple[str, ...], ...]

    def validate(self, F: Hypergraph) -> None:
        if len(self.parts) != F.r:
            raise WitnessError(f"witness has {len(self.parts)} parts, need {F.r}")
        seen: set[str] = set()
        for part in self.parts:
            for v in part:
                if not F.has_vertex(v):
                    raise WitnessError(f"witness uses unknown vertex {v!r}")
                if v in seen:
                    raise WitnessError(f"vertex {v!r} appears in two parts")
                seen.add(v)
        if len(seen) != len(F.vertices):
            missing = sorted(set(F.vertices) - seen)
            raise WitnessError(f"witness does not cover vertices {missing!r}")

    def part_of(self) -> dict:
        return {v: i for i, part in enumerate(self.parts) for v in part}

    def v1(self) -> frozenset:
        return frozenset(self.parts[0])

    def tree_components(self, F: Hypergraph) -> list[frozenset]:
        """Components of F restricted to the first part."""
        return F.induced(self.parts[0]).components()

    def to_json_dict(self) -> dict:
        return {"parts": [list(p) for p in self.parts]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PartitionWitness":
        return cls(tuple(tuple(p) for p in data["parts"]))


@dataclass(frozen=True)
class ShadowHypergraph:
    """(r-1)-uniform projection of the cross-edges onto V_2 .. V_r.

    ``components`` groups the shadow edges connected through shared
    vertices; vertices lying in no shadow edge belong to no component."""

    graph: Hypergraph
    components: tuple[frozenset, ...]
    component_index: dict

    def component_of_edge(self, edge: frozenset) -> int:
        for v in edge:
            if v in self.component_index:
                return self.component_index[v]
        raise WitnessError(f"edge {sorted(edge)!r} not in any shadow component")


def _cross_edges(F: Hypergraph, w: PartitionWitness) -> list[frozenset]:
    v1 = w.v1()
    return [fs for fs in F.edge_sets if not fs <= v1]


def shadow(F: Hypergraph, w: PartitionWitness) -> ShadowHypergraph:
    """Project each cross-edge to its r-1 vertices outside part 1."""
    w.validate(F)
    v1 = w.v1()
    rest = [v for v in F.vertices if v not in v1]
    shadow_edges = sorted({tuple(sorted(fs - v1)) for fs in _cross_edges(F, w)})
    for e in shadow_edges:
        if len(e) != F.r - 1:
            raise WitnessError(f"cross-edge projection {e!r} is not transversal")
    graph = Hypergraph(F.r - 1, rest, shadow_edges)
    comps = [c for c in graph.components() if any(fs <= c for fs in graph.edge_sets)]
    comps.sort(key=min)
    index = {v: i for i, c in enumerate(comps) for v in c}
    return ShadowHypergraph(graph, tuple(comps), index)


def v1_neighborhood(
    F: Hypergraph, w: PartitionWitness, component: int, sh: ShadowHypergraph | None = None
) -> frozenset:
    """Part-1 vertices co-edged with a shadow edge of the given component."""
    if sh is None:
        sh = shadow(F, w)
    if not 0 <= component < len(sh.components):
        raise WitnessError(f"unknown shadow component {component}")
    v1 = w.v1()
    comp = sh.components[component]
    out = set()
    for fs in _cross_edges(F, w):
        inside = fs & v1
        if len(inside) == 1 and (fs - v1) <= comp:
            out.add(next(iter(inside)))
    return frozenset(out)


@dataclass(frozen=True)
class UnifoliateCheck:
    """Outcome of the unifoliate witness check, with a certificate on failure:
    ``bad_edge`` for a non-transversal cross-edge, ``bad_cycle`` for a cycle
    inside part 1 or a cycle using exactly one part-1 edge within one
    component."""

    ok: bool
    reason: str | None = None
    bad_edge: tuple | None = None
    bad_cycle: Cycle | None = None


def check_unifoliate_witness(
    F: Hypergraph, w: PartitionWitness, cycles: Sequence[Cycle] | None = None
) -> UnifoliateCheck:
    """Check the three witness conditions; certificates point at the first
    violation in canonical order."""
    w.validate(F)
    part_of = w.part_of()
    v1 = w.v1()
    r = F.r
    for e, fs in zip(F.edges, F.edge_sets):
        if fs <= v1:
            continue
        if sorted(part_of[v] for v in e) != list(range(r)):
            return UnifoliateCheck(False, "non-transversal cross-edge", bad_edge=e)
    if cycles is None:
        cycles = list(iter_cycles(F))
    comp_of = {}
    for comp in F.induced(w.parts[0]).components():
        for v in comp:
            comp_of[v] = min(comp)
    for cyc in cycles:
        inside = [e for e in cyc.edges if set(e) <= v1]
        if len(inside) == len(cyc.edges):
            return UnifoliateCheck(False, "cycle inside part 1", bad_cycle=cyc)
        if len(inside) == 1:
            # the cycle "uses" every vertex of its edges: it touches two
            # components whenever any of its edges meets part 1 outside the
            # component of its single forest edge
            used_v1 = set()
            for e in cyc.edges:
                used_v1.update(set(e) & v1)
            if len({comp_of[x] for x in used_v1}) <= 1:
                return UnifoliateCheck(False, "one-forest-edge cycle in one component", bad_cycle=cyc)
    return UnifoliateCheck(True)


@dataclass(frozen=True)
class StrongCheck:
    """Outcome of the strong condition.  On failure, ``x`` and ``y`` are two
    distinct same-component part-1 vertices and ``path`` is a chain of
    cross-edges from x to y whose consecutive intersections leave part 1."""

    ok: bool
    x: str | None = None
    y: str | None = None
    path: tuple[tuple, ...] = ()


def check_strong_witness(F: Hypergraph, w: PartitionWitness) -> StrongCheck:
    """Direct path-search form of the strong condition.

    Chains of length one are never violations: a single cross-edge holds at
    most one part-1 vertex, and an edge inside part 1 has no intersection
    outside it to chain through."""
    pre = check_unifoliate_witness(F, w)
    if not pre.ok:
        raise WitnessError(f"witness fails the unifoliate check: {pre.reason}")
    v1 = w.v1()
    cross = _cross_edges(F, w)
    k = len(cross)
    # adjacency: consecutive edges must meet outside part 1
    adj: list[list[int]] = [[] for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if (cross[i] & cross[j]) - v1:
                adj[i].append(j)
                adj[j].append(i)

    comp_of_v1 = {}
    for comp in F.induced(w.parts[0]).components():
        for v in comp:
            comp_of_v1[v] = min(comp)

    # linkage components over cross-edges
    comp_id = [-1] * k
    cid = 0
    for i in range(k):
        if comp_id[i] != -1:
            continue
        queue = deque([i])
        comp_id[i] = cid
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if comp_id[b] == -1:
                    comp_id[b] = cid
                    queue.append(b)
        cid += 1

    for c in range(cid):
        members = [i for i in range(k) if comp_id[i] == c]
        by_tree: dict[str, list[str]] = {}
        covered = sorted({next(iter(cross[i] & v1)) for i in members if cross[i] & v1})
        for x in covered:
            by_tree.setdefault(comp_of_v1[x], []).append(x)
        for tree_key in sorted(by_tree):
            group = sorted(by_tree[tree_key])
            if len(group) >= 2:
                x, y = group[0], group[1]
                path = _linkage_path(cross, adj, members, x, y, v1)
                return StrongCheck(False, x, y, path)
    return StrongCheck(True)


def _linkage_path(cross, adj, members, x, y, v1):
    starts = [i for i in members if x in cross[i]]
    targets = {i for i in members if y in cross[i]}
    prev: dict[int, int | None] = {}
    queue = deque()
    for i in sorted(starts):
        prev[i] = None
        queue.append(i)
    while queue:
        a = queue.popleft()
        if a in targets:
            chain = []
            cur: int | None = a
            while cur is not None:
                chain.append(tuple(sorted(cross[cur])))
                cur = prev[cur]
            return tuple(reversed(chain))
        for b in adj[a]:
            if b not in prev:
                prev[b] = a
                queue.append(b)
    raise AssertionError("linkage path lookup failed on a violating component")


def strong_witness_via_shadow(F: Hypergraph, w: PartitionWitness) -> bool:
    """Shadow-component form of the strong condition: every shadow component
    sees at most one vertex of each part-1 hypertree."""
    sh = shadow(F, w)
    trees = w.tree_components(F)
    for i in range(len(sh.components)):
        nbhd = v1_neighborhood(F, w, i, sh)
        for tree in trees:
            if len(nbhd & tree) > 1:
                return False
    return True


# -- witness search ------------------------------------------------------------


@dataclass(frozen=True)
class RecognizerResult:
    """status: "found" (witness attached), "none" (search completed, no
    witness), or "budget" (search truncated, no verdict)."""

    status: str
    witness: PartitionWitness | None


def _iter_unifoliate_witnesses(F: Hypergraph, nb: NodeBudget) -> Iterator[PartitionWitness]:
    """All witnesses passing the unifoliate check, lexicographic by the
    part-index vector over F's vertex order.  Prunes assignments under
    which some edge can no longer be inside part 1 nor transversal."""
    r = F.r
    verts = F.vertices
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    edge_members = [tuple(sorted(fs, key=pos.__getitem__)) for fs in F.edge_sets]
    # edges indexed by their last-assigned member position for prompt pruning
    touching: list[list[int]] = [[] for _ in range(n)]
    for ei, mem in enumerate(edge_members):
        for v in mem:
            touching[pos[v]].append(ei)
    cycles = list(iter_cycles(F))
    assign = [0] * n

    def edge_alive(ei: int, upto: int) -> bool:
        counts = [0] * r
        all_p1 = True
        for v in edge_members[ei]:
            i = pos[v]
            if i > upto:
                continue
            p = assign[i]
            counts[p] += 1
            if p != 0:
                all_p1 = False
        if all_p1:
            return True
        return max(counts) <= 1

    def rec(i: int) -> Iterator[PartitionWitness]:
        if not nb.tick():
            raise _SearchBudget
        if i == n:
            parts = tuple(
                tuple(v for v in verts if assign[pos[v]] == p) for p in range(r)
            )
            w = PartitionWitness(parts)
            if check_unifoliate_witness(F, w, cycles=cycles).ok:
                yield w
            return
        for p in range(r):
            assign[i] = p
            if all(edge_alive(ei, i) for ei in touching[i]):
                yield from rec(i + 1)
        assign[i] = 0

    yield from rec(0)


class _SearchBudget(Exception):
    pass


def is_unifoliate(F: Hypergraph, budget: int | NodeBudget | None = None) -> RecognizerResult:
    """First unifoliate witness in lexicographic partition order, if any."""
    nb = as_budget(budget)
    try:
        for w in _iter_unifoliate_witnesses(F, nb):
            return RecognizerResult("found", w)
    except _SearchBudget:
        return RecognizerResult("budget", None)
    return RecognizerResult("none", None)


def is_strong_unifoliate(F: Hypergraph, budget: int | NodeBudget | None = None) -> RecognizerResult:
    """First witness passing both checks.  All witnesses are searched before
    declaring failure: strong unifoliate means SOME witness works."""
    nb = as_budget(budget)
    try:
        for w in _iter_unifoliate_witnesses(F, nb):
            if check_strong_witness(F, w).ok:
                return RecognizerResult("found", w)
    except _SearchBudget:
        return RecognizerResult("budget", None)
    return RecognizerResult("none", None)


NOT_UNIFOLIATE = "NotUnifoliate"
UNIFOLIATE_ONLY = "UnifoliateOnly"
STRONG_UNIFOLIATE = "StrongUnifoliate"


@dataclass(frozen=True)
class Classification:
    """Three-way structural classification with certificates.

    kind is one of NotUnifoliate, UnifoliateOnly, StrongUnifoliate (None if
    the search budget ran out).  For UnifoliateOnly, ``witness`` is the
    first unifoliate witness and ``violation`` its strong-condition
    counterexample."""

    kind: str | None
    witness: PartitionWitness | None
    violation: StrongCheck | None
    status: str = "ok"

    def to_json_dict(self) -> dict:
        out: dict = {"class": self.kind, "status": self.status}
        out["witness"] = self.witness.to_json_dict() if self.witness else None
        if self.violation is not None and not self.violation.ok:
            out["violation"] = {
                "x": self.violation.x,
                "y": self.violation.y,
                "path": [list(e) for e in self.violation.path],
            }
        else:
            out["violation"] = None
        return out


def classify(F: Hypergraph, budget: int | NodeBudget | None = None) -> Classification:
    """NotUnifoliate / UnifoliateOnly / StrongUnifoliate, with certificates."""
    nb = as_budget(budget)
    first: PartitionWitness | None = None
    try:
        for w in _iter_unifoliate_witnesses(F, nb):
            if first is None:
                first = w
            strong = check_strong_witness(F, w)
            if strong.ok:
                return Classification(STRONG_UNIFOLIATE, w, None)
    except _SearchBudget:
        return Classification(None, first, None, status="budget")
    if first is None:
        return Classification(NOT_UNIFOLIATE, None, None)
    return Classification(UNIFOLIATE_ONLY, first, check_strong_witness(F, first))


__all__ = [
    "Classification",
    "PartitionWitness",
    "RecognizerResult",
    "ShadowHypergraph",
    "StrongCheck",
    "UnifoliateCheck",
    "WitnessError",
    "check_strong_witness",
    "check_unifoliate_witness",
    "classify",
    "is_strong_unifoliate",
    "is_unifoliate",
    "shadow",
    "strong_witness_via_shadow",
    "v1_neighborhood",
]
