"""Subhypergraph search, degeneracy, fiber bundles, and color-or-embed.

A hypergraph is d-degenerate when its vertices admit an ordering in which
each vertex, inside the prefix it ends, has a guard set of at most d
earlier vertices meeting every edge through it.  Degenerate pieces admit
(d+1)-colorings; non-degenerate pieces are rich enough to greedily embed
any linear hyperforest on d vertices.  Fiber bundles package, for each
vertex of a base hypergraph, the (r-1)-sets completing it to an edge;
sections intersect fibers, and the bundle dimension measures how many
disjoint base edges have uniformly rich sections.  These pieces combine
into color_or_embed: either a target hypergraph embeds, or the base of
its part-1-forest bundle colors and the color classes decompose by
degeneracy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .budgets import NodeBudget, as_budget
from .hypercore import (
    Coloring,
    Hypergraph,
    HypergraphError,
    chromatic_number,
    greedy_color,
)
from .recognize import (
    PartitionWitness,
    WitnessError,
    check_strong_witness,
    shadow,
    v1_neighborhood,
)


@dataclass(frozen=True)
class Embedding:
    """Injection V(F) -> V(H) carrying every edge of F onto an edge of H."""

    mapping: dict

    def verify(self, F: Hypergraph, H: Hypergraph) -> None:
        if set(self.mapping) != set(F.vertices):
            raise HypergraphError("embedding does not cover the pattern's vertices")
        images = list(self.mapping.values())
        if len(set(images)) != len(images):
            raise HypergraphError("embedding is not injective")
        for v in images:
            if not H.has_vertex(v):
                raise HypergraphError(f"embedding image {v!r} not in host")
        for e in F.edges:
            img = frozenset(self.mapping[v] for v in e)
            if not H.has_edge(img):
                raise HypergraphError(f"pattern edge {e!r} maps to non-edge {sorted(img)!r}")


@dataclass(frozen=True)
class CopySearch:
    """status: "found" / "none" / "budget"."""

    status: str
    embedding: Embedding | None


def contains_copy(H: Hypergraph, F: Hypergraph, budget: int | NodeBudget | None = None) -> CopySearch:
    """Backtracking subhypergraph search with degree and pair pruning.

    Pattern vertices are assigned in sorted order, candidates in sorted
    order, so the first embedding found is deterministic (the identity
    whenever F equals H)."""
    if F.r != H.r:
        raise HypergraphError("uniformity mismatch between host and pattern")
    nf = len(F.vertices)
    if nf > len(H.vertices):
        return CopySearch("none", None)
    nb = as_budget(budget)
    f_order = sorted(F.vertices)
    h_pairs = {
        frozenset(p) for fs in H.edge_sets for p in itertools.combinations(sorted(fs), 2)
    }
    f_pairs = {
        frozenset(p) for fs in F.edge_sets for p in itertools.combinations(sorted(fs), 2)
    }
    h_sorted = sorted(H.vertices)
    assigned: dict = {}
    used: set = set()
    out = {"budget": False}

    def place(i: int):
        if out["budget"]:
            return None
        if i == nf:
            return dict(assigned)
        u = f_order[i]
        du = F.degree(u)
        for w in h_sorted:
            if w in used:
                continue
            if not nb.tick():
                out["budget"] = True
                return None
            if H.degree(w) < du:
                continue
            ok = True
            for uprev in f_order[:i]:
                if frozenset((u, uprev)) in f_pairs and frozenset((w, assigned[uprev])) not in h_pairs:
                    ok = False
                    break
            if ok:
                for ei in F.incident_edges(u):
                    fe = F.edge_sets[ei]
                    if all(x == u or x in assigned for x in fe):
                        img = frozenset(assigned[x] if x != u else w for x in fe)
                        if not H.has_edge(img):
                            ok = False
                            break
            if ok:
                assigned[u] = w
                used.add(w)
                res = place(i + 1)
                used.discard(w)
                del assigned[u]
                if res is not None:
                    return res
        return None

    found = place(0)
    if found is not None:
        emb = Embedding(found)
        emb.verify(F, H)
        return CopySearch("found", emb)
    return CopySearch("budget" if out["budget"] else "none", None)


# -- degeneracy ----------------------------------------------------------------


@dataclass(frozen=True)
class DegeneracyCertificate:
    """Ordering v_1..v_n with per-vertex guard sets: inside each prefix,
    every edge through its last vertex meets that vertex's guards (at most
    d earlier vertices, never the vertex itself)."""

    order: tuple
    guards: dict

    def validate(self, H: Hypergraph, d: int) -> None:
        if sorted(self.order) != sorted(H.vertices):
            raise HypergraphError("certificate order is not a permutation of the vertices")
        prefix: set = set()
        for i, v in enumerate(self.order):
            prefix.add(v)
            guard = frozenset(self.guards[v])
            if len(guard) > d:
                raise HypergraphError(f"guard set of {v!r} exceeds size {d} (index {i})")
            if v in guard:
                raise HypergraphError(f"guard set of {v!r} contains the vertex itself (index {i})")
            if not guard <= prefix:
                raise HypergraphError(f"guard set of {v!r} leaves the prefix (index {i})")
            for ei in H.incident_edges(v):
                fs = H.edge_sets[ei]
                if fs <= prefix and not fs & guard:
                    raise HypergraphError(
                        f"edge {sorted(fs)!r} through {v!r} misses its guards (index {i})"
                    )


def _find_guard(link: list, d: int) -> frozenset | None:
    """Exact hitting set of size <= d over the link of a vertex."""
    alive = sorted(set(link), key=sorted)
    if not alive:
        return frozenset()
    if d == 0:
        return None
    for u in sorted(alive[0]):
        rest = [fs for fs in alive if u not in fs]
        sub = _find_guard(rest, d - 1)
        if sub is not None:
            return frozenset({u}) | sub
    return None


def _peel(H: Hypergraph, d: int):
    """Repeatedly remove any vertex (least first) guarded by at most d
    others in the current induced hypergraph.  Returns the removal record
    and whatever remains; an empty remainder certifies d-degeneracy, a
    nonempty one is the core used by the greedy forest embedding."""
    remaining = set(H.vertices)
    live_edges = list(H.edge_sets)
    removal: list[tuple[str, frozenset]] = []
    while remaining:
        pick = None
        for v in sorted(remaining):
            link = [fs - {v} for fs in live_edges if v in fs]
            guard = _find_guard(link, d)
            if guard is not None:
                pick = (v, guard)
                break
        if pick is None:
            break
        v, guard = pick
        remaining.discard(v)
        live_edges = [fs for fs in live_edges if v not in fs]
        removal.append((v, guard))
    return removal, remaining


def is_d_degenerate(H: Hypergraph, d: int) -> DegeneracyCertificate | None:
    """Certificate from greedy peeling, or None when peeling stalls.

    Induced subhypergraphs of d-degenerate hypergraphs are d-degenerate,
    so peeling in any order is a complete decision procedure."""
    if d < 0:
        raise HypergraphError("degeneracy level must be nonnegative")
    removal, remaining = _peel(H, d)
    if remaining:
        return None
    order = tuple(v for v, _ in reversed(removal))
    guards = {v: g for v, g in removal}
    cert = DegeneracyCertificate(order, guards)
    cert.validate(H, d)
    return cert


def degeneracy_color(H: Hypergraph, cert: DegeneracyCertificate) -> Coloring:
    """Greedy coloring along a validated certificate order: every blocked
    color is witnessed by a guard vertex, so at most d+1 colors appear."""
    d = max((len(cert.guards[v]) for v in cert.order), default=0)
    cert.validate(H, d)
    coloring = greedy_color(H, list(cert.order))
    if coloring.colors_used > d + 1:
        raise AssertionError("degeneracy coloring exceeded d+1 colors")
    if not coloring.is_proper(H):
        raise AssertionError("degeneracy coloring is not proper")
    return coloring


def _forest_edge_order(T: Hypergraph) -> list[tuple]:
    """Order a linear hyperforest's edges so each edge meets the union of
    its predecessors in at most one vertex.

    Extending edges (overlap exactly one) are preferred over starting a
    fresh component, which keeps every placed piece connected; in a
    hyperforest a two-vertex overlap with a connected placed piece would
    close a cycle, so it cannot occur."""
    remaining = set(range(len(T.edges)))
    placed: set = set()
    order: list[int] = []
    while remaining:
        pick = None
        for ei in sorted(remaining):
            if len(T.edge_sets[ei] & placed) == 1:
                pick = ei
                break
        if pick is None:
            for ei in sorted(remaining):
                if not T.edge_sets[ei] & placed:
                    pick = ei
                    break
        if pick is None:
            raise HypergraphError("pattern is not a linear hyperforest: no one-overlap ordering")
        order.append(pick)
        placed |= T.edge_sets[pick]
        remaining.discard(pick)
    return [T.edges[i] for i in order]


def embed_linear_hyperforest(H: Hypergraph, T: Hypergraph) -> Embedding:
    """Greedy embedding of a linear hyperforest T on d vertices into a
    non-d-degenerate H: peel H down to its core (where every vertex keeps,
    against any d forbidden vertices, an edge avoiding them) and place T's
    edges one at a time, each extending at most one embedded vertex."""
    from .hypercore import is_hyperforest

    if T.r != H.r:
        raise HypergraphError("uniformity mismatch")
    if not T.vertices:
        return Embedding({})
    if not (T.is_linear() and is_hyperforest(T)):
        raise HypergraphError("pattern is not a linear hyperforest")
    d = len(T.vertices)
    _, core_vertices = _peel(H, d)
    if not core_vertices:
        raise HypergraphError(
            f"host is {d}-degenerate; use the degeneracy certificate path instead"
        )
    core = H.induced(sorted(core_vertices))
    mapping: dict = {}
    used: set = set()

    for e in _forest_edge_order(T):
        fs = set(e)
        anchors = [v for v in sorted(fs) if v in mapping]
        if len(anchors) > 1:
            raise AssertionError("forest edge ordering produced a two-anchor edge")
        if anchors:
            t_anchor = anchors[0]
            host_anchor = mapping[t_anchor]
        else:
            t_anchor = sorted(fs)[0]
            host_anchor = next(v for v in core.vertices if v not in used)
        forbidden = used - {host_anchor}
        host_edge = None
        for ei in core.incident_edges(host_anchor):
            efs = core.edge_sets[ei]
            if not efs & forbidden:
                host_edge = efs
                break
        if host_edge is None:
            raise AssertionError("core property failed to supply an avoiding edge")
        fresh_t = sorted(fs - {t_anchor})
        fresh_h = sorted(host_edge - {host_anchor})
        mapping[t_anchor] = host_anchor
        used.add(host_anchor)
        for tv, hv in zip(fresh_t, fresh_h):
            mapping[tv] = hv
            used.add(hv)

    for v in sorted(T.vertices):
        if v not in mapping:
            host = next(w for w in core.vertices if w not in used)
            mapping[v] = host
            used.add(host)
    emb = Embedding(mapping)
    emb.verify(T, H)
    return emb


# -- fiber bundles ---------------------------------------------------------------


@dataclass(frozen=True)
class FiberBundle:
    """Base hypergraph, fiber vertex set, and a fiber hypergraph (a family
    of fiber subsets, each of size ``r_fiber``) over each base vertex."""

    base: Hypergraph
    fiber: tuple
    fibers: dict
    r_fiber: int

    def section(self, X: Iterable) -> Hypergraph:
        """Intersection of the fibers over X, as a hypergraph on the fiber
        set.  The empty section is deliberately an error: the vacuous
        all-subsets convention would silently satisfy every downstream
        containment check."""
        xs = sorted(set(X))
        if not xs:
            raise HypergraphError("section over an empty base set")
        for x in xs:
            if x not in self.fibers:
                raise HypergraphError(f"unknown base vertex {x!r}")
        common = set(self.fibers[xs[0]])
        for x in xs[1:]:
            common &= self.fibers[x]
        return Hypergraph(self.r_fiber, self.fiber, [tuple(sorted(fs)) for fs in common])


def section(bundle: FiberBundle, X: Iterable) -> Hypergraph:
    return bundle.section(X)


@dataclass(frozen=True)
class BundleSearch:
    status: str
    bundle: FiberBundle | None


def t_bundle(H: Hypergraph, T: Hypergraph, budget: int | NodeBudget | None = None) -> BundleSearch:
    """The T-bundle of H: base edges are the |V(T)|-subsets of V(H) whose
    induced subhypergraph contains a copy of T; the fiber over b collects
    the (r-1)-sets completing b to an edge of H."""
    if not T.vertices:
        raise HypergraphError("T-bundle needs a nonempty pattern")
    nb = as_budget(budget)
    k = len(T.vertices)
    base_edges = []
    if k <= len(H.vertices):
        total = 0
        for combo in itertools.combinations(sorted(H.vertices), k):
            total += 1
            if not nb.tick():
                return BundleSearch("budget", None)
            sub = H.induced(combo)
            res = contains_copy(sub, T, nb)
            if res.status == "budget":
                return BundleSearch("budget", None)
            if res.status == "found":
                base_edges.append(combo)
    base = (
        Hypergraph(k, H.vertices, base_edges)
        if k >= 2
        else _unary_base(H.vertices, base_edges)
    )
    fibers = {
        v: frozenset(fs - {v} for fs in H.edge_sets if v in fs) for v in H.vertices
    }
    return BundleSearch("found", FiberBundle(base, tuple(H.vertices), fibers, H.r - 1))


@dataclass(frozen=True)
class _UnaryBase:
    """Degenerate 1-uniform base (|V(T)| = 1): every vertex set hosting the
    one-vertex pattern."""

    vertices: tuple
    edges: tuple

    @property
    def r(self):
        return 1

    @property
    def edge_sets(self):
        return tuple(frozenset(e) for e in self.edges)


def _unary_base(vertices, base_edges):
    return _UnaryBase(tuple(vertices), tuple(tuple(e) for e in base_edges))


@dataclass(frozen=True)
class CompletePartiteSpec:
    """Complete multipartite containment target: ``parts`` disjoint classes
    of ``part_size`` vertices with every transversal present as an edge."""

    parts: int
    part_size: int

    def __post_init__(self):
        if self.parts < 1 or self.part_size < 1:
            raise ValueError("parts and part_size must be positive")


@dataclass(frozen=True)
class PartiteSearch:
    status: str
    parts: tuple | None

    @property
    def found(self) -> bool:
        return self.status == "found"


def contains_complete_partite(
    S: Hypergraph,
    spec: CompletePartiteSpec,
    forbidden: Iterable = (),
    budget: int | NodeBudget | None = None,
) -> PartiteSearch:
    """Backtracking search for a complete (parts)-partite system inside S,
    avoiding ``forbidden`` vertices.  Partial transversals must extend to
    edges; full transversals must be edges."""
    if spec.parts != S.r:
        raise HypergraphError(f"spec has {spec.parts} parts but S is {S.r}-uniform")
    return _partite_search(
        S.edge_sets, sorted(set(S.vertices) - set(forbidden)), spec, as_budget(budget)
    )


def _partite_search(edge_sets, allowed_vertices, spec, nb) -> PartiteSearch:
    s = spec.part_size
    need_deg = s ** (spec.parts - 1)
    edges = set(edge_sets)
    degree: dict = {}
    for fs in edges:
        for v in fs:
            degree[v] = degree.get(v, 0) + 1
    candidates = [v for v in allowed_vertices if degree.get(v, 0) >= need_deg]
    covered_subsets: set = set()
    for fs in edges:
        members = sorted(fs)
        for size in range(1, len(members) + 1):
            for sub in itertools.combinations(members, size):
                covered_subsets.add(frozenset(sub))
    parts: list[list] = [[] for _ in range(spec.parts)]
    out = {"budget": False}

    def extendable(j: int, v) -> bool:
        # every transversal of the filled parts 0..j-1 plus v must be
        # covered by an edge (j+1 < parts) or be an edge (last part)
        pools = [parts[i] for i in range(j)]
        for pick in itertools.product(*pools):
            tup = frozenset(pick) | {v}
            if j == spec.parts - 1:
                if tup not in edges:
                    return False
            elif tup not in covered_subsets:
                return False
        return True

    def fill(j: int, pos: int, start: int):
        if out["budget"]:
            return False
        if j == spec.parts:
            return True
        if pos == s:
            return fill(j + 1, 0, 0)
        for ci in range(start, len(candidates)):
            v = candidates[ci]
            if any(v in p for p in parts):
                continue
            if not nb.tick():
                out["budget"] = True
                return False
            if extendable(j, v):
                parts[j].append(v)
                if fill(j, pos + 1, ci + 1):
                    return True
                parts[j].pop()
        return False

    if fill(0, 0, 0):
        return PartiteSearch("found", tuple(tuple(p) for p in parts))
    return PartiteSearch("budget" if out["budget"] else "none", None)


@dataclass(frozen=True)
class DimResult:
    status: str
    matching: tuple | None


def dim_at_least(
    bundle: FiberBundle,
    spec: CompletePartiteSpec,
    t: int,
    budget: int | NodeBudget | None = None,
) -> DimResult:
    """Witness t pairwise disjoint base edges such that the section of
    EVERY transversal contains the complete partite target.  The universal
    quantifier is verified exhaustively; sampling would make the witness
    unsound."""
    nb = as_budget(budget)
    try:
        matching = next(iter_dim_matchings(bundle, spec, t, nb), None)
    except _DimBudget:
        return DimResult("budget", None)
    if matching is not None:
        return DimResult("found", matching)
    return DimResult("budget" if nb.exhausted else "none", None)


class _DimBudget(Exception):
    pass


def iter_dim_matchings(
    bundle: FiberBundle, spec: CompletePartiteSpec, t: int, nb: NodeBudget
) -> Iterator[tuple]:
    """Verified dim witnesses in canonical order (empty matching at t=0)."""
    if t == 0:
        yield ()
        return
    fiber_ok: dict = {}

    def vertex_ok(x) -> bool:
        if x not in fiber_ok:
            edge_sets = tuple(bundle.fibers[x])
            res = _partite_search(edge_sets, sorted(bundle.fiber), spec, nb)
            if res.status == "budget":
                raise _DimBudget
            fiber_ok[x] = res.found
        return fiber_ok[x]

    usable = []
    for e in sorted(bundle.base.edge_sets, key=sorted):
        if all(vertex_ok(x) for x in sorted(e)):
            usable.append(e)

    def transversals_rich(chosen: list) -> bool:
        for pick in itertools.product(*(sorted(e) for e in chosen)):
            if not nb.tick():
                raise _DimBudget
            common = set(bundle.fibers[pick[0]])
            for x in pick[1:]:
                common &= bundle.fibers[x]
            res = _partite_search(tuple(common), sorted(bundle.fiber), spec, nb)
            if res.status == "budget":
                raise _DimBudget
            if not res.found:
                return False
        return True

    def pick_edges(start: int, chosen: list) -> Iterator[tuple]:
        if len(chosen) == t:
            if transversals_rich(chosen):
                yield tuple(tuple(sorted(e)) for e in chosen)
            return
        for i in range(start, len(usable)):
            e = usable[i]
            if not nb.tick():
                raise _DimBudget
            if any(e & other for other in chosen):
                continue
            chosen.append(e)
            yield from pick_edges(i + 1, chosen)
            chosen.pop()

    yield from pick_edges(0, [])


# -- color or embed -------------------------------------------------------------


@dataclass
class ColorOrEmbed:
    """Either a verified embedding of the pattern or a proper coloring of
    the host with the combined bundle bound recorded."""

    kind: str
    embedding: Embedding | None = None
    coloring: Coloring | None = None
    colors: int | None = None
    chi_base: int | None = None
    class_bound: int | None = None
    t: int = 0
    part_size: int = 0
    part_size_clamped: bool = False
    notes: list = field(default_factory=list)


def color_or_embed(
    H: Hypergraph,
    G: Hypergraph,
    w: PartitionWitness,
    part_size_cap: int = 3,
    budget: int | NodeBudget | None = None,
) -> ColorOrEmbed:
    """Find a copy of a strong unifoliate G in H through its part-1-forest
    bundle, or produce a proper coloring of H with at most
    (|V(T)| + 1) * chi(base) colors.

    The nominal part size (r m)^m is clamped to a desk-scale cap but never
    below the largest shadow-component part, and the clamp is recorded.
    Whenever the dimension witness exists but desk-scale collisions starve
    a shadow component of fresh complete-partite vertices, further
    matchings are tried before falling back to the coloring branch, which
    is sound unconditionally."""
    strong = check_strong_witness(G, w)
    if not strong.ok:
        raise WitnessError("pattern witness fails the strong condition")
    nb = as_budget(budget)
    r = G.r
    m = len(G.vertices)
    v1 = w.v1()

    if not v1:
        # empty part 1 forces an edgeless pattern; embed freely if it fits
        if not G.edges and len(G.vertices) <= len(H.vertices):
            mapping = dict(zip(sorted(G.vertices), sorted(H.vertices)))
            emb = Embedding(mapping)
            emb.verify(G, H)
            return ColorOrEmbed("embedding", embedding=emb, t=0, part_size=0)
        return _direct_coloring(H, nb, "empty part 1: direct coloring, no bundle bound")

    T = G.induced(sorted(v1))
    trees = sorted(T.components(), key=min)
    t = len(trees)
    sh = shadow(G, w)
    need = 1
    for comp in sh.components:
        for j in range(1, r):
            need = max(need, len(comp & frozenset(w.parts[j])))
    nominal = (r * m) ** m
    part_size = max(need, min(nominal, part_size_cap))
    spec = CompletePartiteSpec(r - 1, part_size)

    bres = t_bundle(H, T, nb)
    if bres.status == "budget":
        out = ColorOrEmbed("budget", t=t, part_size=part_size)
        out.notes.append("bundle base enumeration ran out of budget")
        return out
    bundle = bres.bundle
    meta = dict(t=t, part_size=part_size, part_size_clamped=nominal > part_size)

    dim_exhausted = False
    try:
        for matching in iter_dim_matchings(bundle, spec, t, nb):
            emb = _assemble_embedding(H, G, w, bundle, matching, trees, sh, spec, nb)
            if emb is not None:
                return ColorOrEmbed("embedding", embedding=emb, **meta)
    except _DimBudget:
        dim_exhausted = True

    if len(v1) == 1:
        # a one-vertex forest makes the base 1-uniform, where the combined
        # bound degenerates; color the host directly instead
        out = _direct_coloring(H, nb, "one-vertex part 1: direct coloring, no bundle bound")
    else:
        out = _coloring_branch(H, bundle, len(v1), nb)
    out.t, out.part_size = t, part_size
    out.part_size_clamped = nominal > part_size
    if dim_exhausted:
        out.notes.append("dimension search ran out of budget before a verdict")
    return out


def _direct_coloring(H, nb, note):
    res = chromatic_number(H, budget=nb)
    coloring = res.coloring if res.coloring is not None else greedy_color(H, sorted(H.vertices))
    out = ColorOrEmbed("coloring", coloring=coloring, colors=coloring.colors_used)
    out.notes.append(note)
    return out


def _assemble_embedding(H, G, w, bundle, matching, trees, sh, spec, nb):
    """Build the copy of G from a dim witness: hypertrees into matching
    edges, shadow components into complete partite systems inside the
    sections of their representatives, leftovers placed freely.  Returns
    None when desk-scale vertex collisions block a component."""
    r = G.r
    mapping: dict = {}
    used: set = set()
    for tree, base_edge in zip(trees, matching):
        sub = H.induced(base_edge)
        res = contains_copy(sub, G.induced(sorted(tree)), nb)
        if res.status != "found":
            return None
        mapping.update(res.embedding.mapping)
        used.update(res.embedding.mapping.values())

    tree_list = trees
    for ci, comp in enumerate(sh.components):
        nbhd = v1_neighborhood(G, w, ci, sh)
        reps = []
        for tree in tree_list:
            inter = sorted(nbhd & tree)
            reps.append(inter[0] if inter else min(tree))
        host_reps = sorted({mapping[x] for x in reps})
        sec_edges = set(bundle.fibers[host_reps[0]])
        for x in host_reps[1:]:
            sec_edges &= bundle.fibers[x]
        res = _partite_search(tuple(sec_edges), sorted(set(bundle.fiber) - used), spec, nb)
        if res.status != "found":
            return None
        for j in range(1, r):
            part_members = sorted(comp & frozenset(w.parts[j]))
            hosts = sorted(res.parts[j - 1])
            for gv, hv in zip(part_members, hosts):
                mapping[gv] = hv
                used.add(hv)

    free = [v for v in sorted(G.vertices) if v not in mapping]
    pool = [v for v in sorted(H.vertices) if v not in used]
    if len(free) > len(pool):
        return None
    for gv, hv in zip(free, pool):
        mapping[gv] = hv
        used.add(hv)

    emb = Embedding(mapping)
    try:
        emb.verify(G, H)
    except HypergraphError:
        return None
    return emb


def _coloring_branch(H, bundle, d_level, nb):
    """Color the base exactly (greedy on budget exhaustion), then each base
    color class by its degeneracy certificate at level |V(T)|.  The bound
    (d_level + 1) * chi(base) holds unconditionally: a non-degenerate class
    would contain a forest copy, hence a monochromatic base edge."""
    base = bundle.base
    chi = chromatic_number(base, budget=nb)
    if chi.status == "budget":
        base_col = chi.coloring if chi.coloring is not None else greedy_color(base, sorted(base.vertices))
        note = "base colored greedily after budget exhaustion"
    else:
        base_col = chi.coloring
        note = None
    chi_base = base_col.colors_used
    combined: dict = {}
    per_class_bound = d_level + 1
    for c in sorted(set(base_col.assignment.values())):
        members = sorted(v for v in H.vertices if base_col.assignment[v] == c)
        sub = H.induced(members)
        cert = is_d_degenerate(sub, d_level)
        if cert is None:
            raise AssertionError(
                "a base color class is non-degenerate: it must contain a base edge"
            )
        cls_col = degeneracy_color(sub, cert)
        for v in members:
            combined[v] = (c - 1) * per_class_bound + cls_col.assignment[v]
    coloring = Coloring(combined)
    if not coloring.is_proper(H):
        raise AssertionError("combined bundle coloring is not proper")
    out = ColorOrEmbed(
        "coloring",
        coloring=coloring,
        colors=coloring.colors_used,
        chi_base=chi_base,
        class_bound=per_class_bound,
    )
    if coloring.colors_used > chi_base * per_class_bound:
        raise AssertionError("combined coloring exceeds the bundle bound")
    if note:
        out.notes.append(note)
    return out


__all__ = [
    "BundleSearch",
    "ColorOrEmbed",
    "CompletePartiteSpec",
    "CopySearch",
    "DegeneracyCertificate",
    "DimResult",
    "Embedding",
    "FiberBundle",
    "PartiteSearch",
    "color_or_embed",
    "contains_complete_partite",
    "contains_copy",
    "degeneracy_color",
    "dim_at_least",
    "embed_linear_hyperforest",
    "is_d_degenerate",
    "iter_dim_matchings",
    "section",
    "t_bundle",
]
