"""The layered geometric construction and its pipeline stages.

The pipeline builds, over a seeded sphere sample: a tuple hypergraph whose
edges are r-sets admitting a near-antipodal ordering against a bit-string
bipartite cover; a blowup into strong independent classes; seeded random
sparsening; deletion of every cycle spanning at most L vertices; and a
restriction to tuples with pairwise-close coordinates.  The output rides
as layer A of a four-layer hypergraph whose remaining layers C_1..C_{r-1}
and D carry a complete transversal block plus geometric cross-edges.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .budgets import BudgetExceededError, NodeBudget, as_budget
from .hypercore import Hypergraph, HypergraphError, iter_cycles
from .spheregeo import (
    GeoParams,
    InfeasibleParamsError,
    SQRT2,
    SphereSample,
    cap_diameter,
    choose_beta,
    choose_theta,
    sample_points,
    theta_budget,
)


def derive_seed(seed: int, component: str) -> int:
    """Stable per-component seed derived from the run seed."""
    digest = hashlib.sha256(f"{seed}:{component}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


@dataclass(frozen=True)
class BipartiteCover:
    """Complete bipartite graphs on positions 1..r whose union covers all
    pairs: position j carries the binary code of j-1, and graph i joins the
    positions whose i-th code bit (most significant first) differs."""

    ell: int
    graphs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def pairs(self, i: int) -> list[tuple[int, int]]:
        zeros, ones = self.graphs[i]
        return [(a, b) for a in zeros for b in ones]

    def covers_all_pairs(self, r: int) -> bool:
        covered = set()
        for i in range(self.ell):
            for a, b in self.pairs(i):
                covered.add(frozenset((a, b)))
        want = {frozenset(p) for p in itertools.combinations(range(1, r + 1), 2)}
        return want <= covered


def bipartite_cover(r: int) -> BipartiteCover:
    if r < 3:
        raise HypergraphError(f"the construction needs r >= 3, got {r}")
    ell = math.ceil(math.log2(r))
    graphs = []
    for i in range(ell):
        shift = ell - 1 - i
        zeros = tuple(j for j in range(1, r + 1) if not ((j - 1) >> shift) & 1)
        ones = tuple(j for j in range(1, r + 1) if ((j - 1) >> shift) & 1)
        graphs.append((zeros, ones))
    cover = BipartiteCover(ell, tuple(graphs))
    if not cover.covers_all_pairs(r):
        raise AssertionError("bit-string cover failed to cover all pairs")
    return cover


def _tuple_name(idx: tuple[int, ...]) -> str:
    return "t" + "_".join(str(i) for i in idx)


def build_h_prime(
    sample: SphereSample,
    r: int,
    theta: float,
    budget: int | NodeBudget | None = None,
) -> tuple[Hypergraph, dict]:
    """Tuple hypergraph: vertices are all ell-tuples of sample indices, and
    an r-set is an edge when some ordering puts every covered pair at
    chordal distance above 2 - theta in the matching coordinate.  Returns
    the hypergraph and the vertex -> tuple-of-point-indices geometry."""
    if theta <= 0.0:
        raise HypergraphError("theta must be positive")
    cover = bipartite_cover(r)
    ell = cover.ell
    npts = len(sample)
    n_vertices = npts**ell
    nb = as_budget(budget)
    candidates = comb(n_vertices, r)
    if candidates > nb.limit:
        raise BudgetExceededError(
            f"{candidates} candidate {r}-sets over {n_vertices} tuples exceed the "
            f"budget of {nb.limit}; shrink the sample"
        )
    tuples = list(itertools.product(range(npts), repeat=ell))
    names = [_tuple_name(t) for t in tuples]
    geometry = dict(zip(names, tuples))
    dmat = sample.distance_matrix()
    threshold = 2.0 - theta
    # crossing pairs as 0-based positions into a candidate ordering
    checks = [
        (i, a - 1, b - 1) for i in range(ell) for a, b in cover.pairs(i)
    ]
    edges = []
    for combo in itertools.combinations(range(n_vertices), r):
        nb.tick()
        coords = [tuples[v] for v in combo]
        for perm in itertools.permutations(range(r)):
            ok = True
            for i, a, b in checks:
                if dmat[coords[perm[a]][i], coords[perm[b]][i]] <= threshold:
                    ok = False
                    break
            if ok:
                edges.append(tuple(sorted(names[v] for v in combo)))
                break
    return Hypergraph(r, names, edges), geometry


def blowup(H: Hypergraph, b: int) -> tuple[Hypergraph, dict]:
    """Replace each vertex by b copies and each edge by all copy choices.
    Each origin class is a strong independent set of the result."""
    if b < 1:
        raise HypergraphError("blowup factor must be at least 1")
    origin = {}
    vertices = []
    for v in H.vertices:
        for j in range(b):
            name = f"{v}~{j}"
            vertices.append(name)
            origin[name] = v
    edges = []
    for e in H.edges:
        for choice in itertools.product(range(b), repeat=H.r):
            edges.append(tuple(sorted(f"{v}~{j}" for v, j in zip(e, choice))))
    return Hypergraph(H.r, vertices, edges), origin


def _edge_uniform(seed: int, edge: tuple) -> float:
    digest = hashlib.sha256(f"{seed}|{','.join(edge)}".encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def sparsen(H: Hypergraph, p: float, seed: int) -> Hypergraph:
    """Keep each edge independently with probability p.  Randomness is
    derived per edge from (seed, edge), so the result does not depend on
    evaluation order."""
    if not 0.0 <= p <= 1.0:
        raise HypergraphError("keep probability must lie in [0, 1]")
    kept = [e for e in H.edges if _edge_uniform(seed, e) < p]
    return Hypergraph(H.r, H.vertices, kept)


def delete_short_cycles(H: Hypergraph, L: int, budget: int | NodeBudget | None = None) -> Hypergraph:
    """Repeatedly find the first cycle (in canonical search order) whose
    edges span at most L vertices and delete its lexicographically last
    edge.  Afterwards every induced subhypergraph on at most L vertices is
    a linear hyperforest.

    Edge deletion never creates cycles, so once no spanning-bounded cycle
    starts at a given least vertex, that vertex never needs revisiting."""
    if L < 2:
        raise HypergraphError("span bound must be at least 2")
    nb = as_budget(budget if budget is not None else 50_000_000)
    current = H
    verts = sorted(H.vertices)
    deleted = 0
    idx = 0
    while idx < len(verts):
        cyc = _first_cycle_from(current, verts[idx], L, nb, deleted)
        if cyc is None:
            idx += 1
            continue
        current = current.without_edges([max(cyc.edges)])
        deleted += 1
    return current


def _first_cycle_from(H, start, max_span, nb, deleted):
    edge_sets = H.edge_sets
    edges = H.edges

    def walk(path_v, path_e, used_v, used_e, span):
        v = path_v[-1]
        for ei in H.incident_edges(v):
            if ei in used_e:
                continue
            if not nb.tick():
                raise BudgetExceededError(
                    f"cycle search budget exhausted after deleting {deleted} edges "
                    f"({len(H.edges)} remain)"
                )
            fs = edge_sets[ei]
            nspan = span | fs
            if len(nspan) > max_span:
                continue
            if len(path_v) >= 2 and start in fs:
                from .hypercore import Cycle

                return Cycle.canonical(
                    tuple(path_v), tuple(edges[i] for i in path_e) + (edges[ei],)
                )
            for w in sorted(fs):
                if w <= start or w in used_v:
                    continue
                path_v.append(w)
                path_e.append(ei)
                used_v.add(w)
                used_e.add(ei)
                found = walk(path_v, path_e, used_v, used_e, nspan)
                used_e.discard(ei)
                used_v.discard(w)
                path_e.pop()
                path_v.pop()
                if found is not None:
                    return found
        return None

    return walk([start], [], {start}, set(), frozenset([start]))


def restrict_v0(H: Hypergraph, geometry: dict, sample: SphereSample) -> Hypergraph:
    """Induced subhypergraph on the vertices whose tuple coordinates are
    pairwise within chordal distance sqrt(2).  After a blowup, pass the
    copies' origin geometry: all copies of a kept tuple are kept."""
    dmat = sample.distance_matrix()
    kept = []
    for v in H.vertices:
        if v not in geometry:
            raise HypergraphError(f"vertex {v!r} has no tuple geometry")
        idx = geometry[v]
        ok = all(
            dmat[idx[i], idx[j]] <= SQRT2
            for i in range(len(idx))
            for j in range(i + 1, len(idx))
        )
        if ok:
            kept.append(v)
    return H.induced(kept)


LAYER_A = "A"
LAYER_D = "D"


@dataclass
class LayeredHypergraph:
    """Four-layer construction output: the hypergraph, per-vertex layer
    labels (A, C1..C{r-1}, D), tuple geometry for layer A, point geometry
    for the C layers, and the parameter record."""

    graph: Hypergraph
    layers: dict
    a_geometry: dict
    a_points: np.ndarray
    c_points: dict
    params: dict

    def layer_vertices(self, label: str) -> list:
        return [v for v in self.graph.vertices if self.layers[v] == label]

    def edge_type(self, edge_set: frozenset) -> str:
        """"A" for edges inside layer A, "CD" for transversal C x D edges,
        "AC" for geometric cross edges, "invalid" otherwise."""
        labels = sorted(self.layers[v] for v in edge_set)
        r = self.graph.r
        c_labels = [f"C{i}" for i in range(1, r)]
        if labels == [LAYER_A] * r:
            return "A"
        if labels == sorted(c_labels + [LAYER_D]):
            return "CD"
        if labels == sorted(c_labels + [LAYER_A]):
            return "AC"
        return "invalid"

    def to_json_dict(self) -> dict:
        out = self.graph.to_json_dict()
        out["layers"] = dict(sorted(self.layers.items()))
        out["geometry"] = {
            "a_tuples": {v: list(t) for v, t in sorted(self.a_geometry.items())},
            "a_points": [[float(x) for x in row] for row in self.a_points],
            "c_points": {v: [float(x) for x in p] for v, p in sorted(self.c_points.items())},
        }
        out["params"] = self.params
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "LayeredHypergraph":
        graph = Hypergraph.from_json_dict(data)
        geo = data["geometry"]
        return cls(
            graph=graph,
            layers=dict(data["layers"]),
            a_geometry={v: tuple(t) for v, t in geo["a_tuples"].items()},
            a_points=np.asarray(geo["a_points"], dtype=float).reshape(
                len(geo["a_points"]), -1
            ),
            c_points={v: np.asarray(p, dtype=float) for v, p in geo["c_points"].items()},
            params=dict(data["params"]),
        )


def dump_layered(G: LayeredHypergraph) -> str:
    return json.dumps(G.to_json_dict(), sort_keys=True)


def load_layered(text: str) -> LayeredHypergraph:
    return LayeredHypergraph.from_json_dict(json.loads(text))


def build_g(
    F: Hypergraph,
    k: int,
    epsilon: float,
    n: int,
    seed: int,
    mode: str = "strict",
    *,
    blowup_factor: int = 2,
    sparsen_p: float = 1.0,
    sphere_points: int = 4,
    d: int = 3,
    beta: float | None = None,
    theta: float | None = None,
    beta_samples: int = 200_000,
    budget: int | NodeBudget | None = None,
) -> LayeredHypergraph:
    """Assemble the layered construction against a forbidden hypergraph F.

    Strict mode certifies beta from the cap measure and picks theta under
    both inequality constraints (and may leave layer A nearly edgeless at
    desk scale); relaxed mode takes beta and theta from the caller and
    records which strict preconditions fail."""
    r = F.r
    if r < 3:
        raise HypergraphError("construction requires r >= 3")
    if n % r != 0:
        raise HypergraphError(f"n = {n} must be divisible by r = {r}")
    if mode not in ("strict", "relaxed"):
        raise HypergraphError(f"unknown mode {mode!r}")
    L = len(F.vertices)
    f = len(F.edges)
    beta_measure = None
    if mode == "strict":
        if f < 1:
            raise InfeasibleParamsError(
                "strict mode needs a forbidden hypergraph with at least one edge; "
                "use relaxed mode"
            )
        try:
            bc = choose_beta(epsilon, d, beta_samples, derive_seed(seed, "beta"))
            params = choose_theta(f, bc.beta, d)
        except InfeasibleParamsError as exc:
            raise InfeasibleParamsError(f"{exc}; consider relaxed mode") from exc
        beta, theta = bc.beta, params.theta
        beta_measure = bc.measure
    else:
        if beta is None or theta is None:
            raise HypergraphError("relaxed mode requires explicit beta and theta")
    geo = GeoParams(beta, theta, f, theta_budget(theta, f) if f >= 1 else theta, epsilon)

    sample = sample_points(sphere_points, d, derive_seed(seed, "sphere"))
    h_prime, geometry = build_h_prime(sample, r, theta, budget)
    h_blown, origin = blowup(h_prime, blowup_factor)
    blown_geometry = {v: geometry[origin[v]] for v in h_blown.vertices}
    h_sparse = sparsen(h_blown, sparsen_p, derive_seed(seed, "sparsen"))
    h_forest = delete_short_cycles(h_sparse, max(L, 2))
    h0 = restrict_v0(h_forest, blown_geometry, sample)

    per_layer = n // r
    c_names = {i: [f"c{i}_{j}" for j in range(per_layer)] for i in range(1, r)}
    d_names = [f"d_{j}" for j in range(per_layer)]
    c_samples = {
        i: sample_points(per_layer, d, derive_seed(seed, f"layer-c{i}")) for i in range(1, r)
    }

    vertices = list(h0.vertices)
    layers = {v: LAYER_A for v in vertices}
    for i in range(1, r):
        vertices.extend(c_names[i])
        layers.update({v: f"C{i}" for v in c_names[i]})
    vertices.extend(d_names)
    layers.update({v: LAYER_D for v in d_names})

    edges = list(h0.edges)
    for combo in itertools.product(*(c_names[i] for i in range(1, r))):
        for dv in d_names:
            edges.append(tuple(sorted(combo + (dv,))))

    # geometric cross edges: every tuple coordinate within sqrt(2) - beta
    # of every chosen C point; chordal distance < tau <=> inner product
    # above 1 - tau^2 / 2
    tau = SQRT2 - beta
    ip_threshold = 1.0 - tau * tau / 2.0
    close_by_layer = {
        i: (sample.points @ c_samples[i].points.T) > ip_threshold for i in range(1, r)
    }
    for v in h0.vertices:
        idx = blown_geometry[v]
        per_layer_ok = []
        for i in range(1, r):
            mask = np.logical_and.reduce([close_by_layer[i][j] for j in idx])
            per_layer_ok.append([c_names[i][x] for x in np.nonzero(mask)[0]])
        for combo in itertools.product(*per_layer_ok):
            edges.append(tuple(sorted((v,) + combo)))

    graph = Hypergraph(r, vertices, edges)
    cover = bipartite_cover(r)
    params_record = {
        "r": r,
        "n": n,
        "k": k,
        "epsilon": epsilon,
        "mode": mode,
        "seed": seed,
        "beta": beta,
        "theta": theta,
        "f": f,
        "L": L,
        "d": d,
        "ell": cover.ell,
        "blowup": blowup_factor,
        "sparsen_p": sparsen_p,
        "sphere_points": sphere_points,
        "theta_budget": geo.theta_budget,
        "theta_budget_ok": geo.strict_ok(),
        "cap_diameter": cap_diameter(tau),
        "eq1_ok": cap_diameter(tau) < 2.0 - geo.theta_budget,
        "beta_measure": beta_measure,
        "pipeline": {
            "h_prime_edges": len(h_prime.edges),
            "post_blowup_edges": len(h_blown.edges),
            "post_sparsen_edges": len(h_sparse.edges),
            "deleted_cycle_edges": len(h_sparse.edges) - len(h_forest.edges),
            "a_vertices": len(h0.vertices),
            "a_edges": len(h0.edges),
        },
    }
    return LayeredHypergraph(
        graph=graph,
        layers=layers,
        a_geometry={v: blown_geometry[v] for v in h0.vertices},
        a_points=sample.points,
        c_points={
            name: c_samples[i].points[j]
            for i in range(1, r)
            for j, name in enumerate(c_names[i])
        },
        params=params_record,
    )


def verify_construction(G: LayeredHypergraph, alpha_budget: int = 200_000) -> dict:
    """Measure the construction against its layer contracts: per-layer
    degree statistics, the exact transversal degree identity on layer D,
    the reference value (n / (r 2^ell))^(r-1), edge-type counts, and an
    independence bound on layer A.  Asymptotic bounds are reported as
    ratios, never asserted."""
    graph = G.graph
    r = graph.r
    n = G.params["n"]
    ell = G.params["ell"]
    per_layer = n // r
    layer_names = [LAYER_A] + [f"C{i}" for i in range(1, r)] + [LAYER_D]
    report: dict = {"layers": {}, "flags": {}}

    type_counts = {"A": 0, "CD": 0, "AC": 0, "invalid": 0}
    for fs in graph.edge_sets:
        type_counts[G.edge_type(fs)] += 1
    report["edge_types"] = type_counts
    report["flags"]["edge_types_valid"] = type_counts["invalid"] == 0
    report["flags"]["edge_types_sum"] = sum(type_counts.values()) == len(graph.edges)

    sizes_ok = True
    for label in layer_names:
        members = G.layer_vertices(label)
        degs = [graph.degree(v) for v in members]
        report["layers"][label] = {
            "size": len(members),
            "min_degree": min(degs) if degs else 0,
            "mean_degree": (sum(degs) / len(degs)) if degs else 0.0,
        }
        if label != LAYER_A and len(members) != per_layer:
            sizes_ok = False
    report["flags"]["layer_sizes_ok"] = sizes_ok

    expected_d = per_layer ** (r - 1)
    d_stats = report["layers"][LAYER_D]
    report["transversal_degree"] = expected_d
    report["flags"]["d_degree_exact"] = (
        d_stats["size"] > 0 and d_stats["min_degree"] == expected_d
        and all(graph.degree(v) == expected_d for v in G.layer_vertices(LAYER_D))
    )
    c_min = min(
        report["layers"][f"C{i}"]["min_degree"] for i in range(1, r)
    )
    report["flags"]["c_degree_at_least"] = c_min >= expected_d

    reference = (n / (r * 2**ell)) ** (r - 1)
    report["a_degree_reference"] = reference
    a_vertices = G.layer_vertices(LAYER_A)
    a_min = report["layers"][LAYER_A]["min_degree"]
    report["a_min_degree_ratio"] = (a_min / reference) if reference > 0 else None

    from .hypercore import independence_number

    if a_vertices:
        alpha = independence_number(graph.induced(a_vertices), alpha_budget)
        report["a_alpha"] = {
            "status": alpha.status,
            "value": alpha.value,
            "ratio": alpha.value / len(a_vertices),
        }
    else:
        report["a_alpha"] = {"status": "exact", "value": 0, "ratio": None}

    report["flags"]["theta_budget_ok"] = G.params["theta_budget_ok"]
    report["flags"]["eq1_ok"] = G.params["eq1_ok"]
    report["flags"]["strict_mode"] = G.params["mode"] == "strict"
    return report


__all__ = [
    "BipartiteCover",
    "LayeredHypergraph",
    "bipartite_cover",
    "blowup",
    "build_g",
    "build_h_prime",
    "delete_short_cycles",
    "derive_seed",
    "dump_layered",
    "load_layered",
    "restrict_v0",
    "sparsen",
    "verify_construction",
]
