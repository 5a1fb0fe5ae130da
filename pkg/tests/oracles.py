"""Independent brute-force oracles.

Everything here recomputes expected values by direct enumeration or closed
form, sharing no search code with the implementations under test.
"""

import itertools
import math

from scipy.special import betainc

from unifoliate.hypercore import Cycle, Hypergraph


def naive_cycles(H: Hypergraph) -> set:
    """All cycles by full enumeration: ordered tuples of distinct edges,
    spine vertices drawn from consecutive intersections, all distinct.
    Returned as canonical Cycle values."""
    out = set()
    edges = list(H.edges)
    for t in range(2, len(edges) + 1):
        for tup in itertools.permutations(range(len(edges)), t):
            sets = [set(edges[i]) for i in tup]
            pools = []
            feasible = True
            for i in range(t):
                inter = sets[i - 1] & sets[i]
                if not inter:
                    feasible = False
                    break
                pools.append(sorted(inter))
            if not feasible:
                continue
            for spine in itertools.product(*pools):
                if len(set(spine)) != t:
                    continue
                # spine[i] lies in edges i-1 and i, so the pair
                # {spine[i], spine[i+1]} sits inside edge i as required
                es = tuple(edges[i] for i in tup)
                out.add(Cycle.canonical(tuple(spine), es))
    return out


def cycle_edge_sets(H: Hypergraph) -> set:
    """Edge sets (as frozensets of frozensets) supporting at least one cycle."""
    return {frozenset(frozenset(e) for e in c.edges) for c in naive_cycles(H)}


def _components_of(vertices, edges_inside):
    parent = {v: v for v in vertices}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in edges_inside:
        vs = sorted(e)
        for v in vs[1:]:
            ra, rb = find(vs[0]), find(v)
            if ra != rb:
                parent[rb] = ra
    return find


def oracle_unifoliate_flags(F: Hypergraph):
    """(is_unifoliate, is_strong_unifoliate) by full enumeration of all r^n
    ordered partitions with direct condition checks over naive cycles."""
    r = F.r
    verts = list(F.vertices)
    n = len(verts)
    cyc_sets = cycle_edge_sets(F)
    edge_sets = [frozenset(e) for e in F.edges]
    found_unifoliate = False
    for assignment in itertools.product(range(r), repeat=n):
        part_of = dict(zip(verts, assignment))
        v1 = frozenset(v for v in verts if part_of[v] == 0)
        ok = True
        for fs in edge_sets:
            if fs <= v1:
                continue
            if sorted(part_of[v] for v in fs) != list(range(r)):
                ok = False
                break
        if not ok:
            continue
        inside = [fs for fs in edge_sets if fs <= v1]
        find = _components_of(v1, inside)
        for cyc in cyc_sets:
            k_inside = sum(1 for fs in cyc if fs <= v1)
            if k_inside == len(cyc):
                ok = False
                break
            if k_inside == 1:
                used = set()
                for fs in cyc:
                    used |= fs & v1
                if len({find(x) for x in used}) <= 1:
                    ok = False
                    break
        if not ok:
            continue
        found_unifoliate = True
        # strong: reachability over cross-edges linked outside part 1
        cross = [fs for fs in edge_sets if not fs <= v1]
        kc = len(cross)
        reach = [[i == j or bool((cross[i] & cross[j]) - v1) for j in range(kc)] for i in range(kc)]
        for mid in range(kc):
            for i in range(kc):
                for j in range(kc):
                    if reach[i][mid] and reach[mid][j]:
                        reach[i][j] = True
        strong = True
        for i in range(kc):
            for j in range(kc):
                if not reach[i][j]:
                    continue
                xs = cross[i] & v1
                ys = cross[j] & v1
                for x in xs:
                    for y in ys:
                        if x != y and find(x) == find(y):
                            strong = False
        if strong:
            return True, True
    return found_unifoliate, False


def exhaustive_copy(H: Hypergraph, F: Hypergraph) -> bool:
    """Subhypergraph containment by enumerating every injection."""
    fv = sorted(F.vertices)
    if len(fv) > len(H.vertices):
        return False
    f_edges = [frozenset(e) for e in F.edges]
    for image in itertools.permutations(sorted(H.vertices), len(fv)):
        phi = dict(zip(fv, image))
        if all(H.has_edge(frozenset(phi[v] for v in fs)) for fs in f_edges):
            return True
    return False


def cap_area_exact(d: int, radius: float) -> float:
    """Closed-form normalized cap area via the regularized incomplete beta
    function, for a cap of chordal radius ``radius`` on the d-sphere."""
    cosphi = 1.0 - radius * radius / 2.0
    cosphi = min(1.0, max(-1.0, cosphi))
    sin2 = 1.0 - cosphi * cosphi
    half = 0.5 * betainc(d / 2.0, 0.5, sin2)
    return half if cosphi >= 0 else 1.0 - half


def max_matching_size(edge_sets) -> int:
    """Maximum matching in an arbitrary hypergraph by branch and bound."""
    edges = sorted(edge_sets, key=sorted)

    def rec(i, used, count):
        if i == len(edges):
            return count
        best = rec(i + 1, used, count)
        if not edges[i] & used:
            best = max(best, rec(i + 1, used | edges[i], count + 1))
        return best

    return rec(0, frozenset(), 0)


def alpha_exhaustive(H: Hypergraph) -> int:
    """Independence number by subset enumeration."""
    verts = list(H.vertices)
    edge_sets = [frozenset(e) for e in H.edges]
    best = 0
    for size in range(len(verts), -1, -1):
        for combo in itertools.combinations(verts, size):
            xs = frozenset(combo)
            if all(not fs <= xs for fs in edge_sets):
                return size
    return best
