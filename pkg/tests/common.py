"""Shared fixtures and small random generators for the test suite."""

import itertools
import random

from unifoliate.hypercore import Hypergraph


def fstar() -> Hypergraph:
    """The 8-vertex running example: one forest edge on a1 a2 a3 plus four
    cross-edges wiring a1, a2, a4 through the b/c columns."""
    return Hypergraph(
        3,
        ["a1", "a2", "a3", "a4", "b1", "b2", "c1", "c2"],
        [
            ("a1", "a2", "a3"),
            ("a1", "b1", "c1"),
            ("a2", "b2", "c2"),
            ("a4", "b1", "c2"),
            ("a4", "b2", "c1"),
        ],
    )


def complete3(n: int, prefix: str = "v") -> Hypergraph:
    vs = [f"{prefix}{i}" for i in range(n)]
    return Hypergraph(3, vs, itertools.combinations(vs, 3))


def k4() -> Hypergraph:
    return Hypergraph(
        3, ["1", "2", "3", "4"], [("1", "2", "3"), ("1", "2", "4"), ("1", "3", "4"), ("2", "3", "4")]
    )


def rand_hypergraph(rng: random.Random, n_max: int = 6, e_max: int = 5, r: int = 3,
                    n_min: int | None = None) -> Hypergraph:
    n = rng.randint(n_min if n_min is not None else r, n_max)
    vs = [f"v{i}" for i in range(n)]
    pool = list(itertools.combinations(vs, r))
    m = rng.randint(0, min(e_max, len(pool)))
    return Hypergraph(r, vs, rng.sample(pool, m))


def rand_linear_hyperforest(rng: random.Random, d: int, r: int = 3) -> Hypergraph:
    """Random linear hyperforest on exactly d vertices (d >= r or edgeless)."""
    from unifoliate.hypercore import is_hyperforest

    vs = [f"t{i}" for i in range(d)]
    if d < r:
        return Hypergraph(r, vs, [])
    edges: list = []
    pool = list(itertools.combinations(vs, r))
    rng.shuffle(pool)
    for cand in pool:
        trial = Hypergraph(r, vs, edges + [cand])
        if trial.is_linear() and is_hyperforest(trial):
            edges.append(cand)
            if rng.random() < 0.35:
                break
    return Hypergraph(r, vs, edges)
