"""Unit-sphere sampling, chordal distances, and the geometric verifiers.

Points live in real (d+1)-space on the d-sphere.  "Evenly distributed"
point sets are realized as seeded uniform samples (normalized Gaussians),
which satisfy every property the constructions need at desk scale.
Strict inequalities in the lemma verifiers carry a 1e-9 slack to absorb
floating-point error at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SLACK = 1e-9
SQRT2 = math.sqrt(2.0)


class InfeasibleParamsError(ValueError):
    """Parameter selection cannot satisfy its constraints on the grid."""


@dataclass(frozen=True, eq=False)
class SphereSample:
    """Indexed unit vectors on the d-sphere with seed provenance."""

    d: int
    points: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.d + 1:
            raise ValueError(f"points must have shape (n, {self.d + 1})")
        norms = np.linalg.norm(pts, axis=1)
        if not np.all(np.abs(norms - 1.0) <= 1e-9):
            raise ValueError("every sample point must have unit norm within 1e-9")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def point(self, i: int) -> np.ndarray:
        return self.points[i]

    def distance_matrix(self) -> np.ndarray:
        g = self.points @ self.points.T
        return np.sqrt(np.maximum(2.0 - 2.0 * np.clip(g, -1.0, 1.0), 0.0))


def sample_points(n: int, d: int, seed: int | None = 0) -> SphereSample:
    """n i.i.d. uniform points on the d-sphere, deterministic per seed."""
    if n < 1:
        raise ValueError("need at least one point")
    if d < 1:
        raise ValueError("sphere dimension must be at least 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d + 1))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):
        bad = norms == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), d + 1))
        norms = np.linalg.norm(g, axis=1)
    return SphereSample(d, g / norms[:, None], seed)


def dist(p, q) -> float:
    """Euclidean (chordal) distance."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(np.linalg.norm(p - q))


def verify_near_or_far(x, y, z, a: float) -> bool:
    """Conclusion of the near-or-far propagation: dist(x, z) < 4*sqrt(a) or
    dist(x, z) > 2 - 4*sqrt(a).  Callers filter inputs by the hypotheses
    (x,y and y,z each at distance < a or > 2-a)."""
    if not 0.0 < a < 0.1:
        raise ValueError(f"scale a must lie in (0, 1/10), got {a}")
    bound = 4.0 * math.sqrt(a)
    rho = dist(x, z)
    return rho < bound + SLACK or rho > 2.0 - bound - SLACK


def near_or_far_margin(x, y, z, a: float) -> float:
    """Signed margin of the conclusion; positive means satisfied strictly."""
    bound = 4.0 * math.sqrt(a)
    rho = dist(x, z)
    return max(bound - rho, rho - (2.0 - bound))


def point_at_chord(p, chord: float, rng: np.random.Generator) -> np.ndarray:
    """A point at the exact chordal distance ``chord`` from p, direction
    drawn from rng.  Used to manufacture hypothesis-satisfying inputs."""
    p = np.asarray(p, dtype=float)
    if not 0.0 <= chord <= 2.0:
        raise ValueError("chordal distance must lie in [0, 2]")
    cosphi = 1.0 - chord * chord / 2.0
    sinphi = math.sqrt(max(1.0 - cosphi * cosphi, 0.0))
    while True:
        g = rng.standard_normal(p.shape[0])
        t = g - np.dot(g, p) * p
        nt = np.linalg.norm(t)
        if nt > 1e-12:
            break
    u = t / nt
    q = cosphi * p + sinphi * u
    return q / np.linalg.norm(q)


def cap_measure(d: int, radius: float, samples: int, seed: int | None = 0) -> float:
    """Monte Carlo estimate of the normalized measure of a spherical cap of
    chordal radius ``radius``.  A point q is in the cap around the pole
    iff its first coordinate is at least 1 - radius^2 / 2."""
    if not 0.0 <= radius <= 2.0:
        raise ValueError("cap radius must lie in [0, 2]")
    if samples < 1:
        raise ValueError("need at least one sample")
    if d < 1:
        raise ValueError("sphere dimension must be at least 1")
    threshold = 1.0 - radius * radius / 2.0
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = samples
    chunk = 200_000
    while remaining > 0:
        m = min(chunk, remaining)
        g = rng.standard_normal((m, d + 1))
        norms = np.linalg.norm(g, axis=1)
        norms[norms == 0.0] = 1.0
        first = g[:, 0] / norms
        hits += int(np.count_nonzero(first >= threshold))
        remaining -= m
    return hits / samples


def _beta_grid():
    b = 0.1
    for _ in range(60):
        yield b
        b *= 0.5


@dataclass(frozen=True)
class BetaChoice:
    """A certified cap-radius shrink: the cap of chordal radius
    sqrt(2) - beta has estimated measure at least 1/2 - epsilon with the
    Monte Carlo margin already subtracted."""

    beta: float
    measure: float
    margin: float
    samples: int


def choose_beta(epsilon: float, d: int, samples: int = 200_000, seed: int | None = 0) -> BetaChoice:
    """Largest grid beta whose cap measure clears 1/2 - epsilon."""
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    target = 0.5 - epsilon
    for beta in _beta_grid():
        m = cap_measure(d, SQRT2 - beta, samples, seed)
        margin = 3.0 * math.sqrt(max(m * (1.0 - m), 1e-12) / samples)
        if m - margin >= target:
            return BetaChoice(beta, m, margin, samples)
    raise InfeasibleParamsError(
        "no grid beta certifies the cap measure; increase the sample count"
    )


def cap_diameter(radius: float) -> float:
    """Exact diameter of a cap of chordal radius R: the boundary chord
    2 R sqrt(1 - R^2/4) while the cap stays within a hemisphere, and 2
    beyond (the cap then contains antipodal pairs)."""
    if radius < 0.0:
        raise ValueError("radius must be nonnegative")
    if radius >= SQRT2:
        return 2.0
    return 2.0 * radius * math.sqrt(1.0 - radius * radius / 4.0)


@dataclass(frozen=True)
class GeoParams:
    """Geometric parameters of a construction run.

    ``theta_budget`` is 4^f * theta^(2^-f), the scale the distance
    propagation compounds to across f edge steps; strict constructions
    require it below 1/10 and below 2 minus the cap diameter."""

    beta: float
    theta: float
    f: int
    theta_budget: float
    epsilon: float | None = None

    def strict_ok(self) -> bool:
        return self.theta_budget < 0.1


def theta_budget(theta: float, f: int) -> float:
    """4^f * theta^(2^-f), evaluated in log space."""
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    if f < 0:
        raise ValueError("f must be nonnegative")
    log_b = f * math.log(4.0) + (2.0 ** (-f)) * math.log(theta)
    return math.exp(log_b)


def choose_theta(
    f: int,
    beta: float,
    d: int = 3,
    samples: int = 0,
    seed: int | None = 0,
) -> GeoParams:
    """Largest grid theta whose compounded budget stays under 1/10 and
    under 2 minus the exact cap diameter at radius sqrt(2) - beta.

    When ``samples`` is positive, a Monte Carlo cross-check draws that many
    cap points on the d-sphere and asserts their pairwise distances never
    exceed the closed-form diameter."""
    if f < 1:
        raise ValueError("f must be at least 1")
    if not 0.0 < beta < SQRT2:
        raise ValueError("beta must lie in (0, sqrt(2))")
    radius = SQRT2 - beta
    diam = cap_diameter(radius)
    ceiling = min(0.1, 2.0 - diam)
    log4 = math.log(4.0)
    scale = 2.0 ** (-f)
    log_theta = math.log(0.1)
    for _ in range(1100):
        log_b = f * log4 + scale * log_theta
        if log_b < math.log(ceiling) - SLACK:
            theta = math.exp(log_theta)
            if theta <= 0.0:
                break
            params = GeoParams(beta, theta, f, math.exp(log_b))
            if samples > 0:
                _check_cap_diameter(d, radius, diam, samples, seed)
            if not params.strict_ok():
                raise AssertionError("selected theta violates its own budget")
            return params
        log_theta -= math.log(2.0)
    raise InfeasibleParamsError(
        f"no representable grid theta satisfies the budget for f={f}, beta={beta}"
    )


def _check_cap_diameter(d, radius, diam, samples, seed):
    rng = np.random.default_rng(seed)
    threshold = 1.0 - radius * radius / 2.0
    kept = []
    tries = 0
    while len(kept) < min(samples, 2000) and tries < 200:
        g = rng.standard_normal((samples, d + 1))
        g /= np.linalg.norm(g, axis=1)[:, None]
        kept.extend(g[g[:, 0] >= threshold])
        tries += 1
    pts = np.asarray(kept[: min(samples, 2000)])
    if len(pts) >= 2:
        gram = pts @ pts.T
        worst = float(np.sqrt(np.maximum(2.0 - 2.0 * gram, 0.0)).max())
        if worst > diam + 1e-9:
            raise AssertionError(f"sampled cap diameter {worst} exceeds closed form {diam}")


def theta_chain_margins(theta: float, f: int) -> list[tuple[int, float, float]]:
    """Log-scale sides of 4*sqrt(4^j theta^(2^-j)) <= 4^(j+1) theta^(2^-j-1)
    for j = 0..f; the inequality is what lets near-or-far propagation
    compound along an edge path."""
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    log4 = math.log(4.0)
    lt = math.log(theta)
    out = []
    for j in range(f + 1):
        lhs = (1.0 + j / 2.0) * log4 + (2.0 ** (-(j + 1))) * lt
        rhs = (j + 1.0) * log4 + (2.0 ** (-(j + 1))) * lt
        out.append((j, lhs, rhs))
    return out


__all__ = [
    "BetaChoice",
    "GeoParams",
    "InfeasibleParamsError",
    "SLACK",
    "SQRT2",
    "SphereSample",
    "cap_diameter",
    "cap_measure",
    "choose_beta",
    "choose_theta",
    "dist",
    "near_or_far_margin",
    "point_at_chord",
    "sample_points",
    "theta_budget",
    "theta_chain_margins",
    "verify_near_or_far",
]
