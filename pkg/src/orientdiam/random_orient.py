"""Uniform random orientations and the minimum-degree sufficiency threshold.

Orienting every edge independently by a fair coin, the ordered pair (x, y)
lacks a directed 2-path with probability (3/4)**codegree(x, y).  Summing over
ordered pairs gives the exact expected number of such pairs; once the minimum
degree reaches n/2 + ln n / ln(4/3) that sum is at most 1, so an orientation
of diameter two exists and random sampling finds one quickly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from orientdiam._parallel import chunk_ranges, ordered_map, rng_for
from orientdiam.graph import Graph, min_degree, underlying_diameter
from orientdiam.orientation import Orientation, check_diameter_two, diameter, format_distance, x_count

LN_4_3 = math.log(4 / 3)
DEFAULT_MAX_ATTEMPTS = 64


def random_orientation(g: Graph, seed: int | np.random.Generator) -> Orientation:
    """One fair bit per edge, consumed in canonical edge order."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=g.m, dtype=np.uint8)
    return Orientation.from_bits(g, bits.tolist())


def expected_violations(g: Graph) -> float:
    """Exact E[X] under the uniform random orientation: sum of (3/4)**codegree over ordered pairs."""
    adj = g.adj
    terms = [
        0.75 ** (adj[x] & adj[y]).bit_count()
        for x in range(g.n)
        for y in range(x + 1, g.n)
    ]
    return 2.0 * math.fsum(terms)


def codegree_floor(g: Graph) -> int:
    """Smallest codegree over pairs of distinct vertices (0 when n < 2)."""
    adj = g.adj
    return min(
        ((adj[x] & adj[y]).bit_count() for x in range(g.n) for y in range(x + 1, g.n)),
        default=0,
    )


@dataclass(frozen=True)
class ThresholdReport:
    n: int
    f_n: float
    sufficient_threshold: float
    mu_bound: float
    hypothesis_met: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "f_n": self.f_n,
            "threshold": self.sufficient_threshold,
            "mu_bound": self.mu_bound,
            "hypothesis_met": self.hypothesis_met,
        }


def mu_upper_bound(n: int, f: float) -> float:
    """n**2 * (3/4)**(2f): the bound on E[X] when every codegree is at least 2f."""
    return n * n * 0.75 ** (2 * f)


def sufficient_threshold(n: int, g: Optional[Graph] = None) -> ThresholdReport:
    if n < 1:
        raise ValueError("n must be positive")
    f_n = math.log(n) / LN_4_3
    threshold = n / 2 + f_n
    met = None if g is None else min_degree(g) >= threshold
    return ThresholdReport(n, f_n, threshold, mu_upper_bound(n, f_n), met)


@dataclass
class LasVegasOutcome:
    status: str  # "found" | "impossible" | "exhausted"
    attempts_used: int
    seed: int
    orientation: Optional[Orientation] = None
    reason: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_dict(self) -> dict:
        out = {"result": self.status, "attempts": self.attempts_used, "seed": self.seed}
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def _attempt(args: tuple[Graph, int, int]) -> Optional[list[int]]:
    g, seed, index = args
    d = random_orientation(g, rng_for(seed, index))
    return d.bits() if check_diameter_two(d) else None


def las_vegas_orient(
    g: Graph,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    seed: int = 0,
    workers: int = 1,
) -> LasVegasOutcome:
    """Sample, verify, repeat.  Attempt ``i`` uses the stream ``(seed, i)``.

    Attempts run in batches of ``workers``; the lowest successful index wins,
    so the outcome matches a serial run exactly.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be at least 1")
    diam = underlying_diameter(g)
    if diam > 2:
        return LasVegasOutcome(
            "impossible", 0, seed,
            reason=f"underlying diameter is {format_distance(diam)}",
        )
    batch = max(1, workers)
    for start in range(0, max_attempts, batch):
        indices = range(start, min(start + batch, max_attempts))
        for index, bits in zip(indices, ordered_map(_attempt, [(g, seed, i) for i in indices], workers)):
            if bits is not None:
                d = Orientation.from_bits(g, bits)
                # independent re-check through BFS distances
                assert diameter(d) <= 2
                return LasVegasOutcome("found", index + 1, seed, orientation=d)
    return LasVegasOutcome("exhausted", max_attempts, seed)


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    seed: int
    successes: int
    x_positive: int
    sum_x: int
    sum_x2: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def mean_x(self) -> float:
        return self.sum_x / self.trials

    @property
    def stderr_x(self) -> float:
        if self.trials < 2:
            return 0.0
        t = self.trials
        var = (self.sum_x2 - self.sum_x * self.sum_x / t) / (t - 1)
        return math.sqrt(max(var, 0.0) / t)

    @property
    def p_x_positive(self) -> float:
        return self.x_positive / self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "success_rate": self.success_rate,
            "mean_X": self.mean_x,
            "stderr_X": self.stderr_x,
            "p_X_positive": self.p_x_positive,
        }


def _mc_chunk(args: tuple[Graph, int, int, int]) -> tuple[int, int, int, int]:
    g, seed, start, stop = args
    successes = positive = sx = sx2 = 0
    for i in range(start, stop):
        d = random_orientation(g, rng_for(seed, i))
        x = x_count(d)
        sx += x
        sx2 += x * x
        positive += x > 0
        successes += check_diameter_two(d)
    return successes, positive, sx, sx2


def monte_carlo(g: Graph, trials: int, seed: int = 0, workers: int = 1) -> MonteCarloResult:
    """Trial ``i`` uses stream ``(seed, i)``; integer tallies make the result worker-independent."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tasks = [(g, seed, a, b) for a, b in chunk_ranges(trials, max(1, workers))]
    totals = [0, 0, 0, 0]
    for part in ordered_map(_mc_chunk, tasks, workers):
        totals = [t + p for t, p in zip(totals, part)]
    successes, positive, sx, sx2 = totals
    return MonteCarloResult(trials, seed, successes, positive, sx, sx2)


def orientation_report(g: Graph, outcome: LasVegasOutcome) -> dict:
    """JSON payload for a Las Vegas run."""
    th = sufficient_threshold(g.n, g)
    return {
        "n": g.n,
        "m": g.m,
        "min_degree": min_degree(g),
        "threshold": th.sufficient_threshold,
        "f_n": th.f_n,
        "hypothesis_met": th.hypothesis_met,
        "mu": expected_violations(g),
        "mu_bound": th.mu_bound,
        **outcome.to_dict(),
    }


def _lv_task(args) -> dict:
    g, max_attempts, seed = args
    return las_vegas_orient(g, max_attempts, seed).to_dict()


def las_vegas_runs(g: Graph, seeds, max_attempts: int = 1, workers: int = 1) -> list[dict]:
    """Independent Las Vegas runs, one per seed, reported as dicts in seed order."""
    return list(ordered_map(_lv_task, [(g, max_attempts, s) for s in seeds], workers))
