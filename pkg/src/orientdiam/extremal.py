"""The graphs G_k: dense graphs with no orientation of diameter two.

Layout for N = C(3k, k):

    H1 = [0, N)            clique; vertex v_S = rank(S)
    H2 = [N, N + 3k)       clique
    H3 = [N + 3k, 2N + 3k) clique; vertex w_S = N + 3k + rank(S)

where S runs over the 2k-subsets of H2 and ``rank`` is the lexicographic rank
of the sorted element list.  v_S and w_S are joined to every vertex of S.

Any orientation has some H1 vertex v whose out-side (or in-side) inside H2
has at most k vertices; a 2k-subset S avoiding that side gives a pair
(v, w_S) or (w_S, v) at directed distance at least 3.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from orientdiam._parallel import chunk_ranges, ordered_map, rng_for
from orientdiam.graph import Graph, iter_bits, min_degree
from orientdiam.orientation import Orientation, check_diameter_two, directed_distance
from orientdiam.random_orient import random_orientation

DEFAULT_MAX_K = 4
LN_27_4 = math.log(27 / 4)
# n_k is evaluated as an exact integer up to this k, through log-gamma above it.
EXACT_K_LIMIT = 4096
CLOSE_CALL_RTOL = 1e-12


class InstanceTooLarge(ValueError):
    pass


class TheoremViolation(RuntimeError):
    """A witness failed its distance check; should be impossible."""


def rank_subset(subset: Sequence[int], n: int) -> int:
    """Lexicographic rank of a sorted subset of ``range(n)`` among subsets of its size."""
    k = len(subset)
    rank, prev = 0, -1
    for i, c in enumerate(subset):
        # skip every subset whose i-th element is smaller than c
        for smaller in range(prev + 1, c):
            rank += math.comb(n - 1 - smaller, k - 1 - i)
        prev = c
    return rank


def unrank_subset(rank: int, n: int, k: int) -> list[int]:
    """Inverse of :func:`rank_subset`."""
    if not 0 <= rank < math.comb(n, k):
        raise ValueError("rank out of range")
    out, c = [], 0
    for i in range(k):
        while True:
            block = math.comb(n - 1 - c, k - 1 - i)
            if rank < block:
                break
            rank -= block
            c += 1
        out.append(c)
        c += 1
    return out


@dataclass(frozen=True)
class GkDescriptor:
    k: int

    @property
    def N(self) -> int:
        return math.comb(3 * self.k, self.k)

    @property
    def n_k(self) -> int:
        return 2 * self.N + 3 * self.k

    @property
    def h1_range(self) -> range:
        return range(0, self.N)

    @property
    def h2_range(self) -> range:
        return range(self.N, self.N + 3 * self.k)

    @property
    def h3_range(self) -> range:
        return range(self.N + 3 * self.k, self.n_k)

    @property
    def h2_mask(self) -> int:
        return ((1 << (3 * self.k)) - 1) << self.N

    def subset_rank(self, subset: Iterable[int]) -> int:
        """Rank of a 2k-subset of H2 given as absolute vertex ids."""
        rel = sorted(v - self.N for v in subset)
        if len(rel) != 2 * self.k or rel[0] < 0 or rel[-1] >= 3 * self.k:
            raise ValueError("not a 2k-subset of H2")
        return rank_subset(rel, 3 * self.k)

    def subset_of(self, vertex: int) -> tuple[int, ...]:
        """The subset S attached to an H1 or H3 vertex, as absolute H2 ids."""
        if vertex in self.h1_range:
            r = vertex
        elif vertex in self.h3_range:
            r = vertex - self.h3_range.start
        else:
            raise ValueError(f"vertex {vertex} lies in H2")
        return tuple(self.N + c for c in unrank_subset(r, 3 * self.k, 2 * self.k))

    def v_of(self, subset: Iterable[int]) -> int:
        return self.h1_range.start + self.subset_rank(subset)

    def w_of(self, subset: Iterable[int]) -> int:
        return self.h3_range.start + self.subset_rank(subset)

    def header(self) -> list[str]:
        return [
            f"G_k extremal graph k={self.k} N={self.N} n_k={self.n_k}",
            f"H1=[{self.h1_range.start},{self.h1_range.stop}) "
            f"H2=[{self.h2_range.start},{self.h2_range.stop}) "
            f"H3=[{self.h3_range.start},{self.h3_range.stop})",
            "v_S = H1.start + rank(S), w_S = H3.start + rank(S); "
            "rank = lexicographic rank of sorted 2k-subsets of H2",
        ]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "n_k": self.n_k,
            "h1_range": [self.h1_range.start, self.h1_range.stop],
            "h2_range": [self.h2_range.start, self.h2_range.stop],
            "h3_range": [self.h3_range.start, self.h3_range.stop],
            "subset_rank": "lexicographic",
        }


def build_gk(k: int, max_k: int = DEFAULT_MAX_K) -> tuple[Graph, GkDescriptor]:
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > max_k:
        raise InstanceTooLarge(f"k={k} exceeds the instance cap k <= {max_k}")
    desc = GkDescriptor(k)
    N, n = desc.N, desc.n_k
    h1 = (1 << N) - 1
    h2 = desc.h2_mask
    h3 = h1 << desc.h3_range.start
    adj = [0] * n
    for block in (h1, h2, h3):
        for v in iter_bits(block):
            adj[v] = block ^ (1 << v)
    for r in range(N):
        s_mask = 0
        for c in unrank_subset(r, 3 * k, 2 * k):
            s_mask |= 1 << (N + c)
        v, w = desc.h1_range.start + r, desc.h3_range.start + r
        adj[v] |= s_mask
        adj[w] |= s_mask
        for z in iter_bits(s_mask):
            adj[z] |= (1 << v) | (1 << w)
    return Graph(n, tuple(adj)), desc


def degree_audit(g: Graph, desc: GkDescriptor) -> bool:
    """Check every degree against the closed forms and the minimum degree (n_k + k)/2 - 1."""
    k, N = desc.k, desc.N
    outer = N + 2 * k - 1
    inner_num = 4 * N + 3 * (3 * k - 1)
    if inner_num % 3:
        return False
    inner = inner_num // 3
    for v in desc.h1_range:
        if g.degree(v) != outer:
            return False
    for v in desc.h3_range:
        if g.degree(v) != outer:
            return False
    for v in desc.h2_range:
        if g.degree(v) != inner:
            return False
    assert (desc.n_k + k) % 2 == 0
    return min_degree(g) == (desc.n_k + k) // 2 - 1


@dataclass(frozen=True)
class Witness:
    source: int
    target: int
    case_direction: str  # "forward" | "backward"
    chosen_S: tuple[int, ...]
    fixed_vertex: int
    verified_distance: int | float

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "case_direction": self.case_direction,
            "chosen_S": list(self.chosen_S),
            "fixed_vertex": self.fixed_vertex,
            "verified_distance": "inf" if self.verified_distance == math.inf else self.verified_distance,
        }


def find_witness(d: Orientation, desc: GkDescriptor, v: Optional[int] = None) -> Witness:
    """Extract an ordered pair at directed distance >= 3.

    If at most k of v's H2-neighbours are out-neighbours, S avoids them and
    the pair is (v, w_S); otherwise at most k are in-neighbours, S avoids
    those and the pair is (w_S, v).  S is the lexicographically smallest
    admissible choice.
    """
    if v is None:
        v = desc.h1_range.start
    if v not in desc.h1_range:
        raise ValueError(f"vertex {v} is not in H1")
    k = desc.k
    out_side = d.out[v] & desc.h2_mask
    if out_side.bit_count() <= k:
        direction, blocked = "forward", out_side
    else:
        direction, blocked = "backward", d.inn[v] & desc.h2_mask
        assert blocked.bit_count() <= k
    free = [z for z in desc.h2_range if not (blocked >> z) & 1]
    S = tuple(free[: 2 * k])
    w = desc.w_of(S)
    source, target = (v, w) if direction == "forward" else (w, v)
    dist = directed_distance(d, source, target)
    if not dist >= 3:
        raise TheoremViolation(f"pair ({source}, {target}) at distance {dist}")
    return Witness(source, target, direction, S, v, dist)


@dataclass(frozen=True)
class WitnessSummary:
    k: int
    trials: int
    seed: int
    verified: int
    forward: int
    backward: int
    min_distance: int | float
    diameter_two_seen: int

    @property
    def all_verified(self) -> bool:
        return self.verified == self.trials and self.diameter_two_seen == 0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "verified": self.verified,
            "forward": self.forward,
            "backward": self.backward,
            "min_distance": "inf" if self.min_distance == math.inf else self.min_distance,
            "diameter_two_seen": self.diameter_two_seen,
        }


def _witness_chunk(args) -> tuple[int, int, int, float, int]:
    k, seed, start, stop = args
    g, desc = build_gk(k, max_k=k)
    verified = forward = diam2 = 0
    low = math.inf
    for i in range(start, stop):
        d = random_orientation(g, rng_for(seed, i))
        diam2 += check_diameter_two(d)
        try:
            w = find_witness(d, desc)
        except TheoremViolation:
            continue
        verified += 1
        forward += w.case_direction == "forward"
        low = min(low, w.verified_distance)
    return verified, forward, diam2, low, stop - start


def verify_witnesses(k: int, trials: int, seed: int = 0, workers: int = 1) -> WitnessSummary:
    """Witness extraction on ``trials`` random orientations of G_k (trial i uses stream (seed, i))."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tasks = [(k, seed, a, b) for a, b in chunk_ranges(trials, max(1, workers))]
    verified = forward = diam2 = done = 0
    low = math.inf
    for ver, fwd, d2, lo, cnt in ordered_map(_witness_chunk, tasks, workers):
        verified += ver
        forward += fwd
        diam2 += d2
        low = min(low, lo)
        done += cnt
    assert done == trials
    return WitnessSummary(k, trials, seed, verified, forward, verified - forward, low, diam2)


# Asymptotic estimates

@dataclass(frozen=True)
class AsymptoticsRow:
    k: int
    ln_nk: float
    delta_minus_half_n: Fraction
    rhs_thm2: float
    stirling_ok: bool
    intermediate_ok: bool
    log_inequality_ok: bool
    gap_ok: bool
    gap_margin: float
    close_call: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "ln_nk": self.ln_nk,
            "delta_minus_half_n": str(self.delta_minus_half_n),
            "rhs_thm2": self.rhs_thm2,
            "stirling_ok": self.stirling_ok,
            "intermediate_ok": self.intermediate_ok,
            "log_inequality_ok": self.log_inequality_ok,
            "gap_ok": self.gap_ok,
            "gap_margin": self.gap_margin,
            "close_call": self.close_call,
        }


def ln_binom_3k_k(k: int) -> float:
    if k <= EXACT_K_LIMIT:
        return math.log(math.comb(3 * k, k))
    return math.lgamma(3 * k + 1) - math.lgamma(k + 1) - math.lgamma(2 * k + 1)


def ln_nk(k: int) -> float:
    """ln(2 C(3k, k) + 3k) without forming the integer for large k."""
    if k <= EXACT_K_LIMIT:
        return math.log(2 * math.comb(3 * k, k) + 3 * k)
    ln_n = ln_binom_3k_k(k)
    return math.log(2) + ln_n + math.log1p(1.5 * k * math.exp(-ln_n))


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= CLOSE_CALL_RTOL * max(abs(a), abs(b), 1.0)


def asymptotics_row(k: int) -> AsymptoticsRow:
    if k < 1:
        raise ValueError("k must be at least 1")
    lnn = ln_nk(k)
    # n_k < (3^{3/2}/2) (27/4)^k / sqrt(k pi)
    stirling_rhs = 1.5 * math.log(3) - math.log(2) + k * LN_27_4 - 0.5 * math.log(k * math.pi)
    # ln n_k < ln(3^{3/2} / (2 sqrt(pi))) + k ln(27/4) - ln(k)/2
    log_rhs = math.log(3 ** 1.5 / (2 * math.sqrt(math.pi))) + k * LN_27_4 - 0.5 * math.log(k)
    if k <= EXACT_K_LIMIT:
        intermediate = 6 * k <= math.comb(3 * k, k)  # 2N + 3k <= 2.5 N
    else:
        intermediate = math.log(6 * k) <= ln_binom_3k_k(k)
    gap_lhs = Fraction(k, 2) - 1
    rhs = lnn / (2 * LN_27_4)
    margin = float(gap_lhs) - rhs
    return AsymptoticsRow(
        k=k,
        ln_nk=lnn,
        delta_minus_half_n=gap_lhs,
        rhs_thm2=rhs,
        stirling_ok=lnn < stirling_rhs,
        intermediate_ok=intermediate,
        log_inequality_ok=lnn < log_rhs,
        gap_ok=margin > 0,
        gap_margin=margin,
        close_call=_close(lnn, stirling_rhs) or _close(lnn, log_rhs) or _close(float(gap_lhs), rhs),
    )


def asymptotics_table(k_min: int, k_max: int, sample_stride: int = 1) -> list[AsymptoticsRow]:
    if k_min < 1 or k_max < k_min or sample_stride < 1:
        raise ValueError("need 1 <= k_min <= k_max and stride >= 1")
    return [asymptotics_row(k) for k in range(k_min, k_max + 1, sample_stride)]


def first_gap_k(limit: int = 10**5) -> int:
    """Smallest k with gap_ok, scanning upward from 1."""
    for k in range(1, limit + 1):
        if asymptotics_row(k).gap_ok:
            return k
    raise ValueError(f"gap inequality fails for every k <= {limit}")


ASYMPTOTICS_COLUMNS = [
    "k", "ln_nk", "delta_minus_half_n", "rhs_thm2",
    "stirling_ok", "intermediate_ok", "log_inequality_ok", "gap_ok", "gap_margin", "close_call",
]


def asymptotics_csv(rows: Iterable[AsymptoticsRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=ASYMPTOTICS_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        rec = row.to_dict()
        rec["ln_nk"] = repr(row.ln_nk)
        rec["rhs_thm2"] = repr(row.rhs_thm2)
        rec["gap_margin"] = repr(row.gap_margin)
        writer.writerow(rec)
    return buf.getvalue()
