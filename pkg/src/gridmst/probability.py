"""Passing times and the MST probability of a spanning tree.

Fix a spanning tree T with M branches and N chords, and imagine removing
branches one by one in a uniformly random order. The i-th passing time
P_i counts i plus the chords whose fundamental cycle meets one of the
first i removed branches. The probability that T is the minimum spanning
tree under i.i.d. uniform edge weights equals the sum over all M! branch
orders of 1 / (P_1 * ... * P_M).

Exact values come from a dynamic program over branch subsets: the i-th
passing time depends only on the set of the first i branches, so orders
sharing a prefix set share their factor. Writing lit(S) for the number
of chords meeting the branch set S,

    g({}) = 1,   g(S) = sum_e g(S - e) / (|S| + lit(S)),

and g(all branches) is exactly the permutation sum above. That turns an
M! enumeration into 2^M subset states, which is what makes the default
guard of M <= 12 comfortably fast. The dual computation runs the same
program over chord subsets and must agree; it exists as a cross-check.

Estimation draws uniform orders, computes log products vectorized, and
combines them with a max-shifted log-mean-exp; raw products overflow
beyond 5x5 hosts. The estimator's relative variance grows quickly with
the grid side, so the standard error of the log is always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .grids import GuardError
from .seeding import sample_rng
from .trees import BipartiteCompanion, SpanningTree, bipartite

DEFAULT_MAX_EXACT = 12

# Target element count per vectorized chunk; keeps the position-gather
# matrix tens of MB even for trees with very large bipartite link counts.
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class PassingTimes:
    """P_1..P_M for one branch order, with the (M, N) context."""

    values: tuple[int, ...]
    n_branches: int
    n_chords: int


@dataclass(frozen=True)
class ProbEstimate:
    """Natural-log probability report; exact results carry zero error."""

    log_value: float
    samples: int
    log_std_err: float
    exact: bool


@dataclass(frozen=True)
class GmeanStatistic:
    """Scaled-passing-time geometric means over sampled orders.

    values holds per-sample (prod P_i / M^M)^(1/M); on grid hosts every
    sample lies in (0, 2]. log_variance is the variance of ln(value),
    the quantity whose n^2-scaled growth calibrates the decay base.
    """

    values: np.ndarray
    mean: float
    variance: float
    log_variance: float


@dataclass(frozen=True)
class BoundReport:
    """Outcome of the passing-time inequality checks."""

    passed: bool
    violation: Optional[str]
    log_product: float
    log_bound: float


def _check_order(order: Sequence[int], m: int) -> None:
    if len(order) != m or sorted(order) != list(range(m)):
        raise ValueError(f"order must be a permutation of 0..{m - 1}")


def passing_times(b: BipartiteCompanion, order: Sequence[int]) -> PassingTimes:
    """Incremental chord lighting along one branch order.

    order is a permutation of branch node indices (0..M-1, ascending
    host edge id). O(total links) overall.
    """
    _check_order(order, b.M)
    lit = bytearray(b.N)
    count = 0
    values = []
    for i, node in enumerate(order):
        for c in b.branch_neighbors[node]:
            if not lit[c]:
                lit[c] = 1
                count += 1
        values.append(i + 1 + count)
    return PassingTimes(tuple(values), b.M, b.N)


def passing_times_via_forest(t: SpanningTree, order: Sequence[int]) -> PassingTimes:
    """Independent oracle: P_i equals the number of host edges joining
    distinct components of the forest on the NOT yet removed branches
    {e_{i+1}, ..., e_M}. Quadratic; meant for cross-checks."""
    branch_edges = sorted(t.branches)
    m = len(branch_edges)
    _check_order(order, m)
    g = t.graph
    values = []
    for i in range(1, m + 1):
        parent = list(range(g.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for j in range(i, m):
            u, v = g.edges[branch_edges[order[j]]]
            parent[find(u)] = find(v)
        crossing = 0
        for u, v in g.edges:
            if find(u) != find(v):
                crossing += 1
        values.append(crossing)
    return PassingTimes(tuple(values), m, t.chord_count)


def _subset_dp(masks: list[int], item_count: int, lit_universe: int) -> Fraction:
    """Sum over orders of 1/prod(passing times) for one side of the
    bipartite structure. masks[j] marks the items adjacent to the j-th
    node of the other side; lit_universe is that other side's size."""
    total_states = 1 << item_count
    # lit[S] = lit_universe - #other-side nodes with no neighbor in S,
    # via a subset-sum sweep over neighbor masks of the complement.
    not_lit = [0] * total_states
    for mask in masks:
        not_lit[mask] += 1
    for bit in range(item_count):
        step = 1 << bit
        for s in range(total_states):
            if s & step:
                not_lit[s] += not_lit[s ^ step]
    g = [Fraction(0)] * total_states
    g[0] = Fraction(1)
    for s in range(1, total_states):
        lit = lit_universe - not_lit[(total_states - 1) ^ s]
        p = s.bit_count() + lit
        acc = Fraction(0)
        rest = s
        while rest:
            low = rest & -rest
            acc += g[s ^ low]
            rest ^= low
        g[s] = acc / p
    return g[total_states - 1]


def prob_exact(t: SpanningTree, max_branches: int = DEFAULT_MAX_EXACT) -> Fraction:
    """Exact MST probability as a rational; guarded by branch count."""
    b = bipartite(t)
    if b.M > max_branches:
        raise GuardError(
            f"{b.M} branches exceeds the exact guard ({max_branches}); "
            "use prob_estimate"
        )
    if b.M == 0:
        return Fraction(1)
    chord_masks = [
        sum(1 << i for i in nb) for nb in b.chord_neighbors
    ]
    return _subset_dp(chord_masks, b.M, b.N)


def prob_exact_dual(t: SpanningTree, max_chords: int = DEFAULT_MAX_EXACT) -> Fraction:
    """The same probability summed over chord orders instead; the dual
    passing time counts branches adjacent to the first i chords."""
    b = bipartite(t)
    if b.N > max_chords:
        raise GuardError(
            f"{b.N} chords exceeds the exact guard ({max_chords}); "
            "use prob_estimate"
        )
    if b.N == 0:
        return Fraction(1)
    branch_masks = [
        sum(1 << j for j in nb) for nb in b.branch_neighbors
    ]
    return _subset_dp(branch_masks, b.N, b.M)


def sampled_passing_times(
    t: SpanningTree, samples: int, seed: int
) -> Iterator[np.ndarray]:
    """Stream (chunk, M) int arrays of passing times for uniform random
    branch orders; row r of the whole stream uses the (seed, r) stream."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    b = bipartite(t)
    m_branches, n_chords = b.M, b.N
    if n_chords > 0:
        nbr_concat = np.concatenate(
            [np.asarray(nb, dtype=np.int64) for nb in b.chord_neighbors]
        )
        offsets = np.zeros(n_chords, dtype=np.int64)
        np.cumsum([len(nb) for nb in b.chord_neighbors[:-1]], out=offsets[1:])
        links = len(nbr_concat)
    else:
        links = 1
    chunk = max(16, min(4096, _CHUNK_ELEMENTS // max(links, m_branches, 1)))
    steps = np.arange(1, m_branches + 1, dtype=np.int64)
    index = 0
    row_offsets = None
    while index < samples:
        m = min(chunk, samples - index)
        pos = np.empty((m, m_branches), dtype=np.int64)
        base = np.arange(m_branches, dtype=np.int64)
        for r in range(m):
            rng = sample_rng(seed, index + r)
            pos[r, rng.permutation(m_branches)] = base
        if n_chords > 0:
            light = np.minimum.reduceat(pos[:, nbr_concat], offsets, axis=1)
            if row_offsets is None or len(row_offsets) != m:
                row_offsets = np.arange(m, dtype=np.int64)[:, None] * m_branches
            hist = np.bincount(
                (light + row_offsets).ravel(), minlength=m * m_branches
            ).reshape(m, m_branches)
            yield steps + np.cumsum(hist, axis=1)
        else:
            yield np.broadcast_to(steps, (m, m_branches)).copy()
        index += m


def prob_estimate(t: SpanningTree, samples: int, seed: int) -> ProbEstimate:
    """Monte Carlo probability over uniform branch orders.

    Per order s = -sum ln P_i; the estimate is ln M! plus a max-shifted
    log-mean-exp of the s values, with a delta-method standard error.
    """
    logs = []
    m_branches = 0
    for p_chunk in sampled_passing_times(t, samples, seed):
        m_branches = p_chunk.shape[1]
        logs.append(-np.log(p_chunk.astype(np.float64)).sum(axis=1))
    s = np.concatenate(logs)
    s_max = float(s.max())
    w = np.exp(s - s_max)
    mean_w = float(w.mean())
    log_value = math.lgamma(m_branches + 1) + s_max + math.log(mean_w)
    if samples > 1:
        err = float(w.std(ddof=1)) / (mean_w * math.sqrt(samples))
    else:
        err = 0.0
    return ProbEstimate(
        log_value=log_value, samples=samples, log_std_err=err, exact=False
    )


def exact_to_estimate(p: Fraction) -> ProbEstimate:
    """Wrap an exact rational in the report type (zero error)."""
    log_value = math.log(p.numerator) - math.log(p.denominator)
    return ProbEstimate(log_value=log_value, samples=1, log_std_err=0.0, exact=True)


def gmean_statistic(t: SpanningTree, samples: int, seed: int) -> GmeanStatistic:
    """Geometric mean of P_i/M per sampled order, with its spread.

    The mean of ln(value) concentrates for bounded families; its
    variance (log_variance here) is the sigma^2 whose n^2-scaling the
    conjecture probe reports.
    """
    if t.branch_count == 0:
        raise ValueError("tree has no branches")
    parts = []
    for p_chunk in sampled_passing_times(t, samples, seed):
        m_branches = p_chunk.shape[1]
        log_a = (
            np.log(p_chunk.astype(np.float64)).sum(axis=1) / m_branches
            - math.log(m_branches)
        )
        parts.append(log_a)
    log_values = np.concatenate(parts)
    values = np.exp(log_values)
    if samples > 1:
        variance = float(values.var(ddof=1))
        log_variance = float(log_values.var(ddof=1))
    else:
        variance = 0.0
        log_variance = 0.0
    return GmeanStatistic(
        values=values,
        mean=float(values.mean()),
        variance=variance,
        log_variance=log_variance,
    )


def mean_passing_times(t: SpanningTree, samples: int, seed: int) -> np.ndarray:
    """Empirical mean of each P_i over sampled orders (float array)."""
    total = None
    for p_chunk in sampled_passing_times(t, samples, seed):
        part = p_chunk.sum(axis=0, dtype=np.float64)
        total = part if total is None else total + part
    return total / samples


def bound_check(pt: PassingTimes, n: int) -> BoundReport:
    """Verify the passing-time inequalities on a grid host of side n.

    Checks strict monotonicity, P_i <= N + i, P_i >= 2(i+1) - 2n, and
    prod P_i <= C(M+N, M) * M!. The product bound is evaluated in exact
    integers (which implies the log-space inequality); the report still
    carries both sides in logs for display.
    """
    values = pt.values
    m, n_chords = pt.n_branches, pt.n_chords
    product = 1
    for v in values:
        product *= v
    log_product = float(
        sum(math.log(v) for v in values) - math.lgamma(m + 1)
    )
    log_bound = float(
        math.lgamma(m + n_chords + 1)
        - math.lgamma(n_chords + 1)
        - math.lgamma(m + 1)
    )

    def report(violation: Optional[str]) -> BoundReport:
        return BoundReport(
            passed=violation is None,
            violation=violation,
            log_product=log_product,
            log_bound=log_bound,
        )

    for i in range(1, len(values)):
        if values[i] <= values[i - 1]:
            return report(f"not strictly increasing at position {i + 1}")
    for i, v in enumerate(values, start=1):
        if v > n_chords + i:
            return report(f"P_{i} = {v} exceeds N + i = {n_chords + i}")
        if v < 2 * (i + 1) - 2 * n:
            return report(f"P_{i} = {v} below 2(i+1) - 2n = {2 * (i + 1) - 2 * n}")
    if product * math.factorial(n_chords) > math.factorial(m + n_chords):
        return report("product exceeds the binomial bound")
    return report(None)


def profile_csv(pt: PassingTimes) -> str:
    """CSV rows (i/M, P_i/M) for plotting one order's profile."""
    m = pt.n_branches
    lines = ["x,scaled_passing_time"]
    for i, v in enumerate(pt.values, start=1):
        lines.append(f"{i / m:.10g},{v / m:.10g}")
    return "\n".join(lines) + "\n"


def estimate_report_json(est: ProbEstimate, seed: int) -> str:
    """JSON report {log_prob, samples, log_std_err, seed}."""
    import json

    return json.dumps(
        {
            "log_prob": est.log_value,
            "samples": est.samples,
            "log_std_err": est.log_std_err,
            "seed": seed,
        }
    )
