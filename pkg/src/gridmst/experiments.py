"""Reproducible multi-tree experiments: the stretch/probability scatter
and the variance probe behind the decay-base conjecture.

Seeds for the sampled trees and their probability estimates are derived
from one master seed with fixed integer tags, so each row is
independent of evaluation order and worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decay import decay_lower_bound, family_power_series
from .families import FamilySpec, build_family, sample_branch_sets
from .grids import build_grid
from .probability import gmean_statistic, prob_estimate
from .trees import avg_stretch, from_edges

_TAG_KRUSKAL = 1
_TAG_WILSON = 2
_TAG_ESTIMATE = 3
_TAG_GMEAN = 4


def _child_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(parts).generate_state(1)[0])


@dataclass(frozen=True)
class ScatterRow:
    sampler: str
    avg_stretch: Fraction
    log_prob: float


@dataclass(frozen=True)
class ScatterResult:
    n: int
    trees_per_sampler: int
    samples: int
    seed: int
    rows: tuple[ScatterRow, ...]
    pearson: float


def stretch_scatter(
    n: int, trees_per_sampler: int, samples: int, seed: int
) -> ScatterResult:
    """Sample trees from both samplers, estimate each tree's probability
    from `samples` random orders, and correlate with average stretch.

    The deterministic centipede (and, when n is a power of two, fractal)
    tree for the same grid is appended for reference.
    """
    if n < 4:
        raise ValueError("scatter needs n >= 4")
    if trees_per_sampler < 1:
        raise ValueError("need at least one tree per sampler")
    g = build_grid(n)
    rows: list[ScatterRow] = []

    def add(sampler: str, t, est_seed: int) -> None:
        est = prob_estimate(t, samples, est_seed)
        rows.append(ScatterRow(sampler, avg_stretch(t), est.log_value))

    for sampler, tag in (("kruskal", _TAG_KRUSKAL), ("wilson", _TAG_WILSON)):
        branch_sets = sample_branch_sets(
            g, sampler, trees_per_sampler, _child_seed(seed, tag)
        )
        for i, branches in enumerate(branch_sets):
            t = from_edges(g, list(branches))
            add(sampler, t, _child_seed(seed, _TAG_ESTIMATE, tag, i))

    specials = ["centipede"]
    if n & (n - 1) == 0:
        specials.append("fractal")
    for j, kind in enumerate(specials):
        t = build_family(FamilySpec(kind, n=n))
        add(kind, t, _child_seed(seed, _TAG_ESTIMATE, 0, j))

    stretches = np.array([float(r.avg_stretch) for r in rows])
    log_probs = np.array([r.log_prob for r in rows])
    pearson = float(np.corrcoef(stretches, log_probs)[0, 1])
    return ScatterResult(
        n=n,
        trees_per_sampler=trees_per_sampler,
        samples=samples,
        seed=seed,
        rows=tuple(rows),
        pearson=pearson,
    )


@dataclass(frozen=True)
class ConjectureRow:
    size: int
    mean_log_gmean: float
    log_variance: float
    scaled_half_variance: float
    implied_ratio: float


# the deterministic constructions; samplers have no single tree per size
CONJECTURE_FAMILY_KINDS = ("centipede", "double_spiral", "fractal")


def conjecture_rows(
    kind: str, sizes: list[int], samples: int, seed: int
) -> tuple[ConjectureRow, ...]:
    """Per-size statistics of X = ln A(T_n): mean, variance, the scaled
    variance (n sigma_n)^2 / 2, and the decay ratio it implies against
    the family's 1/(e*f_bar) bound. Exploratory, no pass/fail."""
    kind = kind.replace("-", "_")
    if kind not in CONJECTURE_FAMILY_KINDS:
        raise ValueError(
            f"conjecture probe needs a deterministic family, not {kind!r}"
        )
    bound_reciprocal = decay_lower_bound(family_power_series(kind)).bound_reciprocal
    out = []
    for size in sizes:
        t = build_family(FamilySpec(kind, n=size))
        stat = gmean_statistic(t, samples, _child_seed(seed, _TAG_GMEAN, size))
        mean_log = float(np.mean(np.log(stat.values)))
        scaled = size * size * stat.log_variance / 2.0
        out.append(
            ConjectureRow(
                size=size,
                mean_log_gmean=mean_log,
                log_variance=stat.log_variance,
                scaled_half_variance=scaled,
                implied_ratio=math.exp(scaled) / bound_reciprocal,
            )
        )
    return tuple(out)
