"""Limiting passing-time profiles and probability decay bounds.

For a family of trees with convergent chord degree masses p(d), the
scaled passing times P_{floor(xM)}/M approach

    f(x) = 1 + x - sum_{d >= 3} p(d) (1 - x)^d,

and the geometric mean f_bar = exp(integral_0^1 ln f) controls how fast
the MST probability decays: the per-vertex decay base is at least
1/(e * f_bar). This module computes the exact expectation of each P_i,
its closed-form approximation, family power series (including the
fractal's limiting masses extracted from an integer recurrence and a
heavy-tailed model family), and the quadrature for f_bar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad

from .grids import InvariantError

Number = Union[Fraction, float]

_QUAD_KWARGS = dict(epsabs=1e-11, epsrel=1e-11, limit=200)


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients d -> p(d) of a degree-mass series, d odd and >= 3.

    Evaluation: f(x) = 1 + x - sum p(d) (1-x)^d. Valid masses keep
    f(1) = 2, f(0) = 1 - mass_total, and 1 <= f' on [0, 1].

    tail_mass lumps the mass of all degrees beyond the stored cutoff at
    the single degree tail_degree (default: largest stored degree + 2),
    so truncated models of infinite-support families keep their true
    total mass and f(0).
    """

    coefficients: dict[int, Number]
    tail_mass: Number = 0
    tail_degree: Optional[int] = None

    def __post_init__(self):
        ds = []
        ps = []
        for d, p in sorted(self.coefficients.items()):
            if d < 3:
                raise ValueError(f"degree {d} below 3")
            if p < 0:
                raise ValueError(f"negative mass at degree {d}")
            ds.append(float(d))
            ps.append(float(p))
        if self.tail_mass < 0:
            raise ValueError("negative tail mass")
        if self.tail_mass > 0:
            if self.tail_degree is None:
                if not ds:
                    raise ValueError("tail mass requires a tail degree")
                object.__setattr__(self, "tail_degree", int(ds[-1]) + 2)
            ds.append(float(self.tail_degree))
            ps.append(float(self.tail_mass))
        object.__setattr__(self, "_ds", np.asarray(ds))
        object.__setattr__(self, "_ps", np.asarray(ps))
        if ps and sum(ps) > 1.0 + 1e-9:
            raise ValueError("masses exceed 1")

    @property
    def mass_total(self) -> Number:
        return sum(self.coefficients.values(), start=self.tail_mass)

    @property
    def slope_at_zero(self) -> float:
        return 1.0 + float(self._ds @ self._ps)

    def evaluate(self, x: float) -> float:
        if not len(self._ds):
            return 1.0 + x
        if x >= 1.0:
            return 1.0 + x
        return float(
            1.0 + x - self._ps @ np.exp(self._ds * math.log1p(-x))
        )


@dataclass(frozen=True)
class DecayBound:
    """f_bar with the bound it induces: decay base >= 1/(e*f_bar)."""

    f_bar: float
    bound_reciprocal: float
    q_lower: float


def expected_passing_time(dm, m_branches: int, n_chords: int, i: int) -> Fraction:
    """Exact mean of P_i over uniform branch orders.

    A degree-d chord stays unlit only when all d cycle branches fall
    outside the first i, an event of probability C(M-d, i)/C(M, i).
    """
    if not 1 <= i <= m_branches:
        raise ValueError(f"i must be in 1..{m_branches}")
    unlit = Fraction(0)
    denom = math.comb(m_branches, i)
    for d, p in dm.masses.items():
        if d <= m_branches - i:
            unlit += p * Fraction(math.comb(m_branches - d, i), denom)
    return i + n_chords * (1 - unlit)


def approx_passing_time(dm, m_branches: int, n_chords: int, i: int) -> float:
    """Closed-form lower surrogate for the mean of P_i:
    i + N (1 - sum p(d) ((M-i)/M)^d). Never exceeds the exact mean."""
    if not 1 <= i <= m_branches:
        raise ValueError(f"i must be in 1..{m_branches}")
    ratio = (m_branches - i) / m_branches
    unlit = sum(float(p) * ratio ** d for d, p in dm.masses.items())
    return i + n_chords * (1.0 - unlit)


@lru_cache(maxsize=None)
def _fractal_degree_counts(k: int) -> tuple[tuple[int, int], ...]:
    from .families import fractal
    from .trees import bipartite

    hist = bipartite(fractal(k)).degree_histogram()
    return tuple(sorted(hist.items()))


def fractal_p_infinity(d_max: int, max_level: int = 8) -> dict[int, Fraction]:
    """Limiting degree masses of the fractal family, exactly.

    Counts q_k(d) of degree-d chords at level k eventually obey
    q_{k+1} = 4 q_k + C; once the increment C repeats (two consecutive
    agreements ending at the top level computed), the limit of
    q_k / (2^k - 1)^2 is (3 A + C) / (3 * 4^{k0}) with A = q_{k0}.
    Levels are added as needed; failure to stabilize by max_level means
    the construction is oriented wrongly and raises.
    """
    if d_max < 3:
        raise ValueError("d_max must be >= 3")
    level = 4
    while True:
        hists = [dict(_fractal_degree_counts(k)) for k in range(1, level + 1)]
        candidates = sorted(
            {d for h in hists for d in h if d <= d_max}
        )
        result: dict[int, Fraction] = {}
        stable = True
        for d in candidates:
            q = [h.get(d, 0) for h in hists]
            increments = [q[j + 1] - 4 * q[j] for j in range(len(q) - 1)]
            found = None
            for k0 in range(1, len(q) - 1):
                tail = increments[k0 - 1:]
                if len(tail) >= 2 and all(c == tail[0] for c in tail):
                    found = Fraction(3 * q[k0 - 1] + tail[0], 3 * 4 ** k0)
                    break
            if found is None:
                stable = False
                break
            if found:
                result[d] = found
        # degrees first seen at the top level: if any are <= d_max the
        # candidate set itself may still be growing
        prev = {d for h in hists[:-1] for d in h}
        fresh = [d for d in hists[-1] if d not in prev]
        settled = not fresh or min(fresh) > d_max
        if stable and settled:
            return result
        level += 1
        if level > max_level:
            raise InvariantError(
                f"recurrence not stabilized for degrees <= {d_max} "
                f"within {max_level} levels"
            )


@lru_cache(maxsize=None)
def _odd_power_tail_sum() -> float:
    """sum of d^(-8/5) over odd d >= 7, summed directly to 10^6 with an
    integral-midpoint remainder (error far below 1e-9)."""
    ds = np.arange(7, 10 ** 6, 2, dtype=np.float64)
    direct = float(np.sum(ds ** -1.6))
    remainder = 0.5 * (10.0 ** 6) ** -0.6 / 0.6
    return direct + remainder


UNIFORM_MASS_3 = 0.29454
UNIFORM_MASS_5 = 0.12409


def uniform_family_series(d_max: int = 99999) -> PowerSeries:
    """Two fitted masses plus a d^(-8/5) tail normalized to total mass 1
    over the full infinite support; mass at degrees beyond d_max is
    lumped into the series tail so mass_total stays 1."""
    if d_max < 7:
        raise ValueError("d_max must be >= 7")
    scale = (1.0 - UNIFORM_MASS_3 - UNIFORM_MASS_5) / _odd_power_tail_sum()
    coeffs: dict[int, Number] = {3: UNIFORM_MASS_3, 5: UNIFORM_MASS_5}
    ds = np.arange(7, min(d_max, 10 ** 6 - 1) + 1, 2, dtype=np.float64)
    for d, p in zip(ds, scale * ds ** -1.6):
        coeffs[int(d)] = float(p)
    stored = float(np.sum(ds ** -1.6))
    tail = scale * max(0.0, _odd_power_tail_sum() - stored)
    return PowerSeries(coeffs, tail_mass=tail)


FAMILY_SERIES_KINDS = ("centipede", "double_spiral", "fractal", "uniform")
_DEFAULT_D_MAX = {"fractal": 125, "uniform": 99999}


def family_power_series(kind: str, d_max: Optional[int] = None) -> PowerSeries:
    """Limiting series per family; centipede and double spiral share the
    empty series (f = 1 + x)."""
    kind = kind.replace("-", "_")
    if kind not in FAMILY_SERIES_KINDS:
        raise ValueError(f"unknown family {kind!r}")
    if d_max is None:
        d_max = _DEFAULT_D_MAX.get(kind, 3)
    if d_max < 3:
        raise ValueError("d_max must be >= 3")
    if kind in ("centipede", "double_spiral"):
        return PowerSeries({})
    if kind == "fractal":
        return PowerSeries(dict(fractal_p_infinity(d_max)))
    return uniform_family_series(d_max)


def _log_gmean(
    f: Callable[[float], float], f_at_zero: float, slope_at_zero: float
) -> float:
    """integral_0^1 ln f, with the x -> 0 log singularity integrated in
    closed form when f(0) = 0 (there ln f ~ ln(slope * x))."""

    def integrand(x: float) -> float:
        v = f(x)
        if v <= 0.0:
            raise ValueError(f"f({x}) = {v} is not positive")
        return math.log(v)

    head_end = 0.0
    head = 0.0
    if f_at_zero <= 1e-12:
        eps = 1e-7
        head = eps * math.log(slope_at_zero) + eps * (math.log(eps) - 1.0)
        head_end = eps
    # log-spaced breakpoints: heavy-tailed masses put a boundary layer
    # of width ~1/d_max at the origin that a naive adaptive pass misses
    knots = [p for p in (1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1) if p > head_end]
    value, _ = quad(integrand, head_end, 1.0, points=knots, **_QUAD_KWARGS)
    return head + value


def geometric_mean(ps: PowerSeries) -> float:
    """exp of the mean of ln f over [0, 1], to ~1e-9 quadrature error."""
    return math.exp(_log_gmean(ps.evaluate, ps.evaluate(0.0), ps.slope_at_zero))


def decay_lower_bound(ps: PowerSeries) -> DecayBound:
    f_bar = geometric_mean(ps)
    return DecayBound(
        f_bar=f_bar,
        bound_reciprocal=math.e * f_bar,
        q_lower=1.0 / (math.e * f_bar),
    )


@dataclass(frozen=True)
class ProfileReport:
    """Sampled scaled passing times against the limiting profile.

    rows: (x = i/M, mean P_i/M, f(x), approximate P_i/M).
    sup_deviation: max |mean - approx| over x >= 0.1, a concentration
    check of the samples around the tree's own closed-form profile.
    The f column is the family limit, for plotting; finite trees sit
    visibly below it near x = 0, so it is not the deviation reference.
    """

    rows: tuple[tuple[float, float, float, float], ...]
    sup_deviation: float


def passing_profile_vs_f(
    t, ps: PowerSeries, samples: int, seed: int
) -> ProfileReport:
    from .probability import mean_passing_times
    from .trees import bipartite, degree_mass

    b = bipartite(t)
    dm = degree_mass(b)
    means = mean_passing_times(t, samples, seed)
    rows = []
    sup = 0.0
    for i in range(1, b.M + 1):
        x = i / b.M
        mean_scaled = float(means[i - 1]) / b.M
        fx = ps.evaluate(x)
        approx_scaled = approx_passing_time(dm, b.M, b.N, i) / b.M
        rows.append((x, mean_scaled, fx, approx_scaled))
        if x >= 0.1:
            sup = max(sup, abs(mean_scaled - approx_scaled))
    return ProfileReport(rows=tuple(rows), sup_deviation=sup)


def series_csv(ps: PowerSeries, points: int = 101) -> str:
    """CSV table (x, f(x)) for plotting."""
    lines = ["x,f"]
    for j in range(points):
        x = j / (points - 1)
        lines.append(f"{x:.10g},{ps.evaluate(x):.10g}")
    return "\n".join(lines) + "\n"


def profile_report_csv(report: ProfileReport) -> str:
    """CSV table (x, mean_scaled, f, approx_scaled)."""
    lines = ["x,mean_scaled,f,approx_scaled"]
    for x, mean_scaled, fx, approx_scaled in report.rows:
        lines.append(
            f"{x:.10g},{mean_scaled:.10g},{fx:.10g},{approx_scaled:.10g}"
        )
    return "\n".join(lines) + "\n"
