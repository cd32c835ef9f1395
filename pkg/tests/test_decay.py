import math
from fractions import Fraction
from itertools import permutations

import pytest

from gridmst import decay
from gridmst.families import centipede
from gridmst.grids import InvariantError, build_grid
from gridmst.probability import passing_times
from gridmst.trees import bipartite, degree_mass, from_edges


def _g2_mass():
    t = from_edges(build_grid(2), [0, 1, 2])
    b = bipartite(t)
    return degree_mass(b), b.M, b.N


def test_expected_passing_time_small_grid():
    dm, m, n = _g2_mass()
    assert decay.expected_passing_time(dm, m, n, 1) == 2
    assert decay.expected_passing_time(dm, m, n, 2) == 3
    assert decay.expected_passing_time(dm, m, n, 3) == 4
    for bad in (0, 4, -1):
        with pytest.raises(ValueError):
            decay.expected_passing_time(dm, m, n, bad)


def test_expected_passing_time_matches_exhaustive_average():
    t = centipede(3)
    b = bipartite(t)
    dm = degree_mass(b)
    sums = [0] * b.M
    count = 0
    for order in permutations(range(b.M)):
        for i, v in enumerate(passing_times(b, list(order)).values):
            sums[i] += v
        count += 1
    for i in range(1, b.M + 1):
        assert decay.expected_passing_time(dm, b.M, b.N, i) == Fraction(
            sums[i - 1], count
        )


def test_approx_passing_time_values():
    dm, m, n = _g2_mass()
    assert abs(decay.approx_passing_time(dm, m, n, 1) - 46 / 27) < 1e-12
    assert decay.approx_passing_time(dm, m, n, m) == m + n
    cdm = degree_mass(bipartite(centipede(5)))
    b5 = bipartite(centipede(5))
    assert decay.approx_passing_time(cdm, b5.M, b5.N, b5.M) == b5.M + b5.N
    with pytest.raises(ValueError):
        decay.approx_passing_time(dm, m, n, 0)


def test_approx_never_exceeds_expectation():
    b = bipartite(centipede(8))
    dm = degree_mass(b)
    for i in range(1, b.M + 1):
        exact = decay.expected_passing_time(dm, b.M, b.N, i)
        assert decay.approx_passing_time(dm, b.M, b.N, i) <= float(exact) + 1e-12


def _sample_series():
    return [
        decay.PowerSeries({}),
        decay.PowerSeries({3: Fraction(1)}),
        decay.PowerSeries({3: Fraction(1, 3), 7: Fraction(1, 5)}),
        decay.family_power_series("fractal", 29),
        decay.uniform_family_series(999),
    ]


def test_power_series_shape_invariants():
    grid = [j / 100 for j in range(101)]
    for ps in _sample_series():
        assert ps.evaluate(1.0) == 2.0
        assert abs(ps.evaluate(0.0) - (1.0 - float(ps.mass_total))) < 1e-12
        prev = None
        for x in grid:
            v = ps.evaluate(x)
            assert v >= x - 1e-12
            assert v <= 2.0 + 1e-12
            if prev is not None:
                # slope at least 1 everywhere
                assert v - prev >= 0.01 - 1e-9
            prev = v


def test_power_series_validation():
    with pytest.raises(ValueError):
        decay.PowerSeries({2: 0.5})
    with pytest.raises(ValueError):
        decay.PowerSeries({3: -0.1})
    with pytest.raises(ValueError):
        decay.PowerSeries({3: 0.8, 5: 0.3})
    with pytest.raises(ValueError):
        decay.PowerSeries({}, tail_mass=0.1)
    ps = decay.PowerSeries({}, tail_mass=0.1, tail_degree=9)
    assert abs(ps.evaluate(0.0) - 0.9) < 1e-12


def test_family_power_series_dispatch():
    assert decay.family_power_series("centipede").evaluate(0.5) == 1.5
    assert decay.family_power_series("double-spiral").coefficients == {}
    fr = decay.family_power_series("fractal", 29)
    assert fr.coefficients[3] == Fraction(5, 12)
    assert fr.coefficients[5] == Fraction(1, 4)
    un = decay.family_power_series("uniform", 999)
    assert un.coefficients[3] == 0.29454
    assert un.coefficients[5] == 0.12409
    with pytest.raises(ValueError):
        decay.family_power_series("helix")
    with pytest.raises(ValueError):
        decay.family_power_series("fractal", 2)


FRACTAL_TABLE = {
    3: Fraction(5, 12),
    5: Fraction(1, 4),
    11: Fraction(1, 12),
    13: Fraction(1, 12),
    25: Fraction(1, 96),
    27: Fraction(1, 24),
    29: Fraction(1, 32),
    55: Fraction(1, 384),
    57: Fraction(1, 128),
    59: Fraction(7, 384),
    61: Fraction(5, 384),
    117: Fraction(1, 1536),
    119: Fraction(1, 384),
    121: Fraction(1, 256),
    123: Fraction(1, 128),
    125: Fraction(3, 512),
}


def test_fractal_limit_masses_exact():
    assert decay.fractal_p_infinity(125) == FRACTAL_TABLE


def test_fractal_masses_increase_toward_one():
    totals = []
    for d_max in (3, 13, 29, 61, 125):
        masses = decay.fractal_p_infinity(d_max)
        assert all(d <= d_max for d in masses)
        totals.append(sum(masses.values()))
    assert totals == sorted(totals)
    assert totals[-1] == Fraction(47, 48)
    assert all(t < 1 for t in totals)


def test_fractal_recurrence_needs_enough_levels():
    with pytest.raises(InvariantError, match="not stabilized"):
        decay.fractal_p_infinity(125, max_level=5)


def test_geometric_mean_centipede_closed_form():
    g = decay.geometric_mean(decay.PowerSeries({}))
    assert abs(g - 4 / math.e) < 1e-9


def test_log_gmean_identity_function():
    # integrand ln(x) is singular at 0; the closed-form head handles it
    assert abs(decay._log_gmean(lambda x: x, 0.0, 1.0) + 1.0) < 1e-9


def test_log_gmean_rejects_nonpositive():
    with pytest.raises(ValueError):
        decay._log_gmean(lambda x: x - 0.5, 0.5, 1.0)


def test_fractal_decay_bound():
    ps = decay.family_power_series("fractal", 125)
    bound = decay.decay_lower_bound(ps)
    assert abs(bound.bound_reciprocal - 3.2508) < 5e-3
    assert bound.bound_reciprocal > 3.2099
    assert bound.q_lower == pytest.approx(1 / bound.bound_reciprocal)


def test_decay_bound_window():
    for kind in ("centipede", "fractal", "uniform"):
        d_max = 125 if kind == "fractal" else 999
        bound = decay.decay_lower_bound(decay.family_power_series(kind, d_max))
        assert 0 < bound.q_lower <= 1
        assert bound.bound_reciprocal >= 2
    cent = decay.decay_lower_bound(decay.PowerSeries({}))
    assert abs(cent.q_lower - 0.25) < 1e-9


def test_uniform_series_mass_and_bound():
    for d_max in (999, 99999):
        ps = decay.uniform_family_series(d_max)
        assert abs(float(ps.mass_total) - 1.0) < 1e-6
    bound = decay.decay_lower_bound(decay.uniform_family_series())
    assert abs(bound.bound_reciprocal - 3.433) < 1e-2
    with pytest.raises(ValueError):
        decay.uniform_family_series(5)


def test_gmean_reflection_invariance():
    for ps in (
        decay.family_power_series("fractal", 125),
        decay.uniform_family_series(999),
    ):
        forward = decay._log_gmean(ps.evaluate, ps.evaluate(0.0), ps.slope_at_zero)
        backward = decay._log_gmean(
            lambda x: ps.evaluate(1.0 - x), ps.evaluate(1.0), 0.0
        )
        assert abs(forward - backward) < 1e-8


def test_profile_report_small_grid_exact_means():
    t = from_edges(build_grid(2), [0, 1, 2])
    ps = decay.PowerSeries({3: Fraction(1)})
    rep = decay.passing_profile_vs_f(t, ps, samples=50, seed=3)
    # every order of 3 branches yields passing times (2, 3, 4)
    expected_means = (2 / 3, 1.0, 4 / 3)
    for row, mean in zip(rep.rows, expected_means):
        assert abs(row[1] - mean) < 1e-12
    assert abs(rep.rows[0][2] - 28 / 27) < 1e-12
    assert abs(rep.rows[0][3] - 46 / 81) < 1e-12
    assert abs(rep.sup_deviation - 8 / 81) < 1e-12


def test_profile_concentration_tightens_with_size():
    ps = decay.PowerSeries({})
    rep20 = decay.passing_profile_vs_f(centipede(20), ps, samples=600, seed=11)
    rep40 = decay.passing_profile_vs_f(centipede(40), ps, samples=600, seed=11)
    assert rep40.sup_deviation < 0.05
    assert rep40.sup_deviation < rep20.sup_deviation


def test_csv_emitters():
    ps = decay.family_power_series("centipede")
    table = decay.series_csv(ps, points=5)
    lines = table.strip().splitlines()
    assert lines[0] == "x,f"
    assert len(lines) == 6
    assert lines[-1] == "1,2"

    rep = decay.passing_profile_vs_f(centipede(4), ps, samples=40, seed=1)
    out = decay.profile_report_csv(rep)
    rows = out.strip().splitlines()
    assert rows[0] == "x,mean_scaled,f,approx_scaled"
    assert len(rows) == 1 + len(rep.rows)
