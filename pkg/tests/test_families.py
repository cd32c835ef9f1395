"""Family generators and spanning-tree samplers.

Core claims checked here:
  * every generator output is a valid spanning tree for all sizes tried
  * centipede degree mass is uniform on {3,5,...,2n-1} with mass 1/(n-1)
  * the double spiral is a Hamiltonian path whose mean chord degree
    scales with the branch count
  * the fractal obeys M(k+1) = 4 M(k) + 3 and approaches mass 5/12 at
    degree 3
  * samplers are seed-deterministic, partition-independent, and match
    the known distributions on G(2)
"""

from collections import Counter
from fractions import Fraction

import pytest

from gridmst.families import (
    FamilySpec,
    ascii_art,
    build_family,
    centipede,
    double_spiral,
    fractal,
    kruskal_branches,
    sample_branch_sets,
    sample_kruskal,
    sample_wilson,
    wilson_branches,
)
from gridmst.grids import GeneralGraph, build_grid
from gridmst.seeding import sample_rng
from gridmst.trees import bipartite, degree_mass, from_edges


def test_generators_validate_across_sizes():
    for n in range(2, 65):
        assert double_spiral(n).branch_count == n * n - 1
    for n in (2, 3, 8, 13, 64):
        assert centipede(n).branch_count == n * n - 1
    for k in range(1, 7):
        assert fractal(k).branch_count == 4 ** k - 1


def test_generators_reject_bad_sizes():
    with pytest.raises(ValueError):
        centipede(1)
    with pytest.raises(ValueError):
        double_spiral(1)
    with pytest.raises(ValueError):
        fractal(0)


def test_centipede_structure():
    t = centipede(3)
    assert t.branch_count == 8 and t.chord_count == 4
    dm = degree_mass(bipartite(centipede(4)))
    third = Fraction(1, 3)
    assert dm.masses == {3: third, 5: third, 7: third}
    hist = bipartite(centipede(7)).degree_histogram()
    assert hist == {d: 6 for d in (3, 5, 7, 9, 11, 13)}


def test_centipede_mass_formula_exact():
    for n in range(3, 13):
        dm = degree_mass(bipartite(centipede(n)))
        expected = {d: Fraction(1, n - 1) for d in range(3, 2 * n, 2)}
        assert dm.masses == expected


def test_double_spiral_is_hamiltonian_path():
    for n in (2, 3, 4, 7, 10):
        t = double_spiral(n)
        deg = Counter()
        for e in t.branches:
            u, v = t.graph.edges[e]
            deg[u] += 1
            deg[v] += 1
        assert max(deg.values()) <= 2
        assert sum(1 for d in deg.values() if d == 1) == 2


def test_double_spiral_degree_growth():
    ratios = []
    p3s = []
    for n in (8, 16, 32):
        b = bipartite(double_spiral(n))
        ratios.append(Fraction(b.total_links, b.N) / b.M)
        p3s.append(degree_mass(b).mass(3))
    assert all(r >= Fraction(2, 100) for r in ratios)
    assert ratios[0] <= ratios[1] <= ratios[2]
    assert p3s[0] > p3s[1] > p3s[2]


def test_fractal_structure():
    b1 = bipartite(fractal(1))
    assert (b1.M, b1.N) == (3, 1) and b1.chord_degrees == (3,)
    assert fractal(2).branch_count == 15
    for k in range(1, 7):
        assert fractal(k + 1).branch_count == 4 * fractal(k).branch_count + 3


def test_fractal_mass_convergence():
    dm = degree_mass(bipartite(fractal(7)))
    assert abs(float(dm.mass(3)) - 5.0 / 12.0) < 0.02


def test_sampler_determinism():
    g = build_grid(4)
    assert sample_kruskal(g, 9).branches == sample_kruskal(g, 9).branches
    assert sample_wilson(g, 9).branches == sample_wilson(g, 9).branches
    assert sample_kruskal(g, 9).branches != sample_kruskal(g, 10).branches
    # batch element i is the (seed, i) stream regardless of partitioning
    batch = list(sample_branch_sets(g, "kruskal", 5, seed=123))
    assert batch[3] == kruskal_branches(g, sample_rng(123, 3))
    assert batch[0] == tuple(sorted(sample_kruskal(g, 123).branches))
    wbatch = list(sample_branch_sets(g, "wilson", 4, seed=5))
    assert wbatch[2] == wilson_branches(g, sample_rng(5, 2))


def test_samplers_reject_disconnected():
    g = GeneralGraph(4, [(0, 1), (2, 3)])
    with pytest.raises(ValueError, match="not connected"):
        sample_kruskal(g, 0)
    with pytest.raises(ValueError, match="not connected"):
        sample_wilson(g, 0)
    with pytest.raises(ValueError, match="not connected"):
        list(sample_branch_sets(g, "kruskal", 1, 0))


def test_sampler_frequencies_g2():
    g = build_grid(2)
    count = 6000
    for kind in ("kruskal", "wilson"):
        freq = Counter(sample_branch_sets(g, kind, count, seed=42))
        assert set(freq) == {(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)}
        # p = 1/4, sigma = sqrt(p(1-p)/count); allow 4 sigma
        sigma = (0.25 * 0.75 / count) ** 0.5
        for tree_key in freq:
            assert abs(freq[tree_key] / count - 0.25) < 4 * sigma


def test_wilson_uniform_on_g3():
    g = build_grid(3)
    count = 40000
    freq = Counter(sample_branch_sets(g, "wilson", count, seed=7))
    assert len(freq) == 192
    sigma = ((1 / 192) * (191 / 192) / count) ** 0.5
    worst = max(abs(v / count - 1 / 192) for v in freq.values())
    assert worst < 5 * sigma


def test_family_spec_validation():
    assert FamilySpec("double-spiral", n=4).kind == "double_spiral"
    assert FamilySpec("fractal", n=8).k == 3
    assert FamilySpec("fractal", k=2).side == 4
    with pytest.raises(ValueError, match="unknown family"):
        FamilySpec("star", n=3)
    with pytest.raises(ValueError, match="2\\^k"):
        FamilySpec("fractal", n=6)
    with pytest.raises(ValueError):
        FamilySpec("centipede", n=1)
    with pytest.raises(ValueError):
        FamilySpec("centipede")


def test_build_family_dispatch():
    assert build_family(FamilySpec("centipede", n=3)).branch_count == 8
    assert build_family(FamilySpec("double-spiral", n=4)).branch_count == 15
    assert build_family(FamilySpec("fractal", k=2)).branch_count == 15
    t1 = build_family(FamilySpec("kruskal", n=3, seed=4))
    t2 = sample_kruskal(build_grid(3), 4)
    assert t1.branches == t2.branches
    w1 = build_family(FamilySpec("wilson", n=3, seed=4))
    w2 = sample_wilson(build_grid(3), 4)
    assert w1.branches == w2.branches


def test_ascii_art_g2():
    t = from_edges(build_grid(2), [0, 1, 3])
    art = ascii_art(t)
    lines = art.splitlines()
    assert lines[0] == "o-o"
    assert lines[1] == "|"
    assert lines[2] == "o-o"
    art3 = ascii_art(centipede(3))
    assert art3.splitlines()[0] == "o-o-o"
