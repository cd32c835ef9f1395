"""Minimum spanning tree probabilities of grid spanning trees.

Core pipeline: build a grid, pick or sample a spanning tree, form its
branch/chord bipartite structure, then compute the probability that the
tree is the minimum spanning tree under i.i.d. uniform edge weights:
exactly for small grids, by Monte Carlo over branch orders in general,
and asymptotically through degree-mass power series.
"""

__version__ = "0.1.0"

from .grids import (
    CATALAN,
    GeneralGraph,
    GridGraph,
    GuardError,
    InvariantError,
    build_grid,
    count_spanning_trees,
    graph_from_json,
    graph_to_json,
    spanning_tree_edge_sets,
    tree_growth_base,
)
from .trees import (
    BipartiteCompanion,
    CycleError,
    DegreeMass,
    NotSpanningError,
    SpanningTree,
    TreeError,
    WrongSizeError,
    avg_stretch,
    bipartite,
    boundedness_statistic,
    degree_histogram_csv,
    degree_mass,
    expected_cut_edges,
    from_edges,
    neighbor_overlap_ratio,
    tree_from_json,
    tree_to_json,
)
from .families import (
    FAMILY_KINDS,
    FamilySpec,
    ascii_art,
    build_family,
    centipede,
    double_spiral,
    fractal,
    sample_branch_sets,
    sample_kruskal,
    sample_wilson,
)
from .probability import (
    BoundReport,
    GmeanStatistic,
    PassingTimes,
    ProbEstimate,
    bound_check,
    gmean_statistic,
    mean_passing_times,
    passing_times,
    passing_times_via_forest,
    prob_estimate,
    prob_exact,
    prob_exact_dual,
)
from .decay import (
    DecayBound,
    PowerSeries,
    ProfileReport,
    approx_passing_time,
    decay_lower_bound,
    expected_passing_time,
    family_power_series,
    fractal_p_infinity,
    geometric_mean,
    passing_profile_vs_f,
    uniform_family_series,
)
from .experiments import (
    ConjectureRow,
    ScatterResult,
    ScatterRow,
    conjecture_rows,
    stretch_scatter,
)

__all__ = [
    "CATALAN",
    "BipartiteCompanion",
    "BoundReport",
    "ConjectureRow",
    "CycleError",
    "DecayBound",
    "DegreeMass",
    "FAMILY_KINDS",
    "FamilySpec",
    "GeneralGraph",
    "GmeanStatistic",
    "GridGraph",
    "GuardError",
    "InvariantError",
    "NotSpanningError",
    "PassingTimes",
    "PowerSeries",
    "ProbEstimate",
    "ProfileReport",
    "ScatterResult",
    "ScatterRow",
    "SpanningTree",
    "TreeError",
    "WrongSizeError",
    "__version__",
    "approx_passing_time",
    "ascii_art",
    "avg_stretch",
    "bipartite",
    "bound_check",
    "boundedness_statistic",
    "build_family",
    "build_grid",
    "centipede",
    "conjecture_rows",
    "count_spanning_trees",
    "decay_lower_bound",
    "degree_histogram_csv",
    "degree_mass",
    "double_spiral",
    "expected_cut_edges",
    "expected_passing_time",
    "family_power_series",
    "fractal",
    "fractal_p_infinity",
    "from_edges",
    "geometric_mean",
    "gmean_statistic",
    "graph_from_json",
    "graph_to_json",
    "mean_passing_times",
    "neighbor_overlap_ratio",
    "passing_profile_vs_f",
    "passing_times",
    "passing_times_via_forest",
    "prob_estimate",
    "prob_exact",
    "prob_exact_dual",
    "sample_branch_sets",
    "sample_kruskal",
    "sample_wilson",
    "spanning_tree_edge_sets",
    "stretch_scatter",
    "tree_from_json",
    "tree_growth_base",
    "tree_to_json",
    "uniform_family_series",
]
