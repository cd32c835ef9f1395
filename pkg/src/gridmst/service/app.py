"""HTTP facade over the library: tree generation, probability,
scatter/conjecture experiments, and decay bounds.

Status mapping: domain validation errors become 400 (pydantic schema
violations stay 422), enumeration-guard refusals 409, and internal
invariant failures 500.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..decay import decay_lower_bound, family_power_series, fractal_p_infinity
from ..experiments import conjecture_rows, stretch_scatter
from ..families import FamilySpec, ascii_art, build_family
from ..grids import GuardError, InvariantError, build_grid
from ..probability import exact_to_estimate, prob_estimate, prob_exact, prob_exact_dual
from ..trees import (
    SpanningTree,
    avg_stretch,
    bipartite,
    boundedness_statistic,
    degree_mass,
    expected_cut_edges,
    from_edges,
    neighbor_overlap_ratio,
)
from .schemas import (
    ConjectureResponse,
    ConjectureRequest,
    ConjectureRowJson,
    DecayRequest,
    DecayResponse,
    DegreeMassRow,
    FamilyParams,
    HealthResponse,
    MassTableRow,
    ProbRequest,
    ProbResponse,
    ScatterRequest,
    ScatterResponse,
    ScatterRowJson,
    TreeJson,
    TreeRequest,
    TreeResponse,
    TreeStats,
    fraction_str,
)

app = FastAPI(title="gridmst", version=__version__)


@app.exception_handler(GuardError)
async def _guard_handler(request: Request, exc: GuardError):
    return JSONResponse(status_code=409, content={"detail": str(exc)})


@app.exception_handler(InvariantError)
async def _invariant_handler(request: Request, exc: InvariantError):
    return JSONResponse(status_code=500, content={"detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _build_tree(params: FamilyParams) -> SpanningTree:
    spec = FamilySpec(params.family, n=params.n, k=params.k, seed=params.seed)
    return build_family(spec)


def _resolve_tree(req: ProbRequest) -> SpanningTree:
    if req.tree is not None:
        return from_edges(build_grid(req.tree.n), req.tree.branches)
    return _build_tree(req.family)


def _tree_stats(t: SpanningTree) -> TreeStats:
    b = bipartite(t)
    dm = degree_mass(b)
    hist = b.degree_histogram()
    return TreeStats(
        branch_count=b.M,
        chord_count=b.N,
        total_links=b.total_links,
        avg_branch_degree=fraction_str(Fraction(b.total_links, b.M)),
        avg_chord_degree=fraction_str(Fraction(b.total_links, b.N)),
        avg_stretch=fraction_str(avg_stretch(t)),
        expected_cut_edges=fraction_str(expected_cut_edges(t)),
        neighbor_overlap=fraction_str(neighbor_overlap_ratio(b)),
        boundedness=fraction_str(boundedness_statistic(b, t.graph.n)),
        degree_mass=[
            DegreeMassRow(d=d, count=count, mass=fraction_str(dm.masses[d]))
            for d, count in sorted(hist.items())
        ],
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/tree", response_model=TreeResponse)
def make_tree(req: TreeRequest) -> TreeResponse:
    t = _build_tree(req)
    return TreeResponse(
        tree=TreeJson(n=t.graph.n, branches=sorted(t.branches)),
        stats=_tree_stats(t),
        ascii_art=ascii_art(t) if req.include_ascii else None,
    )


@app.post("/prob", response_model=ProbResponse)
def probability(req: ProbRequest) -> ProbResponse:
    t = _resolve_tree(req)
    if req.mode == "estimate":
        est = prob_estimate(t, req.samples, req.seed)
        return ProbResponse(
            mode=req.mode,
            log_prob=est.log_value,
            samples=est.samples,
            log_std_err=est.log_std_err,
            seed=req.seed,
        )
    if req.mode == "exact":
        p = prob_exact(t, max_branches=req.max_exact_m)
    else:
        p = prob_exact_dual(t, max_chords=req.max_exact_n)
    return ProbResponse(
        mode=req.mode,
        log_prob=exact_to_estimate(p).log_value,
        probability=fraction_str(p),
    )


@app.post("/scatter", response_model=ScatterResponse)
def scatter(req: ScatterRequest) -> ScatterResponse:
    result = stretch_scatter(req.n, req.trees_per_sampler, req.samples, req.seed)
    return ScatterResponse(
        n=result.n,
        trees_per_sampler=result.trees_per_sampler,
        samples=result.samples,
        seed=result.seed,
        pearson=result.pearson,
        rows=[
            ScatterRowJson(
                sampler=r.sampler,
                avg_stretch=float(r.avg_stretch),
                log_prob_estimate=r.log_prob,
            )
            for r in result.rows
        ],
    )


_DEFAULT_D_MAX = {"fractal": 125, "uniform": 99999}


@app.post("/decay", response_model=DecayResponse)
def decay_bound(req: DecayRequest) -> DecayResponse:
    kind = req.family.replace("-", "_")
    ps = family_power_series(kind, req.d_max)
    bound = decay_lower_bound(ps)
    effective = req.d_max if req.d_max is not None else _DEFAULT_D_MAX.get(kind)
    table = None
    if kind == "fractal":
        table = [
            MassTableRow(d=d, mass=fraction_str(mass))
            for d, mass in sorted(fractal_p_infinity(effective).items())
        ]
    series = None
    if req.include_series:
        step = req.series_points - 1
        series = [(j / step, ps.evaluate(j / step)) for j in range(req.series_points)]
    return DecayResponse(
        family=req.family,
        d_max=effective,
        f_bar=bound.f_bar,
        e_f_bar=bound.bound_reciprocal,
        q_lower=bound.q_lower,
        p_table=table,
        series=series,
    )


@app.post("/conjecture", response_model=ConjectureResponse)
def conjecture(req: ConjectureRequest) -> ConjectureResponse:
    rows = conjecture_rows(req.family, req.sizes, req.samples, req.seed)
    return ConjectureResponse(
        family=req.family,
        samples=req.samples,
        seed=req.seed,
        rows=[
            ConjectureRowJson(
                n=r.size,
                mean_log_a=r.mean_log_gmean,
                sigma_sq=r.log_variance,
                scaled_half_variance=r.scaled_half_variance,
                implied_ratio=r.implied_ratio,
            )
            for r in rows
        ],
    )
