"""Named spanning-tree families and randomized samplers.

Deterministic generators:
  * centipede(n): a top-row spine with every vertical edge as a leg.
  * double_spiral(n): one Hamiltonian path made of two point-symmetric
    spiral arms grown from a central domino and clipped at the boundary.
  * fractal(k): a self-similar tree of G(2^k) built from four translated
    copies of the previous level joined by a central 3-edge U.

Randomized samplers:
  * sample_kruskal: minimum-spanning-tree law under i.i.d. uniform edge
    weights, realized as Kruskal on a uniformly random edge permutation.
  * sample_wilson: uniform spanning tree via loop-erased random walks.

All sampling is reproducible through seeding.sample_rng: batch element i
always uses the stream keyed by (seed, i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .grids import GeneralGraph, GridGraph, InvariantError, build_grid
from .seeding import sample_rng
from .trees import SpanningTree, from_edges

FAMILY_KINDS = ("centipede", "double_spiral", "fractal", "kruskal", "wilson")


def centipede(n: int) -> SpanningTree:
    """Spine along the whole top row, a leg down every column.

    Chords are the horizontal edges of rows 2..n; the chord in row r+1
    closes a cycle through two legs of length r and one spine edge, so
    its degree is 2r+1 and each odd degree 3..2n-1 carries mass 1/(n-1).
    """
    if n < 2:
        raise ValueError("centipede needs n >= 2")
    g = build_grid(n)
    ids = []
    for c in range(n - 1):
        ids.append(g.edge_index(g.vertex_id(0, c), g.vertex_id(0, c + 1)))
    for r in range(n - 1):
        for c in range(n):
            ids.append(g.edge_index(g.vertex_id(r, c), g.vertex_id(r + 1, c)))
    return from_edges(g, ids)


# Directions as (dr, dc). Arm A turns through S, E, N, W; arm B is the
# point reflection of A about the domino midpoint, so its cycle is the
# negation N, W, S, E. Both are left-turn cycles in their own frame.
_ARM_A_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))
_ARM_B_DIRS = ((-1, 0), (0, -1), (1, 0), (0, 1))


class _SpiralArm:
    __slots__ = ("pos", "dirs", "di", "run_len", "run_left", "planned",
                 "halted", "cells")

    def __init__(self, pos: tuple[int, int], dirs):
        self.pos = pos
        self.dirs = dirs
        self.di = 0
        self.run_len = 1
        self.run_left = 1
        self.planned = True
        self.halted = False
        self.cells = [pos]

    def step(self, n: int, visited: set[tuple[int, int]]) -> None:
        r, c = self.pos
        if self.planned:
            dr, dc = self.dirs[self.di]
            nr, nc = r + dr, c + dc
            if 0 <= nr < n and 0 <= nc < n and (nr, nc) not in visited:
                self._move(nr, nc, visited)
                self.run_left -= 1
                if self.run_left == 0:
                    # turn left; each completed run grows by one cell
                    self.di = (self.di + 1) % 4
                    self.run_len += 1
                    self.run_left = self.run_len
                return
            # boundary or the other arm is in the way: abandon the plan
            self.planned = False
        for turn in range(4):
            dr, dc = self.dirs[(self.di + turn) % 4]
            nr, nc = r + dr, c + dc
            if 0 <= nr < n and 0 <= nc < n and (nr, nc) not in visited:
                self.di = (self.di + turn) % 4
                self._move(nr, nc, visited)
                return
        self.halted = True

    def _move(self, nr, nc, visited) -> None:
        self.pos = (nr, nc)
        visited.add(self.pos)
        self.cells.append(self.pos)


def double_spiral(n: int) -> SpanningTree:
    """Two interleaved spiral arms joined across a central domino.

    Each arm walks straight runs of 1, 2, 3, ... cells with a fixed
    left-turn cycle while the plan fits; once a planned step is blocked
    the arm becomes a greedy wall follower (straight, else successive
    left turns) until it has nowhere to go. Arms alternate single steps
    so they wind around each other. The result is a Hamiltonian path.
    """
    if n < 2:
        raise ValueError("double spiral needs n >= 2")
    g = build_grid(n)
    r0 = (n + 1) // 2 - 1
    a0, b0 = (r0, r0), (r0, r0 + 1)
    visited = {a0, b0}
    arms = (_SpiralArm(a0, _ARM_A_DIRS), _SpiralArm(b0, _ARM_B_DIRS))
    while not all(arm.halted for arm in arms):
        for arm in arms:
            if not arm.halted:
                arm.step(n, visited)
    if len(visited) != n * n:
        raise InvariantError(
            f"double spiral covered {len(visited)} of {n * n} cells"
        )
    ids = [g.edge_index(g.vertex_id(*a0), g.vertex_id(*b0))]
    for arm in arms:
        for p, q in zip(arm.cells, arm.cells[1:]):
            ids.append(g.edge_index(g.vertex_id(*p), g.vertex_id(*q)))
    return from_edges(g, ids)


# One level of the fractal: a 2x2 block holding three of its four edges,
# i.e. a "U" open toward the named side.
_BLOCK_EDGES = (
    ((0, 0), (0, 1)),
    ((0, 0), (1, 0)),
    ((0, 1), (1, 1)),
    ((1, 0), (1, 1)),
)
_SIDE_EDGE = {
    "N": ((0, 0), (0, 1)),
    "W": ((0, 0), (1, 0)),
    "E": ((0, 1), (1, 1)),
    "S": ((1, 0), (1, 1)),
}

# Frozen orientation parameters, pinned empirically: identical translated
# quadrant copies with the central U aligned to the base U are the unique
# arrangement (up to global rotation) whose limiting degree masses
# stabilize at 5/12, 1/4, 1/12, 1/12, ... (see decay.fractal_p_infinity).
# Pinwheel-rotated and mirrored placements all miss those values.
_FRACTAL_BASE = "N"
_FRACTAL_SCHEME = (("NW", "id"), ("NE", "id"), ("SE", "id"), ("SW", "id"))
_FRACTAL_CENTRAL = "N"


def _u_edges(side: str):
    missing = _SIDE_EDGE[side]
    return [e for e in _BLOCK_EDGES if e != missing]


def _apply_transform(name: str, s: int, rc: tuple[int, int]) -> tuple[int, int]:
    r, c = rc
    if name == "id":
        return (r, c)
    if name == "rot90":
        return (c, s - 1 - r)
    if name == "rot180":
        return (s - 1 - r, s - 1 - c)
    if name == "rot270":
        return (s - 1 - c, r)
    if name == "mirror_h":
        return (r, s - 1 - c)
    if name == "mirror_v":
        return (s - 1 - r, c)
    raise ValueError(f"unknown transform {name!r}")


def _canon_edge(p, q):
    return (p, q) if p <= q else (q, p)


def _fractal_coord_edges(k: int, base: str, scheme, central: str):
    """Edge set of the level-k fractal in (row, col) coordinates."""
    edges = {_canon_edge(*e) for e in _u_edges(base)}
    offsets = {"NW": (0, 0), "NE": (0, 1), "SW": (1, 0), "SE": (1, 1)}
    for level in range(1, k):
        s = 2 ** level
        grown = set()
        for quadrant, tname in scheme:
            dr = offsets[quadrant][0] * s
            dc = offsets[quadrant][1] * s
            for p, q in edges:
                tp = _apply_transform(tname, s, p)
                tq = _apply_transform(tname, s, q)
                grown.add(_canon_edge(
                    (tp[0] + dr, tp[1] + dc), (tq[0] + dr, tq[1] + dc)
                ))
        for p, q in _u_edges(central):
            grown.add(_canon_edge(
                (p[0] + s - 1, p[1] + s - 1), (q[0] + s - 1, q[1] + s - 1)
            ))
        edges = grown
    return edges


def _fractal_tree(k: int, base: str, scheme, central: str) -> SpanningTree:
    g = build_grid(2 ** k)
    ids = [
        g.edge_index(g.vertex_id(*p), g.vertex_id(*q))
        for p, q in _fractal_coord_edges(k, base, scheme, central)
    ]
    return from_edges(g, ids)


def fractal(k: int) -> SpanningTree:
    """Level-k self-similar tree of G(2^k).

    Level 1 is a 3-edge U; level k+1 is four level-k copies, one per
    quadrant, joined by a central U across the middle 2x2 block of
    vertices. The three central edges merge four disjoint trees, so
    validity holds at every level by construction.
    """
    if k < 1:
        raise ValueError("fractal needs k >= 1")
    return _fractal_tree(k, _FRACTAL_BASE, _FRACTAL_SCHEME, _FRACTAL_CENTRAL)


def kruskal_branches(g: GeneralGraph, rng: np.random.Generator) -> tuple[int, ...]:
    """Branch indices of one Kruskal draw; fast path, no tree object."""
    order = rng.permutation(len(g.edges)).tolist()
    parent = list(range(g.vertex_count))
    edges = g.edges
    chosen = []
    need = g.vertex_count - 1
    for e in order:
        u, v = edges[e]
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u != v:
            parent[u] = v
            chosen.append(e)
            if len(chosen) == need:
                break
    return tuple(sorted(chosen))


def wilson_branches(g: GeneralGraph, rng: np.random.Generator) -> tuple[int, ...]:
    """Branch indices of one uniform spanning tree via loop-erased walks."""
    v = g.vertex_count
    adj = g.adjacency
    in_tree = bytearray(v)
    in_tree[0] = 1
    next_vertex = [0] * v
    next_edge = [0] * v
    buf = rng.random(256)
    ptr = 0
    for start in range(1, v):
        u = start
        while not in_tree[u]:
            if ptr == len(buf):
                buf = rng.random(256)
                ptr = 0
            nbrs = adj[u]
            w, e = nbrs[int(buf[ptr] * len(nbrs))]
            ptr += 1
            next_vertex[u] = w
            next_edge[u] = e
            u = w
        u = start
        while not in_tree[u]:
            in_tree[u] = 1
            u = next_vertex[u]
    return tuple(sorted(next_edge[x] for x in range(1, v)))


def sample_kruskal(g: GeneralGraph, seed: int) -> SpanningTree:
    """One draw from the minimum-spanning-tree distribution."""
    if not g.is_connected:
        raise ValueError("not connected")
    return SpanningTree(g, frozenset(kruskal_branches(g, sample_rng(seed, 0))))


def sample_wilson(g: GeneralGraph, seed: int) -> SpanningTree:
    """One draw from the uniform spanning tree distribution."""
    if not g.is_connected:
        raise ValueError("not connected")
    return SpanningTree(g, frozenset(wilson_branches(g, sample_rng(seed, 0))))


def sample_branch_sets(
    g: GeneralGraph, kind: str, count: int, seed: int
) -> Iterator[tuple[int, ...]]:
    """Stream `count` sampled branch tuples; element i is reproducible in
    isolation as the (seed, i) stream."""
    if not g.is_connected:
        raise ValueError("not connected")
    if kind == "kruskal":
        draw = kruskal_branches
    elif kind == "wilson":
        draw = wilson_branches
    else:
        raise ValueError(f"unknown sampler kind {kind!r}")
    for i in range(count):
        yield draw(g, sample_rng(seed, i))


@dataclass(frozen=True)
class FamilySpec:
    """A family kind plus the parameters needed to build one tree."""

    kind: str
    n: Optional[int] = None
    k: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind.replace("-", "_"))
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family {self.kind!r}")
        if self.kind == "fractal":
            if self.k is None:
                if self.n is None:
                    raise ValueError("fractal needs k (or n = 2^k)")
                k = (self.n - 1).bit_length()
                if self.n != 2 ** k or self.n < 2:
                    raise ValueError("fractal needs n = 2^k")
                object.__setattr__(self, "k", k)
            if self.k < 1:
                raise ValueError("fractal needs k >= 1")
        elif self.n is None or self.n < 2:
            raise ValueError(f"{self.kind} needs n >= 2")

    @property
    def side(self) -> int:
        return 2 ** self.k if self.kind == "fractal" else self.n


def build_family(spec: FamilySpec) -> SpanningTree:
    if spec.kind == "centipede":
        return centipede(spec.n)
    if spec.kind == "double_spiral":
        return double_spiral(spec.n)
    if spec.kind == "fractal":
        return fractal(spec.k)
    g = build_grid(spec.n)
    seed = 0 if spec.seed is None else spec.seed
    if spec.kind == "kruskal":
        return sample_kruskal(g, seed)
    return sample_wilson(g, seed)


def ascii_art(t: SpanningTree) -> str:
    """Plain-text rendering of a grid tree: o for vertices, - and | for
    branches."""
    g = t.graph
    if not isinstance(g, GridGraph):
        raise ValueError("ascii rendering requires a grid host")
    n = g.n
    size = 2 * n - 1
    canvas = [[" "] * size for _ in range(size)]
    for r in range(n):
        for c in range(n):
            canvas[2 * r][2 * c] = "o"
    for e in t.branches:
        u, v = g.edges[e]
        (r1, c1), (r2, c2) = g.vertex_rc(u), g.vertex_rc(v)
        canvas[r1 + r2][c1 + c2] = "-" if r1 == r2 else "|"
    return "\n".join("".join(row).rstrip() for row in canvas)
