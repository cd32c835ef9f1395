"""Spanning trees, fundamental cycles and cuts, and per-tree statistics.

A spanning tree splits the host's edges into branches (tree edges) and
chords. Each chord closes a unique fundamental cycle; each branch defines
a fundamental cut. The bipartite structure linking chords to the branches
on their cycles drives everything downstream: degree masses, stretch,
passing times, and the probability machinery.

Statistics here are exact rationals. Floats appear only when callers
format reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .grids import GeneralGraph, GridGraph, build_grid


class TreeError(ValueError):
    """Base class for spanning-tree construction failures."""


class CycleError(TreeError):
    """Edge set contains a cycle."""


class NotSpanningError(TreeError):
    """Edge set does not reach every vertex."""


class WrongSizeError(TreeError):
    """Edge set has the wrong cardinality for a spanning tree."""


class SpanningTree:
    """A validated spanning tree of a host graph, rooted at vertex 0.

    branches is a frozenset of host edge indices. Parent pointers give
    O(path length) ancestor walks for cycle and distance queries.
    """

    def __init__(self, graph: GeneralGraph, branches: frozenset[int]):
        self.graph = graph
        self.branches = branches
        v = graph.vertex_count
        adj: list[list[tuple[int, int]]] = [[] for _ in range(v)]
        for e in branches:
            a, b = graph.edges[e]
            adj[a].append((b, e))
            adj[b].append((a, e))
        self.branch_adjacency = tuple(tuple(a) for a in adj)
        parent_vertex = [-1] * v
        parent_edge = [-1] * v
        depth = [0] * v
        seen = bytearray(v)
        seen[0] = 1
        queue = [0]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for w, e in self.branch_adjacency[u]:
                if not seen[w]:
                    seen[w] = 1
                    parent_vertex[w] = u
                    parent_edge[w] = e
                    depth[w] = depth[u] + 1
                    queue.append(w)
        if head != v:
            raise NotSpanningError("branch set does not span the graph")
        self.parent_vertex = tuple(parent_vertex)
        self.parent_edge = tuple(parent_edge)
        self.depth = tuple(depth)
        self.chords: tuple[int, ...] = tuple(
            e for e in range(len(graph.edges)) if e not in branches
        )

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    @property
    def chord_count(self) -> int:
        return len(self.chords)

    def path_edges(self, u: int, v: int) -> list[int]:
        """Edges of the tree path from u to v (u-side first)."""
        up: list[int] = []
        down: list[int] = []
        du, dv = self.depth[u], self.depth[v]
        while du > dv:
            up.append(self.parent_edge[u])
            u = self.parent_vertex[u]
            du -= 1
        while dv > du:
            down.append(self.parent_edge[v])
            v = self.parent_vertex[v]
            dv -= 1
        while u != v:
            up.append(self.parent_edge[u])
            down.append(self.parent_edge[v])
            u = self.parent_vertex[u]
            v = self.parent_vertex[v]
        down.reverse()
        return up + down

    def distance(self, u: int, v: int) -> int:
        """Path length between u and v inside the tree."""
        du, dv = self.depth[u], self.depth[v]
        dist = 0
        while du > dv:
            u = self.parent_vertex[u]
            du -= 1
            dist += 1
        while dv > du:
            v = self.parent_vertex[v]
            dv -= 1
            dist += 1
        while u != v:
            u = self.parent_vertex[u]
            v = self.parent_vertex[v]
            dist += 2
        return dist

    def __repr__(self) -> str:
        return (
            f"SpanningTree(branches={self.branch_count}, "
            f"chords={self.chord_count})"
        )


def from_edges(g: GeneralGraph, edge_set: Iterable[int]) -> SpanningTree:
    """Validate an edge-index set as a spanning tree of g.

    Raises NotSpanningError, CycleError, or WrongSizeError so callers can
    distinguish the failure mode. Coverage is diagnosed before cycles: an
    edge set missing a vertex reports "not spanning" even though it must
    also contain a cycle when it has |V|-1 edges.
    """
    edges = sorted(set(edge_set))
    for e in edges:
        if not (0 <= e < len(g.edges)):
            raise ValueError(f"edge index {e} out of range")
    parent = list(range(g.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = g.vertex_count
    for e in edges:
        u, v = g.edges[e]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            components -= 1
    if components > 1:
        if len(edges) != g.vertex_count - 1:
            raise WrongSizeError(
                f"expected {g.vertex_count - 1} edges, got {len(edges)}"
            )
        raise NotSpanningError("edge set is not spanning")
    # connected and covering: any surplus edge means a cycle
    if len(edges) != g.vertex_count - 1:
        raise CycleError("edge set contains a cycle")
    return SpanningTree(g, frozenset(edges))


def fundamental_cycle(t: SpanningTree, chord: int) -> list[int]:
    """The unique cycle closed by adding the chord: chord first, then the
    tree path between its endpoints."""
    if not (0 <= chord < len(t.graph.edges)):
        raise ValueError(f"edge index {chord} out of range")
    if chord in t.branches:
        raise ValueError(f"edge {chord} is a branch, not a chord")
    u, v = t.graph.edges[chord]
    return [chord] + t.path_edges(u, v)


def fundamental_cut(t: SpanningTree, branch: int) -> list[int]:
    """The branch plus every chord joining the two components of T - branch."""
    if branch not in t.branches:
        raise ValueError(f"edge {branch} is not a branch of the tree")
    a, b = t.graph.edges[branch]
    child = a if t.depth[a] > t.depth[b] else b
    side = bytearray(t.graph.vertex_count)
    side[child] = 1
    stack = [child]
    while stack:
        u = stack.pop()
        for w, e in t.branch_adjacency[u]:
            if e != branch and not side[w]:
                side[w] = 1
                stack.append(w)
    cut = [branch]
    for c in t.chords:
        u, v = t.graph.edges[c]
        if side[u] != side[v]:
            cut.append(c)
    return cut


@dataclass(frozen=True)
class BipartiteCompanion:
    """Incidence between a tree's branches and chords.

    Branch node i stands for host edge branch_edges[i]; chord node j for
    chord_edges[j] (both ascending by edge index). A chord links to every
    branch on its fundamental cycle, so chord degree = cycle length - 1
    and branch degree = |fundamental cut| - 1.
    """

    M: int
    N: int
    branch_edges: tuple[int, ...]
    chord_edges: tuple[int, ...]
    chord_neighbors: tuple[tuple[int, ...], ...]
    branch_neighbors: tuple[tuple[int, ...], ...]

    @property
    def chord_degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.chord_neighbors)

    @property
    def branch_degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.branch_neighbors)

    @property
    def total_links(self) -> int:
        return sum(len(nb) for nb in self.chord_neighbors)

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for d in self.chord_degrees:
            hist[d] = hist.get(d, 0) + 1
        return dict(sorted(hist.items()))


def bipartite(t: SpanningTree) -> BipartiteCompanion:
    """Build the branch/chord incidence from fundamental cycles."""
    branch_edges = tuple(sorted(t.branches))
    branch_node = {e: i for i, e in enumerate(branch_edges)}
    chord_edges = t.chords
    chord_neighbors = []
    branch_neighbors: list[list[int]] = [[] for _ in branch_edges]
    for j, c in enumerate(chord_edges):
        cyc = fundamental_cycle(t, c)
        nodes = sorted(branch_node[e] for e in cyc[1:])
        chord_neighbors.append(tuple(nodes))
        for i in nodes:
            branch_neighbors[i].append(j)
    return BipartiteCompanion(
        M=len(branch_edges),
        N=len(chord_edges),
        branch_edges=branch_edges,
        chord_edges=chord_edges,
        chord_neighbors=tuple(chord_neighbors),
        branch_neighbors=tuple(tuple(nb) for nb in branch_neighbors),
    )


@dataclass(frozen=True)
class DegreeMass:
    """Exact distribution of chord degrees: d -> fraction of chords."""

    masses: dict[int, Fraction]
    n_chords: int

    def mass(self, d: int) -> Fraction:
        return self.masses.get(d, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.masses))

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self.masses.items())


def degree_mass(b: BipartiteCompanion) -> DegreeMass:
    if b.N == 0:
        raise ValueError("no chords")
    masses = {
        d: Fraction(count, b.N) for d, count in b.degree_histogram().items()
    }
    total = sum(masses.values())
    if total != 1:
        raise AssertionError("degree masses must sum to 1")
    return DegreeMass(masses=masses, n_chords=b.N)


def avg_stretch(t: SpanningTree) -> Fraction:
    """Average over all host edges of tree distance between endpoints.

    Branches contribute 1; a chord contributes its cycle length minus 1.
    Computed edge by edge, independent of the bipartite construction.
    """
    total = 0
    for e, (u, v) in enumerate(t.graph.edges):
        total += 1 if e in t.branches else t.distance(u, v)
    return Fraction(total, len(t.graph.edges))


def expected_cut_edges(t: SpanningTree) -> Fraction:
    """Mean branch degree plus one: the expected size of a random
    branch's fundamental cut."""
    b = bipartite(t)
    return Fraction(b.total_links, b.M) + 1


def neighbor_overlap_ratio(b: BipartiteCompanion) -> Fraction:
    """Fraction of ordered chord pairs (v, w), v != w, sharing at least
    one common branch neighbor. Zero when there are fewer than 2 chords."""
    if b.N <= 1:
        return Fraction(0)
    sets = [frozenset(nb) for nb in b.chord_neighbors]
    shared = 0
    for i in range(b.N):
        si = sets[i]
        for j in range(i + 1, b.N):
            if not si.isdisjoint(sets[j]):
                shared += 1
    return Fraction(2 * shared, b.N * (b.N - 1))


def boundedness_statistic(b: BipartiteCompanion, n: int) -> Fraction:
    """Average bipartite node degree divided by n^2.

    Stays bounded away from 0 exactly when average degree grows like the
    branch count; tends to 0 for families with slowly growing degrees.
    """
    if n < 1:
        raise ValueError("side length must be positive")
    return Fraction(2 * b.total_links, (b.M + b.N) * n * n)


def tree_to_json(t: SpanningTree) -> str:
    if not isinstance(t.graph, GridGraph):
        raise ValueError("tree serialization requires a grid host")
    return json.dumps({"n": t.graph.n, "branches": sorted(t.branches)})


def tree_from_json(text: str, graph: Optional[GridGraph] = None) -> SpanningTree:
    obj = json.loads(text)
    if not isinstance(obj, dict) or "n" not in obj or "branches" not in obj:
        raise ValueError("tree JSON needs 'n' and 'branches'")
    n = int(obj["n"])
    if graph is None:
        graph = build_grid(n)
    elif graph.n != n:
        raise ValueError(f"tree JSON is for n={n}, host has n={graph.n}")
    return from_edges(graph, [int(e) for e in obj["branches"]])


def degree_histogram_csv(b: BipartiteCompanion) -> str:
    """CSV rows d,count,mass with exact masses as num/den strings."""
    dm = degree_mass(b)
    lines = ["d,count,mass"]
    for d, count in b.degree_histogram().items():
        m = dm.mass(d)
        lines.append(f"{d},{count},{m.numerator}/{m.denominator}")
    return "\n".join(lines) + "\n"
