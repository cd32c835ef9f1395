"""Grid and general graph types plus exact spanning-tree counting.

Vertices of the n-by-n grid are indexed row-major, row 0 at the top.
Edge indices follow a fixed canonical sweep (per row: horizontals, then
the verticals leaving that row downward) so that seeded experiments are
reproducible across runs and machines.
"""

from __future__ import annotations

import json
import math
from typing import Iterator, Optional, Sequence

# Catalan's constant, accurate well past 12 digits.
CATALAN = 0.915965594177219015054603514932

MAX_DETERMINANT_VERTICES = 400
MAX_ENUMERATION_EDGES = 20


class GuardError(Exception):
    """Raised when a size guard refuses an exact computation."""


class InvariantError(Exception):
    """Raised when an internal consistency check fails."""


class GeneralGraph:
    """Simple undirected graph with stable integer edge indices."""

    def __init__(self, vertex_count: int, edges: Sequence[tuple[int, int]]):
        if vertex_count < 1:
            raise ValueError("vertex_count must be positive")
        norm = []
        seen = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        self.vertex_count = vertex_count
        self.edges: tuple[tuple[int, int], ...] = tuple(norm)
        self._edge_ids = {e: i for i, e in enumerate(self.edges)}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(a) for a in adj
        )
        self.is_connected = self._check_connected()

    def _check_connected(self) -> bool:
        seen = bytearray(self.vertex_count)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for v, _ in self.adjacency[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    stack.append(v)
        return count == self.vertex_count

    def edge_index(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._edge_ids[key]
        except KeyError:
            raise ValueError(f"no edge between {u} and {v}") from None

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(vertices={self.vertex_count}, "
            f"edges={len(self.edges)})"
        )


class GridGraph(GeneralGraph):
    """The n-by-n square lattice with canonical vertex and edge order."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("grid side must be >= 1")
        edges = []
        for r in range(n):
            for c in range(n - 1):
                edges.append((r * n + c, r * n + c + 1))
            if r < n - 1:
                for c in range(n):
                    edges.append((r * n + c, (r + 1) * n + c))
        self.n = n
        super().__init__(n * n, edges)

    def vertex_id(self, row: int, col: int) -> int:
        if not (0 <= row < self.n and 0 <= col < self.n):
            raise ValueError(f"({row},{col}) outside {self.n}x{self.n} grid")
        return row * self.n + col

    def vertex_rc(self, v: int) -> tuple[int, int]:
        return divmod(v, self.n)


def build_grid(n: int) -> GridGraph:
    """Canonical n-by-n grid graph; n >= 1."""
    return GridGraph(n)


def _det_bareiss(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (exact)."""
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, size):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, size):
                # Bareiss update: division is exact by construction
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def count_spanning_trees(g: GeneralGraph) -> int:
    """Exact spanning-tree count via the matrix-tree determinant.

    Uses integer-only elimination so the result is exact for any graph
    within the vertex guard.
    """
    if not g.is_connected:
        raise ValueError("not connected")
    if g.vertex_count > MAX_DETERMINANT_VERTICES:
        raise GuardError(
            f"{g.vertex_count} vertices exceeds exact-count guard "
            f"({MAX_DETERMINANT_VERTICES})"
        )
    v = g.vertex_count
    if v == 1:
        return 1
    # reduced Laplacian: drop row/column 0
    lap = [[0] * (v - 1) for _ in range(v - 1)]
    for a, b in g.edges:
        if a > 0:
            lap[a - 1][a - 1] += 1
        if b > 0:
            lap[b - 1][b - 1] += 1
        if a > 0 and b > 0:
            lap[a - 1][b - 1] -= 1
            lap[b - 1][a - 1] -= 1
    det = _det_bareiss(lap)
    if det <= 0:
        raise InvariantError("matrix-tree determinant must be positive")
    return det


def tree_growth_base() -> float:
    """Growth base exp(4*Catalan/pi) of the grid spanning-tree count."""
    return math.exp(4.0 * CATALAN / math.pi)


def spanning_tree_edge_sets(g: GeneralGraph) -> Iterator[tuple[int, ...]]:
    """Yield every spanning tree of g as a sorted tuple of edge indices.

    Exhaustive search with cycle skipping; guarded to small graphs.
    """
    if not g.is_connected:
        raise ValueError("not connected")
    n_edges = len(g.edges)
    if n_edges > MAX_ENUMERATION_EDGES:
        raise GuardError(
            f"{n_edges} edges exceeds enumeration guard ({MAX_ENUMERATION_EDGES})"
        )
    need = g.vertex_count - 1
    edges = g.edges

    def find(parent: list[int], x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def rec(
        i: int, chosen: list[int], parent: list[int]
    ) -> Iterator[tuple[int, ...]]:
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if n_edges - i < need - len(chosen):
            return
        u, v = edges[i]
        ru, rv = find(parent, u), find(parent, v)
        if ru != rv:
            child = parent.copy()
            child[ru] = rv
            chosen.append(i)
            yield from rec(i + 1, chosen, child)
            chosen.pop()
        yield from rec(i + 1, chosen, parent)

    yield from rec(0, [], list(range(g.vertex_count)))


def graph_to_json(g: GeneralGraph) -> str:
    """Serialize a graph; grids round-trip through their side length."""
    if isinstance(g, GridGraph):
        return json.dumps({"n": g.n})
    return json.dumps(
        {"vertices": g.vertex_count, "edges": [list(e) for e in g.edges]}
    )


def graph_from_json(text: str) -> GeneralGraph:
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("graph JSON must be an object")
    if "n" in obj:
        return build_grid(int(obj["n"]))
    if "vertices" in obj and "edges" in obj:
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
        return GeneralGraph(int(obj["vertices"]), edges)
    raise ValueError("graph JSON needs either 'n' or 'vertices'+'edges'")
