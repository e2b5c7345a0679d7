"""Graphs carrying RPHP topology: grids, spanning trees, root paths, CNOT layers."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

from .errors import StructureError
from .f2lin import F2Matrix, F2Vector


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edge ``k`` is ``edges[k] = (u, v)`` with ``u < v``."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for u, v in edges:
            if u == v:
                raise StructureError(f"self-loop at {u}")
            if not u < v:
                raise StructureError(f"edge ({u}, {v}) must be listed with u < v")
            if v >= self.n_vertices or u < 0:
                raise StructureError(f"edge ({u}, {v}) out of range")
            if (u, v) in seen:
                raise StructureError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Sequence[Sequence[int]]) -> Graph:
        """Build a graph, normalizing each edge to ``(min, max)``."""
        return cls(n_vertices, tuple((min(u, v), max(u, v)) for u, v in edges))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        if n < 3:
            raise StructureError("a cycle needs at least 3 vertices")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    # Not dataclass fields, so equality and hashing ignore these caches.
    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adjacency[v]`` lists ``(neighbor, edge_index)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for k, (u, v) in enumerate(self.edges):
            adj[u].append((v, k))
            adj[v].append((u, k))
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        return len(self.bfs_order(0)) == self.n_vertices

    def is_tree(self) -> bool:
        return self.n_edges == self.n_vertices - 1 and self.is_connected()

    def bfs_order(self, root: int) -> list[int]:
        seen = [False] * self.n_vertices
        seen[root] = True
        order = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, _ in self.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    order.append(w)
                    queue.append(w)
        return order

    def distances(self, root: int) -> list[int]:
        dist = [-1] * self.n_vertices
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, _ in self.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def diameter(self) -> int:
        if not self.is_connected():
            raise StructureError("diameter of a disconnected graph")
        return max(max(self.distances(v)) for v in range(self.n_vertices))

    def edge_parities(self, z: F2Vector) -> F2Vector:
        """``d_e = z_u XOR z_v`` for every edge."""
        if z.length != self.n_vertices:
            raise StructureError("z must be indexed by vertices")
        return F2Vector.from_bits([z[u] ^ z[v] for u, v in self.edges])

    def to_json(self) -> dict[str, Any]:
        return {"vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> Graph:
        return cls(int(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]))


def _check_dims(width: int, height: int) -> None:
    if width < 1 or height < 1:
        raise ValueError(f"grid dimensions must be positive, got {width}x{height}")


def grid_index(row: int, col: int, width: int) -> int:
    return row * width + col


def grid_graph(width: int, height: int) -> Graph:
    """Full lattice, row-major vertices; horizontal edges row by row, then columns."""
    _check_dims(width, height)
    edges = []
    for r in range(height):
        for c in range(width - 1):
            edges.append((grid_index(r, c, width), grid_index(r, c + 1, width)))
    for c in range(width):
        for r in range(height - 1):
            edges.append((grid_index(r, c, width), grid_index(r + 1, c, width)))
    return Graph(width * height, tuple(edges))


def grid_spanning_tree(width: int, height: int) -> Graph:
    """Comb-shaped spanning tree: the whole top row plus every column.

    Edges are ordered top-row left to right, then each column top to bottom,
    column by column.
    """
    _check_dims(width, height)
    edges = [(grid_index(0, c, width), grid_index(0, c + 1, width)) for c in range(width - 1)]
    for c in range(width):
        for r in range(height - 1):
            edges.append((grid_index(r, c, width), grid_index(r + 1, c, width)))
    return Graph(width * height, tuple(edges))


def incidence_matrix(g: Graph) -> F2Matrix:
    """|V| x |E| matrix with column ``e`` set at both endpoints of edge ``e``."""
    rows = [0] * g.n_vertices
    for k, (u, v) in enumerate(g.edges):
        rows[u] |= 1 << k
        rows[v] |= 1 << k
    return F2Matrix(tuple(rows), g.n_edges)


@dataclass(frozen=True)
class RootPathTable:
    root: int
    path_edges: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.path_edges)

    def max_path_length(self) -> int:
        return max(len(p) for p in self.path_edges)

    def total_path_length(self) -> int:
        return sum(len(p) for p in self.path_edges)

    def reconstruct(self, d: F2Vector) -> F2Vector:
        """The vertex labeling ``z`` with ``z_root = 0`` implied by edge parities ``d``."""
        return F2Vector.from_bits([sum(d[e] for e in p) & 1 for p in self.path_edges])


def root_paths(tree: Graph, root: int = 0) -> RootPathTable:
    """Edge indices of the unique root-to-v path for every vertex, sorted ascending."""
    if not 0 <= root < tree.n_vertices:
        raise StructureError(f"root {root} out of range")
    if not tree.is_tree():
        raise StructureError("root_paths requires a connected acyclic graph")
    paths: list[tuple[int, ...] | None] = [None] * tree.n_vertices
    paths[root] = ()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w, k in tree.adjacency[u]:
            if paths[w] is None:
                paths[w] = paths[u] + (k,)
                queue.append(w)
    return RootPathTable(root, tuple(tuple(sorted(p)) for p in paths))


@dataclass(frozen=True)
class LayerSchedule:
    """CNOT layers for the poor man's cat circuit.

    Each gate is ``(vertex, edge_index)``: a CNOT from the vertex qubit onto
    the qubit that sits on that edge.
    """

    layers: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self) -> int:
        return len(self.layers)

    def gates(self) -> list[tuple[int, int]]:
        return [g for layer in self.layers for g in layer]

    def is_conflict_free(self) -> bool:
        for layer in self.layers:
            verts = [v for v, _ in layer]
            edges = [e for _, e in layer]
            if len(set(verts)) != len(verts) or len(set(edges)) != len(edges):
                return False
        return True

    def covers(self, g: Graph) -> bool:
        expected = sorted((v, k) for k, (a, b) in enumerate(g.edges) for v in (a, b))
        return sorted(self.gates()) == expected


def cnot_layers(g: Graph) -> LayerSchedule:
    """Greedy edge coloring of the subdivided graph.

    Every edge ``(u, v)`` contributes CNOTs ``u -> e`` and ``v -> e``; gates
    are visited in edge-index order and get the smallest color not already
    used at either of their qubits.
    """
    vertex_colors: list[set[int]] = [set() for _ in range(g.n_vertices)]
    layers: list[list[tuple[int, int]]] = []
    for k, (u, v) in enumerate(g.edges):
        edge_colors: set[int] = set()
        for ctrl in (u, v):
            used = vertex_colors[ctrl] | edge_colors
            color = next(c for c in range(len(used) + 1) if c not in used)
            vertex_colors[ctrl].add(color)
            edge_colors.add(color)
            while len(layers) <= color:
                layers.append([])
            layers[color].append((ctrl, k))
    return LayerSchedule(tuple(tuple(layer) for layer in layers))
