"""Reductions between the problems, and a polynomial-time HLF solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ConsistencyError, DomainError, ShapeError, StructureError
from .f2lin import F2Elimination, F2Matrix, F2Vector, Z4Vector
from .graphs import Graph, RootPathTable, incidence_matrix
from .problems import HlfInstance, RphpInstance, eval_q, lq_basis


@dataclass(frozen=True)
class HlfEmbedding:
    """Index map of an RPHP-derived HLF instance: vertices first, then one index per edge.

    ``coords`` places each HLF index on a 2-D lattice when the source graph
    lives on a grid; ``None`` otherwise.
    """

    graph: Graph
    coords: Optional[tuple[tuple[int, int], ...]] = None

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    @property
    def dimension(self) -> int:
        return self.graph.n_vertices + self.graph.n_edges

    def vertex_index(self, v: int) -> int:
        return v

    def edge_index(self, k: int) -> int:
        return self.graph.n_vertices + k


def doubled_grid_coords(g: Graph, width: int) -> tuple[tuple[int, int], ...]:
    """Vertex (r, c) goes to (2r, 2c); an edge goes to the midpoint of its endpoints."""
    if g.n_vertices % width:
        raise DomainError(f"{g.n_vertices} vertices do not fill rows of width {width}")
    pos = [(2 * (v // width), 2 * (v % width)) for v in range(g.n_vertices)]
    for u, v in g.edges:
        (r1, c1), (r2, c2) = pos[u], pos[v]
        if abs(r1 - r2) + abs(c1 - c2) != 2:
            raise DomainError(f"edge ({u}, {v}) is not a lattice edge of width {width}")
    mids = [((pos[u][0] + pos[v][0]) // 2, (pos[u][1] + pos[v][1]) // 2) for u, v in g.edges]
    return tuple(pos + mids)


def rphp_to_hlf(inst: RphpInstance, grid_width: Optional[int] = None) -> tuple[HlfInstance, HlfEmbedding]:
    """A = [[0, M], [M^T, 0]] with M the incidence matrix, b = (x, 0).

    Passing ``grid_width`` records lattice coordinates for a graph whose
    vertices are laid out row-major on a grid of that width.
    """
    g = inst.graph
    M = incidence_matrix(g)
    A = F2Matrix.block(
        [
            [F2Matrix.zeros(g.n_vertices, g.n_vertices), M],
            [M.transpose(), F2Matrix.zeros(g.n_edges, g.n_edges)],
        ]
    )
    b = Z4Vector(tuple(inst.x.to_list()) + (0,) * g.n_edges)
    coords = doubled_grid_coords(g, grid_width) if grid_width is not None else None
    return HlfInstance(A, b), HlfEmbedding(g, coords)


def hlf_solution_to_rphp(p: F2Vector, emb: HlfEmbedding) -> tuple[F2Vector, F2Vector]:
    """Split p = (y, d)."""
    if p.length != emb.dimension:
        raise ShapeError(f"p has length {p.length}, embedding has dimension {emb.dimension}")
    return p.slice(0, emb.n_vertices), p.slice(emb.n_vertices, emb.dimension)


def solve_hlf_reference(inst: HlfInstance) -> F2Vector:
    """Some p with q(u) = 2 p^T u (mod 4) on L_q.

    L_q is the GF(2) kernel of A with its diagonal replaced by A_ii XOR b_i.
    Evaluate q on a kernel basis (values must be 0 or 2) and solve
    <p, u_j> = q(u_j) / 2 for p.
    """
    basis = lq_basis(inst)
    n = inst.n
    if not basis:
        return F2Vector.zeros(n)
    rhs = []
    for u in basis:
        qu = eval_q(inst, u)
        if qu & 1:
            raise ConsistencyError(f"q(u) = {qu} is odd on an L_q basis vector")
        rhs.append(qu >> 1)
    system = F2Matrix(tuple(u.bits for u in basis), n)
    p = F2Elimination(system).solve(F2Vector.from_bits(rhs))
    if p is None:
        raise ConsistencyError("basis rows of L_q are dependent")
    return p


def is_2d_supported(inst: HlfInstance, emb: HlfEmbedding) -> bool:
    """True iff every nonzero off-diagonal A_ij joins lattice neighbours under ``emb.coords``."""
    if emb.coords is None:
        raise DomainError("embedding carries no grid coordinates")
    if len(emb.coords) != inst.n:
        raise ShapeError("coordinate count differs from HLF dimension")
    if len(set(emb.coords)) != len(emb.coords):
        return False
    for i, row in enumerate(inst.A.rows):
        r = row & ~((1 << (i + 1)) - 1)  # strict upper triangle suffices by symmetry
        while r:
            low = r & -r
            j = low.bit_length() - 1
            (a, b), (c, d) = emb.coords[i], emb.coords[j]
            if abs(a - c) + abs(b - d) != 1:
                return False
            r ^= low
    return True


def bounding_box(coords: Sequence[tuple[int, int]]) -> tuple[int, int]:
    rows = [r for r, _ in coords]
    cols = [c for _, c in coords]
    return max(rows) - min(rows) + 1, max(cols) - min(cols) + 1


def direct_sum_hlf(parts: Sequence[HlfInstance]) -> HlfInstance:
    """Block-diagonal composition of several instances."""
    if not parts:
        raise ValueError("need at least one part")
    A = F2Matrix.block_diag(*(p.A for p in parts))
    b = Z4Vector(tuple(e for p in parts for e in p.b))
    return HlfInstance(A, b)


def split_hlf_solution(p: F2Vector, sizes: Sequence[int]) -> list[F2Vector]:
    if sum(sizes) != p.length:
        raise ShapeError(f"part sizes sum to {sum(sizes)}, solution has length {p.length}")
    out, start = [], 0
    for s in sizes:
        out.append(p.slice(start, start + s))
        start += s
    return out


def parallel_rphp_to_hlf(
    instances: Sequence[RphpInstance], grid_width: Optional[int] = None, gap: int = 1
) -> tuple[HlfInstance, list[HlfEmbedding], Optional[tuple[tuple[int, int], ...]]]:
    """Reduce each RPHP instance and combine them into one block-diagonal HLF instance.

    With ``grid_width`` the blocks are laid side by side on one lattice,
    separated by ``gap`` empty columns; the combined coordinates are returned
    as the third element.
    """
    reduced = [rphp_to_hlf(inst, grid_width) for inst in instances]
    combined = direct_sum_hlf([h for h, _ in reduced])
    coords: Optional[tuple[tuple[int, int], ...]] = None
    if grid_width is not None:
        placed: list[tuple[int, int]] = []
        offset = 0
        for _, emb in reduced:
            assert emb.coords is not None
            placed.extend((r, c + offset) for r, c in emb.coords)
            offset += max(c for _, c in emb.coords) + 1 + gap
        coords = tuple(placed)
    return combined, [e for _, e in reduced], coords


def assemble_php_output(x: F2Vector, y: F2Vector, d: F2Vector, paths: RootPathTable) -> F2Vector:
    """PHP output from an RPHP solution on a tree.

    Appends one bit ``d_j AND x_i`` for every vertex ``i`` and every edge ``j``
    on the root-to-i path, ordered by vertex and then edge index. The appended
    block has weight parity <z, x> with z_root = 0, which cancels the shift in
    the RPHP condition.
    """
    if x.length != len(paths) or y.length != len(paths):
        raise StructureError("x and y must be indexed by the tree's vertices")
    extra = [d[j] & x[i] for i, path in enumerate(paths.path_edges) for j in path]
    return y.concat(F2Vector.from_bits(extra))


def php_output_length(paths: RootPathTable) -> int:
    return len(paths) + paths.total_path_length()
