"""Problem instances, promise-respecting generators and ground-truth verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterator, Sequence, Union

import numpy as np

from .errors import CapacityError, ConsistencyError, DomainError, PromiseViolation, ShapeError
from .f2lin import F2Elimination, F2Matrix, F2Vector, Z4Vector, pack_bits, parity, popcount
from .graphs import Graph, incidence_matrix


@dataclass(frozen=True)
class TritVector:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if any(not 0 <= e <= 2 for e in self.entries):
            raise ValueError("trit entries must lie in {0, 1, 2}")

    @classmethod
    def from_str(cls, s: str) -> TritVector:
        return cls(tuple(int(ch) for ch in s))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def weight(self) -> int:
        return sum(self.entries)


BitsOrTrits = Union[F2Vector, TritVector]


def hamming_weight(x: BitsOrTrits) -> int:
    """Integer sum of the entries (trits count with their value)."""
    return x.weight()


# -- instances ---------------------------------------------------------------


@dataclass(frozen=True)
class PhpInstance:
    x: F2Vector
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("output length m must be at least 1")
        if self.x.parity():
            raise PromiseViolation("PHP input must have even parity")

    @property
    def n(self) -> int:
        return self.x.length


@dataclass(frozen=True)
class RphpInstance:
    graph: Graph
    x: F2Vector

    def __post_init__(self) -> None:
        if self.x.length != self.graph.n_vertices:
            raise ShapeError("x must be indexed by the graph's vertices")
        if self.x.parity():
            raise PromiseViolation("RPHP input must have even parity")
        if not self.graph.is_connected():
            raise DomainError("RPHP requires a connected graph")


@dataclass(frozen=True)
class HlfInstance:
    """Quadratic form q(u) = u^T A u + b^T u (mod 4) over binary u."""

    A: F2Matrix
    b: Z4Vector

    def __post_init__(self) -> None:
        if self.A.nrows != self.A.ncols or self.A.nrows != len(self.b):
            raise ShapeError(f"A is {self.A.shape} but b has length {len(self.b)}")
        if not self.A.is_symmetric():
            raise DomainError("HLF matrix A must be symmetric")

    @property
    def n(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class PbpInstance:
    x: BitsOrTrits


@dataclass(frozen=True)
class ParallelInstance:
    """k independent sub-instances; a solution must win a ``win_fraction`` share."""

    instances: tuple[Any, ...]
    win_fraction: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "instances", tuple(self.instances))
        wf = Fraction(self.win_fraction)
        object.__setattr__(self, "win_fraction", wf)
        if not 0 < wf <= 1:
            raise ValueError("win_fraction must lie in (0, 1]")

    @property
    def k(self) -> int:
        return len(self.instances)

    def required_wins(self) -> int:
        return math.ceil(self.win_fraction * self.k)


PBP_WIN_FRACTION = Fraction(2, 3) + Fraction(5, 100)
MOD3_WIN_FRACTION = Fraction(1, 3) + Fraction(1, 100)


def parallel_php(instances: Sequence[PhpInstance]) -> ParallelInstance:
    return ParallelInstance(tuple(instances), Fraction(1))


def parallel_rphp(instances: Sequence[RphpInstance]) -> ParallelInstance:
    return ParallelInstance(tuple(instances), Fraction(1))


def parallel_pbp(instances: Sequence[PbpInstance]) -> ParallelInstance:
    return ParallelInstance(tuple(instances), PBP_WIN_FRACTION)


def parallel_mod3(inputs: Sequence[TritVector]) -> ParallelInstance:
    return ParallelInstance(tuple(inputs), MOD3_WIN_FRACTION)


# -- generators --------------------------------------------------------------


def gen_even_parity_input(n: int, rng: np.random.Generator) -> F2Vector:
    """Uniform over the 2^(n-1) even-parity strings of length n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    bits = rng.integers(0, 2, size=n, dtype=np.uint8)
    bits[-1] = bits[:-1].sum() & 1
    return F2Vector(pack_bits(bits), n)


def gen_trit_input(n: int, rng: np.random.Generator) -> TritVector:
    if n < 1:
        raise ValueError("n must be at least 1")
    return TritVector(tuple(int(t) for t in rng.integers(0, 3, size=n)))


def even_parity_inputs(n: int) -> Iterator[F2Vector]:
    """Every even-parity string of length n, in increasing packed order."""
    for v in range(1 << n):
        if not parity(v):
            yield F2Vector(v, n)


# -- PHP ---------------------------------------------------------------------


def php_target_parity(x: F2Vector) -> int:
    if x.parity():
        raise PromiseViolation("PHP input must have even parity")
    return (x.weight() // 2) & 1


def verify_php(inst: PhpInstance, y: F2Vector) -> bool:
    if y.length != inst.m:
        raise ShapeError(f"expected output of length {inst.m}, got {y.length}")
    return y.parity() == php_target_parity(inst.x)


def verify_php_batch(inst: PhpInstance, ys: np.ndarray) -> np.ndarray:
    """Vectorized :func:`verify_php` over packed outputs (m <= 64)."""
    if inst.m > 64:
        raise CapacityError("batch verification packs outputs into 64-bit words")
    ys = np.asarray(ys, dtype=np.uint64)
    if np.any(ys >> np.uint64(inst.m) if inst.m < 64 else 0):
        raise ShapeError("output does not fit in m bits")
    return (np.bitwise_count(ys) & 1) == php_target_parity(inst.x)


# -- RPHP --------------------------------------------------------------------


@lru_cache(maxsize=64)
def _edge_system(graph: Graph) -> F2Elimination:
    # rows of M^T are edges; solving M^T z = d recovers vertex labels
    return F2Elimination(incidence_matrix(graph).transpose())


def consistent_labeling(graph: Graph, d: F2Vector) -> F2Vector | None:
    """Some z with z_u XOR z_v = d_e on every edge, or None if d has an odd cycle."""
    if d.length != graph.n_edges:
        raise ShapeError(f"d must have one bit per edge ({graph.n_edges}), got {d.length}")
    return _edge_system(graph).solve(d)


def verify_rphp(inst: RphpInstance, y: F2Vector, d: F2Vector) -> bool:
    g = inst.graph
    if y.length != g.n_vertices:
        raise ShapeError(f"y must have one bit per vertex ({g.n_vertices}), got {y.length}")
    z = consistent_labeling(g, d)
    if z is None:
        return False
    target = ((inst.x.weight() // 2) + z.dot(inst.x)) & 1
    return y.parity() == target


# -- HLF ---------------------------------------------------------------------


def eval_q(inst: HlfInstance, u: F2Vector) -> int:
    """q(u) = u^T A u + b^T u reduced mod 4, with u read as a 0/1 integer vector."""
    if u.length != inst.n:
        raise ShapeError(f"u has length {u.length}, instance has n = {inst.n}")
    total = 0
    for i in u.support():
        total += popcount(inst.A.rows[i] & u.bits) + inst.b[i]
    return total % 4


def lq_matrix(inst: HlfInstance) -> F2Matrix:
    """Off-diagonal part of A with diagonal A_ii XOR b_i; its kernel is L_q."""
    return inst.A.with_diagonal(inst.A.diagonal() ^ inst.b.mod2())


def lq_basis(inst: HlfInstance) -> list[F2Vector]:
    return F2Elimination(lq_matrix(inst)).kernel_basis()


BRUTE_FORCE_MAX_N = 20


def q_table(inst: HlfInstance) -> np.ndarray:
    """q(u) mod 4 for every packed u in [0, 2^n)."""
    n = inst.n
    if n > BRUTE_FORCE_MAX_N:
        raise CapacityError(f"exhaustive tables are limited to n <= {BRUTE_FORCE_MAX_N}")
    table = np.zeros(1 << n, dtype=np.uint8)
    for i in range(n):
        lo = np.arange(1 << i, dtype=np.uint32)
        lower_row = np.uint32(inst.A.rows[i] & ((1 << i) - 1))
        cross = np.bitwise_count(lo & lower_row).astype(np.uint8)
        table[1 << i : 1 << (i + 1)] = (table[: 1 << i] + inst.A[i, i] + inst.b[i] + 2 * cross) % 4
    return table


def lq_brute_force(inst: HlfInstance) -> np.ndarray:
    """L_q by its definition: u such that q(u XOR v) = q(u) + q(v) mod 4 for every v.

    Every u is decided exhaustively. Non-members are rejected by an explicit
    witness v (tried first among unit vectors, then among all v); members are
    confirmed against all 2^n choices of v.
    """
    n = inst.n
    table = q_table(inst)
    us = np.arange(1 << n, dtype=np.uint32)
    refuted = np.zeros(1 << n, dtype=bool)
    for i in range(n):
        v = np.uint32(1 << i)
        refuted |= (table[us ^ v].astype(np.int16) - table - table[v]) % 4 != 0
    members = []
    for u in np.flatnonzero(~refuted):
        ok = np.all((table[us ^ np.uint32(u)].astype(np.int16) - table[u] - table) % 4 == 0)
        if ok:
            members.append(int(u))
    return np.array(members, dtype=np.uint32)


def verify_hlf(inst: HlfInstance, p: F2Vector, *, brute_force: bool = False) -> bool:
    """Does q(u) = 2 p^T u (mod 4) hold on all of L_q?

    The default checks a kernel basis of L_q, which suffices because q is
    linear on L_q. ``brute_force=True`` enumerates L_q by definition instead.
    """
    if p.length != inst.n:
        raise ShapeError(f"p has length {p.length}, instance has n = {inst.n}")
    if brute_force:
        members = lq_brute_force(inst)
        if members.size == 0:
            return True
        table = q_table(inst)
        p_dot = np.bitwise_count(members & np.uint32(p.bits)) & 1
        return bool(np.all(table[members] == 2 * p_dot))
    for u in lq_basis(inst):
        qu = eval_q(inst, u)
        if qu & 1:
            raise ConsistencyError(f"q takes odd value {qu} on an L_q basis vector")
        if qu != 2 * p.dot(u):
            return False
    return True


# -- PBP / Mod 3 -------------------------------------------------------------


def pbp_target_parity(x: BitsOrTrits) -> int:
    return 0 if hamming_weight(x) % 3 == 0 else 1


def verify_pbp(x: BitsOrTrits, y: F2Vector) -> bool:
    return y.parity() == pbp_target_parity(x)


def mod3_weight(x: BitsOrTrits) -> int:
    return hamming_weight(x) % 3


def verify_mod3(x: BitsOrTrits, y: int) -> bool:
    if y not in (0, 1, 2):
        raise ValueError("Mod 3 output must be a trit")
    return y == mod3_weight(x)


# -- parallel ----------------------------------------------------------------


def count_wins(inst: ParallelInstance, outputs: Sequence[Any], sub_verifier: Callable[..., bool]) -> int:
    if len(outputs) != inst.k:
        raise ShapeError(f"expected {inst.k} outputs, got {len(outputs)}")
    wins = 0
    for sub, out in zip(inst.instances, outputs):
        args = out if isinstance(out, tuple) else (out,)
        wins += bool(sub_verifier(sub, *args))
    return wins


def verify_parallel(inst: ParallelInstance, outputs: Sequence[Any], sub_verifier: Callable[..., bool]) -> bool:
    """Accept iff at least ``ceil(win_fraction * k)`` sub-instances verify.

    Each output is passed to ``sub_verifier(sub_instance, *output)`` when it is
    a tuple, else as ``sub_verifier(sub_instance, output)``.
    """
    return count_wins(inst, outputs, sub_verifier) >= inst.required_wins()


def random_hlf_instance(n: int, rng: np.random.Generator, *, density: float = 0.5, zero_diagonal: bool = False) -> HlfInstance:
    """Symmetric A with i.i.d. Bernoulli(density) upper triangle; b uniform over Z4."""
    upper = np.triu(rng.random((n, n)) < density, k=1)
    A = upper | upper.T
    if not zero_diagonal:
        A |= np.diag(rng.random(n) < density)
    b = rng.integers(0, 4, size=n)
    return HlfInstance(F2Matrix.from_array(A.astype(np.uint8)), Z4Vector(tuple(int(v) for v in b)))
