"""Classical baselines for the parity games.

Exact values of affine (locality-1) strategies, constrained-game maxima,
locality-l table strategies, light cones and independent inputs, random
restrictions, and the Mod 3 random self-reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CapacityError, DomainError, ShapeError
from .f2lin import F2Vector, pack_bits, parity
from .problems import TritVector

# -- affine strategies -------------------------------------------------------


@dataclass(frozen=True)
class AffineStrategy:
    """Locality-1 strategy whose output parity is ``a XOR <b, x>``.

    Player ``i`` outputs ``b_i x_i``; player 0 additionally flips by ``a``.
    """

    a: int
    b: F2Vector

    @property
    def n(self) -> int:
        return self.b.length

    def output_parity(self, x: F2Vector) -> int:
        return self.a ^ self.b.dot(x)

    def outputs(self, x: F2Vector) -> F2Vector:
        return F2Vector((self.b.bits & x.bits) ^ self.a, self.n)


# Re(zeta_8^k) for k mod 8, written as sign * 2^(-1/2 if k odd else 0)
_EIGHTH_ROOT_REAL_SIGN = (1, 1, 0, -1, -1, -1, 0, 1)


def _phase_product_real(n: int, weight: int) -> int:
    """Re of prod_j (1 + i^(1 + 2 b_j)) for |b| = weight, as an exact integer.

    Each factor is sqrt(2) * zeta_8^(+-1), so the product is
    2^(n/2) * zeta_8^(n - 2 weight); its real part is an integer.
    """
    k = (n - 2 * weight) % 8
    sign = _EIGHTH_ROOT_REAL_SIGN[k]
    if k % 2 == 0:
        return sign * (1 << (n // 2))
    return sign * (1 << ((n - 1) // 2))


def affine_win_prob_exact(strategy: AffineStrategy) -> Fraction:
    """Success probability on uniform even-parity inputs, in exact arithmetic."""
    n = strategy.n
    if n < 1:
        raise ValueError("n must be at least 1")
    re = _phase_product_real(n, strategy.b.weight())
    signed = -re if strategy.a else re
    return Fraction(1, 2) + Fraction(signed, 1 << n)


AFFINE_MAX_N = 24


def best_affine_strategy(n: int) -> tuple[AffineStrategy, Fraction]:
    """Exhaustive maximum over all 2^(n+1) affine strategies.

    Values are integers over 2^n (see :func:`_phase_product_real`), so the
    sweep is exact. The complement symmetry value(1, b) = 1 - value(0, b) is
    checked on every strategy.
    """
    if not 1 <= n <= AFFINE_MAX_N:
        raise CapacityError(f"affine enumeration supports 1 <= n <= {AFFINE_MAX_N}")
    by_weight = np.array([_phase_product_real(n, w) for w in range(n + 1)], dtype=np.int64)
    half = np.int64(1 << (n - 1))
    best = (-1, 0, 0)  # (numerator over 2^n, a, b)
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        bs = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint64)
        re = by_weight[np.bitwise_count(bs)]
        num0 = half + re
        num1 = half - re
        if not np.all(num0 + num1 == 2 * half):
            raise AssertionError("complement symmetry violated")
        for a, nums in ((0, num0), (1, num1)):
            i = int(np.argmax(nums))
            if int(nums[i]) > best[0]:
                best = (int(nums[i]), a, start + i)
    num, a, b = best
    return AffineStrategy(a, F2Vector(b, n)), Fraction(num, 1 << n)


def affine_game_optimum(n: int) -> Fraction:
    """Closed-form optimum 1/2 + 2^(-ceil(n/2))."""
    return Fraction(1, 2) + Fraction(1, 1 << math.ceil(n / 2))


# -- constrained game --------------------------------------------------------


@dataclass(frozen=True)
class GameConstraints:
    """Fixed input bits and parity-constrained groups, on top of global even parity."""

    fixed: tuple[tuple[int, int], ...] = ()
    groups: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self) -> None:
        fixed = tuple((int(i), int(b)) for i, b in self.fixed)
        groups = tuple((tuple(int(i) for i in idx), int(p)) for idx, p in self.groups)
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "groups", groups)
        seen: set[int] = set()
        for i, b in fixed:
            if b not in (0, 1) or i in seen:
                raise ValueError(f"bad fixed bit ({i}, {b})")
            seen.add(i)
        for idx, p in groups:
            if len(idx) < 2:
                raise ValueError("parity groups need at least two players")
            if p not in (0, 1) or seen & set(idx) or len(set(idx)) != len(idx):
                raise ValueError(f"group {idx} overlaps other constraints")
            seen |= set(idx)

    @property
    def d1(self) -> int:
        return len(self.fixed)

    @property
    def d2(self) -> int:
        return len(self.groups)

    def max_index(self) -> int:
        idx = [i for i, _ in self.fixed] + [i for g, _ in self.groups for i in g]
        return max(idx, default=-1)


CONSTRAINED_MAX_N = 22


def promise_inputs(n: int, constraints: GameConstraints = GameConstraints()) -> np.ndarray:
    """Packed even-parity inputs satisfying every constraint."""
    if n > CONSTRAINED_MAX_N:
        raise CapacityError(f"promise enumeration supports n <= {CONSTRAINED_MAX_N}")
    if constraints.max_index() >= n:
        raise ShapeError("constraint index out of range")
    xs = np.arange(1 << n, dtype=np.uint64)
    keep = (np.bitwise_count(xs) & 1) == 0
    for i, b in constraints.fixed:
        keep &= ((xs >> np.uint64(i)) & np.uint64(1)) == b
    for idx, p in constraints.groups:
        mask = np.uint64(sum(1 << i for i in idx))
        keep &= (np.bitwise_count(xs & mask) & 1) == p
    return xs[keep]


def _php_targets(xs: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(xs) // 2) & 1


def constrained_game_value(n: int, constraints: GameConstraints, strategy: AffineStrategy) -> Fraction:
    """Exact success of ``strategy`` on the uniform constrained promise set."""
    if strategy.n != n:
        raise ShapeError("strategy size differs from n")
    xs = promise_inputs(n, constraints)
    if xs.size == 0:
        raise DomainError("constraints leave no valid input")
    pred = (np.bitwise_count(xs & np.uint64(strategy.b.bits)) & 1) ^ strategy.a
    return Fraction(int(np.sum(pred == _php_targets(xs))), int(xs.size))


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized transform: out[b] = sum_x values[x] (-1)^(b.x), exact on integers."""
    out = np.array(values, dtype=np.int64, copy=True)
    h = 1
    while h < out.size:
        view = out.reshape(-1, 2, h)
        lo = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = lo - view[:, 1, :]
        h *= 2
    return out


def constrained_game_max(n: int, constraints: GameConstraints = GameConstraints()) -> tuple[AffineStrategy, Fraction]:
    """Best affine strategy on the constrained promise set, via one Walsh-Hadamard transform."""
    xs = promise_inputs(n, constraints)
    if xs.size == 0:
        raise DomainError("constraints leave no valid input")
    signed = np.zeros(1 << n, dtype=np.int64)
    signed[xs.astype(np.int64)] = 1 - 2 * _php_targets(xs).astype(np.int64)
    corr = walsh_hadamard(signed)
    b = int(np.argmax(np.abs(corr)))
    a = 0 if corr[b] >= 0 else 1
    best = Fraction(int(xs.size) + abs(int(corr[b])), 2 * int(xs.size))
    return AffineStrategy(a, F2Vector(b, n)), best


def constrained_bound_holds(value: Fraction, n: int, d1: int, d2: int) -> bool:
    """Exact test of value <= 1/2 + 2^(-(n - d1)/2 + d2), squaring to avoid sqrt(2)."""
    gap = value - Fraction(1, 2)
    if gap <= 0:
        return True
    exponent = -(n - d1) + 2 * d2
    return gap * gap <= Fraction(2) ** exponent


def constrained_bound(n: int, d1: int, d2: int) -> float:
    return 0.5 + 2.0 ** (-(n - d1) / 2 + d2)


def restricted_game_optimum(n: int, d: int) -> Fraction:
    """1/2 + 2^(-ceil((n - d)/2)) for the game with d fixed bits."""
    return Fraction(1, 2) + Fraction(1, 1 << math.ceil((n - d) / 2))


# -- locality-l strategies ---------------------------------------------------


@dataclass(frozen=True)
class LocalStrategy:
    """Output ``j`` is ``tables[j]`` looked up at the bits of ``supports[j]``.

    Bit ``t`` of a table is the output when ``sum_k x[S_j[k]] << k == t``.
    """

    n_inputs: int
    supports: tuple[tuple[int, ...], ...]
    tables: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "supports", tuple(tuple(int(i) for i in s) for s in self.supports))
        object.__setattr__(self, "tables", tuple(int(t) for t in self.tables))
        if len(self.supports) != len(self.tables):
            raise ShapeError("one table per output required")
        for s, t in zip(self.supports, self.tables):
            if len(set(s)) != len(s) or any(not 0 <= i < self.n_inputs for i in s):
                raise ShapeError(f"bad support {s}")
            if t < 0 or t >> (1 << len(s)):
                raise ShapeError(f"table {t:#x} does not fit support of size {len(s)}")

    @property
    def m(self) -> int:
        return len(self.tables)

    @property
    def locality(self) -> int:
        return max((len(s) for s in self.supports), default=0)

    def evaluate(self, x: F2Vector) -> F2Vector:
        if x.length != self.n_inputs:
            raise ShapeError("input length mismatch")
        out = 0
        for j, (s, t) in enumerate(zip(self.supports, self.tables)):
            idx = sum(x[i] << k for k, i in enumerate(s))
            out |= ((t >> idx) & 1) << j
        return F2Vector(out, self.m)

    def output_parity_batch(self, xs: np.ndarray) -> np.ndarray:
        """Parity of all outputs for packed inputs ``xs``."""
        xs = np.asarray(xs, dtype=np.uint64)
        acc = np.zeros(xs.shape, dtype=np.uint64)
        for s, t in zip(self.supports, self.tables):
            idx = np.zeros(xs.shape, dtype=np.uint64)
            for k, i in enumerate(s):
                idx |= ((xs >> np.uint64(i)) & np.uint64(1)) << np.uint64(k)
            acc ^= (np.uint64(t) >> idx) & np.uint64(1)
        return acc


def pairwise_and_strategy(n: int) -> LocalStrategy:
    """One output per pair i < j computing x_i AND x_j; total weight C(|x|, 2)."""
    pairs = tuple(combinations(range(n), 2))
    return LocalStrategy(n, pairs, (0b1000,) * len(pairs))


def constant_strategy(n: int, m: int, bit: int = 0) -> LocalStrategy:
    return LocalStrategy(n, ((),) * m, (bit,) * m)


def affine_as_local(strategy: AffineStrategy) -> LocalStrategy:
    tables = []
    for i in range(strategy.n):
        flip = strategy.a if i == 0 else 0
        tables.append([flip, strategy.b[i] ^ flip])
    return LocalStrategy(strategy.n, tuple((i,) for i in range(strategy.n)), tuple(pack_bits(t) for t in tables))


def random_local_strategy(n: int, m: int, locality: int, rng: np.random.Generator) -> LocalStrategy:
    supports, tables = [], []
    for _ in range(m):
        s = tuple(int(i) for i in rng.choice(n, size=min(locality, n), replace=False))
        supports.append(s)
        tables.append(int(rng.integers(0, 1 << (1 << len(s)))))
    return LocalStrategy(n, tuple(supports), tuple(tables))


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int
    exact: Optional[Fraction] = None


EXHAUSTIVE_MAX_N = 22


def _even_inputs(n: int) -> np.ndarray:
    xs = np.arange(1 << n, dtype=np.uint64)
    return xs[(np.bitwise_count(xs) & 1) == 0]


def eval_local_strategy(
    strategy: LocalStrategy,
    verifier: Optional[Callable[[F2Vector, F2Vector], bool]] = None,
    *,
    mode: str = "exhaustive",
    samples: int = 10_000,
    rng: Optional[np.random.Generator] = None,
) -> Estimate:
    """Success on uniform even-parity inputs.

    ``verifier(x, y)`` defaults to the PHP condition, which is evaluated in
    vectorized form; a custom verifier is called once per input.
    """
    n = strategy.n_inputs
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise CapacityError(f"exhaustive evaluation supports n <= {EXHAUSTIVE_MAX_N}")
        xs = _even_inputs(n)
    elif mode == "montecarlo":
        if rng is None:
            raise ValueError("Monte Carlo mode needs an explicit rng")
        if n > 64:
            raise CapacityError("Monte Carlo inputs are packed into 64-bit words")
        low = rng.integers(0, 1 << (n - 1), size=samples, dtype=np.uint64) if n > 1 else np.zeros(samples, np.uint64)
        xs = low | ((np.bitwise_count(low).astype(np.uint64) & np.uint64(1)) << np.uint64(n - 1))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if verifier is None:
        wins = int(np.sum(strategy.output_parity_batch(xs) == _php_targets(xs)))
    else:
        wins = sum(bool(verifier(F2Vector(int(x), n), strategy.evaluate(F2Vector(int(x), n)))) for x in xs)
    total = int(xs.size)
    p = wins / total
    if mode == "exhaustive":
        return Estimate(p, 0.0, total, Fraction(wins, total))
    return Estimate(p, math.sqrt(p * (1 - p) / total), total)


def hill_climb_local_strategy(
    n: int,
    supports: Sequence[Sequence[int]],
    rng: np.random.Generator,
    *,
    restarts: int = 4,
    steps: int = 200,
) -> tuple[LocalStrategy, Fraction]:
    """Heuristic search over tables for fixed supports; the result is not a certified optimum."""
    supports = tuple(tuple(s) for s in supports)
    best: tuple[LocalStrategy, Fraction] | None = None
    for _ in range(restarts):
        tables = [int(rng.integers(0, 1 << (1 << len(s)))) for s in supports]
        cur = LocalStrategy(n, supports, tuple(tables))
        cur_val = eval_local_strategy(cur).exact
        for _ in range(steps):
            j = int(rng.integers(len(supports)))
            bit = int(rng.integers(1 << len(supports[j])))
            tables[j] ^= 1 << bit
            cand = LocalStrategy(n, supports, tuple(tables))
            val = eval_local_strategy(cand).exact
            if val >= cur_val:
                cur, cur_val = cand, val
            else:
                tables[j] ^= 1 << bit
        if best is None or cur_val > best[1]:
            best = (cur, cur_val)
    assert best is not None
    return best


# -- light cones and independent inputs --------------------------------------


@dataclass(frozen=True)
class InteractionGraph:
    """Bipartite input/output structure: ``output_cones[j]`` is the light cone of output j."""

    n_inputs: int
    output_cones: tuple[frozenset[int], ...]

    @classmethod
    def from_strategy(cls, strategy: LocalStrategy) -> InteractionGraph:
        return cls(strategy.n_inputs, tuple(frozenset(s) for s in strategy.supports))

    @classmethod
    def from_circuit(
        cls, n_inputs: int, gates: Sequence[Sequence[int]], outputs: Sequence[int]
    ) -> tuple[InteractionGraph, int]:
        """Light cones of a gate DAG; returns the graph and the circuit depth.

        Node ids ``0..n_inputs-1`` are inputs; gate ``g`` is node ``n_inputs + g``
        and may only read earlier nodes.
        """
        cones: list[frozenset[int]] = [frozenset([i]) for i in range(n_inputs)]
        depth = [0] * n_inputs
        for g, srcs in enumerate(gates):
            node = n_inputs + g
            if any(not 0 <= s < node for s in srcs):
                raise ShapeError(f"gate {g} reads a node that is not earlier")
            cones.append(frozenset().union(*(cones[s] for s in srcs)) if srcs else frozenset())
            depth.append(1 + max((depth[s] for s in srcs), default=0))
        out_cones = tuple(cones[o] for o in outputs)
        return cls(n_inputs, out_cones), max((depth[o] for o in outputs), default=0)

    def input_cones(self) -> tuple[frozenset[int], ...]:
        fwd: list[set[int]] = [set() for _ in range(self.n_inputs)]
        for j, cone in enumerate(self.output_cones):
            for i in cone:
                fwd[i].add(j)
        return tuple(frozenset(s) for s in fwd)

    def input_intersection_graph(self) -> list[set[int]]:
        """Inputs are adjacent when some output's light cone contains both."""
        adj: list[set[int]] = [set() for _ in range(self.n_inputs)]
        for cone in self.output_cones:
            for i in cone:
                adj[i] |= cone
        for i in range(self.n_inputs):
            adj[i].discard(i)
        return adj

    def average_intersection_degree(self) -> float:
        if self.n_inputs == 0:
            return 0.0
        return sum(len(a) for a in self.input_intersection_graph()) / self.n_inputs


def light_cones(g: InteractionGraph) -> tuple[tuple[frozenset[int], ...], tuple[frozenset[int], ...]]:
    """(inputs feeding each output, outputs reading each input)."""
    return g.output_cones, g.input_cones()


def independent_inputs(g: InteractionGraph) -> tuple[int, ...]:
    """Inputs no two of which share a light cone; greedy minimum degree first.

    Meets the Turan bound |S| >= n / (1 + D), D the average degree of the
    input intersection graph.
    """
    adj = g.input_intersection_graph()
    alive = set(range(g.n_inputs))
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (len(adj[u] & alive), u))
        chosen.append(v)
        alive -= adj[v] | {v}
    return tuple(sorted(chosen))


# -- restrictions ------------------------------------------------------------

STAR = None


@dataclass(frozen=True)
class Restriction:
    """Per-coordinate value 0, 1 or ``STAR`` (free)."""

    values: tuple[Optional[int], ...]
    p: float = float("nan")

    def __len__(self) -> int:
        return len(self.values)

    def stars(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v is STAR]

    def complete(self, free_bits: Sequence[int]) -> F2Vector:
        """Fill the starred coordinates, in index order, with ``free_bits``."""
        stars = self.stars()
        if len(free_bits) != len(stars):
            raise ShapeError("one bit per star required")
        filled = list(self.values)
        for i, b in zip(stars, free_bits):
            filled[i] = b
        return F2Vector.from_bits(filled)

    def __str__(self) -> str:
        return "".join("*" if v is STAR else str(v) for v in self.values)


def sample_restriction(n: int, p: float, rng: np.random.Generator) -> Restriction:
    """Each coordinate is free with probability p, else a uniform bit."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    free = rng.random(n) < p
    bits = rng.integers(0, 2, size=n)
    return Restriction(tuple(STAR if f else int(b) for f, b in zip(free, bits)), p)


def apply_restriction(strategy: LocalStrategy, rho: Restriction) -> LocalStrategy:
    """Partially evaluate every table on the fixed coordinates; supports only shrink."""
    if len(rho) != strategy.n_inputs:
        raise ShapeError("restriction length mismatch")
    supports, tables = [], []
    for s, t in zip(strategy.supports, strategy.tables):
        free_pos = [k for k, i in enumerate(s) if rho.values[i] is STAR]
        base = sum(rho.values[i] << k for k, i in enumerate(s) if rho.values[i] is not STAR)
        new_table = 0
        for a in range(1 << len(free_pos)):
            idx = base
            for bit, k in enumerate(free_pos):
                idx |= ((a >> bit) & 1) << k
            new_table |= ((t >> idx) & 1) << a
        supports.append(tuple(s[k] for k in free_pos))
        tables.append(new_table)
    return LocalStrategy(strategy.n_inputs, tuple(supports), tuple(tables))


# -- Mod 3 self-reduction ----------------------------------------------------


def random_shift_with_weight(n: int, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Uniform b in {0,1,2}^n together with |b| mod 3, via prefix differences.

    Draw uniform trits c, set b_i = c_{i+1} - c_i and b_n = -c_n; the sum
    telescopes to -c_1.
    """
    c = rng.integers(0, 3, size=n)
    b = np.empty(n, dtype=np.int64)
    b[:-1] = (c[1:] - c[:-1]) % 3
    b[-1] = (-c[-1]) % 3
    return b, int((-c[0]) % 3)


def self_reduce_mod3(inner: Callable[[TritVector], int], x: TritVector, rng: np.random.Generator) -> int:
    """Worst-case wrapper: (inner(a x + b) - |b|) / a (mod 3) with a = +-1 and b uniform."""
    n = len(x)
    a = 1 if rng.random() < 0.5 else 2  # 2 == -1 (mod 3)
    b, b_weight = random_shift_with_weight(n, rng)
    shifted = TritVector(tuple(int(v) for v in (a * np.asarray(x.entries, dtype=np.int64) + b) % 3))
    return ((int(inner(shifted)) - b_weight) * a) % 3  # a is its own inverse mod 3


def self_reduction_outcomes(
    inner: Callable[[TritVector], int], x: TritVector, trials: int, rng: np.random.Generator
) -> np.ndarray:
    """Counts of (correct, off by +1, off by +2) over repeated wrapper runs."""
    counts = np.zeros(3, dtype=np.int64)
    target = x.weight() % 3
    for _ in range(trials):
        counts[(self_reduce_mod3(inner, x, rng) - target) % 3] += 1
    return counts
