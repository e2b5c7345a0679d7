"""Exact output laws of the shallow circuits, samplers, and a statevector oracle.

The samplers draw directly from the closed-form Born distributions. The
``statevector_*`` functions simulate the literal gate sequence on at most
``MAX_QUBITS`` qubits and exist to cross-check those closed forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import CapacityError, PromiseViolation, StructureError
from .f2lin import F2Vector, pack_bits
from .graphs import Graph, cnot_layers
from .problems import BitsOrTrits, hamming_weight, php_target_parity

MAX_QUBITS = 14
OMEGA = cmath.exp(2j * math.pi / 3)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class QuantumSample:
    y: F2Vector
    d: Optional[F2Vector] = None
    z: Optional[F2Vector] = None  # hidden labeling; for tests only


# -- samplers ----------------------------------------------------------------


def sample_uniform_parity(m: int, parity: int, rng: np.random.Generator) -> F2Vector:
    """Uniform over the 2^(m-1) strings of length m with the given parity."""
    if m < 1:
        raise ValueError("m must be at least 1")
    bits = rng.integers(0, 2, size=m, dtype=np.uint8)
    bits[-1] = (int(bits[:-1].sum()) + parity) & 1
    return F2Vector(pack_bits(bits), m)


def sample_uniform_parity_batch(m: int, parities, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` packed strings of length ``m <= 64``; ``parities`` is a bit or an array of bits."""
    if not 1 <= m <= 64:
        raise CapacityError("batch sampling packs strings into 64-bit words")
    low = rng.integers(0, 1 << (m - 1), size=size, dtype=np.uint64)
    fix = (np.bitwise_count(low).astype(np.uint64) + np.asarray(parities, dtype=np.uint64)) & np.uint64(1)
    return low | (fix << np.uint64(m - 1))


def _check_even(x: F2Vector) -> None:
    if x.parity():
        raise PromiseViolation("input must have even parity")


def sample_php_cat(x: F2Vector, rng: np.random.Generator, m: Optional[int] = None) -> F2Vector:
    """Output of the cat-state PHP circuit: uniform y with |y| = |x|/2 (mod 2)."""
    _check_even(x)
    return sample_uniform_parity(x.length if m is None else m, php_target_parity(x), rng)


def sample_php_cat_batch(x: F2Vector, size: int, rng: np.random.Generator, m: Optional[int] = None) -> np.ndarray:
    _check_even(x)
    return sample_uniform_parity_batch(x.length if m is None else m, php_target_parity(x), size, rng)


def sample_poor_mans_cat(g: Graph, rng: np.random.Generator) -> tuple[F2Vector, F2Vector]:
    """Representative z of the measured state (|z> + |~z>)/sqrt(2), and its edge parities d."""
    if not g.is_connected():
        raise StructureError("poor man's cat state needs a connected graph")
    z = F2Vector.random(g.n_vertices, rng)
    return z, g.edge_parities(z)


def rphp_target_parity(x: F2Vector, z: F2Vector) -> int:
    return ((x.weight() // 2) + z.dot(x)) & 1


def sample_rphp(g: Graph, x: F2Vector, rng: np.random.Generator) -> QuantumSample:
    """PHP circuit run on a poor man's cat state over ``g``."""
    _check_even(x)
    if x.length != g.n_vertices:
        raise StructureError("x must be indexed by the graph's vertices")
    z, d = sample_poor_mans_cat(g, rng)
    y = sample_uniform_parity(g.n_vertices, rphp_target_parity(x, z), rng)
    return QuantumSample(y=y, d=d, z=z)


def sample_rphp_batch(g: Graph, x: F2Vector, size: int, rng: np.random.Generator) -> list[QuantumSample]:
    """Same law as :func:`sample_rphp`, vectorized for graphs with at most 63 vertices and 64 edges."""
    _check_even(x)
    nv, ne = g.n_vertices, g.n_edges
    if nv > 63 or ne > 64:
        return [sample_rphp(g, x, rng) for _ in range(size)]
    if not g.is_connected():
        raise StructureError("poor man's cat state needs a connected graph")
    zs = rng.integers(0, 1 << nv, size=size, dtype=np.uint64)
    ds = np.zeros(size, dtype=np.uint64)
    for k, (u, v) in enumerate(g.edges):
        bit = ((zs >> np.uint64(u)) ^ (zs >> np.uint64(v))) & np.uint64(1)
        ds |= bit << np.uint64(k)
    half = (x.weight() // 2) & 1
    targets = (np.bitwise_count(zs & np.uint64(x.bits)) + half) & 1
    ys = sample_uniform_parity_batch(nv, targets, size, rng)
    return [
        QuantumSample(F2Vector(int(y), nv), F2Vector(int(d), ne), F2Vector(int(z), nv))
        for y, d, z in zip(ys, ds, zs)
    ]


def pbp_success_probability(x: BitsOrTrits) -> Fraction:
    """Exact win probability of the rotated-cat strategy: 1 if |x| = 0 (mod 3), else 3/4."""
    return Fraction(1) if hamming_weight(x) % 3 == 0 else Fraction(3, 4)


def sample_pbp(x: BitsOrTrits, rng: np.random.Generator) -> F2Vector:
    """Rotated-cat circuit: odd-parity output with probability 3/4 when |x| is not 0 mod 3."""
    n = len(x)
    if hamming_weight(x) % 3 == 0:
        return sample_uniform_parity(n, 0, rng)
    odd = rng.random() < 0.75
    return sample_uniform_parity(n, int(odd), rng)


def sample_pbp_batch(weights: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Packed outputs for a batch of inputs given by their Hamming weights (n <= 64)."""
    weights = np.asarray(weights)
    bend = weights % 3 != 0
    odd = bend & (rng.random(weights.shape[0]) < 0.75)
    return sample_uniform_parity_batch(n, odd.astype(np.uint64), weights.shape[0], rng)


# -- closed-form laws --------------------------------------------------------


def parity_coset_law(m: int, parity: int) -> np.ndarray:
    """Uniform distribution over length-m strings of the given parity, indexed by packed value."""
    idx = np.arange(1 << m, dtype=np.uint64)
    mask = (np.bitwise_count(idx) & 1) == parity
    return mask / mask.sum()


def php_cat_law(x: F2Vector, m: Optional[int] = None) -> np.ndarray:
    _check_even(x)
    return parity_coset_law(x.length if m is None else m, php_target_parity(x))


def rphp_law(g: Graph, x: F2Vector) -> np.ndarray:
    """Joint law of (y, d) as an array indexed ``[y, d]``."""
    _check_even(x)
    nv, ne = g.n_vertices, g.n_edges
    law = np.zeros((1 << nv, 1 << ne))
    cosets = [parity_coset_law(nv, 0), parity_coset_law(nv, 1)]
    for zi in range(1 << nv):
        z = F2Vector(zi, nv)
        law[:, g.edge_parities(z).bits] += cosets[rphp_target_parity(x, z)] / (1 << nv)
    return law


def pbp_law(x: BitsOrTrits) -> np.ndarray:
    n = len(x)
    w_odd = 0.0 if hamming_weight(x) % 3 == 0 else 0.75
    return (1 - w_odd) * parity_coset_law(n, 0) + w_odd * parity_coset_law(n, 1)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


# -- statevector oracle ------------------------------------------------------


class StateVector:
    """Dense n-qubit state; qubit ``q`` is bit ``q`` of the basis index."""

    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amplitudes.size)))
        if 1 << n != amplitudes.size:
            raise ValueError("amplitude count must be a power of two")
        if n > MAX_QUBITS:
            raise CapacityError(f"statevector simulation is capped at {MAX_QUBITS} qubits")
        self.n = n
        self.amp = amplitudes.copy()

    @classmethod
    def zero(cls, n: int) -> StateVector:
        if n > MAX_QUBITS:
            raise CapacityError(f"statevector simulation is capped at {MAX_QUBITS} qubits")
        amp = np.zeros(1 << n, dtype=complex)
        amp[0] = 1
        return cls(amp)

    @classmethod
    def cat(cls, n: int) -> StateVector:
        if n > MAX_QUBITS:
            raise CapacityError(f"statevector simulation is capped at {MAX_QUBITS} qubits")
        amp = np.zeros(1 << n, dtype=complex)
        amp[0] = amp[-1] = 1 / math.sqrt(2)
        return cls(amp)

    def _bit(self, q: int) -> np.ndarray:
        return (np.arange(self.amp.size) >> q) & 1

    def apply_1q(self, gate: np.ndarray, q: int) -> StateVector:
        view = self.amp.reshape(1 << (self.n - q - 1), 2, 1 << q)
        self.amp = np.einsum("ab,ibj->iaj", gate, view).reshape(-1)
        return self

    def h(self, q: int) -> StateVector:
        return self.apply_1q(_H, q)

    def phase(self, q: int, phase: complex) -> StateVector:
        self.amp = np.where(self._bit(q) == 1, self.amp * phase, self.amp)
        return self

    def cnot(self, control: int, target: int) -> StateVector:
        idx = np.arange(self.amp.size)
        src = np.where((idx >> control) & 1, idx ^ (1 << target), idx)
        self.amp = self.amp[src]
        return self

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amp) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amp) ** 2


def _cap(n: int) -> None:
    if n > MAX_QUBITS:
        raise CapacityError(f"statevector simulation is capped at {MAX_QUBITS} qubits, need {n}")


def _rotated_cat_probabilities(phases: list[complex]) -> np.ndarray:
    _cap(len(phases))
    state = StateVector.cat(len(phases))
    for q, ph in enumerate(phases):
        if ph != 1:
            state.phase(q, ph)
    for q in range(state.n):
        state.h(q)
    return state.probabilities()


def statevector_php(x: F2Vector) -> np.ndarray:
    """Born distribution of the cat-state PHP circuit: controlled-S, then Hadamards."""
    return _rotated_cat_probabilities([1j if b else 1 for b in x])


def statevector_pbp_law(x: BitsOrTrits) -> np.ndarray:
    """Born distribution of the PBP circuit; input entry ``t`` applies phase omega^t."""
    return _rotated_cat_probabilities([OMEGA ** int(t) for t in x])


def statevector_pbp(x: BitsOrTrits) -> float:
    """Probability that the measured output has the parity PBP asks for."""
    probs = statevector_pbp_law(x)
    target = 0 if hamming_weight(x) % 3 == 0 else 1
    par = np.bitwise_count(np.arange(probs.size, dtype=np.uint64)) & 1
    return float(probs[par == target].sum())


def statevector_rphp(g: Graph, x: F2Vector) -> np.ndarray:
    """Joint (y, d) law of the poor-man's-cat circuit followed by the PHP circuit.

    Vertex qubits ``0..V-1`` start in |+>, edge qubits ``V..V+E-1`` in |0>;
    CNOTs follow :func:`cnot_layers`. Returns an array indexed ``[y, d]``.
    """
    nv, ne = g.n_vertices, g.n_edges
    _cap(nv + ne)
    state = StateVector.zero(nv + ne)
    for v in range(nv):
        state.h(v)
    for layer in cnot_layers(g).layers:
        for v, k in layer:
            state.cnot(v, nv + k)
    for v in range(nv):
        if x[v]:
            state.phase(v, 1j)
        state.h(v)
    return state.probabilities().reshape(1 << ne, 1 << nv).T
