"""Fourier-bias measurements on per-copy win indicators of parallel games.

Records hold one symbol per copy: 0 for a win, nonzero for a loss (the loss
type for ternary outcomes). Biases are computed from integer histograms, so
they stay exact until the final division.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .classical import AffineStrategy, walsh_hadamard
from .errors import CapacityError, ShapeError

MAX_SUBSET_K = 20
OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class IndicatorSamples:
    alphabet: int  # 2 or 3
    records: np.ndarray  # shape (N, k), entries < alphabet

    def __post_init__(self) -> None:
        if self.alphabet not in (2, 3):
            raise ValueError("alphabet must be 2 or 3")
        rec = np.asarray(self.records, dtype=np.uint8)
        if rec.ndim != 2:
            raise ShapeError("records must be a 2-D array")
        if rec.size and rec.max() >= self.alphabet:
            raise ValueError("symbol outside alphabet")
        object.__setattr__(self, "records", rec)

    @property
    def n_samples(self) -> int:
        return self.records.shape[0]

    @property
    def k(self) -> int:
        return self.records.shape[1]

    def packed(self) -> np.ndarray:
        """Binary records as integers, coordinate i in bit i."""
        if self.alphabet != 2:
            raise ValueError("packing is defined for binary records")
        weights = np.uint64(1) << np.arange(self.k, dtype=np.uint64)
        return (self.records.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)

    def histogram(self) -> np.ndarray:
        if self.k > MAX_SUBSET_K:
            raise CapacityError(f"histograms are limited to k <= {MAX_SUBSET_K}")
        return np.bincount(self.packed().astype(np.int64), minlength=1 << self.k)


@dataclass(frozen=True)
class BiasEstimate:
    value: Union[float, complex]
    stderr: float


def collect_win_indicators(
    trial: Callable[[np.random.Generator], Sequence[int]],
    k: int,
    samples: int,
    rng: np.random.Generator,
    alphabet: int = 2,
) -> IndicatorSamples:
    """Run ``trial(rng)`` ``samples`` times; each run returns k outcome symbols."""
    if samples < 1:
        raise ValueError("need at least one sample")
    records = np.zeros((samples, k), dtype=np.uint8)
    for t in range(samples):
        row = trial(rng)
        if len(row) != k:
            raise ShapeError(f"trial returned {len(row)} symbols, expected {k}")
        records[t] = row
    return IndicatorSamples(alphabet, records)


def affine_php_indicators(
    strategies: Sequence[AffineStrategy], samples: int, rng: np.random.Generator
) -> IndicatorSamples:
    """Parallel PHP: copy i plays ``strategies[i]`` on a fresh uniform even-parity input."""
    k = len(strategies)
    records = np.zeros((samples, k), dtype=np.uint8)
    for i, s in enumerate(strategies):
        n = s.n
        if not 1 <= n <= 63:
            raise CapacityError("inputs are packed into 64-bit words")
        low = rng.integers(0, 1 << (n - 1), size=samples, dtype=np.uint64) if n > 1 else np.zeros(samples, np.uint64)
        xs = low | ((np.bitwise_count(low).astype(np.uint64) & np.uint64(1)) << np.uint64(n - 1))
        pred = (np.bitwise_count(xs & np.uint64(s.b.bits)) & 1) ^ s.a
        target = (np.bitwise_count(xs) // 2) & 1
        records[:, i] = pred != target
    return IndicatorSamples(2, records)


def _mask(S: Union[int, Iterable[int]], k: int) -> int:
    if isinstance(S, (int, np.integer)):
        mask = int(S)
    else:
        mask = 0
        for i in S:
            if not 0 <= i < k:
                raise ShapeError(f"index {i} out of range for k = {k}")
            mask |= 1 << i
    if mask == 0:
        raise ValueError("subset must be nonempty")
    if mask >> k:
        raise ShapeError("subset mask exceeds k")
    return mask


def subset_bias(samples: IndicatorSamples, S: Union[int, Iterable[int]]) -> BiasEstimate:
    """Empirical E[(-1)^(XOR of w_i over S)] with its binomial standard error."""
    if samples.alphabet != 2:
        raise ValueError("subset bias needs binary records")
    mask = _mask(S, samples.k)
    cols = [i for i in range(samples.k) if (mask >> i) & 1]
    odd = int(np.count_nonzero(np.bitwise_xor.reduce(samples.records[:, cols], axis=1)))
    N = samples.n_samples
    bias = (N - 2 * odd) / N
    return BiasEstimate(bias, math.sqrt(max(1 - bias * bias, 0.0) / N))


def all_subset_biases(samples: IndicatorSamples) -> np.ndarray:
    """Biases for every mask in [0, 2^k); entry 0 is the trivial bias 1."""
    counts = samples.histogram()
    return walsh_hadamard(counts) / samples.n_samples


def distribution_from_biases(biases: np.ndarray) -> np.ndarray:
    """Inverse transform: recover outcome probabilities from all 2^k biases."""
    return walsh_hadamard_float(biases) / biases.size


def walsh_hadamard_float(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float, copy=True)
    h = 1
    while h < out.size:
        view = out.reshape(-1, 2, h)
        lo = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = lo - view[:, 1, :]
        h *= 2
    return out


@dataclass(frozen=True)
class VaziraniReport:
    epsilon: float  # max |bias| over nonempty subsets
    tv_bound: float  # epsilon * 2^(k/2)
    all_win_bound: float  # 2^-k + epsilon
    empirical_all_win: float


def vazirani_checks(biases: np.ndarray) -> VaziraniReport:
    """Bounds implied by the XOR lemma, from biases indexed by subset mask.

    ``biases`` must hold all 2^k entries (entry 0, the empty set, is ignored
    for epsilon). Pr[all coordinates 0] is recovered exactly by the inverse
    transform.
    """
    biases = np.asarray(biases, dtype=float)
    size = biases.size
    k = size.bit_length() - 1
    if size < 2 or 1 << k != size:
        raise ValueError("need biases for all 2^k subsets")
    if k > MAX_SUBSET_K:
        raise CapacityError(f"all-subset sweeps are limited to k <= {MAX_SUBSET_K}")
    eps = float(np.max(np.abs(biases[1:])))
    full = biases.copy()
    full[0] = 1.0
    zero_mass = float(full.sum() / size)
    return VaziraniReport(eps, eps * 2 ** (k / 2), 2.0**-k + eps, zero_mass)


def z3_character_bias(samples: IndicatorSamples, a: Sequence[int]) -> BiasEstimate:
    """Empirical E[omega^(<a, record>)] for a nonzero a in F_3^k."""
    a = np.asarray(a, dtype=np.int64) % 3
    if a.shape != (samples.k,):
        raise ShapeError("character index must have length k")
    if not a.any():
        raise ValueError("character index must be nonzero")
    exps = (samples.records.astype(np.int64) @ a) % 3
    counts = np.bincount(exps, minlength=3)
    N = samples.n_samples
    mean = sum(int(c) * OMEGA**j for j, c in enumerate(counts)) / N
    return BiasEstimate(mean, math.sqrt(max(1 - abs(mean) ** 2, 0.0) / N))


def all_z3_character_biases(samples: IndicatorSamples) -> dict[tuple[int, ...], BiasEstimate]:
    if 3**samples.k > 3**12:
        raise CapacityError("all-character sweeps are limited to k <= 12")
    out = {}
    for code in range(1, 3**samples.k):
        a = tuple((code // 3**i) % 3 for i in range(samples.k))
        out[a] = z3_character_bias(samples, a)
    return out


def z3_tv_bound(epsilon: float, k: int) -> float:
    """epsilon * sqrt(|G|) with |G| = 3^k."""
    return epsilon * 3 ** (k / 2)


def biases_to_csv(biases: np.ndarray, n_samples: int, out: Optional[io.TextIOBase] = None) -> str:
    """One row per nonempty subset: mask, bias, stderr (12 significant digits)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["mask", "bias", "stderr"])
    for mask in range(1, len(biases)):
        b = float(biases[mask])
        se = math.sqrt(max(1 - b * b, 0.0) / n_samples)
        w.writerow([mask, f"{b:.12g}", f"{se:.12g}"])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
