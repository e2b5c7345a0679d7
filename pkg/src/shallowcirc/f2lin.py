"""Bit-packed linear algebra over GF(2) and small Z4 helpers.

Vectors and matrix rows are stored as Python ints. Index ``i`` of a vector is
bit ``i`` of the int (least-significant bit first); every module relies on
this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import ShapeError


def popcount(x: int) -> int:
    return x.bit_count()


def parity(x: int) -> int:
    return x.bit_count() & 1


def pack_bits(bits: Iterable[int]) -> int:
    """Pack a sequence of 0/1 values into an int, element 0 in bit 0."""
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    if arr.size == 0:
        return 0
    if np.any(arr > 1):
        raise ValueError("bits must be 0 or 1")
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def unpack_bits(x: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(x.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].copy()


@dataclass(frozen=True)
class F2Vector:
    """Fixed-length vector over GF(2)."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ShapeError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ShapeError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> F2Vector:
        bits = list(bits)
        return cls(pack_bits(bits), len(bits))

    @classmethod
    def from_str(cls, s: str) -> F2Vector:
        """``"1100"`` -> x_0 = 1, x_1 = 1, x_2 = 0, x_3 = 0."""
        return cls.from_bits([int(ch) for ch in s])

    @classmethod
    def zeros(cls, n: int) -> F2Vector:
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> F2Vector:
        return cls((1 << n) - 1, n)

    @classmethod
    def unit(cls, n: int, i: int) -> F2Vector:
        if not 0 <= i < n:
            raise ShapeError(f"index {i} out of range for length {n}")
        return cls(1 << i, n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> F2Vector:
        return cls(pack_bits(rng.integers(0, 2, size=n, dtype=np.uint8)), n)

    @classmethod
    def from_hex(cls, s: str, n: int) -> F2Vector:
        return cls(int(s, 16) if s else 0, n)

    def to_hex(self) -> str:
        return format(self.bits, "x")

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def to_array(self) -> np.ndarray:
        return unpack_bits(self.bits, self.length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_list())

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())

    def _check(self, other: F2Vector) -> None:
        if self.length != other.length:
            raise ShapeError(f"length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other: F2Vector) -> F2Vector:
        self._check(other)
        return F2Vector(self.bits ^ other.bits, self.length)

    def __and__(self, other: F2Vector) -> F2Vector:
        self._check(other)
        return F2Vector(self.bits & other.bits, self.length)

    def __invert__(self) -> F2Vector:
        return F2Vector(self.bits ^ ((1 << self.length) - 1), self.length)

    def weight(self) -> int:
        return self.bits.bit_count()

    def parity(self) -> int:
        return self.bits.bit_count() & 1

    def dot(self, other: F2Vector) -> int:
        self._check(other)
        return parity(self.bits & other.bits)

    def concat(self, other: F2Vector) -> F2Vector:
        return F2Vector(self.bits | (other.bits << self.length), self.length + other.length)

    def slice(self, start: int, stop: int) -> F2Vector:
        if not 0 <= start <= stop <= self.length:
            raise ShapeError(f"bad slice [{start}:{stop}] of length {self.length}")
        n = stop - start
        return F2Vector((self.bits >> start) & ((1 << n) - 1), n)

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]


@dataclass(frozen=True)
class F2Matrix:
    """Dense matrix over GF(2); ``rows[i]`` packs row ``i``."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise ShapeError("row does not fit in ncols")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> F2Matrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        return cls(tuple(pack_bits(r) for r in rows), ncols)

    @classmethod
    def from_array(cls, arr) -> F2Matrix:
        arr = np.asarray(arr, dtype=np.int64) & 1
        if arr.ndim != 2:
            raise ShapeError("expected a 2-D array")
        return cls(tuple(pack_bits(r.astype(np.uint8)) for r in arr), arr.shape[1])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def random(cls, nrows: int, ncols: int, rng: np.random.Generator) -> F2Matrix:
        return cls.from_array(rng.integers(0, 2, size=(nrows, ncols)))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = unpack_bits(r, self.ncols)
        return out

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.rows[i], self.ncols)

    def col(self, j: int) -> F2Vector:
        return F2Vector(sum(((r >> j) & 1) << i for i, r in enumerate(self.rows)), self.nrows)

    def transpose(self) -> F2Matrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(tuple(cols), self.nrows)

    @property
    def T(self) -> F2Matrix:
        return self.transpose()

    def matvec(self, v: F2Vector) -> F2Vector:
        if v.length != self.ncols:
            raise ShapeError(f"matrix has {self.ncols} columns, vector has length {v.length}")
        return F2Vector(sum(parity(r & v.bits) << i for i, r in enumerate(self.rows)), self.nrows)

    def matmul(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.rows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return F2Matrix(tuple(out), other.ncols)

    def __matmul__(self, other):
        if isinstance(other, F2Vector):
            return self.matvec(other)
        return self.matmul(other)

    def __xor__(self, other: F2Matrix) -> F2Matrix:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return F2Matrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.transpose()

    def diagonal(self) -> F2Vector:
        n = min(self.nrows, self.ncols)
        return F2Vector(sum(((self.rows[i] >> i) & 1) << i for i in range(n)), n)

    def with_diagonal(self, diag: F2Vector) -> F2Matrix:
        if self.nrows != self.ncols or diag.length != self.nrows:
            raise ShapeError("diagonal length must match a square matrix")
        rows = [(r & ~(1 << i)) | (diag[i] << i) for i, r in enumerate(self.rows)]
        return F2Matrix(tuple(rows), self.ncols)

    def rank(self) -> int:
        return F2Elimination(self).rank

    @staticmethod
    def block_diag(*blocks: F2Matrix) -> F2Matrix:
        rows: list[int] = []
        offset = 0
        for blk in blocks:
            rows.extend(r << offset for r in blk.rows)
            offset += blk.ncols
        return F2Matrix(tuple(rows), offset)

    @staticmethod
    def block(blocks: Sequence[Sequence[F2Matrix]]) -> F2Matrix:
        """Assemble a matrix from a 2-D grid of conforming blocks."""
        widths = [b.ncols for b in blocks[0]]
        rows: list[int] = []
        for brow in blocks:
            if [b.ncols for b in brow] != widths:
                raise ShapeError("block column widths differ")
            heights = {b.nrows for b in brow}
            if len(heights) != 1:
                raise ShapeError("block row heights differ")
            for i in range(heights.pop()):
                acc, off = 0, 0
                for b in brow:
                    acc |= b.rows[i] << off
                    off += b.ncols
                rows.append(acc)
        return F2Matrix(tuple(rows), sum(widths))


class F2Elimination:
    """Reduced row echelon form of ``A`` together with the row transform.

    ``transform[i]`` records which original rows were summed into reduced row
    ``i``, so repeated solves against the same matrix cost O(rows) bit ops.
    Pivot choice is deterministic: the first remaining row with the column bit
    set.
    """

    def __init__(self, A: F2Matrix):
        self.nrows, self.ncols = A.shape
        rows = list(A.rows)
        trans = [1 << i for i in range(self.nrows)]
        pivots: list[int] = []
        r = 0
        for col in range(self.ncols):
            if r == self.nrows:
                break
            bit = 1 << col
            piv = next((i for i in range(r, self.nrows) if rows[i] & bit), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            trans[r], trans[piv] = trans[piv], trans[r]
            for i in range(self.nrows):
                if i != r and rows[i] & bit:
                    rows[i] ^= rows[r]
                    trans[i] ^= trans[r]
            pivots.append(col)
            r += 1
        self.reduced = tuple(rows)
        self.transform = tuple(trans)
        self.pivot_cols = tuple(pivots)

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def solve(self, b: F2Vector) -> Optional[F2Vector]:
        if b.length != self.nrows:
            raise ShapeError(f"system has {self.nrows} rows, rhs has length {b.length}")
        rhs = [parity(t & b.bits) for t in self.transform]
        if any(rhs[self.rank:]):
            return None
        x = 0
        for i, col in enumerate(self.pivot_cols):
            if rhs[i]:
                x |= 1 << col
        return F2Vector(x, self.ncols)

    def kernel_basis(self) -> list[F2Vector]:
        pivot_set = set(self.pivot_cols)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = 1 << free
            for i, col in enumerate(self.pivot_cols):
                if (self.reduced[i] >> free) & 1:
                    v |= 1 << col
            basis.append(F2Vector(v, self.ncols))
        return basis


def f2_solve(A: F2Matrix, b: F2Vector) -> Optional[F2Vector]:
    """Return some x with A x = b over GF(2), or None if inconsistent."""
    if A.nrows != b.length:
        raise ShapeError(f"A has {A.nrows} rows, b has length {b.length}")
    return F2Elimination(A).solve(b)


def f2_kernel_basis(A: F2Matrix) -> list[F2Vector]:
    return F2Elimination(A).kernel_basis()


def f2_rank(A: F2Matrix) -> int:
    return F2Elimination(A).rank


def span(vectors: Sequence[F2Vector], n: int) -> set[int]:
    """All elements (as packed ints) of the span; for small bases only."""
    out = {0}
    for v in vectors:
        if v.length != n:
            raise ShapeError("basis vector length mismatch")
        out |= {s ^ v.bits for s in out}
    return out


@dataclass(frozen=True)
class Z4Vector:
    """Vector with entries in {0, 1, 2, 3}."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if any(not 0 <= e <= 3 for e in self.entries):
            raise ValueError("Z4 entries must lie in {0, 1, 2, 3}")

    @classmethod
    def zeros(cls, n: int) -> Z4Vector:
        return cls((0,) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def mod2(self) -> F2Vector:
        return F2Vector.from_bits([e & 1 for e in self.entries])

    def concat(self, other: Z4Vector) -> Z4Vector:
        return Z4Vector(self.entries + other.entries)
