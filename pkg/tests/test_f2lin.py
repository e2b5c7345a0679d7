import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shallowcirc.errors import ShapeError
from shallowcirc.f2lin import (
    F2Elimination,
    F2Matrix,
    F2Vector,
    Z4Vector,
    f2_kernel_basis,
    f2_rank,
    f2_solve,
    pack_bits,
    span,
    unpack_bits,
)


def matrices(max_rows=7, max_cols=7):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(
            st.lists(st.integers(0, 1), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]
        ).map(F2Matrix.from_rows)
    )


def brute_rank(A: F2Matrix) -> int:
    # size of the row space, by enumeration
    rows = [A.row(i) for i in range(A.nrows)]
    return len(span(rows, A.ncols)).bit_length() - 1


class TestVector:
    def test_from_str_is_lsb_first(self):
        v = F2Vector.from_str("1100")
        assert v.bits == 0b0011
        assert v.to_list() == [1, 1, 0, 0]
        assert str(v) == "1100"

    def test_hex_round_trip(self):
        v = F2Vector.from_str("10110001")
        assert F2Vector.from_hex(v.to_hex(), 8) == v

    def test_bits_must_fit(self):
        with pytest.raises(ShapeError):
            F2Vector(0b100, 2)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            F2Vector.zeros(3) ^ F2Vector.zeros(4)

    def test_concat_and_slice(self):
        a, b = F2Vector.from_str("110"), F2Vector.from_str("01")
        c = a.concat(b)
        assert str(c) == "11001"
        assert c.slice(0, 3) == a and c.slice(3, 5) == b

    @given(st.lists(st.integers(0, 1), max_size=70))
    def test_pack_unpack(self, bits):
        x = pack_bits(bits)
        assert unpack_bits(x, len(bits)).tolist() == bits

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=40), st.data())
    def test_dot_and_weight(self, bits, data):
        other = data.draw(st.lists(st.integers(0, 1), min_size=len(bits), max_size=len(bits)))
        u, v = F2Vector.from_bits(bits), F2Vector.from_bits(other)
        assert u.dot(v) == sum(a * b for a, b in zip(bits, other)) % 2
        assert u.weight() == sum(bits)
        assert (~u).weight() == len(bits) - sum(bits)

    def test_z4(self):
        z = Z4Vector((3, 2, 1, 0))
        assert str(z.mod2()) == "1010"
        with pytest.raises(ValueError):
            Z4Vector((4,))


class TestMatrix:
    @given(matrices(), st.data())
    def test_matvec_matches_numpy(self, A, data):
        bits = data.draw(st.lists(st.integers(0, 1), min_size=A.ncols, max_size=A.ncols))
        v = F2Vector.from_bits(bits)
        expect = (A.to_array().astype(int) @ np.array(bits)) % 2
        assert A.matvec(v).to_list() == expect.tolist()

    @given(matrices(5, 5), matrices(5, 5))
    def test_matmul_matches_numpy(self, A, B):
        if A.ncols != B.nrows:
            B = F2Matrix.zeros(A.ncols, 3)
        expect = (A.to_array().astype(int) @ B.to_array().astype(int)) % 2
        assert np.array_equal((A @ B).to_array(), expect)

    @given(matrices())
    def test_transpose_involution(self, A):
        assert A.T.T == A
        assert np.array_equal(A.T.to_array(), A.to_array().T)

    def test_block(self):
        I2 = F2Matrix.identity(2)
        Z = F2Matrix.zeros(2, 2)
        assert F2Matrix.block([[I2, Z], [Z, I2]]) == F2Matrix.identity(4)
        assert F2Matrix.block_diag(I2, I2) == F2Matrix.identity(4)

    def test_diagonal(self):
        A = F2Matrix.from_rows([[1, 1], [1, 0]])
        assert A.is_symmetric()
        assert str(A.diagonal()) == "10"
        assert A.with_diagonal(F2Vector.from_str("01")) == F2Matrix.from_rows([[0, 1], [1, 1]])


class TestElimination:
    @settings(max_examples=150)
    @given(matrices())
    def test_rank_matches_enumeration(self, A):
        assert f2_rank(A) == brute_rank(A)

    @settings(max_examples=150)
    @given(matrices())
    def test_rank_nullity(self, A):
        assert f2_rank(A) + len(f2_kernel_basis(A)) == A.ncols

    @settings(max_examples=150)
    @given(matrices())
    def test_kernel_vectors_multiply_to_zero(self, A):
        basis = f2_kernel_basis(A)
        for v in basis:
            assert A.matvec(v).bits == 0
        # independence: span has full size
        assert len(span(basis, A.ncols)) == 2 ** len(basis)

    @settings(max_examples=150)
    @given(matrices(6, 6), st.data())
    def test_solve_multiply_back(self, A, data):
        bits = data.draw(st.lists(st.integers(0, 1), min_size=A.nrows, max_size=A.nrows))
        b = F2Vector.from_bits(bits)
        x = f2_solve(A, b)
        solvable = any(
            A.matvec(F2Vector.from_bits(c)) == b for c in itertools.product((0, 1), repeat=A.ncols)
        )
        if x is None:
            assert not solvable
        else:
            assert A.matvec(x) == b

    def test_inconsistent_system(self):
        A = F2Matrix.from_rows([[1, 1], [1, 1]])
        assert f2_solve(A, F2Vector.from_str("10")) is None
        assert f2_solve(A, F2Vector.from_str("11")) is not None

    def test_cached_elimination_reused(self):
        rng = np.random.default_rng(3)
        A = F2Matrix.random(12, 12, rng)
        elim = F2Elimination(A)
        for _ in range(20):
            x = F2Vector.random(12, rng)
            assert A.matvec(elim.solve(A.matvec(x))) == A.matvec(x)

    def test_rhs_shape_checked(self):
        with pytest.raises(ShapeError):
            f2_solve(F2Matrix.identity(3), F2Vector.zeros(2))

    def test_identity_full_rank(self):
        assert f2_rank(F2Matrix.identity(9)) == 9
        assert f2_kernel_basis(F2Matrix.identity(9)) == []


def test_popcount_parity_match_naive_loop():
    from shallowcirc.f2lin import parity, popcount

    rng = np.random.default_rng(11)
    for x in rng.integers(0, 2**62, size=10_000):
        x = int(x)
        naive = sum((x >> i) & 1 for i in range(63))
        assert popcount(x) == naive
        assert parity(x) == naive % 2


@pytest.mark.parametrize("seed", range(25))
def test_kernel_span_equals_nullspace_by_enumeration(seed):
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 13))
    A = F2Matrix.random(rows, cols, rng)
    ker = span(f2_kernel_basis(A), cols)
    for x in range(1 << cols):
        assert (x in ker) == (A.matvec(F2Vector(x, cols)).bits == 0)


def test_spec_small_cases():
    assert f2_solve(F2Matrix.identity(2), F2Vector.from_str("10")) == F2Vector.from_str("10")
    assert len(f2_kernel_basis(F2Matrix.zeros(3, 3))) == 3
    assert f2_kernel_basis(F2Matrix.from_rows([[0, 1], [1, 0]])) == []
