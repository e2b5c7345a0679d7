import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from shallowcirc.errors import CapacityError, PromiseViolation
from shallowcirc.f2lin import F2Vector
from shallowcirc.graphs import Graph, grid_graph, grid_spanning_tree
from shallowcirc.problems import (
    PhpInstance,
    RphpInstance,
    TritVector,
    even_parity_inputs,
    gen_even_parity_input,
    verify_pbp,
    verify_php,
    verify_php_batch,
    verify_rphp,
)
from shallowcirc.qsim import (
    MAX_QUBITS,
    StateVector,
    parity_coset_law,
    pbp_law,
    pbp_success_probability,
    php_cat_law,
    rphp_law,
    sample_pbp,
    sample_pbp_batch,
    sample_php_cat,
    sample_php_cat_batch,
    sample_rphp,
    sample_rphp_batch,
    statevector_pbp,
    statevector_pbp_law,
    statevector_php,
    statevector_rphp,
    total_variation,
)


def v(s):
    return F2Vector.from_str(s)


class TestPhpSampler:
    def test_ghz_case_always_odd(self):
        rng = np.random.default_rng(0)
        assert all(sample_php_cat(v("110"), rng).parity() == 1 for _ in range(200))

    def test_zero_input_even(self):
        rng = np.random.default_rng(1)
        assert all(sample_php_cat(v("0000"), rng).parity() == 0 for _ in range(200))

    def test_promise(self):
        with pytest.raises(PromiseViolation):
            sample_php_cat(v("100"), np.random.default_rng(0))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_every_sample_verifies(self, n):
        rng = np.random.default_rng(n)
        for x in even_parity_inputs(n):
            inst = PhpInstance(x, n)
            for _ in range(20):
                assert verify_php(inst, sample_php_cat(x, rng))
            assert verify_php_batch(inst, sample_php_cat_batch(x, 500, rng)).all()

    @pytest.mark.parametrize("x", ["0000", "1100", "111100", "11000000"])
    def test_coset_uniform_chi_square(self, x):
        x = v(x)
        n = len(x)
        ys = sample_php_cat_batch(x, 40 * (1 << n), np.random.default_rng(17))
        counts = np.bincount(ys.astype(np.int64), minlength=1 << n)
        law = php_cat_law(x)
        assert counts[law == 0].sum() == 0
        assert chisquare(counts[law > 0]).pvalue > 0.001

    def test_custom_output_length(self):
        y = sample_php_cat(v("11"), np.random.default_rng(0), m=7)
        assert len(y) == 7 and y.parity() == 1


class TestStatevector:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_php_law_matches(self, n):
        for x in even_parity_inputs(n):
            assert total_variation(statevector_php(x), php_cat_law(x)) < 1e-10

    def test_php_zero_is_uniform_even(self):
        assert np.allclose(statevector_php(F2Vector.zeros(5)), parity_coset_law(5, 0))

    def test_ghz(self):
        probs = statevector_php(v("110"))
        odd = [i for i in range(8) if bin(i).count("1") % 2]
        assert math.isclose(probs[odd].sum(), 1.0, abs_tol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 7), st.lists(st.tuples(st.sampled_from("hpc"), st.integers(0, 6), st.integers(0, 6)), max_size=30))
    def test_norm_conserved(self, n, ops):
        s = StateVector.zero(n)
        for op, a, b in ops:
            a, b = a % n, b % n
            if op == "h":
                s.h(a)
            elif op == "p":
                s.phase(a, np.exp(0.3j * (b + 1)))
            elif a != b:
                s.cnot(a, b)
            assert abs(s.norm() - 1) < 1e-10

    def test_cnot_and_h_on_basis_states(self):
        s = StateVector.zero(2).h(0).cnot(0, 1)
        assert np.allclose(s.probabilities(), [0.5, 0, 0, 0.5])

    def test_capacity(self):
        with pytest.raises(CapacityError):
            StateVector.zero(MAX_QUBITS + 1)
        with pytest.raises(CapacityError):
            statevector_rphp(grid_spanning_tree(3, 3), F2Vector.zeros(9))


class TestRphp:
    @pytest.mark.parametrize("g", [Graph.path(2), Graph.path(4), grid_spanning_tree(2, 2), grid_graph(2, 2), Graph.cycle(5)])
    def test_joint_law_matches_statevector(self, g):
        for x in even_parity_inputs(g.n_vertices):
            assert total_variation(statevector_rphp(g, x), rphp_law(g, x)) < 1e-10

    @pytest.mark.parametrize("w,h", [(2, 2), (3, 3), (4, 4), (5, 5)])
    def test_samples_verify(self, w, h):
        g = grid_spanning_tree(w, h)
        rng = np.random.default_rng(w * h)
        for _ in range(5):
            x = gen_even_parity_input(g.n_vertices, rng)
            inst = RphpInstance(g, x)
            for s in sample_rphp_batch(g, x, 200, rng):
                assert verify_rphp(inst, s.y, s.d)
            s = sample_rphp(g, x, rng)
            assert verify_rphp(inst, s.y, s.d)

    def test_batch_law_chi_square(self):
        g = grid_spanning_tree(2, 2)
        x = v("1010")
        samples = sample_rphp_batch(g, x, 30_000, np.random.default_rng(3))
        # flatten [d, y] with y as the fast axis
        flat = rphp_law(g, x).T.reshape(-1)
        counts = np.bincount([s.y.bits + 16 * s.d.bits for s in samples], minlength=flat.size)
        assert flat.sum() == pytest.approx(1.0)
        assert counts[flat == 0].sum() == 0
        assert chisquare(counts[flat > 0], flat[flat > 0] * len(samples)).pvalue > 0.001

    def test_d_consistent_with_hidden_z(self):
        g = grid_graph(3, 3)
        s = sample_rphp(g, F2Vector.zeros(9), np.random.default_rng(0))
        assert g.edge_parities(s.z) == s.d


class TestPbp:
    def test_probabilities(self):
        assert pbp_success_probability(v("111")) == 1
        assert pbp_success_probability(v("110")) == pytest.approx(0.75)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_statevector_binary(self, n):
        for xb in range(1 << n):
            x = F2Vector(xb, n)
            expect = 1.0 if x.weight() % 3 == 0 else 0.75
            assert abs(statevector_pbp(x) - expect) < 1e-12
            assert total_variation(statevector_pbp_law(x), pbp_law(x)) < 1e-10

    def test_statevector_trits(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            t = TritVector(tuple(int(c) for c in rng.integers(0, 3, size=6)))
            expect = 1.0 if t.weight() % 3 == 0 else 0.75
            assert abs(statevector_pbp(t) - expect) < 1e-12

    def test_certain_win_on_zero_mod3(self):
        rng = np.random.default_rng(5)
        assert all(verify_pbp(v("111000"), sample_pbp(v("111000"), rng)) for _ in range(300))

    def test_sampler_rate(self):
        rng = np.random.default_rng(6)
        x = v("1000")
        wins = sum(verify_pbp(x, sample_pbp(x, rng)) for _ in range(20_000))
        assert abs(wins / 20_000 - 0.75) < 5 * math.sqrt(0.75 * 0.25 / 20_000)

    def test_batch_rate(self):
        rng = np.random.default_rng(7)
        ys = sample_pbp_batch(np.full(40_000, 2), 5, rng)
        rate = float(np.mean(np.bitwise_count(ys) & 1))
        assert abs(rate - 0.75) < 5 * math.sqrt(0.75 * 0.25 / 40_000)
