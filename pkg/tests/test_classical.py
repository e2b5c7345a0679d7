import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shallowcirc.classical import (
    STAR,
    AffineStrategy,
    GameConstraints,
    InteractionGraph,
    LocalStrategy,
    Restriction,
    affine_as_local,
    affine_game_optimum,
    affine_win_prob_exact,
    apply_restriction,
    best_affine_strategy,
    constant_strategy,
    constrained_bound_holds,
    constrained_game_max,
    constrained_game_value,
    eval_local_strategy,
    hill_climb_local_strategy,
    independent_inputs,
    light_cones,
    pairwise_and_strategy,
    promise_inputs,
    random_local_strategy,
    random_shift_with_weight,
    restricted_game_optimum,
    sample_restriction,
    self_reduce_mod3,
    self_reduction_outcomes,
    walsh_hadamard,
)
from shallowcirc.errors import CapacityError, DomainError
from shallowcirc.f2lin import F2Vector
from shallowcirc.problems import PhpInstance, TritVector, even_parity_inputs, mod3_weight, verify_php


def brute_affine(a, b):
    n = b.length
    xs = list(even_parity_inputs(n))
    wins = sum((a ^ b.dot(x)) == (x.weight() // 2) % 2 for x in xs)
    return Fraction(wins, len(xs))


class TestAffine:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_exact_matches_enumeration(self, n):
        for bb in range(1 << n):
            for a in (0, 1):
                b = F2Vector(bb, n)
                assert affine_win_prob_exact(AffineStrategy(a, b)) == brute_affine(a, b)

    def test_ghz_values(self):
        assert affine_win_prob_exact(AffineStrategy(0, F2Vector.zeros(3))) == Fraction(1, 4)
        _, val = best_affine_strategy(3)
        assert val == Fraction(3, 4)

    @pytest.mark.parametrize("n", range(1, 15))
    def test_best_matches_formula(self, n):
        s, val = best_affine_strategy(n)
        assert val == affine_game_optimum(n)
        assert affine_win_prob_exact(s) == val

    def test_complement_symmetry(self):
        for bb in range(1 << 6):
            b = F2Vector(bb, 6)
            assert affine_win_prob_exact(AffineStrategy(0, b)) + affine_win_prob_exact(AffineStrategy(1, b)) == 1

    def test_outputs_realize_parity(self):
        s = AffineStrategy(1, F2Vector.from_str("1011"))
        for x in even_parity_inputs(4):
            assert s.outputs(x).parity() == s.output_parity(x)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            best_affine_strategy(25)


def brute_constrained_max(n, c):
    xs = [int(x) for x in promise_inputs(n, c)]
    best = Fraction(0)
    for a in (0, 1):
        for bb in range(1 << n):
            wins = sum(((bin(bb & x).count("1") & 1) ^ a) == (bin(x).count("1") // 2) % 2 for x in xs)
            best = max(best, Fraction(wins, len(xs)))
    return best


class TestConstrained:
    def test_no_constraints_equals_affine(self):
        for n in range(2, 9):
            s, val = constrained_game_max(n)
            assert val == best_affine_strategy(n)[1]
            assert constrained_game_value(n, GameConstraints(), s) == affine_win_prob_exact(s)

    @pytest.mark.parametrize(
        "n,c",
        [
            (5, GameConstraints(fixed=((0, 1),))),
            (6, GameConstraints(fixed=((0, 1), (1, 1)))),
            (6, GameConstraints(groups=(((0, 1, 2), 1),))),
            (7, GameConstraints(fixed=((0, 0),), groups=(((1, 2), 0), ((3, 4, 5), 1)))),
        ],
    )
    def test_transform_max_matches_brute_force(self, n, c):
        s, val = constrained_game_max(n, c)
        assert val == brute_constrained_max(n, c)
        assert constrained_game_value(n, c, s) == val

    def test_promise_inputs_respect_constraints(self):
        c = GameConstraints(fixed=((0, 1),), groups=(((1, 2, 3), 1),))
        for x in promise_inputs(6, c):
            x = int(x)
            assert bin(x).count("1") % 2 == 0 and x & 1 and bin(x & 0b1110).count("1") % 2 == 1

    def test_empty_promise(self):
        c = GameConstraints(fixed=((0, 1), (1, 0)))
        with pytest.raises(DomainError):
            constrained_game_max(2, c)

    def test_bound_holds_small_sweep(self):
        for n in range(2, 10):
            for d1 in range(0, 3):
                for ones in range(d1 + 1):
                    fixed = tuple((i, int(i < ones)) for i in range(d1))
                    rest = list(range(d1, n))
                    for split in range(2, len(rest) - 1):
                        for par in (0, 1):
                            if (par + ones) % 2:
                                continue
                            c = GameConstraints(fixed=fixed, groups=((tuple(rest[:split]), par),))
                            _, val = constrained_game_max(n, c)
                            assert constrained_bound_holds(val, n, d1, 1)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_restricted_optimum(self, n):
        for d in range(0, n):
            _, val = constrained_game_max(n, GameConstraints(fixed=tuple((i, 0) for i in range(d))))
            assert val == restricted_game_optimum(n, d)

    def test_bound_check_is_exact(self):
        # 1/2 + 2^-1.5 lies strictly between these two rationals
        assert constrained_bound_holds(Fraction(1, 2) + Fraction(353, 1000), 3, 0, 0)
        assert not constrained_bound_holds(Fraction(1, 2) + Fraction(354, 1000), 3, 0, 0)

    def test_walsh_hadamard_matches_definition(self):
        rng = np.random.default_rng(0)
        vals = rng.integers(-5, 5, size=16)
        out = walsh_hadamard(vals)
        for b in range(16):
            assert out[b] == sum(vals[x] * (-1) ** bin(b & x).count("1") for x in range(16))


class TestLocal:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_pairwise_and_wins_always(self, n):
        s = pairwise_and_strategy(n)
        assert s.m == n * (n - 1) // 2 and s.locality == 2
        assert eval_local_strategy(s).exact == 1

    def test_pairwise_and_with_verifier(self):
        s = pairwise_and_strategy(5)
        est = eval_local_strategy(s, lambda x, y: verify_php(PhpInstance(x, s.m), y))
        assert est.exact == 1

    @pytest.mark.parametrize("n", range(1, 11))
    def test_all_zero_strategy(self, n):
        xs = list(even_parity_inputs(n))
        expect = Fraction(sum(x.weight() % 4 == 0 for x in xs), len(xs))
        assert eval_local_strategy(constant_strategy(n, n)).exact == expect

    def test_affine_embedding_agrees(self):
        for bb in range(32):
            for a in (0, 1):
                s = AffineStrategy(a, F2Vector(bb, 5))
                assert eval_local_strategy(affine_as_local(s)).exact == affine_win_prob_exact(s)

    def test_vectorized_parity_matches_evaluate(self):
        rng = np.random.default_rng(1)
        s = random_local_strategy(8, 12, 3, rng)
        xs = np.arange(256, dtype=np.uint64)
        par = s.output_parity_batch(xs)
        for x in range(256):
            assert par[x] == s.evaluate(F2Vector(x, 8)).parity()

    def test_montecarlo_close_to_exact(self):
        s = constant_strategy(10, 10)
        exact = eval_local_strategy(s).value
        est = eval_local_strategy(s, mode="montecarlo", samples=50_000, rng=np.random.default_rng(2))
        assert abs(est.value - exact) < 5 * est.stderr

    def test_montecarlo_requires_rng(self):
        with pytest.raises(ValueError):
            eval_local_strategy(constant_strategy(3, 3), mode="montecarlo")

    def test_hill_climb_reports_true_value(self):
        s, val = hill_climb_local_strategy(4, [(0, 1), (2, 3)], np.random.default_rng(3), restarts=2, steps=50)
        assert val == eval_local_strategy(s).exact
        assert 0 <= val <= 1


class TestLightCones:
    def test_from_circuit(self):
        # inputs 0..3; gate 4 = f(0,1), gate 5 = f(4,2), outputs read 5 and 3
        g, depth = InteractionGraph.from_circuit(4, [(0, 1), (4, 2)], [5, 3])
        outs, ins = light_cones(g)
        assert outs == (frozenset({0, 1, 2}), frozenset({3}))
        assert ins[0] == frozenset({0}) and ins[3] == frozenset({1})
        assert depth == 2

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 14), st.integers(1, 14), st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_independent_set_properties(self, n, m, loc, seed):
        s = random_local_strategy(n, m, loc, np.random.default_rng(seed))
        g = InteractionGraph.from_strategy(s)
        chosen = independent_inputs(g)
        for cone in g.output_cones:
            assert len(cone & set(chosen)) <= 1
        D = g.average_intersection_degree()
        assert len(chosen) >= n / (1 + D) - 1e-9

    def test_disjoint_cones_keep_everything(self):
        g = InteractionGraph.from_strategy(affine_as_local(AffineStrategy(0, F2Vector.ones(6))))
        assert independent_inputs(g) == tuple(range(6))


class TestRestrictions:
    def test_sampler_rate(self):
        rng = np.random.default_rng(4)
        rho = sample_restriction(20_000, 0.3, rng)
        frac = len(rho.stars()) / 20_000
        assert abs(frac - 0.3) < 5 * math.sqrt(0.21 / 20_000)

    def test_str(self):
        assert str(Restriction((0, STAR, 1))) == "0*1"

    @pytest.mark.parametrize("seed", range(12))
    def test_restrict_then_evaluate(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 13))
        s = random_local_strategy(n, 10, 3, rng)
        rho = sample_restriction(n, 0.5, rng)
        r = apply_restriction(s, rho)
        assert r.locality <= s.locality
        k = len(rho.stars())
        for free in itertools.product((0, 1), repeat=k):
            x = rho.complete(free)
            assert r.evaluate(x) == s.evaluate(x)


def trits(n):
    for t in itertools.product(range(3), repeat=n):
        yield TritVector(t)


class TestSelfReduction:
    def test_shift_weight(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            b, w = random_shift_with_weight(7, rng)
            assert int(b.sum()) % 3 == w

    def test_shift_uniform(self):
        from scipy.stats import chisquare

        rng = np.random.default_rng(6)
        counts = Counter()
        for _ in range(27_000):
            b, _ = random_shift_with_weight(3, rng)
            counts[tuple(b)] += 1
        assert len(counts) == 27
        assert chisquare(list(counts.values())).pvalue > 0.001

    @pytest.mark.parametrize("n", range(1, 7))
    def test_exact_inner_stays_exact(self, n):
        rng = np.random.default_rng(n)
        for x in trits(n):
            assert self_reduce_mod3(mod3_weight, x, rng) == mod3_weight(x)

    def test_constant_inner_symmetric(self):
        rng = np.random.default_rng(7)
        trials = 30_000
        rates = []
        for x in (TritVector.from_str("0000"), TritVector.from_str("1220")):
            c = self_reduction_outcomes(lambda y: 0, x, trials, rng)
            rates.append(c[0] / trials)
            sigma = math.sqrt(c[1] + c[2])
            assert abs(int(c[1]) - int(c[2])) < 4 * sigma
        sigma = math.sqrt(2 * (1 / 3) * (2 / 3) / trials)
        assert abs(rates[0] - rates[1]) < 4 * sigma
