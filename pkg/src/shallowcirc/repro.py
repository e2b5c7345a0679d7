"""Reproduction suite: one check per acceptance criterion, at fixed seeds.

Each ``check_*`` function returns a :class:`CriterionResult`; ``run_all``
runs them in order. The pytest module and the ``repro`` CLI command both use
these functions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import classical, qsim, reductions
from .f2lin import F2Vector, span
from .graphs import grid_spanning_tree, cnot_layers
from .problems import (
    PhpInstance,
    RphpInstance,
    TritVector,
    even_parity_inputs,
    gen_even_parity_input,
    lq_basis,
    lq_brute_force,
    q_table,
    random_hlf_instance,
    verify_hlf,
    verify_php,
    verify_php_batch,
    verify_rphp,
)
from .rng import task_rng
from .xorlab import affine_php_indicators, all_subset_biases, vazirani_checks

MASTER_SEED = 20190418


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number: int, name: str, limit: float | None = None):
    def wrap(fn: Callable[[], tuple[bool, str, dict]]):
        def run() -> CriterionResult:
            t0 = time.perf_counter()
            ok, detail, data = fn()
            dt = time.perf_counter() - t0
            if limit is not None and dt > limit:
                ok = False
                detail += f"; runtime {dt:.1f}s exceeds {limit:.0f}s"
            return CriterionResult(number, name, ok, detail, dt, data)

        run.__name__ = fn.__name__
        run.number = number  # type: ignore[attr-defined]
        return run

    return wrap


@_timed(1, "affine game optimum", limit=60)
def check_affine_optimum():
    values = {}
    ok = True
    for n in range(2, 11):
        _, v = classical.best_affine_strategy(n)
        values[n] = v
        ok &= v == classical.affine_game_optimum(n)
    ok &= values[3] == Fraction(3, 4)
    return ok, "n=2..10 exact; n=3 -> " + str(values[3]), {"values": {n: str(v) for n, v in values.items()}}


@_timed(2, "quantum PHP exactness")
def check_php_exactness():
    rng = task_rng(MASTER_SEED, 2)
    samples = 10_000
    worst_tv = 0.0
    failures = 0
    inputs = 0
    for n in range(1, 11):
        for x in even_parity_inputs(n):
            inst = PhpInstance(x, n)
            ys = qsim.sample_php_cat_batch(x, samples, rng)
            failures += int(np.count_nonzero(~verify_php_batch(inst, ys)))
            failures += sum(not verify_php(inst, F2Vector(int(y), n)) for y in ys[:8])
            worst_tv = max(worst_tv, qsim.total_variation(qsim.php_cat_law(x), qsim.statevector_php(x)))
            inputs += 1
    ok = failures == 0 and worst_tv < 1e-10
    return ok, f"{inputs} inputs x {samples} samples, {failures} rejected; max TV {worst_tv:.2e}", {"max_tv": worst_tv}


def _rphp_inputs(width: int, rng: np.random.Generator, cap: int = 64):
    n = width * width
    if n <= 9:
        return list(even_parity_inputs(n))
    return [gen_even_parity_input(n, rng) for _ in range(cap)]


@_timed(3, "Grid-RPHP exactness")
def check_rphp_exactness():
    rng = task_rng(MASTER_SEED, 3)
    samples = 1000
    failures = 0
    checked = 0
    for w in range(2, 6):
        g = grid_spanning_tree(w, w)
        for x in _rphp_inputs(w, rng):
            inst = RphpInstance(g, x)
            for s in qsim.sample_rphp_batch(g, x, samples, rng):
                failures += not verify_rphp(inst, s.y, s.d)
                checked += 1
    g = grid_spanning_tree(2, 2)
    worst_tv = max(
        qsim.total_variation(qsim.rphp_law(g, x), qsim.statevector_rphp(g, x)) for x in even_parity_inputs(4)
    )
    ok = failures == 0 and worst_tv < 1e-10
    return ok, f"{checked} samples on 2x2..5x5 trees, {failures} rejected; 2x2 TV {worst_tv:.2e}", {"max_tv": worst_tv}


def _pipeline(inst: RphpInstance, width: int, brute: bool) -> bool:
    h, emb = reductions.rphp_to_hlf(inst, width)
    p = reductions.solve_hlf_reference(h)
    y, d = reductions.hlf_solution_to_rphp(p, emb)
    ok = verify_rphp(inst, y, d) and verify_hlf(h, p)
    if brute:
        ok = ok and verify_hlf(h, p, brute_force=True)
    return ok


@_timed(4, "HLF pipeline", limit=300)
def check_hlf_pipeline():
    rng = task_rng(MASTER_SEED, 4)
    g3, g4 = grid_spanning_tree(3, 3), grid_spanning_tree(4, 4)
    fails3 = sum(not _pipeline(RphpInstance(g3, x), 3, brute=True) for x in even_parity_inputs(9))
    fails4 = sum(not _pipeline(RphpInstance(g4, gen_even_parity_input(16, rng)), 4, brute=False) for _ in range(500))
    ok = fails3 == 0 and fails4 == 0
    return ok, f"3x3: 256 inputs ({fails3} failed, brute-force verified); 4x4: 500 inputs ({fails4} failed)", {}


@_timed(5, "L_q characterization gate")
def check_lq_gate():
    rng = task_rng(MASTER_SEED, 5)
    mismatches = 0
    odd_values = 0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        inst = random_hlf_instance(n, rng, density=float(rng.uniform(0.1, 0.9)))
        brute = lq_brute_force(inst)
        if set(int(u) for u in brute) != span(lq_basis(inst), n):
            mismatches += 1
        odd_values += int(np.count_nonzero(q_table(inst)[brute] % 2))
    ok = mismatches == 0 and odd_values == 0
    return ok, f"500 instances n<=12: {mismatches} subspace mismatches, {odd_values} odd q-values on L_q", {}


@_timed(6, "direct-sum lemma")
def check_direct_sum():
    rng = task_rng(MASTER_SEED, 6)
    disagreements = 0
    composed_checks = 0
    both_valid = 0
    for _ in range(200):
        n1, n2 = (int(v) for v in rng.integers(1, 9, size=2))
        parts = [random_hlf_instance(n1, rng), random_hlf_instance(n2, rng)]
        total = reductions.direct_sum_hlf(parts)
        solved = reductions.solve_hlf_reference(total)
        candidates = [solved] + [F2Vector.random(n1 + n2, rng) for _ in range(4)]
        for p in candidates:
            p1, p2 = reductions.split_hlf_solution(p, [n1, n2])
            whole = verify_hlf(total, p, brute_force=True)
            sliced = verify_hlf(parts[0], p1, brute_force=True) and verify_hlf(parts[1], p2, brute_force=True)
            disagreements += whole != sliced
            both_valid += sliced
            composed_checks += 1
    ok = disagreements == 0
    return ok, f"{composed_checks} candidate solutions over 200 pairs, {disagreements} disagreements ({both_valid} valid)", {}


@_timed(7, "PBP probabilities")
def check_pbp():
    worst = 0.0
    for n in range(1, 11):
        for xi in range(1 << n):
            x = F2Vector(xi, n)
            expected = 1.0 if x.weight() % 3 == 0 else 0.75
            worst = max(worst, abs(qsim.statevector_pbp(x) - expected))
    rng = task_rng(MASTER_SEED, 7)
    N, n = 100_000, 24
    xs = rng.integers(0, 1 << n, size=N, dtype=np.uint64)
    weights = np.bitwise_count(xs).astype(np.int64)
    ys = qsim.sample_pbp_batch(weights, n, rng)
    target = (weights % 3 != 0).astype(np.uint8)
    rate = float(np.mean((np.bitwise_count(ys) & 1) == target))
    p = 5 / 6
    sigma = math.sqrt(p * (1 - p) / N)
    z = (rate - p) / sigma
    ok = worst < 1e-12 and abs(z) <= 4
    return ok, f"statevector max error {worst:.1e}; MC rate {rate:.5f} vs 5/6 ({z:+.2f} sigma)", {"rate": rate}


def constrained_configs(max_n: int = 12, max_d1: int = 4, max_d2: int = 2):
    """Constraint families for the bound sweep.

    Fixed bits sit on the first d1 players with 0..3 of them set (the value
    only depends on the fixed weight mod 4, since affine strategies absorb
    fixed players). With d2 > 0 the remaining players are split into d2
    contiguous groups in every size pattern, with every parity assignment
    compatible with global even parity.
    """
    for n in range(1, max_n + 1):
        for d1 in range(0, min(max_d1, n) + 1):
            rest = n - d1
            for ones in range(0, min(d1, 3) + 1):
                fixed = tuple((i, int(i < ones)) for i in range(d1))
                if d1 and rest == 0 and ones % 2:
                    continue
                yield n, classical.GameConstraints(fixed=fixed)
                for d2 in range(1, max_d2 + 1):
                    if rest < 2 * d2:
                        continue
                    for sizes in _compositions(rest, d2):
                        idx, start = [], d1
                        for s in sizes:
                            idx.append(tuple(range(start, start + s)))
                            start += s
                        for pmask in range(1 << d2):
                            pars = [(pmask >> k) & 1 for k in range(d2)]
                            if (sum(pars) + ones) % 2:
                                continue
                            yield n, classical.GameConstraints(fixed=fixed, groups=tuple(zip(idx, pars)))


def _compositions(total: int, parts: int, minimum: int = 2):
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


@_timed(8, "constrained game bound")
def check_constrained_bound():
    violations = 0
    restricted_mismatch = 0
    configs = 0
    min_slack = math.inf
    for n, c in constrained_configs():
        _, best = classical.constrained_game_max(n, c)
        configs += 1
        if not classical.constrained_bound_holds(best, n, c.d1, c.d2):
            violations += 1
        min_slack = min(min_slack, classical.constrained_bound(n, c.d1, c.d2) - float(best))
        if c.d2 == 0 and n - c.d1 >= 1 and best != classical.restricted_game_optimum(n, c.d1):
            restricted_mismatch += 1
    ok = violations == 0 and restricted_mismatch == 0
    detail = f"{configs} configurations, {violations} bound violations, min slack {min_slack:.4f}; d2=0 exact mismatches {restricted_mismatch}"
    return ok, detail, {"min_slack": min_slack, "configs": configs}


@_timed(9, "XOR-lemma harness")
def check_xor_harness():
    rng = task_rng(MASTER_SEED, 9)
    k, n, N = 6, 6, 1_000_000
    strat, _ = classical.best_affine_strategy(n)
    samples = affine_php_indicators([strat] * k, N, rng)
    report = vazirani_checks(all_subset_biases(samples))
    p = report.empirical_all_win
    sigma = math.sqrt(max(p * (1 - p), 1e-300) / N)
    ok = p <= report.all_win_bound + 5 * sigma
    detail = f"Pr[all win] {p:.5f} <= 2^-6 + eps = {report.all_win_bound:.5f} (eps {report.epsilon:.4f})"
    return ok, detail, {"all_win": p, "epsilon": report.epsilon}


@_timed(10, "CNOT scheduler")
def check_scheduler():
    worst = 0
    bad = 0
    for w in range(1, 21):
        for h in range(1, 21):
            g = grid_spanning_tree(w, h)
            sched = cnot_layers(g)
            delta = max(g.max_degree(), 2)
            if g.n_edges == 0:
                continue
            worst = max(worst, len(sched))
            if not (sched.is_conflict_free() and sched.covers(g) and len(sched) <= min(4, delta + 1)):
                bad += 1
    ok = bad == 0
    return ok, f"all grid trees up to 20x20: max {worst} layers, {bad} failures", {"max_layers": worst}


@_timed(11, "locality-2 pairwise AND")
def check_pairwise_and():
    vals = {n: classical.eval_local_strategy(classical.pairwise_and_strategy(n)).exact for n in range(2, 11)}
    ok = all(v == 1 for v in vals.values())
    return ok, "success 1 for n=2..10" if ok else f"values {vals}", {}


@_timed(12, "Mod-3 self-reduction symmetry")
def check_self_reduction():
    rng = task_rng(MASTER_SEED, 12)
    trials = 100_000
    inputs = [TritVector.from_str(s) for s in ("000000", "100000", "110000", "212101", "222222")]
    expected = Fraction(1, 3)  # Pr over uniform y in {0,1,2}^6 that |y| = 0 mod 3
    ok = True
    rates = []
    for x in inputs:
        c = classical.self_reduction_outcomes(lambda y: 0, x, trials, rng)
        p0, p1, p2 = c / trials
        se_diff = math.sqrt((p1 + p2 - (p1 - p2) ** 2) / trials)
        se0 = math.sqrt(float(expected) * (1 - float(expected)) / trials)
        ok &= abs(p1 - p2) <= 4 * se_diff and abs(p0 - float(expected)) <= 4 * se0
        rates.append((round(float(p0), 4), round(float(p1), 4), round(float(p2), 4)))
    return bool(ok), f"(correct, +1, +2) rates per input: {rates}", {"rates": rates}


CHECKS = [
    check_affine_optimum,
    check_php_exactness,
    check_rphp_exactness,
    check_hlf_pipeline,
    check_lq_gate,
    check_direct_sum,
    check_pbp,
    check_constrained_bound,
    check_xor_harness,
    check_scheduler,
    check_pairwise_and,
    check_self_reduction,
]


def run_all(only: set[int] | None = None) -> list[CriterionResult]:
    return [check() for check in CHECKS if only is None or check.number in only]
