"""Command-line interface.

Commands: gen | solve | verify | game | sweep | reduce | xor | repro.
Randomized commands require ``--seed``; shard ``i`` of a run draws from
``SeedSequence([seed, i])``, so output bytes depend only on the arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import classical, formats, qsim, reductions, repro
from .errors import ShallowCircError
from .f2lin import F2Vector
from .graphs import grid_graph, grid_spanning_tree, root_paths
from .problems import (
    HlfInstance,
    ParallelInstance,
    PbpInstance,
    PhpInstance,
    RphpInstance,
    TritVector,
    gen_even_parity_input,
    gen_trit_input,
    parallel_mod3,
    parallel_pbp,
    parallel_php,
    parallel_rphp,
    random_hlf_instance,
    verify_hlf,
    verify_mod3,
    verify_parallel,
    verify_pbp,
    verify_php,
    verify_rphp,
)
from .rng import task_rng


class CliError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _load(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise formats.FormatError(f"{path}: {exc}") from exc


def _need_seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        raise CliError(f"'{args.command}' is randomized; pass --seed")
    return args.seed


def _fmt_fraction(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _kind(inst: Any) -> str:
    return {
        PhpInstance: "php",
        RphpInstance: "rphp",
        HlfInstance: "hlf",
        PbpInstance: "pbp",
        TritVector: "mod3",
        ParallelInstance: "parallel",
    }[type(inst)]


# -- gen ---------------------------------------------------------------------


def _gen_one(args: argparse.Namespace, rng) -> Any:
    p = args.problem
    if p == "php":
        x = gen_even_parity_input(args.n, rng)
        return PhpInstance(x, args.m or args.n)
    if p in ("rphp", "grid-rphp"):
        w, h = args.width, args.height or args.width
        g = grid_spanning_tree(w, h) if p == "grid-rphp" or not args.full_grid else grid_graph(w, h)
        return RphpInstance(g, gen_even_parity_input(w * h, rng))
    if p == "hlf":
        return random_hlf_instance(args.n, rng)
    if p == "pbp":
        if args.trits:
            return PbpInstance(gen_trit_input(args.n, rng))
        return PbpInstance(F2Vector.random(args.n, rng))
    if p == "mod3":
        return gen_trit_input(args.n, rng)
    raise CliError(f"unknown problem {p!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    seed = _need_seed(args)
    if args.k > 1:
        subs = [_gen_one(args, task_rng(seed, i)) for i in range(args.k)]
        wrap = {
            "php": parallel_php,
            "rphp": parallel_rphp,
            "grid-rphp": parallel_rphp,
            "pbp": parallel_pbp,
            "mod3": parallel_mod3,
        }.get(args.problem)
        if wrap is None:
            raise CliError(f"no parallel variant for {args.problem}")
        inst = wrap(subs)
    else:
        inst = _gen_one(args, task_rng(seed, 0))
    _emit(_dump(formats.instance_to_json(inst)), args.out)
    return 0


# -- solve -------------------------------------------------------------------


def _solve_one(inst: Any, solver: str, rng) -> Any:
    kind = _kind(inst)
    if solver == "quantum":
        if kind == "php":
            y = qsim.sample_php_cat(inst.x, rng, inst.m)
            if not verify_php(inst, y):
                raise AssertionError("quantum PHP sample rejected")
            return y
        if kind == "rphp":
            s = qsim.sample_rphp(inst.graph, inst.x, rng)
            if not verify_rphp(inst, s.y, s.d):
                raise AssertionError("quantum RPHP sample rejected")
            return (s.y, s.d)
        if kind == "pbp":
            return qsim.sample_pbp(inst.x, rng)
    elif solver == "reference-hlf":
        if kind == "hlf":
            return reductions.solve_hlf_reference(inst)
        if kind == "rphp":
            h, emb = reductions.rphp_to_hlf(inst)
            return reductions.hlf_solution_to_rphp(reductions.solve_hlf_reference(h), emb)
    elif solver == "affine":
        if kind == "php":
            strat, _ = classical.best_affine_strategy(inst.n)
            y = strat.outputs(inst.x)
            if inst.m != inst.n:
                raise CliError("affine strategies emit one bit per player (m must equal n)")
            return y
    elif solver == "local":
        if kind == "php":
            strat = classical.pairwise_and_strategy(inst.n)
            if inst.m != strat.m:
                raise CliError(f"pairwise-AND strategy emits C(n,2) = {strat.m} bits; set m accordingly")
            return strat.evaluate(inst.x)
    elif solver == "self-reduced-mod3":
        if kind == "mod3":
            return classical.self_reduce_mod3(lambda y: 0, inst, rng)
    raise CliError(f"solver {solver!r} does not handle {kind} instances")


def cmd_solve(args: argparse.Namespace) -> int:
    inst = formats.instance_from_json(_load(args.instance))
    needs_rng = args.solver in ("quantum", "self-reduced-mod3")
    seed = _need_seed(args) if needs_rng else 0
    kind = _kind(inst)
    if args.samples > 1:
        if kind not in ("php", "rphp", "pbp") or args.solver != "quantum":
            raise CliError("--samples streams quantum samples for php, rphp or pbp instances")
        rng = task_rng(seed, 0)
        lines = []
        for _ in range(args.samples):
            sol = _solve_one(inst, args.solver, rng)
            lines.append(" ".join(v.to_hex() for v in sol) if isinstance(sol, tuple) else sol.to_hex())
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    if kind == "parallel":
        outs = [_solve_one(s, args.solver, task_rng(seed, i)) for i, s in enumerate(inst.instances)]
        doc = {
            "type": "parallel",
            "outputs": [formats.solution_to_json(_kind(s), o) for s, o in zip(inst.instances, outs)],
        }
    else:
        doc = formats.solution_to_json(kind, _solve_one(inst, args.solver, task_rng(seed, 0)))
    _emit(_dump(doc), args.out)
    return 0


# -- verify ------------------------------------------------------------------


def _verify_one(inst: Any, sol: Any) -> bool:
    kind = _kind(inst)
    if kind == "php":
        return verify_php(inst, sol)
    if kind == "rphp":
        return verify_rphp(inst, *sol)
    if kind == "hlf":
        return verify_hlf(inst, sol)
    if kind == "pbp":
        return verify_pbp(inst.x, sol)
    if kind == "mod3":
        return verify_mod3(inst, sol)
    raise CliError(f"cannot verify {kind}")


def cmd_verify(args: argparse.Namespace) -> int:
    inst = formats.instance_from_json(_load(args.instance))
    sol = formats.solution_from_json(_load(args.solution))
    if isinstance(inst, ParallelInstance):
        ok = verify_parallel(inst, [(s,) for s in sol], _verify_one)
    else:
        ok = _verify_one(inst, sol)
    _emit(("pass" if ok else "fail") + "\n", args.out)
    return 0 if ok else 1


# -- game / sweep ------------------------------------------------------------


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _parse_constraints(args: argparse.Namespace) -> classical.GameConstraints:
    fixed = tuple((i, int(b)) for i, b in enumerate(args.fixed or ""))
    groups = []
    start = len(fixed)
    for item in args.group or []:
        size, par = item.split(":")
        idx = tuple(range(start, start + int(size)))
        groups.append((idx, int(par)))
        start += int(size)
    return classical.GameConstraints(fixed=fixed, groups=tuple(groups))


def cmd_game(args: argparse.Namespace) -> int:
    n = args.n
    if args.mode == "affine-exhaustive":
        strat, value = classical.best_affine_strategy(n)
        row = {"n": n, "value": _fmt_fraction(value), "a": strat.a, "b": strat.b.to_hex()}
    elif args.mode == "affine-formula":
        row = {"n": n, "value": _fmt_fraction(classical.affine_game_optimum(n))}
    elif args.mode == "constrained":
        c = _parse_constraints(args)
        strat, value = classical.constrained_game_max(n, c)
        row = {
            "n": n,
            "d1": c.d1,
            "d2": c.d2,
            "value": _fmt_fraction(value),
            "bound": f"{classical.constrained_bound(n, c.d1, c.d2):.12g}",
            "bound_holds": classical.constrained_bound_holds(value, n, c.d1, c.d2),
        }
    elif args.mode == "local-pairwise-and":
        est = classical.eval_local_strategy(classical.pairwise_and_strategy(n))
        row = {"n": n, "m": n * (n - 1) // 2, "value": _fmt_fraction(est.exact)}
    else:
        raise CliError(f"unknown mode {args.mode!r}")
    if args.format == "json":
        _emit(_dump(row), args.out)
    else:
        _emit(_csv([list(row), list(row.values())]), args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    rows: list[list[Any]] = [["n", "best_affine", "formula", "equal"]]
    for n in range(args.n_min, args.n_max + 1):
        _, v = classical.best_affine_strategy(n)
        f = classical.affine_game_optimum(n)
        rows.append([n, _fmt_fraction(v), _fmt_fraction(f), v == f])
    _emit(_csv(rows), args.out)
    return 0


# -- reduce ------------------------------------------------------------------


def cmd_reduce(args: argparse.Namespace) -> int:
    docs = [_load(p) for p in args.instance]
    insts = [formats.instance_from_json(d) for d in docs]
    if len(insts) == 1 and isinstance(insts[0], RphpInstance):
        h, emb = reductions.rphp_to_hlf(insts[0], args.grid_width)
        out = {"hlf": formats.hlf_to_json(h), "embedding": formats.embedding_to_json(emb)}
    elif all(isinstance(i, RphpInstance) for i in insts):
        h, embs, coords = reductions.parallel_rphp_to_hlf(insts, args.grid_width)
        out = {
            "hlf": formats.hlf_to_json(h),
            "embeddings": [formats.embedding_to_json(e) for e in embs],
            "coords": [list(c) for c in coords] if coords else None,
        }
    elif all(isinstance(i, HlfInstance) for i in insts):
        h = reductions.direct_sum_hlf(insts)
        out = {"hlf": formats.hlf_to_json(h), "part_sizes": [i.n for i in insts]}
    else:
        raise CliError("reduce takes RPHP instances or HLF instances")
    _emit(_dump(out), args.out)
    return 0


# -- xor ---------------------------------------------------------------------


def cmd_xor(args: argparse.Namespace) -> int:
    from .xorlab import affine_php_indicators, all_subset_biases, biases_to_csv, vazirani_checks

    seed = _need_seed(args)
    strat, _ = classical.best_affine_strategy(args.n)
    samples = affine_php_indicators([strat] * args.k, args.samples, task_rng(seed, 0))
    biases = all_subset_biases(samples)
    if args.format == "json":
        rep = vazirani_checks(biases)
        _emit(_dump(rep.__dict__), args.out)
    else:
        _emit(biases_to_csv(biases, samples.n_samples), args.out)
    return 0


# -- repro -------------------------------------------------------------------


def cmd_repro(args: argparse.Namespace) -> int:
    only = set(args.only) if args.only else None
    results = repro.run_all(only)
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if passed == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shallowcirc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt: bool = False) -> None:
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=1)
        p.add_argument("--out", default=None)
        if fmt:
            p.add_argument("--format", choices=["json", "csv"], default="csv")

    p = sub.add_parser("gen", help="emit a random instance as JSON")
    p.add_argument("--problem", required=True, choices=["php", "rphp", "grid-rphp", "hlf", "pbp", "mod3"])
    p.add_argument("-n", type=int, default=4)
    p.add_argument("-m", type=int, default=None)
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--height", type=int, default=None)
    p.add_argument("--full-grid", action="store_true", help="rphp on the full lattice instead of the tree")
    p.add_argument("--trits", action="store_true", help="pbp input over {0,1,2}")
    p.add_argument("-k", type=int, default=1, help="number of parallel copies")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--instance", required=True)
    p.add_argument(
        "--solver", required=True, choices=["quantum", "reference-hlf", "affine", "local", "self-reduced-mod3"]
    )
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution; exit 1 on failure")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("game", help="exact classical game values")
    p.add_argument(
        "--mode", required=True, choices=["affine-exhaustive", "affine-formula", "constrained", "local-pairwise-and"]
    )
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--fixed", default=None, help="bits of the first d1 players, e.g. 101")
    p.add_argument("--group", action="append", help="SIZE:PARITY for the next group of players")
    common(p, fmt=True)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("sweep", help="affine optimum over a range of n, as CSV")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reduce", help="RPHP -> HLF, or direct sum of HLF instances")
    p.add_argument("--instance", required=True, action="append")
    p.add_argument("--grid-width", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("xor", help="subset-bias suite for parallel PHP with best affine strategies")
    p.add_argument("-k", type=int, default=6)
    p.add_argument("-n", type=int, default=6)
    common(p, fmt=True)
    p.set_defaults(func=cmd_xor, samples=100_000)

    p = sub.add_parser("repro", help="run the acceptance suite and print a pass/fail table")
    p.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    common(p)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ShallowCircError, formats.FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
