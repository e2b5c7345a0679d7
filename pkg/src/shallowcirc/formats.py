"""JSON encodings for instances, solutions, strategies and embeddings.

Bit vectors are written as lowercase hex of the packed integer (bit i of the
integer is entry i) next to an explicit length.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .classical import AffineStrategy, LocalStrategy
from .f2lin import F2Matrix, F2Vector, Z4Vector
from .graphs import Graph
from .problems import (
    HlfInstance,
    ParallelInstance,
    PbpInstance,
    PhpInstance,
    RphpInstance,
    TritVector,
)
from .reductions import HlfEmbedding


class FormatError(ValueError):
    """Malformed JSON document."""


def vec_to_json(v: F2Vector) -> dict[str, Any]:
    return {"n": v.length, "hex": v.to_hex()}


def vec_from_json(obj: Any) -> F2Vector:
    try:
        return F2Vector.from_hex(obj["hex"], int(obj["n"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad bit vector: {obj!r}") from exc


def hlf_to_json(inst: HlfInstance) -> dict[str, Any]:
    n = inst.n
    edges = [[i, j] for i in range(n) for j in range(i + 1, n) if inst.A[i, j]]
    return {
        "type": "hlf",
        "n": n,
        "edges": edges,
        "diagonal": [inst.A[i, i] for i in range(n)],
        "b": list(inst.b.entries),
    }


def hlf_from_json(obj: dict[str, Any]) -> HlfInstance:
    n = int(obj["n"])
    rows = [0] * n
    for i, j in obj["edges"]:
        if not (0 <= i < j < n):
            raise FormatError(f"HLF edge ({i}, {j}) must satisfy 0 <= i < j < n")
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    diag = obj.get("diagonal", [0] * n)
    if len(diag) != n or len(obj["b"]) != n:
        raise FormatError("diagonal and b must have length n")
    for i, bit in enumerate(diag):
        rows[i] |= (int(bit) & 1) << i
    return HlfInstance(F2Matrix(tuple(rows), n), Z4Vector(tuple(obj["b"])))


def instance_to_json(inst: Any) -> dict[str, Any]:
    if isinstance(inst, PhpInstance):
        return {"type": "php", "m": inst.m, "x": vec_to_json(inst.x)}
    if isinstance(inst, RphpInstance):
        return {"type": "rphp", "graph": inst.graph.to_json(), "x": vec_to_json(inst.x)}
    if isinstance(inst, HlfInstance):
        return hlf_to_json(inst)
    if isinstance(inst, PbpInstance):
        alphabet = 3 if isinstance(inst.x, TritVector) else 2
        return {"type": "pbp", "alphabet": alphabet, "x": list(inst.x)}
    if isinstance(inst, TritVector):
        return {"type": "mod3", "x": list(inst.entries)}
    if isinstance(inst, ParallelInstance):
        return {
            "type": "parallel",
            "win_fraction": str(inst.win_fraction),
            "instances": [instance_to_json(s) for s in inst.instances],
        }
    raise TypeError(f"cannot encode {type(inst).__name__}")


def instance_from_json(obj: dict[str, Any]) -> Any:
    try:
        kind = obj["type"]
        if kind == "php":
            return PhpInstance(vec_from_json(obj["x"]), int(obj["m"]))
        if kind == "rphp":
            return RphpInstance(Graph.from_json(obj["graph"]), vec_from_json(obj["x"]))
        if kind == "hlf":
            return hlf_from_json(obj)
        if kind == "pbp":
            xs = obj["x"]
            if int(obj.get("alphabet", 2)) == 3:
                return PbpInstance(TritVector(tuple(xs)))
            return PbpInstance(F2Vector.from_bits(xs))
        if kind == "mod3":
            return TritVector(tuple(obj["x"]))
        if kind == "parallel":
            return ParallelInstance(
                tuple(instance_from_json(s) for s in obj["instances"]),
                Fraction(obj["win_fraction"]),
            )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed instance: {exc}") from exc
    raise FormatError(f"unknown instance type {obj.get('type')!r}")


def solution_to_json(kind: str, sol: Any) -> dict[str, Any]:
    if kind == "php" or kind == "pbp":
        return {"type": kind, "y": vec_to_json(sol)}
    if kind == "rphp":
        y, d = sol
        return {"type": kind, "y": vec_to_json(y), "d": vec_to_json(d)}
    if kind == "hlf":
        return {"type": kind, "p": vec_to_json(sol)}
    if kind == "mod3":
        return {"type": kind, "y": int(sol)}
    raise TypeError(f"no solution encoding for {kind!r}")


def solution_from_json(obj: dict[str, Any]) -> Any:
    try:
        kind = obj["type"]
        if kind in ("php", "pbp"):
            return vec_from_json(obj["y"])
        if kind == "rphp":
            return (vec_from_json(obj["y"]), vec_from_json(obj["d"]))
        if kind == "hlf":
            return vec_from_json(obj["p"])
        if kind == "mod3":
            return int(obj["y"])
        if kind == "parallel":
            return [solution_from_json(s) for s in obj["outputs"]]
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed solution: {exc}") from exc
    raise FormatError(f"unknown solution type {obj.get('type')!r}")


def strategy_to_json(s: Any) -> dict[str, Any]:
    if isinstance(s, AffineStrategy):
        return {"kind": "affine", "n": s.n, "a": s.a, "b": s.b.to_hex()}
    if isinstance(s, LocalStrategy):
        return {
            "kind": "local",
            "n": s.n_inputs,
            "supports": [list(x) for x in s.supports],
            "tables": [format(t, "x") for t in s.tables],
        }
    raise TypeError(f"cannot encode {type(s).__name__}")


def strategy_from_json(obj: dict[str, Any]) -> Any:
    try:
        if obj["kind"] == "affine":
            return AffineStrategy(int(obj["a"]), F2Vector.from_hex(obj["b"], int(obj["n"])))
        if obj["kind"] == "local":
            return LocalStrategy(
                int(obj["n"]),
                tuple(tuple(s) for s in obj["supports"]),
                tuple(int(t, 16) for t in obj["tables"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed strategy: {exc}") from exc
    raise FormatError(f"unknown strategy kind {obj.get('kind')!r}")


def embedding_to_json(emb: HlfEmbedding) -> dict[str, Any]:
    return {
        "type": "hlf-embedding",
        "graph": emb.graph.to_json(),
        "vertex_offset": 0,
        "edge_offset": emb.n_vertices,
        "coords": [list(c) for c in emb.coords] if emb.coords is not None else None,
    }


def embedding_from_json(obj: dict[str, Any]) -> HlfEmbedding:
    coords = obj.get("coords")
    return HlfEmbedding(
        Graph.from_json(obj["graph"]),
        tuple(tuple(c) for c in coords) if coords is not None else None,
    )
