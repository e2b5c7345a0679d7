"""Exact simulators, verifiers, classical baselines and reductions for
shallow-circuit separation problems (PHP, RPHP, HLF, PBP, Mod 3)."""

from .errors import (
    CapacityError,
    ConsistencyError,
    DomainError,
    PromiseViolation,
    ShallowCircError,
    ShapeError,
    StructureError,
)
from .f2lin import F2Matrix, F2Vector, Z4Vector
from .graphs import Graph
from .problems import HlfInstance, ParallelInstance, PbpInstance, PhpInstance, RphpInstance, TritVector
from .rng import task_rng

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConsistencyError",
    "DomainError",
    "F2Matrix",
    "F2Vector",
    "Graph",
    "HlfInstance",
    "ParallelInstance",
    "PbpInstance",
    "PhpInstance",
    "PromiseViolation",
    "RphpInstance",
    "ShallowCircError",
    "ShapeError",
    "StructureError",
    "TritVector",
    "Z4Vector",
    "task_rng",
]
