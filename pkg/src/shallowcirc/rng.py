"""Deterministic random streams.

Every randomized routine takes an explicit ``numpy.random.Generator``. Shards
of a run get independent streams seeded by ``SeedSequence([master, index])``,
so results do not depend on how work is split.
"""

from __future__ import annotations

import numpy as np


def task_rng(master_seed: int, task_index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, task_index])))
