"""Deterministic work chunks, per-chunk random streams and fan-out over worker processes.

Trials are cut into fixed-size chunks that depend only on the config, never on the worker
count. Chunk ``i`` of phase ``p`` at sweep point ``k`` draws from
``SeedSequence(seed, spawn_key=(k, p, i))``, and per-chunk tallies are merged in chunk order,
so any number of workers reproduces the single-process result exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, List, Sequence, Tuple, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

# Phases of one run; each draws from its own family of streams.
PHASE_FILTER = 0
PHASE_TRAIN_PLUS = 1
PHASE_TRAIN_MINUS = 2
PHASE_EVALUATION = 3


def stream(seed: int, key: Tuple[int, ...]) -> np.random.Generator:
    """Independent generator for ``key`` under the master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def chunk_sizes(total: int, chunk: int) -> List[int]:
    """Split ``total`` trials into full chunks plus one remainder chunk."""
    if total < 0 or chunk < 1:
        raise ValueError("need total >= 0 and chunk >= 1")
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def parallel_map(func: Callable[[T], R], tasks: Sequence[T], workers: int) -> List[R]:
    """``[func(t) for t in tasks]``, optionally across a process pool; order is preserved."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with Pool(processes=min(workers, len(tasks))) as pool:
        return pool.map(func, tasks)


@dataclass(frozen=True)
class RunPlan:
    """Seed, sweep point and parallelism shared by every phase of one run."""

    seed: int
    point: int = 0
    chunk_trials: int = 50_000
    workers: int = 1

    def key(self, phase: int, chunk: int) -> Tuple[int, int, int]:
        return (self.point, phase, chunk)

    def stream(self, phase: int, chunk: int = 0) -> np.random.Generator:
        return stream(self.seed, self.key(phase, chunk))

    def chunks(self, total: int) -> List[int]:
        return chunk_sizes(total, self.chunk_trials)

    def map(self, func: Callable[[T], R], tasks: Sequence[T]) -> List[R]:
        return parallel_map(func, tasks, self.workers)
