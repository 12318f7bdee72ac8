"""Deterministic multi-task batch mixing.

Each batch holds a fixed per-task composition derived from the configured
weights (equal by default) and is shuffled with a per-batch seed, so the
stream of batches is reproducible and independent of how the underlying
iterators are consumed.  Exhausted streams restart from the beginning and
the wrap count is reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .corruption import TrainingExample
from .errors import BatchTooSmall, EmptyStream
from .seeds import derive_seed

StreamFactory = Callable[[], Iterator[TrainingExample]]


@dataclass
class MixStats:
    batches: int = 0
    examples_per_task: dict = field(default_factory=dict)
    wraps_per_task: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "batches": self.batches,
            "examples_per_task": dict(self.examples_per_task),
            "wraps_per_task": dict(self.wraps_per_task),
        }


def batch_composition(tasks: Sequence[str], batch_size: int,
                      weights: Optional[Mapping[str, float]] = None) -> dict[str, int]:
    """Per-task example counts for one batch.

    Largest-remainder apportionment of batch_size by weight, with every task
    guaranteed at least one slot.
    """
    if batch_size < len(tasks):
        raise BatchTooSmall(f"batch size {batch_size} < {len(tasks)} tasks")
    if weights is None:
        weights = {t: 1.0 for t in tasks}
    total = sum(weights.get(t, 0.0) for t in tasks)
    if total <= 0:
        raise ValueError("weights must sum to a positive value")
    quotas = {t: batch_size * weights.get(t, 0.0) / total for t in tasks}
    counts = {t: max(1, int(quotas[t])) for t in tasks}
    spare = batch_size - sum(counts.values())
    remainders = sorted(
        tasks, key=lambda t: (counts[t] - quotas[t], tasks.index(t))
    )
    i = 0
    while spare > 0:
        counts[remainders[i % len(remainders)]] += 1
        spare -= 1
        i += 1
    while spare < 0:
        victim = max(tasks, key=lambda t: (counts[t], -tasks.index(t)))
        if counts[victim] <= 1:
            raise BatchTooSmall("cannot satisfy one-per-task minimum")
        counts[victim] -= 1
        spare += 1
    return counts


class _WrappingStream:
    """Iterator over a restartable stream that counts epoch wraps."""

    def __init__(self, task: str, factory: StreamFactory):
        self.task = task
        self.factory = factory
        self.it = iter(factory())
        self.wraps = 0
        self.yielded_any = False

    def next(self) -> TrainingExample:
        for _ in range(2):
            try:
                item = next(self.it)
                self.yielded_any = True
                return item
            except StopIteration:
                if not self.yielded_any:
                    raise EmptyStream(f"stream for task {self.task!r} is empty") from None
                self.it = iter(self.factory())
                self.wraps += 1
        raise EmptyStream(f"stream for task {self.task!r} emptied mid-epoch")


def _as_factory(source) -> StreamFactory:
    if callable(source):
        return source
    if isinstance(source, (list, tuple)):
        return lambda: iter(source)
    raise TypeError("stream must be a callable factory or a re-iterable sequence")


def mix_tasks(
    streams: Mapping[str, StreamFactory | Sequence[TrainingExample]],
    batch_size: int,
    seed: int,
    weights: Optional[Mapping[str, float]] = None,
    num_batches: Optional[int] = None,
    stats: Optional[MixStats] = None,
) -> Iterator[list[TrainingExample]]:
    """Yield batches mixing all task streams.

    Streams are given as factories (or re-iterable sequences) keyed by task
    name; every batch contains at least one example of each task and the
    per-task proportions follow the weights.  Deterministic for a given
    seed: batch composition is fixed and the within-batch order comes from
    a per-batch derived seed.
    """
    tasks = tuple(streams)
    if not tasks:
        raise EmptyStream("no streams given")
    counts = batch_composition(tasks, batch_size, weights)
    wrapped = {t: _WrappingStream(t, _as_factory(streams[t])) for t in tasks}

    def generate() -> Iterator[list[TrainingExample]]:
        index = 0
        while num_batches is None or index < num_batches:
            batch: list[TrainingExample] = []
            for t in tasks:
                for _ in range(counts[t]):
                    batch.append(wrapped[t].next())
            rng = random.Random(derive_seed(seed, "mix", index))
            rng.shuffle(batch)
            if stats is not None:
                stats.batches += 1
                for t in tasks:
                    stats.examples_per_task[t] = (
                        stats.examples_per_task.get(t, 0) + counts[t]
                    )
                    stats.wraps_per_task[t] = wrapped[t].wraps
            yield batch
            index += 1

    return generate()
