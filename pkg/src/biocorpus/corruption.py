"""Denoising-objective sample construction: mask token spans with sentinels.

The input keeps one sentinel per masked span, the target lists each sentinel
followed by the tokens it hides plus one closing sentinel, so interleaving
the two at matching sentinels reproduces the original sequence exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyInput, TooManySpans
from .tokenization import Vocabulary

TASKS = (
    "mol_t5",
    "prot_t5",
    "text_t5",
    "wrapped_t5",
    "mol_text_pair",
    "prot_text_pair",
)


@dataclass(frozen=True)
class CorruptionParams:
    noise_density: float = 0.15
    mean_span_length: float = 3.0
    max_input_length: int = 512

    def __post_init__(self) -> None:
        if not 0.0 <= self.noise_density <= 1.0:
            raise ValueError("noise_density must be in [0, 1]")
        if self.mean_span_length <= 0:
            raise ValueError("mean_span_length must be positive")
        if self.max_input_length < 1:
            raise ValueError("max_input_length must be positive")


@dataclass(frozen=True)
class TrainingExample:
    input_ids: tuple[int, ...]
    target_ids: tuple[int, ...]
    task: str

    def to_json(self) -> dict:
        return {
            "input_ids": list(self.input_ids),
            "target_ids": list(self.target_ids),
            "task": self.task,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrainingExample":
        return cls(tuple(obj["input_ids"]), tuple(obj["target_ids"]), obj["task"])


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform composition of `total` into `parts` non-negative integers."""
    if parts == 1:
        return [total]
    bars = sorted(rng.sample(range(total + parts - 1), parts - 1))
    out = []
    prev = -1
    for b in bars:
        out.append(b - prev - 1)
        prev = b
    out.append(total + parts - 2 - prev)
    return out


def _segmentation(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform composition of `total` into `parts` positive integers."""
    return [c + 1 for c in _composition(rng, total - parts, parts)]


def sample_noise_mask(length: int, params: CorruptionParams,
                      rng: random.Random) -> list[bool]:
    """Boolean mask with round(length * density) noise positions arranged in
    round(noise / mean_span_length) spans, non-adjacent, uniformly placed.
    """
    noise = round(length * params.noise_density)
    if noise <= 0:
        return [False] * length
    noise = min(noise, length)
    spans = round(noise / params.mean_span_length)
    spans = max(1, min(spans, noise, length - noise + 1))
    span_lengths = _segmentation(rng, noise, spans)
    # Distribute the unmasked tokens into spans+1 gaps; interior gaps get +1
    # so spans never touch.
    spare = length - noise - (spans - 1)
    gaps = _composition(rng, spare, spans + 1)
    mask = [False] * length
    pos = 0
    for k, span in enumerate(span_lengths):
        pos += gaps[k] + (1 if k > 0 else 0)
        for i in range(pos, pos + span):
            mask[i] = True
        pos += span
    return mask


def span_corrupt(
    tokens: Sequence[int],
    vocab: Vocabulary,
    params: CorruptionParams,
    seed: int,
    task: str = "text_t5",
    protected_ids: frozenset[int] = frozenset(),
) -> TrainingExample:
    """Build one masked training example from a token-ID sequence.

    Sequences longer than the input budget are truncated at a token
    boundary first.  Deterministic per seed.  Token IDs in protected_ids
    (e.g. the <bom>/<eom> delimiters) are never masked; by default
    everything is maskable.
    """
    ids = list(tokens)[: params.max_input_length]
    if not ids:
        raise EmptyInput("cannot corrupt an empty token sequence")
    rng = random.Random(seed)
    mask = sample_noise_mask(len(ids), params, rng)
    if protected_ids:
        mask = [m and id not in protected_ids for m, id in zip(mask, ids)]

    input_ids: list[int] = []
    target_ids: list[int] = []
    sentinel = 0
    in_span = False
    for id, masked in zip(ids, mask):
        if masked:
            if not in_span:
                if sentinel + 1 >= vocab.sentinel_count:
                    raise TooManySpans(
                        f"needs more than {vocab.sentinel_count} sentinels"
                    )
                input_ids.append(vocab.sentinel_id(sentinel))
                target_ids.append(vocab.sentinel_id(sentinel))
                sentinel += 1
                in_span = True
            target_ids.append(id)
        else:
            input_ids.append(id)
            in_span = False
    target_ids.append(vocab.sentinel_id(sentinel))
    return TrainingExample(tuple(input_ids), tuple(target_ids), task)
