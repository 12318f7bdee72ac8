"""Structured translation samples between bio-sequences and field text.

Database entries become bidirectional translation examples: the text side
concatenates field labels and values in a fixed order, omitting missing
fields; the sequence side is the tokenized sequence wrapped in <bom>/<eom>.
The direction is drawn per sample with probability one half.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .corruption import TrainingExample
from .errors import EmptyRecord
from .tokenization import (
    BOM,
    EOM,
    Vocabulary,
    encode_ids,
    tokenize_fasta,
    tokenize_selfies_string,
    tokenize_text,
)

MOLECULE_FIELDS = ("DESCRIPTION",)
PROTEIN_FIELDS = ("FUNCTION", "SUBCELLULAR LOCATION", "PROTEIN FAMILIES")


@dataclass(frozen=True)
class PairRecord:
    kind: str                      # "molecule" | "protein"
    sequence: str                  # bracket tokens or residue letters
    name: Optional[str] = None
    fields: Mapping[str, str] = field(default_factory=dict)
    record_id: str = ""

    def __post_init__(self) -> None:
        if self.kind not in ("molecule", "protein"):
            raise EmptyRecord(f"unknown record kind {self.kind!r}")
        if not self.sequence:
            raise EmptyRecord("record has an empty sequence")
        allowed = MOLECULE_FIELDS if self.kind == "molecule" else PROTEIN_FIELDS
        unknown = set(self.fields) - set(allowed)
        if unknown:
            raise EmptyRecord(f"unknown fields for {self.kind}: {sorted(unknown)}")
        if not self.fields:
            raise EmptyRecord("record has no text fields")


def render_pair_text(record: PairRecord) -> str:
    """Field labels and values concatenated sequentially, missing ones omitted."""
    parts = []
    if record.kind == "molecule":
        if record.name:
            parts += ["MOLECULE NAME", record.name]
        for key in MOLECULE_FIELDS:
            if key in record.fields:
                parts += [key, record.fields[key]]
    else:
        if record.name:
            parts += ["PROTEIN NAME", record.name]
        for key in PROTEIN_FIELDS:
            if key in record.fields:
                parts += [key, record.fields[key]]
    return " ".join(parts)


def build_translation_pair(record: PairRecord, vocab: Vocabulary,
                           seed: int) -> TrainingExample:
    """One translation example; direction seq->text with probability 0.5."""
    text_tokens = tokenize_text(render_pair_text(record), vocab)
    if record.kind == "molecule":
        seq_tokens = tokenize_selfies_string(record.sequence)
        task = "mol_text_pair"
    else:
        seq_tokens = tokenize_fasta(record.sequence)
        task = "prot_text_pair"
    seq_tokens = [BOM, *seq_tokens, EOM]

    text_ids = tuple(encode_ids(text_tokens, vocab))
    seq_ids = tuple(encode_ids(seq_tokens, vocab))
    rng = random.Random(seed)
    seq_to_text = rng.random() < 0.5
    if seq_to_text:
        return TrainingExample(seq_ids, text_ids, task)
    return TrainingExample(text_ids, seq_ids, task)
