"""Entity substitution over scientific text.

Molecule mentions are replaced in place by their bracket-token sequence and
one gene mention per sentence is followed by its protein sequence, both
wrapped in <bom>/<eom>.  Sentences where nothing could be substituted are
routed to a plain-text stream instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .errors import InvalidSpan
from .seeds import derive_seed
from .tokenization import BOM, EOM

KINDS = ("molecule", "gene")


@dataclass(frozen=True)
class EntityAnnotation:
    start: int
    end: int
    surface: str
    kind: str
    entity_id: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidSpan(f"unknown annotation kind {self.kind!r}")
        if self.start < 0 or self.end <= self.start:
            raise InvalidSpan(f"bad span [{self.start}, {self.end})")


@dataclass
class WrapStats:
    wrapped_sentences: int = 0
    plain_sentences: int = 0
    molecules_replaced: int = 0
    genes_appended: int = 0
    missing_molecule_ids: int = 0
    missing_gene_ids: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class WrapResult:
    wrapped: list[str] = field(default_factory=list)
    plain: list[str] = field(default_factory=list)
    stats: WrapStats = field(default_factory=WrapStats)


_SENTENCE_END = ".!?"


def split_sentences(text: str,
                    annotations: Sequence[EntityAnnotation] = ()) -> list[tuple[int, int]]:
    """Half-open sentence spans.

    A boundary is a run of ./!/? followed by whitespace; boundaries falling
    inside an annotation are voided so no mention is ever cut in half.
    """
    cuts = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _SENTENCE_END:
            j = i
            while j < n and text[j] in _SENTENCE_END:
                j += 1
            if j < n and text[j].isspace():
                while j < n and text[j].isspace():
                    j += 1
                if all(not (a.start < j and i < a.end) for a in annotations):
                    cuts.append((i + 1, j))  # keep the first terminator
            i = j
        else:
            i += 1
    spans = []
    prev = 0
    for end, nxt in cuts:
        spans.append((prev, end))
        prev = nxt
    if prev < n:
        spans.append((prev, n))
    return spans


def _validate(text: str, annotations: Sequence[EntityAnnotation]) -> list[EntityAnnotation]:
    ordered = sorted(annotations, key=lambda a: a.start)
    prev_end = 0
    for a in ordered:
        if a.end > len(text):
            raise InvalidSpan(f"span [{a.start}, {a.end}) beyond text length {len(text)}")
        if a.start < prev_end:
            raise InvalidSpan(f"overlapping annotation at {a.start}")
        if text[a.start : a.end] != a.surface:
            raise InvalidSpan(
                f"surface mismatch at {a.start}: {a.surface!r} vs "
                f"{text[a.start:a.end]!r}"
            )
        prev_end = a.end
    return ordered


def wrap_document(
    text: str,
    annotations: Sequence[EntityAnnotation],
    mol_lookup: Mapping[str, str],
    prot_lookup: Mapping[str, str],
    seed: int,
    doc_id: str = "",
) -> WrapResult:
    """Apply the substitution rules sentence by sentence.

    Every resolvable molecule mention is replaced by <bom>sequence<eom>;
    when a sentence has resolvable gene mentions, exactly one (chosen
    uniformly, seeded per sentence) gets " <bom>sequence<eom>" appended
    after its name.  Lookups may be partial: misses leave the mention
    untouched and are counted.
    """
    ordered = _validate(text, annotations)
    result = WrapResult()
    for s_idx, (lo, hi) in enumerate(split_sentences(text, ordered)):
        sentence = text[lo:hi]
        anns = [a for a in ordered if lo <= a.start and a.end <= hi]

        genes = []
        for a in anns:
            if a.kind == "gene":
                if a.entity_id in prot_lookup:
                    genes.append(a)
                else:
                    result.stats.missing_gene_ids += 1
        chosen: Optional[EntityAnnotation] = None
        if genes:
            rng = random.Random(derive_seed(seed, doc_id, s_idx))
            chosen = genes[rng.randrange(len(genes))]

        pieces = []
        cursor = lo
        substituted = 0
        for a in anns:
            pieces.append(text[cursor : a.start])
            if a.kind == "molecule":
                seq = mol_lookup.get(a.entity_id)
                if seq is None:
                    result.stats.missing_molecule_ids += 1
                    pieces.append(a.surface)
                else:
                    pieces.append(f"{BOM}{seq}{EOM}")
                    result.stats.molecules_replaced += 1
                    substituted += 1
            else:
                pieces.append(a.surface)
                if a is chosen:
                    pieces.append(f" {BOM}{prot_lookup[a.entity_id]}{EOM}")
                    result.stats.genes_appended += 1
                    substituted += 1
            cursor = a.end
        pieces.append(text[cursor:hi])

        if substituted:
            result.wrapped.append("".join(pieces))
            result.stats.wrapped_sentences += 1
        else:
            result.plain.append(sentence)
            result.stats.plain_sentences += 1
    return result
