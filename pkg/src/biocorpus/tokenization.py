"""Separate tokenization and a single vocabulary with disjoint ID spaces.

Molecular bracket tokens, ``<p>``-prefixed amino-acid tokens, and subword
text tokens never share entries: the same surface letter ("C" as text,
"[C]" as a molecule token, "<p>C" as a residue) always maps to three
different IDs.  Sentinel tokens live in one contiguous block at the end.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import (
    DuplicateToken,
    InvalidResidue,
    MalformedVocabFile,
    MissingTextVocab,
    UnbalancedBracket,
    UnknownId,
    UnknownNonTextToken,
)
from .selfies_codec import split_selfies

MODALITIES = ("text", "selfies", "amino_acid", "special", "sentinel")

PAD, EOS, UNK, BOM, EOM = "<pad>", "</s>", "<unk>", "<bom>", "<eom>"
SPECIAL_TOKENS = (PAD, EOS, UNK, BOM, EOM)

# 20 standard residues plus the extended codes (X, B, Z, U, O) found in
# real FASTA dumps; every uppercase letter except J.
RESIDUES = "ABCDEFGHIKLMNOPQRSTUVWXYZ"

AMINO_PREFIX = "<p>"


def tokenize_selfies_string(text: str) -> list[str]:
    """Split molecular bracket text at bracket boundaries.

    Joining the output reproduces the input exactly.
    """
    return split_selfies(text)


def tokenize_fasta(text: str) -> list[str]:
    """One ``<p>``-prefixed token per residue letter."""
    tokens = []
    for ch in text:
        if ch not in RESIDUES:
            raise InvalidResidue(f"invalid residue {ch!r}")
        tokens.append(AMINO_PREFIX + ch)
    return tokens


@dataclass(frozen=True)
class VocabEntry:
    text: str
    id: int
    modality: str


class Vocabulary:
    """Immutable token table with block layout
    [text][selfies][amino][special][sentinel]."""

    def __init__(self, entries: Sequence[VocabEntry]):
        self.entries = tuple(entries)
        self._by_text: dict[str, int] = {}
        for e in self.entries:
            if e.text in self._by_text:
                raise DuplicateToken(f"token {e.text!r} appears twice")
            self._by_text[e.text] = e.id
        self.counts = {m: 0 for m in MODALITIES}
        for e in self.entries:
            self.counts[e.modality] += 1
        self._sentinel_base = next(
            (e.id for e in self.entries if e.modality == "sentinel"), None
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, text: str) -> bool:
        return text in self._by_text

    def id_of(self, text: str) -> Optional[int]:
        return self._by_text.get(text)

    def text_of(self, id: int) -> str:
        if not 0 <= id < len(self.entries):
            raise UnknownId(f"id {id} outside vocabulary of size {len(self.entries)}")
        return self.entries[id].text

    def modality_of(self, id: int) -> str:
        if not 0 <= id < len(self.entries):
            raise UnknownId(f"id {id} outside vocabulary of size {len(self.entries)}")
        return self.entries[id].modality

    @property
    def pad_id(self) -> int:
        return self._by_text[PAD]

    @property
    def eos_id(self) -> int:
        return self._by_text[EOS]

    @property
    def unk_id(self) -> int:
        return self._by_text[UNK]

    @property
    def bom_id(self) -> int:
        return self._by_text[BOM]

    @property
    def eom_id(self) -> int:
        return self._by_text[EOM]

    @property
    def sentinel_count(self) -> int:
        return self.counts["sentinel"]

    def sentinel_id(self, k: int) -> int:
        """ID of the k-th sentinel, 0-based (<M1> is k=0)."""
        if self._sentinel_base is None or not 0 <= k < self.sentinel_count:
            raise UnknownId(f"sentinel {k} outside block of {self.sentinel_count}")
        return self._sentinel_base + k

    def is_sentinel(self, id: int) -> bool:
        return self._sentinel_base is not None and \
            self._sentinel_base <= id < self._sentinel_base + self.sentinel_count

    # During greedy matching we only consult the text block.
    def _text_tokens(self) -> tuple[set[str], int]:
        toks = {e.text for e in self.entries if e.modality == "text"}
        maxlen = max((len(t) for t in toks), default=0)
        return toks, maxlen

    def to_tsv(self) -> str:
        return "".join(f"{e.text}\t{e.modality}\n" for e in self.entries)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_tsv(), encoding="utf-8")

    def manifest(self) -> dict:
        blob = self.to_tsv().encode("utf-8")
        return {
            "total": len(self.entries),
            "counts": dict(self.counts),
            "layout": list(MODALITIES),
            "sha256": hashlib.sha256(blob).hexdigest(),
        }

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        entries = []
        try:
            lines = Path(path).read_text(encoding="utf-8").split("\n")
        except OSError as exc:
            raise MalformedVocabFile(f"cannot read {path}: {exc}") from exc
        while lines and lines[-1] == "":
            lines.pop()
        for i, line in enumerate(lines):
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or parts[1] not in MODALITIES:
                raise MalformedVocabFile(f"{path}: bad line {i}: {line!r}")
            entries.append(VocabEntry(parts[0], i, parts[1]))
        return cls(entries)


def build_vocabulary(
    text_vocab_file: str | Path,
    codec_alphabet: Iterable[str],
    sentinel_count: int,
) -> Vocabulary:
    """Assemble the vocabulary from a text token file plus the codec alphabet.

    Blocks are sorted deterministically, so identical inputs always produce
    a byte-identical vocabulary file.
    """
    if sentinel_count < 1:
        raise ValueError("sentinel_count must be >= 1")
    try:
        raw = Path(text_vocab_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedVocabFile(f"cannot read {text_vocab_file}: {exc}") from exc
    lines = raw.split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    text_tokens = []
    seen = set()
    for i, line in enumerate(lines):
        if line == "":
            raise MalformedVocabFile(f"{text_vocab_file}: empty token at line {i}")
        if line in seen:
            raise DuplicateToken(f"duplicate text token {line!r}")
        seen.add(line)
        text_tokens.append(line)

    blocks = [
        (sorted(text_tokens), "text"),
        (sorted(codec_alphabet), "selfies"),
        ([AMINO_PREFIX + r for r in RESIDUES], "amino_acid"),
        (list(SPECIAL_TOKENS), "special"),
        ([f"<M{k}>" for k in range(1, sentinel_count + 1)], "sentinel"),
    ]
    entries = []
    used: dict[str, str] = {}
    for tokens, modality in blocks:
        for token in tokens:
            if token in used:
                raise DuplicateToken(
                    f"token {token!r} in both {used[token]} and {modality} blocks"
                )
            used[token] = modality
            entries.append(VocabEntry(token, len(entries), modality))
    return Vocabulary(entries)


def tokenize_text(text: str, vocab: Vocabulary) -> list[str]:
    """Greedy longest-match segmentation against the text block.

    Spans with no matching token fall back to one ``<unk>`` per character.
    """
    tokens_set, maxlen = vocab._text_tokens()
    if not tokens_set:
        raise MissingTextVocab("vocabulary has no text block")
    out = []
    i = 0
    n = len(text)
    while i < n:
        for length in range(min(maxlen, n - i), 0, -1):
            piece = text[i : i + length]
            if piece in tokens_set:
                out.append(piece)
                i += length
                break
        else:
            out.append(UNK)
            i += 1
    return out


def detokenize_text(tokens: Sequence[str]) -> str:
    """Inverse of tokenize_text for in-vocabulary text."""
    return "".join(tokens)


def tokenize_wrapped(text: str, vocab: Vocabulary) -> list[str]:
    """Tokenize text that embeds <bom>...<eom> bio-sequence segments.

    Outside segments the text tokenizer applies; inside, bracket content is
    split as molecular tokens and plain letters as residues.
    """
    out: list[str] = []
    i = 0
    while i < len(text):
        start = text.find(BOM, i)
        if start == -1:
            out.extend(tokenize_text(text[i:], vocab))
            break
        if start > i:
            out.extend(tokenize_text(text[i:start], vocab))
        end = text.find(EOM, start + len(BOM))
        if end == -1:
            raise UnbalancedBracket("<bom> without matching <eom>")
        inner = text[start + len(BOM) : end]
        out.append(BOM)
        if inner.startswith("["):
            out.extend(split_selfies(inner))
        else:
            out.extend(tokenize_fasta(inner))
        out.append(EOM)
        i = end + len(EOM)
    return out


def _looks_nontextual(token: str) -> bool:
    if token.startswith("[") and token.endswith("]") and len(token) >= 2:
        return True
    return token.startswith(AMINO_PREFIX) and len(token) > len(AMINO_PREFIX)


def encode_ids(tokens: Sequence[str], vocab: Vocabulary) -> list[int]:
    """Map token texts to IDs.

    Unknown text maps to <unk>; unknown molecular or residue tokens are
    errors, preserving the modality separation.
    """
    ids = []
    unk = vocab.unk_id
    for token in tokens:
        id = vocab.id_of(token)
        if id is None:
            if _looks_nontextual(token):
                raise UnknownNonTextToken(f"token {token!r} not in vocabulary")
            id = unk
        ids.append(id)
    return ids


def decode_ids(ids: Sequence[int], vocab: Vocabulary) -> list[str]:
    """Map IDs back to token texts; any out-of-range ID is an error."""
    return [vocab.text_of(i) for i in ids]
