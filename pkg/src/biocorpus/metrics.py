"""Evaluation metrics for molecule generation and captioning.

Exact match and fingerprint similarity operate on graphs (so atom order and
notation never matter); BLEU and Levenshtein operate on token/character
sequences.  Fingerprint bit patterns depend on this toolkit's hash folding
and are comparable only within one toolkit version.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    BiocorpusError,
    EmptyCorpus,
    InvalidGraph,
    LengthMismatch,
    WidthMismatch,
)
from .molgraph import MolecularGraph, check_valence, parse_smiles, write_smiles
from .selfies_codec import decode_selfies, split_selfies


def parse_molecule(text: str) -> Optional[MolecularGraph]:
    """Parse molecule text, reading all-bracket strings as codec tokens and
    anything else as SMILES.  Returns None when unparseable or valence-invalid.
    """
    text = text.strip()
    if not text:
        return None
    try:
        if text.startswith("["):
            try:
                graph = decode_selfies(split_selfies(text))
            except BiocorpusError:
                graph = parse_smiles(text)
        else:
            graph = parse_smiles(text)
    except BiocorpusError:
        return None
    if check_valence(graph):
        return None
    return graph


def canonical_or_none(text: str) -> Optional[str]:
    graph = parse_molecule(text)
    if graph is None:
        return None
    return write_smiles(graph, canonical=True)


def exact_match(pred: str, gold: str) -> bool:
    """True iff both parse and share one canonical serialization."""
    p = canonical_or_none(pred)
    g = canonical_or_none(gold)
    return p is not None and g is not None and p == g


def validity_rate(preds: Sequence[str]) -> float:
    """Fraction of inputs that parse to valence-valid graphs."""
    if not preds:
        raise EmptyCorpus("validity_rate of an empty list")
    ok = sum(1 for p in preds if parse_molecule(p) is not None)
    return ok / len(preds)


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Minimal insert/delete/substitute count between two sequences."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1,      # delete
                               current[j - 1] + 1,   # insert
                               previous[j - 1] + cost))
        previous = current
    return previous[-1]


@dataclass(frozen=True)
class BleuResult:
    score: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    smoothing: str = "epsilon-on-zero"

    def as_dict(self) -> dict:
        return {
            "score": self.score,
            "precisions": list(self.precisions),
            "brevity_penalty": self.brevity_penalty,
            "smoothing": self.smoothing,
        }


def _ngrams(tokens: Sequence, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(preds: Sequence[Sequence], golds: Sequence[Sequence],
         max_n: int = 4, epsilon: float = 1e-9) -> BleuResult:
    """Corpus-level modified n-gram precision with brevity penalty, in [0,1].

    Orders with an empty denominator corpus-wide are excluded from the
    geometric mean; zero match counts are smoothed with epsilon.
    """
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} references")
    if not preds:
        raise EmptyCorpus("bleu of an empty corpus")
    matches = [0] * max_n
    totals = [0] * max_n
    pred_len = 0
    gold_len = 0
    for p, g in zip(preds, golds):
        pred_len += len(p)
        gold_len += len(g)
        for n in range(1, max_n + 1):
            pn = _ngrams(p, n)
            gn = _ngrams(g, n)
            matches[n - 1] += sum(min(c, gn[k]) for k, c in pn.items())
            totals[n - 1] += max(len(p) - n + 1, 0)

    precisions = []
    log_sum = 0.0
    effective = 0
    for n in range(max_n):
        if totals[n] == 0:
            precisions.append(0.0)
            continue
        p_n = matches[n] / totals[n] if matches[n] > 0 else epsilon / totals[n]
        precisions.append(p_n)
        log_sum += math.log(p_n)
        effective += 1
    if effective == 0:
        return BleuResult(0.0, tuple(precisions), 0.0)
    if pred_len == 0:
        bp = 0.0
    elif pred_len >= gold_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - gold_len / pred_len)
    score = bp * math.exp(log_sum / effective)
    return BleuResult(min(score, 1.0), tuple(precisions), bp)


# ---------------------------------------------------------------------------
# Circular fingerprints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    bits: int
    radius: int
    width: int

    def popcount(self) -> int:
        return self.bits.bit_count()

    def on_bits(self) -> list[int]:
        return [i for i in range(self.width) if self.bits >> i & 1]


def _stable_hash(value: object) -> int:
    blob = repr(value).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(blob, digest_size=8).digest(), "big")


_ORDER_CODE = {"single": 1, "aromatic": 2, "double": 3, "triple": 4}


def morgan_fingerprint(graph: MolecularGraph, radius: int = 2,
                       width: int = 2048) -> Fingerprint:
    """Fold iterated circular atom environments into a fixed-width bit set.

    Environment hashes are built from atom invariants and neighbor hashes
    only, so isomorphic graphs produce identical fingerprints regardless of
    atom numbering.
    """
    if width <= 0 or width & (width - 1):
        raise ValueError("width must be a positive power of two")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if check_valence(graph):
        raise InvalidGraph("valence check failed")
    adj = graph.neighbors()
    env = [
        _stable_hash((
            "atom",
            a.element,
            a.formal_charge,
            a.explicit_hydrogens,
            len(adj[i]),
        ))
        for i, a in enumerate(graph.atoms)
    ]
    bits = 0
    for h in env:
        bits |= 1 << (h % width)
    for _ in range(radius):
        nxt = []
        for i in range(len(graph.atoms)):
            nbrs = tuple(sorted((_ORDER_CODE[o.value], env[u]) for u, o in adj[i]))
            nxt.append(_stable_hash(("env", env[i], nbrs)))
        env = nxt
        for h in env:
            bits |= 1 << (h % width)
    return Fingerprint(bits, radius, width)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|intersection| / |union| over set bits; two empty sets count as 1."""
    if a.width != b.width or a.radius != b.radius:
        raise WidthMismatch(
            f"fingerprint shapes differ: ({a.radius},{a.width}) vs ({b.radius},{b.width})"
        )
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union


# ---------------------------------------------------------------------------
# Corpus-level report
# ---------------------------------------------------------------------------


@dataclass
class MetricReport:
    exact: float = 0.0
    levenshtein_mean: float = 0.0
    bleu: dict = field(default_factory=dict)
    validity: float = 0.0
    morgan_fts_mean: Optional[float] = None
    counts: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "exact": self.exact,
            "levenshtein_mean": self.levenshtein_mean,
            "bleu": self.bleu,
            "validity": self.validity,
            "morgan_fts_mean": self.morgan_fts_mean,
            "counts": self.counts,
            "notes": self.notes,
        }


UNSUPPORTED_METRICS = ("maccs_fts", "rdk_fts", "fcd", "text2mol", "rouge", "meteor")


def evaluate_pairs(
    pairs: Sequence[tuple[str, str]],
    max_n: int = 4,
    radius: int = 2,
    width: int = 2048,
    levenshtein_on: str = "canonical",
) -> MetricReport:
    """Molecule-generation metrics over (prediction, reference) pairs.

    Exact match and BLEU/Levenshtein use canonical serializations where both
    sides parse; fingerprint similarity is averaged over pairs whose
    prediction is valid.  Levenshtein can be switched to the raw strings
    with levenshtein_on="raw".
    """
    if not pairs:
        raise EmptyCorpus("no prediction/reference pairs")
    if levenshtein_on not in ("canonical", "raw"):
        raise ValueError("levenshtein_on must be 'canonical' or 'raw'")
    exact_hits = 0
    lev_total = 0
    fts: list[float] = []
    bleu_preds: list[str] = []
    bleu_golds: list[str] = []
    valid = 0
    for pred, gold in pairs:
        pg = parse_molecule(pred)
        gg = parse_molecule(gold)
        p_can = write_smiles(pg) if pg is not None else None
        g_can = write_smiles(gg) if gg is not None else None
        if pg is not None:
            valid += 1
        if p_can is not None and p_can == g_can:
            exact_hits += 1
        if levenshtein_on == "canonical" and p_can is not None and g_can is not None:
            lev_total += levenshtein(p_can, g_can)
        else:
            lev_total += levenshtein(pred, gold)
        bleu_preds.append(p_can if p_can is not None else pred)
        bleu_golds.append(g_can if g_can is not None else gold)
        if pg is not None and gg is not None:
            fts.append(
                tanimoto(
                    morgan_fingerprint(pg, radius, width),
                    morgan_fingerprint(gg, radius, width),
                )
            )
    n = len(pairs)
    report = MetricReport(
        exact=exact_hits / n,
        levenshtein_mean=lev_total / n,
        bleu=bleu(bleu_preds, bleu_golds, max_n=max_n).as_dict(),
        validity=valid / n,
        morgan_fts_mean=(sum(fts) / len(fts)) if fts else None,
        counts={"evaluated": n, "valid": valid, "invalid": n - valid,
                "fingerprint_pairs": len(fts)},
        notes={
            "levenshtein_on": levenshtein_on,
            "bleu_tokens": "characters of canonical form when parseable",
            "unsupported": list(UNSUPPORTED_METRICS),
        },
    )
    return report
