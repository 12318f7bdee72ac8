"""Streaming record readers and writers.

All readers are constant-memory generators; malformed lines are counted and
skipped in lenient mode, or raise in strict mode, but are never silently
dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .corruption import TrainingExample
from .errors import IoFailure, SchemaViolation
from .pairs import PairRecord
from .wrapping import EntityAnnotation


@dataclass
class ReadStats:
    read: int = 0
    skipped: int = 0

    def as_dict(self) -> dict:
        return {"read": self.read, "skipped": self.skipped}


def _iter_lines(path: str | Path) -> Iterator[str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                yield line.rstrip("\n")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _jsonl_reader(path, parse, strict: bool, stats: Optional[ReadStats]):
    for lineno, line in enumerate(_iter_lines(path), start=1):
        if not line.strip():
            continue
        try:
            record = parse(json.loads(line))
        except Exception as exc:
            if strict:
                raise SchemaViolation(f"{path}:{lineno}: {exc}") from exc
            if stats is not None:
                stats.skipped += 1
            continue
        if stats is not None:
            stats.read += 1
        yield record


def read_documents(path, strict: bool = False,
                   stats: Optional[ReadStats] = None) -> Iterator[dict]:
    """JSONL documents {"id": ..., "text": ...}."""
    def parse(obj):
        if not isinstance(obj.get("id"), str) or not isinstance(obj.get("text"), str):
            raise ValueError("document needs string 'id' and 'text'")
        return {"id": obj["id"], "text": obj["text"]}

    return _jsonl_reader(path, parse, strict, stats)


def read_annotations(path, strict: bool = False,
                     stats: Optional[ReadStats] = None) -> Iterator[tuple[str, EntityAnnotation]]:
    """JSONL annotations {"doc_id","start","end","surface","kind","entity_id"}."""
    def parse(obj):
        ann = EntityAnnotation(
            start=int(obj["start"]),
            end=int(obj["end"]),
            surface=str(obj["surface"]),
            kind=str(obj["kind"]),
            entity_id=str(obj["entity_id"]),
        )
        return (str(obj["doc_id"]), ann)

    return _jsonl_reader(path, parse, strict, stats)


def read_pair_records(path, strict: bool = False,
                      stats: Optional[ReadStats] = None) -> Iterator[PairRecord]:
    """JSONL pair records {"kind","sequence","name"?,"fields":{...},"id"?}."""
    def parse(obj):
        return PairRecord(
            kind=str(obj["kind"]),
            sequence=str(obj["sequence"]),
            name=obj.get("name"),
            fields=dict(obj.get("fields", {})),
            record_id=str(obj.get("id", "")),
        )

    return _jsonl_reader(path, parse, strict, stats)


def read_molecule_lines(path, stats: Optional[ReadStats] = None) -> Iterator[str]:
    """One molecule string per line; blank lines skipped."""
    for line in _iter_lines(path):
        line = line.strip()
        if line:
            if stats is not None:
                stats.read += 1
            yield line


def read_fasta(path, stats: Optional[ReadStats] = None) -> Iterator[tuple[str, str]]:
    """Standard FASTA: '>' header lines start a record, other lines extend it."""
    header: Optional[str] = None
    chunks: list[str] = []

    def flush():
        if header is not None and chunks:
            if stats is not None:
                stats.read += 1
            return (header, "".join(chunks))
        return None

    for line in _iter_lines(path):
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            rec = flush()
            if rec:
                yield rec
            header = line[1:].split()[0] if len(line) > 1 else ""
            chunks = []
        elif header is not None:
            chunks.append(line)
    rec = flush()
    if rec:
        yield rec


def read_examples(path, strict: bool = False,
                  stats: Optional[ReadStats] = None) -> Iterator[TrainingExample]:
    return _jsonl_reader(path, TrainingExample.from_json, strict, stats)


def write_examples(path: str | Path, examples: Iterable[TrainingExample]) -> int:
    """Write examples as JSONL; returns the number written."""
    count = 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for ex in examples:
                fh.write(json.dumps(ex.to_json(), separators=(",", ":")) + "\n")
                count += 1
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return count


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> int:
    count = 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, separators=(",", ":")) + "\n")
                count += 1
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return count


def read_lookup_tsv(path) -> dict[str, str]:
    """Two-column TSV of entity_id -> sequence."""
    out: dict[str, str] = {}
    for line in _iter_lines(path):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise SchemaViolation(f"{path}: expected two tab-separated columns")
        out[parts[0]] = parts[1]
    return out
