"""Command-line surface for batch corpus preparation and evaluation.

Every file-producing run writes a JSON manifest (seed, parameters, counts,
skip statistics) next to its output so the run can be reproduced exactly.
All randomness flows from a single --seed flag (or BIOCORPUS_SEED); worker
count never changes output bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterator, Optional

from . import __version__
from .corruption import TASKS, CorruptionParams, span_corrupt
from .errors import BiocorpusError, IoFailure
from .metrics import evaluate_pairs
from .mixing import MixStats, mix_tasks
from .molgraph import parse_smiles, write_smiles
from .pairs import build_translation_pair
from .prompts import list_tasks, render_prompt
from .records import (
    ReadStats,
    read_annotations,
    read_documents,
    read_examples,
    read_lookup_tsv,
    read_pair_records,
)
from .seeds import derive_seed
from .selfies_codec import (
    decode_selfies,
    encode_selfies,
    random_selfies,
    selfies_alphabet,
    split_selfies,
)
from .tokenization import (
    Vocabulary,
    build_vocabulary,
    decode_ids,
    encode_ids,
    tokenize_fasta,
    tokenize_text,
    tokenize_wrapped,
)
from .wrapping import wrap_document


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("BIOCORPUS_SEED")
    if env is not None:
        return int(env)
    return 0


def _read_lines(path: Optional[str]) -> list[str]:
    if path is None or path == "-":
        return [line.rstrip("\n") for line in sys.stdin]
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return [line.rstrip("\n") for line in fh]
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout
    try:
        return open(path, "w", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _write_manifest(args, payload: dict) -> None:
    path = getattr(args, "manifest", None)
    if path is None:
        out = getattr(args, "out", None)
        if out is None or out == "-":
            return
        path = str(out) + ".manifest.json"
    payload = {"tool": "biocorpus", "version": __version__,
               "command": args.command, **payload}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def _parallel_map(fn, items: list, workers: int) -> Iterator:
    """Order-preserving map; results are independent of worker count."""
    if workers <= 1:
        return iter([fn(x) for x in items])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return iter(list(pool.map(fn, items)))


# --- selfies subcommands ---


def cmd_selfies_encode(args) -> int:
    lines = [ln for ln in _read_lines(args.infile) if ln.strip()]

    def one(line: str) -> Optional[str]:
        try:
            return "".join(encode_selfies(parse_smiles(line.strip())))
        except BiocorpusError:
            return None

    results = list(_parallel_map(one, lines, args.workers))
    skipped = sum(1 for r in results if r is None)
    out = _open_out(args.out)
    for r in results:
        if r is not None:
            out.write(r + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"read": len(lines), "written": len(lines) - skipped,
                           "skipped": skipped})
    if skipped:
        print(f"skipped {skipped} unconvertible lines", file=sys.stderr)
    return 0


def cmd_selfies_decode(args) -> int:
    lines = [ln for ln in _read_lines(args.infile) if ln.strip()]
    canonical = not args.no_canonical

    def one(line: str) -> Optional[str]:
        try:
            graph = decode_selfies(split_selfies(line.strip()))
            return write_smiles(graph, canonical=canonical)
        except BiocorpusError:
            if args.strict:
                raise  # keep the original error name on the wire
            return None

    results = list(_parallel_map(one, lines, args.workers))
    skipped = sum(1 for r in results if r is None)
    out = _open_out(args.out)
    for r in results:
        if r is not None:
            out.write(r + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"read": len(lines), "written": len(lines) - skipped,
                           "skipped": skipped, "canonical": canonical})
    return 0


def cmd_selfies_random(args) -> int:
    seed = _resolve_seed(args)
    out = _open_out(args.out)
    for i in range(args.count):
        length = random.Random(derive_seed(seed, "len", i)).randint(0, args.max_length)
        tokens = random_selfies(derive_seed(seed, "tok", i), length)
        out.write("".join(tokens) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"seed": seed, "count": args.count,
                           "max_length": args.max_length})
    return 0


# --- tokenize ---


def cmd_tokenize(args) -> int:
    vocab = Vocabulary.load(args.vocab) if args.vocab else None
    if args.emit in ("ids", "both") and vocab is None:
        raise BiocorpusError("--vocab is required to emit ids")
    lines = [ln for ln in _read_lines(args.infile) if ln.strip()]

    def one(line: str) -> dict:
        text = line.strip()
        if args.modality == "selfies":
            tokens = split_selfies(text)
        elif args.modality == "fasta":
            tokens = tokenize_fasta(text)
        elif args.modality == "wrapped":
            tokens = tokenize_wrapped(text, vocab)
        else:
            tokens = tokenize_text(text, vocab)
        row: dict = {"task": args.modality}
        if args.emit in ("tokens", "both"):
            row["tokens"] = tokens
        if args.emit in ("ids", "both"):
            row["ids"] = encode_ids(tokens, vocab)
        return row

    if args.modality in ("text", "wrapped") and vocab is None:
        raise BiocorpusError(f"--vocab is required for modality {args.modality}")

    results = []
    skipped = 0
    for line in lines:
        try:
            results.append(one(line))
        except BiocorpusError:
            if args.strict:
                raise
            skipped += 1
    out = _open_out(args.out)
    for row in results:
        out.write(json.dumps(row, separators=(",", ":")) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"modality": args.modality, "read": len(lines),
                           "written": len(results), "skipped": skipped})
    return 0


# --- id mapping (JSONL in, JSONL out; the binding layer drives these) ---


def cmd_encode_ids(args) -> int:
    vocab = Vocabulary.load(args.vocab)
    out = _open_out(args.out)
    count = 0
    for line in _read_lines(args.infile):
        if not line.strip():
            continue
        tokens = json.loads(line)["tokens"]
        ids = encode_ids(tokens, vocab)
        out.write(json.dumps({"ids": ids}, separators=(",", ":")) + "\n")
        count += 1
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"rows": count})
    return 0


def cmd_decode_ids(args) -> int:
    vocab = Vocabulary.load(args.vocab)
    out = _open_out(args.out)
    count = 0
    for line in _read_lines(args.infile):
        if not line.strip():
            continue
        ids = json.loads(line)["ids"]
        tokens = decode_ids(ids, vocab)
        out.write(json.dumps({"tokens": tokens}, separators=(",", ":")) + "\n")
        count += 1
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"rows": count})
    return 0


# --- build-vocab ---


def cmd_build_vocab(args) -> int:
    vocab = build_vocabulary(args.text_vocab, selfies_alphabet(), args.sentinels)
    vocab.save(args.out)
    manifest = vocab.manifest()
    _write_manifest(args, manifest)
    print(json.dumps(manifest["counts"]), file=sys.stderr)
    return 0


# --- wrap ---


def cmd_wrap(args) -> int:
    seed = _resolve_seed(args)
    mol_lookup = read_lookup_tsv(args.mol_map) if args.mol_map else {}
    prot_lookup = read_lookup_tsv(args.prot_map) if args.prot_map else {}
    ann_stats = ReadStats()
    by_doc: dict[str, list] = {}
    for doc_id, ann in read_annotations(args.annotations, args.strict, ann_stats):
        by_doc.setdefault(doc_id, []).append(ann)
    doc_stats = ReadStats()
    wrapped_out = _open_out(args.out_wrapped)
    plain_out = _open_out(args.out_plain)
    totals: dict[str, int] = {}
    for doc in read_documents(args.docs, args.strict, doc_stats):
        result = wrap_document(
            doc["text"], by_doc.get(doc["id"], ()), mol_lookup, prot_lookup,
            seed, doc_id=doc["id"],
        )
        for line in result.wrapped:
            wrapped_out.write(line + "\n")
        for line in result.plain:
            plain_out.write(line + "\n")
        for key, value in result.stats.as_dict().items():
            totals[key] = totals.get(key, 0) + value
    for fh in (wrapped_out, plain_out):
        if fh is not sys.stdout:
            fh.close()
    args.out = args.out_wrapped
    _write_manifest(args, {"seed": seed, "documents": doc_stats.as_dict(),
                           "annotations": ann_stats.as_dict(), "wrap": totals})
    return 0


# --- corrupt ---


def cmd_corrupt(args) -> int:
    seed = _resolve_seed(args)
    vocab = Vocabulary.load(args.vocab)
    params = CorruptionParams(args.noise_density, args.mean_span, args.max_len)
    protected = frozenset((vocab.bom_id, vocab.eom_id)) if args.protect_delimiters \
        else frozenset()
    rows = []
    stats = ReadStats()
    for lineno, line in enumerate(_read_lines(args.infile)):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rows.append((str(obj.get("id", lineno)), list(obj["ids"])))
            stats.read += 1
        except Exception as exc:
            if args.strict:
                raise BiocorpusError(f"line {lineno}: {exc}") from exc
            stats.skipped += 1

    def one(item: tuple[str, list[int]]) -> dict:
        record_id, ids = item
        example = span_corrupt(
            ids, vocab, params, derive_seed(seed, "corrupt", args.task, record_id),
            task=args.task, protected_ids=protected,
        )
        return example.to_json()

    results = list(_parallel_map(one, rows, args.workers))
    out = _open_out(args.out)
    for row in results:
        out.write(json.dumps(row, separators=(",", ":")) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {
        "seed": seed, "task": args.task, "records": stats.as_dict(),
        "params": {"noise_density": params.noise_density,
                   "mean_span_length": params.mean_span_length,
                   "max_input_length": params.max_input_length,
                   "protect_delimiters": args.protect_delimiters},
    })
    return 0


# --- pairs ---


def cmd_pairs(args) -> int:
    seed = _resolve_seed(args)
    vocab = Vocabulary.load(args.vocab)
    stats = ReadStats()
    records = list(read_pair_records(args.infile, args.strict, stats))

    excluded = 0
    if args.exclude:
        blocked = _canonical_set(args.exclude)
        kept = []
        for record in records:
            key = _canonical_molecule(record.sequence) \
                if record.kind == "molecule" else None
            if key is not None and key in blocked:
                excluded += 1
            else:
                kept.append(record)
        records = kept

    def one(item) -> dict:
        index, record = item
        record_seed = derive_seed(seed, "pairs", record.record_id or index)
        return build_translation_pair(record, vocab, record_seed).to_json()

    results = list(_parallel_map(one, list(enumerate(records)), args.workers))
    out = _open_out(args.out)
    for row in results:
        out.write(json.dumps(row, separators=(",", ":")) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"seed": seed, "records": stats.as_dict(),
                           "excluded": excluded, "written": len(results)})
    return 0


def _canonical_molecule(text: str) -> Optional[str]:
    from .metrics import canonical_or_none

    return canonical_or_none(text)


def _canonical_set(path: str) -> set[str]:
    """Exclusion list: one molecule (SMILES or token string) per line,
    compared by canonical form so notation differences cannot leak."""
    blocked = set()
    for line in _read_lines(path):
        line = line.strip()
        if not line:
            continue
        key = _canonical_molecule(line)
        if key is not None:
            blocked.add(key)
    return blocked


# --- mix ---


def cmd_mix(args) -> int:
    seed = _resolve_seed(args)
    streams = {}
    for spec in args.stream:
        if "=" not in spec:
            raise BiocorpusError(f"--stream must be task=path, got {spec!r}")
        task, path = spec.split("=", 1)
        if not Path(path).exists():
            raise IoFailure(f"stream {task!r}: no such file {path}")
        streams[task] = (lambda p: (lambda: read_examples(p)))(path)
    weights = None
    if args.weights:
        weights = {}
        for part in args.weights.split(","):
            task, w = part.split("=", 1)
            weights[task] = float(w)
    stats = MixStats()
    batches = mix_tasks(streams, args.batch_size, seed, weights=weights,
                        num_batches=args.batches, stats=stats)
    out = _open_out(args.out)
    for index, batch in enumerate(batches):
        row = {"batch": index, "examples": [ex.to_json() for ex in batch]}
        out.write(json.dumps(row, separators=(",", ":")) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"seed": seed, "batch_size": args.batch_size,
                           "mix": stats.as_dict()})
    return 0


# --- format-prompt ---


def _filler_args(pairs: list[str]) -> dict[str, str]:
    fillers = {}
    for pair in pairs:
        if "=" not in pair:
            raise BiocorpusError(f"--filler must be key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        fillers[key] = value
    return fillers


def cmd_format_prompt(args) -> int:
    base = _filler_args(args.filler or [])
    selfies = _read_lines(args.selfies_file) if args.selfies_file else None
    fastas = _read_lines(args.fasta_file) if args.fasta_file else None
    texts = _read_lines(args.text_file) if args.text_file else None
    labels = _read_lines(args.labels_file) if args.labels_file else None
    lengths = [len(x) for x in (selfies, fastas, texts, labels) if x is not None]
    count = min(lengths) if lengths else 1
    rows = []
    for i in range(count):
        fillers: dict[str, object] = dict(base)
        if selfies is not None:
            fillers["SELFIES"] = selfies[i]
        if fastas is not None:
            value = fastas[i].split("\t")
            fillers["FASTA"] = value if len(value) > 1 else value[0]
        if texts is not None:
            fillers["Text Description"] = texts[i]
        if labels is not None:
            fillers["label"] = labels[i]
        rendered, expected = render_prompt(args.task, fillers, joiner=args.joiner)
        rows.append({"task": args.task, "input": rendered, "expected": expected})
    out = _open_out(args.out)
    for row in rows:
        out.write(json.dumps(row, separators=(",", ":")) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"task": args.task, "written": len(rows),
                           "joiner": args.joiner})
    return 0


# --- eval ---


def cmd_eval(args) -> int:
    pairs = []
    for lineno, line in enumerate(_read_lines(args.infile), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise BiocorpusError(f"line {lineno}: expected 'pred<TAB>gold'")
        pairs.append((parts[0], parts[1]))
    report = evaluate_pairs(
        pairs, max_n=args.max_n, radius=args.radius, width=args.width,
        levenshtein_on="raw" if args.lev_raw else "canonical",
    )
    out = _open_out(args.out)
    out.write(json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    if out is not sys.stdout:
        out.close()
    _write_manifest(args, {"pairs": len(pairs), "report": report.as_dict()})
    return 0


# --- parser wiring ---


def _add_common(p: argparse.ArgumentParser, *, seeded: bool = False,
                workers: bool = False, strict: bool = False) -> None:
    p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
    if seeded:
        p.add_argument("--seed", type=int, default=None,
                       help="global seed (fallback: BIOCORPUS_SEED, then 0)")
    if workers:
        p.add_argument("--workers", type=int, default=1,
                       help="worker threads; output is identical for any value")
    if strict:
        p.add_argument("--strict", action="store_true",
                       help="fail on malformed records instead of skipping")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biocorpus",
        description="Corpus preparation and evaluation for molecule/protein/text models",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    selfies = sub.add_parser("selfies", help="molecular string codec")
    selfies_sub = selfies.add_subparsers(dest="subcommand", required=True)

    p = selfies_sub.add_parser("encode", help="SMILES lines -> token strings")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    _add_common(p, workers=True)
    p.set_defaults(func=cmd_selfies_encode, command="selfies encode")

    p = selfies_sub.add_parser("decode", help="token strings -> SMILES lines")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--no-canonical", action="store_true")
    _add_common(p, workers=True, strict=True)
    p.set_defaults(func=cmd_selfies_decode, command="selfies decode")

    p = selfies_sub.add_parser("random", help="uniform random token strings")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--max-length", type=int, default=200)
    p.add_argument("--out", default=None)
    _add_common(p, seeded=True)
    p.set_defaults(func=cmd_selfies_random, command="selfies random")

    p = sub.add_parser("tokenize", help="split lines into tokens / IDs")
    p.add_argument("--modality", choices=("selfies", "fasta", "text", "wrapped"),
                   required=True)
    p.add_argument("--vocab", default=None)
    p.add_argument("--emit", choices=("tokens", "ids", "both"), default="ids")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    _add_common(p, strict=True)
    p.set_defaults(func=cmd_tokenize, command="tokenize")

    for name, fn in (("encode-ids", cmd_encode_ids), ("decode-ids", cmd_decode_ids)):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} over JSONL rows")
        p.add_argument("--vocab", required=True)
        p.add_argument("--in", dest="infile", default=None)
        p.add_argument("--out", default=None)
        _add_common(p)
        p.set_defaults(func=fn, command=name)

    p = sub.add_parser("build-vocab", help="assemble the vocabulary TSV")
    p.add_argument("--text-vocab", required=True)
    p.add_argument("--sentinels", type=int, default=100)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_build_vocab, command="build-vocab")

    p = sub.add_parser("wrap", help="entity substitution over documents")
    p.add_argument("--docs", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--mol-map", default=None)
    p.add_argument("--prot-map", default=None)
    p.add_argument("--out-wrapped", required=True)
    p.add_argument("--out-plain", required=True)
    _add_common(p, seeded=True, strict=True)
    p.set_defaults(func=cmd_wrap, command="wrap")

    p = sub.add_parser("corrupt", help="span corruption over token-ID lines")
    p.add_argument("--vocab", required=True)
    p.add_argument("--task", choices=TASKS, default="text_t5")
    p.add_argument("--noise-density", type=float, default=0.15)
    p.add_argument("--mean-span", type=float, default=3.0)
    p.add_argument("--max-len", type=int, default=512)
    p.add_argument("--protect-delimiters", action="store_true")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    _add_common(p, seeded=True, workers=True, strict=True)
    p.set_defaults(func=cmd_corrupt, command="corrupt")

    p = sub.add_parser("pairs", help="translation examples from pair records")
    p.add_argument("--vocab", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--exclude", default=None, metavar="FILE",
                   help="drop molecule records whose canonical form appears "
                        "in this molecule list (downstream test exclusion)")
    _add_common(p, seeded=True, workers=True, strict=True)
    p.set_defaults(func=cmd_pairs, command="pairs")

    p = sub.add_parser("mix", help="deterministic multi-task batches")
    p.add_argument("--stream", action="append", required=True,
                   metavar="TASK=PATH")
    p.add_argument("--batch-size", type=int, default=96)
    p.add_argument("--batches", type=int, required=True)
    p.add_argument("--weights", default=None, metavar="TASK=W,...")
    p.add_argument("--out", default=None)
    _add_common(p, seeded=True)
    p.set_defaults(func=cmd_mix, command="mix")

    p = sub.add_parser("format-prompt", help="render downstream-task prompts")
    p.add_argument("--task", required=True, choices=list_tasks())
    p.add_argument("--selfies-file", default=None)
    p.add_argument("--fasta-file", default=None)
    p.add_argument("--text-file", default=None)
    p.add_argument("--labels-file", default=None)
    p.add_argument("--filler", action="append", metavar="KEY=VALUE")
    p.add_argument("--joiner", default=" ")
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_format_prompt, command="format-prompt")

    p = sub.add_parser("eval", help="molecule generation metrics over a TSV")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--width", type=int, default=2048)
    p.add_argument("--lev-raw", action="store_true",
                   help="Levenshtein over raw strings instead of canonical")
    _add_common(p)
    p.set_defaults(func=cmd_eval, command="eval")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BiocorpusError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
