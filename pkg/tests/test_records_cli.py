import json
import subprocess
import sys
from pathlib import Path

import pytest

from biocorpus.corruption import TrainingExample
from biocorpus.errors import IoFailure, SchemaViolation
from biocorpus.records import (
    ReadStats,
    read_documents,
    read_examples,
    read_fasta,
    read_pair_records,
    write_examples,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "biocorpus" / "data"


def run_cli(*args, expect: int = 0, stdin: str = ""):
    proc = subprocess.run(
        [sys.executable, "-m", "biocorpus", *args],
        input=stdin, capture_output=True, text=True,
    )
    assert proc.returncode == expect, proc.stderr
    return proc


class TestRecords:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        stats = ReadStats()
        assert list(read_documents(path, stats=stats)) == []
        assert stats.read == 0

    def test_lenient_skips_and_counts(self, tmp_path):
        path = tmp_path / "docs.jsonl"
        path.write_text(
            '{"id": "a", "text": "ok"}\n'
            "{broken\n"
            '{"id": "b", "text": "fine"}\n'
        )
        stats = ReadStats()
        docs = list(read_documents(path, stats=stats))
        assert [d["id"] for d in docs] == ["a", "b"]
        assert stats.read == 2
        assert stats.skipped == 1

    def test_strict_raises(self, tmp_path):
        path = tmp_path / "docs.jsonl"
        path.write_text("{broken\n")
        with pytest.raises(SchemaViolation):
            list(read_documents(path, strict=True))

    def test_missing_file(self):
        with pytest.raises(IoFailure):
            list(read_documents("/nonexistent/nope.jsonl"))

    def test_examples_roundtrip(self, tmp_path):
        path = tmp_path / "ex.jsonl"
        examples = [TrainingExample((1, 2), (3,), "mol_t5"),
                    TrainingExample((4,), (5, 6), "text_t5")]
        assert write_examples(path, examples) == 2
        assert list(read_examples(path)) == examples

    def test_fasta_reader(self, tmp_path):
        path = tmp_path / "p.fasta"
        path.write_text(">sp|P1|NAME description\nMKR\nAYW\n>P2\nGG\n")
        records = list(read_fasta(path))
        assert records == [("sp|P1|NAME", "MKRAYW"), ("P2", "GG")]

    def test_pair_records(self, tmp_path):
        path = tmp_path / "pairs.jsonl"
        path.write_text(json.dumps({
            "kind": "molecule", "sequence": "[C][C]",
            "name": "ethane", "fields": {"DESCRIPTION": "a gas"},
        }) + "\n")
        records = list(read_pair_records(path))
        assert records[0].name == "ethane"


@pytest.fixture(scope="module")
def vocab_file(tmp_path_factory):
    out = tmp_path_factory.mktemp("vocab") / "vocab.tsv"
    run_cli("build-vocab", "--text-vocab", str(DATA / "text_vocab.txt"),
            "--sentinels", "100", "--out", str(out))
    return out


class TestCli:
    def test_decode_simple(self):
        proc = run_cli("selfies", "decode", stdin="[C][C]\n")
        assert proc.stdout.strip() == "CC"

    def test_encode_decode_pipe(self):
        proc = run_cli("selfies", "encode", stdin="C=CBr\n")
        assert proc.stdout.strip() == "[C][=C][Br]"
        proc = run_cli("selfies", "decode", stdin=proc.stdout)
        assert proc.stdout.strip() == "C=CBr"

    def test_usage_error_exit_2(self):
        run_cli("selfies", "bogus", expect=2)
        run_cli("no-such-command", expect=2)

    def test_data_error_exit_1_single_line(self, tmp_path):
        out = tmp_path / "x.jsonl"
        proc = run_cli(
            "mix", "--stream", "mol=/absent/file.jsonl", "--batch-size", "6",
            "--batches", "1", "--seed", "1", "--out", str(out), expect=1,
        )
        lines = [l for l in proc.stderr.strip().splitlines() if l]
        assert len(lines) == 1
        assert lines[0].startswith("error: IoFailure:")
        assert "mol" in lines[0]

    def test_build_vocab_manifest(self, vocab_file):
        manifest = json.loads(
            Path(str(vocab_file) + ".manifest.json").read_text())
        assert manifest["command"] == "build-vocab"
        assert manifest["counts"]["sentinel"] == 100

    def test_tokenize_fasta(self, vocab_file):
        proc = run_cli("tokenize", "--modality", "fasta", "--emit", "both",
                       "--vocab", str(vocab_file), stdin="MKR\n")
        row = json.loads(proc.stdout)
        assert row["tokens"] == ["<p>M", "<p>K", "<p>R"]
        assert len(row["ids"]) == 3

    def test_tokenize_selfies_tokens_only(self):
        proc = run_cli("tokenize", "--modality", "selfies", "--emit", "tokens",
                       stdin="[C][=C][Br]\n")
        assert json.loads(proc.stdout)["tokens"] == ["[C]", "[=C]", "[Br]"]

    def test_encode_decode_ids_cli(self, vocab_file):
        row = json.dumps({"tokens": ["[C]", "<p>M", "the"]})
        proc = run_cli("encode-ids", "--vocab", str(vocab_file), stdin=row + "\n")
        ids = json.loads(proc.stdout)["ids"]
        assert len(ids) == 3
        proc = run_cli("decode-ids", "--vocab", str(vocab_file),
                       stdin=json.dumps({"ids": ids}) + "\n")
        assert json.loads(proc.stdout)["tokens"] == ["[C]", "<p>M", "the"]

    def test_encode_ids_unknown_nontext(self, vocab_file):
        row = json.dumps({"tokens": ["[Zz]"]})
        proc = run_cli("encode-ids", "--vocab", str(vocab_file),
                       stdin=row + "\n", expect=1)
        assert proc.stderr.startswith("error: UnknownNonTextToken:")

    def test_corrupt_deterministic(self, vocab_file, tmp_path):
        ids = {"id": "r1", "ids": list(range(600, 700))}
        infile = tmp_path / "in.jsonl"
        infile.write_text(json.dumps(ids) + "\n")
        outs = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            run_cli("corrupt", "--vocab", str(vocab_file), "--task", "mol_t5",
                    "--seed", "7", "--in", str(infile), "--out", str(out))
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_workers_do_not_change_output(self, vocab_file, tmp_path):
        infile = tmp_path / "in.jsonl"
        with open(infile, "w") as fh:
            for k in range(40):
                fh.write(json.dumps({"id": f"r{k}",
                                     "ids": list(range(600, 600 + 80 + k))}) + "\n")
        blobs = []
        for workers in ("1", "8"):
            out = tmp_path / f"w{workers}.jsonl"
            run_cli("corrupt", "--vocab", str(vocab_file), "--seed", "11",
                    "--workers", workers, "--in", str(infile), "--out", str(out))
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_mix_cli(self, vocab_file, tmp_path):
        streams = []
        for task in ("mol_t5", "prot_t5", "text_t5"):
            path = tmp_path / f"{task}.jsonl"
            write_examples(path, [TrainingExample((k,), (k,), task)
                                  for k in range(5)])
            streams += ["--stream", f"{task}={path}"]
        out = tmp_path / "batches.jsonl"
        run_cli("mix", *streams, "--batch-size", "6", "--batches", "4",
                "--seed", "3", "--out", str(out))
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(rows) == 4
        for row in rows:
            tasks = sorted(ex["task"] for ex in row["examples"])
            assert tasks == ["mol_t5", "mol_t5", "prot_t5", "prot_t5",
                             "text_t5", "text_t5"]

    def test_format_prompt(self, tmp_path):
        selfies = tmp_path / "s.txt"
        selfies.write_text("[C][C]\n[C][C][O]\n")
        labels = tmp_path / "y.txt"
        labels.write_text("Yes\nNo\n")
        out = tmp_path / "prompts.jsonl"
        run_cli("format-prompt", "--task", "bbbp", "--selfies-file",
                str(selfies), "--labels-file", str(labels), "--out", str(out))
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(rows) == 2
        assert "Now complete the following example - Input:" in rows[0]["input"]
        assert rows[0]["expected"] == "Yes"
        assert rows[1]["expected"] == "No"

    def test_eval_cli(self, tmp_path):
        infile = tmp_path / "pairs.tsv"
        infile.write_text("CCO\tOCC\nCC\tCC\nC(\tCC\n")
        out = tmp_path / "report.json"
        run_cli("eval", "--in", str(infile), "--out", str(out))
        report = json.loads(out.read_text())
        assert report["counts"]["evaluated"] == 3
        assert report["exact"] == pytest.approx(2 / 3)

    def test_wrap_cli(self, tmp_path):
        docs = tmp_path / "docs.jsonl"
        docs.write_text(json.dumps(
            {"id": "d1", "text": "Aspirin helps. Nothing else."}) + "\n")
        anns = tmp_path / "anns.jsonl"
        anns.write_text(json.dumps(
            {"doc_id": "d1", "start": 0, "end": 7, "surface": "Aspirin",
             "kind": "molecule", "entity_id": "chebi:1"}) + "\n")
        mol_map = tmp_path / "mols.tsv"
        mol_map.write_text("chebi:1\t[C][C][O]\n")
        wrapped = tmp_path / "wrapped.txt"
        plain = tmp_path / "plain.txt"
        run_cli("wrap", "--docs", str(docs), "--annotations", str(anns),
                "--mol-map", str(mol_map), "--seed", "1",
                "--out-wrapped", str(wrapped), "--out-plain", str(plain))
        assert wrapped.read_text() == "<bom>[C][C][O]<eom> helps.\n"
        assert plain.read_text() == "Nothing else.\n"

    def test_pairs_cli(self, vocab_file, tmp_path):
        infile = tmp_path / "pairs.jsonl"
        infile.write_text(json.dumps({
            "kind": "molecule", "sequence": "[C][C]", "name": "ethane",
            "fields": {"DESCRIPTION": "a gas"}, "id": "m1"}) + "\n")
        out = tmp_path / "ex.jsonl"
        run_cli("pairs", "--vocab", str(vocab_file), "--in", str(infile),
                "--seed", "5", "--out", str(out))
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert rows[0]["task"] == "mol_text_pair"

    def test_pairs_exclusion_by_canonical_form(self, vocab_file, tmp_path):
        infile = tmp_path / "pairs.jsonl"
        rows = [
            {"kind": "molecule", "sequence": "[C][C][O]", "name": "ethanol",
             "fields": {"DESCRIPTION": "x"}, "id": "m1"},
            {"kind": "molecule", "sequence": "[C][C]", "name": "ethane",
             "fields": {"DESCRIPTION": "y"}, "id": "m2"},
        ]
        infile.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        # exclusion list uses SMILES in a different atom order
        exclude = tmp_path / "exclude.smi"
        exclude.write_text("OCC\n")
        out = tmp_path / "ex.jsonl"
        run_cli("pairs", "--vocab", str(vocab_file), "--in", str(infile),
                "--exclude", str(exclude), "--seed", "5", "--out", str(out))
        written = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(written) == 1
        manifest = json.loads(Path(str(out) + ".manifest.json").read_text())
        assert manifest["excluded"] == 1

    def test_seed_env_fallback(self, tmp_path):
        import os

        proc = subprocess.run(
            [sys.executable, "-m", "biocorpus", "selfies", "random",
             "--count", "2", "--max-length", "30"],
            capture_output=True, text=True,
            env={**os.environ, "BIOCORPUS_SEED": "42"},
        )
        proc2 = run_cli("selfies", "random", "--count", "2",
                        "--max-length", "30", "--seed", "42")
        assert proc.stdout == proc2.stdout
