import pytest

from biocorpus.errors import (
    DuplicateToken,
    InvalidResidue,
    MalformedVocabFile,
    MissingTextVocab,
    StrayCharacter,
    UnbalancedBracket,
    UnknownId,
    UnknownNonTextToken,
)
from biocorpus.molgraph import parse_smiles
from biocorpus.selfies_codec import encode_selfies, selfies_alphabet
from biocorpus.tokenization import (
    RESIDUES,
    Vocabulary,
    VocabEntry,
    build_vocabulary,
    decode_ids,
    detokenize_text,
    encode_ids,
    tokenize_fasta,
    tokenize_selfies_string,
    tokenize_text,
    tokenize_wrapped,
)


def make_vocab(tmp_path, tokens, sentinels=10):
    path = tmp_path / "words.txt"
    path.write_text("\n".join(tokens) + "\n")
    return build_vocabulary(path, selfies_alphabet(), sentinels)


class TestSelfiesTokenizer:
    def test_example(self):
        assert tokenize_selfies_string("[C][=C][Br]") == ["[C]", "[=C]", "[Br]"]

    def test_empty(self):
        assert tokenize_selfies_string("") == []

    def test_unbalanced(self):
        with pytest.raises(UnbalancedBracket):
            tokenize_selfies_string("[C][C")

    def test_stray(self):
        with pytest.raises(StrayCharacter):
            tokenize_selfies_string("x[C]")

    def test_concat_identity(self, corpus_lines):
        for line in corpus_lines[::40]:
            text = "".join(encode_selfies(parse_smiles(line)))
            assert "".join(tokenize_selfies_string(text)) == text


class TestFastaTokenizer:
    def test_example(self):
        assert tokenize_fasta("MKR") == ["<p>M", "<p>K", "<p>R"]

    def test_empty(self):
        assert tokenize_fasta("") == []

    def test_invalid(self):
        with pytest.raises(InvalidResidue):
            tokenize_fasta("MK1")
        with pytest.raises(InvalidResidue):
            tokenize_fasta("mkr")
        with pytest.raises(InvalidResidue):
            tokenize_fasta("MJ")

    def test_extended_codes(self):
        assert tokenize_fasta("XBZUO") == ["<p>X", "<p>B", "<p>Z", "<p>U", "<p>O"]

    def test_concat_identity(self):
        text = "MKTAYIAKQRQISFVKSHFSRQLEERLGLIEVQ"
        tokens = tokenize_fasta(text)
        assert "".join(t.removeprefix("<p>") for t in tokens) == text


class TestTextTokenizer:
    def test_longest_match_wins(self, tmp_path):
        vocab = make_vocab(tmp_path, ["un", "related", "unrelated"])
        assert tokenize_text("unrelated", vocab) == ["unrelated"]

    def test_unknown_per_character(self, tmp_path):
        vocab = make_vocab(tmp_path, ["ab"])
        assert tokenize_text("qq", vocab) == ["<unk>", "<unk>"]

    def test_greedy_matches_bruteforce(self, tmp_path):
        vocab = make_vocab(tmp_path, ["mol", "ecule"])
        assert tokenize_text("molecule", vocab) == ["mol", "ecule"]

    def test_greedy_vs_all_segmentations(self, tmp_path):
        # brute force: any segmentation into vocab pieces exists iff greedy
        # covers the text without <unk> for these prefix-free inputs
        pieces = ["ab", "abc", "c", "d"]
        vocab = make_vocab(tmp_path, pieces)
        text = "abcd"

        def segmentable(s):
            if not s:
                return True
            return any(s.startswith(p) and segmentable(s[len(p):]) for p in pieces)

        assert segmentable(text)
        out = tokenize_text(text, vocab)
        assert "".join(out) == text and "<unk>" not in out

    def test_lossless_detokenize(self, vocab):
        text = "the molecule inhibits the target protein"
        tokens = tokenize_text(text, vocab)
        assert "<unk>" not in tokens
        assert detokenize_text(tokens) == text

    def test_missing_text_vocab(self):
        vocab = Vocabulary([VocabEntry("<pad>", 0, "special"),
                            VocabEntry("<unk>", 1, "special")])
        with pytest.raises(MissingTextVocab):
            tokenize_text("x", vocab)


class TestWrappedTokenizer:
    def test_mixed_segments(self, vocab):
        text = "binds <bom>[C][=C][Br]<eom> and <bom>MKR<eom> here"
        tokens = tokenize_wrapped(text, vocab)
        assert "<bom>" in tokens and "<eom>" in tokens
        assert "[=C]" in tokens and "<p>K" in tokens
        i1 = tokens.index("<bom>")
        assert tokens[i1 + 1 : i1 + 4] == ["[C]", "[=C]", "[Br]"]

    def test_unclosed_marker(self, vocab):
        with pytest.raises(UnbalancedBracket):
            tokenize_wrapped("text <bom>[C] more", vocab)


class TestVocabulary:
    def test_layout_and_counts(self, vocab):
        assert vocab.counts["selfies"] == len(selfies_alphabet())
        assert vocab.counts["amino_acid"] == len(RESIDUES)
        assert vocab.counts["special"] == 5
        assert vocab.counts["sentinel"] == 100
        total = sum(vocab.counts.values())
        assert total == len(vocab)
        # contiguous ids 0..n-1 in block order
        ids = [e.id for e in vocab.entries]
        assert ids == list(range(total))
        modalities = [e.modality for e in vocab.entries]
        boundaries = [modalities.index(m) for m in
                      ("text", "selfies", "amino_acid", "special", "sentinel")]
        assert boundaries == sorted(boundaries)

    def test_layout_arithmetic(self, tmp_path):
        vocab = make_vocab(tmp_path, [f"w{i}" for i in range(100)], sentinels=100)
        expected = 100 + len(selfies_alphabet()) + len(RESIDUES) + 5 + 100
        assert len(vocab) == expected
        assert [e.id for e in vocab.entries] == list(range(expected))

    def test_deterministic_bytes(self, tmp_path, text_vocab_path):
        v1 = build_vocabulary(text_vocab_path, selfies_alphabet(), 50)
        v2 = build_vocabulary(text_vocab_path, selfies_alphabet(), 50)
        assert v1.to_tsv() == v2.to_tsv()

    def test_duplicate_across_blocks(self, tmp_path):
        with pytest.raises(DuplicateToken):
            make_vocab(tmp_path, ["hello", "[C]"])
        with pytest.raises(DuplicateToken):
            make_vocab(tmp_path, ["<pad>"])
        with pytest.raises(DuplicateToken):
            make_vocab(tmp_path, ["<p>M"])

    def test_duplicate_within_text(self, tmp_path):
        with pytest.raises(DuplicateToken):
            make_vocab(tmp_path, ["x", "x"])

    def test_malformed_file(self, tmp_path):
        missing = tmp_path / "nope.txt"
        with pytest.raises(MalformedVocabFile):
            build_vocabulary(missing, selfies_alphabet(), 10)

    def test_save_load_roundtrip(self, tmp_path, vocab):
        path = tmp_path / "vocab.tsv"
        vocab.save(path)
        loaded = Vocabulary.load(path)
        assert loaded.to_tsv() == vocab.to_tsv()
        assert loaded.manifest() == vocab.manifest()

    def test_manifest_fields(self, vocab):
        manifest = vocab.manifest()
        assert manifest["total"] == len(vocab)
        assert set(manifest["counts"]) == {"text", "selfies", "amino_acid",
                                           "special", "sentinel"}
        assert len(manifest["sha256"]) == 64

    def test_sentinels_contiguous(self, vocab):
        base = vocab.sentinel_id(0)
        for k in range(vocab.sentinel_count):
            assert vocab.sentinel_id(k) == base + k
            assert vocab.text_of(vocab.sentinel_id(k)) == f"<M{k + 1}>"

    def test_modality_disjointness(self, vocab):
        ids = {vocab.id_of("C"), vocab.id_of("[C]"), vocab.id_of("<p>C")}
        assert None not in ids
        assert len(ids) == 3
        assert vocab.modality_of(vocab.id_of("C")) == "text"
        assert vocab.modality_of(vocab.id_of("[C]")) == "selfies"
        assert vocab.modality_of(vocab.id_of("<p>C")) == "amino_acid"


class TestIds:
    def test_roundtrip(self, vocab):
        tokens = ["[C]", "<p>M", "the", "<bom>", "<M3>"]
        ids = encode_ids(tokens, vocab)
        assert decode_ids(ids, vocab) == tokens

    def test_unknown_text_maps_to_unk(self, vocab):
        ids = encode_ids(["zzzqqq"], vocab)
        assert ids == [vocab.unk_id]

    def test_unknown_selfies_errors(self, vocab):
        with pytest.raises(UnknownNonTextToken):
            encode_ids(["[Zz]"], vocab)

    def test_unknown_amino_errors(self, vocab):
        with pytest.raises(UnknownNonTextToken):
            encode_ids(["<p>J"], vocab)

    def test_unknown_id(self, vocab):
        with pytest.raises(UnknownId):
            decode_ids([len(vocab)], vocab)
        with pytest.raises(UnknownId):
            decode_ids([-1], vocab)


class TestCorpusTotality:
    def test_every_corpus_line_tokenizes(self, corpus_lines, vocab):
        for line in corpus_lines:
            text = "".join(encode_selfies(parse_smiles(line)))
            tokens = tokenize_selfies_string(text)
            ids = encode_ids(tokens, vocab)
            assert decode_ids(ids, vocab) == tokens
