import math
import random

import pytest

from biocorpus.errors import EmptyCorpus, LengthMismatch, WidthMismatch
from biocorpus.metrics import (
    Fingerprint,
    bleu,
    evaluate_pairs,
    exact_match,
    levenshtein,
    morgan_fingerprint,
    parse_molecule,
    tanimoto,
    validity_rate,
)
from biocorpus.molgraph import parse_smiles, permute, write_smiles
from biocorpus.selfies_codec import encode_selfies, random_selfies
from oracles import levenshtein_matrix


class TestExactMatch:
    def test_same_molecule_different_order(self):
        assert exact_match("CCO", "OCC")

    def test_identity(self):
        assert exact_match("CC", "CC")

    def test_invalid_pred(self):
        assert not exact_match("C(", "CC")

    def test_invalid_gold(self):
        assert not exact_match("CC", "C(")

    def test_selfies_inputs_decoded(self):
        assert exact_match("[C][C][O]", "OCC")
        assert exact_match("[C][=C][Br]", "C=CBr")

    def test_different_molecules(self):
        assert not exact_match("CCO", "CCN")

    def test_permutation_invariance(self, corpus_lines):
        rng = random.Random(8)
        for line in corpus_lines[:100]:
            g = parse_smiles(line)
            perm = list(range(len(g.atoms)))
            rng.shuffle(perm)
            shuffled = write_smiles(permute(g, perm), canonical=False)
            assert exact_match(shuffled, line), line


class TestLevenshtein:
    def test_identity(self):
        assert levenshtein("abc", "abc") == 0

    def test_empty(self):
        assert levenshtein("", "ab") == 2
        assert levenshtein("ab", "") == 2

    def test_kitten(self):
        assert levenshtein("kitten", "sitting") == 3

    def test_matches_dp_oracle(self):
        rng = random.Random(31)
        alphabet = "abcdeCNO=#()[]1"
        for _ in range(1000):
            a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 64)))
            b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 64)))
            assert levenshtein(a, b) == levenshtein_matrix(a, b)

    def test_symmetry_and_triangle(self):
        rng = random.Random(5)
        strings = ["".join(rng.choice("abc") for _ in range(rng.randint(0, 12)))
                   for _ in range(30)]
        for a in strings[:10]:
            for b in strings[:10]:
                assert levenshtein(a, b) == levenshtein(b, a)
                for c in strings[:5]:
                    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


class TestBleu:
    def test_perfect(self):
        corpus = [list("the cat sat"), list("molecule")]
        assert bleu(corpus, corpus).score == 1.0

    def test_no_overlap(self):
        result = bleu([list("aaaa")], [list("bbbb")])
        assert result.score < 1e-6

    def test_hand_computed_case(self):
        # pred "the cat" vs gold "the cat sat" with max_n=2:
        # p1 = 2/2, p2 = 1/1, BP = exp(1 - 3/2)
        result = bleu([["the", "cat"]], [["the", "cat", "sat"]], max_n=2)
        expected = math.exp(1.0 - 3.0 / 2.0) * math.exp(
            (math.log(1.0) + math.log(1.0)) / 2.0
        )
        assert abs(result.score - expected) < 1e-12
        assert result.precisions == (1.0, 1.0)
        assert abs(result.brevity_penalty - math.exp(-0.5)) < 1e-12

    def test_self_bleu_one_even_for_short_sequences(self):
        corpus = [["x"], ["y", "z"]]
        assert bleu(corpus, corpus, max_n=4).score == 1.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            bleu([["a"]], [])
        with pytest.raises(EmptyCorpus):
            bleu([], [])

    def test_range(self):
        rng = random.Random(2)
        for _ in range(50):
            p = [[rng.choice("abcd") for _ in range(rng.randint(1, 10))]]
            g = [[rng.choice("abcd") for _ in range(rng.randint(1, 10))]]
            assert 0.0 <= bleu(p, g).score <= 1.0


class TestValidity:
    def test_half(self):
        assert validity_rate(["CC", "C("]) == 0.5

    def test_empty(self):
        with pytest.raises(EmptyCorpus):
            validity_rate([])

    def test_codec_strings_always_valid(self):
        preds = ["".join(random_selfies(seed, 40)) for seed in range(200)]
        assert validity_rate(preds) == 1.0

    def test_over_valent_smiles_invalid(self):
        assert validity_rate(["C(C)(C)(C)(C)C"]) == 0.0


class TestMorgan:
    def test_self_similarity(self):
        f = morgan_fingerprint(parse_smiles("CCO"))
        assert tanimoto(f, f) == 1.0

    def test_same_molecule_any_notation(self):
        a = morgan_fingerprint(parse_smiles("C"))
        b = morgan_fingerprint(parse_smiles("C"))
        assert tanimoto(a, b) == 1.0
        x = morgan_fingerprint(parse_smiles("OCC"))
        y = morgan_fingerprint(parse_smiles("CCO"))
        assert tanimoto(x, y) == 1.0

    def test_methane_vs_benzene_dissimilar(self):
        a = morgan_fingerprint(parse_smiles("C"))
        b = morgan_fingerprint(parse_smiles("c1ccccc1"))
        assert tanimoto(a, b) < 0.2

    def test_isomorphism_invariance(self, corpus_lines):
        rng = random.Random(77)
        for line in corpus_lines[::21]:
            g = parse_smiles(line)
            perm = list(range(len(g.atoms)))
            rng.shuffle(perm)
            assert morgan_fingerprint(g) == morgan_fingerprint(permute(g, perm))

    def test_width_mismatch(self):
        a = morgan_fingerprint(parse_smiles("C"), width=1024)
        b = morgan_fingerprint(parse_smiles("C"), width=2048)
        with pytest.raises(WidthMismatch):
            tanimoto(a, b)
        c = morgan_fingerprint(parse_smiles("C"), radius=1, width=1024)
        with pytest.raises(WidthMismatch):
            tanimoto(a, c)

    def test_empty_vs_empty(self):
        empty = Fingerprint(0, 2, 2048)
        assert tanimoto(empty, empty) == 1.0

    def test_popcount_bounded(self):
        f = morgan_fingerprint(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"))
        assert 0 < f.popcount() <= f.width

    def test_similar_molecules_more_similar(self):
        ethanol = morgan_fingerprint(parse_smiles("CCO"))
        propanol = morgan_fingerprint(parse_smiles("CCCO"))
        benzene = morgan_fingerprint(parse_smiles("c1ccccc1"))
        assert tanimoto(ethanol, propanol) > tanimoto(ethanol, benzene)


class TestParseMolecule:
    def test_smiles(self):
        assert parse_molecule("CCO") is not None

    def test_codec_tokens(self):
        assert parse_molecule("[C][C][O]") is not None

    def test_garbage(self):
        assert parse_molecule("not a molecule") is None
        assert parse_molecule("") is None

    def test_bracket_smiles_fallback(self):
        # bracket-leading SMILES that is not a token string still parses
        assert parse_molecule("[NH4+]") is not None


class TestReport:
    def test_full_report(self):
        pairs = [("CCO", "OCC"), ("CC", "CC"), ("C(", "CC"), ("[C][C]", "CC")]
        report = evaluate_pairs(pairs)
        assert report.exact == 0.75
        assert report.validity == 0.75
        assert report.counts == {"evaluated": 4, "valid": 3, "invalid": 1,
                                 "fingerprint_pairs": 3}
        assert report.morgan_fts_mean == 1.0
        assert 0.0 <= report.bleu["score"] <= 1.0

    def test_empty(self):
        with pytest.raises(EmptyCorpus):
            evaluate_pairs([])

    def test_perfect_codec_output(self, corpus_lines):
        sample = corpus_lines[:30]
        pairs = []
        for line in sample:
            tokens = "".join(encode_selfies(parse_smiles(line)))
            pairs.append((tokens, line))
        report = evaluate_pairs(pairs)
        assert report.exact == 1.0
        assert report.validity == 1.0
        assert report.levenshtein_mean == 0.0
        assert report.bleu["score"] == 1.0
        assert report.morgan_fts_mean == 1.0
