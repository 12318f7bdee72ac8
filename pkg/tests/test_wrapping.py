import random

import pytest

from biocorpus.errors import InvalidSpan
from biocorpus.wrapping import EntityAnnotation, split_sentences, wrap_document

MOLS = {"chebi:1": "[C][C][O]", "chebi:2": "[C][=C][Br]"}
PROTS = {"gene:1": "MKR", "gene:2": "MKVL", "gene:3": "AYW"}


def ann(text, surface, kind, entity_id, start=None):
    start = text.index(surface) if start is None else start
    return EntityAnnotation(start, start + len(surface), surface, kind, entity_id)


class TestSentenceSplit:
    def test_basic(self):
        text = "First one. Second one! Third?"
        spans = split_sentences(text)
        assert [text[a:b] for a, b in spans] == ["First one.", "Second one!", "Third?"]

    def test_no_boundary_inside_annotation(self):
        text = "Made by A. Corp today. Next sentence."
        crossing = EntityAnnotation(8, 15, "A. Corp", "gene", "gene:1")
        spans = split_sentences(text, [crossing])
        assert [text[a:b] for a, b in spans] == [
            "Made by A. Corp today.", "Next sentence."
        ]

    def test_terminator_runs(self):
        spans = split_sentences("Really?! Yes. Done")
        assert len(spans) == 3


class TestWrapRules:
    def test_molecule_replaced(self):
        text = "Aspirin inhibits COX."
        result = wrap_document(text, [ann(text, "Aspirin", "molecule", "chebi:1")],
                               MOLS, PROTS, seed=0)
        assert result.wrapped == ["<bom>[C][C][O]<eom> inhibits COX."]
        assert result.plain == []
        assert result.stats.molecules_replaced == 1

    def test_all_molecules_replaced(self):
        text = "Aspirin reacts with ethanol."
        annotations = [
            ann(text, "Aspirin", "molecule", "chebi:2"),
            ann(text, "ethanol", "molecule", "chebi:1"),
        ]
        result = wrap_document(text, annotations, MOLS, PROTS, seed=0)
        assert result.wrapped == [
            "<bom>[C][=C][Br]<eom> reacts with <bom>[C][C][O]<eom>."
        ]

    def test_gene_appended_not_replaced(self):
        text = "TP53 is mutated."
        result = wrap_document(text, [ann(text, "TP53", "gene", "gene:1")],
                               MOLS, PROTS, seed=1)
        assert result.wrapped == ["TP53 <bom>MKR<eom> is mutated."]
        assert result.stats.genes_appended == 1

    def test_exactly_one_gene_appended(self):
        text = "BRCA1 binds BRCA2 here."
        annotations = [
            ann(text, "BRCA1", "gene", "gene:1"),
            ann(text, "BRCA2", "gene", "gene:2"),
        ]
        for seed in range(25):
            result = wrap_document(text, annotations, MOLS, PROTS, seed=seed)
            line = result.wrapped[0]
            assert line.count("<bom>") == 1
            assert result.stats.genes_appended == 1

    def test_gene_choice_uniform(self):
        text = "BRCA1 binds BRCA2 here."
        annotations = [
            ann(text, "BRCA1", "gene", "gene:1"),
            ann(text, "BRCA2", "gene", "gene:2"),
        ]
        first = 0
        runs = 1000
        for seed in range(runs):
            result = wrap_document(text, annotations, MOLS, PROTS, seed=seed)
            if "BRCA1 <bom>" in result.wrapped[0]:
                first += 1
        assert abs(first / runs - 0.5) <= 0.05

    def test_unannotated_sentence_goes_plain(self):
        text = "Aspirin works. Nothing here."
        result = wrap_document(text, [ann(text, "Aspirin", "molecule", "chebi:1")],
                               MOLS, PROTS, seed=0)
        assert result.wrapped == ["<bom>[C][C][O]<eom> works."]
        assert result.plain == ["Nothing here."]

    def test_no_annotations_all_plain(self):
        text = "One. Two."
        result = wrap_document(text, [], MOLS, PROTS, seed=0)
        assert result.wrapped == []
        assert result.plain == ["One.", "Two."]

    def test_missing_ids_counted_and_untouched(self):
        text = "Unknownium binds GENEX."
        annotations = [
            ann(text, "Unknownium", "molecule", "chebi:404"),
            ann(text, "GENEX", "gene", "gene:404"),
        ]
        result = wrap_document(text, annotations, MOLS, PROTS, seed=0)
        assert result.plain == [text]
        assert result.stats.missing_molecule_ids == 1
        assert result.stats.missing_gene_ids == 1

    def test_determinism_per_doc(self):
        text = "BRCA1 binds BRCA2 here."
        annotations = [
            ann(text, "BRCA1", "gene", "gene:1"),
            ann(text, "BRCA2", "gene", "gene:2"),
        ]
        a = wrap_document(text, annotations, MOLS, PROTS, seed=9, doc_id="d1")
        b = wrap_document(text, annotations, MOLS, PROTS, seed=9, doc_id="d1")
        assert a.wrapped == b.wrapped


class TestConservation:
    def test_non_inserted_text_preserved(self):
        """Outside the inserted <bom>...<eom> segments, a wrapped sentence is
        the original with molecule mentions removed and gene names intact
        (plus the space that prefixes a gene's appended sequence)."""
        rng = random.Random(4)
        for trial in range(200):
            words = rng.sample([f"word{i}" for i in range(40)], rng.randint(4, 10))
            text = " ".join(words) + "."
            starts = []
            pos = 0
            for w in words:
                starts.append(pos)
                pos += len(w) + 1
            k_mol = rng.randrange(len(words))
            gene_slots = [i for i in range(len(words)) if abs(i - k_mol) > 1]
            k_gene = rng.choice(gene_slots) if gene_slots and rng.random() < 0.7 \
                else None
            annotations = [
                ann(text, words[k_mol], "molecule", rng.choice(list(MOLS)),
                    start=starts[k_mol])
            ]
            chosen = None
            if k_gene is not None:
                chosen = ann(text, words[k_gene], "gene", rng.choice(list(PROTS)),
                             start=starts[k_gene])
                annotations.append(chosen)
            annotations.sort(key=lambda a: a.start)
            result = wrap_document(text, annotations, MOLS, PROTS, seed=trial)
            lines = result.wrapped + result.plain
            assert len(lines) == 1
            reduced = _strip_insertions(lines[0])

            expected_parts = []
            cursor = 0
            for a in annotations:
                expected_parts.append(text[cursor : a.start])
                if a.kind == "molecule":
                    pass  # removed
                else:
                    expected_parts.append(a.surface)
                    if a is chosen:
                        expected_parts.append(" ")
                cursor = a.end
            expected_parts.append(text[cursor:])
            assert reduced == "".join(expected_parts)

    def test_validation_errors(self):
        text = "short."
        with pytest.raises(InvalidSpan):
            wrap_document(text, [EntityAnnotation(0, 99, "x", "gene", "g")],
                          MOLS, PROTS, seed=0)
        with pytest.raises(InvalidSpan):
            wrap_document(text, [EntityAnnotation(0, 5, "wrong", "gene", "g")],
                          MOLS, PROTS, seed=0)
        overlapping = [EntityAnnotation(0, 5, "short", "gene", "g"),
                       EntityAnnotation(3, 6, "rt.", "gene", "g")]
        with pytest.raises(InvalidSpan):
            wrap_document(text, overlapping, MOLS, PROTS, seed=0)


def _strip_insertions(line: str) -> str:
    out = []
    i = 0
    while i < len(line):
        start = line.find("<bom>", i)
        if start == -1:
            out.append(line[i:])
            break
        out.append(line[i:start])
        end = line.find("<eom>", start)
        assert end != -1
        i = end + len("<eom>")
    return "".join(out)


def test_gene_append_keeps_space_prefix():
    text = "TP53 works."
    result = wrap_document(text, [ann(text, "TP53", "gene", "gene:1")],
                           MOLS, PROTS, seed=0)
    assert result.wrapped[0].startswith("TP53 <bom>MKR<eom>")
