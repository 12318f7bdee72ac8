"""Corpus preparation and evaluation toolkit for molecule/protein/text models."""

__version__ = "0.1.0"

from .molgraph import (
    Atom,
    Bond,
    BondOrder,
    MolecularGraph,
    canonicalize,
    check_valence,
    parse_smiles,
    write_smiles,
)
from .selfies_codec import (
    decode_selfies,
    encode_selfies,
    random_selfies,
    selfies_alphabet,
)
from .tokenization import (
    Vocabulary,
    build_vocabulary,
    decode_ids,
    encode_ids,
    tokenize_fasta,
    tokenize_selfies_string,
    tokenize_text,
)

__all__ = [
    "Atom",
    "Bond",
    "BondOrder",
    "MolecularGraph",
    "Vocabulary",
    "build_vocabulary",
    "canonicalize",
    "check_valence",
    "decode_ids",
    "decode_selfies",
    "encode_ids",
    "encode_selfies",
    "parse_smiles",
    "random_selfies",
    "selfies_alphabet",
    "tokenize_fasta",
    "tokenize_selfies_string",
    "tokenize_text",
    "write_smiles",
]
