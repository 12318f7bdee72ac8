"""Robust molecular string codec over bracket tokens.

Every sequence drawn from the alphabet decodes to a valence-valid molecular
graph: bond orders are capped by the remaining capacity of both partners,
atoms arriving with no capacity are dropped, a chain whose head runs out of
capacity stops consuming, and branch/ring indices past the end of the
sequence are clamped.  There is deliberately no way for token ORDER to be
an error; only token text outside the alphabet is rejected.
"""

from __future__ import annotations

import random
from typing import NamedTuple, Optional, Sequence

from .errors import InvalidGraph, StrayCharacter, UnbalancedBracket, UnknownToken, UnsupportedFeature
from .molgraph import (
    Atom,
    Bond,
    BondOrder,
    MolecularGraph,
    canonicalize,
    check_valence,
    max_valence,
)

_ORGANIC = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")
_HALOGENS = frozenset(("F", "Cl", "Br", "I"))
_PREFIX = {1: "", 2: "=", 3: "#"}


class TokenInfo(NamedTuple):
    text: str
    kind: str            # "atom" | "branch" | "ring"
    order: int           # bond multiplicity carried by the prefix
    element: str = ""
    charge: int = 0
    hydrogens: int = 0
    capacity: int = 0    # bonds the atom can still make after its hydrogens
    size: int = 0        # branch/ring: how many index tokens follow


def _atom_text(order: int, element: str, charge: int, hydrogens: int) -> str:
    h = f"H{hydrogens}" if hydrogens else ""
    q = f"{charge:+d}" if charge else ""
    return f"[{_PREFIX[order]}{element}{h}{q}]"


def _build_token_table() -> dict[str, TokenInfo]:
    table: dict[str, TokenInfo] = {}
    for element in _ORGANIC:
        charges = (-1, 0) if element in _HALOGENS else (-1, 0, 1)
        for charge in charges:
            cap = max_valence(element, charge)
            for hydrogens in range(0, 5):
                avail = cap - hydrogens
                if hydrogens and avail < 1:
                    continue  # hydrogen-saturated atoms cannot join a chain
                for order in (1, 2, 3):
                    if order > avail and order > 1:
                        continue
                    text = _atom_text(order, element, charge, hydrogens)
                    table[text] = TokenInfo(
                        text, "atom", order, element, charge, hydrogens,
                        capacity=max(avail, 0),
                    )
    for size in (1, 2, 3):
        for order in (1, 2, 3):
            for kind in ("branch", "ring"):
                text = f"[{_PREFIX[order]}{kind.capitalize()}{size}]"
                table[text] = TokenInfo(text, kind, order, size=size)
    return table


TOKEN_TABLE: dict[str, TokenInfo] = _build_token_table()

# Overloaded index tokens: sixteen ordinary tokens double as base-16 digits
# after a branch or ring token.  Tokens outside this list read as zero.
INDEX_TOKENS = (
    "[C]", "[Ring1]", "[Ring2]", "[Branch1]", "[=Branch1]", "[#Branch1]",
    "[Branch2]", "[=Branch2]", "[#Branch2]", "[O]", "[N]", "[=N]", "[=C]",
    "[#C]", "[S]", "[P]",
)
INDEX_VALUES = {text: value for value, text in enumerate(INDEX_TOKENS)}

_SORTED_ALPHABET = tuple(sorted(TOKEN_TABLE))


def selfies_alphabet() -> frozenset[str]:
    """The closed token set the codec supports."""
    return frozenset(TOKEN_TABLE)


def token_info(text: str) -> TokenInfo:
    try:
        return TOKEN_TABLE[text]
    except KeyError:
        raise UnknownToken(f"token {text!r} is not in the alphabet") from None


def token_kind(text: str) -> str:
    return token_info(text).kind


def index_value(text: str) -> int:
    """Value of a token when consumed as a base-16 digit."""
    return INDEX_VALUES.get(text, 0)


def split_selfies(text: str) -> list[str]:
    """Split concatenated bracket tokens into token texts.

    Purely lexical: tokens need not belong to the alphabet.  Content outside
    brackets (including '.') raises StrayCharacter; a dangling bracket raises
    UnbalancedBracket.
    """
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "[":
            if ch == "]":
                raise UnbalancedBracket(f"']' without '[' at position {i}")
            raise StrayCharacter(f"character {ch!r} outside brackets at position {i}")
        end = text.find("]", i + 1)
        if end == -1:
            raise UnbalancedBracket(f"unclosed '[' at position {i}")
        inner = text[i + 1 : end]
        if "[" in inner:
            raise UnbalancedBracket(f"nested '[' inside token at position {i}")
        tokens.append(text[i : end + 1])
        i = end + 1
    return tokens


def random_selfies(seed: int, length: int) -> list[str]:
    """Uniform i.i.d. tokens from the alphabet; deterministic per seed."""
    rng = random.Random(seed)
    return rng.choices(_SORTED_ALPHABET, k=length)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def decode_selfies(tokens: Sequence[str]) -> MolecularGraph:
    """Derive a molecular graph from a token sequence.  Total over the
    alphabet: any token order yields a graph with an empty valence report.

    Unknown token text is the only error.
    """
    infos = [token_info(t) for t in tokens]

    atoms: list[tuple[str, int, int]] = []   # (element, charge, hydrogens)
    remaining: list[int] = []
    bond_map: dict[tuple[int, int], int] = {}
    rings: list[tuple[int, int, int]] = []   # (left, right, order)

    def read_index(i: int, hi: int, count: int) -> tuple[int, int]:
        value = 0
        for k in range(count):
            digit = index_value(infos[i + k].text) if i + k < hi else 0
            value = value * 16 + digit
        return value, min(i + count, hi)

    def derive(lo: int, hi: int, attach: Optional[int], budget: int) -> None:
        i = lo
        while i < hi:
            info = infos[i]
            i += 1
            if info.kind == "atom":
                if attach is None:
                    atoms.append((info.element, info.charge, info.hydrogens))
                    remaining.append(info.capacity)
                    attach = len(atoms) - 1
                    budget = info.capacity
                else:
                    order = min(info.order, budget, info.capacity)
                    if order == 0:
                        continue  # no capacity on the new atom: drop it
                    atoms.append((info.element, info.charge, info.hydrogens))
                    remaining.append(info.capacity - order)
                    idx = len(atoms) - 1
                    bond_map[(attach, idx)] = order
                    remaining[attach] -= order
                    attach = idx
                    budget = info.capacity - order
                if budget == 0:
                    return  # chain head exhausted: rest of this slice drops
            elif info.kind == "branch":
                if attach is None or budget <= 1:
                    continue  # cannot afford a branch plus continuation
                value, i = read_index(i, hi, info.size)
                body_end = min(i + value + 1, hi)
                reserve = min(budget - 1, info.order)
                derive(i, body_end, attach, reserve)
                i = body_end
                budget -= reserve
            else:  # ring
                if attach is None:
                    continue
                value, i = read_index(i, hi, info.size)
                left = max(0, attach - (value + 1))
                rings.append((left, attach, info.order))

    derive(0, len(infos), None, 0)

    # Rings form after derivation, from whatever capacity is left at both
    # endpoints; self-loops and saturated endpoints are discarded.
    for left, right, order in rings:
        if left == right:
            continue
        if remaining[left] < 1 or remaining[right] < 1:
            continue
        order = min(order, remaining[left], remaining[right])
        key = (min(left, right), max(left, right))
        if key in bond_map:
            bond_map[key] = min(bond_map[key] + order, 3)
        else:
            bond_map[key] = order
        remaining[left] -= order
        remaining[right] -= order

    graph_atoms = tuple(Atom(el, q, h) for el, q, h in atoms)
    graph_bonds = tuple(
        Bond(a, b, BondOrder.from_multiplicity(order))
        for (a, b), order in bond_map.items()
    )
    return MolecularGraph(graph_atoms, graph_bonds)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

_ORDER_TO_MULT = {BondOrder.SINGLE: 1, BondOrder.DOUBLE: 2, BondOrder.TRIPLE: 3}


def _index_digits(value: int) -> list[str]:
    if value >= 16 ** 3:
        raise UnsupportedFeature("branch or ring index exceeds three digits")
    digits = [INDEX_TOKENS[0]] if value == 0 else []
    while value:
        digits.append(INDEX_TOKENS[value % 16])
        value //= 16
    return digits[::-1]


def encode_selfies(graph: MolecularGraph) -> list[str]:
    """Encode a valence-valid connected graph as tokens.

    Traversal is depth-first from the canonical first atom with neighbors
    in canonical order, so isomorphic graphs encode identically and
    decode_selfies(encode_selfies(g)) reproduces g up to atom order.
    """
    if check_valence(graph):
        raise InvalidGraph("valence check failed")
    if not graph.atoms:
        return []
    if len(graph.components()) > 1:
        raise UnsupportedFeature("multi-fragment graphs have no token form")
    for bond in graph.bonds:
        if bond.order not in _ORDER_TO_MULT:
            raise UnsupportedFeature("kekulize aromatic bonds before encoding")

    graph = canonicalize(graph)
    adj = graph.neighbors()
    for nbrs in adj:
        nbrs.sort()
    order_of = {(b.a, b.b): _ORDER_TO_MULT[b.order] for b in graph.bonds}

    def atom_token(idx: int, incoming: int) -> str:
        atom = graph.atoms[idx]
        text = _atom_text(incoming, atom.element, atom.formal_charge,
                          atom.explicit_hydrogens)
        if text not in TOKEN_TABLE:
            raise UnsupportedFeature(f"atom has no token form: {text}")
        return text

    pos: dict[int, int] = {}
    tree_children: dict[int, list[int]] = {}
    back_edges: list[tuple[int, int]] = []

    def walk(v: int, parent: int) -> None:
        pos[v] = len(pos)
        for u, _ in adj[v]:
            if u == parent:
                continue
            if u in pos:
                if pos[u] < pos[v]:
                    back_edges.append((u, v))  # (earlier, later)
            else:
                tree_children.setdefault(v, []).append(u)
                walk(u, v)

    walk(0, -1)
    closes: dict[int, list[int]] = {}
    for u, v in back_edges:
        closes.setdefault(v, []).append(u)

    def emit(v: int, incoming: int) -> list[str]:
        toks = [atom_token(v, incoming)]
        for u in sorted(closes.get(v, ()), key=pos.__getitem__):
            mult = order_of[(min(u, v), max(u, v))]
            digits = _index_digits(pos[v] - pos[u] - 1)
            toks.append(f"[{_PREFIX[mult]}Ring{len(digits)}]")
            toks.extend(digits)
        children = tree_children.get(v, ())
        for k, u in enumerate(children):
            mult = order_of[(min(u, v), max(u, v))]
            sub = emit(u, mult)
            if k < len(children) - 1:
                digits = _index_digits(len(sub) - 1)
                toks.append(f"[{_PREFIX[mult]}Branch{len(digits)}]")
                toks.extend(digits)
                toks.extend(sub)
            else:
                toks.extend(sub)
        return toks

    return emit(0, 1)


def decode_to_smiles(tokens: Sequence[str], canonical: bool = True) -> str:
    """Decode tokens and serialize the result as SMILES."""
    from .molgraph import write_smiles

    return write_smiles(decode_selfies(tokens), canonical=canonical)


def encode_smiles(smiles: str) -> list[str]:
    """Parse SMILES and encode the graph as tokens."""
    from .molgraph import parse_smiles

    return encode_selfies(parse_smiles(smiles))
