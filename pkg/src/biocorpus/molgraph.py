"""Molecular graph model with SMILES parsing, writing, and canonicalization.

The graph is the shared semantic target of both the SMILES parser and the
molecular string codec: atoms carry element / charge / explicit hydrogens,
bonds carry an order, and a valence table decides which structures count as
chemically valid.  Aromatic (lowercase) SMILES input is kekulized at parse
time so the model only ever stores one representation of a ring system.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

from .errors import (
    EmptyInput,
    InvalidGraph,
    KekulizationError,
    SmilesSyntaxError,
    UnbalancedDelimiter,
    UnknownElement,
    UnsupportedFeature,
)

# Organic-subset elements may be written bare in SMILES; everything else
# needs brackets.  Lowercase variants of the aromatic subset are accepted
# and kekulized.
ORGANIC_SUBSET = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")
AROMATIC_ORGANIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}

ELEMENTS = frozenset(
    """H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co
    Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te
    I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir
    Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No
    Lr""".split()
)

_ATOMIC_NUMBER = {
    el: i + 1
    for i, el in enumerate(
        """H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe
        Co Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn
        Sb Te I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W
        Re Os Ir Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf
        Es Fm Md No Lr""".split()
    )
}

# Base valence table.  Multi-valence elements list every allowed total; an
# atom is valid if some entry is >= its used valence.
VALENCES = {
    "H": (1,),
    "B": (3,),
    "C": (4,),
    "N": (3,),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

# How formal charge shifts bond capacity, by periodic group: boron loses
# capacity when positive (and gains when negative), carbon loses either
# way, groups 15-17 track the charge sign directly (N+ binds 4, O- binds 1).
_CHARGE_MODE = {
    "B": "group13",
    "C": "group14",
    "N": "right",
    "P": "right",
    "O": "right",
    "S": "right",
    "F": "right",
    "Cl": "right",
    "Br": "right",
    "I": "right",
    "H": "group14",
}

# Elements outside the table (bracket atoms like [Fe+2]) get a permissive cap
# so parsing never rejects them; the codec refuses them separately.
DEFAULT_VALENCE = 8


def allowed_valences(element: str, charge: int = 0) -> tuple[int, ...]:
    """Charge-adjusted valence entries for an element, ascending."""
    base = VALENCES.get(element)
    if base is None:
        return (DEFAULT_VALENCE,)
    mode = _CHARGE_MODE[element]
    if mode == "group13":
        shift = -charge
    elif mode == "group14":
        shift = -abs(charge)
    else:
        shift = charge
    return tuple(sorted({max(0, v + shift) for v in base}))


def max_valence(element: str, charge: int = 0) -> int:
    return allowed_valences(element, charge)[-1]


class BondOrder(Enum):
    SINGLE = "single"
    DOUBLE = "double"
    TRIPLE = "triple"
    AROMATIC = "aromatic"

    @property
    def valence(self) -> float:
        return _BOND_VALENCE[self]

    @classmethod
    def from_multiplicity(cls, n: int) -> "BondOrder":
        return {1: cls.SINGLE, 2: cls.DOUBLE, 3: cls.TRIPLE}[n]


_BOND_VALENCE = {
    BondOrder.SINGLE: 1.0,
    BondOrder.DOUBLE: 2.0,
    BondOrder.TRIPLE: 3.0,
    BondOrder.AROMATIC: 1.5,
}

_BOND_SMILES = {BondOrder.SINGLE: "", BondOrder.DOUBLE: "=", BondOrder.TRIPLE: "#"}


@dataclass(frozen=True)
class Atom:
    element: str
    formal_charge: int = 0
    explicit_hydrogens: int = 0
    aromatic_flag: bool = False

    def __post_init__(self) -> None:
        if self.element not in ELEMENTS:
            raise UnknownElement(f"unknown element {self.element!r}")
        if abs(self.formal_charge) > 4:
            raise UnsupportedFeature(f"|charge| > 4 on {self.element}")
        if not 0 <= self.explicit_hydrogens <= 9:
            raise UnsupportedFeature("explicit hydrogen count outside 0..9")

    def key(self) -> tuple:
        """Structural identity, ignoring notation provenance flags."""
        return (self.element, self.formal_charge, self.explicit_hydrogens)


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: BondOrder = BondOrder.SINGLE

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise InvalidGraph("bond endpoints must be distinct")
        if self.a > self.b:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass(frozen=True)
class MolecularGraph:
    atoms: tuple[Atom, ...] = ()
    bonds: tuple[Bond, ...] = ()
    stereo_stripped: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        n = len(self.atoms)
        seen = set()
        for bond in self.bonds:
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise InvalidGraph("bond references missing atom")
            if (bond.a, bond.b) in seen:
                raise InvalidGraph(f"duplicate bond {bond.a}-{bond.b}")
            seen.add((bond.a, bond.b))

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self) -> list[list[tuple[int, BondOrder]]]:
        adj: list[list[tuple[int, BondOrder]]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.a].append((bond.b, bond.order))
            adj[bond.b].append((bond.a, bond.order))
        return adj

    def components(self) -> list[list[int]]:
        adj = self.neighbors()
        seen = [False] * len(self.atoms)
        out = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for u, _ in adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            out.append(sorted(comp))
        return out


class ValenceViolation(NamedTuple):
    atom_index: int
    used: float
    allowed: float


def check_valence(graph: MolecularGraph) -> list[ValenceViolation]:
    """Return one violation per atom whose used valence exceeds the table.

    Used valence is the bond-order sum plus explicit hydrogens; the allowed
    value is the largest charge-adjusted table entry.  Total function: never
    raises.
    """
    used = [float(a.explicit_hydrogens) for a in graph.atoms]
    for bond in graph.bonds:
        used[bond.a] += bond.order.valence
        used[bond.b] += bond.order.valence
    violations = []
    for i, atom in enumerate(graph.atoms):
        cap = max_valence(atom.element, atom.formal_charge)
        if used[i] > cap:
            violations.append(ValenceViolation(i, used[i], float(cap)))
    return violations


# ---------------------------------------------------------------------------
# SMILES parsing
# ---------------------------------------------------------------------------

_BOND_CHARS = {"-": BondOrder.SINGLE, "=": BondOrder.DOUBLE, "#": BondOrder.TRIPLE,
               ":": BondOrder.AROMATIC}


def _parse_bracket_atom(text: str, start: int) -> tuple[Atom, bool, int]:
    """Parse a [...] atom starting at text[start] == '['.

    Returns (atom, stereo_seen, index past the closing bracket).
    """
    end = text.find("]", start + 1)
    if end == -1:
        raise UnbalancedDelimiter("missing ']' for bracket atom")
    body = text[start + 1 : end]
    if not body:
        raise SmilesSyntaxError("empty bracket atom")
    i = 0
    if body[i].isdigit():
        raise UnsupportedFeature(f"isotope labels not supported: [{body}]")
    aromatic = False
    if body[i].islower():
        if body[i] in AROMATIC_ORGANIC:
            element = AROMATIC_ORGANIC[body[i]]
            aromatic = True
            i += 1
        else:
            raise UnknownElement(f"unknown aromatic symbol in [{body}]")
    else:
        if i + 1 < len(body) and body[i : i + 2] in ELEMENTS and body[i + 1].islower():
            element = body[i : i + 2]
            i += 2
        elif body[i] in ELEMENTS:
            element = body[i]
            i += 1
        else:
            raise UnknownElement(f"unknown element in [{body}]")
    stereo = False
    while i < len(body) and body[i] == "@":
        stereo = True
        i += 1
    hydrogens = 0
    if i < len(body) and body[i] == "H":
        i += 1
        digits = ""
        while i < len(body) and body[i].isdigit():
            digits += body[i]
            i += 1
        hydrogens = int(digits) if digits else 1
    charge = 0
    if i < len(body) and body[i] in "+-":
        sign = 1 if body[i] == "+" else -1
        i += 1
        if i < len(body) and body[i].isdigit():
            digits = ""
            while i < len(body) and body[i].isdigit():
                digits += body[i]
                i += 1
            charge = sign * int(digits)
        else:
            charge = sign
            while i < len(body) and body[i] in "+-":
                if (body[i] == "+") != (sign > 0):
                    raise SmilesSyntaxError(f"mixed charge signs in [{body}]")
                charge += sign
                i += 1
    if i != len(body):
        raise SmilesSyntaxError(f"trailing characters in [{body}]")
    atom = Atom(element, charge, hydrogens, aromatic)
    return atom, stereo, end + 1


class _ParserState:
    """Mutable state threaded through one parse call."""

    def __init__(self) -> None:
        self.atoms: list[Atom] = []
        self.bonds: dict[tuple[int, int], Optional[BondOrder]] = {}
        self.aromatic_atoms: set[int] = set()
        self.stereo = False

    def add_bond(self, a: int, b: int, order: Optional[BondOrder]) -> None:
        key = (min(a, b), max(a, b))
        if key in self.bonds:
            raise SmilesSyntaxError(f"duplicate bond between atoms {a} and {b}")
        self.bonds[key] = order


def parse_smiles(text: str) -> MolecularGraph:
    """Parse SMILES text into a molecular graph.

    Supports the organic subset bare, arbitrary elements in brackets with
    charge and explicit hydrogen counts, branches, ring closures (including
    %nn), dot-separated fragments, and lowercase aromatic rings (kekulized
    here).  Stereo markers are accepted and discarded; the result carries
    ``stereo_stripped=True`` when that happened.  Two-letter atoms (Cl, Br)
    are always read as single atoms.
    """
    if not text or not text.strip():
        raise EmptyInput("empty SMILES input")
    text = text.strip()

    st = _ParserState()
    prev: Optional[int] = None
    pending: Optional[BondOrder] = None
    pending_explicit = False
    branch_stack: list[int] = []
    ring_open: dict[int, tuple[int, Optional[BondOrder]]] = {}

    def place_atom(atom: Atom) -> None:
        nonlocal prev, pending, pending_explicit
        idx = len(st.atoms)
        st.atoms.append(atom)
        if atom.aromatic_flag:
            st.aromatic_atoms.add(idx)
        if prev is not None:
            st.add_bond(prev, idx, pending if pending_explicit else None)
        elif pending_explicit:
            raise SmilesSyntaxError("bond symbol with no preceding atom")
        prev = idx
        pending = None
        pending_explicit = False

    def close_ring(num: int) -> None:
        nonlocal pending, pending_explicit
        if prev is None:
            raise SmilesSyntaxError("ring closure before any atom")
        if num in ring_open:
            other, open_order = ring_open.pop(num)
            if other == prev:
                raise SmilesSyntaxError(f"ring {num} closes on its own atom")
            close_order = pending if pending_explicit else None
            if open_order is not None and close_order is not None \
                    and open_order != close_order:
                raise SmilesSyntaxError(f"conflicting bond orders on ring {num}")
            st.add_bond(other, prev, open_order if open_order is not None else close_order)
        else:
            ring_open[num] = (prev, pending if pending_explicit else None)
        pending = None
        pending_explicit = False

    i = 0
    while i < len(text):
        ch = text[i]
        if ch in _BOND_CHARS:
            if pending_explicit:
                raise SmilesSyntaxError("two bond symbols in a row")
            pending = _BOND_CHARS[ch]
            pending_explicit = True
            i += 1
        elif ch in "/\\":
            if pending_explicit:
                raise SmilesSyntaxError("two bond symbols in a row")
            pending = BondOrder.SINGLE
            pending_explicit = True
            st.stereo = True
            i += 1
        elif ch == "(":
            if prev is None:
                raise SmilesSyntaxError("branch before any atom")
            if pending_explicit:
                raise SmilesSyntaxError("bond symbol before '('")
            branch_stack.append(prev)
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise UnbalancedDelimiter("')' without matching '('")
            if pending_explicit:
                raise SmilesSyntaxError("dangling bond before ')'")
            prev = branch_stack.pop()
            i += 1
        elif ch == ".":
            if pending_explicit:
                raise SmilesSyntaxError("bond symbol before '.'")
            if branch_stack:
                raise SmilesSyntaxError("'.' inside a branch")
            prev = None
            i += 1
        elif ch == "[":
            atom, stereo, i = _parse_bracket_atom(text, i)
            st.stereo = st.stereo or stereo
            place_atom(atom)
        elif ch == "%":
            if i + 2 >= len(text) or not text[i + 1 : i + 3].isdigit():
                raise SmilesSyntaxError("'%' must be followed by two digits")
            close_ring(int(text[i + 1 : i + 3]))
            i += 3
        elif ch.isdigit():
            close_ring(int(ch))
            i += 1
        elif ch.isupper():
            if text[i : i + 2] in ("Cl", "Br"):
                place_atom(Atom(text[i : i + 2]))
                i += 2
            elif ch in ORGANIC_SUBSET:
                place_atom(Atom(ch))
                i += 1
            else:
                raise UnknownElement(f"element {ch!r} needs brackets")
        elif ch in AROMATIC_ORGANIC:
            place_atom(Atom(AROMATIC_ORGANIC[ch], aromatic_flag=True))
            i += 1
        else:
            raise SmilesSyntaxError(f"unrecognized character {ch!r} at position {i}")

    if branch_stack:
        raise UnbalancedDelimiter("unclosed '('")
    if ring_open:
        raise UnbalancedDelimiter(f"unclosed ring closure {sorted(ring_open)}")
    if pending_explicit:
        raise SmilesSyntaxError("dangling bond symbol at end of input")

    bonds = _resolve_bond_orders(st)
    return MolecularGraph(tuple(st.atoms), tuple(bonds), stereo_stripped=st.stereo)


def _resolve_bond_orders(st: _ParserState) -> list[Bond]:
    """Fix default bond orders and kekulize aromatic systems."""
    aromatic_bonds = []
    resolved: dict[tuple[int, int], BondOrder] = {}
    for (a, b), order in st.bonds.items():
        if order is BondOrder.AROMATIC:
            st.aromatic_atoms.update((a, b))
            aromatic_bonds.append((a, b))
        elif order is None:
            if a in st.aromatic_atoms and b in st.aromatic_atoms:
                aromatic_bonds.append((a, b))
            else:
                resolved[(a, b)] = BondOrder.SINGLE
        else:
            resolved[(a, b)] = order
    if st.aromatic_atoms:
        for (a, b), order in _kekulize(st, aromatic_bonds, resolved).items():
            resolved[(a, b)] = order
    return [Bond(a, b, order) for (a, b), order in resolved.items()]


# Valence electron counts used for the kekulization electron bookkeeping.
_AROMATIC_ELECTRONS = {"B": 3, "C": 4, "N": 5, "O": 6, "P": 5, "S": 6}


def _kekulize(
    st: _ParserState,
    aromatic_bonds: list[tuple[int, int]],
    resolved: dict[tuple[int, int], BondOrder],
) -> dict[tuple[int, int], BondOrder]:
    """Assign single/double orders to aromatic bonds via perfect matching.

    An aromatic atom needs a double bond exactly when it has an odd number
    of free valence electrons after subtracting charge, explicit bonds, and
    hydrogens (a bare aromatic carbon with two ring bonds gets one implied
    hydrogen).  Those atoms form the pi subgraph; a perfect matching on it
    yields the double bonds, anything unmatched fails the parse.
    """
    used: dict[int, float] = {}
    degree: dict[int, int] = {}
    for idx in st.aromatic_atoms:
        used[idx] = float(st.atoms[idx].explicit_hydrogens)
        degree[idx] = 0
    for a, b in aromatic_bonds:
        for idx in (a, b):
            used[idx] += 1.0
            degree[idx] += 1
    for (a, b), order in resolved.items():
        for idx in (a, b):
            if idx in used:
                used[idx] += order.valence
                degree[idx] += 1

    pi_nodes = set()
    for idx in st.aromatic_atoms:
        atom = st.atoms[idx]
        electrons = _AROMATIC_ELECTRONS.get(atom.element)
        if electrons is None:
            raise KekulizationError(f"cannot kekulize aromatic {atom.element}")
        u = used[idx]
        if (atom.element == "C" and atom.formal_charge == 0
                and atom.explicit_hydrogens == 0 and degree[idx] == 2):
            u += 1.0  # implied ring hydrogen
        free = electrons - atom.formal_charge - u
        if free % 2 != 0:
            pi_nodes.add(idx)

    adj: dict[int, list[int]] = {idx: [] for idx in pi_nodes}
    for a, b in aromatic_bonds:
        if a in pi_nodes and b in pi_nodes:
            adj[a].append(b)
            adj[b].append(a)

    matched: dict[int, int] = {}

    def try_match(v: int, visited: set[int]) -> bool:
        for u in adj[v]:
            if u in visited:
                continue
            visited.add(u)
            if u not in matched or try_match(matched[u], visited):
                matched[u] = v
                matched[v] = u
                return True
        return False

    for v in sorted(pi_nodes, key=lambda i: (len(adj[i]), i)):
        if v not in matched:
            if not try_match(v, {v}):
                raise KekulizationError("no alternating bond assignment exists")

    orders = {}
    for a, b in aromatic_bonds:
        if matched.get(a) == b:
            orders[(a, b)] = BondOrder.DOUBLE
        else:
            orders[(a, b)] = BondOrder.SINGLE
    return orders


# ---------------------------------------------------------------------------
# Canonical ordering
# ---------------------------------------------------------------------------

_ORDER_RANK = {BondOrder.SINGLE: 1, BondOrder.AROMATIC: 2, BondOrder.DOUBLE: 3,
               BondOrder.TRIPLE: 4}


def _initial_invariants(graph: MolecularGraph,
                        adj: list[list[tuple[int, BondOrder]]]) -> list[tuple]:
    out = []
    for i, atom in enumerate(graph.atoms):
        orders = tuple(sorted(_ORDER_RANK[o] for _, o in adj[i]))
        out.append((
            _ATOMIC_NUMBER.get(atom.element, 200),
            atom.formal_charge,
            atom.explicit_hydrogens,
            len(adj[i]),
            orders,
        ))
    return out


def _dense_ranks(keys: list) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(ranks: list[int], adj: list[list[tuple[int, BondOrder]]]) -> list[int]:
    """Iterate neighborhood signatures until the partition stops splitting."""
    n = len(ranks)
    while True:
        keys = [
            (ranks[i], tuple(sorted((_ORDER_RANK[o], ranks[u]) for u, o in adj[i])))
            for i in range(n)
        ]
        new = _dense_ranks(keys)
        if new == ranks:
            return ranks
        ranks = new


def _signature(graph: MolecularGraph, ranks: list[int],
               adj: list[list[tuple[int, BondOrder]]]) -> tuple:
    pos = sorted(range(len(ranks)), key=ranks.__getitem__)
    atoms = tuple(graph.atoms[i].key() for i in pos)
    edges = []
    for bond in graph.bonds:
        a, b = sorted((ranks[bond.a], ranks[bond.b]))
        edges.append((a, b, _ORDER_RANK[bond.order]))
    return (atoms, tuple(sorted(edges)))


def canonical_ranks(graph: MolecularGraph) -> list[int]:
    """Permutation-invariant total order of atoms (0 = canonical first atom).

    Morgan-style iterative refinement from (element, charge, hydrogens,
    degree, bond orders); remaining ties are broken by individualizing
    candidates of the lowest tied cell and keeping the lexicographically
    smallest resulting graph signature.  Candidates that equal the running
    best expose an automorphism, and atoms in an already-explored orbit are
    skipped, so highly symmetric inputs (rings, cages) stay tractable.
    """
    n = len(graph.atoms)
    if n == 0:
        return []
    adj = graph.neighbors()
    ranks = _refine(_dense_ranks(_initial_invariants(graph, adj)), adj)

    def search(ranks: list[int]) -> tuple[tuple, list[int]]:
        counts: dict[int, int] = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        tied = sorted(r for r, c in counts.items() if c > 1)
        if not tied:
            return _signature(graph, ranks, adj), ranks
        cell = tied[0]

        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        best: Optional[tuple[tuple, list[int]]] = None
        explored: list[int] = []
        for i in range(n):
            if ranks[i] != cell:
                continue
            if any(find(i) == find(j) for j in explored):
                continue
            explored.append(i)
            keys = [(r, 0) if j != i else (r, -1) for j, r in enumerate(ranks)]
            cand = search(_refine(_dense_ranks(keys), adj))
            if best is None or cand[0] < best[0]:
                best = cand
            elif cand[0] == best[0]:
                # Equal signatures mean the position-wise atom map between
                # the two orders is a graph automorphism: merge orbits.
                by_rank_best = sorted(range(n), key=best[1].__getitem__)
                by_rank_cand = sorted(range(n), key=cand[1].__getitem__)
                for a, b in zip(by_rank_best, by_rank_cand):
                    union(a, b)
        assert best is not None
        return best

    return search(ranks)[1]


def canonicalize(graph: MolecularGraph) -> MolecularGraph:
    """Reorder atoms into canonical rank order.

    Isomorphic graphs (same elements/charges/hydrogens and bonds, in any
    input order) come out identical; the function is idempotent.
    """
    if check_valence(graph):
        raise InvalidGraph("valence check failed")
    ranks = canonical_ranks(graph)
    pos = sorted(range(len(ranks)), key=ranks.__getitem__)
    atoms = tuple(graph.atoms[i] for i in pos)
    bonds = tuple(
        sorted(
            (Bond(ranks[b.a], ranks[b.b], b.order) for b in graph.bonds),
            key=lambda b: (b.a, b.b),
        )
    )
    return MolecularGraph(atoms, bonds, stereo_stripped=graph.stereo_stripped)


# ---------------------------------------------------------------------------
# SMILES writing
# ---------------------------------------------------------------------------


def _atom_token(atom: Atom) -> str:
    plain = (
        atom.element in ORGANIC_SUBSET
        and atom.formal_charge == 0
        and atom.explicit_hydrogens == 0
    )
    if plain:
        return atom.element
    h = ""
    if atom.explicit_hydrogens == 1:
        h = "H"
    elif atom.explicit_hydrogens > 1:
        h = f"H{atom.explicit_hydrogens}"
    q = ""
    if atom.formal_charge == 1:
        q = "+"
    elif atom.formal_charge == -1:
        q = "-"
    elif atom.formal_charge > 1:
        q = f"+{atom.formal_charge}"
    elif atom.formal_charge < -1:
        q = f"-{-atom.formal_charge}"
    return f"[{atom.element}{h}{q}]"


def write_smiles(graph: MolecularGraph, canonical: bool = True) -> str:
    """Serialize a graph to SMILES.

    With ``canonical=True`` the graph is canonicalized first, so isomorphic
    graphs produce byte-identical output.  Aromatic-order bonds are refused:
    the writer emits kekulized structures only.
    """
    if check_valence(graph):
        raise InvalidGraph("valence check failed")
    for bond in graph.bonds:
        if bond.order is BondOrder.AROMATIC:
            raise InvalidGraph("aromatic bonds must be kekulized before writing")
    if canonical:
        graph = canonicalize(graph)
    if not graph.atoms:
        return ""

    adj = graph.neighbors()
    for nbrs in adj:
        nbrs.sort()
    bond_order = {(b.a, b.b): b.order for b in graph.bonds}

    # Ring-closure digits are assigned when a back edge opens and reused
    # once it closes.
    ring_digits: dict[tuple[int, int], int] = {}
    free_digits = list(range(99, 0, -1))

    def fragment(root: int) -> str:
        # Pass 1: DFS preorder with neighbors in ascending index order,
        # classifying tree edges vs ring-closure (back) edges.
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
                        back_edges.append((min(v, u), max(v, u)))
                else:
                    tree_children.setdefault(v, []).append(u)
                    walk(u, v)

        walk(root, -1)

        opens: dict[int, list[tuple[int, int]]] = {}
        closes: dict[int, list[tuple[int, int]]] = {}
        for a, b in back_edges:
            first, second = (a, b) if pos[a] < pos[b] else (b, a)
            opens.setdefault(first, []).append((a, b))
            closes.setdefault(second, []).append((a, b))

        def ring_token(edge: tuple[int, int], opening: bool) -> str:
            if opening:
                ring_digits[edge] = free_digits.pop()
                sym = _BOND_SMILES[bond_order[edge]]
            else:
                sym = ""
            digit = ring_digits[edge]
            if not opening:
                del ring_digits[edge]
                free_digits.append(digit)
            return f"{sym}{digit}" if digit < 10 else f"{sym}%{digit:02d}"

        # Pass 2: emit in the same preorder.
        def emit(v: int, incoming: str) -> str:
            parts = [incoming, _atom_token(graph.atoms[v])]
            for edge in opens.get(v, ()):
                parts.append(ring_token(edge, opening=True))
            for edge in closes.get(v, ()):
                parts.append(ring_token(edge, opening=False))
            children = tree_children.get(v, ())
            for k, u in enumerate(children):
                key = (min(v, u), max(v, u))
                sub = emit(u, _BOND_SMILES[bond_order[key]])
                parts.append(f"({sub})" if k < len(children) - 1 else sub)
            return "".join(parts)

        return emit(root, "")

    return ".".join(fragment(comp[0]) for comp in graph.components())


def permute(graph: MolecularGraph, perm: Sequence[int]) -> MolecularGraph:
    """Relabel atoms so new index perm[i] holds old atom i."""
    atoms: list[Optional[Atom]] = [None] * len(graph.atoms)
    for old, new in enumerate(perm):
        atoms[new] = graph.atoms[old]
    bonds = tuple(Bond(perm[b.a], perm[b.b], b.order) for b in graph.bonds)
    return MolecularGraph(tuple(atoms), bonds, stereo_stripped=graph.stereo_stripped)
