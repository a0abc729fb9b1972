"""Maximal commuting classes, disjointness, and complete-set constructions.

A maximal commuting class on n qubits is an abelian subgroup of the
projective Pauli group minus the identity: n independent commuting
generators and their 2**n - 1 nonidentity products. A complete set is a
partition of all 4**n - 1 operators into 2**n + 1 mutually disjoint classes;
their joint eigenbases form a full family of mutually unbiased bases.

Complete sets are built here from two seed classes: on two qubits via the
three product classes determined by the commuting alignment of the seeds,
on three qubits via the nine-generator product table after aligning the
seed generators, and on four qubits by deterministic backtracking over the
canonical class family.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from mubforge.pauli import (
    PauliLike,
    PauliOperator,
    ProjectivePauli,
    commutes,
    independent,
    pauli_from_string,
)
from mubforge.search import (
    ClassRecord,
    all_maximal_classes,
    mask_of_keys,
    pauli_index,
)

# The standard two-qubit complete set used as the canonical fixture.
CANONICAL_D4_COMPLETE = (
    ("ZI", "IZ", "ZZ"),
    ("XI", "IX", "XX"),
    ("XZ", "ZY", "YX"),
    ("YI", "IY", "YY"),
    ("YZ", "ZX", "XY"),
)


def _as_projective(op: PauliLike) -> ProjectivePauli:
    return op.projective() if isinstance(op, PauliOperator) else op


@dataclass(frozen=True, eq=False)
class CommutingClass:
    """A maximal commuting class: n generators plus their full closure.

    Equality and hashing go by the projective element set, so the same class
    reached through different generator choices compares equal.
    """

    n: int
    generators: tuple[PauliOperator, ...]
    elements: frozenset[ProjectivePauli]

    @property
    def sorted_elements(self) -> tuple[ProjectivePauli, ...]:
        return tuple(sorted(self.elements, key=lambda p: p.key))

    @property
    def element_keys(self) -> frozenset[int]:
        return frozenset(p.key for p in self.elements)

    @property
    def mask(self) -> int:
        return mask_of_keys(p.key for p in self.elements)

    def letters(self) -> tuple[str, ...]:
        return tuple(p.to_string() for p in self.sorted_elements)

    def __contains__(self, op: PauliLike) -> bool:
        return _as_projective(op) in self.elements

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CommutingClass):
            return NotImplemented
        return self.n == other.n and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.n, self.elements))

    def __repr__(self) -> str:
        return f"CommutingClass({'+'.join(self.letters())})"


def class_from_generators(gens: Sequence[PauliOperator]) -> CommutingClass:
    """Close n independent commuting Hermitian generators into a class."""
    if not gens:
        raise ValueError("no generators given")
    n = gens[0].n
    if len(gens) != n:
        raise ValueError(f"expected {n} generators for n={n}, got {len(gens)}")
    for g in gens:
        if g.n != n:
            raise ValueError("generators act on different qubit counts")
        if not g.is_hermitian:
            raise ValueError(f"generator {g.to_string()} is not Hermitian")
        if g.is_projective_identity:
            raise ValueError("identity cannot generate a class")
    for a, b in combinations(gens, 2):
        if not commutes(a, b):
            raise ValueError(
                f"generators {a.to_string()} and {b.to_string()} anticommute"
            )
    if not independent(gens):
        raise ValueError("generators are dependent; closure would be degenerate")
    keys = {0}
    for g in gens:
        keys |= {k ^ g.key for k in keys}
    keys.discard(0)
    elements = frozenset(ProjectivePauli.from_key(n, k) for k in keys)
    return CommutingClass(n, tuple(gens), elements)


def class_from_elements(elements: Iterable[PauliLike]) -> CommutingClass:
    """Rebuild a class from its element set, choosing canonical generators.

    The generator chain picks the smallest element outside the running span
    at every step, which makes the result stable for certificates.
    """
    projs = sorted({_as_projective(p) for p in elements}, key=lambda p: p.key)
    if not projs:
        raise ValueError("empty element set")
    n = projs[0].n
    span = {0}
    gen_keys: list[int] = []
    for p in projs:
        if p.n != n:
            raise ValueError("elements act on different qubit counts")
        if p.key in span:
            continue
        gen_keys.append(p.key)
        span |= {k ^ p.key for k in span}
    cls = class_from_generators(
        [ProjectivePauli.from_key(n, k).hermitian() for k in gen_keys]
    )
    if cls.elements != frozenset(projs):
        raise ValueError("element set is not closed under products")
    return cls


def class_from_strings(letters: Iterable[str]) -> CommutingClass:
    return class_from_elements(pauli_from_string(s) for s in letters)


def _class_from_record(n: int, record: ClassRecord) -> CommutingClass:
    return class_from_elements(
        ProjectivePauli.from_key(n, k) for k in record.elements
    )


def disjoint(c1: CommutingClass, c2: CommutingClass) -> bool:
    """True iff the element sets do not intersect."""
    if c1.n != c2.n:
        raise ValueError("classes act on different qubit counts")
    return not (c1.mask & c2.mask)


def commuting_overlap(p: PauliLike, c: CommutingClass) -> frozenset[ProjectivePauli]:
    """The subset of class elements commuting with ``p``.

    For a maximal class in a disjoint position this has exactly
    2**(n-1) - 1 members.
    """
    proj = _as_projective(p)
    if proj.is_identity:
        raise ValueError("identity has no meaningful commuting overlap")
    if proj in c:
        raise ValueError("operator lies in the class; overlap is degenerate")
    return frozenset(e for e in c.elements if commutes(proj, e))


@dataclass(frozen=True)
class ClassSet:
    """An ordered collection of mutually disjoint maximal commuting classes."""

    n: int
    classes: tuple[CommutingClass, ...]
    complete: bool = False

    def __post_init__(self) -> None:
        for c in self.classes:
            if c.n != self.n:
                raise ValueError("class qubit count does not match the set")
        union = 0
        for c in self.classes:
            if union & c.mask:
                raise ValueError("classes are not pairwise disjoint")
            union |= c.mask
        if self.complete:
            expected = (1 << self.n) + 1
            if len(self.classes) != expected:
                raise ValueError(
                    f"complete set needs {expected} classes, got {len(self.classes)}"
                )
            if union != pauli_index(self.n).full_mask:
                raise ValueError("complete set does not cover all operators")

    def __iter__(self) -> Iterator[CommutingClass]:
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __getitem__(self, i: int) -> CommutingClass:
        return self.classes[i]

    @property
    def union_mask(self) -> int:
        union = 0
        for c in self.classes:
            union |= c.mask
        return union

    def operators(self) -> tuple[ProjectivePauli, ...]:
        ops: list[ProjectivePauli] = []
        for c in self.classes:
            ops.extend(c.elements)
        return tuple(sorted(ops, key=lambda p: p.key))

    def partition_key(self) -> frozenset[frozenset[int]]:
        """Order-insensitive identity of the partition, for comparisons."""
        return frozenset(c.element_keys for c in self.classes)


def _partner_map(c1: CommutingClass, c2: CommutingClass) -> dict[int, int]:
    """For two-qubit disjoint classes: the unique commuting partner in c2."""
    partners: dict[int, int] = {}
    for u in c1.sorted_elements:
        matches = [v for v in c2.sorted_elements if commutes(u, v)]
        if len(matches) != 1:
            raise ValueError(
                "classes do not pair one-to-one; are they disjoint and maximal?"
            )
        partners[u.key] = matches[0].key
    return partners


def _keys_class(n: int, keys: Iterable[int]) -> CommutingClass:
    return class_from_elements(ProjectivePauli.from_key(n, k) for k in keys)


def _complete_from_two_d4(c1: CommutingClass, c2: CommutingClass) -> ClassSet:
    e = c1.sorted_elements
    u1, v1 = e[0].key, e[1].key
    partners = _partner_map(c1, c2)
    u2, v2 = partners[u1], partners[v1]
    c3 = _keys_class(2, [u1 ^ v2, u2 ^ v1, u1 ^ v1 ^ u2 ^ v2])
    c4 = _keys_class(2, [u1 ^ u2, v1 ^ u2 ^ v2, u1 ^ v1 ^ v2])
    c5 = _keys_class(2, [u1 ^ v1 ^ u2, u1 ^ u2 ^ v2, v1 ^ v2])
    return ClassSet(2, (c1, c2, c3, c4, c5), complete=True)


def _ordered_bases(c: CommutingClass) -> list[tuple[int, int, int]]:
    keys = [p.key for p in c.sorted_elements]
    out = []
    for a in keys:
        for b in keys:
            if b == a:
                continue
            for d in keys:
                if d in (a, b, a ^ b):
                    continue
                out.append((a, b, d))
    return out


def _complete_from_two_d8(c1: CommutingClass, c2: CommutingClass) -> ClassSet:
    # Align generators (A1, A2, A3) of c1 and (B1, B2, B3) of c2 so that
    # B3 commutes with A1 and A2, B1 with A2 and A3, and B2 with A3 and A1.
    # An element outside a class commutes with exactly three of its seven
    # members, so such an alignment always exists; the first one in
    # canonical order wins.
    idx = pauli_index(3)
    comm = idx.comm

    def ck(a: int, b: int) -> bool:
        return bool((comm[a - 1] >> (b - 1)) & 1)

    for a1, a2, a3 in _ordered_bases(c1):
        for b1, b2, b3 in _ordered_bases(c2):
            if not (ck(a1, b3) and ck(a2, b3)):
                continue
            if not (ck(a2, b1) and ck(a3, b1)):
                continue
            if not (ck(a3, b2) and ck(a1, b2)):
                continue
            gens = [
                (a1 ^ b1, a2 ^ b2, a3 ^ b3),
                (a1 ^ b3, a2 ^ b2 ^ b3, a3 ^ b1 ^ b2),
                (a1 ^ b2, a3 ^ b2 ^ b3, a2 ^ b1 ^ b2 ^ b3),
                (a2 ^ b1, a1 ^ b2 ^ b3, a3 ^ b1 ^ b3),
                (a2 ^ b3, a1 ^ b1 ^ b3, a3 ^ b1 ^ b2 ^ b3),
                (a3 ^ b1, a2 ^ b1 ^ b2, a1 ^ b1 ^ b2 ^ b3),
                (a3 ^ b2, a1 ^ b1 ^ b2, a2 ^ b1 ^ b3),
            ]
            try:
                rest = [
                    class_from_generators(
                        [ProjectivePauli.from_key(3, k).hermitian() for k in g]
                    )
                    for g in gens
                ]
                return ClassSet(3, (c1, c2, *rest), complete=True)
            except ValueError:
                continue
    raise ValueError("generator alignment impossible; inputs are not a disjoint "
                     "pair of maximal classes")


def complete_set_from_two(c1: CommutingClass, c2: CommutingClass) -> ClassSet:
    """Extend two disjoint maximal classes to the full complete set.

    Supported on two and three qubits, where the remaining classes are
    products of the two seeds after aligning generators by their commuting
    pattern.
    """
    if c1.n != c2.n:
        raise ValueError("classes act on different qubit counts")
    if not disjoint(c1, c2):
        raise ValueError("seed classes are not disjoint")
    if c1.n == 2:
        return _complete_from_two_d4(c1, c2)
    if c1.n == 3:
        return _complete_from_two_d8(c1, c2)
    raise ValueError("complete_set_from_two supports 2 or 3 qubits")


def _partition_backtrack(n: int) -> ClassSet:
    records = all_maximal_classes(n)
    by_min: dict[int, list[ClassRecord]] = {}
    for rec in records:
        by_min.setdefault(rec.elements[0], []).append(rec)
    full = pauli_index(n).full_mask
    chosen: list[ClassRecord] = []

    def rec_fill(remaining: int) -> bool:
        if remaining == 0:
            return True
        low_key = (remaining & -remaining).bit_length()
        for rec in by_min.get(low_key, ()):
            if rec.mask & ~remaining:
                continue
            chosen.append(rec)
            if rec_fill(remaining & ~rec.mask):
                return True
            chosen.pop()
        return False

    if not rec_fill(full):
        raise RuntimeError(f"no complete partition found at n={n}")
    return ClassSet(
        n, tuple(_class_from_record(n, rec) for rec in chosen), complete=True
    )


@lru_cache(maxsize=None)
def canonical_complete_set(n: int) -> ClassSet:
    """A fixed, deterministic complete set for each supported qubit count.

    Two qubits: the standard listing in CANONICAL_D4_COMPLETE. Three qubits:
    the product construction seeded with the all-Z and all-X classes. Four
    qubits: the first partition found by backtracking over the canonical
    class family; nothing distinguishes this choice, so consumers must embed
    it rather than assume it.
    """
    if n == 2:
        return ClassSet(
            2,
            tuple(class_from_strings(group) for group in CANONICAL_D4_COMPLETE),
            complete=True,
        )
    if n == 3:
        z_class = class_from_generators(
            [pauli_from_string(s) for s in ("IIZ", "IZI", "ZII")]
        )
        x_class = class_from_generators(
            [pauli_from_string(s) for s in ("IIX", "IXI", "XII")]
        )
        return complete_set_from_two(z_class, x_class)
    if n == 4:
        return _partition_backtrack(4)
    raise ValueError("canonical complete sets cover 2, 3 or 4 qubits")


def all_nonidentity_mask(n: int) -> int:
    return pauli_index(n).full_mask


def classes_to_json(cs: ClassSet) -> dict:
    return {
        "n": cs.n,
        "classes": [class_to_json(c) for c in cs.classes],
        "complete": cs.complete,
    }


def class_to_json(c: CommutingClass) -> dict:
    return {
        "n": c.n,
        "generators": [g.to_string() for g in c.generators],
        "elements": list(c.letters()),
    }


def class_from_json(data: dict) -> CommutingClass:
    cls = class_from_generators(
        [pauli_from_string(s) for s in data["generators"]]
    )
    if list(cls.letters()) != list(data["elements"]):
        raise ValueError("class elements do not match the closure of generators")
    return cls


def classes_from_json(data: dict) -> ClassSet:
    return ClassSet(
        int(data["n"]),
        tuple(class_from_json(c) for c in data["classes"]),
        complete=bool(data["complete"]),
    )
