"""Bit-mask search engine over the canonical Pauli enumeration.

Nonidentity projective operators are addressed by ``key - 1`` where
``key = (x << n) | z``, so a set of operators is one Python integer and a
subset test is a single AND. Maximal commuting classes are the Lagrangian
subgroups of the symplectic space; for n <= 4 there are only 15, 135 and
2295 of them, so they are enumerated once per qubit count and every
"which classes fit inside this operator set" query is a filter over that
cached family.

A direct depth-first enumeration restricted to an arbitrary universe is kept
alongside the cached filter as an independent cross-check route.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_SEARCH_QUBITS = 4

_LIMBS = 4  # 4 * 64 bits cover the 255 operators at n = 4


def _parity(v: int) -> int:
    return v.bit_count() & 1


@dataclass(frozen=True)
class ClassRecord:
    """One maximal commuting class as canonical element keys plus a bit mask."""

    elements: tuple[int, ...]
    mask: int


class PauliIndex:
    """Per-qubit-count tables: commutation adjacency and the class family."""

    __slots__ = ("n", "count", "full_mask", "comm")

    def __init__(self, n: int):
        if not 1 <= n <= MAX_SEARCH_QUBITS:
            raise ValueError(
                f"class searches support 1..{MAX_SEARCH_QUBITS} qubits, got {n}"
            )
        self.n = n
        self.count = (1 << (2 * n)) - 1
        self.full_mask = (1 << self.count) - 1
        nbits = (1 << n) - 1
        xs = [key >> n for key in range(1, self.count + 1)]
        zs = [key & nbits for key in range(1, self.count + 1)]
        comm = [0] * self.count
        for i in range(self.count):
            xi, zi = xs[i], zs[i]
            row = 1 << i
            for j in range(i + 1, self.count):
                if (_parity(xi & zs[j]) ^ _parity(xs[j] & zi)) == 0:
                    row |= 1 << j
                    comm[j] |= 1 << i
            comm[i] |= row
        self.comm = comm


@lru_cache(maxsize=None)
def pauli_index(n: int) -> PauliIndex:
    return PauliIndex(n)


def mask_of_keys(keys) -> int:
    mask = 0
    for k in keys:
        mask |= 1 << (k - 1)
    return mask


def keys_of_mask(mask: int) -> list[int]:
    keys = []
    while mask:
        low = mask & -mask
        keys.append(low.bit_length())
        mask ^= low
    return keys


def enumerate_classes_in(n: int, universe_mask: int) -> list[ClassRecord]:
    """All maximal commuting classes whose closure lies inside the universe.

    Depth-first search over canonical generator chains: each class is
    produced exactly once, from the chain whose k-th generator is the
    smallest class element outside the span of the previous ones. Candidate
    generators must commute with the current span, exceed the previous
    generator, and keep the whole closure inside the universe.
    """
    idx = pauli_index(n)
    comm = idx.comm
    depth_target = n
    results: list[ClassRecord] = []

    def extend(span_keys: tuple[int, ...], span_mask: int, cand: int, depth: int):
        if depth == depth_target:
            results.append(ClassRecord(tuple(sorted(span_keys)), span_mask))
            return
        rest = cand
        while rest:
            low = rest & -rest
            rest ^= low
            gk = low.bit_length()
            new_keys = [gk]
            ok = True
            for s in span_keys:
                t = gk ^ s
                # canonical chain: gk must open its coset; closure stays inside
                if t < gk or not (universe_mask >> (t - 1)) & 1:
                    ok = False
                    break
                new_keys.append(t)
            if not ok:
                continue
            new_mask = span_mask
            for t in new_keys:
                new_mask |= 1 << (t - 1)
            above = -1 << gk  # bits strictly greater than index gk - 1
            next_cand = cand & comm[gk - 1] & above & ~new_mask
            extend(span_keys + tuple(new_keys), new_mask, next_cand, depth + 1)

    rest = universe_mask
    while rest:
        low = rest & -rest
        rest ^= low
        gk = low.bit_length()
        above = -1 << gk
        extend((gk,), low, universe_mask & comm[gk - 1] & above, 1)
    results.sort(key=lambda r: r.elements)
    return results


@lru_cache(maxsize=None)
def all_maximal_classes(n: int) -> tuple[ClassRecord, ...]:
    """Every maximal commuting class on n qubits, canonically ordered."""
    return tuple(enumerate_classes_in(n, pauli_index(n).full_mask))


@lru_cache(maxsize=None)
def _class_mask_matrix(n: int) -> np.ndarray:
    records = all_maximal_classes(n)
    mat = np.zeros((len(records), _LIMBS), dtype=np.uint64)
    for i, rec in enumerate(records):
        m = rec.mask
        for limb in range(_LIMBS):
            mat[i, limb] = (m >> (64 * limb)) & 0xFFFFFFFFFFFFFFFF
    return mat


def _mask_limbs(mask: int) -> np.ndarray:
    return np.array(
        [(mask >> (64 * i)) & 0xFFFFFFFFFFFFFFFF for i in range(_LIMBS)],
        dtype=np.uint64,
    )


def classes_within_mask(n: int, universe_mask: int) -> list[ClassRecord]:
    """Maximal commuting classes entirely contained in the universe mask."""
    records = all_maximal_classes(n)
    hits = np.flatnonzero(
        ((_class_mask_matrix(n) & ~_mask_limbs(universe_mask)) == 0).all(axis=1)
    )
    return [records[i] for i in hits]


def count_classes_within(n: int, universe_mask: int) -> int:
    return int(
        ((_class_mask_matrix(n) & ~_mask_limbs(universe_mask)) == 0)
        .all(axis=1)
        .sum()
    )
