"""Built-in example sets exposed to the CLI under stable names.

These pin the exact operator listings of the published example sets this
library reproduces: the weakly unextendible two-qubit triple, the strongly
unextendible triples and five-class set in dimensions 4 and 8, the
alternate partitions giving two measurement contexts per operator, and the
explicit basis vectors of the dimension-4 strong set.
"""

from __future__ import annotations

import numpy as np

from mubforge.classes import ClassSet, class_from_strings

# Weakly unextendible triple on two qubits; its nine operators admit a
# second partition (ALTERNATE_TRIPLE_D4) giving two contexts per operator.
WEAK_TRIPLE_D4 = (
    ("YY", "IY", "YI"),
    ("YZ", "ZX", "XY"),
    ("XI", "IZ", "XZ"),
)

# The six operators left over by WEAK_TRIPLE_D4.
WEAK_TRIPLE_D4_LEFTOVER = ("IX", "XX", "YX", "ZI", "ZY", "ZZ")

ALTERNATE_TRIPLE_D4 = (
    ("YY", "ZX", "XZ"),
    ("IY", "XY", "XI"),
    ("YI", "YZ", "IZ"),
)

# Strongly unextendible triple on two qubits: no single unit vector is
# unbiased to all three eigenbases.
STRONG_TRIPLE_D4 = (
    ("YY", "IY", "YI"),
    ("YZ", "XX", "ZY"),
    ("ZI", "IZ", "ZZ"),
)

# Strongly unextendible set of five classes on three qubits.
STRONG_FIVE_D8 = (
    ("IIY", "YYI", "YYY", "IYY", "YII", "IYI", "YIY"),
    ("IXI", "XIX", "XXX", "IXX", "IIX", "XII", "XXI"),
    ("ZII", "IZZ", "ZZZ", "IIZ", "IZI", "ZIZ", "ZZI"),
    ("IZX", "YZI", "YIX", "ZYY", "XYZ", "ZXZ", "XXY"),
    ("XIZ", "XYI", "IYZ", "ZXX", "YZX", "YXY", "ZZY"),
)

# Second partition of the 35 operators in STRONG_FIVE_D8: class i keeps a
# commuting triple of class i and takes one operator from each other class.
ALTERNATE_FIVE_D8 = (
    ("IIY", "YYI", "YYY", "XXI", "ZZI", "XXY", "ZZY"),
    ("IXI", "XIX", "XXX", "ZIZ", "ZXZ", "YXY", "YIY"),
    ("ZII", "IZZ", "ZZZ", "ZYY", "ZXX", "IYY", "IXX"),
    ("IZX", "YZI", "YIX", "YZX", "YII", "IIX", "IZI"),
    ("XIZ", "XYI", "IYZ", "IYI", "XII", "IIZ", "XYZ"),
)

# Joint eigenbasis of the class {YY, IY, YI}, as published.
BASIS_LISTING_D4_YY = 0.5 * np.array(
    [
        [1, 1j, 1j, -1],
        [1, -1j, -1j, -1],
        [1, -1j, 1j, 1],
        [1, 1j, -1j, 1],
    ],
    dtype=complex,
)

# Joint eigenbasis of the class {YZ, XX, ZY}, as published.
BASIS_LISTING_D4_YZXXZY = 0.5 * np.array(
    [
        [1, -1j, -1j, 1],
        [1, -1j, 1j, -1],
        [1, 1j, -1j, -1],
        [1, 1j, 1j, 1],
    ],
    dtype=complex,
)


def _class_set(listing: tuple[tuple[str, ...], ...], n: int) -> ClassSet:
    return ClassSet(n, tuple(class_from_strings(group) for group in listing))


def weak_triple_d4() -> ClassSet:
    return _class_set(WEAK_TRIPLE_D4, 2)


def strong_triple_d4() -> ClassSet:
    return _class_set(STRONG_TRIPLE_D4, 2)


def strong_five_d8() -> ClassSet:
    return _class_set(STRONG_FIVE_D8, 3)


def alternate_triple_d4() -> ClassSet:
    return _class_set(ALTERNATE_TRIPLE_D4, 2)


def alternate_five_d8() -> ClassSet:
    return _class_set(ALTERNATE_FIVE_D8, 3)


NAMED_CLASS_SETS = {
    "paper-d4-weak": weak_triple_d4,
    "paper-d4-strong": strong_triple_d4,
    "paper-d8-strong": strong_five_d8,
}


def named_class_set(name: str) -> ClassSet:
    """Resolve a built-in source name used by the CLI."""
    try:
        return NAMED_CLASS_SETS[name]()
    except KeyError:
        raise ValueError(
            f"unknown named set {name!r}; choose from {sorted(NAMED_CLASS_SETS)}"
        ) from None
