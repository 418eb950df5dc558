"""CM-type combinatorics for M = L(sqrt(-d)).

The twelve complex embeddings of M come in conjugate pairs over the six
real embeddings of L; a CM type picks one embedding from each pair, so it
is a vector of six signs indexed by the k-labels.  This module enumerates
the 64 types, filters the Weil-compatible ones (exactly three plus signs),
computes Galois orbits of sign assignments under the label 6-cycle, and
computes stabilizers inside Gal(M/Q) together with the reflex-equality
flag.

For d in {3, 7} the field M is the 42nd cyclotomic field and Gal(M/Q) is
(Z/42)^x; a unit u acts on the label of an embedding by multiplication and
on its sign through the quadratic character mod d.  For every other d the
group is the product of the label cycle Z/6 with the conjugation Z/2
acting factorwise.  Both presentations realize the same twelve
transformations of the sign data, so orbit structures agree; only the
naming of group elements differs.
"""

import math
from dataclasses import dataclass
from itertools import product
from typing import Tuple, Union

from .cmfield import _is_squarefree
from .field import EMBEDDING_LABELS, GALOIS_CYCLE

CYCLOTOMIC_D = (3, 7)

_LABEL_INDEX = {k: i for i, k in enumerate(EMBEDDING_LABELS)}
_CYCLE_POSITION = {k: p for p, k in enumerate(GALOIS_CYCLE)}
_UNITS_42 = tuple(u for u in range(1, 42) if math.gcd(u, 42) == 1)


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class CMType:
    """Six sign bits in k-label order; bit set means the + embedding is in."""

    selection: Tuple[bool, ...]
    d: int

    def __post_init__(self):
        sel = tuple(bool(b) for b in self.selection)
        if len(sel) != 6:
            raise ValueError("selection must have six entries")
        object.__setattr__(self, "selection", sel)
        if not _is_squarefree(self.d):
            raise ValueError(f"d must be a squarefree positive integer, got {self.d}")

    def bitmask(self) -> int:
        return sum(1 << i for i, b in enumerate(self.selection) if b)

    @classmethod
    def from_bitmask(cls, mask, d):
        if not 0 <= mask < 64:
            raise ValueError(f"mask out of range: {mask}")
        return cls(tuple(bool(mask >> i & 1) for i in range(6)), d)

    def conjugate(self):
        return CMType(tuple(not b for b in self.selection), self.d)

    def plus_labels(self):
        return tuple(k for k, b in zip(EMBEDDING_LABELS, self.selection) if b)

    def plus_count(self):
        return sum(self.selection)

    def __str__(self):
        return "".join("+" if b else "-" for b in self.selection)


@dataclass(frozen=True)
class SignAssignment:
    """A 3-element set of k-labels carrying the + eigenvalue."""

    plus: Tuple[int, ...]

    def __post_init__(self):
        plus = tuple(sorted(set(self.plus)))
        if len(plus) != 3 or any(k not in _LABEL_INDEX for k in plus):
            raise ValueError(f"need three distinct k-labels, got {self.plus}")
        object.__setattr__(self, "plus", plus)

    @property
    def minus(self) -> Tuple[int, ...]:
        return tuple(k for k in EMBEDDING_LABELS if k not in self.plus)

    def __str__(self):
        return "{%s | %s}" % (",".join(map(str, self.plus)),
                              ",".join(map(str, self.minus)))


@dataclass(frozen=True)
class OrbitReport:
    """Orbit partition under a group action: (representative, size) pairs."""

    orbits: Tuple[Tuple[object, int], ...]
    action: str

    def sizes(self):
        return tuple(size for _, size in self.orbits)

    def total(self):
        return sum(self.sizes())


# ---------------------------------------------------------------------------
# Enumeration and the Weil filter

def enumerate_cm_types(d):
    """All 64 CM types of L(sqrt(-d)) in bitmask order."""
    return [CMType.from_bitmask(m, d) for m in range(64)]


def weil_compatible_filter(types):
    return [t for t in types if t.plus_count() == 3]


def cm_type_from_sign_assignment(sa, d=3):
    return CMType(tuple(k in sa.plus for k in EMBEDDING_LABELS), d)


def sign_assignment_from_cm_type(t):
    if t.plus_count() != 3:
        raise ValueError(f"not Weil-compatible: {t}")
    return SignAssignment(t.plus_labels())


# ---------------------------------------------------------------------------
# Galois actions

def shift_assignment(sa, j):
    """Advance every label of sa by j steps along the Galois 6-cycle."""
    moved = tuple(GALOIS_CYCLE[(_CYCLE_POSITION[k] + j) % 6] for k in sa.plus)
    return SignAssignment(moved)


def _apply_pair(t, j, e):
    new = [False] * 6
    for k, b in zip(EMBEDDING_LABELS, t.selection):
        p = (_CYCLE_POSITION[k] + j) % 6
        new[_LABEL_INDEX[GALOIS_CYCLE[p]]] = b ^ bool(e)
    return CMType(tuple(new), t.d)


def unit_to_pair(u, d):
    """The (cycle shift, sign flip) form of a unit of (Z/42)^x for d in {3,7}."""
    if d not in CYCLOTOMIC_D:
        raise ValueError(f"units of (Z/42)^x only act for d in {CYCLOTOMIC_D}")
    if math.gcd(u, 42) != 1:
        raise ValueError(f"{u} is not a unit mod 42")
    u %= 42
    k = u if u in _CYCLE_POSITION else 42 - u
    return _CYCLE_POSITION[k], 0 if _legendre(u, d) == 1 else 1


def apply_galois(t, g):
    """Act on a CM type by a Galois element.

    For d in {3, 7}, g is a unit mod 42; otherwise g is a pair (j, e) with
    j a shift along the label cycle and e the conjugation bit.
    """
    if isinstance(g, tuple):
        j, e = g
        return _apply_pair(t, j % 6, e & 1)
    return _apply_pair(t, *unit_to_pair(g, t.d))


def galois_group(d):
    """Gal(M/Q) as action labels: units mod 42, or (j, e) pairs."""
    if d in CYCLOTOMIC_D:
        return _UNITS_42
    return tuple((j, e) for j in range(6) for e in (0, 1))


def complex_conjugation(d):
    return 41 if d in CYCLOTOMIC_D else (0, 1)


# ---------------------------------------------------------------------------
# Orbits

def _orbit(t, group):
    return {apply_galois(t, g) for g in group}


def cm_type_orbits(d) -> OrbitReport:
    """Orbit partition of all 64 CM types under Gal(M/Q)."""
    group = galois_group(d)
    seen = set()
    orbits = []
    for t in enumerate_cm_types(d):
        if t in seen:
            continue
        orb = _orbit(t, group)
        seen |= orb
        rep = min(orb, key=CMType.bitmask)
        orbits.append((rep, len(orb)))
    orbits.sort(key=lambda pair: pair[0].bitmask())
    name = "(Z/42)^x" if d in CYCLOTOMIC_D else "Z/6 x Z/2"
    return OrbitReport(tuple(orbits), f"{name} on all 64 CM types")


def galois_orbits_sign_assignments() -> OrbitReport:
    """Orbits of the 20 sign assignments under the label 6-cycle."""
    seen = set()
    orbits = []
    for plus in product((0, 1), repeat=6):
        if sum(plus) != 3:
            continue
        sa = SignAssignment(tuple(k for k, b in zip(EMBEDDING_LABELS, plus) if b))
        if sa in seen:
            continue
        orb = {shift_assignment(sa, j) for j in range(6)}
        seen |= orb
        rep = min(orb, key=lambda s: s.plus)
        orbits.append((rep, len(orb)))
    orbits.sort(key=lambda pair: pair[0].plus)
    return OrbitReport(tuple(orbits), "Z/6 label cycle on sign assignments")


def assignment_shape(sa) -> str:
    """Combinatorial shape of the assignment along the cycle.

    Classifies by the cyclic sequence of position gaps: (1,1,4) consecutive,
    (1,2,3) skip-one, (1,3,2) skip-two, (2,2,2) alternating.
    """
    pos = sorted(_CYCLE_POSITION[k] for k in sa.plus)
    gaps = (pos[1] - pos[0], pos[2] - pos[1], pos[0] + 6 - pos[2])
    rotations = [gaps[i:] + gaps[:i] for i in range(3)]
    canon = min(rotations)
    return {
        (1, 1, 4): "consecutive",
        (1, 2, 3): "skip-one",
        (1, 3, 2): "skip-two",
        (2, 2, 2): "alternating",
    }[canon]


# ---------------------------------------------------------------------------
# Stabilizers

@dataclass(frozen=True)
class Stabilizer:
    """Elements of Gal(M/Q) fixing a CM type, with the reflex flag."""

    elements: Tuple[Union[int, Tuple[int, int]], ...]
    group: str
    reflex_equals_m: bool

    def order(self):
        return len(self.elements)


def stabilizer(t) -> Stabilizer:
    group = galois_group(t.d)
    fixing = tuple(g for g in group if apply_galois(t, g) == t)
    name = "(Z/42)^x" if t.d in CYCLOTOMIC_D else "Z/6 x Z/2"
    return Stabilizer(fixing, name, reflex_equals_m=(len(fixing) == 1))
