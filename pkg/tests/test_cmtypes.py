"""CM-type layer: the 64 types, Weil filter, sign-assignment orbits,
Galois actions in both presentations, stabilizers and reflex flags."""

from __future__ import annotations

from collections import Counter
from itertools import product

import pytest

from heckefix import cmtypes as CT
from heckefix.cmtypes import CMType, SignAssignment

UNITS_42 = tuple(u for u in range(1, 42) if __import__("math").gcd(u, 42) == 1)


def test_enumeration_count_and_order():
    ts = CT.enumerate_cm_types(3)
    assert len(ts) == 64
    assert [t.bitmask() for t in ts] == list(range(64))


def test_conjugate_pairs_partition_all_types():
    ts = CT.enumerate_cm_types(3)
    assert all(t.conjugate() != t for t in ts)
    pairs = {frozenset((t, t.conjugate())) for t in ts}
    assert len(pairs) == 32


def test_all_plus_conjugates_to_all_minus():
    allplus = CMType((True,) * 6, 3)
    assert allplus.conjugate() == CMType((False,) * 6, 3)
    assert allplus.conjugate().conjugate() == allplus


def test_weil_filter_counts():
    ts = CT.enumerate_cm_types(3)
    w = CT.weil_compatible_filter(ts)
    assert len(w) == 20
    pairs = {frozenset((t, t.conjugate())) for t in w}
    assert len(pairs) == 10
    assert all(t.conjugate() in w for t in w)
    excluded = [t for t in ts if t not in w]
    assert len(excluded) == 44
    assert len({frozenset((t, t.conjugate())) for t in excluded}) == 22


def test_cm_type_validation():
    with pytest.raises(ValueError):
        CMType((True,) * 5, 3)
    with pytest.raises(ValueError):
        CMType((True,) * 6, 12)
    with pytest.raises(ValueError):
        CMType.from_bitmask(64, 3)


def test_sign_assignment_validation():
    with pytest.raises(ValueError):
        SignAssignment((1, 5))
    with pytest.raises(ValueError):
        SignAssignment((1, 5, 6))
    with pytest.raises(ValueError):
        SignAssignment((1, 1, 5))
    sa = SignAssignment((17, 1, 5))
    assert sa.plus == (1, 5, 17)
    assert sa.minus == (11, 13, 19)


# ---------------------------------------------------------------------------
# Sign-assignment orbits under the label cycle


def test_orbit_size_multiset():
    rep = CT.galois_orbits_sign_assignments()
    assert sorted(rep.sizes()) == [2, 6, 6, 6]
    assert rep.total() == 20


def test_orbit_count_matches_burnside():
    assignments = [
        SignAssignment(tuple(k for k, b in zip(CT.EMBEDDING_LABELS, bits) if b))
        for bits in product((0, 1), repeat=6)
        if sum(bits) == 3
    ]
    fixed_total = 0
    for j in range(6):
        fixed_total += sum(1 for sa in assignments if CT.shift_assignment(sa, j) == sa)
    assert fixed_total % 6 == 0
    assert fixed_total // 6 == len(CT.galois_orbits_sign_assignments().orbits) == 4


def test_alternating_orbit_realization():
    alt = SignAssignment((1, 5, 17))
    orbit = {CT.shift_assignment(alt, j) for j in range(6)}
    assert orbit == {SignAssignment((1, 5, 17)), SignAssignment((11, 13, 19))}
    assert CT.assignment_shape(alt) == "alternating"


def test_orbit_shapes_are_constant_and_cover_all_four():
    rep = CT.galois_orbits_sign_assignments()
    shapes = {}
    for sa, size in rep.orbits:
        shape = CT.assignment_shape(sa)
        for j in range(6):
            assert CT.assignment_shape(CT.shift_assignment(sa, j)) == shape
        shapes[shape] = size
    assert shapes == {
        "consecutive": 6,
        "skip-one": 6,
        "skip-two": 6,
        "alternating": 2,
    }


# ---------------------------------------------------------------------------
# The bijection with Weil-compatible types


def test_bijection_roundtrip_on_all_twenty():
    ts = CT.weil_compatible_filter(CT.enumerate_cm_types(3))
    for t in ts:
        sa = CT.sign_assignment_from_cm_type(t)
        assert CT.cm_type_from_sign_assignment(sa, 3) == t
    with pytest.raises(ValueError):
        CT.sign_assignment_from_cm_type(CMType((True,) * 6, 3))


def test_bijection_example_alternating():
    t = CT.cm_type_from_sign_assignment(SignAssignment((1, 5, 17)), 3)
    assert t.plus_labels() == (1, 5, 17)
    assert str(t) == "++--+-"


def test_conjugation_complements_the_assignment():
    for bits in product((0, 1), repeat=6):
        if sum(bits) != 3:
            continue
        sa = SignAssignment(tuple(k for k, b in zip(CT.EMBEDDING_LABELS, bits) if b))
        t = CT.cm_type_from_sign_assignment(sa, 3)
        comp = SignAssignment(sa.minus)
        assert t.conjugate() == CT.cm_type_from_sign_assignment(comp, 3)


def test_bijection_commutes_with_label_cycle():
    for bits in product((0, 1), repeat=6):
        if sum(bits) != 3:
            continue
        sa = SignAssignment(tuple(k for k, b in zip(CT.EMBEDDING_LABELS, bits) if b))
        for j in range(6):
            lhs = CT.cm_type_from_sign_assignment(CT.shift_assignment(sa, j), 3)
            rhs = CT.apply_galois(CT.cm_type_from_sign_assignment(sa, 3), (j, 0))
            assert lhs == rhs


# ---------------------------------------------------------------------------
# Galois actions


def test_galois_group_presentations():
    assert CT.galois_group(3) == UNITS_42
    assert CT.galois_group(7) == UNITS_42
    assert len(CT.galois_group(5)) == 12
    assert CT.complex_conjugation(3) == 41
    assert CT.complex_conjugation(5) == (0, 1)


def test_unit_to_pair_examples():
    assert CT.unit_to_pair(41, 3) == (0, 1)
    assert CT.unit_to_pair(41, 7) == (0, 1)
    assert CT.unit_to_pair(11, 3) == (1, 1)
    assert CT.unit_to_pair(11, 7) == (1, 0)
    assert CT.unit_to_pair(1, 3) == (0, 0)
    with pytest.raises(ValueError):
        CT.unit_to_pair(6, 3)
    with pytest.raises(ValueError):
        CT.unit_to_pair(11, 5)


def test_unit_action_is_a_homomorphism():
    t0 = CMType.from_bitmask(0b001011, 3)
    for d in (3, 7):
        t = CMType(t0.selection, d)
        for u in UNITS_42:
            for v in UNITS_42:
                lhs = CT.apply_galois(CT.apply_galois(t, u), v)
                rhs = CT.apply_galois(t, (u * v) % 42)
                assert lhs == rhs


def test_conjugation_unit_flips_all_bits():
    for t in CT.enumerate_cm_types(3):
        assert CT.apply_galois(t, 41) == t.conjugate()
    for t in CT.enumerate_cm_types(5):
        assert CT.apply_galois(t, (0, 1)) == t.conjugate()


def test_orbit_sizes_divide_group_order():
    for d in (3, 5, 7):
        rep = CT.cm_type_orbits(d)
        assert rep.total() == 64
        assert all(12 % s == 0 for s in rep.sizes())


def test_full_orbit_partition_of_all_types():
    for d in (3, 5):
        assert sorted(CT.cm_type_orbits(d).sizes()) == [2, 2, 6, 6, 12, 12, 12, 12]


def test_weil_set_is_galois_stable():
    for d in (3, 7, 5):
        w = set(CT.weil_compatible_filter(CT.enumerate_cm_types(d)))
        for t in w:
            for g in CT.galois_group(d):
                assert CT.apply_galois(t, g) in w


# ---------------------------------------------------------------------------
# Stabilizers and the reflex flag


def test_identity_always_stabilizes():
    for t in CT.enumerate_cm_types(3):
        assert 1 in CT.stabilizer(t).elements
    for t in CT.enumerate_cm_types(5):
        assert (0, 0) in CT.stabilizer(t).elements


def test_conjugation_never_stabilizes():
    for d in (3, 5):
        conj = CT.complex_conjugation(d)
        for t in CT.enumerate_cm_types(d):
            assert conj not in CT.stabilizer(t).elements


def test_stabilizer_of_conjugate_type_is_equal():
    for t in CT.weil_compatible_filter(CT.enumerate_cm_types(3)):
        assert set(CT.stabilizer(t).elements) == set(
            CT.stabilizer(t.conjugate()).elements
        )


def test_weil_stabilizer_histogram():
    w = CT.weil_compatible_filter(CT.enumerate_cm_types(3))
    hist = Counter(CT.stabilizer(t).order() for t in w)
    assert hist == {1: 12, 2: 6, 6: 2}
    assert sum(1 for t in w if CT.stabilizer(t).reflex_equals_m) == 12


def test_alternating_stabilizers_depend_on_d():
    alt3 = CT.cm_type_from_sign_assignment(SignAssignment((1, 5, 17)), 3)
    alt7 = CT.cm_type_from_sign_assignment(SignAssignment((1, 5, 17)), 7)
    assert CT.stabilizer(alt3).elements == (1, 11, 23, 25, 29, 37)
    assert CT.stabilizer(alt7).elements == (1, 13, 19, 25, 31, 37)
    assert not CT.stabilizer(alt3).reflex_equals_m
    alt5 = CT.cm_type_from_sign_assignment(SignAssignment((1, 5, 17)), 5)
    assert set(CT.stabilizer(alt5).elements) == {
        (0, 0), (2, 0), (4, 0), (1, 1), (3, 1), (5, 1),
    }


def test_weil_orbit_sizes_under_full_group():
    w = CT.weil_compatible_filter(CT.enumerate_cm_types(3))
    seen = set()
    sizes = []
    for t in w:
        if t in seen:
            continue
        orb = {CT.apply_galois(t, g) for g in CT.galois_group(3)}
        seen |= orb
        sizes.append(len(orb))
    assert sorted(sizes) == [2, 6, 12]
