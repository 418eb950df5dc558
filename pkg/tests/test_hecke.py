"""Coset representatives, fixed-point systems, the mod-43 prescreen, the
elliptic matrix stream, the matrix-first search, and certificate checking."""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from heckefix import field as F
from heckefix import hecke as H
from heckefix import triangle as TR

Z = F.IntegralElement((0,))
ONE = F.IntegralElement((1,))


@lru_cache(maxsize=None)
def prime43():
    return F.prime_catalog()[43]


@lru_cache(maxsize=None)
def pi_balanced():
    return H.balanced_totally_positive_generator(prime43())


@lru_cache(maxsize=None)
def coset_reps():
    return tuple(H.enumerate_cosets(prime43()))


@lru_cache(maxsize=None)
def alpha_stream_h3():
    return tuple(m for _, m in H.enumerate_alpha(prime43(), 3))


def b_generator():
    """The order-21 rotation generator as a unit-determinant matrix."""
    return H.HeckeMatrix.from_entries((Z, -ONE, ONE, F.T), ell=1,
                                      residue_root=None)


def synthetic_alpha():
    """Trace zero, determinant the balanced generator: elliptic everywhere,
    and the trace constraint at d = 43 has the witness b = 1."""
    return H.HeckeMatrix.from_entries((Z, ONE, -pi_balanced(), Z))


@lru_cache(maxsize=None)
def synthetic_run():
    cfg = H.SearchConfig(d=43, strict=False, waive_validation=True)
    stream = H.search_mode_b(cfg, alphas=[synthetic_alpha()])
    certs = tuple(stream)
    return certs, dict(stream.counters)


# ---------------------------------------------------------------------------
# HeckeMatrix basics


def test_from_entries_accepts_coefficient_tuples():
    m = H.HeckeMatrix.from_entries((Z, ONE, -pi_balanced(), Z))
    assert m.det == pi_balanced()
    assert m.trace() == Z
    assert m.ell == 43 and m.residue_root == 5


def test_matrix_rejects_non_integral_entries():
    half = F.FieldElement((Fraction(1, 2),))
    with pytest.raises(ValueError):
        H.HeckeMatrix.from_entries((half, ONE, -2 * pi_balanced(), Z))


def test_matrix_rejects_unit_norm_under_prime_ell():
    with pytest.raises(ValueError):
        H.HeckeMatrix.from_entries((ONE, Z, Z, ONE))


def test_matrix_rejects_conjugate_prime_root():
    # the balanced generator vanishes at the root 5 and at no other root
    with pytest.raises(ValueError):
        H.HeckeMatrix.from_entries((Z, ONE, -pi_balanced(), Z),
                                   residue_root=10)


def test_matrix_rejects_inconsistent_determinant():
    with pytest.raises(ValueError):
        H.HeckeMatrix(Z, ONE, -pi_balanced(), Z, F.IntegralElement((43,)),
                      43, 5)


def test_negation_preserves_determinant_and_identity():
    m = synthetic_alpha()
    n = -m
    assert n.det == m.det
    assert n.entries == tuple(-v for v in m.entries)
    assert n != m and hash(n) != hash(m)


def test_canonical_under_negation_picks_one_of_each_pair():
    m = synthetic_alpha()
    c1 = H.canonical_under_negation(m)
    c2 = H.canonical_under_negation(-m)
    assert c1 == c2
    assert H.canonical_under_negation(c1) == c1
    assert c1 in (m, -m)


# ---------------------------------------------------------------------------
# Coset representatives


def test_forty_four_representatives_with_expected_labels():
    reps = coset_reps()
    assert len(reps) == 44
    assert [r.label for r in reps] == list(range(43)) + [H.INF_LABEL]


def test_representative_shapes():
    reps = coset_reps()
    pi = prime43().generator
    for j in (0, 1, 17, 42):
        assert reps[j].matrix.entries == (pi, F.IntegralElement((j,)), Z, ONE)
    assert reps[-1].matrix.entries == (Z, -ONE, pi, Z)


def test_residue_criterion_separates_all_labels():
    reps = coset_reps()
    labels = [H.coset_label(r.matrix) for r in reps]
    assert labels == [r.label for r in reps]
    assert len(set(labels)) == 44


def test_representatives_pairwise_inequivalent_exactly():
    reps = coset_reps()
    for r1, r2 in itertools.combinations(reps, 2):
        assert not H.cosets_equivalent(r1.matrix, r2.matrix)


def test_equivalence_is_reflexive_and_needs_common_determinant():
    reps = coset_reps()
    assert H.cosets_equivalent(reps[3].matrix, reps[3].matrix)
    with pytest.raises(ValueError):
        H.cosets_equivalent(reps[0].matrix, synthetic_alpha())


def _elementary(x, lower=False):
    return F.Mat2((ONE, Z, x, ONE)) if lower else F.Mat2((ONE, x, Z, ONE))


def test_reduction_recovers_label_and_cofactor():
    p = prime43()
    reps = coset_reps()
    delta = (_elementary(F.T) * _elementary(-ONE, lower=True)
             * _elementary(F.IntegralElement((2, -1))))
    assert delta.det() == F.FieldElement((1,))
    for r in (reps[0], reps[7], reps[41], reps[-1]):
        moved = H.HeckeMatrix.from_entries(
            tuple((r.matrix.mat * delta).entries))
        label, back = H.reduce_to_coset(moved, p)
        assert label == r.label
        assert back.entries == delta.entries
        # membership in exactly one coset, checked against every rep
        hits = sum(H.cosets_equivalent(moved, rr.matrix) for rr in reps)
        assert hits == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(0, 43))
def test_label_is_invariant_under_unimodular_right_factors(x, y, j):
    reps = coset_reps()
    r = reps[j]
    delta = _elementary(F.IntegralElement((x, 1))) \
        * _elementary(F.IntegralElement((y,)), lower=True)
    moved = H.HeckeMatrix.from_entries(tuple((r.matrix.mat * delta).entries))
    assert H.coset_label(moved) == r.label


def test_enumeration_requires_generator_data():
    with pytest.raises(ValueError):
        H.enumerate_cosets(F.prime_catalog()[2])


# ---------------------------------------------------------------------------
# Fixed-point systems and ellipticity


def test_unit_rotation_system_at_first_embedding():
    sysb = H.build_fixed_point_system(b_generator())
    quad = sysb.coefficients[1]
    with mp.workprec(160):
        t1 = 2 * mp.cos(mp.pi / 21)
        assert abs(quad[0].value - 1) < 1e-30
        assert abs(quad[1].value - t1) < 1e-30
        assert abs(quad[2].value - 1) < 1e-30
    assert not sysb.linear_degenerate
    assert all(sysb.elliptic)


def test_unit_rotation_elliptic_at_every_embedding():
    # |2 cos(k pi / 21)| < 2 at each label
    assert H.ellipticity_filter(b_generator()) == (True,) * 6


def test_upper_triangular_degenerates_to_linear():
    pi = prime43().generator
    m = H.HeckeMatrix.from_entries((pi, Z, Z, ONE))
    sysm = H.build_fixed_point_system(m)
    assert sysm.linear_degenerate
    assert not all(H.ellipticity_filter(m))
    with pytest.raises(H.Rejection):
        H.fixed_tuple(m)


def test_zero_trace_with_totally_positive_determinant_is_elliptic():
    assert all(H.ellipticity_filter(synthetic_alpha()))


def test_formal_branch_accounting():
    assert H.FORMAL_BRANCHES == 64
    report = H.sweep_report(prime43())
    assert report["cosets"] == 44
    assert report["formal_systems"] == 2816
    assert report["elliptic_everywhere"] == 0
    assert report["linear_degenerate"] == 43
    assert report["prescreen_pass"] == 43
    assert report["prescreen_rate"] == "43/44"


def test_fixed_tuple_of_unit_rotation():
    w = H.fixed_tuple(b_generator())
    with mp.workprec(200):
        t1 = 2 * mp.cos(mp.pi / 21)
        expect = (-t1 + mp.mpc(0, 1) * mp.sqrt(4 - t1 * t1)) / 2
        assert abs(w[0] - expect) < mp.mpf(2) ** -120
    assert all(mp.im(v) > 0 for v in w)


def test_fixed_tuple_rejects_non_elliptic():
    pi = prime43().generator
    m = H.HeckeMatrix.from_entries((pi, Z, ONE, ONE))
    assert not all(H.ellipticity_filter(m))
    with pytest.raises(H.Rejection):
        H.fixed_tuple(m)


def test_conjugation_moves_fixed_points_by_moebius_action():
    bmat = b_generator().mat
    binv = bmat.adjugate()
    for m in alpha_stream_h3()[:3]:
        moved = H.HeckeMatrix.from_entries(
            tuple((bmat * m.mat * binv).entries))
        w = H.fixed_tuple(m)
        wc = H.fixed_tuple(moved)
        with mp.workprec(160):
            for pos, k in enumerate(F.EMBEDDING_LABELS):
                tk = F.embed(F.T, k, 160).value
                assert abs(-1 / (w[pos] + tk) - wc[pos]) < mp.mpf(1e-35)


# ---------------------------------------------------------------------------
# Prescreen


class _Plain:
    """Bare entries for feeding the prescreen synthetic quadratics."""

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d
        self.det = a * d - b * c

    def trace(self):
        return self.a + self.d


small_ints = st.integers(-9, 9)


@settings(max_examples=40, deadline=None)
@given(small_ints, small_ints, small_ints, st.integers(-10, 10))
def test_prescreen_passes_systems_with_integer_roots(a, c, d, w0):
    # b is chosen so that w0 solves c w^2 + (d - a) w - b exactly
    av, cv, dv = (F.IntegralElement((v,)) for v in (a, c, d))
    w0v = F.IntegralElement((w0,))
    bv = cv * w0v * w0v + (dv - av) * w0v
    assert H.prescreen_mod_ell(_Plain(av, bv, cv, dv), prime43())


@settings(max_examples=25, deadline=None)
@given(small_ints, small_ints, small_ints, st.integers(-4, 4),
       st.integers(-4, 4))
def test_prescreen_passes_algebraic_integer_roots(a, c, d, w0, w1):
    av, cv, dv = (F.IntegralElement((v,)) for v in (a, c, d))
    w0v = F.IntegralElement((w0, w1))
    bv = cv * w0v * w0v + (dv - av) * w0v
    assert H.prescreen_mod_ell(_Plain(av, bv, cv, dv), prime43())


def test_prescreen_passes_vanishing_discriminant():
    m = _Plain(ONE, Z, F.IntegralElement((3,)), ONE)
    assert (m.trace() * m.trace() - 4 * m.det).is_zero()
    assert H.prescreen_mod_ell(m, prime43())


def test_prescreen_rejects_nonresidue_discriminant():
    # the representative at infinity: discriminant -4 pi, and at the root 10
    # the residue 18 fails the Euler criterion
    p = prime43()
    gamma_inf = coset_reps()[-1].matrix
    assert not H.prescreen_mod_ell(gamma_inf, p)
    disc = gamma_inf.trace() * gamma_inf.trace() - 4 * gamma_inf.det
    assert F.residue_mod_prime(disc, 43, 10) == 18
    assert pow(18, 21, 43) == 42


def test_prescreen_bite_in_the_height_three_stream():
    p = prime43()
    passed = sum(H.prescreen_mod_ell(m, p) for m in alpha_stream_h3())
    assert passed == 88


# ---------------------------------------------------------------------------
# The balanced generator and the matrix stream


def test_balanced_generator_value_and_properties():
    pi = pi_balanced()
    assert tuple(int(c) for c in pi.coeffs) == (1, -4, 1, 5, 0, -1)
    assert F.is_totally_positive(pi)
    assert F.norm(pi) == 43
    assert F.residue_mod_prime(pi, 43, 5) == 0


def test_balanced_generator_is_an_associate_of_the_curated_one():
    u = pi_balanced() * F.invert(prime43().generator)
    assert u.is_integral()
    assert F.norm(u) == 1


def test_balanced_generator_embeddings_stay_small():
    vals = [abs(float(F.embed(pi_balanced(), k, 80).value))
            for k in F.EMBEDDING_LABELS]
    assert max(vals) < 6.5


def test_balanced_generator_is_cached():
    assert H.balanced_totally_positive_generator(prime43()) is pi_balanced()


def test_stream_count_at_height_three():
    assert len(alpha_stream_h3()) == 104


def test_stream_matrices_carry_exact_determinant():
    for m in alpha_stream_h3():
        assert m.det == pi_balanced()


def test_stream_matrices_elliptic_everywhere():
    for m in alpha_stream_h3()[::7]:
        assert all(H.ellipticity_filter(m))


def test_stream_deduplicates_negation_pairs():
    seen = set()
    for m in alpha_stream_h3():
        assert H.canonical_under_negation(m) == m
        key = H._flat_coeff_key(m)
        neg = tuple(-v for v in key)
        assert key not in seen and neg not in seen
        seen.add(key)


def test_stream_order_is_deterministic():
    fresh = [m for _, m in itertools.islice(
        H.enumerate_alpha(prime43(), 3), 10)]
    assert fresh == list(alpha_stream_h3()[:10])


def test_stream_is_empty_below_the_smallest_entry_size():
    assert list(H.enumerate_alpha(prime43(), Fraction(1, 8))) == []


def test_stream_validates_height_and_generator():
    with pytest.raises(ValueError):
        H.AlphaStream(prime43(), 0)
    with pytest.raises(ValueError):
        # the curated generator has mixed signs, so it is refused here
        H.AlphaStream(prime43(), 3, generator=prime43().generator)


# ---------------------------------------------------------------------------
# Search configuration


def test_config_defaults():
    cfg = H.SearchConfig()
    assert cfg.ell == 43 and cfg.d == 3
    assert cfg.height == Fraction(3)
    assert cfg.precision == 128
    assert cfg.context().tol() == mp.mpf(2) ** -122


def test_config_refuses_composite_ell():
    with pytest.raises(ValueError):
        H.SearchConfig(ell=44)


def test_config_refuses_non_split_prime_in_strict_mode():
    with pytest.raises(ValueError):
        H.SearchConfig(ell=47)
    cfg = H.SearchConfig(ell=47, d=43, strict=False)
    assert cfg.ell == 47


def test_config_restricts_d_in_strict_mode():
    with pytest.raises(ValueError):
        H.SearchConfig(d=5)
    assert H.SearchConfig(d=7).d == 7


def test_config_validates_workers_and_height():
    with pytest.raises(ValueError):
        H.SearchConfig(workers=0)
    with pytest.raises(ValueError):
        H.SearchConfig(height=-1)


def test_config_prime_data_needs_curated_generator():
    with pytest.raises(ValueError):
        H.SearchConfig(ell=127, d=43, strict=False).prime_data()
    with pytest.raises(ValueError):
        H.SearchConfig(ell=5, d=43, strict=False).prime_data()
    assert H.SearchConfig().prime_data().p == 43


def test_config_identifier_is_stable_across_loads():
    a = H.config_identifier(TR.EmbeddingConfig.default())
    b = H.config_identifier(TR.EmbeddingConfig.default())
    assert a == b and len(a) == 16


# ---------------------------------------------------------------------------
# The matrix-first search on synthetic input


def test_synthetic_certificate_contents():
    certs, counters = synthetic_run()
    assert counters["emitted"] == 1
    assert counters["trace_rejected"] == 0
    assert counters["rational_b"] == 1
    assert counters["weil_false"] == 1 and counters["weil_true"] == 0
    (cert,) = certs
    assert cert.ell == 43 and cert.d == 43
    assert cert.coset == H.INF_LABEL
    assert cert.trace == Z
    a_w, b_w, d = cert.witness
    assert a_w == F.FieldElement((0,))
    assert b_w == ONE and d == 43
    assert cert.sign_vector == "++++++"
    assert cert.weil_ok is False and cert.cm_shape is None
    assert cert.tested_labels == (1,)
    assert cert.residuals == {1: 0.0}
    assert cert.precision == 128
    assert cert.status == "unverified"
    assert cert.word_length > 0
    assert cert.matrix() == synthetic_alpha()


def test_certificate_trace_within_ellipticity_bound():
    (cert,), _ = synthetic_run()
    e = cert.trace * cert.trace - 4 * cert.det
    assert all(F.certified_sign(e, k) < 0 for k in F.EMBEDDING_LABELS)


def test_negation_pairs_collapse_to_one_dedup_key():
    cfg = H.SearchConfig(d=43, strict=False, waive_validation=True)
    m = synthetic_alpha()
    stream = H.search_mode_b(cfg, alphas=[m, -m])
    certs = list(stream)
    assert stream.counters["emitted"] == 2
    assert stream.counters["distinct_keys"] == 1
    assert certs[0].dedup_key == certs[1].dedup_key


def test_resume_skips_processed_matrices():
    cfg = H.SearchConfig(d=43, strict=False, waive_validation=True)
    m = synthetic_alpha()
    stream = H.search_mode_b(cfg, alphas=[m, -m], start_after=0)
    certs = list(stream)
    assert len(certs) == 1
    assert stream.counters["skipped_by_cursor"] == 1
    assert stream.counters["emitted"] == 1
    assert stream.cursor == 1


def test_default_conductor_rejects_the_zero_trace_matrix():
    cfg = H.SearchConfig(waive_validation=True)
    stream = H.search_mode_b(cfg, alphas=[synthetic_alpha()])
    assert list(stream) == []
    assert stream.counters["trace_rejected"] == 1
    assert stream.counters["emitted"] == 0


def test_unvalidated_failing_config_is_refused():
    corrupt = TR.EmbeddingConfig({
        1: TR.ConfigEntry(1, TR.STANDARD_ANGLES),
        5: TR.ConfigEntry(5, TR.STANDARD_ANGLES),
    })
    with pytest.raises(H.Rejection):
        H.SearchStream(H.SearchConfig(d=43, strict=False, config=corrupt))


def test_waived_bad_config_counts_match_failures():
    corrupt = TR.EmbeddingConfig({
        1: TR.ConfigEntry(1, TR.STANDARD_ANGLES),
        5: TR.ConfigEntry(5, TR.STANDARD_ANGLES),
    })
    cfg = H.SearchConfig(d=43, strict=False, config=corrupt,
                         waive_validation=True)
    stream = H.search_mode_b(cfg, alphas=[synthetic_alpha()])
    assert list(stream) == []
    assert stream.counters["match_fail"] == 1


# ---------------------------------------------------------------------------
# Verification


def test_emitted_certificate_verifies_at_doubled_precision():
    (cert,), _ = synthetic_run()
    report = H.verify_certificate(cert)
    assert report.verified and report.failed is None
    assert report.precision == 256
    names = [name for name, _, _ in report.checks]
    assert names == ["determinant", "ellipticity", "coset label",
                     "fixed tuple residual", "config identity",
                     "embedding match", "trace constraint", "norm witness",
                     "sign vector", "weil flag"]
    assert report.lines()[-1] == "verified"


def test_verification_is_idempotent():
    (cert,), _ = synthetic_run()
    r1 = H.verify_certificate(cert)
    r2 = H.verify_certificate(cert)
    assert r1.verified == r2.verified
    assert [c[:2] for c in r1.checks] == [c[:2] for c in r2.checks]


def _tampered(**kw):
    (cert,), _ = synthetic_run()
    return dataclasses.replace(cert, **kw)


def test_perturbed_fixed_component_fails_the_residual_check():
    (cert,), _ = synthetic_run()
    with mp.workprec(300):
        noisy = list(cert.fixed)
        noisy[1] = noisy[1] + mp.mpf("1e-3")
        bad = _tampered(fixed=tuple(noisy))
    report = H.verify_certificate(bad)
    assert not report.verified
    assert report.failed == "fixed tuple residual"


def test_wrong_conductor_fails_the_trace_constraint():
    report = H.verify_certificate(_tampered(d=3, witness=None))
    assert not report.verified
    assert report.failed == "trace constraint"


def test_corrupt_witness_fails_the_norm_check():
    (cert,), _ = synthetic_run()
    a_w, b_w, d = cert.witness
    report = H.verify_certificate(_tampered(witness=(a_w, b_w + ONE, d)))
    assert not report.verified
    assert report.failed == "norm witness"


def test_flipped_sign_vector_is_caught():
    report = H.verify_certificate(_tampered(sign_vector="-+++++"))
    assert not report.verified
    assert report.failed == "sign vector"


def test_forged_weil_flag_with_rational_witness_is_caught():
    report = H.verify_certificate(_tampered(weil_ok=True))
    assert not report.verified
    assert report.failed == "weil flag"


def test_tampered_entry_changing_determinant_is_caught():
    (cert,), _ = synthetic_run()
    bad = _tampered(entries=(cert.entries[0], cert.entries[1] + ONE,
                             cert.entries[2], cert.entries[3]))
    report = H.verify_certificate(bad)
    assert not report.verified
    assert report.failed == "determinant"


def test_tampered_trace_entry_breaks_ellipticity():
    (cert,), _ = synthetic_run()
    bad = _tampered(entries=(cert.entries[0] + ONE, cert.entries[1],
                             cert.entries[2], cert.entries[3]))
    report = H.verify_certificate(bad)
    assert not report.verified
    assert report.failed == "ellipticity"


def test_mislabeled_coset_is_caught():
    report = H.verify_certificate(_tampered(coset=7))
    assert not report.verified
    assert report.failed == "coset label"
