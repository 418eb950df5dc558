"""Fixed points of the degree-44 correspondence: cosets, systems, search.

The pipeline enumerates integral 2x2 matrices whose determinant is a fixed
totally positive generator of the norm-43 prime, keeps the ones acting
elliptically at every real embedding, intersects their fixed-point tuples
with the image of the modular embedding, and records every surviving
candidate as a machine-checkable certificate.  An empty result at a given
height bound is a valid outcome.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from .field import (
    EMBEDDING_LABELS,
    FieldElement,
    IntegralElement,
    Mat2,
    PrecisionExhausted,
    PrimeIdealData,
    certified_sign,
    embed,
    enumerate_box,
    find_totally_positive_associate,
    invert,
    is_prime,
    is_totally_positive,
    norm,
    prime_catalog,
    residue_mod_prime,
    roots_mod_ell,
    signs,
    units_in_box,
)
from .cmfield import sign_vector, trace_constraint_check, weil_signature_check
from .cmtypes import SignAssignment, assignment_shape
from .triangle import (
    DEFAULT_CONTEXT,
    EmbeddingConfig,
    PrecisionContext,
    STANDARD_ANGLES,
    TriangleData,
    component_map,
    elliptic_fixed_point,
    reduce_to_fundamental,
    validate_config,
)

INF_LABEL = "inf"

_ZERO = IntegralElement(())
_ONE = IntegralElement((1,))


class Rejection(ValueError):
    """A structured precondition rejection, not a computation failure."""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------------------
# Matrices with prime determinant

@dataclass(frozen=True)
class HeckeMatrix:
    """An integral 2x2 matrix whose determinant generates the target prime.

    Entries live in Z[t]; the determinant must have norm plus or minus ell
    and reduce to zero at the distinguished residue root, so that the ideal
    it generates is the chosen degree-one prime and not one of its five
    conjugates.  residue_root None opts out of the root check for matrices
    whose determinant norm already pins the ideal, such as unit determinant.
    """

    a: IntegralElement
    b: IntegralElement
    c: IntegralElement
    d: IntegralElement
    det: IntegralElement
    ell: int
    residue_root: int | None

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not isinstance(v, FieldElement) or not v.is_integral():
                raise ValueError(f"entry {name} is not integral: {v!r}")
        if self.a * self.d - self.b * self.c != self.det:
            raise ValueError("determinant disagrees with the entries")
        n = norm(self.det)
        if n != self.ell and n != -self.ell:
            raise ValueError(f"det norm {n} is not +-{self.ell}")
        if self.residue_root is not None and \
                residue_mod_prime(self.det, self.ell, self.residue_root) != 0:
            raise ValueError("det does not generate the distinguished prime")

    @classmethod
    def from_entries(cls, entries, ell=43, residue_root=5):
        a, b, c, d = (e if isinstance(e, FieldElement) else IntegralElement(e)
                      for e in entries)
        return cls(a, b, c, d, a * d - b * c, ell, residue_root)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def mat(self):
        return Mat2(self.entries)

    def trace(self):
        return self.a + self.d

    def embedded(self, k, prec):
        """sigma_k of the matrix as a row-major tuple of mpf centers."""
        return tuple(embed(v, k, prec).value for v in self.entries)

    def __neg__(self):
        return HeckeMatrix(-self.a, -self.b, -self.c, -self.d, self.det,
                           self.ell, self.residue_root)

    def __eq__(self, other):
        return (isinstance(other, HeckeMatrix)
                and self.entries == other.entries and self.ell == other.ell)

    def __hash__(self):
        return hash((self.entries, self.ell))


def _flat_coeff_key(m):
    out = []
    for v in m.entries:
        cs = [int(c) for c in v.coeffs]
        cs += [0] * (6 - len(cs))
        out.extend(cs)
    return tuple(out)


def canonical_under_negation(m):
    """The representative of {m, -m} with lexicographically larger key."""
    key = _flat_coeff_key(m)
    neg = tuple(-v for v in key)
    return m if key >= neg else -m


# ---------------------------------------------------------------------------
# Coset representatives

@dataclass(frozen=True)
class CosetRep:
    """One of the ell+1 canonical representatives, tagged by its label."""

    label: object  # int in 0..ell-1, or INF_LABEL
    matrix: HeckeMatrix


def enumerate_cosets(p: PrimeIdealData):
    """The ell+1 canonical representatives for the prime p.

    Finite label j gives ((pi, j), (0, 1)); the label at infinity gives
    ((0, -1), (pi, 0)).  Labels are integer lifts of the residue field,
    which the distinguished root identifies with Z/ell.
    """
    if p.generator is None or p.residue_root is None:
        raise ValueError(f"prime {p.p} has no distinguished generator data")
    pi = p.generator
    ell = p.p
    reps = []
    for j in range(ell):
        m = HeckeMatrix.from_entries(
            (pi, IntegralElement((j,)), _ZERO, _ONE), ell, p.residue_root)
        reps.append(CosetRep(j, m))
    minf = HeckeMatrix.from_entries((_ZERO, -_ONE, pi, _ZERO),
                                    ell, p.residue_root)
    reps.append(CosetRep(INF_LABEL, minf))
    return reps


def coset_label(m: HeckeMatrix, root=None):
    """The label of m's coset, read off from its reduction mod the prime.

    The reduction has rank one (rank zero would force the determinant into
    the square of the prime), so its nonzero columns span a single line
    (x : y) over the residue field; y invertible gives the finite label
    x / y, y zero gives infinity.
    """
    ell = m.ell
    root = m.residue_root if root is None else root
    red = [residue_mod_prime(v, ell, root) for v in m.entries]
    ra, rb, rc, rd = red
    for x, y in ((ra, rc), (rb, rd)):
        if x % ell or y % ell:
            if y % ell:
                return (x * pow(y, -1, ell)) % ell
            return INF_LABEL
    raise ValueError("matrix reduces to zero: determinant not exactly prime")


def cosets_equivalent(m1: HeckeMatrix, m2: HeckeMatrix):
    """Whether m1 and m2 differ by an integral unimodular right factor.

    Both matrices must carry the same determinant; the quotient
    m1^(-1) m2 is formed exactly and tested for integrality and
    determinant one.
    """
    if m1.det != m2.det:
        raise ValueError("equivalence needs a common determinant")
    dinv = invert(m1.det)
    q = Mat2(tuple(v * dinv for v in (m1.mat.adjugate() * m2.mat).entries))
    if any(not v.is_integral() for v in q.entries):
        return False
    return q.det() == FieldElement((1,))


def reduce_to_coset(m: HeckeMatrix, p: PrimeIdealData):
    """The canonical representative equivalent to m, with the cofactor.

    The residue field pins the label; a single exact division then
    produces the unimodular delta with m = rep * delta.
    """
    label = coset_label(m, p.residue_root)
    reps = {r.label: r for r in enumerate_cosets(p)}
    rep = reps[label]
    if m.det != rep.matrix.det:
        raise ValueError("reduction needs the canonical generator as det")
    dinv = invert(rep.matrix.det)
    delta = Mat2(tuple(v * dinv for v in
                       (rep.matrix.mat.adjugate() * m.mat).entries))
    if any(not v.is_integral() for v in delta.entries) \
            or delta.det() != FieldElement((1,)):
        raise ValueError("matrix is not equivalent to its residue label rep")
    return label, delta


# ---------------------------------------------------------------------------
# Fixed-point systems

@dataclass(frozen=True)
class FixedPointSystem:
    """Per-embedding quadratics sigma_k(c) w^2 + sigma_k(d - a) w - sigma_k(b).

    coefficients maps k to the three embedded coefficient intervals,
    discriminants to the embedded trace^2 - 4 det, elliptic to the exact
    sign verdict.  linear_degenerate marks c = 0 exactly, where the
    quadratic collapses to a linear equation.
    """

    matrix: HeckeMatrix
    coefficients: dict
    discriminants: dict
    elliptic: tuple
    linear_degenerate: bool


def ellipticity_filter(m: HeckeMatrix):
    """Per-embedding flags: trace^2 < 4 det, decided exactly.

    The comparison is a certified sign of the exact element
    trace^2 - 4 det of L; intervals only steer the precision.
    """
    e = m.trace() * m.trace() - 4 * m.det
    try:
        return tuple(certified_sign(e, k) < 0 for k in EMBEDDING_LABELS)
    except PrecisionExhausted as exc:  # pragma: no cover - exact layer decides
        raise RuntimeError(f"internal: ellipticity sign undecided: {exc}")


def build_fixed_point_system(m: HeckeMatrix, ctx=DEFAULT_CONTEXT):
    prec = ctx.precision
    quad = (m.c, m.d - m.a, -m.b)
    disc = m.trace() * m.trace() - 4 * m.det
    coeffs = {k: tuple(embed(q, k, prec) for q in quad)
              for k in EMBEDDING_LABELS}
    discs = {k: embed(disc, k, prec) for k in EMBEDDING_LABELS}
    return FixedPointSystem(
        matrix=m,
        coefficients=coeffs,
        discriminants=discs,
        elliptic=ellipticity_filter(m),
        linear_degenerate=m.c.is_zero(),
    )


FORMAL_BRANCHES = 64  # two formal root choices at each of the six embeddings


def fixed_tuple(m: HeckeMatrix, ctx=DEFAULT_CONTEXT):
    """The six upper-half-plane fixed points of m, one per embedding.

    Rejects (structurally, not as a failure) matrices that are not
    elliptic everywhere or have c = 0, whose fixed point sits at infinity.
    """
    if m.c.is_zero():
        raise Rejection("c = 0: fixed point at infinity")
    flags = ellipticity_filter(m)
    if not all(flags):
        bad = [k for k, f in zip(EMBEDDING_LABELS, flags) if not f]
        raise Rejection(f"not elliptic at k = {bad}")
    wp = ctx.precision + 16
    with mp.workprec(wp):
        out = []
        for k in EMBEDDING_LABELS:
            w = elliptic_fixed_point(m.embedded(k, wp), ctx)
            out.append(w)
        return tuple(out)


def prescreen_mod_ell(m: HeckeMatrix, p: PrimeIdealData):
    """A sound necessary filter: projective solvability mod every root.

    At each residue root the quadratic reduces to a conic in one variable
    over F_ell; a projective root exists exactly when the discriminant
    (trace^2 - 4 det, reduced) is zero or a quadratic residue.  A leading
    coefficient that dies mod ell contributes the root at infinity, so the
    test never rejects a system with an actual solution.  The determinant
    vanishes only at the distinguished root, so at the five conjugate
    roots the discriminant keeps its -4 det term and the residue test has
    real bite.
    """
    ell = p.p
    disc = m.trace() * m.trace() - 4 * m.det
    for root in roots_mod_ell(ell):
        a2 = residue_mod_prime(m.c, ell, root)
        a1 = residue_mod_prime(m.d - m.a, ell, root)
        a0 = residue_mod_prime(-m.b, ell, root)
        if a2 == 0 and a1 == 0 and a0 == 0:
            continue
        if a2 == 0:
            # projective root at infinity
            continue
        dd = residue_mod_prime(disc, ell, root)
        if dd == 0:
            continue
        if pow(dd, (ell - 1) // 2, ell) != 1:
            return False
    return True


def sweep_report(p: PrimeIdealData, ctx=DEFAULT_CONTEXT):
    """Accounting over the canonical representatives.

    The formal count multiplies the coset count by the 2^6 root-choice
    branches; the honest count recognizes that a real quadratic has at
    most one root in the upper half-plane and reports how many canonical
    representatives are elliptic at every embedding at all.
    """
    reps = enumerate_cosets(p)
    systems = [build_fixed_point_system(r.matrix, ctx) for r in reps]
    elliptic_all = sum(1 for s in systems if all(s.elliptic))
    prescreen_pass = sum(1 for r in reps if prescreen_mod_ell(r.matrix, p))
    return {
        "prime": p.p,
        "cosets": len(reps),
        "formal_systems": len(reps) * FORMAL_BRANCHES,
        "elliptic_everywhere": elliptic_all,
        "linear_degenerate": sum(1 for s in systems if s.linear_degenerate),
        "prescreen_pass": prescreen_pass,
        "prescreen_rate": f"{prescreen_pass}/{len(reps)}",
    }


# ---------------------------------------------------------------------------
# The balanced determinant

_BALANCED_CACHE = {}


def _log_embeddings(x, prec=120):
    return np.array([math.log(abs(float(embed(x, k, prec).value)))
                     for k in EMBEDDING_LABELS])


def balanced_totally_positive_generator(p: PrimeIdealData):
    """A totally positive generator with embeddings as even as possible.

    Total positivity is what puts fixed points in the upper half-plane at
    every embedding; evenness keeps the entry boxes of the search small.
    The unit correction is rounded in log-embedding space over the
    totally positive unit sublattice (direct totally positive units where
    the small box provides them, squares otherwise), then verified
    exactly.  Returns None when no totally positive associate exists in
    the searched unit range.
    """
    key = (p.p, tuple(p.generator.coeffs) if p.generator else None)
    if key in _BALANCED_CACHE:
        return _BALANCED_CACHE[key]
    if p.generator is None:
        raise ValueError(f"prime {p.p} has no generator")
    tp = p.generator if is_totally_positive(p.generator) \
        else find_totally_positive_associate(p.generator)
    if tp is None:
        _BALANCED_CACHE[key] = None
        return None

    units = list(units_in_box(3))
    tp_units = [u for u in units if all(s > 0 for s in signs(u))]
    candidates = tp_units + [u * u for u in units]
    basis_vecs, basis_els = [], []
    for u in candidates:
        lv = _log_embeddings(u)
        if np.linalg.norm(lv) < 1e-9:
            continue
        stacked = np.array(basis_vecs + [lv])
        if np.linalg.matrix_rank(stacked, tol=1e-8) > len(basis_vecs):
            basis_vecs.append(lv)
            basis_els.append(u)
        if len(basis_vecs) == 5:
            break
    if len(basis_vecs) < 5:
        _BALANCED_CACHE[key] = tp
        return tp

    B = np.array(basis_vecs).T
    target = _log_embeddings(tp) - math.log(abs(norm(tp))) / 6
    c0, *_ = np.linalg.lstsq(B, -target, rcond=None)
    base = np.round(c0).astype(int)
    best = None
    for off in itertools.product(range(-2, 3), repeat=5):
        c = base + np.array(off)
        height = (target + B @ c).max()
        if best is None or height < best[0] - 1e-12:
            best = (height, tuple(int(v) for v in c))
    x = tp
    for u, e in zip(basis_els, best[1]):
        step = u if e > 0 else invert(u)
        for _ in range(abs(e)):
            x = x * step
    ok = (x.is_integral() and is_totally_positive(x)
          and norm(x) == norm(tp)
          and (p.residue_root is None
               or residue_mod_prime(x, p.p, p.residue_root) == 0))
    result = IntegralElement(x.coeffs) if ok else tp
    _BALANCED_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# Matrix enumeration

class AlphaStream:
    """Deterministic stream of elliptic matrices with the fixed determinant.

    Entries range over the box |sigma_k| <= height.  The ellipticity
    condition trace^2 - 4 pi totally negative depends on the trace alone,
    so admissible traces are enumerated first; for each splitting
    trace = a + d the residual product b c = a d - pi is factored over the
    box.  Matrices are emitted once per negation pair, in a fixed order,
    tagged with a sequence number.

    caveat is set when no totally positive generator was found; the
    stream is then empty, since a determinant that is negative somewhere
    has no fixed points in the product of upper half-planes.
    """

    def __init__(self, p: PrimeIdealData, height, generator=None):
        self.p = p
        self.height = Fraction(height)
        if self.height <= 0:
            raise ValueError("height bound must be positive")
        self.caveat = None
        if generator is None:
            generator = balanced_totally_positive_generator(p)
        if generator is None:
            self.caveat = ("no totally positive generator found; a mixed-"
                           "sign determinant acts outside the product of "
                           "upper half-planes and the stream is empty")
            self.pi = None
        else:
            if not is_totally_positive(generator):
                raise ValueError("generator must be totally positive")
            self.pi = generator

    def _trace_box_bounds(self, prec=96):
        """Rational per-embedding bounds enclosing |s| < 2 sqrt(sigma(pi))."""
        out = []
        with mp.workprec(prec):
            for k in EMBEDDING_LABELS:
                v = embed(self.pi, k, prec)
                hi = mp.mpf(2) * mp.sqrt(v.value + v.radius)
                out.append(Fraction(int(mp.ceil(hi * 1024)), 1024))
        return out

    def __iter__(self):
        if self.pi is None:
            return
        ell = self.p.p
        root = self.p.residue_root
        pi = self.pi
        four_pi = 4 * pi

        box = list(enumerate_box([self.height] * 6))
        box_set = {tuple(v.coeffs) for v in box}
        nonzero = [v for v in box if not v.is_zero()]
        if not nonzero:
            return
        inverses = [invert(v) for v in nonzero]
        embeds = np.array([[float(embed(v, k, 80).value)
                            for k in EMBEDDING_LABELS] for v in nonzero])
        hfloat = float(self.height)

        traces = []
        for s in enumerate_box(self._trace_box_bounds()):
            e = s * s - four_pi
            if all(certified_sign(e, k) < 0 for k in EMBEDDING_LABELS):
                traces.append(s)

        seq = 0
        seen = set()
        for s in traces:
            for a in box:
                d = s - a
                if tuple(d.coeffs) not in box_set:
                    continue
                r = a * d - pi
                if r.is_zero():
                    continue
                rvals = np.array([float(embed(r, k, 80).value)
                                  for k in EMBEDDING_LABELS])
                # c = r / b must land back in the box; screen with floats,
                # margins generous enough that no exact divisor is lost
                mask = np.all(np.abs(rvals) <= np.abs(embeds) * (hfloat + 1e-6)
                              + 1e-6, axis=1)
                for idx in np.flatnonzero(mask):
                    b = nonzero[idx]
                    c = r * inverses[idx]
                    if not c.is_integral():
                        continue
                    if tuple(c.coeffs) not in box_set:
                        continue
                    m = HeckeMatrix.from_entries((a, b, c, d), ell, root)
                    m = canonical_under_negation(m)
                    key = _flat_coeff_key(m)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield seq, m
                    seq += 1


def enumerate_alpha(p: PrimeIdealData, height, generator=None):
    """Stream of (sequence, matrix) over the elliptic det-pi box. See AlphaStream."""
    return AlphaStream(p, height, generator)


# ---------------------------------------------------------------------------
# Certificates

def config_identifier(cfg: EmbeddingConfig):
    """A short content hash of the configuration entries (not the stats)."""
    doc = cfg.to_json()["entries"]
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class CandidateCertificate:
    """Everything needed to re-check one candidate fixed point from scratch.

    Exact data (entries, trace, witness) pins the matrix and its
    arithmetic; numeric data (fixed tuple, residuals) carries its working
    precision so re-verification can demand consistency at double it.
    """

    ell: int
    d: int
    residue_root: int
    coset: object
    entries: tuple          # four IntegralElements (a, b, c, d)
    det: IntegralElement
    fixed: tuple            # six mpc values
    z0: object              # mpc, equal to fixed[0]
    z0_reduced: object      # mpc, fundamental-triangle representative
    word_length: int
    trace: FieldElement
    witness: tuple | None   # (a_w, b_w, d) with a_w^2 + d b_w^2 = ell
    sign_vector: str | None
    weil_ok: bool | None
    cm_shape: str | None
    residuals: dict         # tested label -> float residual
    tested_labels: tuple
    precision: int
    tolerance: float
    config_id: str
    dedup_key: str
    status: str = "unverified"

    def matrix(self):
        return HeckeMatrix.from_entries(self.entries, self.ell,
                                        self.residue_root)


def _dedup_key(z0_reduced, trace):
    with mp.workprec(96):
        qre = int(mp.nint(mp.re(z0_reduced) * (1 << 48)))
        qim = int(mp.nint(mp.im(z0_reduced) * (1 << 48)))
    tkey = ",".join(str(int(c)) for c in trace.coeffs)
    return f"{qre:x}:{qim:x}|{tkey}"


@dataclass
class SearchConfig:
    """Resolved parameters of one search run."""

    ell: int = 43
    d: int = 3
    height: Fraction = Fraction(3)
    precision: int = 128
    tolerance: float | None = None
    seed: int = 1729
    workers: int = 1
    resume_cursor: int = -1
    strict: bool = True
    config: EmbeddingConfig | None = None
    waive_validation: bool = False

    def __post_init__(self):
        self.height = Fraction(self.height)
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.strict and self.ell % 42 != 1:
            raise ValueError(
                f"{self.ell} is not 1 mod 42: the prime does not split "
                "completely and the default pipeline refuses it")
        if self.strict and self.d not in (3, 7):
            raise ValueError(f"d must be 3 or 7, got {self.d}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.height <= 0:
            raise ValueError("height bound must be positive")

    def context(self):
        return PrecisionContext(self.precision, self.tolerance)

    def prime_data(self):
        cat = prime_catalog()
        entry = cat.get(self.ell)
        if entry is not None and entry.residue_root is not None:
            return entry
        roots = roots_mod_ell(self.ell)
        if len(roots) != 6:
            raise ValueError(f"{self.ell} does not split completely")
        raise ValueError(f"no curated generator for {self.ell}")


def _fresh_counters():
    return {
        "enumerated": 0,
        "prescreen_fail": 0,
        "fixed_rejected": 0,
        "match_fail": 0,
        "trace_rejected": 0,
        "emitted": 0,
        "weil_true": 0,
        "weil_false": 0,
        "rational_b": 0,
        "distinct_keys": 0,
        "skipped_by_cursor": 0,
    }


class SearchStream:
    """Matrix-first search: iterate to receive certificates.

    For each enumerated matrix: prescreen, compute the fixed tuple, take
    z0 to be its first component (the first embedding is the identity
    component), reduce z0 for the dedup key, test the embedding match on
    every configured label, check the trace constraint, and assemble the
    certificate.  Counters and the cursor are live attributes.

    Work is split by residue of the sequence number: a stream owns the
    matrices with seq = partition (mod cfg.workers).  Matrices of the own
    partition at or below start_after are skipped for resume.  Since each
    matrix is judged independently, the union of the partition streams is
    set-identical to a single-worker run.
    """

    def __init__(self, cfg: SearchConfig, alphas=None, start_after=-1,
                 partition=0):
        self.cfg = cfg
        self.p = cfg.prime_data() if alphas is None else None
        self._alphas = alphas
        self.start_after = start_after
        if not 0 <= partition < cfg.workers:
            raise ValueError(f"partition {partition} outside the "
                             f"{cfg.workers} workers")
        self.partition = partition
        self.counters = _fresh_counters()
        self.cursor = start_after
        self.caveat = None
        self.keys = set()

        embedding_cfg = cfg.config
        if embedding_cfg is None:
            embedding_cfg = EmbeddingConfig.default()
        if not embedding_cfg.validated and not cfg.waive_validation:
            report = validate_config(embedding_cfg, ctx=cfg.context(),
                                     seed=cfg.seed)
            if not report.validated:
                raise Rejection("embedding configuration failed validation; "
                                "pass a waiver to proceed anyway")
        self.embedding_cfg = embedding_cfg
        self.config_id = config_identifier(embedding_cfg)

    def _stream(self):
        if self._alphas is not None:
            for i, m in enumerate(self._alphas):
                yield i, m
            return
        stream = enumerate_alpha(self.p, self.cfg.height)
        yield from stream
        self.caveat = stream.caveat

    def __iter__(self):
        cfg = self.cfg
        ctx = cfg.context()
        counters = self.counters
        # injected streams bypass enumeration, so the stream-level
        # prescreen does not apply to them
        p = self.p
        tri = TriangleData.get(STANDARD_ANGLES, max(ctx.precision, 160))
        with mp.workprec(ctx.precision + 32):
            tol = ctx.tol()
            for seq, m in self._stream():
                if seq % cfg.workers != self.partition:
                    continue
                if seq <= self.start_after:
                    counters["skipped_by_cursor"] += 1
                    continue
                self.cursor = seq
                counters["enumerated"] += 1
                if p is not None and not prescreen_mod_ell(m, p):
                    counters["prescreen_fail"] += 1
                    continue
                try:
                    w = fixed_tuple(m, ctx)
                except Rejection:
                    counters["fixed_rejected"] += 1
                    continue
                cert = self._assemble(m, w, tri, ctx, tol)
                if cert is not None:
                    counters["emitted"] += 1
                    if cert.dedup_key not in self.keys:
                        self.keys.add(cert.dedup_key)
                        counters["distinct_keys"] += 1
                    yield cert

    def _assemble(self, m, w, tri, ctx, tol):
        cfg = self.cfg
        counters = self.counters
        z0 = w[0]
        z0_red, word = reduce_to_fundamental(z0, tri, ctx)

        residuals = {1: 0.0}
        tested = [1]
        for pos, k in enumerate(EMBEDDING_LABELS[1:], start=1):
            if not self.embedding_cfg.has(k):
                continue
            fk = component_map(z0, k, self.embedding_cfg, ctx,
                               waive_validation=cfg.waive_validation)
            res = abs(fk - w[pos])
            if res >= tol:
                counters["match_fail"] += 1
                return None
            residuals[k] = float(res)
            tested.append(k)

        trace = m.trace()
        b_w = trace_constraint_check(trace, cfg.ell, cfg.d)
        if b_w is None:
            counters["trace_rejected"] += 1
            return None
        a_w = trace / 2
        sv = sign_vector(b_w)
        weil = weil_signature_check(sv)
        rational = all(c == 0 for c in b_w.coeffs[1:])
        if rational:
            counters["rational_b"] += 1
            if weil:
                raise RuntimeError("internal: rational witness cannot carry "
                                   "a balanced sign vector")
        counters["weil_true" if weil else "weil_false"] += 1
        shape = assignment_shape(SignAssignment(sv.plus_labels)) if weil \
            else None

        return CandidateCertificate(
            ell=cfg.ell,
            d=cfg.d,
            residue_root=m.residue_root,
            coset=coset_label(m),
            entries=m.entries,
            det=m.det,
            fixed=w,
            z0=z0,
            z0_reduced=z0_red,
            word_length=len(word),
            trace=trace,
            witness=(a_w, b_w, cfg.d),
            sign_vector=str(sv),
            weil_ok=weil,
            cm_shape=shape,
            residuals=residuals,
            tested_labels=tuple(tested),
            precision=ctx.precision,
            tolerance=float(tol),
            config_id=self.config_id,
            dedup_key=_dedup_key(z0_red, trace),
        )


def search_mode_b(cfg: SearchConfig, alphas=None, start_after=-1, partition=0):
    """The matrix-first search as a SearchStream; iterate for certificates."""
    return SearchStream(cfg, alphas=alphas, start_after=start_after,
                        partition=partition)


# ---------------------------------------------------------------------------
# Verification

@dataclass(frozen=True)
class VerificationReport:
    verified: bool
    failed: str | None
    checks: tuple
    precision: int

    def lines(self):
        out = []
        for name, ok, detail in self.checks:
            mark = "pass" if ok else "FAIL"
            out.append(f"{name}: {mark}" + (f" ({detail})" if detail else ""))
        out.append("verified" if self.verified else
                   f"NOT VERIFIED: {self.failed}")
        return out


def verify_certificate(cert: CandidateCertificate, cfg=None, ctx2=None):
    """Re-check a certificate from scratch at doubled precision.

    Exact claims (determinant, ellipticity, trace constraint, witness,
    signs) are recomputed exactly; numeric claims (the fixed tuple, the
    embedding-match residuals) are recomputed at double the recorded
    precision and must agree with the recorded values to within the
    recorded precision's resolution.  The first failing check is named.
    """
    if ctx2 is None:
        ctx2 = PrecisionContext(2 * cert.precision)
    checks = []

    def check(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        return bool(ok)

    # determinant
    try:
        m = cert.matrix()
        det_ok = (m.det == cert.det)
        detail = ""
    except ValueError as exc:
        m = None
        det_ok = False
        detail = str(exc)
    check("determinant", det_ok, detail)

    if m is not None:
        check("ellipticity", all(ellipticity_filter(m)))
        try:
            check("coset label", coset_label(m) == cert.coset,
                  f"recomputed {coset_label(m)}, recorded {cert.coset}")
        except ValueError as exc:
            check("coset label", False, str(exc))
    else:
        check("ellipticity", False, "no matrix")
        check("coset label", False, "no matrix")

    # fixed tuple at doubled precision
    tuple_ok = False
    w_hi = None
    if m is not None:
        try:
            w_hi = fixed_tuple(m, ctx2)
            with mp.workprec(ctx2.precision + 16):
                thr = mp.ldexp(1, 16 - cert.precision)
                tuple_ok = all(
                    abs(wr - wh) <= thr * (1 + abs(wh))
                    for wr, wh in zip(cert.fixed, w_hi))
                z0_ok = abs(cert.z0 - cert.fixed[0]) == 0
            tuple_ok = tuple_ok and z0_ok
        except Rejection as exc:
            check("fixed tuple residual", False, str(exc))
            tuple_ok = None
    if tuple_ok is not None:
        check("fixed tuple residual", bool(tuple_ok))

    # embedding match at doubled precision
    if cfg is None:
        try:
            cfg = EmbeddingConfig.default()
        except Exception:
            cfg = None
    if cfg is not None:
        check("config identity", config_identifier(cfg) == cert.config_id)
        if w_hi is not None:
            match_ok = True
            detail = ""
            with mp.workprec(ctx2.precision + 32):
                for pos, k in enumerate(EMBEDDING_LABELS):
                    if k not in cert.tested_labels:
                        continue
                    if k == 1:
                        res = abs(w_hi[0] - w_hi[0])
                    elif not cfg.has(k):
                        match_ok = False
                        detail = f"config lost label {k}"
                        break
                    else:
                        fk = component_map(w_hi[0], k, cfg, ctx2,
                                           waive_validation=True)
                        res = abs(fk - w_hi[pos])
                    allowed = max(mp.mpf(cert.tolerance),
                                  4 * mp.mpf(cert.residuals.get(k, 0.0)))
                    if res > allowed:
                        match_ok = False
                        detail = f"label {k} residual {mp.nstr(res, 8)}"
                        break
            check("embedding match", match_ok, detail)
    else:
        check("config identity", False, "no configuration available")

    # trace constraint, recomputed exactly
    trace_ok = False
    b_w = None
    if m is not None and m.trace() == cert.trace:
        b_w = trace_constraint_check(cert.trace, cert.ell, cert.d)
        trace_ok = b_w is not None
    check("trace constraint", trace_ok)

    # norm witness
    witness_ok = False
    if cert.witness is not None:
        a_w, bw_rec, d_rec = cert.witness
        witness_ok = (
            d_rec == cert.d
            and not bw_rec.is_zero()
            and a_w + a_w == cert.trace
            and a_w * a_w + bw_rec * bw_rec * cert.d == FieldElement((cert.ell,))
        )
    check("norm witness", witness_ok)

    # sign vector and the Weil flag
    sv_ok = weil_ok = False
    if cert.witness is not None and witness_ok:
        sv = sign_vector(cert.witness[1])
        sv_ok = str(sv) == cert.sign_vector
        rational = all(c == 0 for c in cert.witness[1].coeffs[1:])
        weil_ok = (weil_signature_check(sv) == cert.weil_ok
                   and not (cert.weil_ok and rational))
    check("sign vector", sv_ok)
    check("weil flag", weil_ok)

    failed = next((name for name, ok, _ in checks if not ok), None)
    return VerificationReport(
        verified=failed is None,
        failed=failed,
        checks=tuple(checks),
        precision=ctx2.precision,
    )
