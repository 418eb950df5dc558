"""Exact arithmetic in the totally real sextic field L = Q(t), t = 2cos(pi/21).

L is the maximal real subfield of the 42nd cyclotomic field.  Its ring of
integers is Z[t], the class number is 1, and the Galois group is cyclic of
order 6.  Elements are stored as exact rational coordinates in the power
basis 1, t, ..., t^5; all ring operations, norms, traces and residue maps
are exact.  Real embeddings are evaluated with interval arithmetic so that
every sign decision is certified (the interval must exclude zero) or the
element is exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv, mp

DEGREE = 6

# The six real embeddings send t to 2cos(k*pi/21); these k are the canonical
# labels, listed in the fixed order used for sign vectors everywhere.
EMBEDDING_LABELS = (1, 5, 11, 13, 17, 19)

# Orbit order of the labels under the Galois generator (k -> 11k mod +-42).
GALOIS_CYCLE = (1, 11, 5, 13, 17, 19)

_F0 = Fraction(0)
_F1 = Fraction(1)


def _cyclotomic42():
    # Phi_42(x), ascending coefficients.
    return (1, 1, 0, -1, -1, 0, 1, 0, -1, -1, 0, 1, 1)


def _chebyshev_like(k):
    """Polynomial c_k(y) with c_k(x + 1/x) = x^k + x^-k, ascending coeffs."""
    c0, c1 = [2], [0, 1]
    if k == 0:
        return c0
    for _ in range(k - 1):
        nxt = [0] + c1
        for i, v in enumerate(c0):
            nxt[i] -= v
        c0, c1 = c1, nxt
    return c1


def _derive_min_poly():
    """Minimal polynomial of t = 2cos(pi/21) from Phi_42 by y = x + 1/x.

    Phi_42 is palindromic of degree 12, so x^-6 Phi_42(x) is a Z-combination
    of the c_k(y); collecting terms gives a monic sextic.
    """
    phi = _cyclotomic42()
    out = [phi[6]]
    for k in range(1, 7):
        ck = _chebyshev_like(k)
        while len(out) < len(ck):
            out.append(0)
        for i, v in enumerate(ck):
            out[i] += phi[6 + k] * v
    return tuple(out)


# Stored coefficients, self-checked against the derivation at import time.
MIN_POLY = (1, 8, 8, -6, -6, 1, 1)

if _derive_min_poly() != MIN_POLY:
    raise AssertionError("minimal polynomial derivation disagrees with stored coefficients")


def minimal_polynomial():
    """Monic minimal polynomial of t, ascending coefficient tuple (degree 6)."""
    return MIN_POLY


def _reduction_rows():
    # t^6 .. t^10 expressed in the power basis, for products of two elements.
    rows = []
    top = [-Fraction(c) for c in MIN_POLY[:6]]  # t^6
    rows.append(tuple(top))
    cur = top
    for _ in range(4):
        shifted = [_F0] + cur[:5]
        carry = cur[5]
        nxt = [shifted[i] + carry * rows[0][i] for i in range(6)]
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


_REDUCE = _reduction_rows()


class FieldElement:
    """An element of L as six exact rational coordinates in 1, t, ..., t^5."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) > DEGREE:
            if any(cs[DEGREE:]):
                raise ValueError("coordinate vector longer than the field degree")
            cs = cs[:DEGREE]
        elif len(cs) < DEGREE:
            cs = cs + (_F0,) * (DEGREE - len(cs))
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, *a):
        raise AttributeError("FieldElement is immutable")

    @classmethod
    def from_rational(cls, q):
        return cls((Fraction(q),))

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return s

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def is_integral(self):
        """True when the element lies in O_L = Z[t]."""
        return all(c.denominator == 1 for c in self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        prod = [_F0] * 11
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:6]
        for d in range(6, 11):
            c = prod[d]
            if c:
                row = _REDUCE[d - 6]
                for i in range(6):
                    out[i] += c * row[i]
        return FieldElement(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return invert(self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * invert(other)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * invert(self)


def _coerce(v):
    if isinstance(v, FieldElement):
        return v
    if isinstance(v, (int, Fraction)):
        return FieldElement((Fraction(v),))
    return NotImplemented


class IntegralElement(FieldElement):
    """A FieldElement constrained to Z[t] at construction time."""

    __slots__ = ()

    def __init__(self, coeffs):
        super().__init__(coeffs)
        if not self.is_integral():
            raise ValueError(f"not integral: {list(self.coeffs)}")


ZERO = FieldElement(())
ONE = FieldElement((1,))
T = FieldElement((0, 1))


# ---------------------------------------------------------------------------
# Galois action

def _galois_images():
    # sigma^j(t) = c_{11^j mod 42}(t); the exponents runs through the label cycle.
    images = []
    for k in GALOIS_CYCLE:
        ck = _chebyshev_like(k)
        el = ZERO
        tp = ONE
        for c in ck:
            if c:
                el = el + c * tp
            tp = tp * T
        images.append(el)
    return tuple(images)


_GALOIS_T = _galois_images()


def galois_apply(x, j):
    """Apply the j-th power of the Galois generator (t -> 2cos(11 pi/21))."""
    j %= 6
    if j == 0:
        return x
    img = _GALOIS_T[j]
    # Horner evaluation of the coordinate polynomial at sigma^j(t).
    acc = FieldElement((x.coeffs[5],))
    for i in range(4, -1, -1):
        acc = acc * img + x.coeffs[i]
    return acc


def galois_orbit(x):
    return tuple(galois_apply(x, j) for j in range(6))


def next_label(k, j=1):
    """Follow the embedding-label cycle j steps: k -> 11^j k mod +-42."""
    i = GALOIS_CYCLE.index(k)
    return GALOIS_CYCLE[(i + j) % 6]


# ---------------------------------------------------------------------------
# Norm, trace, inversion (multiplication matrix, fully exact)

def _mul_matrix(x):
    cols = []
    for j in range(6):
        basis = [_F0] * 6
        basis[j] = _F1
        col = (x * FieldElement(basis)).coeffs
        cols.append(col)
    return cols  # cols[j][i] = coordinate i of x * t^j


def trace(x):
    """Field trace L -> Q, exact."""
    cols = _mul_matrix(x)
    return sum(cols[i][i] for i in range(6))


def norm(x):
    """Field norm L -> Q, exact (determinant of the multiplication matrix)."""
    cols = _mul_matrix(x)
    a = [[cols[j][i] for j in range(6)] for i in range(6)]
    det = _F1
    for c in range(6):
        piv = None
        for r in range(c, 6):
            if a[r][c]:
                piv = r
                break
        if piv is None:
            return _F0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, 6):
            f = a[r][c] * inv
            if f:
                for cc in range(c, 6):
                    a[r][cc] -= f * a[c][cc]
    return det


def invert(x):
    """Multiplicative inverse in L; raises ZeroDivisionError on zero."""
    if x.is_zero():
        raise ZeroDivisionError("inversion of zero in L")
    cols = _mul_matrix(x)
    a = [[cols[j][i] for j in range(6)] + [(_F1 if i == 0 else _F0)] for i in range(6)]
    for c in range(6):
        piv = None
        for r in range(c, 6):
            if a[r][c]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(6):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    return FieldElement(a[i][6] for i in range(6))


def power_sums(upto):
    """Trace of t^k for k = 0..upto, by Newton's identities (exact integers)."""
    n = DEGREE
    a = MIN_POLY  # ascending, monic
    e = [Fraction((-1) ** i * a[n - i]) for i in range(n + 1)]  # elementary symmetric
    s = [Fraction(n)]
    for k in range(1, upto + 1):
        acc = _F0
        for i in range(1, min(k - 1, n) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[k - i]
        if k <= n:
            acc += (-1) ** (k - 1) * e[k] * k
        s.append(acc)
    return [int(v) for v in s]


# ---------------------------------------------------------------------------
# Embeddings with certified error bounds

@dataclass(frozen=True)
class EmbeddingValue:
    """A real embedding value with a rigorous absolute error radius."""

    label: int
    value: mpmath.mpf
    radius: mpmath.mpf
    prec: int

    def interval(self):
        return (self.value - self.radius, self.value + self.radius)


class PrecisionExhausted(ArithmeticError):
    """A certified sign or bound could not be established below the precision cap."""


def _embed_interval(x, k, prec):
    """Enclosing interval for sigma_k(x) at the given working precision."""
    old = iv.prec
    iv.prec = prec
    try:
        node = 2 * iv.cos(iv.pi * k / 21)
        acc = iv.mpf(int(x.coeffs[5].numerator)) / int(x.coeffs[5].denominator)
        for i in range(4, -1, -1):
            c = x.coeffs[i]
            acc = acc * node + iv.mpf(int(c.numerator)) / int(c.denominator)
        return acc
    finally:
        iv.prec = old


def embed(x, k, prec=53, max_prec=1 << 14):
    """Certified value of sigma_k(x) with relative error below 2^(1-prec).

    Exact zero is returned with radius 0.  For nonzero x the working interval
    is refined by doubling until the relative-width criterion holds.
    """
    if k not in EMBEDDING_LABELS:
        raise ValueError(f"unknown embedding label {k}")
    if x.is_zero():
        return EmbeddingValue(k, mp.mpf(0), mp.mpf(0), prec)
    wp = max(prec + 16, 64)
    while True:
        ival = _embed_interval(x, k, wp)
        with mp.workprec(wp + 8):
            lo, hi = mp.mpf(ival.a), mp.mpf(ival.b)
            mid = (lo + hi) / 2
            rad = (hi - lo) / 2 + abs(mid) * mp.mpf(2) ** -(wp + 4)
            if mid != 0 and rad < abs(mid) * mp.mpf(2) ** (1 - prec):
                return EmbeddingValue(k, mid, rad, prec)
        if wp > max_prec:
            raise PrecisionExhausted(f"embedding of {x} at k={k} did not stabilize")
        wp *= 2


def embed_all(x, prec=53):
    return tuple(embed(x, k, prec) for k in EMBEDDING_LABELS)


def certified_sign(x, k, max_prec=1 << 14):
    """Sign of sigma_k(x) in {-1, 0, +1}; 0 only for the exact zero element."""
    if x.is_zero():
        return 0
    wp = 64
    while wp <= max_prec:
        ival = _embed_interval(x, k, wp)
        if ival.a > 0:
            return 1
        if ival.b < 0:
            return -1
        wp *= 2
    raise PrecisionExhausted(f"sign of {x} at k={k} undecided at {max_prec} bits")


def signs(x, max_prec=1 << 14):
    """Tuple of certified embedding signs in the canonical label order."""
    return tuple(certified_sign(x, k, max_prec) for k in EMBEDDING_LABELS)


def is_totally_positive(x):
    return all(s > 0 for s in signs(x))


def compare_embedding(x, bound, k):
    """Certified comparison sigma_k(x) <= bound for a rational bound.

    Returns True/False; exact ties count as within the bound.
    """
    d = FieldElement((Fraction(bound),)) - x
    return certified_sign(d, k) >= 0


# ---------------------------------------------------------------------------
# Residues and splitting data

def is_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def roots_mod_ell(ell):
    """Roots of the minimal polynomial mod ell (sorted).  O(ell) scan."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    out = []
    for r in range(ell):
        acc = 0
        for c in reversed(MIN_POLY):
            acc = (acc * r + c) % ell
        if acc == 0:
            out.append(r)
    return out


def residue_mod_prime(x, ell, root):
    """Image of x in the degree-one residue field O_L/(ell, t - root) = F_ell."""
    acc = 0
    for c in reversed(x.coeffs):
        if c.denominator % ell == 0:
            raise ValueError(f"denominator of {x} not invertible mod {ell}")
        val = c.numerator * pow(c.denominator, -1, ell)
        acc = (acc * root + val) % ell
    return acc


@dataclass(frozen=True)
class PrimeIdealData:
    """Splitting data for a rational prime in O_L, with a principal generator."""

    p: int
    residue_degree: int
    ramification: int
    num_primes: int
    ideal_norm: int
    generator: FieldElement | None
    generator_norm: int | None
    residue_root: int | None = None


def _factor_degrees_mod_p(p):
    """Degrees (with multiplicity) of the irreducible factors of m mod p.

    Brute force over monic polynomials of low degree; m has degree 6 so trial
    division by all monic irreducibles of degree <= 3 settles the shape.
    """
    def polmodp(f, g):
        f = [c % p for c in f]
        g = [c % p for c in g]
        while len(f) >= len(g):
            lead = f[-1]
            if lead:
                inv = pow(g[-1], -1, p)
                q = lead * inv % p
                off = len(f) - len(g)
                for i in range(len(g)):
                    f[off + i] = (f[off + i] - q * g[i]) % p
            f.pop()
        while f and f[-1] == 0:
            f.pop()
        return f

    def poldivmod(f, g):
        f = [c % p for c in f]
        q = [0] * max(1, len(f) - len(g) + 1)
        while len(f) >= len(g) and any(f):
            lead = f[-1]
            if lead:
                inv = pow(g[-1], -1, p)
                co = lead * inv % p
                off = len(f) - len(g)
                q[off] = co
                for i in range(len(g)):
                    f[off + i] = (f[off + i] - co * g[i]) % p
            f.pop()
            while f and f[-1] == 0 and len(f) >= len(g):
                f.pop()
        while f and f[-1] == 0:
            f.pop()
        return q, f

    def irreducibles(d):
        # all monic irreducible polys of degree d over F_p, small d only
        from itertools import product as iproduct
        for tail in iproduct(range(p), repeat=d):
            f = list(tail) + [1]
            if d == 1:
                yield f
                continue
            if f[0] == 0:
                continue
            has_root = any(
                sum(c * pow(r, i, p) for i, c in enumerate(f)) % p == 0 for r in range(p)
            )
            if has_root:
                continue
            if d == 2:
                yield f
                continue
            if d == 3:
                yield f  # cubic with no roots is irreducible

    degs = []
    rem = [c % p for c in MIN_POLY]
    for d in (1, 2, 3):
        for g in irreducibles(d):
            while True:
                q, r = poldivmod(rem, g)
                if r:
                    break
                degs.append(d)
                rem = q
                if len(rem) == 1:
                    break
            if len(rem) == 1:
                break
        if len(rem) == 1:
            break
    if len(rem) > 1:
        degs.append(len(rem) - 1)  # what is left is irreducible (degree 4..6)
    return sorted(degs)


def splitting_data(p):
    """Splitting shape of p in O_L from the factorization of m mod p."""
    degs = _factor_degrees_mod_p(p)
    if 453789 % p:
        # unramified: factor degrees are the residue degrees
        return {"p": p, "ramified": False, "residue_degrees": degs}
    return {"p": p, "ramified": True, "factor_degrees_with_multiplicity": degs}


def minkowski_bound_floor():
    """Floor of the Minkowski bound (720/6^6) sqrt(453789), decided exactly."""
    b2 = Fraction(720, 6**6) ** 2 * 453789
    n = 0
    while Fraction((n + 1) ** 2) <= b2:
        n += 1
    return n


def prime_catalog():
    """Verified splitting and generator data for the primes the construction uses."""
    pi1 = IntegralElement((-3, 1, -1, 0, 1))
    g7 = IntegralElement((-1, 0, 1))
    g3 = IntegralElement((-1, -1, -2, -1))
    g5 = IntegralElement((2, 0, 1, 1))
    return {
        2: PrimeIdealData(2, 6, 1, 1, 64, None, None),
        3: PrimeIdealData(3, 3, 2, 1, 27, g3, -27),
        5: PrimeIdealData(5, 3, 1, 2, 125, g5, -125),
        7: PrimeIdealData(7, 1, 6, 1, 7, g7, 7),
        43: PrimeIdealData(43, 1, 1, 6, 43, pi1, 43, residue_root=5),
    }


def hecke_prime_generator():
    """The distinguished generator pi_1 = t^4 - t^2 + t - 3 of (43, t-5)."""
    return IntegralElement((-3, 1, -1, 0, 1))


# ---------------------------------------------------------------------------
# Box enumeration (embedding-bounded lattice points of Z[t])

def _lagrange_coeff_bounds(prec=96):
    """Rigorous upper bounds on |(V^-1)[j][k]| via interval Lagrange bases.

    Row j of the inverse embedding matrix consists of the degree-j
    coefficients of the Lagrange basis polynomials at the six nodes t_k.
    """
    old = iv.prec
    iv.prec = prec
    try:
        nodes = [2 * iv.cos(iv.pi * k / 21) for k in EMBEDDING_LABELS]
        bounds = [[None] * 6 for _ in range(6)]
        for kidx in range(6):
            num = [iv.mpf(1)]
            for i, nd in enumerate(nodes):
                if i == kidx:
                    continue
                # multiply num by (y - nd)
                nxt = [iv.mpf(0)] * (len(num) + 1)
                for d, co in enumerate(num):
                    nxt[d + 1] += co
                    nxt[d] -= co * nd
                num = nxt
            den = iv.mpf(1)
            for i, nd in enumerate(nodes):
                if i != kidx:
                    den *= nodes[kidx] - nd
            for j in range(6):
                q = abs(num[j] / den)
                # q.b is a zero-width interval; unwrap its raw upper
                # endpoint so downstream real arithmetic stays real.
                bounds[j][kidx] = mp.make_mpf(q.b._mpi_[1])
        return bounds
    finally:
        iv.prec = old


_LAGRANGE_BOUNDS = None


def _coeff_box(bounds):
    """Integer coefficient bounds containing the preimage of the embedding box."""
    global _LAGRANGE_BOUNDS
    if _LAGRANGE_BOUNDS is None:
        _LAGRANGE_BOUNDS = _lagrange_coeff_bounds()
    out = []
    with mp.workprec(120):
        for j in range(6):
            s = mp.mpf(0)
            for kidx in range(6):
                b = bounds[kidx]
                s += _LAGRANGE_BOUNDS[j][kidx] * mp.mpf(b.numerator) / b.denominator
            # pad against rounding before taking the floor; a slightly larger
            # box only adds candidates that the exact filter rejects
            s = s * (1 + mp.mpf(2) ** -40) + mp.mpf(2) ** -40
            out.append(int(mp.floor(s)))
    return out


def _gram_matrix():
    s = power_sums(10)
    return [[Fraction(s[i + j]) for j in range(6)] for i in range(6)]


def _ldl(gram):
    n = 6
    L = [[_F0] * n for _ in range(n)]
    D = [_F0] * n
    for i in range(n):
        L[i][i] = _F1
        for j in range(i):
            s = gram[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = s / D[j]
        D[i] = gram[i][i] - sum(L[i][k] ** 2 * D[k] for k in range(i))
    return L, D


_GRAM_LDL = None


def _floor_sqrt_fraction(q):
    """floor(sqrt(q)) for a nonnegative Fraction, exact."""
    if q < 0:
        raise ValueError("negative radicand")
    return math.isqrt(q.numerator * q.denominator) // q.denominator


def _int_range_abs_quadratic(center, radius2):
    """Integers n with (n + center)^2 <= radius2, both arguments Fractions."""
    if radius2 < 0:
        return range(0, 0)
    # start from an integer sqrt guess, then trim with the exact predicate;
    # the satisfying set is a contiguous interval, possibly empty, so each
    # trim stops at the opposite endpoint
    s = _floor_sqrt_fraction(radius2) + 2
    lo = math.ceil(-center - s)
    hi = math.floor(-center + s)
    while lo <= hi and (Fraction(lo) + center) ** 2 > radius2:
        lo += 1
    while lo <= hi and (Fraction(hi) + center) ** 2 > radius2:
        hi -= 1
    if lo > hi:
        return range(0, 0)
    return range(lo, hi + 1)


def enumerate_box(bounds, coeff_bound=None, certified=True):
    """All x in Z[t] with |sigma_k(x)| <= bounds[k] for every k, each once.

    bounds are taken as exact rationals (ints, Fractions, or floats converted
    to their exact binary value).  Candidates come from the integer
    coefficient preimage box of the embedding box, pruned by the exact
    trace-form ellipsoid sum_k sigma_k(x)^2 <= sum_k bounds[k]^2, and every
    candidate is kept only after a certified per-embedding comparison.
    Deterministic order: lexicographic in the coefficient vector read from
    the t^5 coordinate down.

    certified=False skips the final per-embedding filter and yields the
    pruned superset instead; callers that re-verify candidates exactly can
    use it to avoid interval work on elements they will reject anyway.
    """
    global _GRAM_LDL
    bs = [Fraction(b) for b in bounds]
    if len(bs) != 6 or any(b <= 0 for b in bs):
        raise ValueError("need six positive bounds")
    box = _coeff_box(bs)
    if coeff_bound is not None:
        box = [min(b, int(coeff_bound)) for b in box]
    if _GRAM_LDL is None:
        _GRAM_LDL = _ldl(_gram_matrix())
    L, D = _GRAM_LDL
    r2 = sum(b * b for b in bs)

    out = []

    def descend(level, fixed, remaining):
        # fixed: coords level+1..5 already chosen (dict index->int)
        center = sum(L[j][level] * fixed[j] for j in range(level + 1, 6))
        if D[level] == 0:
            rng = range(-box[level], box[level] + 1)
        else:
            rng = _int_range_abs_quadratic(center, remaining / D[level])
        for v in rng:
            if abs(v) > box[level]:
                continue
            used = D[level] * (Fraction(v) + center) ** 2
            if used > remaining:
                continue
            fixed[level] = v
            if level == 0:
                coeffs = [fixed[i] for i in range(6)]
                out.append(tuple(coeffs))
            else:
                descend(level - 1, fixed, remaining - used)
        fixed.pop(level, None)

    descend(5, {}, r2)
    # lexicographic from the top coordinate down, deterministic
    out.sort(key=lambda c: tuple(reversed(c)))
    for coeffs in out:
        x = IntegralElement(coeffs)
        if not certified:
            yield x
            continue
        ok = True
        for kidx, k in enumerate(EMBEDDING_LABELS):
            hi = FieldElement((bs[kidx],)) - x
            lo = FieldElement((bs[kidx],)) + x
            if certified_sign(hi, k) < 0 or certified_sign(lo, k) < 0:
                ok = False
                break
        if ok:
            yield x


def units_in_box(height):
    """Units of O_L with every |sigma_k| <= height, in enumeration order."""
    for x in enumerate_box([Fraction(height)] * 6):
        if x.is_zero():
            continue
        n = norm(x)
        if n == 1 or n == -1:
            yield x


def find_totally_positive_associate(x, height=3, widen=2):
    """A totally positive associate u*x found by a bounded unit search.

    Scans units u with embeddings bounded by `height` (then once more by
    `height*widen`) for a sign vector matching x; returns u*x or None.  A
    None answer means none was found at this height, not that none exists.
    """
    if x.is_zero():
        raise ValueError("zero has no associates")
    target = signs(x)
    if all(s > 0 for s in target):
        return x
    for h in (height, height * widen):
        for u in units_in_box(h):
            if signs(u) == target:
                y = u * x
                if is_totally_positive(y):
                    return y
    return None


# ---------------------------------------------------------------------------
# Exact 2x2 matrices over L

class Mat2:
    """A 2x2 matrix with FieldElement entries, immutable, fully exact.

    Entries are stored row-major as a 4-tuple.  Scalars (int, Fraction,
    FieldElement) are accepted anywhere an entry is expected.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        e = tuple(_coerce(v) for v in entries)
        if len(e) != 4 or any(v is NotImplemented for v in e):
            raise ValueError("Mat2 needs four field-coercible entries")
        object.__setattr__(self, "entries", e)

    def __setattr__(self, *_):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def identity(cls):
        return cls((ONE, ZERO, ZERO, ONE))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[2 * i + j]

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mat2((a * e + b * g, a * f + b * h,
                     c * e + d * g, c * f + d * h))

    def __neg__(self):
        return Mat2(tuple(-v for v in self.entries))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = Mat2.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def det(self):
        a, b, c, d = self.entries
        return a * d - b * c

    def trace(self):
        a, _, _, d = self.entries
        return a + d

    def adjugate(self):
        a, b, c, d = self.entries
        return Mat2((d, -b, -c, a))

    def galois(self, j):
        return Mat2(tuple(galois_apply(v, j) for v in self.entries))

    def __repr__(self):
        a, b, c, d = self.entries
        return f"Mat2(({a!r}, {b!r}, {c!r}, {d!r}))"
