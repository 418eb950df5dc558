"""Schwarz triangle maps for the (14, 21, 42) family, at working precision.

The map from the upper half w-plane onto a hyperbolic triangle is a ratio of
two solutions of the Gauss hypergeometric equation,

    s_raw(w) = w^(1-c) F(a-c+1, b-c+1; 2-c; w) / F(a, b; c; w),

whose image is a circular-arc triangle with vertex angles pi*|1-c| at s(0),
pi*|c-a-b| at s(1) and pi*|a-b| at s(infinity).  For angles (pi/14, pi/21,
pi/42) the parameters are (a, b, c) = (19/42, 3/7, 13/14).  Everything here
is built from that ratio:

  * `hyp2f1` evaluates F by direct series where it converges comfortably and
    by the classical w -> w/(w-1), 1-w, 1/w transformations elsewhere, with
    an explicit error bound (rigorous tail for the direct series, composed
    tail plus a first-order rounding model for the transformed ones, and a
    doubled-precision agreement heuristic in the small region near the two
    points where every transformed argument has modulus one).
  * `TriangleData` pins the image triangle to a fixed normalization: the
    vertex for w = infinity sits at i, the vertex for w = 1 sits on the
    imaginary axis above it, and the third vertex falls where the hyperbolic
    side lengths put it.  The scaling constant kappa and the final Moebius
    matrix come from hyperbolic trigonometry (side length from the angles,
    disk radius tanh(d/2)), so the image edges are genuine geodesics.
  * `schwarz_inverse` runs a seeded Newton iteration on the ratio, using the
    Wronskian closed form for its derivative.
  * `reduce_to_fundamental` folds any point of the upper half-plane into the
    closed triangle by reflecting across the nearest violated edge, keeping
    the exact reflection word so callers can transport points back out.
  * `component_map` and `validate_config` wire the above into the family of
    conjugate-triangle maps: component k reduces to the fundamental triangle,
    pulls back through the inverse map, pushes forward through the k-th
    triangle, and replays the reflection word on that side.  A configuration
    of candidate triangles is accepted only if the functional equation for
    the order-21 generator B = [[0, -1], [1, t]] holds at sampled points.

The assignment of triangles to the embeddings k >= 2 is genuinely open; the
shipped configuration contains only the k = 1 entry, and the candidate
helper plus `validate_config` turn any proposed completion into a pass/fail
experiment rather than an assumption.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from importlib import resources

import mpmath
from mpmath import mp

from .field import EMBEDDING_LABELS, Mat2, T, embed

__all__ = [
    "HypergeometricParams",
    "PrecisionContext",
    "Hyp2F1Result",
    "BranchCutError",
    "ContinuationError",
    "hyp2f1",
    "gauss_value",
    "Geodesic",
    "TriangleData",
    "ReflectionWord",
    "reduce_to_fundamental",
    "schwarz_map",
    "schwarz_inverse",
    "SchwarzInverseError",
    "ConfigEntry",
    "EmbeddingConfig",
    "ValidationReport",
    "component_map",
    "validate_config",
    "elliptic_fixed_point",
    "propose_candidate_angles",
    "B_MATRIX",
    "b_matrix_numeric",
    "STANDARD_ANGLES",
    "DEFAULT_PARAMS",
]


class BranchCutError(ValueError):
    """Evaluation on [1, oo) was requested without choosing a side."""


class ContinuationError(ArithmeticError):
    """No evaluation strategy applies (non-convergent or degenerate)."""


class SchwarzInverseError(ArithmeticError):
    """Newton iteration for the inverse map failed to converge."""


# ---------------------------------------------------------------------------
# Parameters and precision bookkeeping

STANDARD_ANGLES = (Fraction(1, 14), Fraction(1, 21), Fraction(1, 42))


@dataclass(frozen=True)
class HypergeometricParams:
    """Exact rational parameters (a, b, c) of the Gauss function."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c.denominator == 1 and self.c <= 0:
            raise ValueError("c must not be a non-positive integer")

    @classmethod
    def from_angles(cls, mu0, mu1, muinf):
        """Parameters of the triangle with angles pi*mu0, pi*mu1, pi*muinf.

        The three angles sit at the images of w = 0, 1, infinity; they must
        be positive rationals with sum below one (hyperbolic area > 0).
        """
        mu0, mu1, muinf = Fraction(mu0), Fraction(mu1), Fraction(muinf)
        if min(mu0, mu1, muinf) <= 0:
            raise ValueError("angles must be positive")
        if mu0 + mu1 + muinf >= 1:
            raise ValueError("angle sum must be below pi")
        c = 1 - mu0
        a = (1 - mu0 - mu1 + muinf) / 2
        b = (1 - mu0 - mu1 - muinf) / 2
        return cls(a, b, c)

    def second_kind(self):
        """Parameters of the companion solution w^(1-c) F(a-c+1, b-c+1; 2-c)."""
        return HypergeometricParams(self.a - self.c + 1, self.b - self.c + 1,
                                    2 - self.c)

    def angles(self):
        """The triple (|1-c|, |c-a-b|, |a-b|) of angle fractions."""
        return (abs(1 - self.c), abs(self.c - self.a - self.b),
                abs(self.a - self.b))


DEFAULT_PARAMS = HypergeometricParams(Fraction(19, 42), Fraction(3, 7),
                                      Fraction(13, 14))


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in bits, accept/reject tolerance, series term cap.

    The tolerance may not undercut 2^(6-precision): six guard bits are the
    floor below which accept/reject decisions would be reading noise.
    """

    precision: int = 128
    tolerance: float | None = None
    max_terms: int = 100_000

    def __post_init__(self):
        if self.precision < 24:
            raise ValueError("precision below 24 bits is not supported")
        if self.max_terms < 64:
            raise ValueError("max_terms is too small to bound any tail")
        if self.tolerance is not None:
            with mp.workprec(64):
                if mp.mpf(self.tolerance) < mp.ldexp(1, 6 - self.precision):
                    raise ValueError("tolerance undercuts the guard-bit floor "
                                     "2^(6-precision)")

    def tol(self):
        """The effective tolerance as an mpf under the current precision."""
        if self.tolerance is None:
            return mp.ldexp(1, 6 - self.precision)
        return mp.mpf(self.tolerance)

    def doubled(self):
        return PrecisionContext(2 * self.precision, None, self.max_terms)


DEFAULT_CONTEXT = PrecisionContext()


# ---------------------------------------------------------------------------
# Gauss hypergeometric evaluation

@dataclass(frozen=True)
class Hyp2F1Result:
    """Value with an error bound and the strategy that produced it.

    `rigorous` is True only for the direct series, whose tail estimate is a
    proved geometric bound; the transformation strategies compose rigorous
    tails with a standard first-order rounding model, and the fallback uses
    doubled-precision agreement.
    """

    value: object
    error: object
    strategy: str
    rigorous: bool


_SERIES_RADIUS = 0.80


def _frac_mpf(q):
    return mp.mpf(q.numerator) / q.denominator


def _series(pa, pb, pc, z, wp, max_terms):
    """Direct series sum of F(pa, pb; pc; z) with a certified tail bound.

    Parameters are real Fractions; pc must not be a nonpositive integer.
    z is an mpc with |z| < 1.  Returns (sum, bound) where bound covers the
    dropped tail rigorously and the accumulated rounding at first order.
    """
    if _is_nonpositive_int(pc):
        raise ContinuationError(f"series parameter c = {pc} is a pole")
    with mp.workprec(wp):
        z = mp.mpc(z)
        r = abs(z)
        if r >= 1:
            raise ContinuationError(f"series argument |z| = {mp.nstr(r, 8)} >= 1")
        aa, bb, cc = (_frac_mpf(p) for p in (pa, pb, pc))
        alpha = abs(aa)
        beta = abs(bb)
        gamma = max(mp.mpf(0), -cc)
        term = mp.mpc(1)
        total = mp.mpc(1)
        absum = mp.mpf(1)
        target = mp.ldexp(1, -(wp - 4))
        n = 0
        while True:
            term = term * ((aa + n) * (bb + n) / ((cc + n) * (1 + n))) * z
            total += term
            absum += abs(term)
            n += 1
            if n >= 8 and n > gamma + 1 and abs(term) <= target * absum:
                # For m >= n the term ratio is at most
                # r*(1 + alpha/n)*(1 + beta/n)*n/(n - gamma): geometric tail
                # (the last factor covers a negative non-integer c).
                q = r * (1 + alpha / n) * (1 + beta / n) * (n / (n - gamma))
                if q < 1:
                    tail = abs(term) * q / (1 - q)
                    break
            if n > max_terms:
                raise ContinuationError(f"series did not settle in {max_terms} terms")
        rounding = absum * mp.ldexp(n + 8, -(wp - 4))
        return total, tail + rounding


def _gamma_ratio(nums, dens, wp):
    """prod Gamma(nums) / prod Gamma(dens) for rational arguments."""
    with mp.workprec(wp):
        out = mp.mpf(1)
        for q in nums:
            out *= mp.gamma(_frac_mpf(q))
        for q in dens:
            out /= mp.gamma(_frac_mpf(q))
        return out


def _is_nonpositive_int(q):
    return q.denominator == 1 and q <= 0


def _applicable(strategy, p):
    if strategy == "one_minus_w":
        # Needs c-a-b off the integers and Gamma arguments off the poles.
        return (p.c - p.a - p.b).denominator != 1 and \
            not _is_nonpositive_int(p.a) and not _is_nonpositive_int(p.b)
    if strategy == "inv_w":
        return (p.a - p.b).denominator != 1 and \
            not _is_nonpositive_int(p.c - p.a) and not _is_nonpositive_int(p.c - p.b)
    return True


def _transform_value(p, w, wp, strategy, max_terms):
    """Evaluate one strategy; returns (value, error)."""
    a, b, c = p.a, p.b, p.c
    with mp.workprec(wp):
        w = mp.mpc(w)
        slop = mp.ldexp(1, -(wp - 8))
        if strategy == "direct":
            total, err = _series(a, b, c, w, wp, max_terms)
            return total, err
        if strategy == "pfaff":
            z = w / (w - 1)
            pref = mp.power(1 - w, -_frac_mpf(a))
            total, tail = _series(a, c - b, c, z, wp, max_terms)
            value = pref * total
            return value, abs(pref) * tail + abs(value) * slop
        if strategy == "one_minus_w":
            z = 1 - w
            p1 = _gamma_ratio((c, c - a - b), (c - a, c - b), wp)
            s1, e1 = _series(a, b, a + b - c + 1, z, wp, max_terms)
            if z == 0:
                # Confluent point: only valid when Re(c-a-b) > 0.
                if c - a - b <= 0:
                    raise ContinuationError("divergent at w = 1 for c-a-b <= 0")
                p2s2 = mp.mpc(0)
                e2 = mp.mpf(0)
                p2abs = mp.mpf(0)
            else:
                p2 = _gamma_ratio((c, a + b - c), (a, b), wp) \
                    * mp.power(z, _frac_mpf(c - a - b))
                s2, e2 = _series(c - a, c - b, c - a - b + 1, z, wp, max_terms)
                p2s2 = p2 * s2
                p2abs = abs(p2)
            value = p1 * s1 + p2s2
            err = abs(p1) * e1 + p2abs * e2 \
                + (abs(p1 * s1) + abs(p2s2)) * slop
            return value, err
        if strategy == "inv_w":
            z = 1 / w
            p1 = _gamma_ratio((c, b - a), (b, c - a), wp) \
                * mp.power(-w, -_frac_mpf(a))
            p2 = _gamma_ratio((c, a - b), (a, c - b), wp) \
                * mp.power(-w, -_frac_mpf(b))
            s1, e1 = _series(a, a - c + 1, a - b + 1, z, wp, max_terms)
            s2, e2 = _series(b, b - c + 1, b - a + 1, z, wp, max_terms)
            value = p1 * s1 + p2 * s2
            err = abs(p1) * e1 + abs(p2) * e2 \
                + (abs(p1 * s1) + abs(p2 * s2)) * slop
            return value, err
    raise ContinuationError(f"unknown strategy {strategy!r}")


def _fallback_value(p, w, prec, max_terms):
    """Library evaluation at two precisions; agreement is the error bound."""
    am, bm, cm = (_frac_mpf(q) for q in (p.a, p.b, p.c))
    with mp.workprec(prec + 16):
        v1 = mpmath.hyp2f1(am, bm, cm, mp.mpc(w))
    with mp.workprec(2 * prec + 32):
        am, bm, cm = (_frac_mpf(q) for q in (p.a, p.b, p.c))
        v2 = mpmath.hyp2f1(am, bm, cm, mp.mpc(w))
    with mp.workprec(prec + 16):
        err = abs(v1 - v2) + abs(v1) * mp.ldexp(1, -(prec + 2))
        return mp.mpc(v2), err


def hyp2f1(p, w, ctx=DEFAULT_CONTEXT, side=0, strategy=None):
    """F(a, b; c; w) with an error bound, at the context's precision.

    The branch cut runs along [1, oo).  On the cut the caller must pick
    `side` (+1 for the limit from the upper half-plane, -1 from below);
    otherwise BranchCutError is raised.  `strategy` forces one of
    'direct', 'pfaff', 'one_minus_w', 'inv_w', 'fallback' for diagnostics;
    by default the transformed argument of smallest modulus wins, with the
    fallback reserved for the lens where nothing converges fast.
    """
    wp = ctx.precision + 32
    with mp.workprec(wp):
        w = mp.mpc(w)
        if mp.im(w) == 0 and mp.re(w) > 1:
            if side == 0:
                raise BranchCutError("w on [1, oo): pass side=+1 or side=-1")
            # Nudge off the cut; the displacement is far below the returned
            # error bound at this precision.
            w = mp.mpc(mp.re(w), mp.sign(side) * mp.ldexp(max(1, abs(w)), -(wp + 8)))
        if w == 1:
            value, err = _transform_value(p, w, wp, "one_minus_w", ctx.max_terms)
            return Hyp2F1Result(value, err, "one_minus_w", False)

        candidates = [("direct", abs(w))]
        if w != 1:
            candidates.append(("pfaff", abs(w / (w - 1))))
            candidates.append(("one_minus_w", abs(1 - w)))
        if w != 0:
            candidates.append(("inv_w", abs(1 / w)))
        candidates = [(name, size) for name, size in candidates
                      if _applicable(name, p)]

        if strategy is not None:
            if strategy == "fallback":
                value, err = _fallback_value(p, w, ctx.precision, ctx.max_terms)
                return Hyp2F1Result(value, err, "fallback", False)
            value, err = _transform_value(p, w, wp, strategy, ctx.max_terms)
            return Hyp2F1Result(value, err, strategy, strategy == "direct")

        viable = [(size, i, name) for i, (name, size) in enumerate(candidates)
                  if size <= _SERIES_RADIUS]
        if viable:
            _, _, name = min(viable)
            value, err = _transform_value(p, w, wp, name, ctx.max_terms)
            return Hyp2F1Result(value, err, name, name == "direct")
        if not candidates:
            raise ContinuationError("no applicable transformation at this point")
        value, err = _fallback_value(p, w, ctx.precision, ctx.max_terms)
        return Hyp2F1Result(value, err, "fallback", False)


def gauss_value(p, ctx=DEFAULT_CONTEXT):
    """F(a, b; c; 1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)).

    Defined when c-a-b > 0 (convergence of the series at 1).
    """
    if p.c - p.a - p.b <= 0:
        raise ContinuationError("the series diverges at w = 1 for c-a-b <= 0")
    return _gamma_ratio((p.c, p.c - p.a - p.b), (p.c - p.a, p.c - p.b),
                        ctx.precision + 32)


# ---------------------------------------------------------------------------
# Geodesics in the upper half-plane

@dataclass(frozen=True)
class Geodesic:
    """A hyperbolic geodesic: a vertical line or a semicircle on the axis.

    `inside_sign` orients the geodesic as a triangle edge: a point z is on
    the triangle side iff inside_sign * signed(z) >= 0.
    """

    kind: str            # "line" or "circle"
    position: object     # x0 for a line, real center for a circle
    radius: object       # None for a line
    inside_sign: int

    def signed(self, z):
        if self.kind == "line":
            return mp.re(z) - self.position
        d = z - self.position
        return mp.re(d) ** 2 + mp.im(d) ** 2 - self.radius ** 2

    def is_inside(self, z, slack):
        return self.inside_sign * self.signed(z) >= -slack

    def scale(self, z):
        """Magnitude scale of signed(z), for relative slack."""
        if self.kind == "line":
            return 1 + abs(mp.re(z)) + abs(self.position)
        return 1 + abs(z - self.position) ** 2 + self.radius ** 2

    def reflect(self, z):
        if self.kind == "line":
            return 2 * self.position - mp.conj(z)
        return self.position + self.radius ** 2 / (mp.conj(z) - self.position)

    def hyperbolic_distance(self, z):
        y = mp.im(z)
        if y <= 0:
            raise ValueError("point not in the upper half-plane")
        if self.kind == "line":
            return mp.asinh(abs(mp.re(z) - self.position) / y)
        return mp.asinh(abs(self.signed(z)) / (2 * self.radius * y))


def _geodesic_through(z1, z2, probe, wp):
    """The geodesic through two points, oriented so `probe` is inside."""
    with mp.workprec(wp):
        x1, x2 = mp.re(z1), mp.re(z2)
        scale = 1 + abs(z1) + abs(z2)
        if abs(x1 - x2) <= scale * mp.ldexp(1, -(wp - 16)):
            g = Geodesic("line", (x1 + x2) / 2, None, 1)
        else:
            center = (abs(z1) ** 2 - abs(z2) ** 2) / (2 * (x1 - x2))
            radius = abs(z1 - center)
            g = Geodesic("circle", center, radius, 1)
        s = g.signed(probe)
        if s == 0:
            raise ValueError("probe point lies on the edge")
        sign = 1 if s > 0 else -1
        if sign != g.inside_sign:
            g = Geodesic(g.kind, g.position, g.radius, sign)
        return g


# ---------------------------------------------------------------------------
# Triangle placement

def _mobius(m, z):
    if mp.isinf(mp.re(z)) or mp.isinf(mp.im(z)):
        return m[0] / m[2]
    return (m[0] * z + m[1]) / (m[2] * z + m[3])


_TRIANGLE_CACHE = {}
_GRID_PREC = 64


class TriangleData:
    """A hyperbolic triangle realized as the image of a Schwarz map.

    Angles are exact rational multiples of pi, listed at the images of
    w = 0, 1, infinity.  Placement: the w=infinity vertex at i, the w=1
    vertex on the imaginary axis above it.  `orientation = -1` mirrors the
    triangle across the imaginary axis (an orientation-reversing option for
    candidate configurations); `anchor` post-composes a rational 2x2 matrix
    with positive determinant, for placements other than the standard one.
    """

    __slots__ = ("mu", "orientation", "anchor", "precision", "params",
                 "params2", "kappa", "s1", "x1", "rinf", "matrix", "vertices",
                 "edges", "_grid")

    def __init__(self, mu, precision=192, orientation=1, anchor=None):
        mu = tuple(Fraction(m) for m in mu)
        if len(mu) != 3:
            raise ValueError("three angle fractions are required")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if anchor is not None:
            anchor = tuple(Fraction(v) for v in anchor)
            if len(anchor) != 4:
                raise ValueError("anchor must be four rationals (row-major 2x2)")
            if anchor[0] * anchor[3] - anchor[1] * anchor[2] <= 0:
                raise ValueError("anchor must have positive determinant")
        self.mu = mu
        self.orientation = orientation
        self.anchor = anchor
        self.precision = precision
        self.params = HypergeometricParams.from_angles(*mu)
        self.params2 = self.params.second_kind()
        self._grid = {}
        self._build()

    @classmethod
    def get(cls, mu, precision=192, orientation=1, anchor=None):
        key = (tuple(Fraction(m) for m in mu), precision, orientation,
               None if anchor is None else tuple(Fraction(v) for v in anchor))
        tri = _TRIANGLE_CACHE.get(key)
        if tri is None:
            tri = cls(mu, precision, orientation, anchor)
            _TRIANGLE_CACHE[key] = tri
        return tri

    def _build(self):
        wp = self.precision + 48
        with mp.workprec(wp):
            A, Bv, C = (mp.pi * _frac_mpf(m) for m in self.mu)
            cosh01 = (mp.cos(A) * mp.cos(Bv) + mp.cos(C)) / (mp.sin(A) * mp.sin(Bv))
            cosh0i = (mp.cos(A) * mp.cos(C) + mp.cos(Bv)) / (mp.sin(A) * mp.sin(C))
            self.x1 = mp.tanh(mp.acosh(cosh01) / 2)
            self.rinf = mp.tanh(mp.acosh(cosh0i) / 2)
            ctx = PrecisionContext(self.precision + 16)
            self.s1 = mp.re(gauss_value(self.params2, ctx) / gauss_value(self.params, ctx))
            self.kappa = self.x1 / self.s1
            cv = self.rinf * mp.expjpi(_frac_mpf(self.mu[0]))
            g0 = (self.x1 - cv) / (1 - mp.conj(cv) * self.x1)
            phi = -mp.arg(g0)
            eiphi = mp.expj(phi)
            # matrix = K * G acting on the kappa-scaled ratio (which _ratio
            # already produces): G sends the scaled w=inf vertex cv to 0
            # with the w=1 vertex on (0,1), K maps the disk onto the
            # half-plane with 0 -> i and (0,1) -> the axis above i.
            i1 = mp.mpc(0, 1)
            g11, g12, g21, g22 = eiphi, -eiphi * cv, -mp.conj(cv), mp.mpc(1)
            k11, k12, k21, k22 = i1, i1, mp.mpc(-1), mp.mpc(1)
            m11 = k11 * g11 + k12 * g21
            m12 = k11 * g12 + k12 * g22
            m21 = k21 * g11 + k22 * g21
            m22 = k21 * g12 + k22 * g22
            self.matrix = (m11, m12, m21, m22)

            y21 = (1 + abs(g0)) / (1 - abs(g0))
            v0 = self._place(_mobius(self.matrix, mp.mpc(0)))
            v1 = self._place(mp.mpc(0, y21))
            v2 = self._place(mp.mpc(0, 1))
            self.vertices = (v0, v1, v2)

            probe = self.map(mp.mpc("0.5", "0.5"),
                             PrecisionContext(min(self.precision, 96)))
            self.edges = (_geodesic_through(v1, v2, probe, wp),
                          _geodesic_through(v0, v2, probe, wp),
                          _geodesic_through(v0, v1, probe, wp))

    def _place(self, z):
        """Orientation flip and anchor, applied to a standard-placement value."""
        if self.orientation < 0:
            z = -mp.conj(z)
        if self.anchor is not None:
            a, b, c, d = (_frac_mpf(v) for v in self.anchor)
            z = (a * z + b) / (c * z + d)
        return z

    def _unplace(self, z):
        if self.anchor is not None:
            a, b, c, d = (_frac_mpf(v) for v in self.anchor)
            z = (d * z - b) / (-c * z + a)
        if self.orientation < 0:
            z = -mp.conj(z)
        return z

    def _ratio(self, w, ctx, side):
        """kappa * s_raw(w) and the two F-values, for map and derivative."""
        wp = ctx.precision + 32
        with mp.workprec(wp):
            w = mp.mpc(w)
            f1 = hyp2f1(self.params, w, ctx, side=side)
            f2 = hyp2f1(self.params2, w, ctx, side=side)
            c = _frac_mpf(self.params.c)
            power = mp.power(w, 1 - c)
            zeta = self.kappa * power * f2.value / f1.value
            return zeta, f1.value, f2.value

    def map(self, w, ctx=DEFAULT_CONTEXT, side=1):
        """The normalized Schwarz map at w (closed upper half-plane)."""
        wp = ctx.precision + 32
        with mp.workprec(wp):
            w = mp.mpc(w)
            if mp.isinf(mp.re(w)) or mp.isinf(mp.im(w)):
                return self.vertices[2]
            if mp.im(w) < 0:
                raise ValueError("w must lie in the closed upper half-plane")
            if w == 0:
                return self.vertices[0]
            if w == 1:
                return self.vertices[1]
            zeta, _, _ = self._ratio(w, ctx, side)
            return self._place(_mobius(self.matrix, zeta))

    def _map_std_with_derivative(self, w, ctx, side=1):
        """Standard-placement value and holomorphic derivative at w.

        The derivative uses the Wronskian closed form
            s_raw'(w) = (1-c) w^(-c) (1-w)^(c-a-b-1) / F1(w)^2.
        """
        wp = ctx.precision + 32
        with mp.workprec(wp):
            w = mp.mpc(w)
            zeta, f1, _ = self._ratio(w, ctx, side)
            p = self.params
            c = _frac_mpf(p.c)
            cab = _frac_mpf(p.c - p.a - p.b)
            sraw_d = (1 - c) * mp.power(w, -c) * mp.power(1 - w, cab - 1) / (f1 * f1)
            m11, m12, m21, m22 = self.matrix
            det = m11 * m22 - m12 * m21
            denom = m21 * zeta + m22
            value = (m11 * zeta + m12) / denom
            deriv = det / (denom * denom) * self.kappa * sraw_d
            return value, deriv

    # -- inverse map ------------------------------------------------------
    #
    # Two regimes.  Away from the vertices a seeded Newton iteration in w
    # (or 1/w) is enough.  Near a vertex of angle pi/q the map behaves like
    # a q-th root, so w is the wrong chart: a point at hyperbolic distance
    # 0.4 from the w=infinity vertex already has |w| around 10^30.  There
    # we iterate in the local uniformizing coordinate xi, in which the map
    # is analytic with nonzero derivative:
    #
    #   vertex 0:  w = xi^n0,       xi in the wedge [0, pi/n0]
    #   vertex 1:  w = 1 - xi^n1,   xi in [-pi/n1, 0]
    #   vertex 2:  w = xi^(-n2),    xi in [-pi/n2, 0]
    #
    # with 1/n_j the angle fractions.  Iterates are clamped to the closed
    # wedge so the evaluation never crosses onto the wrong branch sheet.
    # Each chart is trusted out to the hyperbolic radius its seed grid
    # actually covers (measured at build time, roughly 2 to 2.7).

    def _chart_w(self, j, xi):
        inv = 1 / self.mu[j]
        e = _frac_mpf(inv)
        if j == 0:
            return mp.power(xi, e)
        if j == 1:
            return 1 - mp.power(xi, e)
        return mp.power(xi, -e)

    def _chart_dw(self, j, xi):
        inv = 1 / self.mu[j]
        e = _frac_mpf(inv)
        if j == 0:
            return e * mp.power(xi, e - 1)
        if j == 1:
            return -e * mp.power(xi, e - 1)
        return -e * mp.power(xi, -e - 1)

    def _clamp_wedge(self, j, xi):
        theta = mp.arg(xi)
        half = mp.pi * _frac_mpf(self.mu[j])
        lo, hi = (mp.mpf(0), half) if j == 0 else (-half, mp.mpf(0))
        if theta < lo:
            xi *= mp.expj(lo - theta)
        elif theta > hi:
            xi *= mp.expj(hi - theta)
        if abs(xi) > mp.mpf("0.985"):
            xi *= mp.mpf("0.985") / abs(xi)
        return xi

    def _chart_grid(self, j):
        key = ("chart", j)
        if key in self._grid:
            return self._grid[key]
        ctx = PrecisionContext(_GRID_PREC)
        half = mp.pi * _frac_mpf(self.mu[j])
        args = [half * f for f in (mp.mpf("0.12"), mp.mpf("0.5"), mp.mpf("0.88"))]
        if j != 0:
            args = [-t for t in args]
        pts = []
        rim = []
        with mp.workprec(_GRID_PREC + 32):
            vstd = self._unplace(self.vertices[j])
            for rad in ("0.1", "0.25", "0.45", "0.65", "0.82", "0.93"):
                for th in args:
                    xi = mp.mpf(rad) * mp.expj(th)
                    try:
                        w = self._chart_w(j, xi)
                        zeta, _, _ = self._ratio(w, ctx, side=1)
                    except (ContinuationError, ZeroDivisionError):
                        continue
                    zstd = _mobius(self.matrix, zeta)
                    pts.append((xi, zstd))
                    if rad == "0.93":
                        rim.append(self._cosh_dist(zstd, vstd))
            # The chart is trusted out to the innermost rim sample; beyond
            # that the generic w iteration is better conditioned anyway.
            self._grid[("reach", j)] = min(rim) if rim else mp.cosh(mp.mpf("1.5"))
        self._grid[key] = pts
        return pts

    def _chart_reach(self, j):
        self._chart_grid(j)
        return self._grid[("reach", j)]

    def _chart_c1(self, j):
        """The derivative dz/dxi at xi = 0, measured at a genuinely tiny xi.

        At any xi of visible size the hyperbolic scale of the chart twists
        the phase, so the probe must sit deep inside the linear regime.
        """
        key = ("c1", j)
        if key in self._grid:
            return self._grid[key]
        ctx = PrecisionContext(max(_GRID_PREC, 96))
        with mp.workprec(ctx.precision + 32):
            half = mp.pi * _frac_mpf(self.mu[j])
            mid = half / 2 if j == 0 else -half / 2
            xi = mp.ldexp(1, -34) * mp.expj(mid)
            w = self._chart_w(j, xi)
            zeta, _, _ = self._ratio(w, ctx, side=1)
            vstd = self._unplace(self.vertices[j])
            c1 = (_mobius(self.matrix, zeta) - vstd) / xi
        self._grid[key] = c1
        return c1

    def _newton_chart(self, j, zstd, ctx):
        wp = ctx.precision + 32
        with mp.workprec(wp):
            vstd = self._unplace(self.vertices[j])
            seeds = list(self._chart_grid(j))
            c1 = self._chart_c1(j)
            if c1 != 0:
                seeds.insert(0, ((zstd - vstd) / c1, None))
            ranked = sorted(seeds,
                            key=lambda p: (0 if p[1] is None
                                           else float(self._cosh_dist(zstd, p[1]))))
            target = mp.ldexp(1, -(ctx.precision + 6))
            for xi0, _ in ranked[:4]:
                xi = self._clamp_wedge(j, mp.mpc(xi0))
                if xi == 0:
                    xi = mp.mpc(mp.ldexp(1, -(ctx.precision // 2)))
                    xi = self._clamp_wedge(j, xi * mp.expj(mp.pi * _frac_mpf(self.mu[j]) / 2))
                ok = False
                best = None
                stall = 0
                for _ in range(40):
                    w = self._chart_w(j, xi)
                    try:
                        value, dzdw = self._map_std_with_derivative(w, ctx)
                    except (ContinuationError, ZeroDivisionError):
                        break
                    deriv = dzdw * self._chart_dw(j, xi)
                    if deriv == 0:
                        break
                    step = (value - zstd) / deriv
                    limit = (1 + abs(xi)) / 4
                    if abs(step) > limit:
                        step *= limit / abs(step)
                    # Abandon seeds that stop making progress (clamped
                    # iterates pinned at the wedge rim mostly).
                    anorm = abs(step)
                    if best is None or anorm < best * mp.mpf("0.7"):
                        best = anorm
                        stall = 0
                    else:
                        stall += 1
                        if stall >= 5:
                            break
                    xi = self._clamp_wedge(j, xi - step)
                    if abs(step) <= target * (1 + abs(xi)):
                        ok = True
                        break
                if ok:
                    w = self._chart_w(j, xi)
                    if mp.im(w) < 0:
                        w = mp.mpc(mp.re(w), 0)
                    return w
            return None

    def _seed_grid(self):
        if "generic" in self._grid:
            return self._grid["generic"]
        ctx = PrecisionContext(_GRID_PREC)
        pts = []
        res = [-6.0, -3.5, -2.0, -1.2, -0.7, -0.35, -0.12, 0.05, 0.18, 0.35,
               0.5, 0.65, 0.82, 0.94, 1.06, 1.25, 1.6, 2.3, 3.5, 5.5, 9.0]
        ims = [0.02, 0.12, 0.45, 1.2, 3.0, 8.0]
        ws = [mp.mpc(x, y) for x in res for y in ims]
        ws += [mp.mpf(r) * mp.expjpi(k / mp.mpf(8))
               for r in (15, 40, 150, 1200) for k in range(1, 8)]
        ws += [mp.mpf(r) * mp.expjpi(f) for r in (0.004, 0.02, 0.09)
               for f in (mp.mpf(1) / 6, mp.mpf(1) / 2, mp.mpf(5) / 6)]
        with mp.workprec(_GRID_PREC + 32):
            for w in ws:
                try:
                    zeta, _, _ = self._ratio(w, ctx, side=1)
                    pts.append((mp.mpc(w), _mobius(self.matrix, zeta)))
                except (ContinuationError, ZeroDivisionError):
                    continue
        self._grid["generic"] = pts
        return pts

    def inverse(self, z, ctx=DEFAULT_CONTEXT):
        """w in the closed upper half-plane with map(w) = z, by Newton.

        z must lie in the closed triangle.  Exact vertices snap to 0, 1 and
        +inf.  Near a vertex the iteration runs in that vertex's local
        chart; elsewhere it runs in w from the nearest grid seed.  Raises
        SchwarzInverseError when no seed converges.
        """
        wp = ctx.precision + 32
        with mp.workprec(wp):
            z = mp.mpc(z)
            snap = mp.ldexp(1, -(3 * ctx.precision // 4))
            for j, wv in ((0, mp.mpf(0)), (1, mp.mpf(1)), (2, mp.inf)):
                v = self.vertices[j]
                if abs(z - v) <= snap * (1 + abs(v)):
                    return wv
            zstd = self._unplace(z)
            byvertex = sorted(
                range(3),
                key=lambda j: float(self._cosh_dist(zstd, self._unplace(self.vertices[j]))))
            for j in byvertex:
                if self._cosh_dist(zstd, self._unplace(self.vertices[j])) \
                        > self._chart_reach(j):
                    continue
                w = self._newton_chart(j, zstd, ctx)
                if w is not None:
                    return w
            grid = self._seed_grid()
            ranked = sorted(grid, key=lambda p: self._cosh_dist(zstd, p[1]))
            last_diag = "no seeds"
            for w0, _ in ranked[:6]:
                w = self._newton(w0, zstd, ctx)
                if w is not None:
                    return w
                last_diag = f"stalled from seed {mp.nstr(w0, 8)}"
            # One retry at doubled precision before giving up.
            if ctx.precision <= 512:
                try:
                    w = self.inverse(z, ctx.doubled())
                    return w
                except SchwarzInverseError:
                    pass
            raise SchwarzInverseError(
                f"no convergence to z = {mp.nstr(z, 12)} ({last_diag})")

    @staticmethod
    def _cosh_dist(z1, z2):
        y1, y2 = mp.im(z1), mp.im(z2)
        if y1 <= 0 or y2 <= 0:
            return mp.inf
        return 1 + abs(z1 - z2) ** 2 / (2 * y1 * y2)

    def _newton(self, w0, zstd, ctx):
        wp = ctx.precision + 32
        with mp.workprec(wp):
            inverted = abs(w0) > 12
            u = 1 / w0 if inverted else mp.mpc(w0)
            target = mp.ldexp(1, -(ctx.precision + 6))
            best = None
            stall = 0
            for _ in range(60):
                w = 1 / u if inverted else u
                if mp.im(w) < 0:
                    # Evaluate on the axis and move the iterate there too;
                    # otherwise a stale negative imaginary part survives
                    # invisibly (the pinned evaluation cannot see it).
                    w = mp.mpc(mp.re(w), 0)
                    if w == 0:
                        return None
                    u = 1 / w if inverted else w
                try:
                    value, deriv = self._map_std_with_derivative(w, ctx)
                except (ContinuationError, ZeroDivisionError):
                    return None
                resid = abs(value - zstd)
                if best is None or resid < best * mp.mpf("0.8"):
                    best = resid
                    stall = 0
                else:
                    stall += 1
                    if stall >= 8:
                        return None
                if inverted:
                    deriv = -deriv * w * w   # d/du of map(1/u)
                if deriv == 0:
                    return None
                step = (value - zstd) / deriv
                # Damp steps that overshoot the seed's neighbourhood.
                limit = (1 + abs(u)) / 2
                if abs(step) > limit:
                    step *= limit / abs(step)
                u = u - step
                if abs(step) <= target * (1 + abs(u)):
                    w = 1 / u if inverted else u
                    if mp.im(w) < -mp.ldexp(1 + abs(w), -(ctx.precision - 8)):
                        return None
                    if mp.im(w) < 0:
                        w = mp.mpc(mp.re(w), 0)
                    return w
            return None


def schwarz_map(w, p=DEFAULT_PARAMS, ctx=DEFAULT_CONTEXT, side=1):
    """Normalized Schwarz map for the triangle determined by p's angles."""
    tri = TriangleData.get(p.angles(), max(ctx.precision, 160))
    return tri.map(w, ctx, side)


def schwarz_inverse(z, p=DEFAULT_PARAMS, ctx=DEFAULT_CONTEXT):
    """Inverse of schwarz_map on the closed fundamental triangle."""
    tri = TriangleData.get(p.angles(), max(ctx.precision, 160))
    return tri.inverse(z, ctx)


# ---------------------------------------------------------------------------
# Reflection reduction

@dataclass(frozen=True)
class ReflectionWord:
    """A sequence of edge indices, applied left to right.

    Immediate repeats are forbidden: a reflection never directly undoes
    itself in a reduced word.
    """

    edges: tuple

    def __post_init__(self):
        edges = tuple(int(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for e in edges:
            if e not in (0, 1, 2):
                raise ValueError(f"edge index {e} out of range")
        for x, y in zip(edges, edges[1:]):
            if x == y:
                raise ValueError("immediate repeat in reflection word")

    @property
    def parity(self):
        return len(self.edges) % 2

    def __len__(self):
        return len(self.edges)

    def apply(self, z, tri):
        for e in self.edges:
            z = tri.edges[e].reflect(z)
        return z

    def apply_inverse(self, z, tri):
        for e in reversed(self.edges):
            z = tri.edges[e].reflect(z)
        return z


def reduce_to_fundamental(z, tri, ctx=DEFAULT_CONTEXT, max_reflections=10_000):
    """Fold z into the closed fundamental triangle of `tri`.

    Returns (z0, word) with z0 = word applied to z.  The policy is
    deterministic: among currently violated edges, reflect across the one
    nearest in the hyperbolic metric.  Points essentially on an edge (within
    the precision slack) count as inside, which makes reduction idempotent.
    """
    wp = ctx.precision + 32
    with mp.workprec(wp):
        z = mp.mpc(z)
        if mp.im(z) <= 0:
            raise ValueError("z must lie in the open upper half-plane")
        eps = mp.ldexp(1, -(wp - 24))
        word = []
        for _ in range(max_reflections):
            violated = [j for j, g in enumerate(tri.edges)
                        if not g.is_inside(z, eps * g.scale(z))]
            if not violated:
                return z, ReflectionWord(tuple(word))
            j = min(violated, key=lambda jj: tri.edges[jj].hyperbolic_distance(z))
            if word and word[-1] == j:
                raise ArithmeticError("reduction revisited an edge immediately; "
                                      "point too close to the boundary circle")
            z = tri.edges[j].reflect(z)
            word.append(j)
        raise ArithmeticError(f"not reduced after {max_reflections} reflections")


# ---------------------------------------------------------------------------
# Embedding configurations and component maps

@dataclass
class ConfigEntry:
    """Triangle data for one embedding label: angles, orientation, anchor."""

    label: int
    angles: tuple
    orientation: int = 1
    anchor: tuple | None = None

    def __post_init__(self):
        self.angles = tuple(Fraction(a) for a in self.angles)
        if len(self.angles) != 3:
            raise ValueError("an entry needs exactly three angle fractions")
        if self.label not in EMBEDDING_LABELS:
            raise ValueError(f"unknown embedding label {self.label}")
        if self.anchor is not None:
            self.anchor = tuple(Fraction(v) for v in self.anchor)

    def triangle(self, precision):
        return TriangleData.get(self.angles, precision, self.orientation,
                                self.anchor)


_CONFIG_FORMAT = "embedding-config/1"


@dataclass
class EmbeddingConfig:
    """Per-embedding triangle entries plus validation state.

    The k=1 entry is mandatory and must be the standard triangle with the
    identity component map.  Entries for other labels are candidate data;
    they count as trusted only after `validate_config` has driven the
    functional-equation residual below tolerance.
    """

    entries: dict
    status: str = "unvalidated"
    stats: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        if 1 not in self.entries:
            raise ValueError("a configuration must contain the k=1 entry")
        e1 = self.entries[1]
        if e1.angles != STANDARD_ANGLES or e1.orientation != 1 \
                or e1.anchor is not None:
            raise ValueError("the k=1 entry must be the standard triangle")
        for k, e in self.entries.items():
            if k != e.label:
                raise ValueError(f"entry key {k} disagrees with label {e.label}")

    @property
    def validated(self):
        return self.status == "validated"

    def has(self, k):
        return k in self.entries

    def entry(self, k):
        return self.entries[k]

    def labels(self):
        return tuple(sorted(self.entries))

    @classmethod
    def k1_only(cls):
        return cls({1: ConfigEntry(1, STANDARD_ANGLES)})

    # -- serialization ----------------------------------------------------

    def to_json(self):
        entries = {}
        for k in EMBEDDING_LABELS:
            if k in self.entries:
                e = self.entries[k]
                entries[str(k)] = {
                    "angles": [str(a) for a in e.angles],
                    "orientation": e.orientation,
                    "anchor": None if e.anchor is None
                    else [str(v) for v in e.anchor],
                }
            else:
                entries[str(k)] = None
        return {"format": _CONFIG_FORMAT, "entries": entries,
                "validation": {"status": self.status, **self.stats}}

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def from_json(cls, doc):
        if doc.get("format") != _CONFIG_FORMAT:
            raise ValueError(f"unsupported config format {doc.get('format')!r}")
        entries = {}
        for key, body in doc["entries"].items():
            if body is None:
                continue
            k = int(key)
            anchor = body.get("anchor")
            entries[k] = ConfigEntry(
                k, tuple(Fraction(a) for a in body["angles"]),
                int(body.get("orientation", 1)),
                None if anchor is None else tuple(Fraction(v) for v in anchor))
        validation = dict(doc.get("validation") or {})
        status = validation.pop("status", "unvalidated")
        return cls(entries, status, validation)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    @classmethod
    def default(cls):
        """The shipped configuration: k=1 only, everything else open."""
        data = resources.files("heckefix").joinpath("data/embedding_k1.json")
        return cls.from_json(json.loads(data.read_text(encoding="utf-8")))


_EMBED_T_CACHE = {}


def _sigma_t(k, prec):
    key = (k, prec)
    if key not in _EMBED_T_CACHE:
        _EMBED_T_CACHE[key] = embed(T, k, prec).value
    return _EMBED_T_CACHE[key]


def _component_via_triangles(z, k, cfg, ctx):
    """The reduce / invert / push-forward / replay pipeline for label k."""
    tri1 = cfg.entry(1).triangle(max(ctx.precision, 160))
    trik = cfg.entry(k).triangle(max(ctx.precision, 160))
    wp = ctx.precision + 32
    with mp.workprec(wp):
        z0, word = reduce_to_fundamental(z, tri1, ctx)
        w = tri1.inverse(z0, ctx)
        zk = trik.map(w, ctx)
        return word.apply_inverse(zk, trik)


def component_map(z, k, cfg, ctx=DEFAULT_CONTEXT, waive_validation=False):
    """Component map of the modular embedding for label k.

    k=1 is the identity.  Other labels require a validated configuration
    (or an explicit waiver) and compute: reduce z into the fundamental
    triangle recording the reflection word, pull back through the inverse
    Schwarz map, push forward through the k-th triangle's map, then replay
    the word on the k-th side.
    """
    if k not in EMBEDDING_LABELS:
        raise ValueError(f"unknown embedding label {k}")
    with mp.workprec(ctx.precision + 32):
        z = mp.mpc(z)
        if k == 1:
            return z
        if not cfg.has(k):
            raise KeyError(f"configuration has no entry for k = {k}")
        if not cfg.validated and not waive_validation:
            raise ValueError("configuration not validated; pass "
                             "waive_validation=True to proceed anyway")
        return _component_via_triangles(z, k, cfg, ctx)


@dataclass
class ValidationReport:
    """Per-label residuals of the functional equation for B."""

    per_label: dict
    max_residual: float
    validated: bool
    samples: int
    seed: int
    precision: int

    def lines(self):
        out = []
        for k in EMBEDDING_LABELS:
            body = self.per_label[k]
            if body["status"] == "absent":
                out.append(f"k={k}: absent")
            else:
                out.append(f"k={k}: {body['status']} "
                           f"(max residual {body['max_residual']:.3e})")
        out.append(f"overall: {'validated' if self.validated else 'failed'}")
        return out


def validate_config(cfg, samples=10, ctx=DEFAULT_CONTEXT, seed=1729,
                    _mark=True):
    """Check the functional equation for B on sampled points, per label.

    For each label k with an entry, draws `samples` seeded pseudo-random
    points z and measures |f_k(-1/(z+t)) - (-1/(f_k(z)+sigma_k(t)))|.  The
    configuration is marked validated iff every present entry stays below
    the context tolerance.  Absent entries are reported but never fail.

    Even k=1 runs through the reduce / invert / push-forward pipeline
    rather than the identity shortcut, so its residual measures the
    numerical health of the whole machinery instead of being zero by
    construction.
    """
    rng = random.Random(seed)
    wp = ctx.precision + 32
    per = {}
    worst = 0.0
    ok = True
    with mp.workprec(wp):
        t1 = _sigma_t(1, ctx.precision + 16)
        tol = ctx.tol()
        points = [mp.mpc(rng.uniform(-2.5, 2.5),
                         math.exp(rng.uniform(math.log(0.08), math.log(4.0))))
                  for _ in range(samples)]
        for k in EMBEDDING_LABELS:
            if not cfg.has(k):
                per[k] = {"status": "absent"}
                continue
            tk = _sigma_t(k, ctx.precision + 16)
            residuals = []
            for z in points:
                fz = _component_via_triangles(z, k, cfg, ctx)
                bz = -1 / (z + t1)
                fbz = _component_via_triangles(bz, k, cfg, ctx)
                residuals.append(abs(fbz - (-1 / (fz + tk))))
            rmax = max(residuals)
            rmean = sum(residuals) / len(residuals)
            passed = rmax < tol
            ok = ok and passed
            worst = max(worst, float(rmax))
            per[k] = {"status": "passed" if passed else "failed",
                      "max_residual": float(rmax),
                      "mean_residual": float(rmean)}
    report = ValidationReport(per, worst, ok, samples, seed, ctx.precision)
    if _mark:
        cfg.status = "validated" if ok else "failed"
        cfg.stats = {"samples": samples, "seed": seed,
                     "precision": ctx.precision,
                     "max_residual": worst.hex(),
                     "per_label": {str(k): v for k, v in per.items()}}
    return report


# ---------------------------------------------------------------------------
# The order-21 generator and elliptic fixed points

B_MATRIX = Mat2((0, -1, 1, T))


def b_matrix_numeric(k, prec=128):
    """sigma_k(B) as a numeric 2x2 row-major tuple."""
    return (mp.mpf(0), mp.mpf(-1), mp.mpf(1), _sigma_t(k, prec))


def _to_mpf(v):
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def elliptic_fixed_point(m, ctx=DEFAULT_CONTEXT):
    """The fixed point in the upper half-plane of an elliptic 2x2 matrix.

    m is real, given as a flat 4-sequence or two rows; it must satisfy
    det > 0 and trace^2 < 4 det, with the lower-left entry nonzero.
    """
    flat = []
    for row in m:
        if isinstance(row, (list, tuple)):
            flat.extend(row)
        else:
            flat.append(row)
    if len(flat) != 4:
        raise ValueError("expected a 2x2 matrix")
    wp = ctx.precision + 16
    with mp.workprec(wp):
        m11, m12, m21, m22 = (_to_mpf(v) for v in flat)
        det = m11 * m22 - m12 * m21
        tr = m11 + m22
        if det <= 0 or tr * tr >= 4 * det:
            raise ValueError("matrix is not elliptic (need tr^2 < 4 det)")
        if m21 == 0:
            raise ValueError("lower-left entry is zero: fixed point at infinity")
        if m21 < 0:
            m11, m12, m21, m22 = -m11, -m12, -m21, -m22
        return ((m11 - m22) + mp.mpc(0, 1) * mp.sqrt(4 * det - tr * tr)) / (2 * m21)


# ---------------------------------------------------------------------------
# Candidate angle triples

def propose_candidate_angles():
    """All hyperbolic angle triples (a/14, b/21, c/42) with primitive parts.

    Candidates for conjugate-triangle data: numerators coprime to the
    respective denominators (so each vertex keeps its full rotation order)
    and 3a + 2b + c < 42 (positive hyperbolic area).  Sorted by numerators.
    """
    out = []
    for a in range(1, 14):
        if math.gcd(a, 14) != 1:
            continue
        for b in range(1, 21):
            if math.gcd(b, 21) != 1:
                continue
            for c in range(1, 42):
                if math.gcd(c, 42) != 1:
                    continue
                if 3 * a + 2 * b + c < 42:
                    out.append((Fraction(a, 14), Fraction(b, 21), Fraction(c, 42)))
    return tuple(out)
