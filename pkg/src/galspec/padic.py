"""Exact splitting shapes of rational polynomials over the p-adics.

padic_shape answers one question: given a monic squarefree f over Q and a
prime p, what are the ramification indices and residue degrees (e, f) of
the irreducible factors of f over the p-adic completion?  The answer is a
multiset of pairs, nothing more; factor coefficients are never produced.

The method is exact throughout.  When f stays squarefree mod p every
factor is unramified and the shape is read off the mod-p degree sequence.
Otherwise the engine runs chains of inductive valuations: starting from a
Newton polygon face it grows a key polynomial stage by stage, factoring a
residual polynomial over the current residue field at each step, until the
invariants of each p-adic factor freeze.  Every number involved is a
Fraction or a finite-field element, so there is no working precision and
no stability question: the shape is a theorem about f, not an estimate.

Wild ramification (p dividing some e) is detected exactly and refused,
since the surrounding toolkit only reasons about tame primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITY, _check_prime, valuation
from .ffact import (
    ExtField,
    NotPIntegral,
    NotSquarefree,
    degree_sequence,
    factor_poly,
    poly_trim,
    reduce_mod_p,
)
from .ffact import FpField
from .poly import UniPoly, discriminant_in, gcd_field, lower_hull, newton_polygon

# Augmentation steps per polygon face before giving up.  Legitimate chains
# are bounded by the p-valuation of the discriminant; hitting the cap means
# a bug, and the contract is to fail loudly rather than return a guess.
_MAX_STEPS = 500


class WildPrime(Exception):
    """p divides a ramification index; the tame analysis refuses."""


@dataclass(frozen=True)
class PadicShape:
    """Multiset of (e, f) pairs, one per p-adic irreducible factor."""

    p: int
    pairs: tuple  # ((e, f), ...) sorted descending
    tame: bool

    def degree(self) -> int:
        return sum(e * f for e, f in self.pairs)

    def __str__(self):
        body = " ".join(f"({e},{f})" for e, f in self.pairs) or "-"
        return f"p={self.p}: {body}"


# -- inductive valuation stages ----------------------------------------------
#
# A stage assigns a value mu to a key polynomial phi; a chain of stages
# defines a valuation on Q[x] by expanding in powers of the last key.  The
# graded ring of a chain is generated over its residue field by the classes
# of phi and of a fractional-degree monomial Theta, subject to
#
#     Y = phi^d * Theta_prev^(-n),   Theta = phi^a * Theta_prev^b,
#
# where mu * D_prev = n/d in lowest terms, a*n + b*d = 1 with 0 <= a < d,
# and Y is the degree-zero unit whose residue class generates the next
# residue field.  All exponent bookkeeping below is the unique solution of
# those two relations; the assertions re-check it on every reduction.


def _expansion(g: UniPoly, phi: UniPoly) -> list:
    """Coefficients of g in powers of phi (monic), lowest first."""
    out = []
    rem = g
    while rem:
        rem, c = divmod(rem, phi)
        out.append(c)
    return out or [g]


class _Stage:
    """Shared augmentation machinery; subclasses fix value/reduction."""

    def lift_key(self, u: list) -> UniPoly:
        """Monic polynomial whose residual class at this stage is u."""
        F = len(u) - 1
        zero = self.field.zero()
        acc = UniPoly.const(Fraction(0), self.var)
        for k, c in enumerate(u):
            if c == zero:
                continue
            term = self.lift_elt(c, (F - k) * self.n)
            acc = acc + term * self.phi ** (k * self.d)
        assert acc.is_monic() and acc.degree() == F * self.d * self.phi.degree()
        # a lift must reduce back to u; this closes the loop on the twist
        # exponents and fails immediately if any of them is off
        h, i0, _j0, _v = self.reduction(acc)
        assert i0 == 0 and h == poly_trim(list(u))
        return acc

    def new_values(self, g: UniPoly, phi2: UniPoly, mu2: Fraction) -> list:
        """Values nu > mu2 available for augmenting with key phi2.

        Faces of the polygon of g's phi2-expansion strictly above the
        current value of phi2; INFINITY when phi2 divides g exactly.
        """
        cs = _expansion(g, phi2)
        ordv = 0
        while not cs[ordv]:
            ordv += 1
        vals = []
        if ordv:
            assert ordv == 1, "repeated exact key divisor in squarefree input"
            vals.append(INFINITY)
        pts = []
        for i in range(ordv, len(cs)):
            if cs[i]:
                pts.append((i, Fraction(self.value(cs[i]))))
        for slope, _ell in lower_hull(pts):
            nu = -slope
            if nu > mu2:
                vals.append(nu)
        assert vals, "residual factor with no continuation"
        return vals


class _StageZero(_Stage):
    """Base valuation: v_p on coefficients, v(x) = lam for one polygon face."""

    __slots__ = ("p", "lam", "n", "d", "a", "b", "D", "F", "field", "phi", "var")

    def __init__(self, p: int, lam: Fraction, var: str):
        self.p = p
        self.lam = Fraction(lam)
        self.n = self.lam.numerator
        self.d = self.lam.denominator
        self.a = 0 if self.d == 1 else pow(self.n % self.d, -1, self.d)
        self.b = (1 - self.a * self.n) // self.d
        assert self.a * self.n + self.b * self.d == 1
        self.D = self.d
        self.F = 1
        self.field = FpField(p)
        self.var = var
        self.phi = UniPoly.gen(var)

    def value(self, g: UniPoly):
        best = INFINITY
        for i, c in enumerate(g.coeffs):
            if not c:
                continue
            v = valuation(c, self.p) + i * self.lam
            if best is INFINITY or v < best:
                best = v
        return best

    def reduction(self, g: UniPoly):
        """Residual polynomial of g plus the location of its graded class.

        Returns (h, i0, j0, value) with h over F_p and the class of g equal
        to h(Y) * x^i0 * p^j0.
        """
        vg = self.value(g)
        assert vg is not INFINITY
        S = [
            i
            for i, c in enumerate(g.coeffs)
            if c and valuation(c, self.p) + i * self.lam == vg
        ]
        i0 = S[0]
        j0 = valuation(g.coeffs[i0], self.p)
        h = [0] * ((S[-1] - i0) // self.d + 1)
        for i in S:
            r, rem = divmod(i - i0, self.d)
            assert rem == 0
            c = g.coeffs[i]
            j = valuation(c, self.p)
            unit = c / Fraction(self.p) ** j
            h[r] = unit.numerator * pow(unit.denominator, -1, self.p) % self.p
        return h, i0, j0, vg

    def lift_elt(self, c: int, m: int) -> UniPoly:
        """Constant with class c * p^m."""
        return UniPoly.const(Fraction(int(c)) * Fraction(self.p) ** m, self.var)


class _Augmented(_Stage):
    """Chain extended by one key: the previous stage plus v(phi) = mu."""

    __slots__ = ("prev", "p", "phi", "mu", "n", "d", "a", "b", "D", "F",
                 "field", "ybar", "extended", "var")

    def __init__(self, prev, phi: UniPoly, mu: Fraction, u: list):
        self.prev = prev
        self.p = prev.p
        self.phi = phi
        self.mu = Fraction(mu)
        rel = self.mu * prev.D
        self.n = rel.numerator
        self.d = rel.denominator
        self.a = 0 if self.d == 1 else pow(self.n % self.d, -1, self.d)
        self.b = (1 - self.a * self.n) // self.d
        assert self.a * self.n + self.b * self.d == 1
        self.D = self.d * prev.D
        self.F = prev.F * (len(u) - 1)
        # a linear residual factor fixes the class of Y in the same field;
        # only a genuine extension is worth a new field level (refinement
        # chains would otherwise stack degree-1 towers, and every field
        # operation would slow down by a constant factor per stage)
        self.extended = len(u) > 2
        if self.extended:
            self.field = ExtField(prev.field, tuple(u))
            self.ybar = self.field.gen()
        else:
            self.field = prev.field
            self.ybar = prev.field.neg(u[0])
        self.var = prev.var

    def value(self, g: UniPoly):
        best = INFINITY
        for i, c in enumerate(_expansion(g, self.phi)):
            if not c:
                continue
            v = self.prev.value(c) + i * self.mu
            if best is INFINITY or v < best:
                best = v
        return best

    def _spread(self, g: UniPoly):
        cs = _expansion(g, self.phi)
        vals = []
        best = INFINITY
        for i, c in enumerate(cs):
            if not c:
                vals.append(INFINITY)
                continue
            v = self.prev.value(c) + i * self.mu
            vals.append(v)
            if best is INFINITY or v < best:
                best = v
        S = [i for i, v in enumerate(vals) if v is not INFINITY and v == best]
        return cs, S, best

    def projection(self, g: UniPoly) -> int:
        """Expansion width of g's minimal-value support; 1 means terminal."""
        _cs, S, _v = self._spread(g)
        return S[-1] - S[0]

    def reduction(self, g: UniPoly):
        """Residual polynomial over this stage's residue field.

        Each contributing coefficient is reduced at the previous stage and
        re-expressed through the degree-zero unit Y_prev, whose class is
        this field's generator; the exponent solve is
        phi_prev^i1 * Theta^j1 = Y_prev^(b*i1 - a*j1) * Theta_prev^(n*i1 + d*j1)
        with (n, d, a, b) taken from the previous stage.
        """
        cs, S, vg = self._spread(g)
        pv = self.prev
        K = self.field
        y = self.ybar
        into = K.embed if self.extended else (lambda c: c)
        i0 = S[0]
        j0 = None
        h = [K.zero()] * ((S[-1] - i0) // self.d + 1)
        for i in S:
            r, rem = divmod(i - i0, self.d)
            assert rem == 0
            c1, i1, j1, vc = pv.reduction(cs[i])
            e = pv.b * i1 - pv.a * j1
            m = pv.n * i1 + pv.d * j1
            assert m == vc * pv.D
            if j0 is None:
                j0 = m
            assert m == j0 - r * self.n
            acc = K.zero()
            for cr in reversed(c1):
                acc = K.add(K.mul(acc, y), into(cr))
            h[r] = K.mul(acc, K.pow(y, e))
        return h, i0, j0, vg

    def lift_elt(self, c, m: int) -> UniPoly:
        """Polynomial of degree < deg(phi) with class c * Theta_prev^m."""
        pv = self.prev
        K = self.field
        v, i = divmod(pv.a * m, pv.d)
        j = pv.n * v + pv.b * m
        shifted = K.mul(c, K.pow(self.ybar, v))
        cz = poly_trim(list(shifted)) if self.extended else [shifted]
        zero = pv.field.zero()
        acc = UniPoly.const(Fraction(0), self.var)
        for r, cr in enumerate(cz):
            if cr == zero:
                continue
            term = pv.lift_elt(cr, j - r * pv.n)
            acc = acc + term * pv.phi ** (i + r * pv.d)
        return acc


# -- decomposition driver ----------------------------------------------------


def _decompose_face(f: UniPoly, p: int, lam: Fraction) -> list:
    """(e, f) pairs of the p-adic factors attached to one polygon face."""
    out = []
    work = [_StageZero(p, lam, f.var)]
    steps = 0
    while work:
        steps += 1
        if steps > _MAX_STEPS:
            raise RuntimeError(
                f"inductive valuation chain passed {_MAX_STEPS} stages at "
                f"p={p}; refusing to return an unverified shape"
            )
        V = work.pop()
        h, _i0, _j0, _vg = V.reduction(f)
        zero = V.field.zero()
        _unit, factors = factor_poly(V.field, h, seed=0)
        for u, _mult in factors:
            assert u[0] != zero, "unexpected unit-power factor in residual"
            phi2 = V.lift_key(u)
            mu2 = V.value(phi2)
            for nu in V.new_values(f, phi2, mu2):
                if nu is INFINITY:
                    # phi2 divides f: it is a full p-adic factor already
                    e = V.D
                    res = phi2.degree() // e
                    assert res == V.F * (len(u) - 1)
                    out.append((e, res))
                    continue
                A = _Augmented(V, phi2, nu, u)
                if A.projection(f) == 1:
                    e = A.D
                    res = phi2.degree() // e
                    assert res == A.F and e * res == phi2.degree()
                    out.append((e, res))
                else:
                    work.append(A)
    return out


def _shape_exact(f: UniPoly, p: int) -> list:
    """(e, f) pairs by inductive valuations; f monic squarefree p-integral."""
    pairs = []
    if not f.coeff(0):
        pairs.append((1, 1))  # the factor x itself
        f = f.exact_div(UniPoly.gen(f.var))
    if f.degree() == 0:
        return pairs
    polygon = newton_polygon(f, lambda c: valuation(c, p))
    for lam, _ell in polygon.faces:
        pairs.extend(_decompose_face(f, p, lam))
    return pairs


def _shape_unramified(f: UniPoly, p: int):
    """Fast path: f squarefree mod p means every factor is unramified."""
    try:
        seq = degree_sequence(reduce_mod_p(f.coeffs, p))
    except NotSquarefree:
        return None
    return [(1, d) for d in seq]


def padic_shape(f: UniPoly, p: int) -> PadicShape:
    """Ramification indices and residue degrees of f's p-adic factors.

    f must be monic, squarefree over Q, univariate (bind any parameters
    first), with p-integral coefficients.  Raises WildPrime when p divides
    a ramification index: the result would be correct but the toolkit's
    tame reasoning does not apply, so it is withheld.
    """
    _check_prime(p)
    if not isinstance(f, UniPoly):
        raise TypeError("expected a UniPoly over Q")
    if any(isinstance(c, UniPoly) for c in f.coeffs):
        raise ValueError("polynomial still has free parameters; bind them first")
    n = f.degree()
    if n < 1:
        raise ValueError("shape analysis needs degree at least 1")
    if not f.is_monic():
        raise ValueError("leading coefficient must be 1")
    for c in f.coeffs:
        if c and valuation(c, p) < 0:
            raise NotPIntegral(f"coefficient {c} has {p} in the denominator")
    if gcd_field(f, f.derivative()).degree() != 0:
        raise NotSquarefree("repeated factor over Q; shapes need squarefree input")

    pairs = _shape_unramified(f, p)
    exact = pairs is None
    if exact:
        pairs = _shape_exact(f, p)
    assert sum(e * res for e, res in pairs) == n

    for e, _res in pairs:
        if e % p == 0:
            raise WildPrime(f"ramification index {e} at p={p}")
    if exact:
        # tame conductor bound: v_p(disc f) exceeds sum (e-1)*f by twice
        # the p-valuation of the index of Z[x]/(f) in the maximal order
        dv = valuation(discriminant_in(f, f.var), p)
        gap = dv - sum((e - 1) * res for e, res in pairs)
        assert gap >= 0 and gap % 2 == 0
    return PadicShape(p, tuple(sorted(pairs, reverse=True)), True)


def disc_valuation_check(shape: PadicShape, f: UniPoly, p: int) -> bool:
    """True when v_p(disc f) equals the tame conductor sum of the shape.

    Exact equality holds iff Z[x]/(f) is maximal at p, so False is a
    meaningful answer, not an error: it flags either a wrong shape or an
    order that is not p-maximal.
    """
    if not shape.tame:
        raise ValueError("the discriminant identity applies to tame shapes only")
    dv = valuation(discriminant_in(f, f.var), p)
    return dv == sum((e - 1) * res for e, res in shape.pairs)
