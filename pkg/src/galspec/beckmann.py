"""Tame inertia prediction for specialized families.

Away from a finite set of bad primes, ramification in the number field cut
out by binding (s, t) = (s0, t0) is read off from the contact order between
t0 and the branch points: a prime p ramifies only if t0 meets some branch
point p-adically, and the inertia group is then generated by tau^I, where
tau generates inertia over that branch point and I is the contact order.

The bad set is carried as a list of integer certificates, one per reason, so
membership can be decided exactly for any prime without factoring anything.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import NonPrimeError, factorint, is_prime, primes_up_to, valuation
from .family import FamilyManifest, nondegenerate_check
from .ffact import factor_mod_p, reduce_mod_p
from .permgrp import CycleType, power_cycle_type
from .poly import (
    UniPoly,
    constant_value,
    discriminant_in,
    integer_normalize,
    squarefree_part,
)

REASONS = (
    "DividesGroupOrder",
    "VerticalRamification",
    "BranchCollision",
    "NonIntegralBranchPoint",
    "DiscriminantInseparable",
)


@dataclass(frozen=True)
class BadPrimeReport:
    """A prime excluded from predictions, with the reasons it fails."""

    p: int
    reasons: tuple

    def __post_init__(self):
        if not self.reasons:
            raise ValueError(f"bad prime {self.p} reported without a reason")
        unknown = set(self.reasons) - set(REASONS)
        if unknown:
            raise ValueError(f"unknown reasons {sorted(unknown)}")
        object.__setattr__(self, "reasons", tuple(sorted(set(self.reasons))))


@dataclass(frozen=True)
class InertiaPrediction:
    """Inertia over p is conjugate to the cyclic group <tau^multiplicity>."""

    p: int
    branch: int
    multiplicity: int
    generator_class: CycleType
    order: int


@dataclass(frozen=True)
class UnramifiedPrediction:
    """t0 meets no branch point at p; the specialization is unramified."""

    p: int


class PredictionContradiction(Exception):
    """t0 meets two branch points at once: p leaked through the bad set."""

    def __init__(self, report: BadPrimeReport):
        self.report = report
        super().__init__(
            f"p = {report.p} intersects several branch points; "
            f"it must be treated as bad ({', '.join(report.reasons)})"
        )


def intersection_multiplicity(t0, branch, p: int) -> int:
    """Contact order of t0 with a branch point at p.

    branch is either a rational number a (contact = v_p(t0 - a)) or the
    minimal polynomial g of an algebraic branch point (contact = v_p(g(t0))).
    The value is negative when t0 itself is not p-integral.
    """
    if not is_prime(p):
        raise NonPrimeError(f"{p} is not prime")
    t0 = Fraction(t0)
    if isinstance(branch, UniPoly):
        v = branch.evaluate(t0)
        if isinstance(v, UniPoly):
            v = constant_value(v)
        if v == 0:
            raise ValueError(f"t0 = {t0} is the branch point itself")
        return valuation(v, p)
    a = Fraction(branch)
    if t0 == a:
        raise ValueError(f"t0 = {t0} is the branch point itself")
    return valuation(t0 - a, p)


def _bind_s(g: UniPoly, s0: Fraction) -> UniPoly:
    bound = g.bind("s", s0)
    return UniPoly([constant_value(c) for c in bound.coeffs], "t")


def _fraction_leaves(g) -> list:
    if isinstance(g, UniPoly):
        out = []
        for c in g.coeffs:
            out.extend(_fraction_leaves(c))
        return out
    return [Fraction(g)]


@lru_cache(maxsize=64)
def _certificates(manifest: FamilyManifest, s0: Fraction) -> tuple:
    """(reason, integer) pairs; p is bad for s0 iff it divides one of them."""
    report = nondegenerate_check(manifest, s0)
    if not report:
        raise ValueError(
            f"s0 = {s0} is degenerate: " + "; ".join(report.reasons)
        )
    if manifest.group is None:
        raise ValueError("manifest declares no group; its order is needed")

    certs = []

    def add(reason, n):
        n = abs(int(n))
        if n > 1:
            certs.append((reason, n))

    add("DividesGroupOrder", manifest.group.order)

    # vertical ramification: the t-discriminant must stay nonzero mod p
    delta = _bind_s(manifest.disc, s0)
    c, ints = integer_normalize(delta)
    add("VerticalRamification", c.numerator)
    add("VerticalRamification", c.denominator)
    add("DiscriminantInseparable", ints[-1])

    # the squarefree integer model of the branch locus: degree or
    # separability loss mod p means branch points collide or escape
    prim = UniPoly([Fraction(v) for v in ints], "t")
    _, wints = integer_normalize(squarefree_part(prim))
    add("NonIntegralBranchPoint", wints[-1])
    if len(wints) > 2:
        w = UniPoly([Fraction(v) for v in wints], "t")
        dw = discriminant_in(w, "t")
        add("BranchCollision", dw)
        add("DiscriminantInseparable", dw)

    locations = [
        bp.location_at(s0)
        for bp in manifest.branch_points
        if not bp.is_infinite
    ]
    for a in locations:
        add("NonIntegralBranchPoint", a.denominator)
    for i, a in enumerate(locations):
        for b in locations[i + 1 :]:
            add("BranchCollision", (a - b).numerator)

    return tuple(certs)


def bad_primes(manifest: FamilyManifest, s0, bound: int = 1000) -> list:
    """All bad primes up to bound, each with its reasons.

    The reports are complete below the bound; use is_bad_prime for exact
    membership of any individual prime, however large.
    """
    certs = _certificates(manifest, Fraction(s0))
    out = []
    for p in primes_up_to(bound):
        reasons = {reason for reason, n in certs if n % p == 0}
        if reasons:
            out.append(BadPrimeReport(p, tuple(sorted(reasons))))
    return out


def is_bad_prime(manifest: FamilyManifest, s0, p: int) -> bool:
    if not is_prime(p):
        raise NonPrimeError(f"{p} is not prime")
    certs = _certificates(manifest, Fraction(s0))
    return any(n % p == 0 for _, n in certs)


def residue_class_bound(manifest: FamilyManifest) -> int:
    """Upper bound for |bad_s_residues(p)|, independent of p."""
    return sum(g.degree() for _, g in manifest.s_guards)


def global_exceptional(manifest: FamilyManifest) -> frozenset:
    """Primes at which the residue-class analysis itself breaks down."""
    if manifest.group is None:
        raise ValueError("manifest declares no group; its order is needed")
    out = set(factorint(manifest.group.order))
    for _, g in manifest.s_guards:
        lc = g.coeff(g.degree())
        out.update(factorint(abs(lc.numerator)))
    dens = [x.denominator for x in _fraction_leaves(manifest.f)]
    for d in dens:
        if d > 1:
            out.update(factorint(d))
    return frozenset(out)


def bad_s_residues(manifest: FamilyManifest, p: int) -> frozenset:
    """Residues r mod p such that s0 = r could make p a bad prime.

    These are the mod-p roots of the manifest's s-polynomial conditions;
    their number is at most residue_class_bound(manifest) for every
    admissible p.
    """
    if not is_prime(p):
        raise NonPrimeError(f"{p} is not prime")
    if p in global_exceptional(manifest):
        raise ValueError(f"p = {p} is in the global exceptional set")
    out = set()
    for _, g in manifest.s_guards:
        coeffs = [g.coeff(i) for i in range(g.degree() + 1)]
        for factor, _ in factor_mod_p(reduce_mod_p(coeffs, p)).factors:
            if factor.degree() == 1:
                out.add(-factor.coeffs[0] % p)
    return frozenset(out)


def predict_inertia(manifest: FamilyManifest, i: int, s0, t0, p: int):
    """Predict the inertia class over p in the (s0, t0) specialization.

    Returns an InertiaPrediction when t0 meets the declared branch point i,
    an UnramifiedPrediction when it meets nothing.  The uniqueness of the
    met branch point is asserted at runtime: a double meeting means p leaked
    through the bad-prime set and raises PredictionContradiction.

    The caller is responsible for keeping p outside bad_primes(manifest, s0);
    only the wild case (p dividing the group order) is rejected here.
    """
    if not is_prime(p):
        raise NonPrimeError(f"{p} is not prime")
    s0, t0 = Fraction(s0), Fraction(t0)
    if manifest.group is not None and manifest.group.order % p == 0:
        raise ValueError(
            f"p = {p} divides the group order; the tame criterion does not apply"
        )
    if not 0 <= i < len(manifest.branch_points):
        raise IndexError(f"no branch point with index {i}")

    mults = []
    for j, bp in enumerate(manifest.branch_points):
        if bp.is_infinite:
            contact = -valuation(t0, p) if t0 else 0
        else:
            a = bp.location_at(s0)
            if t0 == a:
                raise ValueError(f"t0 = {t0} is the branch point at index {j}")
            contact = valuation(t0 - a, p)
        mults.append(max(0, contact))

    residual_contact = 0
    residual = manifest.locus.residual
    if residual.degree() >= 1:
        _, rints = integer_normalize(_bind_s(residual, s0))
        value = UniPoly([Fraction(v) for v in rints], "t").evaluate(t0)
        if value == 0:
            raise ValueError(f"t0 = {t0} is an undeclared branch point")
        residual_contact = max(0, valuation(value, p))

    positives = [(j, contact) for j, contact in enumerate(mults) if contact > 0]
    total = len(positives) + (1 if residual_contact > 0 else 0)
    if total == 0:
        return UnramifiedPrediction(p)
    if total >= 2:
        raise PredictionContradiction(BadPrimeReport(p, ("BranchCollision",)))
    if residual_contact > 0:
        raise ValueError(
            f"t0 = {t0} meets a non-rational branch point at p = {p}; "
            "no inertia generator is declared for it"
        )
    j, contact = positives[0]
    if j != i:
        raise ValueError(f"t0 = {t0} meets branch point {j}, not {i}")
    bp = manifest.branch_points[i]
    return InertiaPrediction(
        p,
        i,
        contact,
        power_cycle_type(bp.inertia_generator, contact),
        bp.e // gcd(bp.e, contact),
    )
