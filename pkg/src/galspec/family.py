"""Family manifests: declared local data, branch loci, and probe validation.

A manifest describes a one-parameter family f(s, t, X), monic in X, whose
splitting field over Q(s)(t) has a fixed Galois group: for each declared
branch point in t it records the inertia generator (a permutation of the
roots), a model of the decomposition group, and optionally the residue
subextension as a polynomial over Q[s].  That data cannot be computed from
f by desk methods, so it is treated as input; loading cross-checks it
against everything that can be computed exactly:

- declared finite branch points must be roots of disc_X(f),
- the inertia generator's order must match the declared ramification index
  and generate a normal subgroup of the decomposition model,
- Newton-polygon probes at sample parameter values must reproduce the
  declared cycle type (inertia_order_probe), refusing ambiguous polygons
  rather than guessing.

A branch point at t = infinity is handled on the u = 1/t chart throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import lcm

from .arith import INFINITY
from .permgrp import PermGroup, cycle_type, generate, parse_perm
from .poly import (
    UniPoly,
    constant_value,
    content_in_coeffs,
    discriminant_in,
    format_poly,
    gcd_field,
    gcd_over_poly_coeffs,
    integer_normalize,
    lower_hull_vertices,
    parse_poly,
    primitive_part,
    rational_roots,
    specialize,
)


class ManifestInconsistent(Exception):
    """Declared manifest data contradicts what was computed from f."""


class ProbeAmbiguous(Exception):
    """A single-level Newton polygon cannot certify the local data."""


def _s_const(value) -> UniPoly:
    return UniPoly([Fraction(value)], "s")


def _flatten_t(c: UniPoly) -> UniPoly:
    """Collapse a t-polynomial whose coefficients are constant in s."""
    return UniPoly([constant_value(x) for x in c.coeffs], "t")


def _normalize_s(g: UniPoly) -> UniPoly:
    _, ints = integer_normalize(g)
    return UniPoly([Fraction(v) for v in ints], "s")


@dataclass(frozen=True)
class BranchPoint:
    """One declared branch point of the family.

    location is a polynomial in s (the branch point t = m(s)) or the
    INFINITY sentinel; denominator is the lcm of the location's coefficient
    denominators, kept so non-integral branch data can be flagged per prime.
    """

    location: object
    e: int
    inertia_generator: Perm
    decomposition: PermGroup
    rho: UniPoly | None
    denominator: int

    @property
    def is_infinite(self) -> bool:
        return self.location is INFINITY

    def location_at(self, s0) -> Fraction:
        if self.is_infinite:
            raise ValueError("branch point at infinity has no finite location")
        return self.location.evaluate(Fraction(s0))

    def inertia_group(self) -> PermGroup:
        return generate([self.inertia_generator])


@dataclass(frozen=True)
class BranchLocus:
    """Rational branch points plus the unfactored remainder of the locus.

    points are s-polynomials (symbolic mode) or Fractions (bound mode);
    residual is the squarefree non-rational part of the t-discriminant.
    infinity records whether the u = 1/t chart degenerates at u = 0, which
    happens whenever the cover ramifies over t = infinity (and also for
    branch points merely meeting there, so it is a conservative flag).
    """

    points: tuple
    residual: UniPoly
    infinity: bool


@dataclass(frozen=True)
class NondegeneracyReport:
    s0: Fraction
    reasons: tuple

    @property
    def ok(self) -> bool:
        return not self.reasons

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ProbeResult:
    """Local data over one branch point, read off a Newton polygon.

    pairs lists (e, count) per polygon face: count places of ramification
    index e.  e_multiset expands that to one entry per place, the exact
    shape of a cycle type.
    """

    pairs: tuple
    e_multiset: tuple


@dataclass(frozen=True)
class FamilyManifest:
    name: str
    f: UniPoly
    group: PermGroup | None
    branch_points: tuple
    infinity_transformed: bool
    disc: UniPoly
    squarefree_disc: UniPoly
    locus: BranchLocus
    s_guards: tuple


# -- branch locus -------------------------------------------------------------


def infinity_chart(f: UniPoly) -> UniPoly:
    """u^D * f(s, 1/u, X) with D = deg_t f, as a polynomial in (s, u, X).

    The chart variable u is reused under the name t; the branch point
    t -> infinity becomes u -> 0.
    """
    D = f.degree_in("t")
    if D == 0:
        raise ValueError("family does not depend on t; no chart at infinity")
    zero_s = _s_const(0)
    out = []
    for j in range(f.degree() + 1):
        c = f.coeff(j)
        coeffs = list(c.coeffs) + [zero_s] * (D + 1 - len(c.coeffs))
        out.append(UniPoly(list(reversed(coeffs)), "t"))
    return UniPoly(out, "X")


def _squarefree_in_t(disc: UniPoly) -> UniPoly:
    prim = primitive_part(disc)
    if disc.degree() < 2:
        return prim
    g = gcd_over_poly_coeffs(disc, disc.derivative())
    if g.degree() == 0:
        return prim
    return primitive_part(prim.exact_div(g))


def _has_infinite_branch(f: UniPoly, disc_t_degree: int) -> bool:
    # the 1/t chart's discriminant vanishes at u = 0 exactly when the
    # t-degree of disc_X(f) falls short of its generic bound
    return disc_t_degree < f.degree_in("t") * (2 * f.degree() - 2)


def branch_locus(f: UniPoly, s0=None) -> BranchLocus:
    """Rational branch points of f in t, the non-rational remainder, and
    whether t -> infinity branches.

    With s0 = None the rational points reported are the parameter-independent
    ones (t = c with c rational); parameter-dependent rational branch points
    are supported as declared manifest data but are not searched for here.
    Binding s0 gives the complete list of rational branch points of the
    specialized family.
    """
    if not _is_monic(f):
        raise ValueError("family polynomial must be monic in X")
    if s0 is not None:
        fb = specialize(f, {"s": Fraction(s0)})
        disc = discriminant_in(fb, "X")
        if not disc:
            raise ValueError("discriminant vanishes; f is not squarefree in X")
        flat = _flatten_t(disc)
        srf = flat.exact_div(gcd_field(flat, flat.derivative())) if flat.degree() >= 2 else flat
        points = []
        work = srf
        if srf.degree() >= 1:
            for root, _ in rational_roots(srf):
                points.append(root)
                work = work.exact_div(UniPoly([-root, Fraction(1)], "t"))
        return BranchLocus(
            tuple(points), work.monic(), _has_infinite_branch(f, flat.degree())
        )

    disc = discriminant_in(f, "X")
    if not disc:
        raise ValueError("discriminant vanishes; f is not squarefree in X")
    srf = _squarefree_in_t(disc)
    points = []
    if srf.degree() >= 1:
        candidates = None
        for sigma in (1, 2, 3, 5, 7):
            bound = _flatten_t(srf.bind("s", Fraction(sigma)))
            if not bound or bound.degree() < 1:
                continue
            roots = {r for r, _ in rational_roots(bound)}
            candidates = roots if candidates is None else candidates & roots
            if not candidates:
                break
        for c in sorted(candidates or ()):
            if not srf.evaluate(Fraction(c)):
                points.append(c)
    residual = srf
    for c in points:
        residual = residual.exact_div(UniPoly([_s_const(-c), _s_const(1)], "t"))
    return BranchLocus(
        tuple(points), residual, _has_infinite_branch(f, disc.degree())
    )


def _is_monic(f: UniPoly) -> bool:
    try:
        return constant_value(f.lc()) == 1
    except ValueError:
        return False


# -- manifest loading ---------------------------------------------------------

_MANIFEST_KEYS = {"name", "poly", "group_generators", "branch_points", "infinity_transformed"}
_BRANCH_KEYS = {"location", "e", "inertia_generator", "decomposition_generators", "residue_subextension"}


def _parse_location(text: str):
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    p = parse_poly(text)
    if p.degree() > 0 or p.degree_in("t") > 0:
        raise ManifestInconsistent(
            f"branch location {text!r} must be a polynomial in s alone"
        )
    inner = p.coeff(0)
    if isinstance(inner, UniPoly):
        inner = inner.coeff(0)
    if not isinstance(inner, UniPoly):
        inner = UniPoly([inner], "s")
    return inner


def _check_normal_inertia(tau: Perm, D: PermGroup):
    I = generate([tau])
    i_set = set(I.elements)
    if not i_set <= set(D.elements):
        raise ManifestInconsistent(
            "inertia generator lies outside the decomposition model"
        )
    for d in D.generators:
        dinv = d.inverse()
        if any(d * g * dinv not in i_set for g in I.elements):
            raise ManifestInconsistent(
                "inertia subgroup is not normal in the decomposition model"
            )


def _load_branch_point(raw: dict, degree: int, disc: UniPoly) -> BranchPoint:
    unknown = set(raw) - _BRANCH_KEYS
    if unknown:
        raise ManifestInconsistent(f"unknown branch point fields {sorted(unknown)}")
    location = _parse_location(raw["location"])
    e = int(raw["e"])
    tau = parse_perm(raw["inertia_generator"], degree)
    D = generate([parse_perm(g, degree) for g in raw["decomposition_generators"]])

    if e < 1 or tau.order() != e:
        raise ManifestInconsistent(
            f"inertia generator has order {tau.order()}, declared e = {e}"
        )
    _check_normal_inertia(tau, D)

    denominator = 1
    if location is not INFINITY:
        if disc.evaluate(location):
            raise ManifestInconsistent(
                f"declared branch point t = {format_poly(location)} is not a "
                "root of the t-discriminant"
            )
        denominator = lcm(*(c.denominator for c in location.coeffs))

    rho = None
    if raw.get("residue_subextension") is not None:
        rho = parse_poly(raw["residue_subextension"])
        if rho.degree_in("t") > 0:
            raise ManifestInconsistent("residue subextension must not involve t")
        if not _is_monic(rho):
            raise ManifestInconsistent("residue subextension must be monic in X")
        if not discriminant_in(rho, "X"):
            raise ManifestInconsistent("residue subextension must be squarefree in X")
        if D.order % e or (D.order // e) % rho.degree():
            raise ManifestInconsistent(
                f"residue subextension degree {rho.degree()} does not divide "
                f"|decomposition| / e = {D.order}/{e}"
            )
    return BranchPoint(location, e, tau, D, rho, denominator)


def _collision_guards(rational_points: list, residual: UniPoly) -> list:
    guards = []
    for i in range(len(rational_points)):
        for j in range(i + 1, len(rational_points)):
            diff = rational_points[i] - rational_points[j]
            if diff.degree() >= 1:
                guards.append((
                    f"branch points t = {format_poly(rational_points[i])} and "
                    f"t = {format_poly(rational_points[j])} collide",
                    diff,
                ))
    if residual.degree() >= 1:
        for m in rational_points:
            meets = residual.evaluate(m)
            if meets.degree() >= 1:
                guards.append((
                    f"branch point t = {format_poly(m)} meets the non-rational "
                    "branch locus",
                    meets,
                ))
            elif not meets:
                raise ManifestInconsistent(
                    f"declared branch point t = {format_poly(m)} lies on the "
                    "non-rational branch locus for every s"
                )
    if residual.degree() >= 2:
        guards.append((
            "non-rational branch points collide",
            discriminant_in(residual, "t"),
        ))
    return guards


def load_manifest(source) -> FamilyManifest:
    """Load and validate a family manifest from a dict or a JSON file path."""
    if isinstance(source, dict):
        raw = source
    else:
        with open(source, encoding="utf-8") as fh:
            raw = json.load(fh)
    unknown = set(raw) - _MANIFEST_KEYS
    if unknown:
        raise ManifestInconsistent(f"unknown manifest fields {sorted(unknown)}")

    f = parse_poly(raw["poly"])
    n = f.degree()
    if n < 1 or not _is_monic(f):
        raise ManifestInconsistent("family polynomial must be monic of degree >= 1 in X")

    disc = discriminant_in(f, "X")
    if not disc:
        raise ManifestInconsistent("f is not squarefree in X over Q(s, t)")

    group = None
    if raw.get("group_generators"):
        group = generate([parse_perm(g, n) for g in raw["group_generators"]])

    branch_points = tuple(
        _load_branch_point(bp, n, disc) for bp in raw.get("branch_points", ())
    )
    if any(bp.is_infinite for bp in branch_points) and f.degree_in("t") == 0:
        raise ManifestInconsistent(
            "manifest declares a branch point at infinity but f does not depend on t"
        )

    locus = branch_locus(f)
    srf = _squarefree_in_t(disc)

    # every rational branch point: declared finite ones plus the constant
    # ones found by the locus scan, deduplicated
    rational_points = [bp.location for bp in branch_points if not bp.is_infinite]
    for c in locus.points:
        as_poly = _s_const(c)
        if all(as_poly != m for m in rational_points):
            rational_points.append(as_poly)
    for a in range(len(rational_points)):
        for b in range(a + 1, len(rational_points)):
            if rational_points[a] == rational_points[b]:
                raise ManifestInconsistent("two branch points declared at one location")

    residual = srf
    for m in rational_points:
        shifted = UniPoly([-m, _s_const(1)], "t")
        residual = residual.exact_div(shifted)

    guards = []
    lead = disc.lc()
    if lead.degree() >= 1:
        guards.append(("discriminant t-degree drops", lead))
    content = content_in_coeffs(disc)
    if content.degree() >= 1:
        guards.append(("discriminant content vanishes", content))
    tdeg = f.degree_in("t")
    if tdeg:
        tops = [c.coeff(tdeg) for c in (f.coeff(j) for j in range(n + 1))
                if c.degree() >= tdeg]
        acc = None
        for top in tops:
            if not top:
                continue
            acc = top if acc is None else gcd_field(acc, top)
            if acc.degree() == 0:
                break
        if acc is not None and acc.degree() >= 1:
            guards.append(("family t-degree drops", acc.monic()))
    guards.extend(_collision_guards(rational_points, residual))
    s_guards = tuple((label, _normalize_s(g)) for label, g in guards)

    return FamilyManifest(
        name=raw["name"],
        f=f,
        group=group,
        branch_points=branch_points,
        infinity_transformed=bool(raw.get("infinity_transformed", False)),
        disc=disc,
        squarefree_disc=srf,
        locus=locus,
        s_guards=s_guards,
    )


@lru_cache(maxsize=None)
def builtin_manifest(name: str) -> FamilyManifest:
    """Load one of the manifests shipped with the package."""
    path = resources.files("galspec").joinpath(f"data/{name}.json")
    with resources.as_file(path) as concrete:
        return load_manifest(concrete)


# -- specialization checks ----------------------------------------------------


def nondegenerate_check(manifest: FamilyManifest, s0) -> NondegeneracyReport:
    """Does binding s = s0 preserve the family's branching geometry?

    True means: discriminant degree and content survive, the family keeps
    its t-degree, and no two branch points run together.  Every failed
    clause is reported, none is fatal.
    """
    s0 = Fraction(s0)
    reasons = []
    for label, g in manifest.s_guards:
        if g.evaluate(s0) == 0:
            reasons.append(label)
    return NondegeneracyReport(s0, tuple(reasons))


def inertia_order_probe(manifest: FamilyManifest, i: int, s0) -> ProbeResult:
    """Recompute the local (e, count) data over branch point i at s = s0
    from the Newton polygon of the shifted family, and check it against the
    declared inertia generator's cycle type.

    The polygon certifies places only when each face's residual polynomial
    is squarefree; otherwise ProbeAmbiguous is raised (deeper analysis would
    be needed, and guessing is worse than refusing).  A certified multiset
    that contradicts the declared cycle type raises ManifestInconsistent.
    """
    s0 = Fraction(s0)
    report = nondegenerate_check(manifest, s0)
    if not report:
        raise ValueError(
            f"s0 = {s0} is degenerate: " + "; ".join(report.reasons)
        )
    bp = manifest.branch_points[i]
    if bp.is_infinite:
        f, m = infinity_chart(manifest.f), Fraction(0)
    else:
        f, m = manifest.f, bp.location_at(s0)

    fb = specialize(f, {"s": s0})
    tcoeffs = []
    for j in range(fb.degree() + 1):
        c = _flatten_t(fb.coeff(j))
        if c and m:
            shifted = c.evaluate(UniPoly([m, Fraction(1)], "t"))
            # constant coefficients come back as bare scalars
            if not isinstance(shifted, UniPoly):
                shifted = UniPoly([shifted], "t")
            c = shifted
        tcoeffs.append(c)

    points = [(j, c.order_at_zero()) for j, c in enumerate(tcoeffs) if c]
    if len(points) < 2:
        raise ProbeAmbiguous("polygon is a single point; no local data")
    vertices = lower_hull_vertices(points)

    pairs = []
    expanded = []
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        slope = Fraction(y1 - y0, x1 - x0)
        den, num = slope.denominator, slope.numerator
        length = x1 - x0
        count = length // den
        rescoeffs = []
        for r in range(count + 1):
            c = tcoeffs[x0 + r * den]
            rescoeffs.append(c.coeff(y0 + r * num) if c else Fraction(0))
        residual = UniPoly(rescoeffs, "X")
        if residual.degree() >= 2 and gcd_field(residual, residual.derivative()).degree() > 0:
            raise ProbeAmbiguous(
                f"repeated residual roots on the face of slope {-slope} at "
                f"t = {'infinity' if bp.is_infinite else format_poly(m)}, s0 = {s0}"
            )
        pairs.append((den, count))
        expanded.extend([den] * count)

    expanded = tuple(sorted(expanded, reverse=True))
    declared = cycle_type(bp.inertia_generator).parts
    if expanded != declared:
        raise ManifestInconsistent(
            f"polygon places {expanded} contradict the declared inertia cycle "
            f"type {declared} at branch point {i}, s0 = {s0}"
        )
    return ProbeResult(tuple(sorted(pairs, reverse=True)), expanded)
