"""Polynomial tower: parser, resultants, discriminants, Newton polygons."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from galspec.arith import INFINITY, valuation
from galspec.poly import (
    NewtonPolygon,
    PolyParseError,
    UniPoly,
    constant_value,
    discriminant_in,
    format_poly,
    fraction_poly,
    gcd_field,
    gcd_over_poly_coeffs,
    integer_normalize,
    newton_polygon,
    parse_poly,
    rational_roots,
    resultant,
    specialize,
    squarefree_part,
    sylvester_resultant,
    x_poly_coeffs,
)

F_PSL = (
    "X^7 - 2sX^6 + (s^3 + s^2 + 3s - 2)X^4 + (-2s^3 - 4s^2 + 5s - 8)X^3"
    " + (s^3 + 4s^2 - 10s + 16)X^2 + (-s^2 + 5s - 12)X - s + 4"
    " + tX^2(X - 1)(X^2 - sX + s)"
)


def qpoly(*coeffs_low_to_high):
    return fraction_poly(list(coeffs_low_to_high))


small_fracs = st.fractions(min_value=-8, max_value=8, max_denominator=4)


def qpolys(max_degree=4, nonzero=False, monic=False):
    def build(coeffs):
        p = fraction_poly(coeffs)
        if monic and p:
            p = UniPoly(list(p.coeffs[:-1]) + [Fraction(1)], "X")
        return p

    strat = st.lists(small_fracs, min_size=1, max_size=max_degree + 1).map(build)
    if nonzero or monic:
        strat = strat.filter(lambda p: bool(p))
    return strat


class TestParser:
    def test_flagship_verbatim(self):
        f = parse_poly(F_PSL)
        assert f.degree() == 7
        assert f.degree_in("t") == 1
        assert f.degree_in("s") == 3
        assert f.is_monic()

    def test_whitespace_insensitive(self):
        squeezed = F_PSL.replace(" ", "")
        assert parse_poly(squeezed) == parse_poly(F_PSL)

    def test_implicit_multiplication(self):
        assert parse_poly("2sX") == parse_poly("2*s*X")
        assert parse_poly("(X-1)(X+1)") == parse_poly("X^2 - 1")

    def test_rational_literal(self):
        g = parse_poly("1/2 X^2 - 3/4")
        assert x_poly_coeffs(g) == [Fraction(-3, 4), Fraction(0), Fraction(1, 2)]

    def test_rejects_unknown_variable(self):
        with pytest.raises(PolyParseError):
            parse_poly("X + y")

    def test_rejects_bad_exponent(self):
        with pytest.raises(PolyParseError):
            parse_poly("X^-2")
        with pytest.raises(PolyParseError):
            parse_poly("X^(2)")

    def test_rejects_trailing_garbage(self):
        with pytest.raises(PolyParseError):
            parse_poly("X + 1)")

    def test_round_trip_flagship(self):
        f = parse_poly(F_PSL)
        assert parse_poly(format_poly(f)) == f

    @given(st.lists(st.lists(small_fracs, min_size=1, max_size=3), min_size=1, max_size=4))
    def test_round_trip_random_bivariate(self, rows):
        # parse(format(f)) nests s under t; compare by evaluation
        f = UniPoly([UniPoly(row, "t") for row in rows], "X")
        if not f:
            return
        g = parse_poly(format_poly(f)).bind("s", Fraction(1))
        for tv in (Fraction(0), Fraction(2), Fraction(-3)):
            lhs = [constant_value(c) for c in f.bind("t", tv).coeffs]
            rhs = [constant_value(c) for c in g.bind("t", tv).coeffs]
            assert lhs == rhs


class TestSpecialize:
    def test_quadratic(self):
        f = parse_poly("X^2 - t")
        g = specialize(f, {"t": 4})
        assert x_poly_coeffs(g) == [Fraction(-4), Fraction(0), Fraction(1)]

    def test_flagship_at_origin(self):
        f = parse_poly(F_PSL)
        g = specialize(f, {"s": 0, "t": 0})
        assert x_poly_coeffs(g) == [
            Fraction(4), Fraction(-12), Fraction(16), Fraction(-8),
            Fraction(-2), Fraction(0), Fraction(0), Fraction(1),
        ]

    def test_flagship_partial(self):
        f = parse_poly(F_PSL)
        g = specialize(f, {"s": 1})
        assert g.degree() == 7
        assert g.degree_in("t") == 1

    def test_rejects_x_binding(self):
        with pytest.raises(ValueError):
            specialize(parse_poly("X^2"), {"X": 1})

    @given(small_fracs, small_fracs)
    def test_binding_order_commutes(self, sv, tv):
        f = parse_poly(F_PSL)
        a = specialize(specialize(f, {"s": sv}), {"t": tv})
        b = specialize(specialize(f, {"t": tv}), {"s": sv})
        assert x_poly_coeffs(a) == x_poly_coeffs(b)


class TestResultant:
    def test_linear(self):
        assert resultant(qpoly(-2, 1), qpoly(-3, 1)) == -1

    def test_shared_root(self):
        assert resultant(qpoly(-1, 0, 1), qpoly(-1, 1)) == 0

    def test_quadratics(self):
        # product of (alpha - beta) over root pairs: (i-r2)(i+r2)(-i-r2)(-i+r2) = 9
        assert resultant(qpoly(1, 0, 1), qpoly(-2, 0, 1)) == 9

    @given(qpolys(4, nonzero=True), qpolys(4, nonzero=True))
    def test_matches_sylvester(self, f, g):
        assert resultant(f, g) == sylvester_resultant(f, g)

    @given(qpolys(3, nonzero=True), qpolys(3, nonzero=True))
    def test_matches_sympy(self, f, g):
        # sympy drops the swap sign when deg f < deg g; feed it the ordered
        # pair and apply (-1)^(mn) ourselves
        import sympy

        X = sympy.Symbol("X")
        sf = sum(sympy.Rational(c) * X**i for i, c in enumerate(f.coeffs))
        sg = sum(sympy.Rational(c) * X**i for i, c in enumerate(g.coeffs))
        m, n = f.degree(), g.degree()
        if m == 0 and n == 0:
            expected = Fraction(1)  # empty Sylvester matrix
        elif m >= n:
            expected = Fraction(str(sympy.resultant(sf, sg, X)))
        else:
            expected = (-1) ** (m * n) * Fraction(str(sympy.resultant(sg, sf, X)))
        assert resultant(f, g) == expected

    @given(qpolys(4, nonzero=True), qpolys(4, nonzero=True))
    def test_swap_sign(self, f, g):
        m, n = f.degree(), g.degree()
        assert resultant(f, g) == (-1) ** (m * n) * resultant(g, f)

    def test_rejects_variable_mix(self):
        with pytest.raises(ValueError):
            resultant(fraction_poly([1, 1]), UniPoly([Fraction(1), Fraction(1)], "t"))


class TestDiscriminant:
    def test_quadratic_in_t(self):
        d = discriminant_in(parse_poly("X^2 - t"), "X")
        assert format_poly(d) == "4*t"

    def test_cubic_in_t(self):
        d = discriminant_in(parse_poly("X^3 - t"), "X")
        assert format_poly(d) == "-27*t^2"

    def test_quadratic_formula(self):
        # b^2 - 4ac for monic X^2 + bX + c
        d = discriminant_in(qpoly(3, 5, 1), "X")
        assert d == 25 - 12

    def test_rejects_constants(self):
        with pytest.raises(ValueError):
            discriminant_in(qpoly(3), "X")

    @given(qpolys(3, monic=True), qpolys(3, monic=True))
    @settings(max_examples=60)
    def test_product_rule(self, f, g):
        if f.degree() < 1 or g.degree() < 1:
            return
        r = resultant(f, g)
        lhs = discriminant_in(f * g, "X")
        rhs = discriminant_in(f, "X") * discriminant_in(g, "X") * r * r
        assert lhs == rhs

    def test_flagship_at_s1_vs_numeric_roots(self):
        # root-separation oracle: disc vanishes exactly at root collisions
        import numpy as np

        f1 = specialize(parse_poly(F_PSL), {"s": 1})
        disc_t = discriminant_in(f1, "X")
        for tv in (Fraction(2), Fraction(-5), Fraction(7, 3)):
            val = constant_value(disc_t.bind("t", tv))
            coeffs = [float(c) for c in reversed(x_poly_coeffs(specialize(f1, {"t": tv})))]
            roots = np.roots(coeffs)
            sep = min(
                abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1 :]
            )
            assert val != 0
            assert sep > 1e-6

    def test_flagship_disc_matches_sympy(self):
        import sympy

        f = specialize(parse_poly(F_PSL), {"s": 1})
        t, X = sympy.symbols("t X")
        sf = sum(
            sympy.Rational(constant_value(f.coeff(i).coeff(j) if j <= f.coeff(i).degree() else 0))
            * t**j * X**i
            for i in range(f.degree() + 1)
            for j in range(f.coeff(i).degree() + 1)
        )
        expected = sympy.Poly(sf, X).discriminant()
        ours = discriminant_in(f, "X")
        diff = sympy.expand(
            expected
            - sum(
                sympy.Rational(constant_value(ours.coeff(j))) * t**j
                for j in range(ours.degree() + 1)
            )
        )
        assert diff == 0


class TestNewtonPolygon:
    def p_adic(self, p):
        return lambda c: valuation(c, p)

    def test_eisenstein(self):
        np5 = newton_polygon(qpoly(-5, 0, 1), self.p_adic(5))
        assert np5.faces == ((Fraction(1, 2), 2),)

    def test_tau_square_unit(self):
        # X^2 - tau^2 u, val(u) = 0, tau-adic on Q[tau] coefficients
        tau_sq = UniPoly([Fraction(0), Fraction(0), Fraction(3)], "t")
        f = UniPoly([-tau_sq, UniPoly((), "t"), UniPoly([Fraction(1)], "t")], "X")
        val = lambda c: c.order_at_zero() if c else INFINITY
        assert newton_polygon(f, val).faces == ((Fraction(1), 2),)

    def test_split_valuations(self):
        np7 = newton_polygon(qpoly(7, -8, 1), self.p_adic(7))
        assert np7.faces == ((Fraction(0), 1), (Fraction(1), 1))

    def test_x2_minus_12_at_3(self):
        np3 = newton_polygon(qpoly(-12, 0, 1), self.p_adic(3))
        assert np3.faces == ((Fraction(1, 2), 2),)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            newton_polygon(fraction_poly([]), self.p_adic(2))

    @given(qpolys(6, nonzero=True), st.sampled_from([2, 3, 5]))
    def test_lengths_sum_to_degree_span(self, f, p):
        poly = newton_polygon(f, self.p_adic(p))
        ord0 = f.order_at_zero()
        assert sum(l for _, l in poly.faces) == f.degree() - ord0
        slopes = [s for s, _ in poly.faces]
        assert slopes == sorted(slopes)
        assert len(set(slopes)) == len(slopes)


class TestRationalRoots:
    def test_mixed(self):
        f = qpoly(0, 0, -4, 0, 1)  # X^2 (X-2)(X+2)
        assert rational_roots(f) == [
            (Fraction(-2), 1), (Fraction(0), 2), (Fraction(2), 1),
        ]

    def test_fractional_root(self):
        f = qpoly(-1, 0, 0, 2)  # 2X^3 - 1 has no rational root
        assert rational_roots(f) == []
        g = qpoly(-1, 2) * qpoly(-1, 2) * qpoly(3, 0, 1)
        assert rational_roots(g) == [(Fraction(1, 2), 2)]

    @given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=0, max_size=4))
    @settings(max_examples=60)
    def test_recovers_constructed_roots(self, roots):
        f = qpoly(1, 0, 1)  # irrational quadratic residual
        for r in roots:
            f = f * qpoly(-r, 1)
        found = rational_roots(f)
        expected = sorted((r, roots.count(r)) for r in set(roots))
        assert found == expected

    def test_integer_normalize(self):
        content, prim = integer_normalize(qpoly(Fraction(2, 3), Fraction(4, 3)))
        assert content == Fraction(2, 3)
        assert prim == [1, 2]


class TestGcdTower:
    def test_gcd_over_s_coefficients(self):
        f = parse_poly("(t - s)(t + s^2)")
        g = parse_poly("(t - s)(t - 1)")
        ft = f.coeff(0)  # strip X wrapper: polynomials constant in X
        gt = g.coeff(0)
        d = gcd_over_poly_coeffs(ft, gt)
        expected = parse_poly("t - s").coeff(0)
        assert d == expected or d == -expected

    def test_squarefree_part_bivariate(self):
        f = parse_poly("(t - s)^2 (t + 1)").coeff(0)
        sq = squarefree_part(f)
        expected = parse_poly("(t - s)(t + 1)").coeff(0)
        assert sq == expected or sq == -expected

    def test_squarefree_part_univariate(self):
        f = qpoly(0, 0, 1) * qpoly(-1, 1)  # X^2 (X-1)
        assert squarefree_part(f) == qpoly(0, 1) * qpoly(-1, 1)

    def test_gcd_field_monic(self):
        f = qpoly(-1, 0, 1) * qpoly(5, 1)
        g = qpoly(-1, 0, 1) * qpoly(7, 1)
        assert gcd_field(f, g) == qpoly(-1, 0, 1)
