"""Splitting-shape engine tests.

Every frozen multiset below was derived by hand before running the engine:
Eisenstein criteria (possibly after recentering), quadratic-residue checks,
and explicit Newton polygons.  The hypothesis tests build polynomials as
products of pieces with known shapes, where the expected answer is a
theorem (coprime-mod-p pieces contribute independently).
"""

import itertools
from collections import Counter
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from galspec.arith import NonPrimeError
from galspec.ffact import (
    FpPoly,
    NotPIntegral,
    NotSquarefree,
    degree_sequence,
    reduce_mod_p,
)
from galspec.padic import (
    PadicShape,
    WildPrime,
    _shape_exact,
    disc_valuation_check,
    padic_shape,
)
from galspec.poly import UniPoly, fraction_poly, gcd_field, parse_poly, specialize


def xp(*coeffs):
    """Monic-friendly shorthand: coefficients lowest first."""
    return fraction_poly(coeffs)


def shape_of(f, p):
    return Counter(padic_shape(f, p).pairs)


def eisenstein_piece(p, shift, e, unit):
    """(X-shift)^e - p*unit: irreducible with shape (e, 1)."""
    return xp(-shift, 1) ** e - p * unit


def irreducibles_mod(p, d, count):
    """First monic irreducible lifts of degree d mod p, lex order."""
    out = []
    for tail in itertools.product(range(p), repeat=d):
        try:
            if degree_sequence(FpPoly(p, tail + (1,))) == [d]:
                out.append(xp(*tail, 1))
        except NotSquarefree:
            continue
        if len(out) == count:
            break
    return out


class TestFrozenShapes:
    def test_eisenstein_after_unit(self):
        # 12 = 4*3: unit times 3, so X^2-12 ramifies at 3
        assert shape_of(xp(-12, 0, 1), 3) == Counter({(2, 1): 1})

    def test_inert_quadratic(self):
        # squares mod 5 are {1, 4}; 12 = 2 is not one
        assert shape_of(xp(-12, 0, 1), 5) == Counter({(1, 2): 1})

    def test_eisenstein_cubics(self):
        for unit in (1, 2, -3):
            f = xp(-5 * unit, 0, 0, 1)
            assert shape_of(f, 5) == Counter({(3, 1): 1})

    def test_ramified_quadratic(self):
        assert shape_of(xp(-5, 0, 1), 5) == Counter({(2, 1): 1})

    def test_two_ramified_pieces(self):
        # X^4-9 = (X^2-3)(X^2+3), both Eisenstein at 3
        assert shape_of(xp(-9, 0, 0, 0, 1), 3) == Counter({(2, 1): 2})

    def test_cyclotomic_times_quadratic(self):
        # (X^2+X+1)(X^2-3) at 3: both pieces ramify (disc -3 and 12)
        f = xp(-3, -3, -2, 1, 1)
        assert shape_of(f, 3) == Counter({(2, 1): 2})

    def test_three_quadratics_at_5(self):
        # (X^2-2)(X^2-3)(X^2-6): 2 and 3 are non-squares mod 5, 6 = 1 is one
        f = xp(-36, 0, 36, 0, -11, 0, 1)
        assert shape_of(f, 5) == Counter({(1, 2): 2, (1, 1): 2})

    def test_congruent_unramified_pair(self):
        # (X^2+1)(X^2+8) at 7: congruent mod 7, both inert; forces the
        # engine past the shared residual (z^2+1)^2 and an exact divisor
        f = xp(8, 0, 9, 0, 1)
        assert shape_of(f, 7) == Counter({(1, 2): 2})

    def test_second_order_refinement(self):
        # (X^2-7)(X^2-56) at 7: both ramified, congruent to first order
        # (residual (z+6)^2), separated only after refining the key twice
        f = xp(392, 0, -63, 0, 1)
        assert shape_of(f, 7) == Counter({(2, 1): 2})

    def test_split_after_scaling(self):
        # X^2-98 = (X-7a)(X+7a) with a^2 = 2, a square mod 7
        assert shape_of(xp(-98, 0, 1), 7) == Counter({(1, 1): 2})

    def test_root_at_zero(self):
        # X(X^2-12) at 3: the X factor is a clean (1,1)
        assert shape_of(xp(0, -12, 0, 1), 3) == Counter({(1, 1): 1, (2, 1): 1})

    def test_degree_one(self):
        assert shape_of(xp(-3, 1), 5) == Counter({(1, 1): 1})

    def test_deep_congruence_splits(self):
        # X^2 - (1+3^5): 1+243 = 244 = 4*61, a square mod 3 to all orders
        assert shape_of(xp(-244, 0, 1), 3) == Counter({(1, 1): 2})

    def test_long_refinement_chain_stays_cheap(self):
        # roots congruent to order 12 force a dozen refinement stages;
        # the residue field must not grow along the way
        f = xp(-1, 1) * xp(-1 - 3**12, 1)
        assert shape_of(f, 3) == Counter({(1, 1): 2})

    def test_mixed_septic(self):
        # (X^2-5)(X^3-5)(X-2)(X^2+X+2) at 5: two Eisenstein pieces, a
        # rational root, and an inert quadratic (disc -7, non-square mod 5)
        f = xp(-5, 0, 1) * xp(-5, 0, 0, 1) * xp(-2, 1) * xp(2, 1, 1)
        assert shape_of(f, 5) == Counter(
            {(2, 1): 1, (3, 1): 1, (1, 1): 1, (1, 2): 1}
        )

    def test_shape_is_sorted_and_tame(self):
        shape = padic_shape(xp(0, -12, 0, 1), 3)
        assert shape.pairs == ((2, 1), (1, 1))
        assert shape.tame and shape.p == 3
        assert shape.degree() == 3


class TestFlagshipSpecialization:
    F = (
        "X^7 - 2sX^6 + (s^3 + s^2 + 3s - 2)X^4 + (-2s^3 - 4s^2 + 5s - 8)X^3"
        " + (s^3 + 4s^2 - 10s + 16)X^2 + (-s^2 + 5s - 12)X - s + 4"
        " + tX^2(X - 1)(X^2 - sX + s)"
    )

    def test_inert_at_11(self):
        f = specialize(parse_poly(self.F), {"s": Fraction(1), "t": Fraction(0)})
        assert shape_of(f, 11) == Counter({(1, 7): 1})

    def test_parameters_must_be_bound(self):
        with pytest.raises(ValueError):
            padic_shape(parse_poly("X^2 - t"), 5)


class TestRefusals:
    def test_wild_eisenstein(self):
        with pytest.raises(WildPrime):
            padic_shape(xp(-2, 0, 1), 2)
        with pytest.raises(WildPrime):
            padic_shape(xp(-3, 0, 0, 1), 3)
        with pytest.raises(WildPrime):
            padic_shape(xp(-7, 0, 0, 0, 0, 0, 0, 1), 7)

    def test_wild_inside_product(self):
        # (X^2-3)(X-1) at 3 carries a wild e=2... no: 2 is prime to 3.
        # X^2-2 at 2 inside a larger product still refuses.
        f = xp(-2, 0, 1) * xp(-3, 1)
        with pytest.raises(WildPrime):
            padic_shape(f, 2)

    def test_repeated_factor(self):
        with pytest.raises(NotSquarefree):
            padic_shape(xp(1, -2, 1), 5)

    def test_non_monic(self):
        with pytest.raises(ValueError):
            padic_shape(xp(-1, 0, 2), 5)

    def test_non_integral(self):
        with pytest.raises(NotPIntegral):
            padic_shape(xp(Fraction(-1, 3), 0, 1), 3)

    def test_composite_modulus(self):
        with pytest.raises(NonPrimeError):
            padic_shape(xp(-2, 0, 1), 6)

    def test_constant(self):
        with pytest.raises(ValueError):
            padic_shape(xp(5), 3)


class TestDiscValuationCheck:
    def test_maximal_orders(self):
        for coeffs, p in [((-12, 0, 1), 3), ((-12, 0, 1), 5), ((-5, 0, 0, 1), 5)]:
            f = xp(*coeffs)
            assert disc_valuation_check(padic_shape(f, p), f, p)

    def test_non_maximal_order_fails_honestly(self):
        # (X^2-7)(X^2-56): v_7(disc) = 10 but the tame conductor sum is 2,
        # so the equality test must say no (the gap is the index part)
        f = xp(392, 0, -63, 0, 1)
        X = sympy.symbols("X")
        dv = sympy.multiplicity(7, int(sympy.Poly(X**4 - 63 * X**2 + 392, X).discriminant()))
        assert dv == 10
        shape = padic_shape(f, 7)
        assert sum((e - 1) * r for e, r in shape.pairs) == 2
        assert not disc_valuation_check(shape, f, 7)

    def test_requires_tame_shape(self):
        fake = PadicShape(2, ((2, 1),), False)
        with pytest.raises(ValueError):
            disc_valuation_check(fake, xp(-2, 0, 1), 2)


class TestAgreement:
    def test_exact_engine_matches_fast_path(self):
        cases = [
            (xp(1, 0, 1), 5),
            (xp(-2, 0, 0, 1), 5),
            (xp(2, 1, 0, 1), 3),
            (xp(-2, 3, 0, 0, 1), 7),
        ]
        for f, p in cases:
            fast = padic_shape(f, p).pairs
            assert Counter(_shape_exact(f, p)) == Counter(fast)

    def test_unramified_part_matches_degree_sequence(self):
        # shape invariant: the residue degrees of the e=1 factors are the
        # degree sequence of the unramified subproduct mod p
        p = 5
        unram = irreducibles_mod(p, 2, 1)[0] * xp(-3, 1)
        f = eisenstein_piece(p, 1, 2, 2) * unram
        shape = padic_shape(f, p)
        got = sorted(r for e, r in shape.pairs if e == 1)
        assert got == degree_sequence(reduce_mod_p(unram.coeffs, p))


@st.composite
def hensel_products(draw):
    """Product of mod-p coprime pieces with known shapes."""
    p = draw(st.sampled_from([3, 5, 7, 11]))
    n_eis = draw(st.integers(0, 2))
    n_unram = draw(st.integers(0 if n_eis else 1, 2))
    f = xp(1)
    expected = []
    shifts = draw(
        st.lists(st.integers(0, p - 1), min_size=n_eis, max_size=n_eis, unique=True)
    )
    for a in shifts:
        e = draw(st.sampled_from([e for e in (2, 3, 4, 5) if e % p]))
        c = draw(st.integers(1, p - 1))
        f = f * eisenstein_piece(p, a, e, c)
        expected.append((e, 1))
    table = irreducibles_mod(p, 2, 3) + irreducibles_mod(p, 3, 2)
    picks = draw(
        st.lists(st.integers(0, len(table) - 1), min_size=n_unram,
                 max_size=n_unram, unique=True)
    )
    for i in picks:
        f = f * table[i]
        expected.append((1, table[i].degree()))
    return f, p, expected


class TestConstructedProducts:
    @settings(max_examples=60, deadline=None)
    @given(hensel_products())
    def test_shape_is_union_of_piece_shapes(self, case):
        f, p, expected = case
        assert shape_of(f, p) == Counter(expected)

    @settings(max_examples=40, deadline=None)
    @given(
        c=st.integers(-6, 6),
        case=st.sampled_from(
            [
                ((-12, 0, 1), 3, ((2, 1),)),
                ((-12, 0, 1), 5, ((1, 2),)),
                ((392, 0, -63, 0, 1), 7, ((2, 1), (2, 1))),
                ((8, 0, 9, 0, 1), 7, ((1, 2), (1, 2))),
                ((-5, 0, 0, 1), 5, ((3, 1),)),
            ]
        ),
    )
    def test_translation_invariance(self, c, case):
        coeffs, p, expected = case
        f = xp(*coeffs)
        g = f.evaluate(xp(c, 1))
        assert isinstance(g, UniPoly)
        assert Counter(padic_shape(g, p).pairs) == Counter(expected)


class TestRandomizedInvariants:
    @settings(max_examples=80, deadline=None)
    @given(
        p=st.sampled_from([3, 5, 7]),
        tail=st.lists(st.integers(-30, 30), min_size=2, max_size=6),
    )
    def test_degree_accounting_and_determinism(self, p, tail):
        f = xp(*tail, 1)
        assume(gcd_field(f, f.derivative()).degree() == 0)
        try:
            shape = padic_shape(f, p)
        except WildPrime:
            return
        assert shape.degree() == f.degree()
        assert all(e % p for e, _ in shape.pairs)
        assert padic_shape(f, p) == shape
