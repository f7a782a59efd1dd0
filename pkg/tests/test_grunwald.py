"""Condition parsing, residue searches, CRT assembly, and verification."""

from fractions import Fraction

import pytest

from galspec.arith import Congruence, legendre
from galspec.family import builtin_manifest, load_manifest, nondegenerate_check
from galspec.grunwald import (
    NoResidueFound,
    Ramified,
    SkipResidue,
    TargetNotFound,
    Unramified,
    UnsupportedConditionCombination,
    frobenius_in_residue_field,
    parse_condition,
    run_search,
    search_s0,
    search_t0,
    validate_conditions,
    verify,
)
from galspec.permgrp import CycleType, ef_multiset, generate, parse_perm, power_cycle_type
from galspec.poly import parse_poly


def quartic_manifest() -> dict:
    """X^4 - t: cyclic of order 4, branch points at t = 0 and infinity."""
    return {
        "name": "x4mt",
        "poly": "X^4 - t",
        "group_generators": ["(1 2 3 4)"],
        "branch_points": [
            {
                "location": "0",
                "e": 4,
                "inertia_generator": "(1 2 3 4)",
                "decomposition_generators": ["(1 2 3 4)"],
            },
            {
                "location": "inf",
                "e": 4,
                "inertia_generator": "(1 2 3 4)",
                "decomposition_generators": ["(1 2 3 4)"],
            },
        ],
    }


def no_infinity_manifest() -> dict:
    """Branch locus of degree 4 with nothing at infinity and nothing declared."""
    return {
        "name": "closed",
        "poly": "X^2 - (t^2 + 1)*(t^2 + 2)",
        "group_generators": ["(1 2)"],
        "branch_points": [],
    }


class TestParseCondition:
    def test_ramified(self):
        m = builtin_manifest("psl32")
        cond = parse_condition("p=7,branch=inf,d=1,frob=2", m)
        assert cond == Ramified(7, 0, 1, 2)

    def test_ramified_numeric_branch(self):
        m = builtin_manifest("x2mt")
        cond = parse_condition("p=3,branch=0,d=1", m)
        assert cond == Ramified(3, 0, 1, 1)

    def test_unramified(self):
        m = builtin_manifest("psl32")
        cond = parse_condition("p=13,unram,type=3,3,1", m)
        assert cond == Unramified(13, CycleType((3, 3, 1)))

    def test_unknown_key(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError, match="unknown"):
            parse_condition("p=3,branch=0,d=1,weight=2", m)

    def test_ramified_and_unramified(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError):
            parse_condition("p=3,unram,branch=0,d=1", m)

    def test_neither(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError):
            parse_condition("p=3", m)

    def test_no_infinite_branch(self):
        m = load_manifest(no_infinity_manifest())
        with pytest.raises(ValueError, match="infinity"):
            parse_condition("p=3,branch=inf,d=1", m)


class TestValidateConditions:
    def test_prime_two_excluded(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError, match="p = 2"):
            validate_conditions(m, [Ramified(2, 0, 1, 1)])
        with pytest.raises(ValueError, match="p = 2"):
            validate_conditions(m, [Unramified(2, CycleType((2,)))])

    def test_wild_condition_excluded(self):
        m = builtin_manifest("x3mt")
        with pytest.raises(ValueError, match="wild"):
            validate_conditions(m, [Ramified(3, 0, 1, 1)])

    def test_d_must_divide(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError, match="divide"):
            validate_conditions(m, [Ramified(3, 0, 3, 1)])

    def test_trivial_inertia_rejected(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError, match="trivial"):
            validate_conditions(m, [Ramified(3, 0, 2, 1)])

    def test_frobenius_needs_residue_data(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError, match="residue"):
            validate_conditions(m, [Ramified(3, 0, 1, 2)])

    def test_unramified_target_degree(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError, match="degree"):
            validate_conditions(m, [Unramified(7, CycleType((3,)))])

    def test_unramified_target_realized(self):
        m = builtin_manifest("psl32")
        with pytest.raises(ValueError, match="realized"):
            validate_conditions(m, [Unramified(11, CycleType((5, 1, 1)))])

    def test_distinct_primes(self):
        m = builtin_manifest("psl32")
        with pytest.raises(ValueError, match="distinct"):
            validate_conditions(
                m, [Ramified(7, 0, 1, 2), Unramified(7, CycleType((7,)))]
            )

    def test_mixed_charts_refused(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(UnsupportedConditionCombination):
            validate_conditions(
                m, [Ramified(3, 0, 1, 1), Ramified(5, 1, 1, 1)]
            )

    def test_branch_index_range(self):
        m = builtin_manifest("x2mt")
        with pytest.raises(ValueError):
            validate_conditions(m, [Ramified(3, 5, 1, 1)])


class TestFrobeniusInResidueField:
    def rho(self):
        return builtin_manifest("psl32").branch_points[0].rho

    def test_nontrivial(self):
        # 2^2 - 4*2 = -4 = 3 mod 7, not a square mod 7
        assert frobenius_in_residue_field(self.rho(), 2, 7) == (2,)

    def test_trivial(self):
        # 1 - 4 = -3 = 4 = 2^2 mod 7
        assert frobenius_in_residue_field(self.rho(), 1, 7) == (1, 1)

    def test_branch_of_rho_skipped(self):
        with pytest.raises(SkipResidue):
            frobenius_in_residue_field(self.rho(), 0, 7)
        with pytest.raises(SkipResidue):
            frobenius_in_residue_field(self.rho(), 4, 7)

    def test_other_prime(self):
        # 9 - 12 = -3 = 8 mod 11: squares mod 11 are {1, 3, 4, 5, 9}
        assert frobenius_in_residue_field(self.rho(), 3, 11) == (2,)

    def test_nonintegral_s0_skipped(self):
        with pytest.raises(SkipResidue):
            frobenius_in_residue_field(self.rho(), Fraction(1, 7), 7)


class TestSearchS0:
    def test_flagship_nontrivial_frobenius(self):
        m = builtin_manifest("psl32")
        progression, witness = search_s0(m, [Ramified(7, 0, 1, 2)])
        assert progression == Congruence(2, 7)
        assert witness == 2

    def test_flagship_two_primes(self):
        m = builtin_manifest("psl32")
        progression, witness = search_s0(
            m, [Ramified(7, 0, 1, 2), Ramified(11, 0, 1, 1)]
        )
        assert progression == Congruence(16, 77)
        assert witness == 16
        # direct symbol evaluation of s^2 - 4s at the witness
        assert legendre(16 * 16 - 4 * 16, 7) == -1
        assert legendre(16 * 16 - 4 * 16, 11) == 1

    def test_empty_conditions(self):
        m = builtin_manifest("psl32")
        assert search_s0(m, []) == (Congruence(0, 1), 1)
        assert search_s0(builtin_manifest("x2mt"), []) == (Congruence(0, 1), 0)

    def test_constant_residue_field(self):
        # the cubic's residue data is X^2 + X + 1 independently of s, so
        # only the residue class of p mod 3 decides
        m = builtin_manifest("x3mt")
        progression, witness = search_s0(m, [Ramified(7, 0, 1, 1)])
        assert progression == Congruence(0, 7)
        assert witness == 0
        progression, witness = search_s0(m, [Ramified(11, 0, 1, 2)])
        assert progression == Congruence(0, 11)

    def test_infeasible_order(self):
        m = builtin_manifest("x3mt")
        with pytest.raises(NoResidueFound):
            search_s0(m, [Ramified(5, 0, 1, 1)])
        with pytest.raises(NoResidueFound):
            search_s0(m, [Ramified(7, 0, 1, 2)])


class TestSearchT0:
    def test_mixed_condition_set(self):
        m = builtin_manifest("x2mt")
        conditions = [
            Ramified(3, 0, 1, 1),
            Unramified(7, CycleType((1, 1))),
            Unramified(11, CycleType((2,))),
        ]
        prescription, witness = search_t0(m, 0, conditions)
        assert prescription.chart == "t"
        assert prescription.congruence == Congruence(57, 693)
        assert prescription.valuations == ((3, 1),)
        assert witness == 57

    def test_infinite_branch_prescription(self):
        m = builtin_manifest("psl32")
        prescription, witness = search_t0(m, 1, [Ramified(5, 0, 1, 1)])
        assert prescription.chart == "u"
        assert prescription.congruence == Congruence(5, 25)
        assert witness == Fraction(1, 5)

    def test_no_conditions(self):
        m = builtin_manifest("x2mt")
        prescription, witness = search_t0(m, 0, [])
        assert prescription.congruence == Congruence(0, 1)
        assert witness == 1  # t = 0 is a branch point

    def test_unattainable_target(self):
        # at p = 7 the Frobenius lands in the rotation subgroup, so a
        # transposition class is never produced
        m = builtin_manifest("x3mt")
        with pytest.raises(TargetNotFound):
            search_t0(m, 0, [Unramified(7, CycleType((2, 1)))])

    def test_member_enumeration(self):
        m = builtin_manifest("psl32")
        prescription, witness = search_t0(m, 2, [Ramified(7, 0, 1, 2)])
        assert prescription.member(0) == witness == Fraction(1, 7)
        assert prescription.member(1) == Fraction(1, 56)


class TestVerify:
    def test_flagship_nontrivial_frobenius_shape(self):
        m = builtin_manifest("psl32")
        report = verify(m, 2, Fraction(1, 7), [Ramified(7, 0, 1, 2)], n_id=0)
        (record,) = report.records
        assert record.passed
        assert record.mode == "full"
        assert record.observed == ((2, 1), (2, 1), (1, 2), (1, 1))
        assert report.passed

    def test_flagship_trivial_frobenius_shape(self):
        m = builtin_manifest("psl32")
        report = verify(m, 1, Fraction(1, 7), [Ramified(7, 0, 1, 1)], n_id=0)
        (record,) = report.records
        assert record.passed
        assert record.observed == ((2, 1), (2, 1), (1, 1), (1, 1), (1, 1))

    def test_quadratic_witness_shapes(self):
        m = builtin_manifest("x2mt")
        conditions = [
            Ramified(3, 0, 1, 1),
            Unramified(7, CycleType((1, 1))),
            Unramified(11, CycleType((2,))),
        ]
        report = verify(m, 0, 57, conditions, n_id=0)
        assert [r.observed for r in report.records] == [
            ((2, 1),),
            (1, 1),
            (2,),
        ]
        assert report.passed

    def test_unramified_mismatch_is_a_report_not_an_exception(self):
        m = builtin_manifest("x2mt")
        report = verify(m, 0, 12, [Unramified(7, CycleType((1, 1)))], n_id=0)
        (record,) = report.records
        assert not record.passed
        assert record.observed == (2,)
        assert not report.passed

    def test_frobenius_drift_detected(self):
        # s0 = 1 realizes the trivial residue Frobenius at 7, so an x = 2
        # condition must fail verification
        m = builtin_manifest("psl32")
        report = verify(m, 1, Fraction(1, 7), [Ramified(7, 0, 1, 2)], n_id=0)
        (record,) = report.records
        assert not record.passed
        assert not report.passed

    def test_inertia_only_mode(self):
        # d = 2 with e = 4 shares a factor with e/d, so only the inertia
        # part of the shape is certified
        m = load_manifest(quartic_manifest())
        report = verify(m, 0, 25, [Ramified(5, 0, 2, 1)], n_id=0)
        (record,) = report.records
        assert record.mode == "inertia-only"
        assert record.passed
        assert record.observed == (2, 2)

    def test_identification_summary(self):
        m = builtin_manifest("x3mt")
        report = verify(m, 0, 56, [Ramified(7, 0, 1, 1)], n_id=60, seed=0)
        ident = report.identification
        assert ident is not None
        assert ident.sampled == 60
        assert not ident.alien
        assert not ident.missing
        assert ident.passed
        assert report.passed

    def test_identification_deterministic(self):
        m = builtin_manifest("x3mt")
        a = verify(m, 0, 56, [], n_id=40, seed=3)
        b = verify(m, 0, 56, [], n_id=40, seed=3)
        assert a.identification == b.identification


class TestRunSearch:
    def test_flagship_end_to_end(self):
        m = builtin_manifest("psl32")
        report = run_search(m, [Ramified(7, 0, 1, 2)], n_id=0)
        assert report.s0 == 2
        assert report.t0 == Fraction(1, 7)
        assert report.s0_progression == Congruence(2, 7)
        assert report.t0_progression.congruence == Congruence(7, 49)
        assert report.passed

    def test_quadratic_end_to_end(self):
        m = builtin_manifest("x2mt")
        conditions = [
            Ramified(3, 0, 1, 1),
            Unramified(7, CycleType((1, 1))),
            Unramified(11, CycleType((2,))),
        ]
        report = run_search(m, conditions, n_id=0)
        assert report.s0 == 0
        assert report.t0 == 57
        assert report.passed

    def test_cubic_end_to_end(self):
        m = builtin_manifest("x3mt")
        conditions = [Ramified(7, 0, 1, 1), Unramified(5, CycleType((2, 1)))]
        report = run_search(m, conditions, n_id=0)
        assert report.t0 == 56
        assert report.passed

    def test_soundness_across_condition_sets(self):
        cases = [
            ("psl32", [Ramified(7, 0, 1, 1)]),
            ("psl32", [Ramified(7, 0, 1, 2), Ramified(11, 0, 1, 1)]),
            ("x2mt", [Ramified(5, 0, 1, 1), Unramified(13, CycleType((2,)))]),
            ("x3mt", [Unramified(13, CycleType((3,)))]),
        ]
        for name, conditions in cases:
            report = run_search(builtin_manifest(name), conditions, n_id=0)
            assert report.passed, (name, report.records)

    def test_progression_members_also_pass(self):
        m = builtin_manifest("psl32")
        report = run_search(m, [Ramified(7, 0, 1, 2)], n_id=0)
        for k in (1, 2, 3, 5, 11):
            t0 = report.t0_progression.member(k)
            again = verify(m, report.s0, t0, [Ramified(7, 0, 1, 2)], n_id=0)
            assert again.passed, (k, t0)

    def test_s0_progression_members_also_pass(self):
        # members can individually fail the auxiliary-prime avoidance (the
        # progression only promises a positive-density subset), so skip the
        # ones the t-search itself refuses
        m = builtin_manifest("psl32")
        conditions = [Ramified(7, 0, 1, 2)]
        base = run_search(m, conditions, n_id=0)
        verified = 0
        for k in range(1, 20):
            if verified == 3:
                break
            s0 = base.s0_progression.residue + k * base.s0_progression.modulus
            if not nondegenerate_check(m, s0):
                continue
            try:
                _, t0 = search_t0(m, s0, conditions)
            except TargetNotFound:
                continue
            again = verify(m, s0, t0, conditions, n_id=0)
            assert again.passed, (k, s0)
            verified += 1
        assert verified == 3


class TestTameConsistencyTriangle:
    def test_flagship(self):
        m = builtin_manifest("psl32")
        bp = m.branch_points[0]
        report = verify(m, 2, Fraction(1, 7), [Ramified(7, 0, 1, 2)], n_id=0)
        (record,) = report.records
        expanded = tuple(
            sorted((e for e, f in record.observed for _ in range(f)), reverse=True)
        )
        assert expanded == power_cycle_type(bp.inertia_generator, 1).parts
        inertia = generate([bp.inertia_generator])
        sigma = parse_perm("(2 3)(6 7)", 7)
        klein = generate([bp.inertia_generator, sigma])
        assert record.observed == ef_multiset(inertia, klein)

    def test_quartic(self):
        m = load_manifest(quartic_manifest())
        bp = m.branch_points[0]
        report = verify(m, 0, 25, [Ramified(5, 0, 2, 1)], n_id=0)
        (record,) = report.records
        assert record.observed == power_cycle_type(bp.inertia_generator, 2).parts
