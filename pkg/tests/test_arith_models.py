"""
Tests for the strat_pi1.arith_models module
"""

import random
from itertools import combinations

import pytest
from sympy import factorint

from strat_pi1.arith_models import (
    BATCH_COLUMNS,
    CATALOG,
    DedekindModel,
    Outcome,
    PrimeData,
    affine_line_model,
    batch_verify,
    build_site,
    conjugate_model,
    cyclotomic_check,
    cyclotomic_consistency,
    cyclotomic_level,
    cyclotomic_quotient,
    expected_pi1,
    link_key,
    oracle_quotient_order,
    sample_instance,
    unit_group_invariants,
    verify_formula,
)
from strat_pi1.exceptions import (
    InputFormatError,
    NotAHomomorphismError,
    PresentationError,
    PrimeNotDividingError,
)
from strat_pi1.fpgroup import (
    Effort,
    GroupHom,
    GroupPresentation,
    Word,
    group_order,
    identity_hom,
)


class TestDedekindModel:
    """Test cases for model construction and its site"""

    def test_base_is_a_star(self, dvr_model):
        assert set(dvr_model.base.elements) == {"p", "eta"}
        assert dvr_model.base.covers == frozenset({("p", "eta")})
        assert link_key("p") == "p<eta"

    def test_build_site(self, dvr_model):
        site = build_site(dvr_model)
        assert set(site.strata) == {"eta", "p", "p<eta"}
        assert all(hom.verified for hom in site.maps.values())

    def test_inclusion_must_be_a_homomorphism(self, s3, z2):
        inclusion = GroupHom.from_strings(z2, s3, {"d": "t"})
        model = DedekindModel(s3, (PrimeData("p", z2, inclusion, ()),))
        with pytest.raises(NotAHomomorphismError):
            build_site(model)

    def test_prime_names(self, dvr_model):
        prime = dvr_model.primes[0]
        with pytest.raises(InputFormatError):
            DedekindModel(dvr_model.galois, (prime, prime))
        with pytest.raises(InputFormatError):
            DedekindModel(dvr_model.galois, (PrimeData("eta", *_parts(prime)),))
        with pytest.raises(InputFormatError):
            DedekindModel(dvr_model.galois, (PrimeData("p<q", *_parts(prime)),))

    def test_inertia_inside_decomposition(self, s3, z2):
        inclusion = GroupHom.from_strings(z2, s3, {"d": "s"})
        with pytest.raises(PresentationError):
            PrimeData("p", z2, inclusion, (s3.parse("t"),))


def _parts(prime):
    return prime.decomposition, prime.inclusion, prime.inertia


class TestQuotientFormula:
    """Test cases for verify_formula"""

    def test_full_inertia(self, dvr_model):
        """Inertia <s> normally generates S3"""
        report = verify_formula(dvr_model)
        assert report.outcome is Outcome.MATCH
        assert report.order_pipeline == 1
        assert report.order_expected == 1

    def test_trivial_inertia(self, unramified_model):
        """Nothing is killed: both sides have order 6 with inverse maps"""
        report = verify_formula(unramified_model)
        assert report.outcome is Outcome.MATCH
        assert report.order_pipeline == 6
        assert report.forward.verified
        assert report.backward.verified
        assert report.detail == "order 6"

    def test_two_primes(self, s3, z2):
        """Inertia at one prime kills everything even if the other is unramified"""
        z3 = GroupPresentation.from_strings(["d"], ["d^3"])
        first = PrimeData(
            "p1", z2, GroupHom.from_strings(z2, s3, {"d": "s"}), (z2.parse("d"),)
        )
        second = PrimeData("p2", z3, GroupHom.from_strings(z3, s3, {"d": "t"}), ())
        report = verify_formula(DedekindModel(s3, (first, second)))
        assert report.outcome is Outcome.MATCH
        assert report.order_pipeline == 1

    def test_three_cycle_inertia(self, s3):
        """The normal closure of <t> is A3, leaving order 2"""
        z3 = GroupPresentation.from_strings(["d"], ["d^3"])
        prime = PrimeData("p", z3, GroupHom.from_strings(z3, s3, {"d": "t"}), (z3.parse("d"),))
        report = verify_formula(DedekindModel(s3, (prime,)))
        assert report.outcome is Outcome.MATCH
        assert report.order_pipeline == 2

    def test_no_primes(self, s3):
        report = verify_formula(DedekindModel(s3))
        assert report.outcome is Outcome.MATCH
        assert report.order_expected == 6

    def test_inconclusive_on_small_budget(self, unramified_model):
        report = verify_formula(unramified_model, Effort(max_cosets=3))
        assert report.outcome is Outcome.INCONCLUSIVE

    def test_affine_line_model(self):
        """Inertia is all of D: Z/6 modulo <a^2> has order 2"""
        c6 = GroupPresentation.from_strings(["a"], ["a^6"])
        model = affine_line_model(c6, [[c6.parse("a^2")]])
        assert group_order(expected_pi1(model)) == 2
        assert verify_formula(model).outcome is Outcome.MATCH

    def test_prime_with_whole_group_inertia(self, unramified_model, s3):
        """D_p = I_p = G_K kills the whole group"""
        whole = PrimeData("q", s3, identity_hom(s3), (Word.generator(0), Word.generator(1)))
        model = DedekindModel(s3, (*unramified_model.primes, whole))
        assert group_order(expected_pi1(unramified_model)) == 6
        assert group_order(expected_pi1(model)) == 1
        report = verify_formula(model)
        assert report.outcome is Outcome.MATCH
        assert report.order_pipeline == 1
        for group in CATALOG:
            everything = tuple(Word.generator(j) for j in range(group.presentation.rank))
            prime = PrimeData("q", group.presentation, identity_hom(group.presentation), everything)
            assert group_order(expected_pi1(DedekindModel(group.presentation, (prime,)))) == 1

    def test_conjugation_invariance(self, dvr_model, s3):
        """Conjugating the inertia data leaves the quotient unchanged"""
        conjugated = conjugate_model(dvr_model, s3.parse("t"))
        assert conjugated.primes[0].inclusion.describe() == {"d": "t^-1*s*t"}
        assert group_order(expected_pi1(conjugated)) == group_order(expected_pi1(dvr_model))
        assert verify_formula(conjugated).outcome is Outcome.MATCH


class TestCatalogAndSampling:
    """Test cases for the catalog groups and the instance sampler"""

    @pytest.mark.parametrize("group", CATALOG, ids=lambda g: g.name)
    def test_presentations_match_permutations(self, group):
        """Each presentation defines the permutation group it is paired with"""
        assert group_order(group.presentation) == group.order
        for relator in group.presentation.relators:
            assert group.evaluate(relator).is_Identity
        assert len(group.element_words()) == group.order

    def test_catalog_orders(self):
        orders = {group.name: group.order for group in CATALOG}
        assert orders["S3"] == 6
        assert orders["A4"] == 12
        assert orders["S4"] == 24
        assert orders["C2xC4"] == 8

    def test_sampler_is_reproducible(self):
        first = sample_instance(random.Random(5), 0)
        second = sample_instance(random.Random(5), 0)
        assert first.group.name == second.group.name
        assert first.model == second.model

    def test_sampled_models_are_valid(self):
        rng = random.Random(1)
        for index in range(10):
            instance = sample_instance(rng, index, max_order=12)
            assert instance.group.order <= 12
            assert len(instance.model.primes) <= 2
            build_site(instance.model)

    def test_oracle_matches_formula(self):
        rng = random.Random(2)
        for index in range(5):
            instance = sample_instance(rng, index)
            report = verify_formula(instance.model)
            assert report.outcome is Outcome.MATCH
            assert report.order_pipeline == oracle_quotient_order(instance)

    def test_batch_columns_and_order(self):
        report = batch_verify(seed=3, count=4, workers=2)
        assert list(report.columns) == BATCH_COLUMNS
        assert list(report["instance"]) == [0, 1, 2, 3]
        assert set(report["outcome"]) == {Outcome.MATCH.value}
        assert report["oracle_agrees"].all()

    def test_batch_is_deterministic(self):
        first = batch_verify(seed=9, count=3, workers=1)
        second = batch_verify(seed=9, count=3, workers=3)
        assert first.equals(second)

    @pytest.mark.slow
    def test_default_batch(self):
        """Seed 42, fifty instances, all matching the brute-force oracle"""
        report = batch_verify(seed=42, count=50)
        assert (report["outcome"] == Outcome.MATCH.value).all()
        assert report["oracle_agrees"].all()


class TestCyclotomic:
    """Test cases for cyclotomic levels"""

    def test_level_of_twelve(self):
        level = cyclotomic_level(12)
        assert level.order == 4
        assert [(f.prime, f.order) for f in level.factors] == [(2, 2), (3, 2)]
        assert [f.generator for f in level.factors] == [7, 5]

    def test_level_of_power_of_two(self):
        level = cyclotomic_level(16)
        assert sorted(f.order for f in level.factors) == [2, 4]

    def test_quotients_at_sixty(self):
        assert str(cyclotomic_quotient(60)) == "(2,2,4)"
        assert str(cyclotomic_quotient(60, [2, 3])) == "(4)"
        assert str(cyclotomic_quotient(60, [2, 3, 5])) == "trivial"
        assert str(cyclotomic_quotient(60, [2])) == "(2,4)"

    def test_check_against_units(self):
        check = cyclotomic_check(60, [3, 2])
        assert check.primes == (2, 3)
        assert check.reduced_modulus == 5
        assert check.consistent

    def test_bad_arguments(self):
        with pytest.raises(PrimeNotDividingError):
            cyclotomic_quotient(60, [7])
        with pytest.raises(InputFormatError):
            cyclotomic_quotient(2)

    def test_unit_group_invariants(self):
        assert unit_group_invariants(7).factors == (6,)
        assert unit_group_invariants(16).factors == (2, 4)
        assert unit_group_invariants(8).factors == (2, 2)
        assert unit_group_invariants(2).is_trivial
        assert unit_group_invariants(1).is_trivial

    def test_consistency_report(self):
        report = cyclotomic_consistency(60)
        assert len(report.checks) == 8
        assert report.consistent

    @pytest.mark.slow
    def test_consistency_up_to_two_hundred(self):
        for modulus in range(3, 201):
            assert cyclotomic_consistency(modulus).consistent, modulus

    def test_quotient_shrinks_as_primes_are_added(self):
        """For S inside T the quotient at T is a quotient of the one at S"""
        for modulus in range(3, 121):
            support = sorted(factorint(modulus))
            orders = {
                subset: cyclotomic_quotient(modulus, subset).order
                for size in range(len(support) + 1)
                for subset in combinations(support, size)
            }
            for smaller, order in orders.items():
                for larger, larger_order in orders.items():
                    if set(smaller) <= set(larger):
                        assert order % larger_order == 0, (modulus, smaller, larger)

    def test_abelian_quotient_matches_direct_count(self):
        """The quotient by nothing is the full unit group"""
        for modulus in (9, 20, 21, 24):
            assert cyclotomic_quotient(modulus) == unit_group_invariants(modulus)
