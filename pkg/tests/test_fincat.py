"""
Tests for the strat_pi1.fincat module
"""

import random

import numpy as np
import pytest

from strat_pi1.arith_models import CATALOG
from strat_pi1.exceptions import CategoryValidationError, TooLargeError
from strat_pi1.fincat import (
    DELOOPING_IDENTITY,
    DELOOPING_OBJECT,
    FiniteCategory,
    delooping_of,
    has_initial,
    has_terminal,
    hom_counts,
    hom_set,
    is_cofiltered,
    is_filtered,
    is_isomorphism,
    poset_as_category,
    random_category,
    rigidity_check,
    weakly_initial,
    weakly_terminal,
)
from strat_pi1.fpgroup import GroupPresentation
from strat_pi1.poset import maximal_elements


def one_object(compose):
    """Category on one object with morphisms id, a, b and the given table"""
    return FiniteCategory(
        ["x"],
        {"id": ("x", "x"), "a": ("x", "x"), "b": ("x", "x")},
        {"x": "id"},
        compose,
    )


class TestValidation:
    """Test cases for category axioms"""

    def test_missing_composite(self):
        """Every composable pair needs an entry"""
        with pytest.raises(CategoryValidationError) as excinfo:
            FiniteCategory(
                ["x"],
                {"id": ("x", "x"), "f": ("x", "x")},
                {"x": "id"},
                {("id", "id"): "id", ("id", "f"): "f", ("f", "id"): "f"},
            )
        assert excinfo.value.triple == ("f", "f")

    def test_identity_law(self):
        with pytest.raises(CategoryValidationError, match="identity law"):
            FiniteCategory(
                ["x"],
                {"id": ("x", "x"), "f": ("x", "x")},
                {"x": "id"},
                {("id", "id"): "id", ("id", "f"): "id", ("f", "id"): "f", ("f", "f"): "f"},
            )

    def test_associativity(self):
        """(a then a) then b differs from a then (a then b)"""
        table = {("id", m): m for m in ("id", "a", "b")}
        table.update({(m, "id"): m for m in ("a", "b")})
        table.update({("a", "a"): "b", ("b", "b"): "a", ("a", "b"): "a", ("b", "a"): "a"})
        with pytest.raises(CategoryValidationError, match="associativity") as excinfo:
            one_object(table)
        assert len(excinfo.value.triple) == 3

    def test_bad_endpoints(self):
        with pytest.raises(CategoryValidationError):
            FiniteCategory(["x"], {"id": ("x", "y")}, {"x": "id"}, {})
        with pytest.raises(CategoryValidationError):
            FiniteCategory(["x"], {"id": ("x", "x")}, {}, {("id", "id"): "id"})


class TestPredicates:
    """Test cases for terminal objects and filteredness"""

    @pytest.fixture
    def z2_delooping(self):
        return delooping_of(GroupPresentation.from_strings(["g"], ["g^2"]))

    def test_delooping_of_z2(self, z2_delooping):
        """Weakly terminal and initial but neither strictly, and not filtered"""
        assert z2_delooping.objects == (DELOOPING_OBJECT,)
        assert set(z2_delooping.morphisms) == {DELOOPING_IDENTITY, "g"}
        assert has_terminal(z2_delooping) is None
        assert has_initial(z2_delooping) is None
        assert weakly_terminal(z2_delooping) == frozenset({DELOOPING_OBJECT})
        assert weakly_initial(z2_delooping) == frozenset({DELOOPING_OBJECT})
        assert not is_filtered(z2_delooping)
        assert not is_cofiltered(z2_delooping)
        assert is_isomorphism(z2_delooping, "g")

    def test_delooping_cap(self, s3):
        with pytest.raises(TooLargeError):
            delooping_of(s3, cap=4)

    def test_delooping_of_s3(self, s3):
        category = delooping_of(s3)
        assert len(category.morphisms) == 6
        assert category.compose("s", "s") == DELOOPING_IDENTITY

    def test_delooping_is_filtered_only_when_trivial(self):
        """A lone identity arrow is filtered; any nontrivial group is not"""
        trivial_presentations = [
            GroupPresentation.trivial(),
            GroupPresentation.from_strings(["a"], ["a"]),
            GroupPresentation.from_strings(["a", "b"], ["a*b", "b^2", "b^3"]),
        ]
        for group in trivial_presentations:
            category = delooping_of(group)
            assert set(category.morphisms) == {DELOOPING_IDENTITY}
            assert is_filtered(category)
            assert is_cofiltered(category)
        for catalog_group in CATALOG:
            if catalog_group.order <= 12:
                assert not is_filtered(delooping_of(catalog_group.presentation))

    def test_weakly_terminal_of_directed_poset(self, chain_poset, star_poset, crown_poset):
        """Weakly terminal objects of a directed poset are its maximum"""
        for poset in (chain_poset, star_poset):
            assert weakly_terminal(poset_as_category(poset)) == maximal_elements(poset)
        assert weakly_terminal(poset_as_category(crown_poset)) == frozenset()

    def test_poset_with_maximum(self, chain_poset):
        """A poset category with a maximum has a terminal object"""
        category = poset_as_category(chain_poset)
        assert has_terminal(category) == "c"
        assert has_initial(category) == "a"
        assert is_filtered(category)
        assert is_cofiltered(category)
        assert hom_set(category, "a", "c") == ("a->c",)
        assert hom_set(category, "c", "a") == ()

    def test_star_is_filtered_not_cofiltered(self, star_poset):
        category = poset_as_category(star_poset)
        assert has_terminal(category) == "eta"
        assert is_filtered(category)
        assert not is_cofiltered(category)
        assert weakly_initial(category) == frozenset()

    def test_hom_counts(self, chain_poset):
        counts = hom_counts(poset_as_category(chain_poset))
        np.testing.assert_array_equal(counts, np.array([[1, 1, 1], [0, 1, 1], [0, 0, 1]]))

    def test_empty_category(self):
        empty = FiniteCategory([], {}, {}, {})
        assert not is_filtered(empty)
        assert not is_cofiltered(empty)


class TestRigidity:
    """Test cases for the rigidity check"""

    def test_vacuous_when_not_filtered(self):
        report = rigidity_check(delooping_of(GroupPresentation.from_strings(["g"], ["g^2"])))
        assert not report.hypothesis
        assert report.passed

    def test_chain_satisfies_conclusion(self, chain_poset):
        report = rigidity_check(poset_as_category(chain_poset))
        assert report.hypothesis
        assert report.conclusion
        assert report.witness == "c"
        assert report.terminal == "c"
        assert not report.counterexample

    def test_sampled_categories(self):
        """The sampler only produces valid categories"""
        rng = random.Random(11)
        for _ in range(25):
            category = random_category(rng)
            assert 1 <= len(category.objects) <= 4
            assert len(category.morphisms) <= 12
            assert rigidity_check(category).passed
