"""
Tests for the strat_pi1.poset module
"""

import random

import pytest

from strat_pi1.exceptions import DisconnectedError, EmptyPosetError, PosetValidationError
from strat_pi1.fpgroup import abelianization
from strat_pi1.poset import (
    Chain,
    FinitePoset,
    chains,
    connected_components,
    disjoint_union,
    edge_generator_name,
    edge_path_group,
    is_codirected,
    is_directed,
    is_local,
    is_w_local,
    maximal_elements,
    minimal_elements,
    order_complex,
    random_poset,
    subdivision,
)


class TestFinitePoset:
    """Test cases for poset construction and validation"""

    def test_order_from_covers(self, chain_poset):
        """The order is the transitive closure of the covers"""
        assert chain_poset.less_than("a", "c")
        assert not chain_poset.less_than("c", "a")
        assert chain_poset.leq("b", "b")
        assert chain_poset.up_set("a") == frozenset({"b", "c"})
        assert chain_poset.down_set("c") == frozenset({"a", "b"})

    def test_cycle_rejected(self):
        with pytest.raises(PosetValidationError, match="cycle"):
            FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])

    def test_non_minimal_cover_rejected(self):
        """A cover implied by transitivity is not a cover"""
        with pytest.raises(PosetValidationError, match="transitivity"):
            FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])

    def test_unknown_and_duplicate_ids(self):
        with pytest.raises(PosetValidationError):
            FinitePoset(["a"], [("a", "b")])
        with pytest.raises(PosetValidationError):
            FinitePoset(["a", "a"], [])

    def test_reserved_characters(self):
        """Chain separators are not allowed in element ids"""
        with pytest.raises(PosetValidationError):
            FinitePoset(["a<b"], [])
        assert "a<b" in FinitePoset(["a<b"], [], chain_keys=True)

    def test_equality_ignores_input_order(self):
        first = FinitePoset(["a", "b"], [("a", "b")])
        second = FinitePoset(["b", "a"], [("a", "b")])
        assert first == second
        assert hash(first) == hash(second)


class TestPredicates:
    """Test cases for order-theoretic predicates"""

    def test_star(self, star_poset):
        """Irreducible but not local"""
        assert maximal_elements(star_poset) == frozenset({"eta"})
        assert minimal_elements(star_poset) == frozenset({"p1", "p2"})
        assert is_directed(star_poset)
        assert not is_codirected(star_poset)
        assert not is_local(star_poset)
        assert not is_w_local(star_poset)

    def test_chain(self, chain_poset):
        """A chain is directed, codirected and w-local"""
        assert is_directed(chain_poset)
        assert is_codirected(chain_poset)
        assert is_local(chain_poset)
        assert is_w_local(chain_poset)

    def test_antichain(self):
        """Two points: neither directed nor codirected, w-local per component"""
        antichain = FinitePoset(["x", "y"], [])
        assert not is_directed(antichain)
        assert not is_codirected(antichain)
        assert is_w_local(antichain)
        assert connected_components(antichain) == [frozenset({"x"}), frozenset({"y"})]

    def test_crown(self, crown_poset):
        """Two maxima and two minima in one component"""
        assert len(connected_components(crown_poset)) == 1
        assert not is_directed(crown_poset)
        assert not is_w_local(crown_poset)

    def test_empty_poset(self):
        """(Co)directedness is undefined on the empty poset"""
        empty = FinitePoset([], [])
        with pytest.raises(EmptyPosetError):
            is_directed(empty)
        with pytest.raises(EmptyPosetError):
            is_codirected(empty)
        assert not is_local(empty)
        assert connected_components(empty) == []


class TestChains:
    """Test cases for chains and the subdivision"""

    def test_chain_keys(self, star_poset):
        """Chains are listed by length, then key, members ascending"""
        keys = [chain.key for chain in chains(star_poset)]
        assert keys == ["eta", "p1", "p2", "p1<eta", "p2<eta"]

    def test_from_members_sorts(self, chain_poset):
        assert Chain.from_members(chain_poset, ["c", "a"]).key == "a<c"
        assert Chain.from_key(chain_poset, "c<b<a").members == ("a", "b", "c")

    def test_incomparable_members(self, star_poset):
        with pytest.raises(PosetValidationError):
            Chain.from_members(star_poset, ["p1", "p2"])

    def test_max_size(self, chain_poset):
        assert len(chains(chain_poset)) == 7
        assert len(chains(chain_poset, max_size=2)) == 6

    def test_subdivision_of_star(self, star_poset):
        """Covers of the subdivision add one member"""
        sub = subdivision(star_poset)
        assert len(sub) == 5
        assert sub.covers == frozenset(
            {("p1", "p1<eta"), ("eta", "p1<eta"), ("p2", "p2<eta"), ("eta", "p2<eta")}
        )

    def test_subdivision_of_chain(self, chain_poset):
        """Seven chains; the full chain is the unique maximum"""
        sub = subdivision(chain_poset)
        assert len(sub) == 7
        assert maximal_elements(sub) == frozenset({"a<b<c"})
        assert len(minimal_elements(sub)) == 3


class TestOrderComplex:
    """Test cases for order complexes and edge-path groups"""

    def test_simplices(self, chain_poset):
        complex_ = order_complex(chain_poset)
        assert complex_.dimension == 2
        assert complex_.triangles == (("a", "b", "c"),)
        assert len(complex_.edges) == 3

    def test_truncation(self, chain_poset):
        assert order_complex(chain_poset, max_size=2).dimension == 1

    def test_crown_is_a_circle(self, crown_poset):
        """One non-tree edge, no triangles"""
        group = edge_path_group(order_complex(crown_poset), "a")
        assert group.generators == (edge_generator_name("b", "d"),)
        assert abelianization(group).factors == (0,)

    def test_cone_is_simply_connected(self, star_poset):
        """A poset with a maximum has a contractible order complex"""
        group = edge_path_group(order_complex(star_poset), "eta")
        assert group.rank == 0

    def test_filled_triangle(self, chain_poset):
        """The relator of the 2-simplex kills the only non-tree edge"""
        group = edge_path_group(order_complex(chain_poset), "a")
        assert group.rank == 1
        assert abelianization(group).is_trivial

    def test_disconnected(self):
        antichain = FinitePoset(["x", "y"], [])
        with pytest.raises(DisconnectedError):
            edge_path_group(order_complex(antichain), "x")
        with pytest.raises(DisconnectedError):
            edge_path_group(order_complex(antichain), "z")


class TestSamplers:
    """Test cases for random posets and disjoint unions"""

    def test_random_poset_size(self):
        rng = random.Random(7)
        for _ in range(20):
            poset = random_poset(rng, 2, 5)
            assert 2 <= len(poset) <= 5

    def test_random_poset_reproducible(self):
        first = random_poset(random.Random(3))
        second = random_poset(random.Random(3))
        assert first == second

    def test_disjoint_union(self, dvr_poset, chain_poset):
        union = disjoint_union(dvr_poset, chain_poset)
        assert len(union) == 5
        assert ("a.p", "a.eta") in union.covers
        assert ("b.a", "b.b") in union.covers
        assert len(connected_components(union)) == 2
