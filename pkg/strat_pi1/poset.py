"""
Finite posets as models of Zariski specialization posets

Posets are ingested as cover relations (a, b) meaning a is covered by b, i.e. a is a
specialization of b. The full order is derived once at construction.
"""

import logging
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import networkx as nx

from .exceptions import DisconnectedError, EmptyPosetError, PosetValidationError

if TYPE_CHECKING:
    from .fpgroup import GroupPresentation

logger = logging.getLogger(__name__)

CHAIN_SEPARATOR = "<"
FORBIDDEN_ID_CHARACTERS = ("<", ">")


class FinitePoset:
    """
    Finite strict partial order given by its cover relation

    Immutable after construction. Element order is the input order; every operation
    that needs a deterministic order sorts ids lexicographically.
    """

    def __init__(
        self,
        elements: Iterable[str],
        covers: Iterable[tuple[str, str]],
        chain_keys: bool = False,
    ) -> None:
        """
        Build and validate a poset

        Args:
            elements: Distinct element identifiers
            covers: Pairs (a, b) meaning a is strictly below b with nothing in between
            chain_keys: Allow ids containing the chain separator (subdivision elements)

        Raises:
            PosetValidationError: duplicate ids, unknown ids, cycles or non-minimal covers
        """
        self._elements = tuple(elements)
        self._covers = frozenset((str(a), str(b)) for a, b in covers)

        seen: set[str] = set()
        for element in self._elements:
            if not isinstance(element, str) or not element:
                raise PosetValidationError(f"element ids must be nonempty strings: {element!r}")
            if element in seen:
                raise PosetValidationError(f"duplicate element id: {element}")
            forbidden = () if chain_keys else FORBIDDEN_ID_CHARACTERS
            if any(ch in element for ch in forbidden) or element != element.strip():
                raise PosetValidationError(
                    f"element id {element!r} may not contain '<', '>' or surrounding whitespace"
                )
            seen.add(element)

        for a, b in sorted(self._covers):
            if a not in seen or b not in seen:
                raise PosetValidationError(f"cover ({a}, {b}) references an unknown element")

        graph = nx.DiGraph()
        graph.add_nodes_from(self._elements)
        graph.add_edges_from(self._covers)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise PosetValidationError(f"covers imply a cycle: {cycle}")

        reduction = nx.transitive_reduction(graph)
        redundant = sorted(self._covers - set(reduction.edges()))
        if redundant:
            a, b = redundant[0]
            raise PosetValidationError(
                f"cover ({a}, {b}) is implied by transitivity of other covers"
            )

        self._graph = graph
        self._above = {x: frozenset(nx.descendants(graph, x)) for x in self._elements}
        self._below = {x: frozenset(nx.ancestors(graph, x)) for x in self._elements}

    @property
    def elements(self) -> tuple[str, ...]:
        """Element ids in input order"""
        return self._elements

    @property
    def covers(self) -> frozenset[tuple[str, str]]:
        """Cover pairs (a, b) with a covered by b"""
        return self._covers

    @property
    def cover_graph(self) -> nx.DiGraph:
        """A copy of the Hasse diagram as a digraph (edges point upwards)"""
        return self._graph.copy()

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, element: object) -> bool:
        return element in self._above

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return set(self._elements) == set(other._elements) and self._covers == other._covers

    def __hash__(self) -> int:
        return hash((frozenset(self._elements), self._covers))

    def __repr__(self) -> str:
        return f"FinitePoset(elements={list(self._elements)}, covers={sorted(self._covers)})"

    def up_set(self, element: str) -> frozenset[str]:
        """Elements strictly above `element`"""
        return self._above[element]

    def down_set(self, element: str) -> frozenset[str]:
        """Elements strictly below `element`"""
        return self._below[element]

    def less_than(self, a: str, b: str) -> bool:
        return b in self._above[a]

    def leq(self, a: str, b: str) -> bool:
        return a == b or self.less_than(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def rank_key(self, element: str) -> tuple[int, str]:
        """Sort key that is strictly increasing along every chain"""
        return (len(self._below[element]), element)


@dataclass(frozen=True)
class Chain:
    """Nonempty chain of a poset, members stored in ascending order"""

    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise PosetValidationError("chains are nonempty")
        if len(set(self.members)) != len(self.members):
            raise PosetValidationError(f"chain has duplicate members: {self.members}")

    @classmethod
    def from_members(cls, poset: FinitePoset, members: Iterable[str]) -> "Chain":
        """
        Build the canonical chain on a set of members

        Raises:
            PosetValidationError: unknown members or a pair of incomparable members
        """
        items = list(dict.fromkeys(members))
        for item in items:
            if item not in poset:
                raise PosetValidationError(f"unknown element in chain: {item}")
        ordered = sorted(items, key=poset.rank_key)
        for lower, upper in zip(ordered, ordered[1:], strict=False):
            if not poset.less_than(lower, upper):
                raise PosetValidationError(f"{lower} and {upper} are not comparable")
        return cls(tuple(ordered))

    @classmethod
    def from_key(cls, poset: FinitePoset, key: str) -> "Chain":
        """Parse a chain key such as 'p<eta'"""
        return cls.from_members(poset, key.split(CHAIN_SEPARATOR))

    @property
    def key(self) -> str:
        return CHAIN_SEPARATOR.join(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "Chain") -> bool:
        return set(self.members) <= set(other.members)


@dataclass(frozen=True)
class OrderComplex:
    """Nerve of a poset: vertices plus all chains grouped by cardinality"""

    vertices: tuple[str, ...]
    simplices: dict[int, tuple[tuple[str, ...], ...]] = field(default_factory=dict)

    def of_size(self, size: int) -> tuple[tuple[str, ...], ...]:
        return self.simplices.get(size, ())

    @property
    def edges(self) -> tuple[tuple[str, ...], ...]:
        return self.of_size(2)

    @property
    def triangles(self) -> tuple[tuple[str, ...], ...]:
        return self.of_size(3)

    @property
    def dimension(self) -> int:
        sizes = [size for size, faces in self.simplices.items() if faces]
        return max(sizes) - 1 if sizes else -1


def chains(poset: FinitePoset, max_size: int | None = None) -> list[Chain]:
    """
    Enumerate all nonempty chains

    Args:
        poset: The poset
        max_size: Only chains with at most this many members

    Returns:
        Chains sorted by length, then by key
    """
    result: list[Chain] = []

    def extend(prefix: tuple[str, ...]) -> None:
        result.append(Chain(prefix))
        if max_size is not None and len(prefix) >= max_size:
            return
        for nxt in sorted(poset.up_set(prefix[-1])):
            extend((*prefix, nxt))

    for element in sorted(poset.elements):
        extend((element,))

    return sorted(result, key=lambda chain: (len(chain), chain.key))


def subdivision(poset: FinitePoset) -> FinitePoset:
    """
    Poset of nonempty chains ordered by containment

    Element ids are chain keys; covers add exactly one member.
    """
    all_chains = chains(poset)
    keys = {chain.members: chain.key for chain in all_chains}
    covers = []
    for chain in all_chains:
        for extra in sorted(poset.elements):
            if extra in chain.members or not all(
                poset.comparable(extra, member) for member in chain.members
            ):
                continue
            bigger = tuple(sorted((*chain.members, extra), key=poset.rank_key))
            covers.append((chain.key, keys[bigger]))
    return FinitePoset([chain.key for chain in all_chains], covers, chain_keys=True)


def maximal_elements(poset: FinitePoset) -> frozenset[str]:
    """Elements with no strict successor"""
    return frozenset(x for x in poset.elements if not poset.up_set(x))


def minimal_elements(poset: FinitePoset) -> frozenset[str]:
    """Elements with no strict predecessor"""
    return frozenset(x for x in poset.elements if not poset.down_set(x))


def is_directed(poset: FinitePoset) -> bool:
    """
    Check that every pair of elements has a common upper bound

    Raises:
        EmptyPosetError: for the empty poset
    """
    if not len(poset):
        raise EmptyPosetError("directedness requires a nonempty poset")
    uppers = {x: poset.up_set(x) | {x} for x in poset.elements}
    return all(
        uppers[a] & uppers[b] for i, a in enumerate(poset.elements) for b in poset.elements[i:]
    )


def is_codirected(poset: FinitePoset) -> bool:
    """
    Check that every pair of elements has a common lower bound

    Raises:
        EmptyPosetError: for the empty poset
    """
    if not len(poset):
        raise EmptyPosetError("codirectedness requires a nonempty poset")
    lowers = {x: poset.down_set(x) | {x} for x in poset.elements}
    return all(
        lowers[a] & lowers[b] for i, a in enumerate(poset.elements) for b in poset.elements[i:]
    )


def is_local(poset: FinitePoset) -> bool:
    """A nonempty poset is a local model when it is codirected (unique closed point)"""
    return bool(len(poset)) and is_codirected(poset)


def connected_components(poset: FinitePoset) -> list[frozenset[str]]:
    """Components of the comparability graph, sorted by smallest id"""
    undirected = nx.Graph(poset.cover_graph)
    components = [frozenset(c) for c in nx.connected_components(undirected)]
    return sorted(components, key=min)


def is_w_local(poset: FinitePoset) -> bool:
    """Every connected component has exactly one minimal element"""
    minimal = minimal_elements(poset)
    return all(len(component & minimal) == 1 for component in connected_components(poset))


def order_complex(poset: FinitePoset, max_size: int | None = None) -> OrderComplex:
    """
    Simplicial complex whose simplices are the nonempty chains

    Args:
        poset: The poset
        max_size: Truncate to simplices with at most this many vertices

    Returns:
        OrderComplex with simplices grouped by cardinality
    """
    grouped: dict[int, list[tuple[str, ...]]] = {}
    for chain in chains(poset, max_size=max_size):
        grouped.setdefault(len(chain), []).append(chain.members)
    return OrderComplex(
        vertices=tuple(sorted(poset.elements)),
        simplices={size: tuple(faces) for size, faces in sorted(grouped.items())},
    )


def edge_generator_name(u: str, v: str) -> str:
    return f"e[{u}{CHAIN_SEPARATOR}{v}]"


def edge_path_group(complex_: OrderComplex, basepoint: str) -> "GroupPresentation":
    """
    Edge-path presentation of the fundamental group of an order complex

    The spanning tree is breadth-first from the basepoint with neighbors visited in
    lexicographic order. Each non-tree edge u < v gives a generator, each triangle
    a < b < c the relator e(a,b) e(b,c) e(a,c)^-1 with tree edges read as identity.

    Raises:
        DisconnectedError: if the basepoint is missing or its component is not everything
    """
    from .fpgroup import GroupPresentation, Word

    if basepoint not in complex_.vertices:
        raise DisconnectedError(f"basepoint {basepoint} is not a vertex of the complex")

    skeleton = nx.Graph()
    skeleton.add_nodes_from(complex_.vertices)
    skeleton.add_edges_from(complex_.edges)

    reachable = nx.node_connected_component(skeleton, basepoint)
    if len(reachable) != len(complex_.vertices):
        raise DisconnectedError(
            f"component of {basepoint} has {len(reachable)} of "
            f"{len(complex_.vertices)} vertices"
        )

    tree = {frozenset(edge) for edge in nx.bfs_edges(skeleton, basepoint, sort_neighbors=sorted)}
    generators: list[str] = []
    index: dict[tuple[str, str], int] = {}
    for u, v in complex_.edges:
        if frozenset((u, v)) not in tree:
            index[(u, v)] = len(generators)
            generators.append(edge_generator_name(u, v))

    def edge_word(u: str, v: str) -> Word:
        if (u, v) in index:
            return Word.generator(index[(u, v)])
        return Word.identity()

    relators = [
        edge_word(a, b) * edge_word(b, c) * edge_word(a, c).inverse()
        for a, b, c in complex_.triangles
    ]
    logger.debug(
        f"edge-path group at {basepoint}: {len(generators)} generators, {len(relators)} relators"
    )
    return GroupPresentation(tuple(generators), tuple(relators))


def random_poset(
    rng: random.Random,
    min_elements: int = 1,
    max_elements: int = 6,
    edge_probability: float = 0.35,
) -> FinitePoset:
    """
    Sample a random finite poset

    A random DAG on x0..x{n-1} (edges only from lower to higher index) is reduced
    to its covers.

    Args:
        rng: Random source
        min_elements: Smallest admissible size
        max_elements: Largest admissible size
        edge_probability: Probability of each candidate relation

    Returns:
        A valid FinitePoset
    """
    size = rng.randint(min_elements, max_elements)
    names = [f"x{i}" for i in range(size)]
    graph = nx.DiGraph()
    graph.add_nodes_from(names)
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < edge_probability:
                graph.add_edge(names[i], names[j])
    covers = list(nx.transitive_reduction(graph).edges())
    return FinitePoset(names, covers)


def disjoint_union(
    first: FinitePoset, second: FinitePoset, tags: Sequence[str] = ("a", "b")
) -> FinitePoset:
    """
    Disjoint union with element ids prefixed by the given tags

    Returns:
        The union poset
    """
    left, right = tags
    elements = [f"{left}.{x}" for x in first.elements] + [f"{right}.{x}" for x in second.elements]
    covers = [(f"{left}.{a}", f"{left}.{b}") for a, b in first.covers] + [
        (f"{right}.{a}", f"{right}.{b}") for a, b in second.covers
    ]
    return FinitePoset(elements, covers)
