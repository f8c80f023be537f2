"""
Explicit finite categories

Categories are full composition tables. Terminal/initial objects, weak versions,
(co)filteredness and the rigidity lemma are exhaustive quantifier checks.
"""

import logging
import random
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from itertools import product

import numpy as np

from .exceptions import CategoryValidationError, TooLargeError
from .fpgroup import CosetTable, Effort, GroupPresentation, Word, todd_coxeter
from .poset import FinitePoset, random_poset

logger = logging.getLogger(__name__)

DEFAULT_DELOOPING_CAP = 720
DELOOPING_OBJECT = "*"
DELOOPING_IDENTITY = "id"
MAX_SAMPLING_ATTEMPTS = 100


class FiniteCategory:
    """
    Finite category given by objects, morphisms, identities and a total composition table

    `compose[(f, g)] = h` means g after f equals h, for f: x -> y and g: y -> z.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Mapping[str, tuple[str, str]],
        identities: Mapping[str, str],
        compose: Mapping[tuple[str, str], str],
        check_associativity: bool = True,
    ) -> None:
        """
        Build and validate a category

        Args:
            objects: Object ids
            morphisms: Morphism id -> (source, target)
            identities: Object id -> its identity morphism id
            compose: (f, g) -> g∘f for every composable pair
            check_associativity: Skip the cubic associativity scan for tables that are
                associative by construction

        Raises:
            CategoryValidationError: naming the offending morphisms
        """
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        self.compose_table = dict(compose)
        self._validate(check_associativity)

        self._homs: dict[tuple[str, str], tuple[str, ...]] = {}
        for morphism in sorted(self.morphisms):
            self._homs.setdefault(self.morphisms[morphism], ())
            self._homs[self.morphisms[morphism]] += (morphism,)

    def _validate(self, check_associativity: bool) -> None:
        if len(set(self.objects)) != len(self.objects):
            raise CategoryValidationError("duplicate object ids")
        known = set(self.objects)
        for morphism, (source, target) in self.morphisms.items():
            if source not in known or target not in known:
                raise CategoryValidationError("morphism has an unknown endpoint", (morphism,))

        for obj in self.objects:
            identity = self.identities.get(obj)
            if identity is None:
                raise CategoryValidationError("object has no identity", (obj,))
            if self.morphisms.get(identity) != (obj, obj):
                raise CategoryValidationError("identity is not an endomorphism", (obj, identity))

        for (f, g), h in self.compose_table.items():
            if f not in self.morphisms or g not in self.morphisms or h not in self.morphisms:
                raise CategoryValidationError(
                    "composition references unknown morphisms", (f, g, h)
                )
            if self.morphisms[f][1] != self.morphisms[g][0]:
                raise CategoryValidationError("composition of a non-composable pair", (f, g, h))
            if self.morphisms[h] != (self.morphisms[f][0], self.morphisms[g][1]):
                raise CategoryValidationError("composite has the wrong endpoints", (f, g, h))

        for f, g in product(sorted(self.morphisms), repeat=2):
            if self.morphisms[f][1] == self.morphisms[g][0] and (f, g) not in self.compose_table:
                raise CategoryValidationError("composition undefined on a composable pair", (f, g))

        for f, (source, target) in self.morphisms.items():
            left = self.compose_table[(self.identities[source], f)]
            right = self.compose_table[(f, self.identities[target])]
            if left != f or right != f:
                raise CategoryValidationError("identity law fails", (f, left, right))

        if not check_associativity:
            return
        after: dict[str, list[str]] = {}
        for g, (source, _) in self.morphisms.items():
            after.setdefault(source, []).append(g)
        for f in sorted(self.morphisms):
            for g in sorted(after.get(self.morphisms[f][1], [])):
                fg = self.compose_table[(f, g)]
                for h in sorted(after.get(self.morphisms[g][1], [])):
                    gh = self.compose_table[(g, h)]
                    if self.compose_table[(fg, h)] != self.compose_table[(f, gh)]:
                        raise CategoryValidationError("associativity fails", (f, g, h))

    def __repr__(self) -> str:
        return f"FiniteCategory(objects={len(self.objects)}, morphisms={len(self.morphisms)})"

    def compose(self, f: str, g: str) -> str:
        """g after f"""
        return self.compose_table[(f, g)]

    def hom_set(self, source: str, target: str) -> tuple[str, ...]:
        return self._homs.get((source, target), ())

    def endpoints(self, morphism: str) -> tuple[str, str]:
        return self.morphisms[morphism]


def hom_set(category: FiniteCategory, source: str, target: str) -> tuple[str, ...]:
    """Morphism ids from `source` to `target`, sorted"""
    return category.hom_set(source, target)


def hom_counts(category: FiniteCategory) -> np.ndarray:
    """Matrix of |Hom(x, y)| with rows and columns in object order"""
    counts = np.zeros((len(category.objects), len(category.objects)), dtype=int)
    for i, source in enumerate(category.objects):
        for j, target in enumerate(category.objects):
            counts[i, j] = len(category.hom_set(source, target))
    return counts


def has_terminal(category: FiniteCategory) -> str | None:
    """First object receiving exactly one morphism from every object"""
    counts = hom_counts(category)
    for j, obj in enumerate(category.objects):
        if np.all(counts[:, j] == 1):
            return obj
    return None


def has_initial(category: FiniteCategory) -> str | None:
    """First object with exactly one morphism to every object"""
    counts = hom_counts(category)
    for i, obj in enumerate(category.objects):
        if np.all(counts[i, :] == 1):
            return obj
    return None


def weakly_terminal(category: FiniteCategory) -> frozenset[str]:
    counts = hom_counts(category)
    return frozenset(obj for j, obj in enumerate(category.objects) if np.all(counts[:, j] > 0))


def weakly_initial(category: FiniteCategory) -> frozenset[str]:
    counts = hom_counts(category)
    return frozenset(obj for i, obj in enumerate(category.objects) if np.all(counts[i, :] > 0))


def _parallel_pairs(category: FiniteCategory) -> Iterable[tuple[str, str]]:
    for source, target in product(category.objects, repeat=2):
        homs = category.hom_set(source, target)
        for i, f in enumerate(homs):
            for g in homs[i + 1 :]:
                yield f, g


def is_filtered(category: FiniteCategory) -> bool:
    """
    Nonempty, every pair of objects has a cocone, every parallel pair is coequalized

    Returns:
        True iff all three conditions hold
    """
    if not category.objects:
        return False
    reach = hom_counts(category) > 0
    if not np.all((reach.astype(int) @ reach.T.astype(int)) > 0):
        return False
    for f, g in _parallel_pairs(category):
        target = category.endpoints(f)[1]
        if not any(
            category.compose(f, h) == category.compose(g, h)
            for obj in category.objects
            for h in category.hom_set(target, obj)
        ):
            return False
    return True


def is_cofiltered(category: FiniteCategory) -> bool:
    """Dual of is_filtered: cones for pairs, equalizing morphisms for parallel pairs"""
    if not category.objects:
        return False
    reach = hom_counts(category) > 0
    if not np.all((reach.T.astype(int) @ reach.astype(int)) > 0):
        return False
    for f, g in _parallel_pairs(category):
        source = category.endpoints(f)[0]
        if not any(
            category.compose(h, f) == category.compose(h, g)
            for obj in category.objects
            for h in category.hom_set(obj, source)
        ):
            return False
    return True


def is_isomorphism(category: FiniteCategory, morphism: str) -> bool:
    """True if some inverse composes to identities both ways"""
    source, target = category.endpoints(morphism)
    return any(
        category.compose(morphism, g) == category.identities[source]
        and category.compose(g, morphism) == category.identities[target]
        for g in category.hom_set(target, source)
    )


@dataclass(frozen=True)
class RigidityReport:
    """Outcome of testing the rigidity lemma on one category"""

    hypothesis: bool
    conclusion: bool | None
    witness: str | None = None
    terminal: str | None = None

    @property
    def counterexample(self) -> bool:
        return self.hypothesis and not self.conclusion

    @property
    def passed(self) -> bool:
        return not self.counterexample


def rigidity_check(category: FiniteCategory) -> RigidityReport:
    """
    Test "filtered + rigid weakly terminal object implies terminal object"

    The hypothesis asks for a filtered category and a weakly terminal t with no
    morphisms out of t to other objects and only isomorphisms as endomorphisms.
    When it holds, has_terminal is evaluated as the conclusion.
    """
    if not is_filtered(category):
        return RigidityReport(hypothesis=False, conclusion=None)
    for candidate in sorted(weakly_terminal(category)):
        maps_out = any(
            category.hom_set(candidate, obj) for obj in category.objects if obj != candidate
        )
        if maps_out:
            continue
        if all(is_isomorphism(category, e) for e in category.hom_set(candidate, candidate)):
            terminal = has_terminal(category)
            report = RigidityReport(True, terminal is not None, candidate, terminal)
            if report.counterexample:
                logger.error(f"rigidity counterexample at weakly terminal object {candidate}")
            return report
    return RigidityReport(hypothesis=False, conclusion=None)


def delooping(table: CosetTable, cap: int = DEFAULT_DELOOPING_CAP) -> FiniteCategory:
    """
    One-object category of the permutation group generated by a coset table

    Elements are found by breadth-first closure over the generator permutations and
    named by their shortest word ('id' for the identity).

    Raises:
        TooLargeError: when the group has more than `cap` elements
    """
    degree = table.index
    identity = tuple(range(degree))
    generators = [table.permutation(i) for i in range(len(table.generators))]
    names = {identity: DELOOPING_IDENTITY}
    queue = deque([(identity, Word.identity())])
    while queue:
        element, word = queue.popleft()
        for i, generator in enumerate(generators):
            product_ = tuple(generator[point] for point in element)
            if product_ in names:
                continue
            if len(names) >= cap:
                raise TooLargeError(f"group has more than {cap} elements")
            longer = word * Word.generator(i)
            names[product_] = longer.to_string(table.generators)
            queue.append((product_, longer))

    elements = list(names)
    compose = {}
    for f, g in product(elements, repeat=2):
        compose[(names[f], names[g])] = names[tuple(g[point] for point in f)]
    logger.debug(f"delooping with {len(elements)} morphisms")
    return FiniteCategory(
        [DELOOPING_OBJECT],
        {names[e]: (DELOOPING_OBJECT, DELOOPING_OBJECT) for e in elements},
        {DELOOPING_OBJECT: DELOOPING_IDENTITY},
        compose,
        check_associativity=False,
    )


def delooping_of(
    group: GroupPresentation, effort: Effort | None = None, cap: int = DEFAULT_DELOOPING_CAP
) -> FiniteCategory:
    """Enumerate the regular representation of `group`, then deloop it"""
    effort = effort or Effort()
    table = todd_coxeter(group, (), effort.max_cosets)
    if table.index > cap:
        raise TooLargeError(f"group of order {table.index} exceeds the delooping cap {cap}")
    return delooping(table, cap)


def _arrow(source: str, target: str) -> str:
    return f"{source}->{target}"


def poset_as_category(poset: FinitePoset) -> FiniteCategory:
    """One morphism 'x->y' for every x <= y"""
    morphisms = {
        _arrow(x, y): (x, y) for x in poset.elements for y in poset.elements if poset.leq(x, y)
    }
    compose = {
        (_arrow(x, y), _arrow(y, z)): _arrow(x, z)
        for (x, y) in morphisms.values()
        for (y2, z) in morphisms.values()
        if y == y2
    }
    return FiniteCategory(
        poset.elements, morphisms, {x: _arrow(x, x) for x in poset.elements}, compose
    )


def _layered_category(
    poset: FinitePoset, order: int, collapsed: frozenset[str]
) -> FiniteCategory:
    def size(obj: str) -> int:
        return 1 if obj in collapsed else order

    morphisms = {}
    for x in poset.elements:
        for y in poset.elements:
            if poset.leq(x, y):
                for k in range(size(y)):
                    morphisms[f"{x}->{y}#{k}"] = (x, y)
    compose = {}
    for f, (x, y) in morphisms.items():
        a = int(f.rsplit("#", 1)[1])
        for g, (y2, z) in morphisms.items():
            if y2 != y:
                continue
            b = int(g.rsplit("#", 1)[1])
            compose[(f, g)] = f"{x}->{z}#{(a + b) % size(z)}"
    identities = {x: f"{x}->{x}#0" for x in poset.elements}
    return FiniteCategory(poset.elements, morphisms, identities, compose)


def random_category(
    rng: random.Random, max_objects: int = 4, max_morphisms: int = 12
) -> FiniteCategory:
    """
    Sample a small layered category

    A random poset carries a cyclic group G of order 1 to 3; Hom(x, y) for x <= y is
    G/H_y where H_y is all of G on an upward-closed set of collapsed objects and
    trivial elsewhere. Tables that fail validation or exceed `max_morphisms` are
    resampled.
    """
    for _ in range(MAX_SAMPLING_ATTEMPTS):
        poset = random_poset(rng, 1, max_objects, edge_probability=0.5)
        order = rng.randint(1, 3)
        seeds = {x for x in poset.elements if rng.random() < 0.3}
        collapsed = frozenset(seeds.union(*(poset.up_set(x) for x in seeds)))
        try:
            category = _layered_category(poset, order, collapsed)
        except CategoryValidationError:
            logger.debug("rejected a sampled category table")
            continue
        if len(category.morphisms) <= max_morphisms:
            return category
    return poset_as_category(random_poset(rng, 1, 1))
