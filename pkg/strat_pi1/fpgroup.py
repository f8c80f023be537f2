"""
Finitely presented groups

Words, presentations and homomorphisms, free products, normal-closure quotients,
diagram colimits, abelianization via Smith normal form, coset enumeration and
triviality certificates. Word equality in a group is only ever decided from a
completed coset enumeration; everything else is reported as Unverified or Unknown.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from math import gcd

from sympy import ZZ, Matrix
from sympy.combinatorics.coset_table import coset_enumeration_r
from sympy.combinatorics.fp_groups import FpGroup, low_index_subgroups
from sympy.combinatorics.free_groups import free_group
from sympy.matrices.normalforms import smith_normal_form

from .exceptions import (
    CosetEnumerationOverflow,
    DiagramError,
    MissingEdgeHomError,
    NotAHomomorphismError,
    PresentationError,
)
from .parser import RelatorParser
from .poset import FinitePoset

logger = logging.getLogger(__name__)

DEFAULT_MAX_COSETS = 100_000
DEFAULT_MAX_DEGREE = 6
DEFAULT_TIETZE_PASSES = 10
# relators longer than this are not used to eliminate a generator
MAX_DEFINING_LENGTH = 64

Letter = tuple[int, int]


@dataclass(frozen=True)
class Effort:
    """Explicit effort budget for enumerations and searches"""

    max_cosets: int = DEFAULT_MAX_COSETS
    max_degree: int = DEFAULT_MAX_DEGREE
    tietze_passes: int = DEFAULT_TIETZE_PASSES

    def __post_init__(self) -> None:
        for name in ("max_cosets", "max_degree", "tietze_passes"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"effort budget {name} must be a positive integer, got {value!r}")


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for index, sign in letters:
        if stack and stack[-1][0] == index and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((index, sign))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word: a sequence of (generator index, sign) letters"""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple((int(index), int(sign)) for index, sign in self.letters)
        for index, sign in letters:
            if index < 0 or sign not in (1, -1):
                raise PresentationError(f"invalid letter ({index}, {sign})")
        object.__setattr__(self, "letters", _free_reduce(letters))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def generator(cls, index: int, sign: int = 1) -> "Word":
        return cls(((index, sign),))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else self.inverse()
        return Word(base.letters * abs(exponent))

    def inverse(self) -> "Word":
        return Word(tuple((index, -sign) for index, sign in reversed(self.letters)))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def cyclically_reduced(self) -> "Word":
        letters = self.letters
        while len(letters) >= 2 and letters[0] == (letters[-1][0], -letters[-1][1]):
            letters = letters[1:-1]
        return Word(letters)

    def rotations(self) -> list["Word"]:
        return [Word(self.letters[i:] + self.letters[:i]) for i in range(max(len(self), 1))]

    def generators_used(self) -> set[int]:
        return {index for index, _ in self.letters}

    def exponent_sum(self, index: int) -> int:
        return sum(sign for i, sign in self.letters if i == index)

    def shift(self, offset: int) -> "Word":
        return Word(tuple((index + offset, sign) for index, sign in self.letters))

    def apply(self, images: Sequence["Word"]) -> "Word":
        """Substitute images[i] for generator i"""
        result: list[Letter] = []
        for index, sign in self.letters:
            image = images[index] if sign > 0 else images[index].inverse()
            result.extend(image.letters)
        return Word(tuple(result))

    def replace(self, mapping: Mapping[int, "Word"]) -> "Word":
        """Substitute only the generators present in `mapping`"""
        result: list[Letter] = []
        for index, sign in self.letters:
            if index in mapping:
                image = mapping[index] if sign > 0 else mapping[index].inverse()
                result.extend(image.letters)
            else:
                result.append((index, sign))
        return Word(tuple(result))

    def renumber(self, mapping: Mapping[int, int]) -> "Word":
        return Word(tuple((mapping[index], sign) for index, sign in self.letters))

    def canonical_key(self) -> tuple[Letter, ...]:
        """Key shared by all cyclic conjugates of the word and of its inverse"""
        reduced = self.cyclically_reduced()
        candidates = reduced.rotations() + reduced.inverse().rotations()
        return min(candidate.letters for candidate in candidates)

    def to_string(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        position = 0
        while position < len(self.letters):
            index, sign = self.letters[position]
            run = 1
            while (
                position + run < len(self.letters)
                and self.letters[position + run] == (index, sign)
            ):
                run += 1
            exponent = run * sign
            parts.append(names[index] if exponent == 1 else f"{names[index]}^{exponent}")
            position += run
        return "*".join(parts)


@dataclass(frozen=True)
class GroupPresentation:
    """
    Finite presentation <generators | relators>

    Relators are stored freely reduced; empty relators are dropped.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        generators = tuple(self.generators)
        seen: set[str] = set()
        for name in generators:
            if not isinstance(name, str) or not name:
                raise PresentationError(f"generator names must be nonempty strings: {name!r}")
            if name in seen:
                raise PresentationError(f"duplicate generator name: {name}")
            seen.add(name)
        relators = []
        for relator in self.relators:
            if not isinstance(relator, Word):
                raise PresentationError(f"relators must be words, got {relator!r}")
            if any(index >= len(generators) for index in relator.generators_used()):
                raise PresentationError(f"relator references an unknown generator: {relator}")
            if not relator.is_identity:
                relators.append(relator)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "relators", tuple(relators))

    @classmethod
    def from_strings(
        cls, generators: Sequence[str], relators: Iterable[str] = ()
    ) -> "GroupPresentation":
        """
        Build a presentation from relator strings

        Args:
            generators: Generator names
            relators: Relators in the relator grammar, e.g. "(s*t)^2"

        Returns:
            GroupPresentation
        """
        parser = RelatorParser(generators)
        return cls(tuple(generators), tuple(parser.parse(text) for text in relators))

    @classmethod
    def trivial(cls) -> "GroupPresentation":
        return cls(())

    @property
    def rank(self) -> int:
        return len(self.generators)

    def parse(self, text: str) -> Word:
        return RelatorParser(self.generators).parse(text)

    def format_word(self, word: Word) -> str:
        return word.to_string(self.generators)

    def relator_strings(self) -> list[str]:
        return [self.format_word(relator) for relator in self.relators]

    def __str__(self) -> str:
        return f"<{', '.join(self.generators)} | {', '.join(self.relator_strings())}>"


@dataclass(frozen=True)
class CosetTable:
    """
    Completed coset table

    Columns are ordered [g0, g0^-1, g1, g1^-1, ...]; cosets act on the right.
    Over the trivial subgroup the induced permutation representation is faithful.
    """

    generators: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    subgroup: tuple[Word, ...] = ()

    @property
    def index(self) -> int:
        return len(self.table)

    @staticmethod
    def column(index: int, sign: int) -> int:
        return 2 * index + (0 if sign > 0 else 1)

    def act(self, coset: int, word: Word) -> int:
        for index, sign in word.letters:
            coset = self.table[coset][self.column(index, sign)]
        return coset

    def permutation(self, generator: int) -> tuple[int, ...]:
        return tuple(row[self.column(generator, 1)] for row in self.table)

    def word_permutation(self, word: Word) -> tuple[int, ...]:
        return tuple(self.act(coset, word) for coset in range(self.index))

    def is_identity(self, word: Word) -> bool:
        return all(self.act(coset, word) == coset for coset in range(self.index))


def _sympy_presentation(group: GroupPresentation) -> tuple[FpGroup, tuple, object]:
    free, *generators = free_group(", ".join(f"x{i}" for i in range(group.rank)))
    fp_group = FpGroup(free, [_to_sympy(w, free, generators) for w in group.relators])
    return fp_group, tuple(generators), free


def _to_sympy(word: Word, free: object, generators: Sequence) -> object:
    element = free.identity
    for index, sign in word.letters:
        element = element * generators[index] ** sign
    return element


@lru_cache(maxsize=512)
def _enumerate(group: GroupPresentation, subgroup: tuple[Word, ...], max_cosets: int) -> CosetTable:
    if group.rank == 0:
        return CosetTable(group.generators, ((),), subgroup)
    fp_group, generators, free = _sympy_presentation(group)
    sympy_subgroup = [_to_sympy(word, free, generators) for word in subgroup]
    try:
        table = coset_enumeration_r(fp_group, sympy_subgroup, max_cosets=max_cosets)
    except ValueError as error:
        raise CosetEnumerationOverflow(max_cosets) from error
    table.compress()
    table.standardize()
    rows = tuple(tuple(int(entry) for entry in row) for row in table.table)
    logger.debug(f"coset enumeration on {group.rank} generators closed with {len(rows)} cosets")
    return CosetTable(group.generators, rows, subgroup)


def todd_coxeter(
    group: GroupPresentation,
    subgroup_gens: Iterable[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> CosetTable:
    """
    Enumerate the cosets of a subgroup (HLT strategy with lookahead)

    Args:
        group: The presentation
        subgroup_gens: Words generating the subgroup H
        max_cosets: Abort after defining this many cosets

    Returns:
        Completed, standardized coset table of size [G : H]

    Raises:
        CosetEnumerationOverflow: when max_cosets is exceeded
    """
    subgroup = tuple(subgroup_gens)
    for word in subgroup:
        if any(index >= group.rank for index in word.generators_used()):
            raise PresentationError("subgroup generator references an unknown generator")
    return _enumerate(group, subgroup, max_cosets)


def group_order(group: GroupPresentation, effort: Effort | None = None) -> int | None:
    """Order via enumeration over the trivial subgroup; None when the budget runs out"""
    effort = effort or Effort()
    try:
        return todd_coxeter(group, (), effort.max_cosets).index
    except CosetEnumerationOverflow:
        return None


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d1 | d2 | ... of an abelian group; 0 is an infinite cyclic factor"""

    factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        factors = tuple(int(factor) for factor in self.factors)
        finite = [factor for factor in factors if factor != 0]
        if any(factor < 0 or factor == 1 for factor in factors):
            raise ValueError(f"invariant factors must be 0 or at least 2: {factors}")
        if factors != tuple(finite) + (0,) * (len(factors) - len(finite)):
            raise ValueError(f"infinite factors must come last: {factors}")
        if any(b % a for a, b in zip(finite, finite[1:], strict=False)):
            raise ValueError(f"invariant factors must form a divisibility chain: {factors}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], free_rank: int = 0) -> "AbelianInvariants":
        """Invariants of a direct sum of cyclic groups Z/d (d = 0 is Z)"""
        values = [abs(int(d)) for d in diagonal]
        free_rank += sum(1 for value in values if value == 0)
        chain = sorted(value for value in values if value)
        for i in range(len(chain)):
            for j in range(i + 1, len(chain)):
                divisor = gcd(chain[i], chain[j])
                chain[i], chain[j] = divisor, chain[i] * chain[j] // divisor
        return cls(tuple(value for value in chain if value != 1) + (0,) * free_rank)

    @property
    def rank(self) -> int:
        return sum(1 for factor in self.factors if factor == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(factor for factor in self.factors if factor)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        result = 1
        for factor in self.factors:
            result *= factor
        return result

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        return "(" + ",".join(str(factor) for factor in self.factors) + ")"


def _eliminate_unit_pivots(rows: list[list[int]], columns: int) -> tuple[list[list[int]], int]:
    sparse = [{j: v for j, v in enumerate(row) if v} for row in rows]
    sparse = [row for row in sparse if row]
    active = set(range(columns))
    while True:
        pivot = next(
            (
                (k, j)
                for k, row in enumerate(sparse)
                for j, value in sorted(row.items())
                if abs(value) == 1
            ),
            None,
        )
        if pivot is None:
            break
        k, j = pivot
        pivot_row = sparse.pop(k)
        sign = pivot_row[j]
        for row in sparse:
            coefficient = row.get(j)
            if not coefficient:
                continue
            factor = coefficient * sign
            for col, value in pivot_row.items():
                updated = row.get(col, 0) - factor * value
                if updated:
                    row[col] = updated
                else:
                    row.pop(col, None)
        active.discard(j)
        sparse = [row for row in sparse if row]
    remaining = sorted(active)
    return [[row.get(col, 0) for col in remaining] for row in sparse], len(remaining)


def relation_matrix(group: GroupPresentation) -> list[list[int]]:
    """Exponent-sum matrix: one row per relator, one column per generator"""
    return [[relator.exponent_sum(i) for i in range(group.rank)] for relator in group.relators]


def abelianization(group: GroupPresentation) -> AbelianInvariants:
    """
    Invariant factors of the abelianization

    Rows with a unit entry are pivoted away exactly; the rest goes through the Smith
    normal form over the integers.

    Args:
        group: The presentation

    Returns:
        AbelianInvariants with the rank deficit as trailing zeros
    """
    rows, columns = _eliminate_unit_pivots(relation_matrix(group), group.rank)
    if not rows:
        return AbelianInvariants((0,) * columns)
    normal_form = smith_normal_form(Matrix(rows), domain=ZZ)
    diagonal = [int(normal_form[i, i]) for i in range(min(normal_form.shape))]
    nonzero = [value for value in diagonal if value]
    return AbelianInvariants.from_diagonal(nonzero, free_rank=columns - len(nonzero))


def free_product(
    first: GroupPresentation, second: GroupPresentation, tags: tuple[str, str] = ("1", "2")
) -> GroupPresentation:
    """
    Free product with colliding generator names suffixed by '@tag'

    Args:
        first: Left factor
        second: Right factor
        tags: Suffixes used only for names present in both factors

    Returns:
        <gens of first, gens of second | relators of both>
    """
    clash = set(first.generators) & set(second.generators)
    left = [f"{name}@{tags[0]}" if name in clash else name for name in first.generators]
    right = [f"{name}@{tags[1]}" if name in clash else name for name in second.generators]
    relators = first.relators + tuple(r.shift(first.rank) for r in second.relators)
    return GroupPresentation(tuple(left + right), relators)


def quotient_by_normal_closure(
    group: GroupPresentation, words: Iterable[Word]
) -> GroupPresentation:
    """Presentation of G modulo the normal closure of `words`"""
    return GroupPresentation(group.generators, group.relators + tuple(words))


class HomStatus(Enum):
    VERIFIED = "verified"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by one target word per source generator"""

    source: GroupPresentation
    target: GroupPresentation
    images: tuple[Word, ...]
    status: HomStatus = HomStatus.UNVERIFIED

    def __post_init__(self) -> None:
        images = tuple(self.images)
        if len(images) != self.source.rank:
            raise PresentationError(
                f"homomorphism needs {self.source.rank} images, got {len(images)}"
            )
        for image in images:
            if any(index >= self.target.rank for index in image.generators_used()):
                raise PresentationError("image word references an unknown target generator")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_strings(
        cls, source: GroupPresentation, target: GroupPresentation, mapping: Mapping[str, str]
    ) -> "GroupHom":
        """
        Build a homomorphism from generator-name -> word-string assignments

        Raises:
            PresentationError: missing or unknown source generators
        """
        unknown = sorted(set(mapping) - set(source.generators))
        if unknown:
            raise PresentationError(f"unknown source generators in map: {unknown}")
        missing = [name for name in source.generators if name not in mapping]
        if missing:
            raise PresentationError(f"map is missing images for {missing}")
        return cls(source, target, tuple(target.parse(mapping[name]) for name in source.generators))

    @property
    def verified(self) -> bool:
        return self.status is HomStatus.VERIFIED

    def image(self, word: Word) -> Word:
        return word.apply(self.images)

    def describe(self) -> dict[str, str]:
        return {
            name: self.target.format_word(image)
            for name, image in zip(self.source.generators, self.images, strict=True)
        }


def identity_hom(group: GroupPresentation) -> GroupHom:
    return GroupHom(
        group, group, tuple(Word.generator(i) for i in range(group.rank)), HomStatus.VERIFIED
    )


def quotient_hom(group: GroupPresentation, words: Iterable[Word]) -> GroupHom:
    """The canonical map G -> G/<<words>> (generators to themselves)"""
    quotient = quotient_by_normal_closure(group, words)
    return GroupHom(
        group, quotient, tuple(Word.generator(i) for i in range(group.rank)), HomStatus.VERIFIED
    )


def compose_homs(second: GroupHom, first: GroupHom) -> GroupHom:
    """second after first"""
    if first.target != second.source:
        raise DiagramError("cannot compose: first target differs from second source")
    status = (
        HomStatus.VERIFIED if first.verified and second.verified else HomStatus.UNVERIFIED
    )
    return GroupHom(
        first.source, second.target, tuple(second.image(w) for w in first.images), status
    )


def verify_hom(hom: GroupHom, effort: Effort | None = None) -> GroupHom:
    """
    Check that every source relator maps to the identity

    The target is enumerated over the trivial subgroup; its faithful permutation
    representation decides each image.

    Args:
        hom: Homomorphism candidate
        effort: Budget for the target enumeration

    Returns:
        The hom with status Verified, or Unverified when the budget runs out

    Raises:
        NotAHomomorphismError: naming the first relator with nontrivial image
    """
    effort = effort or Effort()
    try:
        table = todd_coxeter(hom.target, (), effort.max_cosets)
    except CosetEnumerationOverflow:
        logger.warning(
            f"target of rank {hom.target.rank} did not close within {effort.max_cosets} "
            "cosets; homomorphism left unverified"
        )
        return replace(hom, status=HomStatus.UNVERIFIED)
    for relator in hom.source.relators:
        if not table.is_identity(hom.image(relator)):
            raise NotAHomomorphismError(
                hom.source.format_word(relator),
                f"image {hom.target.format_word(hom.image(relator))}",
            )
    return replace(hom, status=HomStatus.VERIFIED)


def homs_agree(first: GroupHom, second: GroupHom, effort: Effort | None = None) -> bool | None:
    """
    Generator-wise equality of two homomorphisms with the same endpoints

    Returns:
        True/False when the target closes within budget, None otherwise
    """
    effort = effort or Effort()
    if first.source != second.source or first.target != second.target:
        raise DiagramError("homomorphisms with different endpoints cannot be compared")
    try:
        table = todd_coxeter(first.target, (), effort.max_cosets)
    except CosetEnumerationOverflow:
        return None
    return all(
        table.is_identity(a * b.inverse())
        for a, b in zip(first.images, second.images, strict=True)
    )


class Orientation(Enum):
    """Direction of edge homs relative to the covers a < b of the index"""

    COVARIANT = "covariant"
    CONTRAVARIANT = "contravariant"


@dataclass(frozen=True)
class GroupDiagram:
    """A presentation per index element and a homomorphism per cover pair"""

    index: FinitePoset
    node_groups: Mapping[str, GroupPresentation]
    edge_homs: Mapping[tuple[str, str], GroupHom] = field(default_factory=dict)
    orientation: Orientation = Orientation.COVARIANT

    def arrow(self, lower: str, upper: str) -> tuple[str, str]:
        """(source, target) of the edge hom for the cover lower < upper"""
        if self.orientation is Orientation.COVARIANT:
            return lower, upper
        return upper, lower


def colimit(diagram: GroupDiagram, keep_names_of: str | None = None) -> GroupPresentation:
    """
    Colimit presentation of a group diagram

    Generators are the disjoint union of node generators, named 'g@node' except for
    the node `keep_names_of`, which keeps its names and comes first. Relators are the
    node relators plus g * phi(g)^-1 for every edge hom phi and source generator g.

    Raises:
        MissingEdgeHomError: a cover pair has no edge hom
        DiagramError: a node group is missing or a hom disagrees with its endpoints
    """
    order = list(diagram.index.elements)
    if keep_names_of is not None:
        if keep_names_of not in diagram.index:
            raise DiagramError(f"unknown node {keep_names_of}")
        order.remove(keep_names_of)
        order.insert(0, keep_names_of)

    names: list[str] = []
    relators: list[Word] = []
    offsets: dict[str, int] = {}
    for node in order:
        group = diagram.node_groups.get(node)
        if group is None:
            raise DiagramError(f"node {node} has no group")
        offsets[node] = len(names)
        names.extend(
            name if node == keep_names_of else f"{name}@{node}" for name in group.generators
        )
        relators.extend(relator.shift(offsets[node]) for relator in group.relators)

    for lower, upper in sorted(diagram.index.covers):
        source, target = diagram.arrow(lower, upper)
        hom = diagram.edge_homs.get((source, target))
        if hom is None:
            raise MissingEdgeHomError(source, target)
        if hom.source != diagram.node_groups[source] or hom.target != diagram.node_groups[target]:
            raise DiagramError(f"edge hom {source} -> {target} disagrees with the node groups")
        for g, image in enumerate(hom.images):
            relators.append(
                Word.generator(offsets[source] + g) * image.shift(offsets[target]).inverse()
            )

    logger.debug(
        f"colimit over {len(order)} nodes: {len(names)} generators, {len(relators)} relators"
    )
    return GroupPresentation(tuple(names), tuple(relators))


@dataclass(frozen=True)
class TietzeResult:
    """Simplified presentation plus every original generator as a word in the new ones"""

    presentation: GroupPresentation
    substitutions: tuple[Word, ...]

    def hom_from_original(self, original: GroupPresentation) -> GroupHom:
        return GroupHom(original, self.presentation, self.substitutions)


def _clean_relators(relators: Iterable[Word]) -> list[Word]:
    cleaned: list[Word] = []
    seen: set[tuple[Letter, ...]] = set()
    for relator in relators:
        reduced = relator.cyclically_reduced()
        if reduced.is_identity:
            continue
        key = reduced.canonical_key()
        if key in seen:
            continue
        seen.add(key)
        cleaned.append(reduced)
    return cleaned


def _pick_elimination(
    relators: Sequence[Word], protected: set[int]
) -> tuple[int, int] | None:
    best: tuple[tuple[bool, int, int, int], int, int] | None = None
    for position, relator in enumerate(relators):
        if len(relator) > MAX_DEFINING_LENGTH:
            continue
        counts = Counter(index for index, _ in relator.letters)
        for generator in sorted(counts):
            if counts[generator] != 1:
                continue
            key = (generator in protected, len(relator), position, generator)
            if best is None or key < best[0]:
                best = (key, position, generator)
    return None if best is None else (best[1], best[2])


def _solve_for(relator: Word, generator: int) -> Word:
    position = next(i for i, (index, _) in enumerate(relator.letters) if index == generator)
    sign = relator.letters[position][1]
    rest = Word(relator.letters[position + 1 :] + relator.letters[:position])
    return rest.inverse() if sign > 0 else rest


def tietze_reduce(
    group: GroupPresentation,
    passes: int = DEFAULT_TIETZE_PASSES,
    protected: Iterable[str] = (),
) -> TietzeResult:
    """
    Simplify a presentation by Tietze moves

    Relators are freely and cyclically reduced and deduplicated up to cyclic
    permutation and inversion; a generator occurring exactly once in a relator is
    solved for and substituted away, shortest relator first. Protected generators are
    eliminated only when no unprotected choice exists.

    Args:
        group: The presentation
        passes: Maximum number of clean-and-eliminate rounds
        protected: Generator names to keep where possible

    Returns:
        TietzeResult with the simplified presentation and substitution words
    """
    protected_indices = {i for i, name in enumerate(group.generators) if name in set(protected)}
    alive = list(range(group.rank))
    definitions: list[tuple[int, Word]] = []
    relators = list(group.relators)

    for _ in range(passes):
        relators = _clean_relators(relators)
        changed = False
        while (choice := _pick_elimination(relators, protected_indices)) is not None:
            position, generator = choice
            expression = _solve_for(relators[position], generator)
            relators.pop(position)
            relators = _clean_relators(r.replace({generator: expression}) for r in relators)
            definitions.append((generator, expression))
            alive.remove(generator)
            changed = True
            logger.debug(f"eliminated {group.generators[generator]}")
        if not changed:
            break

    resolved: dict[int, Word] = {}
    for generator, expression in reversed(definitions):
        resolved[generator] = expression.replace(resolved)

    renumbering = {old: new for new, old in enumerate(alive)}
    substitutions = tuple(
        (resolved[i] if i in resolved else Word.generator(i)).renumber(renumbering)
        for i in range(group.rank)
    )
    presentation = GroupPresentation(
        tuple(group.generators[i] for i in alive),
        tuple(relator.renumber(renumbering) for relator in relators),
    )
    return TietzeResult(presentation, substitutions)


def tietze_simplify(
    group: GroupPresentation,
    passes: int = DEFAULT_TIETZE_PASSES,
    protected: Iterable[str] = (),
) -> GroupPresentation:
    """Presentation part of tietze_reduce"""
    return tietze_reduce(group, passes, protected).presentation


@dataclass(frozen=True)
class PermutationWitness:
    """Images of the generators as permutations of range(degree), acting on the right"""

    degree: int
    images: tuple[tuple[int, ...], ...]

    @classmethod
    def from_table(cls, table: CosetTable) -> "PermutationWitness":
        return cls(table.index, tuple(table.permutation(i) for i in range(len(table.generators))))

    def evaluate(self, word: Word) -> tuple[int, ...]:
        inverses = []
        for image in self.images:
            inverse = [0] * self.degree
            for point, target in enumerate(image):
                inverse[target] = point
            inverses.append(tuple(inverse))
        points = list(range(self.degree))
        for index, sign in word.letters:
            mapping = self.images[index] if sign > 0 else inverses[index]
            points = [mapping[point] for point in points]
        return tuple(points)

    @property
    def is_nontrivial(self) -> bool:
        return any(image != tuple(range(self.degree)) for image in self.images)

    def satisfies(self, group: GroupPresentation) -> bool:
        if len(self.images) != group.rank:
            return False
        if any(sorted(image) != list(range(self.degree)) for image in self.images):
            return False
        identity = tuple(range(self.degree))
        return all(self.evaluate(relator) == identity for relator in group.relators)


class Verdict(Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TrivialityCertificate:
    """Tri-state triviality verdict with its evidence"""

    verdict: Verdict
    coset_table: CosetTable | None = None
    abelian_invariants: AbelianInvariants | None = None
    witness: PermutationWitness | None = None
    effort: Effort | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.verdict is Verdict.TRIVIAL and (
            self.coset_table is None or self.coset_table.index != 1
        ):
            raise ValueError("a Trivial verdict needs a completed one-coset table")
        if self.verdict is Verdict.NONTRIVIAL:
            by_invariants = (
                self.abelian_invariants is not None and not self.abelian_invariants.is_trivial
            )
            by_witness = self.witness is not None and self.witness.is_nontrivial
            if not (by_invariants or by_witness):
                raise ValueError("a NonTrivial verdict needs nontrivial invariants or a witness")

    def recheck(self, group: GroupPresentation) -> bool:
        """Independently re-validate the evidence against the presentation"""
        if self.verdict is Verdict.TRIVIAL:
            table = self.coset_table
            return (
                table is not None
                and table.index == 1
                and not table.subgroup
                and table.generators == group.generators
            )
        if self.verdict is Verdict.NONTRIVIAL:
            if self.witness is not None:
                return self.witness.is_nontrivial and self.witness.satisfies(group)
            return self.abelian_invariants == abelianization(group)
        return True

    def summary(self) -> str:
        if self.verdict is Verdict.TRIVIAL:
            return "Trivial (1-coset table)"
        if self.verdict is Verdict.NONTRIVIAL:
            return f"NonTrivial ({self.detail})"
        return f"Unknown ({self.detail})"


def find_permutation_witness(
    group: GroupPresentation, max_degree: int = DEFAULT_MAX_DEGREE
) -> PermutationWitness | None:
    """
    Search for a nontrivial transitive permutation representation of degree <= max_degree

    Uses the low-index subgroups of the presentation; each table of index >= 2 yields
    a candidate that is re-checked against every relator.
    """
    if group.rank == 0:
        return None
    fp_group, _, _ = _sympy_presentation(group)
    for table in low_index_subgroups(fp_group, max_degree):
        rows = tuple(tuple(int(entry) for entry in row) for row in table.table)
        if len(rows) < 2:
            continue
        witness = PermutationWitness.from_table(CosetTable(group.generators, rows))
        if witness.is_nontrivial and witness.satisfies(group):
            logger.debug(f"found a permutation witness of degree {witness.degree}")
            return witness
    return None


def is_trivial(group: GroupPresentation, effort: Effort | None = None) -> TrivialityCertificate:
    """
    Decide triviality with evidence

    Nontrivial abelianization settles it first; otherwise a coset enumeration over the
    trivial subgroup either closes (index 1 is Trivial, larger index yields the regular
    representation as witness) or overflows, after which low-index subgroups up to
    effort.max_degree are searched. Unknown is a legal outcome.
    """
    effort = effort or Effort()
    invariants = abelianization(group)
    if not invariants.is_trivial:
        return TrivialityCertificate(
            Verdict.NONTRIVIAL, abelian_invariants=invariants, detail=f"abelianization {invariants}"
        )
    try:
        table = todd_coxeter(group, (), effort.max_cosets)
    except CosetEnumerationOverflow:
        table = None
    if table is not None:
        if table.index == 1:
            return TrivialityCertificate(Verdict.TRIVIAL, coset_table=table)
        return TrivialityCertificate(
            Verdict.NONTRIVIAL,
            coset_table=table,
            witness=PermutationWitness.from_table(table),
            detail=f"order {table.index}",
        )
    witness = find_permutation_witness(group, effort.max_degree)
    if witness is not None:
        return TrivialityCertificate(
            Verdict.NONTRIVIAL,
            witness=witness,
            detail=f"permutation representation of degree {witness.degree}",
        )
    return TrivialityCertificate(
        Verdict.UNKNOWN,
        effort=effort,
        detail=f"no closure within {effort.max_cosets} cosets, no witness up to degree "
        f"{effort.max_degree}",
    )
