"""
Dedekind-domain models and cyclotomic levels

A Dedekind model fixes a finite surrogate G_K for the Galois group of the fraction
field and, per prime, a decomposition group D_p with an inclusion into G_K and inertia
words inside D_p. Its site lives over the star poset {p1, ..., pn < eta}; the
fundamental group of that site is compared against G_K modulo the normal closure of
all inertia images.
"""

import logging
import random
import sys
from collections import deque
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from itertools import combinations
from math import gcd

import pandas as pd
from sympy import factorint, primitive_root, totient
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.ntheory.modular import crt
from tqdm import tqdm

from .decollage import GENERIC_POINT, StratifiedSite, accept_site, compute_pi1
from .exceptions import (
    InputFormatError,
    NotAHomomorphismError,
    PresentationError,
    PrimeNotDividingError,
)
from .fpgroup import (
    AbelianInvariants,
    Effort,
    GroupHom,
    GroupPresentation,
    Word,
    abelianization,
    compose_homs,
    group_order,
    homs_agree,
    identity_hom,
    quotient_by_normal_closure,
    quotient_hom,
    verify_hom,
)
from .poset import CHAIN_SEPARATOR, FORBIDDEN_ID_CHARACTERS, FinitePoset

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_BATCH_SIZE = 50
DEFAULT_WORKERS = 4
BATCH_COLUMNS = [
    "instance",
    "group",
    "primes",
    "outcome",
    "order_pipeline",
    "order_expected",
    "order_oracle",
    "oracle_agrees",
]


@dataclass(frozen=True)
class PrimeData:
    """Decomposition group D_p, its inclusion into G_K and inertia words in D_p"""

    name: str
    decomposition: GroupPresentation
    inclusion: GroupHom
    inertia: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "inertia", tuple(self.inertia))
        if self.inclusion.source != self.decomposition:
            raise PresentationError(f"inclusion of {self.name} does not start at D_{self.name}")
        for word in self.inertia:
            if any(index >= self.decomposition.rank for index in word.generators_used()):
                raise PresentationError(f"inertia word of {self.name} leaves D_{self.name}")

    @property
    def residue_quotient(self) -> GroupHom:
        """D_p -> D_p / <<I_p>>"""
        return quotient_hom(self.decomposition, self.inertia)


@dataclass(frozen=True)
class DedekindModel:
    galois: GroupPresentation
    primes: tuple[PrimeData, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "primes", tuple(self.primes))
        names = [prime.name for prime in self.primes]
        if len(set(names)) != len(names):
            raise InputFormatError(f"prime names must be distinct: {names}")
        for prime in self.primes:
            if prime.name == GENERIC_POINT or not prime.name.strip():
                raise InputFormatError(f"invalid prime name {prime.name!r}")
            if any(ch in prime.name for ch in FORBIDDEN_ID_CHARACTERS):
                raise InputFormatError(f"prime name {prime.name!r} may not contain '<' or '>'")
            if prime.inclusion.target != self.galois:
                raise PresentationError(f"inclusion of {prime.name} does not land in G_K")

    @property
    def base(self) -> FinitePoset:
        """Star poset: every prime below the generic point"""
        names = [prime.name for prime in self.primes]
        return FinitePoset([*names, GENERIC_POINT], [(name, GENERIC_POINT) for name in names])


def link_key(prime: str) -> str:
    return f"{prime}{CHAIN_SEPARATOR}{GENERIC_POINT}"


def build_site(model: DedekindModel, effort: Effort | None = None) -> StratifiedSite:
    """
    Site of a Dedekind model over its star poset

    The stratum at eta is G_K, at p the residue quotient D_p/<<I_p>>, and at p<eta the
    decomposition group D_p; the maps out of p<eta are the quotient map and the inclusion.

    Raises:
        NotAHomomorphismError: an inclusion does not respect the relators of D_p
        SiteValidationError: any other hard validation failure
    """
    effort = effort or Effort()
    strata = {GENERIC_POINT: model.galois}
    maps = {}
    for prime in model.primes:
        inclusion = verify_hom(prime.inclusion, effort)
        quotient = prime.residue_quotient
        link = link_key(prime.name)
        strata[prime.name] = quotient.target
        strata[link] = prime.decomposition
        maps[(link, prime.name)] = quotient
        maps[(link, GENERIC_POINT)] = inclusion
    return accept_site(StratifiedSite(model.base, strata, maps), effort)


def inertia_images(model: DedekindModel) -> list[Word]:
    return [prime.inclusion.image(word) for prime in model.primes for word in prime.inertia]


def expected_pi1(model: DedekindModel) -> GroupPresentation:
    """G_K modulo the normal closure of every inertia image"""
    return quotient_by_normal_closure(model.galois, inertia_images(model))


class Outcome(Enum):
    MATCH = "match"
    MISMATCH = "mismatch"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class VerificationReport:
    """Both sides of the quotient formula and the certificates comparing them"""

    outcome: Outcome
    pipeline: GroupPresentation
    expected: GroupPresentation
    order_pipeline: int | None = None
    order_expected: int | None = None
    forward: GroupHom | None = None
    backward: GroupHom | None = None
    detail: str = ""


def _raw_images(model: DedekindModel, raw: GroupPresentation) -> tuple[Word, ...]:
    """Images in G_K of every colimit generator under the canonical cocone"""
    by_name = {}
    for i, name in enumerate(model.galois.generators):
        by_name[name] = Word.generator(i)
    for prime in model.primes:
        for node in (prime.name, link_key(prime.name)):
            pairs = zip(prime.decomposition.generators, prime.inclusion.images, strict=True)
            for name, image in pairs:
                by_name[f"{name}@{node}"] = image
    return tuple(by_name[name] for name in raw.generators)


def verify_formula(model: DedekindModel, effort: Effort | None = None) -> VerificationReport:
    """
    Compare the site's fundamental group with G_K/N on one finite instance

    Both orders come from coset enumeration; the canonical homomorphisms in both
    directions must verify and compose to the identity on generators.

    Args:
        model: The Dedekind model
        effort: Budgets

    Returns:
        VerificationReport with outcome Match, Mismatch or Inconclusive
    """
    effort = effort or Effort()
    site = build_site(model, effort)
    computation = compute_pi1(site, GENERIC_POINT, effort)
    pipeline = computation.simplified
    expected = expected_pi1(model)
    order_pipeline = group_order(pipeline, effort)
    order_expected = group_order(expected, effort)
    report = VerificationReport(
        Outcome.INCONCLUSIVE, pipeline, expected, order_pipeline, order_expected
    )
    if order_pipeline is None or order_expected is None:
        logger.warning("quotient formula inconclusive: an enumeration did not close")
        return replace(report, detail="coset enumeration did not close within budget")
    if order_pipeline != order_expected:
        logger.error(f"quotient formula mismatch: {order_pipeline} != {order_expected}")
        return replace(report, outcome=Outcome.MISMATCH, detail="orders differ")

    raw_images = _raw_images(model, computation.raw)
    forward_images = tuple(
        raw_images[computation.raw.generators.index(name)] for name in pipeline.generators
    )
    forward = GroupHom(pipeline, expected, forward_images)
    backward = GroupHom(expected, pipeline, computation.substitutions[: model.galois.rank])
    try:
        forward = verify_hom(forward, effort)
        backward = verify_hom(backward, effort)
    except NotAHomomorphismError as error:
        return replace(report, outcome=Outcome.MISMATCH, detail=str(error))
    report = replace(report, forward=forward, backward=backward)
    if not (forward.verified and backward.verified):
        return replace(report, detail="canonical maps left unverified")

    round_trips = (
        homs_agree(compose_homs(backward, forward), identity_hom(pipeline), effort),
        homs_agree(compose_homs(forward, backward), identity_hom(expected), effort),
    )
    if False in round_trips:
        return replace(report, outcome=Outcome.MISMATCH, detail="canonical maps are not inverse")
    if None in round_trips:
        return replace(report, detail="round trips not decided within budget")
    return replace(report, outcome=Outcome.MATCH, detail=f"order {order_pipeline}")


def affine_line_model(
    galois: GroupPresentation, decomposition_words: Sequence[Sequence[Word]]
) -> DedekindModel:
    """
    Model in which every inertia group is its whole decomposition group

    Each D_p is free on the given words (d1, d2, ...), mapped into G_K by them, and all
    residue quotients are trivial.
    """
    primes = []
    for i, words in enumerate(decomposition_words, start=1):
        decomposition = GroupPresentation(tuple(f"d{j}" for j in range(1, len(words) + 1)))
        inclusion = GroupHom(decomposition, galois, tuple(words))
        primes.append(
            PrimeData(
                f"p{i}",
                decomposition,
                inclusion,
                tuple(Word.generator(j) for j in range(decomposition.rank)),
            )
        )
    return DedekindModel(galois, tuple(primes))


def conjugate_model(model: DedekindModel, element: Word) -> DedekindModel:
    """Conjugate every inclusion (and with it all inertia data) by `element` of G_K"""
    primes = []
    for prime in model.primes:
        images = tuple(element.inverse() * image * element for image in prime.inclusion.images)
        inclusion = GroupHom(prime.decomposition, model.galois, images)
        primes.append(replace(prime, inclusion=inclusion))
    return DedekindModel(model.galois, tuple(primes))


@dataclass(frozen=True)
class CatalogGroup:
    """Small group with a presentation and matching generator permutations"""

    name: str
    presentation: GroupPresentation
    permutations: tuple[Permutation, ...]

    @cached_property
    def order(self) -> int:
        return int(PermutationGroup(list(self.permutations)).order())

    def evaluate(self, word: Word) -> Permutation:
        element = Permutation(list(range(self.permutations[0].size)))
        for index, sign in word.letters:
            element = element * self.permutations[index] ** sign
        return element

    def element_words(self) -> dict[Permutation, Word]:
        """Shortest positive word for every element, in breadth-first order"""
        identity = Permutation(list(range(self.permutations[0].size)))
        words = {identity: Word.identity()}
        queue = deque([identity])
        while queue:
            element = queue.popleft()
            for i, generator in enumerate(self.permutations):
                product = element * generator
                if product not in words:
                    words[product] = words[element] * Word.generator(i)
                    queue.append(product)
        return words


def _cycle(size: int, *cycles: Sequence[int]) -> Permutation:
    return Permutation([list(cycle) for cycle in cycles], size=size)


def _catalog() -> list[CatalogGroup]:
    groups = []
    for n in (2, 3, 4, 5, 6):
        groups.append(
            CatalogGroup(
                f"C{n}",
                GroupPresentation.from_strings(["a"], [f"a^{n}"]),
                (_cycle(n, range(n)),),
            )
        )
    groups.append(
        CatalogGroup(
            "V4",
            GroupPresentation.from_strings(["a", "b"], ["a^2", "b^2", "(a*b)^2"]),
            (_cycle(4, (0, 1), (2, 3)), _cycle(4, (0, 2), (1, 3))),
        )
    )
    groups.append(
        CatalogGroup(
            "C2xC4",
            GroupPresentation.from_strings(["a", "b"], ["a^2", "b^4", "a*b*a^-1*b^-1"]),
            (_cycle(6, (0, 1)), _cycle(6, (2, 3, 4, 5))),
        )
    )
    groups.append(
        CatalogGroup(
            "S3",
            GroupPresentation.from_strings(["s", "t"], ["s^2", "t^3", "(s*t)^2"]),
            (_cycle(3, (0, 1)), _cycle(3, (0, 1, 2))),
        )
    )
    for n in (4, 5, 6):
        groups.append(
            CatalogGroup(
                f"D{n}",
                GroupPresentation.from_strings(["r", "f"], [f"r^{n}", "f^2", "(r*f)^2"]),
                (
                    _cycle(n, range(n)),
                    Permutation(list(reversed(range(n)))),
                ),
            )
        )
    groups.append(
        CatalogGroup(
            "A4",
            GroupPresentation.from_strings(["a", "b"], ["a^2", "b^3", "(a*b)^3"]),
            (_cycle(4, (0, 1), (2, 3)), _cycle(4, (0, 1, 2))),
        )
    )
    groups.append(
        CatalogGroup(
            "S4",
            GroupPresentation.from_strings(["s", "t"], ["s^2", "t^4", "(s*t)^3"]),
            (_cycle(4, (0, 1)), _cycle(4, (0, 1, 2, 3))),
        )
    )
    return groups


CATALOG = _catalog()


@dataclass(frozen=True)
class SampledInstance:
    """A sampled model together with its concrete permutation realization"""

    index: int
    group: CatalogGroup
    model: DedekindModel
    inertia_elements: tuple[Permutation, ...]


def sample_instance(rng: random.Random, index: int = 0, max_order: int = 24) -> SampledInstance:
    """
    Sample a Dedekind model from the catalog

    G_K is a catalog group of order at most `max_order`; each of zero to two primes gets
    either a cyclic decomposition group generated by a random element or the whole
    group, and inertia that is trivial, everything, or one random element of D_p.
    """
    group = rng.choice([g for g in CATALOG if g.order <= max_order])
    words = group.element_words()
    elements = list(words)
    primes = []
    inertia_elements = []
    for i in range(1, rng.randint(0, 2) + 1):
        if rng.random() < 0.25:
            decomposition = group.presentation
            inclusion = identity_hom(group.presentation)
            members = elements
        else:
            generator = rng.choice(elements)
            order = generator.order()
            decomposition = GroupPresentation.from_strings(["d"], [f"d^{order}"])
            inclusion = GroupHom(decomposition, group.presentation, (words[generator],))
            members = [generator**k for k in range(order)]
        mode = rng.choice(["trivial", "all", "element"])
        if mode == "trivial":
            inertia: tuple[Word, ...] = ()
        elif mode == "all":
            inertia = tuple(Word.generator(j) for j in range(decomposition.rank))
        else:
            chosen = rng.choice(members)
            if decomposition.rank == 1:
                inertia = (Word.generator(0) ** members.index(chosen),)
            else:
                inertia = (words[chosen],)
        prime = PrimeData(f"p{i}", decomposition, inclusion, inertia)
        primes.append(prime)
        inertia_elements.extend(group.evaluate(prime.inclusion.image(w)) for w in inertia)
    model = DedekindModel(group.presentation, tuple(primes))
    return SampledInstance(index, group, model, tuple(inertia_elements))


def normal_closure_elements(
    elements: Iterable[Permutation], seeds: Iterable[Permutation]
) -> frozenset[Permutation]:
    """Closure of `seeds` under products and conjugation by `elements`, by fixed point"""
    pool = list(elements)
    closure = set(seeds)
    closure.add(Permutation(list(range(pool[0].size))))
    while True:
        grown = set(closure)
        for a in closure:
            grown.update(g**-1 * a * g for g in pool)
            grown.update(a * b for b in closure)
        if grown == closure:
            return frozenset(closure)
        closure = grown


def oracle_quotient_order(instance: SampledInstance) -> int:
    """|G_K| / |normal closure of inertia| computed inside the permutation group"""
    elements = list(instance.group.element_words())
    closure = normal_closure_elements(elements, instance.inertia_elements)
    return len(elements) // len(closure)


def _verify_instance(instance: SampledInstance, effort: Effort) -> dict[str, object]:
    report = verify_formula(instance.model, effort)
    oracle = oracle_quotient_order(instance)
    return {
        "instance": instance.index,
        "group": instance.group.name,
        "primes": len(instance.model.primes),
        "outcome": report.outcome.value,
        "order_pipeline": report.order_pipeline,
        "order_expected": report.order_expected,
        "order_oracle": oracle,
        "oracle_agrees": report.order_pipeline == oracle,
    }


def batch_verify(
    seed: int = DEFAULT_SEED,
    count: int = DEFAULT_BATCH_SIZE,
    effort: Effort | None = None,
    workers: int = DEFAULT_WORKERS,
    progress: bool = False,
) -> pd.DataFrame:
    """
    Verify the quotient formula on sampled instances

    Each instance draws from its own generator seeded from `seed`, so results do not
    depend on scheduling.

    Args:
        seed: Master seed
        count: Number of instances
        effort: Budgets
        workers: Worker threads
        progress: Show a progress bar on stderr

    Returns:
        DataFrame with one row per instance in instance order
    """
    effort = effort or Effort()
    master = random.Random(seed)
    seeds = [master.randrange(2**32) for _ in range(count)]
    instances = [sample_instance(random.Random(s), i) for i, s in enumerate(seeds)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(
            tqdm(
                pool.map(lambda instance: _verify_instance(instance, effort), instances),
                total=count,
                desc="Verifying instances",
                disable=not progress,
                file=sys.stderr,
            )
        )
    results = pd.DataFrame(rows, columns=BATCH_COLUMNS)
    matches = int((results["outcome"] == Outcome.MATCH.value).sum()) if count else 0
    logger.info(f"batch of {count} instances (seed {seed}): {matches} matches")
    return results


@dataclass(frozen=True)
class UnitFactor:
    """Cyclic factor of (Z/m)^x coming from the prime-power part q = prime^a"""

    prime: int
    prime_power: int
    order: int
    generator: int


@dataclass(frozen=True)
class CyclotomicLevel:
    modulus: int
    factors: tuple[UnitFactor, ...]

    def __post_init__(self) -> None:
        if self.order != int(totient(self.modulus)):
            raise ValueError(f"unit factors of {self.modulus} do not multiply to its totient")

    @property
    def order(self) -> int:
        result = 1
        for factor in self.factors:
            result *= factor.order
        return result


def _lift(residue: int, prime_power: int, modulus: int) -> int:
    rest = modulus // prime_power
    if rest == 1:
        return residue % modulus
    value, _ = crt([prime_power, rest], [residue % prime_power, 1])
    return int(value)


def _check_modulus(modulus: int) -> None:
    if modulus < 3:
        raise InputFormatError(f"modulus must be at least 3, got {modulus}")


def cyclotomic_level(modulus: int) -> CyclotomicLevel:
    """
    Chinese-remainder decomposition of (Z/m)^x with generators lifted to residues mod m

    Odd prime powers contribute a primitive root; 4 contributes -1; 2^a with a >= 3
    contributes -1 and 5.
    """
    _check_modulus(modulus)
    factors = []
    for prime, exponent in sorted(factorint(modulus).items()):
        prime_power = prime**exponent
        if prime == 2:
            if exponent >= 2:
                factors.append(UnitFactor(2, prime_power, 2, _lift(-1, prime_power, modulus)))
            if exponent >= 3:
                factors.append(
                    UnitFactor(2, prime_power, 2 ** (exponent - 2), _lift(5, prime_power, modulus))
                )
            continue
        root = int(primitive_root(prime_power))
        order = int(totient(prime_power))
        factors.append(UnitFactor(prime, prime_power, order, _lift(root, prime_power, modulus)))
    return CyclotomicLevel(modulus, tuple(factors))


def cyclotomic_quotient(modulus: int, primes: Iterable[int] = ()) -> AbelianInvariants:
    """
    Invariant factors of (Z/m)^x modulo the inertia factors at `primes`

    Raises:
        PrimeNotDividingError: a prime does not divide the modulus
    """
    _check_modulus(modulus)
    chosen = set(primes)
    support = factorint(modulus)
    stray = sorted(p for p in chosen if p not in support)
    if stray:
        raise PrimeNotDividingError(f"{stray} do not divide {modulus}")
    level = cyclotomic_level(modulus)
    names = tuple(f"u{i}" for i in range(len(level.factors)))
    relators = [Word.generator(i) ** factor.order for i, factor in enumerate(level.factors)]
    for i, j in combinations(range(len(names)), 2):
        a, b = Word.generator(i), Word.generator(j)
        relators.append(a * b * a.inverse() * b.inverse())
    relators.extend(
        Word.generator(i) for i, factor in enumerate(level.factors) if factor.prime in chosen
    )
    return abelianization(GroupPresentation(names, tuple(relators)))


def unit_group_invariants(n: int) -> AbelianInvariants:
    """
    Invariant factors of (Z/n)^x by brute force

    For each prime q, the number of solutions of x^(q^k) = 1 grows by a factor q^c_k
    where c_k counts the cyclic q-factors of order at least q^k.
    """
    if n <= 2:
        return AbelianInvariants()
    units = [x for x in range(1, n) if gcd(x, n) == 1]
    exponents: dict[int, list[int]] = {}
    for q, total in factorint(len(units)).items():
        at_least: list[int] = []
        previous = 1
        while sum(at_least) < total:
            count = sum(1 for x in units if pow(x, q ** (len(at_least) + 1), n) == 1)
            at_least.append(_log(count // previous, q))
            previous = count
        exponents[q] = [sum(1 for c in at_least if c > i) for i in range(at_least[0])]
    width = max((len(parts) for parts in exponents.values()), default=0)
    factors = []
    for i in range(width):
        factor = 1
        for q, parts in exponents.items():
            if i < len(parts):
                factor *= q ** parts[i]
        factors.append(factor)
    return AbelianInvariants(tuple(sorted(factors)))


def _log(value: int, base: int) -> int:
    exponent = 0
    while value > 1:
        value //= base
        exponent += 1
    return exponent


@dataclass(frozen=True)
class CyclotomicCheck:
    primes: tuple[int, ...]
    reduced_modulus: int
    quotient: AbelianInvariants
    oracle: AbelianInvariants

    @property
    def consistent(self) -> bool:
        return self.quotient == self.oracle


@dataclass(frozen=True)
class CyclotomicReport:
    modulus: int
    checks: tuple[CyclotomicCheck, ...]

    @property
    def consistent(self) -> bool:
        return all(check.consistent for check in self.checks)


def reduced_modulus(modulus: int, primes: Iterable[int]) -> int:
    """m with its S-part removed"""
    result = modulus
    for prime in set(primes):
        while result % prime == 0:
            result //= prime
    return result


def cyclotomic_check(modulus: int, primes: Iterable[int]) -> CyclotomicCheck:
    chosen = tuple(sorted(set(primes)))
    quotient = cyclotomic_quotient(modulus, chosen)
    m_s = reduced_modulus(modulus, chosen)
    return CyclotomicCheck(chosen, m_s, quotient, unit_group_invariants(m_s))


def cyclotomic_consistency(modulus: int) -> CyclotomicReport:
    """Compare the quotient with the unit group of m_S for every subset S of the support"""
    _check_modulus(modulus)
    support = sorted(factorint(modulus))
    checks = [
        cyclotomic_check(modulus, subset)
        for size in range(len(support) + 1)
        for subset in combinations(support, size)
    ]
    report = CyclotomicReport(modulus, tuple(checks))
    if not report.consistent:
        logger.error(f"cyclotomic inconsistency at modulus {modulus}")
    return report
