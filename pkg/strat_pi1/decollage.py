"""
Stratified sites and their classifying-space invariants

A site puts a group on every nonempty chain of a finite base poset and a homomorphism
on every one-step containment of chains, from the larger chain's group to the smaller
one's. pi_0 is the component count of the base; pi_1 is the colimit of the group
diagram over the subdivision, simplified by Tietze moves.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

from . import poset as poset_ops
from .exceptions import (
    BasepointRequiredError,
    BudgetExhaustedError,
    DisconnectedError,
    IndexNotSimplyConnectedError,
    NotAHomomorphismError,
    PosetValidationError,
    SiteValidationError,
    UnknownChainKeyError,
)
from .fpgroup import (
    Effort,
    GroupDiagram,
    GroupHom,
    GroupPresentation,
    Orientation,
    TrivialityCertificate,
    Verdict,
    Word,
    colimit,
    compose_homs,
    homs_agree,
    identity_hom,
    is_trivial,
    tietze_reduce,
    tietze_simplify,
    verify_hom,
)
from .poset import CHAIN_SEPARATOR, Chain, FinitePoset

logger = logging.getLogger(__name__)

GENERIC_POINT = "eta"
MAP_ARROW = " -> "

MapKey = tuple[str, str]


class Severity(Enum):
    HARD = "hard"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    """One validation finding about a stratum, map or commuting square"""

    severity: Severity
    kind: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.kind} {self.subject}"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()
    checked_maps: Mapping[MapKey, GroupHom] = field(default_factory=dict)

    @property
    def hard_failures(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.HARD]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.WARNING]

    @property
    def accepted(self) -> bool:
        return not self.hard_failures


def map_key_string(key: MapKey) -> str:
    return f"{key[0]}{MAP_ARROW}{key[1]}"


def parse_map_key(text: str) -> MapKey:
    """Split '<bigchain> -> <smallchain>'"""
    big, arrow, small = text.partition(MAP_ARROW.strip())
    if not arrow or not big.strip() or not small.strip():
        raise UnknownChainKeyError(f"map key {text!r} is not of the form '<big> -> <small>'")
    return big.strip(), small.strip()


@dataclass(frozen=True)
class StratifiedSite:
    """Base poset, a presentation per chain key, a hom per (bigger, smaller) containment"""

    base: FinitePoset
    strata: Mapping[str, GroupPresentation]
    maps: Mapping[MapKey, GroupHom]

    def stratum(self, key: str) -> GroupPresentation:
        return self.strata[key]


def containment_covers(base: FinitePoset) -> list[MapKey]:
    """(bigger, smaller) chain-key pairs for every cover of the subdivision"""
    return sorted((upper, lower) for lower, upper in poset_ops.subdivision(base).covers)


def canonical_chain_key(base: FinitePoset, key: str) -> str:
    try:
        return Chain.from_key(base, key).key
    except PosetValidationError as error:
        raise UnknownChainKeyError(f"{key!r} is not a chain of the base: {error}") from error


def site_from_diagram(
    base: FinitePoset,
    node_groups: Mapping[str, GroupPresentation],
    homs: Mapping[MapKey, GroupHom],
) -> StratifiedSite:
    """
    Assemble a site without validating it

    Chain keys are canonicalized (members in ascending order).

    Raises:
        UnknownChainKeyError: a key does not name a chain of `base`
    """
    strata = {canonical_chain_key(base, key): group for key, group in node_groups.items()}
    maps = {
        (canonical_chain_key(base, big), canonical_chain_key(base, small)): hom
        for (big, small), hom in homs.items()
    }
    return StratifiedSite(base, strata, maps)


def validate_site(site: StratifiedSite, effort: Effort | None = None) -> ValidationReport:
    """
    Check a site for completeness, homomorphisms and commuting squares

    Missing strata or maps, endpoint mismatches, failed homomorphism checks and
    disagreeing composites are hard failures; anything left Unverified by the budget is
    a warning.

    Args:
        site: The site
        effort: Budget for the target enumerations

    Returns:
        ValidationReport carrying every finding and the checked homomorphisms
    """
    effort = effort or Effort()
    findings: list[Finding] = []
    checked: dict[MapKey, GroupHom] = {}
    all_chains = poset_ops.chains(site.base)

    for chain in all_chains:
        if chain.key not in site.strata:
            findings.append(Finding(Severity.HARD, "MissingStratum", chain.key))

    expected = containment_covers(site.base)
    for key in sorted(set(site.maps) - set(expected)):
        findings.append(
            Finding(
                Severity.HARD, "UnexpectedMap", map_key_string(key), "not a one-step containment"
            )
        )

    for key in expected:
        big, small = key
        hom = site.maps.get(key)
        if hom is None:
            findings.append(Finding(Severity.HARD, "MissingEdgeHom", map_key_string(key)))
            continue
        if big not in site.strata or small not in site.strata:
            continue
        if hom.source != site.strata[big] or hom.target != site.strata[small]:
            findings.append(
                Finding(
                    Severity.HARD,
                    "EndpointMismatch",
                    map_key_string(key),
                    "source/target differ from the strata",
                )
            )
            continue
        try:
            verified = verify_hom(hom, effort)
        except NotAHomomorphismError as error:
            findings.append(
                Finding(Severity.HARD, "NotAHomomorphism", map_key_string(key), str(error))
            )
            continue
        if not verified.verified:
            findings.append(
                Finding(Severity.WARNING, "Unverified", map_key_string(key), "target did not close")
            )
        checked[key] = verified

    by_members = {frozenset(chain.members): chain for chain in all_chains}
    for chain in all_chains:
        for bigger in all_chains:
            if len(bigger) != len(chain) + 2 or not chain.issubset(bigger):
                continue
            extra = sorted(set(bigger.members) - set(chain.members))
            middles = [by_members[frozenset(chain.members) | {x}].key for x in extra]
            composites = []
            for middle in middles:
                outer = checked.get((bigger.key, middle))
                inner = checked.get((middle, chain.key))
                if outer is None or inner is None:
                    break
                composites.append(compose_homs(inner, outer))
            if len(composites) != 2:
                continue
            subject = f"{bigger.key} => {chain.key}"
            agree = homs_agree(composites[0], composites[1], effort)
            if agree is False:
                findings.append(
                    Finding(Severity.HARD, "CompositeDisagreement", subject, f"via {middles}")
                )
            elif agree is None:
                findings.append(
                    Finding(
                        Severity.WARNING, "UnverifiedComposite", subject, "target did not close"
                    )
                )

    report = ValidationReport(tuple(findings), checked)
    logger.info(
        f"site validation: {len(report.hard_failures)} hard failures, "
        f"{len(report.warnings)} warnings"
    )
    return report


def accept_site(site: StratifiedSite, effort: Effort | None = None) -> StratifiedSite:
    """
    Validate a site and return it with every checked map carrying its status

    Raises:
        SiteValidationError: when the report has hard failures
    """
    report = validate_site(site, effort)
    if not report.accepted:
        raise SiteValidationError(report.hard_failures)
    return replace(site, maps={**site.maps, **report.checked_maps})


def classifying_pi0(site: StratifiedSite) -> int:
    """Number of path components of the classifying space"""
    return len(poset_ops.connected_components(site.base))


def default_basepoint(base: FinitePoset) -> str:
    """
    The unique maximal element of the base

    Raises:
        BasepointRequiredError: when there is no unique maximum
    """
    maxima = sorted(poset_ops.maximal_elements(base))
    if len(maxima) != 1:
        raise BasepointRequiredError(
            f"base has {len(maxima)} maximal elements; pass a basepoint explicitly"
        )
    return maxima[0]


def index_certificate(
    base: FinitePoset, basepoint: str, effort: Effort | None = None
) -> TrivialityCertificate:
    """Triviality certificate for the fundamental group of the base's order complex"""
    effort = effort or Effort()
    complex_ = poset_ops.order_complex(base, max_size=3)
    group = poset_ops.edge_path_group(complex_, basepoint)
    return is_trivial(tietze_simplify(group, effort.tietze_passes), effort)


@dataclass(frozen=True)
class Pi1Computation:
    """Raw colimit, simplified presentation and the words expressing one in the other"""

    basepoint: str
    raw: GroupPresentation
    simplified: GroupPresentation
    substitutions: tuple[Word, ...]
    index_certificate: TrivialityCertificate


def compute_pi1(
    site: StratifiedSite,
    basepoint: str | None = None,
    effort: Effort | None = None,
    override_index_check: bool = False,
) -> Pi1Computation:
    """
    Fundamental group of the classifying space by the subdivision colimit

    Args:
        site: The site
        basepoint: Element of the base whose stratum keeps its generator names;
            defaults to the unique maximum
        effort: Budgets for the index certificate and the Tietze passes
        override_index_check: Proceed even if the base's order complex is not
            certified simply connected

    Returns:
        Pi1Computation

    Raises:
        DisconnectedError: empty or disconnected base, or unknown basepoint
        BasepointRequiredError: no basepoint given and no unique maximum
        IndexNotSimplyConnectedError: certificate NonTrivial and no override
        BudgetExhaustedError: certificate Unknown and no override
        MissingEdgeHomError: a containment has no map
    """
    effort = effort or Effort()
    base = site.base
    if not len(base):
        raise DisconnectedError("the empty base has no basepoint")
    components = poset_ops.connected_components(base)
    if len(components) != 1:
        raise DisconnectedError(f"base has {len(components)} connected components")
    if basepoint is None:
        basepoint = default_basepoint(base)
    if basepoint not in base:
        raise DisconnectedError(f"basepoint {basepoint} is not an element of the base")

    certificate = index_certificate(base, basepoint, effort)
    if certificate.verdict is not Verdict.TRIVIAL:
        if override_index_check:
            logger.warning(f"index check overridden ({certificate.summary()})")
        elif certificate.verdict is Verdict.UNKNOWN:
            raise BudgetExhaustedError(
                f"order complex of the base could not be certified: {certificate.summary()}"
            )
        else:
            raise IndexNotSimplyConnectedError(
                f"order complex of the base is not certified simply connected: "
                f"{certificate.summary()}"
            )

    diagram = GroupDiagram(
        index=poset_ops.subdivision(base),
        node_groups=site.strata,
        edge_homs=site.maps,
        orientation=Orientation.CONTRAVARIANT,
    )
    raw = colimit(diagram, keep_names_of=basepoint)
    protected = site.strata[basepoint].generators if basepoint in site.strata else ()
    reduced = tietze_reduce(raw, effort.tietze_passes, protected)
    logger.info(
        f"pi1 at {basepoint}: colimit with {raw.rank} generators simplified to "
        f"{reduced.presentation.rank}"
    )
    return Pi1Computation(basepoint, raw, reduced.presentation, reduced.substitutions, certificate)


def classifying_pi1(
    site: StratifiedSite,
    basepoint: str | None = None,
    effort: Effort | None = None,
    override_index_check: bool = False,
) -> GroupPresentation:
    """Simplified presentation of pi_1 at `basepoint` (see compute_pi1)"""
    return compute_pi1(site, basepoint, effort, override_index_check).simplified


def constant_site(base: FinitePoset, group: GroupPresentation) -> StratifiedSite:
    """Every stratum `group`, every map the identity"""
    strata = {chain.key: group for chain in poset_ops.chains(base)}
    maps = {key: identity_hom(group) for key in containment_covers(base)}
    return StratifiedSite(base, strata, maps)


def _retag(key: str, tag: str) -> str:
    return CHAIN_SEPARATOR.join(f"{tag}.{member}" for member in key.split(CHAIN_SEPARATOR))


def disjoint_union(
    first: StratifiedSite, second: StratifiedSite, tags: Sequence[str] = ("a", "b")
) -> StratifiedSite:
    """Site over the disjoint union of the bases, element ids prefixed by the tags"""
    base = poset_ops.disjoint_union(first.base, second.base, tags)
    strata: dict[str, GroupPresentation] = {}
    maps: dict[MapKey, GroupHom] = {}
    for tag, site in zip(tags, (first, second), strict=True):
        strata.update({_retag(key, tag): group for key, group in site.strata.items()})
        maps.update(
            {(_retag(big, tag), _retag(small, tag)): hom for (big, small), hom in site.maps.items()}
        )
    return StratifiedSite(base, strata, maps)

