"""
Utility functions for reading and writing strat_pi1 documents
"""

import json
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import pandas as pd

from .arith_models import DedekindModel, PrimeData
from .decollage import StratifiedSite, canonical_chain_key, parse_map_key, site_from_diagram
from .exceptions import InputFormatError
from .fincat import FiniteCategory
from .fpgroup import (
    AbelianInvariants,
    GroupHom,
    GroupPresentation,
    TrivialityCertificate,
    Verdict,
)
from .poset import FinitePoset

logger = logging.getLogger(__name__)

SCHEMA = "strat-pi1/1"


def load_json(filepath: str | Path) -> Any:
    """
    Load a JSON document

    Args:
        filepath: Path to the JSON file

    Returns:
        The decoded document

    Raises:
        InputFormatError: missing file or malformed JSON
    """
    path = Path(filepath)
    if not path.exists():
        raise InputFormatError(f"file not found: {filepath}")
    try:
        with path.open(encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{filepath} is not valid JSON: {e}") from e


def dump_json(document: Mapping[str, Any]) -> str:
    """Serialize with sorted keys so identical reports are byte-identical"""
    return json.dumps({"schema": SCHEMA, **document}, sort_keys=True, indent=2)


def _field(data: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(data, dict):
        raise InputFormatError(f"{where} must be a JSON object")
    if key not in data:
        raise InputFormatError(f"{where} is missing '{key}'")
    value = data[key]
    if not isinstance(value, kind):
        raise InputFormatError(f"{where}.{key} must be a {kind.__name__}")
    return value


def poset_from_dict(data: Any) -> FinitePoset:
    """Poset from {"elements": [...], "covers": [[a, b], ...]}"""
    elements = _field(data, "elements", list, "poset")
    covers = data.get("covers", [])
    if not isinstance(covers, list) or not all(
        isinstance(pair, list) and len(pair) == 2 for pair in covers
    ):
        raise InputFormatError("poset.covers must be a list of [lower, upper] pairs")
    return FinitePoset(elements, [tuple(pair) for pair in covers])


def poset_to_dict(poset: FinitePoset) -> dict[str, Any]:
    return {
        "elements": list(poset.elements),
        "covers": [list(pair) for pair in sorted(poset.covers)],
    }


def group_from_dict(data: Any, where: str = "group") -> GroupPresentation:
    """Presentation from {"generators": [...], "relators": ["s^2", ...]}"""
    generators = _field(data, "generators", list, where)
    relators = data.get("relators", [])
    if not isinstance(relators, list):
        raise InputFormatError(f"{where}.relators must be a list")
    return GroupPresentation.from_strings(generators, relators)


def group_to_dict(group: GroupPresentation) -> dict[str, Any]:
    return {"generators": list(group.generators), "relators": group.relator_strings()}


def hom_from_dict(
    source: GroupPresentation, target: GroupPresentation, mapping: Any, where: str = "map"
) -> GroupHom:
    if not isinstance(mapping, dict):
        raise InputFormatError(f"{where} must map generator names to words")
    return GroupHom.from_strings(source, target, mapping)


def site_from_dict(data: Any) -> StratifiedSite:
    """
    Site from {"poset": ..., "strata": {chain key: group}, "maps": {"big -> small": {...}}}

    Returns:
        The unvalidated site
    """
    base = poset_from_dict(_field(data, "poset", dict, "site"))
    raw_strata = _field(data, "strata", dict, "site")
    raw_maps = data.get("maps", {})
    if not isinstance(raw_maps, dict):
        raise InputFormatError("site.maps must be an object")

    strata = {
        canonical_chain_key(base, key): group_from_dict(value, f"strata[{key}]")
        for key, value in raw_strata.items()
    }
    homs = {}
    for text, mapping in raw_maps.items():
        big, small = (canonical_chain_key(base, key) for key in parse_map_key(text))
        if big not in strata or small not in strata:
            raise InputFormatError(f"map {text!r} connects chains without strata")
        homs[(big, small)] = hom_from_dict(strata[big], strata[small], mapping, f"maps[{text}]")
    return site_from_diagram(base, strata, homs)


def category_from_dict(data: Any) -> FiniteCategory:
    """
    Category from objects, morphisms, identities and compose triples

    A compose triple [f, g, h] means g after f equals h.
    """
    objects = _field(data, "objects", list, "category")
    morphisms = {}
    for entry in _field(data, "morphisms", list, "category"):
        morphism = _field(entry, "id", str, "morphism")
        if morphism in morphisms:
            raise InputFormatError(f"duplicate morphism id {morphism}")
        source = _field(entry, "src", str, "morphism")
        morphisms[morphism] = (source, _field(entry, "tgt", str, "morphism"))
    identities = _field(data, "identities", dict, "category")
    compose = {}
    for triple in _field(data, "compose", list, "category"):
        if not isinstance(triple, list) or len(triple) != 3:
            raise InputFormatError(f"compose entries must be [f, g, h] triples, got {triple!r}")
        f, g, h = triple
        compose[(f, g)] = h
    return FiniteCategory(objects, morphisms, identities, compose)


def category_to_dict(category: FiniteCategory) -> dict[str, Any]:
    return {
        "objects": list(category.objects),
        "morphisms": [
            {"id": m, "src": s, "tgt": t} for m, (s, t) in sorted(category.morphisms.items())
        ],
        "identities": dict(category.identities),
        "compose": [[f, g, h] for (f, g), h in sorted(category.compose_table.items())],
    }


def model_from_dict(data: Any) -> DedekindModel:
    """Dedekind model from {"G_K": group, "primes": [{"name", "D", "incl", "inertia"}]}"""
    galois = group_from_dict(_field(data, "G_K", dict, "model"), "G_K")
    primes = []
    for entry in data.get("primes", []):
        name = _field(entry, "name", str, "prime")
        decomposition = group_from_dict(_field(entry, "D", dict, f"prime {name}"), f"{name}.D")
        inclusion = hom_from_dict(decomposition, galois, entry.get("incl", {}), f"{name}.incl")
        inertia = entry.get("inertia", [])
        if not isinstance(inertia, list):
            raise InputFormatError(f"{name}.inertia must be a list of words")
        primes.append(
            PrimeData(
                name, decomposition, inclusion, tuple(decomposition.parse(w) for w in inertia)
            )
        )
    return DedekindModel(galois, tuple(primes))


def invariants_to_dict(invariants: AbelianInvariants) -> dict[str, Any]:
    return {"factors": list(invariants.factors), "text": str(invariants)}


def certificate_to_dict(certificate: TrivialityCertificate) -> dict[str, Any]:
    """Verdict plus the evidence needed to re-check it"""
    result: dict[str, Any] = {"verdict": certificate.verdict.value, "detail": certificate.detail}
    if certificate.coset_table is not None:
        result["cosets"] = certificate.coset_table.index
    if certificate.abelian_invariants is not None:
        result["abelianization"] = invariants_to_dict(certificate.abelian_invariants)
    if certificate.witness is not None:
        result["witness"] = {
            "degree": certificate.witness.degree,
            "images": [list(image) for image in certificate.witness.images],
        }
    if certificate.verdict is Verdict.UNKNOWN and certificate.effort is not None:
        result["effort"] = {
            "max_cosets": certificate.effort.max_cosets,
            "max_degree": certificate.effort.max_degree,
        }
    return result


def export_report_to_csv(report: pd.DataFrame, filepath: str) -> None:
    """
    Export a batch report to CSV file

    Args:
        report: DataFrame with one row per instance
        filepath: Path to save CSV file
    """
    try:
        report.to_csv(filepath, index=False)
        logger.info(f"Exported {len(report)} rows to {filepath}")
    except OSError as e:
        logger.error(f"Error exporting report to CSV: {e}")
        raise InputFormatError(f"cannot write {filepath}: {e}") from e
