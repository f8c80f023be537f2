"""
Common test fixtures for strat_pi1 tests
"""

import json

import pytest

from strat_pi1.arith_models import DedekindModel, PrimeData
from strat_pi1.fpgroup import GroupHom, GroupPresentation
from strat_pi1.poset import FinitePoset


@pytest.fixture
def s3():
    """Symmetric group on three letters"""
    return GroupPresentation.from_strings(["s", "t"], ["s^2", "t^3", "(s*t)^2"])


@pytest.fixture
def z2():
    return GroupPresentation.from_strings(["d"], ["d^2"])


@pytest.fixture
def a5():
    """Perfect group of order 60: trivial abelianization, no subgroup of index below 5"""
    return GroupPresentation.from_strings(["a", "b"], ["a^2", "b^3", "(a*b)^5"])


@pytest.fixture
def free2():
    return GroupPresentation.from_strings(["x", "y"])


@pytest.fixture
def star_poset():
    """Two closed points specializing the generic point"""
    return FinitePoset(["p1", "p2", "eta"], [("p1", "eta"), ("p2", "eta")])


@pytest.fixture
def dvr_poset():
    return FinitePoset(["p", "eta"], [("p", "eta")])


@pytest.fixture
def chain_poset():
    return FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.fixture
def crown_poset():
    """Order complex is a square, so its fundamental group is infinite cyclic"""
    return FinitePoset(
        ["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
    )


@pytest.fixture
def dvr_model(s3, z2):
    """G_K = S3 with D = I = <s>"""
    inclusion = GroupHom.from_strings(z2, s3, {"d": "s"})
    return DedekindModel(s3, (PrimeData("p", z2, inclusion, (z2.parse("d"),)),))


@pytest.fixture
def unramified_model(s3, z2):
    """G_K = S3 with D = <s> and trivial inertia"""
    inclusion = GroupHom.from_strings(z2, s3, {"d": "s"})
    return DedekindModel(s3, (PrimeData("p", z2, inclusion, ()),))


@pytest.fixture
def s3_dict():
    return {"generators": ["s", "t"], "relators": ["s^2", "t^3", "(s*t)^2"]}


@pytest.fixture
def dvr_site_dict(s3_dict):
    """Site of the S3 model with D = I = <s>, as read from disk"""
    return {
        "poset": {"elements": ["p", "eta"], "covers": [["p", "eta"]]},
        "strata": {
            "eta": s3_dict,
            "p": {"generators": ["d"], "relators": ["d^2", "d"]},
            "p<eta": {"generators": ["d"], "relators": ["d^2"]},
        },
        "maps": {
            "p<eta -> p": {"d": "d"},
            "p<eta -> eta": {"d": "s"},
        },
    }


@pytest.fixture
def dvr_model_dict(s3_dict):
    return {
        "G_K": s3_dict,
        "primes": [
            {
                "name": "p",
                "D": {"generators": ["d"], "relators": ["d^2"]},
                "incl": {"d": "s"},
                "inertia": ["d"],
            }
        ],
    }


@pytest.fixture
def z2_delooping_dict():
    """One object, the identity and an involution"""
    return {
        "objects": ["*"],
        "morphisms": [{"id": "id", "src": "*", "tgt": "*"}, {"id": "g", "src": "*", "tgt": "*"}],
        "identities": {"*": "id"},
        "compose": [["id", "id", "id"], ["id", "g", "g"], ["g", "id", "g"], ["g", "g", "id"]],
    }


@pytest.fixture
def write_json(tmp_path):
    """Write a document to a temporary JSON file and return its path"""

    def _write(document, name="input.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return _write
