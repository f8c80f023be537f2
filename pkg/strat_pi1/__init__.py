"""
strat_pi1: Fundamental groups of stratified models of schemes
"""

from .arith_models import (
    DedekindModel,
    PrimeData,
    batch_verify,
    cyclotomic_consistency,
    cyclotomic_quotient,
    verify_formula,
)
from .decollage import StratifiedSite, accept_site, compute_pi1, validate_site
from .fincat import FiniteCategory, is_cofiltered, is_filtered, rigidity_check
from .fpgroup import (
    Effort,
    GroupHom,
    GroupPresentation,
    Word,
    abelianization,
    colimit,
    is_trivial,
    tietze_simplify,
    todd_coxeter,
)
from .parser import RelatorParser
from .poset import FinitePoset, edge_path_group, order_complex, subdivision
from .utils import load_json, site_from_dict

__all__ = [
    "DedekindModel",
    "Effort",
    "FiniteCategory",
    "FinitePoset",
    "GroupHom",
    "GroupPresentation",
    "PrimeData",
    "RelatorParser",
    "StratifiedSite",
    "Word",
    "abelianization",
    "accept_site",
    "batch_verify",
    "colimit",
    "compute_pi1",
    "cyclotomic_consistency",
    "cyclotomic_quotient",
    "edge_path_group",
    "is_cofiltered",
    "is_filtered",
    "is_trivial",
    "load_json",
    "order_complex",
    "rigidity_check",
    "site_from_dict",
    "subdivision",
    "tietze_simplify",
    "todd_coxeter",
    "validate_site",
    "verify_formula",
]

__version__ = "0.1.0"
