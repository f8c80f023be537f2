"""
Error hierarchy for strat_pi1

Every error carries the CLI exit code it maps to:
2 input error, 3 precondition violation, 4 budget exhausted, 5 internal mismatch.
"""

from typing import Any

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4
EXIT_MISMATCH = 5


class StratPi1Error(ValueError):
    """Base class for all strat_pi1 errors"""

    exit_code = EXIT_INPUT


class InputFormatError(StratPi1Error):
    """A JSON document does not have the expected shape"""


class PosetValidationError(StratPi1Error):
    """Cover relation is cyclic, non-minimal or references unknown elements"""


class EmptyPosetError(StratPi1Error):
    """(Co)directedness was asked of the empty poset"""

    exit_code = EXIT_PRECONDITION


class DisconnectedError(StratPi1Error):
    """The basepoint's component is not the whole space"""

    exit_code = EXIT_PRECONDITION


class RelatorSyntaxError(StratPi1Error):
    """A relator string does not follow the relator grammar"""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PresentationError(StratPi1Error):
    """A presentation or word references invalid generators"""


class CosetEnumerationOverflow(StratPi1Error):
    """Coset enumeration defined more cosets than allowed"""

    exit_code = EXIT_BUDGET

    def __init__(self, max_cosets: int) -> None:
        super().__init__(
            f"coset enumeration exceeded {max_cosets} cosets "
            "(possibly infinite index or insufficient budget)"
        )
        self.max_cosets = max_cosets


class BudgetExhaustedError(StratPi1Error):
    """An effort budget ran out before a conclusive answer"""

    exit_code = EXIT_BUDGET


class NotAHomomorphismError(StratPi1Error):
    """A source relator does not map to the identity"""

    def __init__(self, relator: str, detail: str = "") -> None:
        message = f"not a homomorphism: relator {relator} has nontrivial image"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.relator = relator


class DiagramError(StratPi1Error):
    """A group diagram is malformed (hom endpoints disagree with node groups)"""


class MissingEdgeHomError(DiagramError):
    """A cover pair of the index has no edge homomorphism"""

    def __init__(self, source: str, target: str) -> None:
        super().__init__(f"missing edge homomorphism {source} -> {target}")
        self.source = source
        self.target = target


class CategoryValidationError(StratPi1Error):
    """A composition table violates the category axioms"""

    def __init__(self, message: str, triple: tuple[Any, ...] = ()) -> None:
        if triple:
            message = f"{message}: {triple}"
        super().__init__(message)
        self.triple = triple


class TooLargeError(StratPi1Error):
    """A finite group exceeds the configured size cap"""

    exit_code = EXIT_BUDGET


class UnknownChainKeyError(StratPi1Error):
    """A chain key does not name a chain of the base poset"""


class IndexNotSimplyConnectedError(StratPi1Error):
    """The order complex of the base is not certified simply connected"""

    exit_code = EXIT_PRECONDITION


class BasepointRequiredError(StratPi1Error):
    """The base has no maximum, so a basepoint must be supplied"""

    exit_code = EXIT_PRECONDITION


class SiteValidationError(StratPi1Error):
    """A stratified site has hard validation failures"""

    def __init__(self, findings: list[Any]) -> None:
        lines = "; ".join(str(finding) for finding in findings)
        super().__init__(f"site validation failed: {lines}")
        self.findings = findings


class PrimeNotDividingError(StratPi1Error):
    """A requested prime does not divide the modulus"""
