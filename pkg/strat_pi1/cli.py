"""
Command-line interface for strat_pi1
"""

import argparse
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd

from .arith_models import (
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    Outcome,
    batch_verify,
    cyclotomic_check,
    verify_formula,
)
from .decollage import classifying_pi0, compute_pi1, index_certificate, validate_site
from .exceptions import (
    EXIT_BUDGET,
    EXIT_MISMATCH,
    EXIT_OK,
    InputFormatError,
    SiteValidationError,
    StratPi1Error,
)
from .fincat import (
    has_initial,
    has_terminal,
    is_cofiltered,
    is_filtered,
    rigidity_check,
    weakly_initial,
    weakly_terminal,
)
from .fpgroup import (
    Effort,
    Verdict,
    abelianization,
    is_trivial,
    tietze_simplify,
    todd_coxeter,
)
from .poset import (
    connected_components,
    is_codirected,
    is_directed,
    is_w_local,
    maximal_elements,
    minimal_elements,
    subdivision,
)
from .utils import (
    category_from_dict,
    certificate_to_dict,
    dump_json,
    export_report_to_csv,
    group_from_dict,
    group_to_dict,
    invariants_to_dict,
    load_json,
    model_from_dict,
    poset_from_dict,
    site_from_dict,
)

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def setup_logging(level: str = "INFO") -> None:
    """
    Set up logging configuration

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO

    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def positive_int(text: str) -> int:
    """argparse type for strictly positive budgets"""
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from e
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Effort budgets and output options for one invocation"""

    effort: Effort = field(default_factory=Effort)
    output_mode: str = "text"
    override_index_check: bool = False
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    log_level: str = "WARNING"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            effort=Effort(args.effort_cosets, args.effort_degree, args.tietze_passes),
            output_mode="json" if args.json else "text",
            override_index_check=args.override_index_check,
            seed=args.seed,
            workers=args.workers,
            log_level=args.log_level,
        )

    @property
    def json_output(self) -> bool:
        return self.output_mode == "json"


def emit(config: RunConfig, lines: list[str], document: dict[str, Any]) -> None:
    """Print the text lines or the JSON document, depending on the output mode"""
    if config.json_output:
        print(dump_json(document))
    else:
        for line in lines:
            print(line)


def _yes_no(value: bool) -> str:
    return "true" if value else "false"


def _names(items: Any) -> str:
    return ", ".join(sorted(items)) if items else "none"


def cmd_poset(args: argparse.Namespace, config: RunConfig) -> int:
    """
    Report the order-theoretic predicates of a poset

    Args:
        args: Command-line arguments
        config: Run configuration

    Returns:
        Exit code
    """
    poset = poset_from_dict(load_json(args.file))
    components = connected_components(poset)
    directed = is_directed(poset) if len(poset) else False
    codirected = is_codirected(poset) if len(poset) else False
    certificate = None
    if len(components) == 1:
        certificate = index_certificate(poset, sorted(poset.elements)[0], config.effort)

    lines = [
        f"elements: {len(poset)}",
        f"maximal: {_names(maximal_elements(poset))}",
        f"minimal: {_names(minimal_elements(poset))}",
        f"directed: {_yes_no(directed)}" + (" (irreducible model)" if directed else ""),
        f"codirected: {_yes_no(codirected)}" + (" (local model)" if codirected else ""),
        f"w-local: {_yes_no(is_w_local(poset))}",
        f"components: {len(components)}",
        f"subdivision: {len(subdivision(poset))} elements",
        "order-complex pi1: "
        + (certificate.summary() if certificate else f"n/a ({len(components)} components)"),
    ]
    document = {
        "elements": len(poset),
        "maximal": sorted(maximal_elements(poset)),
        "minimal": sorted(minimal_elements(poset)),
        "directed": directed,
        "codirected": codirected,
        "w_local": is_w_local(poset),
        "components": [sorted(c) for c in components],
        "subdivision_size": len(subdivision(poset)),
        "order_complex_pi1": certificate_to_dict(certificate) if certificate else None,
    }
    emit(config, lines, document)
    if certificate is not None and certificate.verdict is Verdict.UNKNOWN:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_pi1(args: argparse.Namespace, config: RunConfig) -> int:
    """Fundamental group of a site's classifying space"""
    site = site_from_dict(load_json(args.file))
    report = validate_site(site, config.effort)
    for finding in report.warnings:
        logger.warning(str(finding))
    if not report.accepted:
        raise SiteValidationError(report.hard_failures)

    computation = compute_pi1(site, args.basepoint, config.effort, config.override_index_check)
    group = computation.simplified
    invariants = abelianization(group)
    certificate = is_trivial(group, config.effort)
    order = certificate.coset_table.index if certificate.coset_table is not None else None

    verdict = certificate.verdict.value
    lines = [
        f"basepoint: {computation.basepoint}",
        f"components: {classifying_pi0(site)}",
        f"presentation: {group}",
        f"abelianization: {invariants}",
        f"certificate: {certificate.summary()}",
        f"pi1: {verdict}" + (f" (order {order})" if order is not None else ""),
    ]
    document = {
        "basepoint": computation.basepoint,
        "components": classifying_pi0(site),
        "presentation": group_to_dict(group),
        "abelianization": invariants_to_dict(invariants),
        "certificate": certificate_to_dict(certificate),
        "order": order,
        "warnings": [str(finding) for finding in report.warnings],
    }
    emit(config, lines, document)
    return EXIT_BUDGET if certificate.verdict is Verdict.UNKNOWN else EXIT_OK


def _records(report: pd.DataFrame) -> list[dict[str, Any]]:
    records = []
    for row in report.to_dict(orient="records"):
        clean = {}
        for key, value in row.items():
            if value is None or (isinstance(value, float) and np.isnan(value)):
                clean[key] = None
            elif isinstance(value, np.bool_ | bool):
                clean[key] = bool(value)
            elif isinstance(value, np.integer | float):
                clean[key] = int(value)
            else:
                clean[key] = value
        records.append(clean)
    return records


def _outcome_exit_code(outcomes: list[str]) -> int:
    if Outcome.MISMATCH.value in outcomes:
        return EXIT_MISMATCH
    if Outcome.INCONCLUSIVE.value in outcomes:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_dedekind_verify(args: argparse.Namespace, config: RunConfig) -> int:
    """Check the quotient formula on one model file or on a sampled batch"""
    if args.batch:
        report = batch_verify(
            config.seed,
            args.batch,
            config.effort,
            config.workers,
            progress=not config.json_output,
        )
        if args.output:
            export_report_to_csv(report, args.output)
        outcomes = list(report["outcome"])
        matches = outcomes.count(Outcome.MATCH.value)
        lines = [
            f"instance {row.instance}: {row.outcome} ({row.group}, pipeline order "
            f"{row.order_pipeline}, oracle {row.order_oracle})"
            for row in report.itertuples()
        ]
        lines.append(f"{matches}/{len(outcomes)} matches (seed {config.seed})")
        emit(config, lines, {"seed": config.seed, "instances": _records(report)})
        return _outcome_exit_code(outcomes)

    if not args.file:
        raise InputFormatError("dedekind verify needs a model file or --batch N")
    model = model_from_dict(load_json(args.file))
    result = verify_formula(model, config.effort)
    lines = [
        f"outcome: {result.outcome.value}",
        f"pipeline: {result.pipeline} (order {result.order_pipeline})",
        f"expected: {result.expected} (order {result.order_expected})",
    ]
    if result.detail:
        lines.append(f"detail: {result.detail}")
    document: dict[str, Any] = {
        "outcome": result.outcome.value,
        "pipeline": group_to_dict(result.pipeline),
        "expected": group_to_dict(result.expected),
        "order_pipeline": result.order_pipeline,
        "order_expected": result.order_expected,
        "detail": result.detail,
    }
    for direction, hom in (("forward", result.forward), ("backward", result.backward)):
        if hom is not None:
            document[direction] = {"images": hom.describe(), "status": hom.status.value}
    emit(config, lines, document)
    return _outcome_exit_code([result.outcome.value])


def _parse_primes(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InputFormatError(f"--primes must be comma-separated integers: {text}") from e


def cmd_cyclotomic(args: argparse.Namespace, config: RunConfig) -> int:
    """Unit group of Z/m modulo the inertia factors at the given primes"""
    check = cyclotomic_check(args.modulus, _parse_primes(args.primes))
    status = "consistent" if check.consistent else "INCONSISTENT"
    line = str(check.quotient)
    if check.reduced_modulus >= 3:
        line = f"{line}  [= (Z/{check.reduced_modulus})×: {status}]"
    document = {
        "modulus": args.modulus,
        "primes": list(check.primes),
        "quotient": invariants_to_dict(check.quotient),
        "reduced_modulus": check.reduced_modulus,
        "oracle": invariants_to_dict(check.oracle),
        "consistent": check.consistent,
    }
    emit(config, [line], document)
    return EXIT_OK if check.consistent else EXIT_MISMATCH


def cmd_cat(args: argparse.Namespace, config: RunConfig) -> int:
    """Predicate table of a finite category"""
    category = category_from_dict(load_json(args.file))
    terminal = has_terminal(category)
    initial = has_initial(category)
    rigidity = rigidity_check(category)
    if not rigidity.hypothesis:
        rigidity_text = "hypothesis false (vacuous pass)"
    elif rigidity.counterexample:
        rigidity_text = "COUNTEREXAMPLE"
    else:
        rigidity_text = f"hypothesis true, conclusion true (terminal {rigidity.terminal})"
    lines = [
        f"terminal: {terminal or 'none'}",
        f"initial: {initial or 'none'}",
        f"weakly terminal: {_names(weakly_terminal(category))}",
        f"weakly initial: {_names(weakly_initial(category))}",
        f"filtered: {_yes_no(is_filtered(category))}",
        f"cofiltered: {_yes_no(is_cofiltered(category))}",
        f"rigidity: {rigidity_text}",
    ]
    document = {
        "terminal": terminal,
        "initial": initial,
        "weakly_terminal": sorted(weakly_terminal(category)),
        "weakly_initial": sorted(weakly_initial(category)),
        "filtered": is_filtered(category),
        "cofiltered": is_cofiltered(category),
        "rigidity": {
            "hypothesis": rigidity.hypothesis,
            "conclusion": rigidity.conclusion,
            "counterexample": rigidity.counterexample,
        },
    }
    emit(config, lines, document)
    return EXIT_MISMATCH if rigidity.counterexample else EXIT_OK


def cmd_group(args: argparse.Namespace, config: RunConfig) -> int:
    """Run one group computation on a presentation file"""
    group = group_from_dict(load_json(args.file))
    if args.group_command == "abelianize":
        invariants = abelianization(group)
        emit(config, [str(invariants)], {"abelianization": invariants_to_dict(invariants)})
        return EXIT_OK
    if args.group_command == "simplify":
        simplified = tietze_simplify(group, config.effort.tietze_passes)
        emit(config, [str(simplified)], {"presentation": group_to_dict(simplified)})
        return EXIT_OK
    if args.group_command == "tc":
        subgroup = [group.parse(word) for word in args.subgroup or []]
        table = todd_coxeter(group, subgroup, config.effort.max_cosets)
        emit(
            config,
            [f"index {table.index}"],
            {"index": table.index, "subgroup": list(args.subgroup or [])},
        )
        return EXIT_OK
    certificate = is_trivial(group, config.effort)
    emit(config, [certificate.summary()], {"certificate": certificate_to_dict(certificate)})
    return EXIT_BUDGET if certificate.verdict is Verdict.UNKNOWN else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with all subcommands and global options"""
    parser = argparse.ArgumentParser(
        description="Fundamental groups of stratified models of schemes"
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    poset_parser = subparsers.add_parser("poset", help="Order predicates of a poset")
    poset_parser.add_argument("file", help="Poset JSON file")

    pi1_parser = subparsers.add_parser("pi1", help="Fundamental group of a stratified site")
    pi1_parser.add_argument("file", help="Site JSON file")
    pi1_parser.add_argument("-b", "--basepoint", help="Base element (default: the maximum)")

    dedekind_parser = subparsers.add_parser("dedekind", help="Dedekind-domain models")
    dedekind_sub = dedekind_parser.add_subparsers(dest="dedekind_command", required=True)
    verify_parser = dedekind_sub.add_parser("verify", help="Check the quotient formula")
    verify_parser.add_argument("file", nargs="?", help="Model JSON file")
    verify_parser.add_argument("--batch", type=positive_int, help="Verify N sampled instances")
    verify_parser.add_argument("-o", "--output", help="Output CSV file for the batch report")

    cyclotomic_parser = subparsers.add_parser("cyclotomic", help="Cyclotomic inertia quotients")
    cyclotomic_parser.add_argument("--modulus", type=int, required=True, help="Modulus m >= 3")
    cyclotomic_parser.add_argument("--primes", help="Comma-separated primes dividing m")

    cat_parser = subparsers.add_parser("cat", help="Predicates of a finite category")
    cat_parser.add_argument("file", help="Category JSON file")

    group_parser = subparsers.add_parser("group", help="Computations on one presentation")
    group_parser.add_argument(
        "group_command", choices=["abelianize", "simplify", "tc", "istrivial"]
    )
    group_parser.add_argument("file", help="Group JSON file")
    group_parser.add_argument(
        "--subgroup", action="append", help="Subgroup generator word for tc (repeatable)"
    )

    # Common options
    parser.add_argument("--json", action="store_true", help="Emit JSON reports")
    parser.add_argument("--effort-cosets", type=positive_int, default=Effort().max_cosets)
    parser.add_argument("--effort-degree", type=positive_int, default=Effort().max_degree)
    parser.add_argument("--tietze-passes", type=positive_int, default=Effort().tietze_passes)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for sampling")
    parser.add_argument(
        "--workers", type=positive_int, default=DEFAULT_WORKERS, help="Batch worker threads"
    )
    parser.add_argument(
        "--override-index-check",
        action="store_true",
        help="Compute pi1 even if the base is not certified simply connected",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=LOG_LEVELS,
        help="Set the logging level",
    )
    return parser


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "poset": cmd_poset,
    "pi1": cmd_pi1,
    "dedekind": cmd_dedekind_verify,
    "cyclotomic": cmd_cyclotomic,
    "cat": cmd_cat,
    "group": cmd_group,
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Set up logging
    setup_logging(args.log_level)

    handler = COMMANDS.get(args.command)
    if handler is None:
        parser.print_help()
        return EXIT_OK

    config = RunConfig.from_args(args)
    try:
        return handler(args, config)
    except StratPi1Error as e:
        logger.error(str(e))
        if config.json_output:
            print(
                dump_json(
                    {
                        "error": {
                            "kind": type(e).__name__,
                            "message": str(e),
                            "exit_code": e.exit_code,
                        }
                    }
                )
            )
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
