"""Command-line front end.

Subcommands: dims, series, closed-form, stabilizer, witness and verify.
Records go to stdout as aligned text, newline-delimited JSON or CSV; logs
go to stderr. Exit codes: 0 success, 1 verification failure, 2 bad usage.
"""

import argparse
import csv
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any, Literal, TextIO

from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from jetmoduli import __version__
from jetmoduli.records import (
    CLOSED_FORM_REF,
    DIMS_REF,
    SERIES_REF,
    WITNESS_FIRST_ORDER_REF,
    WITNESS_GAMMA_REF,
    closed_form_record,
    dims_records,
    series_record,
    stabilizer_records,
    witness_record,
)
from jetmoduli.stabilizer import GENERIC_STABILIZER_REF
from jetmoduli.utils.config import get_settings
from jetmoduli.utils.errors import (
    EXIT_OK,
    EXIT_USAGE,
    VerificationError,
    client_safe_error,
    exit_code_for,
)
from jetmoduli.utils.responses import dumps_record, error_response, to_jsonable
from jetmoduli.utils.validation import (
    VALID_OUTPUT_FORMATS,
    OutputFormat,
    validate_coeff_range,
    validate_dimension,
    validate_order,
    validate_seeds,
    validate_terms,
    validate_witness_name,
)
from jetmoduli.verify import VERIFY_REF, CheckResult, require_all_passed, run_verification

logger = logging.getLogger(__name__)

Subcommand = Literal["dims", "series", "closed-form", "stabilizer", "witness", "verify"]

_NEEDS_N: frozenset[str] = frozenset({"dims", "series", "closed-form", "stabilizer"})

_SUBCOMMAND_REFS: dict[str, str] = {
    "dims": DIMS_REF,
    "series": SERIES_REF,
    "closed-form": CLOSED_FORM_REF,
    "stabilizer": GENERIC_STABILIZER_REF,
    "verify": VERIFY_REF,
}


def _subcommand_ref(subcommand: str, witness: str = "gamma") -> str:
    if subcommand == "witness":
        return WITNESS_FIRST_ORDER_REF if witness == "n2-first-order" else WITNESS_GAMMA_REF
    return _SUBCOMMAND_REFS.get(subcommand, "")


# =============================================================================
# Configuration
# =============================================================================


class CliConfig(BaseModel):
    """Parsed and validated command line."""

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    n: int | None = None
    k: int = 0
    terms: int = 10
    seeds: int = 5
    seed: int = 0
    coeff_range: int = 10
    format: OutputFormat = "text"
    witness: str = "gamma"
    deep: bool = False

    @field_validator("n")
    @classmethod
    def _check_n(cls, v: int | None) -> int | None:
        return None if v is None else validate_dimension(v)

    @field_validator("k")
    @classmethod
    def _check_k(cls, v: int) -> int:
        return validate_order(v)

    @field_validator("terms")
    @classmethod
    def _check_terms(cls, v: int) -> int:
        return validate_terms(v)

    @field_validator("seeds")
    @classmethod
    def _check_seeds(cls, v: int) -> int:
        return validate_seeds(v)

    @field_validator("seed")
    @classmethod
    def _check_seed(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"seed must be >= 0, got {v}")
        return v

    @field_validator("coeff_range")
    @classmethod
    def _check_coeff_range(cls, v: int) -> int:
        return validate_coeff_range(v)

    @field_validator("witness")
    @classmethod
    def _check_witness(cls, v: str) -> str:
        return validate_witness_name(v)

    @model_validator(mode="after")
    def _check_required(self) -> "CliConfig":
        if self.subcommand in _NEEDS_N and self.n is None:
            raise ValueError(f"{self.subcommand} requires --n")
        return self

    @property
    def seed_list(self) -> list[int]:
        return [self.seed + i for i in range(self.seeds)]


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="jetmoduli",
        description="Moduli of jets of general affine connections, computed exactly.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format",
            choices=VALID_OUTPUT_FORMATS,
            default="text",
            help="Output format (default: text)",
        )

    dims_p = subparsers.add_parser("dims", help="Jet, orbit and moduli dimensions for orders 0..k")
    dims_p.add_argument("--n", type=int, required=True, help="Number of variables")
    dims_p.add_argument("--k", type=int, default=0, help="Largest jet order")
    common(dims_p)

    series_p = subparsers.add_parser("series", help="Coefficients of the Poincare series")
    series_p.add_argument("--n", type=int, required=True)
    series_p.add_argument("--terms", type=int, default=10, help="Number of coefficients")
    common(series_p)

    closed_p = subparsers.add_parser(
        "closed-form", help="The Poincare series as a rational function"
    )
    closed_p.add_argument("--n", type=int, required=True)
    common(closed_p)

    stab_p = subparsers.add_parser(
        "stabilizer", help="Empirical stabilizer and orbit dimensions at random jets"
    )
    stab_p.add_argument("--n", type=int, required=True)
    stab_p.add_argument("--k", type=int, default=0)
    stab_p.add_argument("--seeds", type=int, default=settings.JETMODULI_SEEDS)
    stab_p.add_argument("--seed", type=int, default=settings.JETMODULI_BASE_SEED, help="First seed")
    stab_p.add_argument("--coeff-range", type=int, default=settings.JETMODULI_COEFF_RANGE)
    common(stab_p)

    witness_p = subparsers.add_parser("witness", help="Dump a witness jet and its stabilizer system")
    witness_p.add_argument("--name", dest="witness", default="gamma", help="gamma or n2-first-order")
    witness_p.add_argument("--n", type=int, default=None, help="Dimension for the gamma witness")
    common(witness_p)

    verify_p = subparsers.add_parser("verify", help="Run the acceptance suite")
    verify_p.add_argument(
        "--deep",
        action="store_true",
        default=settings.JETMODULI_VERIFY_DEEP,
        help="Extend the empirical checks to n=4, k=2",
    )
    verify_p.add_argument("--seeds", type=int, default=settings.JETMODULI_SEEDS)
    verify_p.add_argument("--seed", type=int, default=settings.JETMODULI_BASE_SEED)
    verify_p.add_argument("--coeff-range", type=int, default=settings.JETMODULI_COEFF_RANGE)
    common(verify_p)

    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    return CliConfig(**values)


# =============================================================================
# Output
# =============================================================================


def _table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [[str(to_jsonable(c)) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths, strict=True)) for r in cells]
    return "\n".join(line.rstrip() for line in lines)


def _write_json(records: Sequence[dict[str, Any]], out: TextIO) -> None:
    for record in records:
        out.write(dumps_record(record) + "\n")


def _write_csv(headers: Sequence[str], rows: Sequence[Sequence[Any]], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([to_jsonable(c) for c in row])


def _emit(
    config: CliConfig,
    records: Sequence[dict[str, Any]],
    headers: Sequence[str],
    rows: Sequence[Sequence[Any]],
    text: Callable[[], str],
    out: TextIO,
) -> None:
    if config.format == "json":
        _write_json(records, out)
    elif config.format == "csv":
        _write_csv(headers, rows, out)
    else:
        out.write(text() + "\n")


def _format_term(c: Any, body: str, first: bool) -> str:
    value = to_jsonable(c)
    text = str(value)
    negative = text.startswith("-")
    magnitude = text[1:] if negative else text
    piece = f"{magnitude}{body}" if body else magnitude
    if first:
        return f"-{piece}" if negative else piece
    return f" - {piece}" if negative else f" + {piece}"


def partial_fraction_text(record: dict[str, Any]) -> str:
    """Human form of the partial-fraction representation, highest pole first."""
    parts: list[tuple[Any, str]] = []
    poly = record["polynomial_part"]
    for p, c in enumerate(poly):
        if c:
            parts.append((c, "" if p == 0 else "*t"))
    for j in sorted(record["pole_part"], key=int, reverse=True):
        c = record["pole_part"][j]
        if c:
            body = "/(1-t)" if j == "1" else f"/(1-t)^{j}"
            parts.append((c, body))
    if not parts:
        return "0"
    return "".join(_format_term(c, body, i == 0) for i, (c, body) in enumerate(parts))


# =============================================================================
# Subcommands
# =============================================================================


def _run_dims(config: CliConfig, out: TextIO) -> int:
    assert config.n is not None
    records = dims_records(config.n, config.k)
    headers = [
        "n",
        "k",
        "dim_F",
        "orbit_dim",
        "stab_dim",
        "dim_M",
        "a_k",
        "generic_stab_dim",
        "generic_dim_M",
        "generic_a_k",
        "discrepancy",
        "paper_ref",
    ]
    rows = [[r[h] for h in headers] for r in records]
    _emit(config, records, headers, rows, lambda: _table(headers[:-1], [r[:-1] for r in rows]), out)
    return EXIT_OK


def _run_series(config: CliConfig, out: TextIO) -> int:
    assert config.n is not None
    record = series_record(config.n, config.terms)
    coeffs = record["coefficients"]
    generic = record["generic_coefficients"]
    rows = [
        [config.n, k, a, g, record["paper_ref"]]
        for k, (a, g) in enumerate(zip(coeffs, generic, strict=True))
    ]

    def text() -> str:
        if not record["discrepancy"]:
            return str(coeffs)
        return f"{coeffs}\nexact rank: {generic}"

    headers = ["n", "k", "a_k", "generic_a_k", "paper_ref"]
    _emit(config, [record], headers, rows, text, out)
    return EXIT_OK


def _run_closed_form(config: CliConfig, out: TextIO) -> int:
    assert config.n is not None
    record = closed_form_record(config.n)
    ref = record["paper_ref"]
    rows: list[list[Any]] = [
        [config.n, "polynomial", p, c, ref] for p, c in enumerate(record["polynomial_part"])
    ]
    rows += [[config.n, "pole", int(j), c, ref] for j, c in record["pole_part"].items()]

    def text() -> str:
        lines = [f"p(t) = {partial_fraction_text(record)}", f"     = {record['expression']}"]
        if record["functional_moduli_estimate"] is not None:
            lines.append(f"leading pole coefficient: {record['functional_moduli_estimate']}")
        return "\n".join(lines)

    _emit(config, [record], ["n", "part", "power", "coefficient", "paper_ref"], rows, text, out)
    return EXIT_OK


def _certificate_text(certificate: dict[str, Any]) -> str:
    verdict = "certified" if certificate["certified"] else "not certified"
    line = (
        f"generic stabilizer {certificate['stab_dim']} {verdict} "
        f"({len(certificate['seeds'])} seeds, witness {certificate['witness_stab_dim']})"
    )
    if certificate["known_discrepancy"]:
        line += f"; formula gives {certificate['expected_stab_dim']}"
    return line


def _run_stabilizer(config: CliConfig, out: TextIO) -> int:
    assert config.n is not None
    records, certificate = stabilizer_records(
        config.n, config.k, config.seed_list, config.coeff_range
    )
    headers = [
        "n",
        "k",
        "seed",
        "empirical_stab_dim",
        "expected_stab_dim",
        "empirical_orbit_dim",
        "formula_orbit_dim",
        "agree",
        "known_discrepancy",
        "non_generic",
        "paper_ref",
    ]
    rows = [[r[h] for h in headers] for r in records]
    short = [
        "n", "k", "seed", "stab", "expected", "orbit", "formula", "agree", "known", "non_generic"
    ]

    def text() -> str:
        return _table(short, [r[:-1] for r in rows]) + "\n" + _certificate_text(certificate)

    _emit(config, [*records, certificate], headers, rows, text, out)
    return EXIT_OK


def _run_witness(config: CliConfig, out: TextIO) -> int:
    record = witness_record(config.witness, config.n if config.n is not None else 3)
    rows: list[list[Any]] = []
    for component, coeffs in record["jet"]["components"].items():
        for monomial, c in coeffs.items():
            rows.append(
                [record["witness"], record["n"], component, monomial, c, record["paper_ref"]]
            )

    def text() -> str:
        system = record["system"]
        lines = [f"witness {record['witness']} (n={record['n']}, order={record['order']})"]
        lines += [f"  Gamma[{comp}] x^({mono}) : {c}" for _, _, comp, mono, c, _ in rows]
        lines.append(f"normal coordinates: {record['normal']}")
        lines.append(
            f"stabilizer system: {system['rows']}x{system['cols']}, rank {system['rank']}, "
            f"kernel dimension {system['kernel_dim']}"
        )
        return "\n".join(lines)

    headers = ["witness", "n", "component", "monomial", "coefficient", "paper_ref"]
    _emit(config, [record], headers, rows, text, out)
    return EXIT_OK


def _run_verify(config: CliConfig, out: TextIO) -> int:
    results: list[CheckResult] = run_verification(
        deep=config.deep, seeds=tuple(config.seed_list), coeff_range=config.coeff_range
    )
    records = [{**r.model_dump(), "status": "PASS" if r.passed else "FAIL"} for r in results]
    headers = ["id", "status", "detail", "paper_ref"]
    rows = [[r[h] for h in headers] for r in records]

    def text() -> str:
        lines = [f"{r['status']} {r['id']}: {r['detail']}" for r in records]
        passed = sum(1 for r in results if r.passed)
        lines.append(f"{passed}/{len(results)} checks passed")
        return "\n".join(lines)

    _emit(config, records, headers, rows, text, out)
    try:
        require_all_passed(results)
    except VerificationError as e:
        logger.error("%s", e)
        return exit_code_for(e)
    return EXIT_OK


_DISPATCH: dict[str, Callable[[CliConfig, TextIO], int]] = {
    "dims": _run_dims,
    "series": _run_series,
    "closed-form": _run_closed_form,
    "stabilizer": _run_stabilizer,
    "witness": _run_witness,
    "verify": _run_verify,
}


def run(config: CliConfig, out: TextIO | None = None) -> int:
    """Execute one validated command and return the process exit code."""
    stream = out if out is not None else sys.stdout
    try:
        return _DISPATCH[config.subcommand](config, stream)
    except Exception as e:
        message, code = client_safe_error(e)
        logger.error("%s failed: %s", config.subcommand, message)
        if config.format == "json":
            stream.write(
                dumps_record(
                    error_response(
                        error=code,
                        message=message,
                        operation=config.subcommand,
                        paper_ref=_subcommand_ref(config.subcommand, config.witness),
                        n=config.n,
                    )
                )
                + "\n"
            )
        else:
            print(f"error: {message}", file=sys.stderr)
        return exit_code_for(e)


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    settings = get_settings()
    settings.configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except PydanticValidationError as e:
        parser.print_usage(sys.stderr)
        messages = [str(err["msg"]) for err in e.errors()]
        for msg in messages:
            print(f"error: {msg}", file=sys.stderr)
        if getattr(args, "format", "text") == "json":
            subcommand = str(args.subcommand)
            envelope = error_response(
                error="validation_error",
                message="; ".join(messages),
                operation=subcommand,
                paper_ref=_subcommand_ref(subcommand, getattr(args, "witness", "gamma")),
            )
            sys.stdout.write(dumps_record(envelope) + "\n")
        return EXIT_USAGE
    logger.debug("running %s", config.model_dump())
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
