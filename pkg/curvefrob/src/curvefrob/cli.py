"""
Command-line front end.

    curvefrob analyze|spectrum|connection|frobenius|verify [input.json] [--output PATH]
              [--seed N] [--pretty] [--t-samples CSV]
    curvefrob ak K

Reads the problem file (or stdin when no path or "-" is given) and writes one JSON document
to stdout or --output. Logs go to stderr. Exit codes: 0 ok, 1 a check failed,
2 usage error, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel, ValidationError

from schemas import ErrorDetail, ErrorReport, ProblemSpec

from curvefrob import frobstruct, gaussmanin, report
from curvefrob.config import get_settings, parse_rational_csv
from curvefrob.curvesing import CurveFunctionPair, default_t_samples, validate_pair
from curvefrob.errors import CurveFrobError, InconsistentResult, ParseError, ProblemSpecError
from curvefrob.logging_config import get_logger
from curvefrob.polycore import WeightSystem, parse_polynomial, to_rational

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_INPUT = 3


@dataclass(frozen=True)
class LoadedProblem:
    spec: ProblemSpec
    pair: CurveFunctionPair
    u_samples: list[list[Fraction]]


def _read_source(source: str | None) -> str:
    if source is None or source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemSpecError("InputUnreadable", f"cannot read {source}: {exc.strerror or exc}") from None


def load_problem(source: str | None) -> LoadedProblem:
    """Problem file (path, or stdin) -> ProblemSpec -> validated CurveFunctionPair."""
    text = _read_source(source)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemSpecError("InvalidJSON", f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    try:
        spec = ProblemSpec.model_validate(raw)
    except ValidationError as exc:
        raise ProblemSpecError("SchemaViolation", str(exc)) from None

    try:
        weights = WeightSystem(to_rational(spec.weights.x), to_rational(spec.weights.y))
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemSpecError("SchemaViolation", f"weights: {exc}") from None

    polys = {}
    for which in ("f", "g"):
        try:
            polys[which] = parse_polynomial(getattr(spec, which))
        except ParseError as exc:
            exc.details["which"] = which
            exc.message = f"{which}: {exc.message}"
            raise

    pair = validate_pair(polys["f"], polys["g"], weights)

    u_samples = []
    for i, u in enumerate(spec.u_samples or []):
        if len(u) != pair.mu:
            raise ProblemSpecError(
                "SchemaViolation", f"u_samples[{i}] has {len(u)} entries; the unfolding basis has {pair.mu}"
            )
        u_samples.append([to_rational(c) for c in u])
    return LoadedProblem(spec=spec, pair=pair, u_samples=u_samples)


def resolve_seed(cli_seed: int | None, spec: ProblemSpec) -> int:
    if cli_seed is not None:
        return cli_seed
    if spec.seed is not None:
        return spec.seed
    return get_settings().seed


def resolve_t_samples(cli_csv: str | None, spec: ProblemSpec, seed: int) -> list[Fraction]:
    if cli_csv is not None:
        samples = parse_rational_csv(cli_csv)
    elif spec.t_samples is not None:
        samples = [to_rational(t) for t in spec.t_samples]
    else:
        samples = default_t_samples(seed)
    if any(t == 0 for t in samples):
        raise ProblemSpecError("SchemaViolation", "t-samples must be nonzero")
    if spec.u_samples and not samples:
        raise ProblemSpecError("SchemaViolation", "u_samples are probed at the first t-sample, but t-samples is empty")
    return samples


def emit_report(model: BaseModel, output: str | None = None, pretty: bool = False, exclude_none: bool = False) -> bytes:
    """Deterministic JSON: sorted keys, rationals as strings. Written to output or stdout."""
    data = model.model_dump(mode="json", by_alias=True, exclude_none=exclude_none)
    text = json.dumps(data, sort_keys=True, indent=2 if pretty else None) + "\n"
    payload = text.encode("utf-8")
    if output:
        Path(output).write_bytes(payload)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return payload


def _emit_error(exc: CurveFrobError, args: argparse.Namespace) -> None:
    emit_report(
        ErrorReport(error=ErrorDetail(**exc.to_dict())),
        getattr(args, "output", None),
        getattr(args, "pretty", False),
        exclude_none=True,
    )


def run_subcommand(args: argparse.Namespace) -> int:
    if args.command == "ak":
        if args.k < 2:
            print(f"curvefrob ak: k must be at least 2, got {args.k}", file=sys.stderr)
            return EXIT_USAGE
        comparison = report.ak_comparison(args.k)
        emit_report(comparison, args.output, args.pretty)
        return EXIT_OK if comparison.match else EXIT_CHECK_FAILED

    try:
        problem = load_problem(args.input)
        seed = resolve_seed(args.seed, problem.spec)
        t_samples = resolve_t_samples(args.t_samples, problem.spec, seed)
    except (CurveFrobError, ValueError, ZeroDivisionError) as exc:
        if not isinstance(exc, CurveFrobError):
            exc = ProblemSpecError("SchemaViolation", str(exc))
        logger.warning("invalid input: %s", exc.message)
        _emit_error(exc, args)
        return EXIT_INVALID_INPUT

    pair = problem.pair
    logger.info("running %s with seed %d and t-samples %s", args.command, seed, [str(t) for t in t_samples])
    try:
        if args.command == "spectrum":
            chains = gaussmanin.homogeneous_jordan_chains(pair)
            emit_report(report.spectrum_section(gaussmanin.spectrum(pair, chains)), args.output, args.pretty)
            return EXIT_OK
        if args.command == "connection":
            chains = gaussmanin.homogeneous_jordan_chains(pair)
            section = report.connection_section(
                gaussmanin.connection_matrices(pair, chains), gaussmanin.tilde_basis(chains, pair)
            )
            emit_report(section, args.output, args.pretty)
            return EXIT_OK

        if args.command == "frobenius":
            chains = gaussmanin.homogeneous_jordan_chains(pair)
            residue = frobstruct.bezoutian_dual_basis(pair)
            section = report.frobenius_section(
                pair,
                residue,
                frobstruct.multiplication_table(pair, "chain", chains, residue),
                frobstruct.multiplication_table(pair, "monomial", chains, residue),
            )
            emit_report(section, args.output, args.pretty)
            return EXIT_OK

        analysis = report.analyze_pair(pair, seed, t_samples, problem.u_samples)

        checks = report.run_checks(analysis)
        if args.command == "verify":
            emit_report(report.verify_report(checks), args.output, args.pretty)
        else:
            emit_report(report.build_report(analysis, checks), args.output, args.pretty)
        failed = [c.name for c in checks if not c.passed]
        if failed:
            logger.warning("%d check(s) failed: %s", len(failed), ", ".join(failed))
            return EXIT_CHECK_FAILED
        return EXIT_OK
    except InconsistentResult as exc:
        logger.error("internal cross-check failed: %s", exc.message)
        _emit_error(exc, args)
        return EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvefrob",
        description="Spectrum, connection and Frobenius structure of f on the curve family g = t",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analyze", "full report with every check"),
        ("spectrum", "spectral numbers only"),
        ("connection", "A0, Ainf and the tilde basis"),
        ("frobenius", "residue, metric and structure constants"),
        ("verify", "run every check and summarize"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", nargs="?", default=None, help="Problem JSON file; stdin when omitted or '-'")
        p.add_argument("--output", type=str, default=None, help="Write the JSON here instead of stdout")
        p.add_argument("--seed", type=int, default=None, help="Seed for randomized probes")
        p.add_argument("--pretty", action="store_true", help="Indent the JSON output")
        p.add_argument("--t-samples", type=str, default=None, help="Comma-separated nonzero rationals")
    ak = sub.add_parser("ak", help="compare the closed-form A_k spectrum with the pipeline")
    ak.add_argument("k", type=int)
    ak.add_argument("--output", type=str, default=None)
    ak.add_argument("--pretty", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run_subcommand(args)
    except OSError as exc:
        print(f"curvefrob: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
