"""Tests for the curvefrob command line: exit codes, deterministic JSON and the published schema."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from schemas import AkComparison, ErrorReport, Report, SpectrumSection, VerifyReport

from curvefrob.cli import EXIT_CHECK_FAILED, EXIT_INVALID_INPUT, EXIT_OK, EXIT_USAGE, load_problem, main
from curvefrob.errors import ProblemSpecError, SmoothCurve
from curvefrob.regenerate_schema import OUTPUT, report_schema
from curvefrob.report import analyze_pair

A3 = {"weights": {"x": "1", "y": "3/2"}, "f": "x", "g": "x^3 + y^2"}
A2 = {"weights": {"x": "1", "y": "1"}, "f": "x", "g": "x^2 + y^2"}
NODE = {"weights": {"x": "1", "y": "1"}, "f": "x + y", "g": "x*y"}
SMOOTH = {"weights": {"x": "1", "y": "1"}, "f": "x", "g": "x + y^2"}


def write_problem(tmp_path: Path, problem: dict, name: str = "problem.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(problem))
    return str(path)


def run(capsys, *argv: str) -> tuple[int, dict | None]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_load_problem_examples(tmp_path):
    """A_3 and the node load; a smooth curve is refused with its code."""
    assert load_problem(write_problem(tmp_path, A3)).pair.mu == 3
    assert load_problem(write_problem(tmp_path, NODE)).pair.mu == 2
    with pytest.raises(SmoothCurve):
        load_problem(write_problem(tmp_path, SMOOTH))


def test_load_problem_structured_errors(tmp_path):
    """Malformed JSON, unknown fields and bad weights get their own codes."""
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ProblemSpecError) as info:
        load_problem(str(bad))
    assert info.value.code == "InvalidJSON"
    with pytest.raises(ProblemSpecError) as info:
        load_problem(write_problem(tmp_path, {**A3, "h": "x"}))
    assert info.value.code == "SchemaViolation"
    with pytest.raises(ProblemSpecError) as info:
        load_problem(write_problem(tmp_path, {**A3, "weights": {"x": "0", "y": "1"}}))
    assert info.value.code == "SchemaViolation"
    with pytest.raises(ProblemSpecError) as info:
        load_problem(str(tmp_path / "missing.json"))
    assert info.value.code == "InputUnreadable"


def test_ak_subcommand(capsys):
    """ak 4: both paths give {(0, 2), (1, 2)}, empty diff, exit 0."""
    code, data = run(capsys, "ak", "4")
    assert code == EXIT_OK
    comparison = AkComparison.model_validate(data)
    assert comparison.oracle == comparison.pipeline == [("0", "2"), ("1", "2")]
    assert comparison.diff == []
    assert comparison.match
    assert comparison.basis_monomials == ["1", "x", "x^2", "x^3"]


def test_ak_needs_k_at_least_two(capsys):
    """k < 2 is a usage error."""
    assert main(["ak", "1"]) == EXIT_USAGE


def test_verify_node_with_seed(tmp_path, capsys):
    """verify on the node with seed 7 passes every check."""
    code, data = run(capsys, "verify", write_problem(tmp_path, NODE), "--seed", "7")
    assert code == EXIT_OK
    report = VerifyReport.model_validate(data)
    assert report.summary.all_passed
    assert report.summary.total == len(report.checks) == 21
    assert {c.name for c in report.checks} >= {"kernel_identity", "frobenius_axioms_chain", "fibre_probes"}


def test_analyze_smooth_input_is_invalid(tmp_path, capsys):
    """A smooth curve exits 3 with a SmoothCurve error document."""
    code, data = run(capsys, "analyze", write_problem(tmp_path, SMOOTH))
    assert code == EXIT_INVALID_INPUT
    assert ErrorReport.model_validate(data).error.code == "SmoothCurve"


def test_parse_error_reports_offset(tmp_path, capsys):
    """A bad polynomial names the field and the byte offset."""
    code, data = run(capsys, "spectrum", write_problem(tmp_path, {**A3, "g": "x^3 + z"}))
    assert code == EXIT_INVALID_INPUT
    error = data["error"]
    assert error["code"] == "ParseError"
    assert error["offset"] == 6
    assert error["which"] == "g"
    assert error["message"].startswith("g: unknown variable 'z'")


def test_usage_errors(capsys):
    """Unknown subcommands and missing arguments exit 2."""
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    assert main(["ak"]) == EXIT_USAGE


def test_spectrum_section_for_a3(tmp_path, capsys):
    """spectrum emits only that section, with string pairs."""
    code, data = run(capsys, "spectrum", write_problem(tmp_path, A3))
    assert code == EXIT_OK
    assert data["entries"] == [["0", "1"], ["1/2", "1"], ["1", "1"]]
    assert data["annotation"] == "valid for all t, n = 1"
    assert data["symmetry_defect"] == []
    SpectrumSection.model_validate(data)


def test_connection_and_frobenius_sections(tmp_path, capsys):
    """connection and frobenius emit their own sections for A_3."""
    path = write_problem(tmp_path, A3)
    code, data = run(capsys, "connection", path)
    assert code == EXIT_OK
    assert data["Ainf"] == [["0", "0", "0"], ["0", "-1/2", "0"], ["0", "0", "-1"]]
    assert data["tilde_basis"][2]["levels"] == {"0": ["0", "0", "1"], "1": ["0", "1/2", "0"]}
    code, data = run(capsys, "frobenius", path)
    assert code == EXIT_OK
    assert data["basis_monomials"] == ["1", "x", "x^2"]
    assert data["residue"] == ["0", "0", "1/2"]
    assert data["monomial_basis"]["metric_normalized"] == [["0", "0", "1"], ["0", "1", "0"], ["1", "0", "0"]]


def test_analyze_report_validates_and_is_deterministic(tmp_path, capsys):
    """Two analyze runs with the same seed write identical bytes, and the report validates."""
    path = write_problem(tmp_path, A2)
    first, second = tmp_path / "one.json", tmp_path / "two.json"
    assert main(["analyze", path, "--seed", "3", "--output", str(first)]) == EXIT_OK
    assert main(["analyze", path, "--seed", "3", "--output", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert capsys.readouterr().out == ""
    report = Report.model_validate_json(first.read_bytes())
    assert report.seed == 3
    assert report.milnor.mu == 2
    assert all(c.passed for c in report.checks)
    assert json.loads(first.read_text()) == report.model_dump(mode="json", by_alias=True)


def test_verify_is_byte_deterministic(tmp_path, capsys):
    """verify twice on the same input and seed prints the same bytes."""
    path = write_problem(tmp_path, NODE)
    main(["verify", path, "--seed", "7"])
    first = capsys.readouterr().out
    main(["verify", path, "--seed", "7"])
    assert capsys.readouterr().out == first


def test_pretty_output_is_indented(tmp_path, capsys):
    """--pretty only changes whitespace."""
    path = write_problem(tmp_path, A3)
    main(["spectrum", path])
    compact = capsys.readouterr().out
    main(["spectrum", path, "--pretty"])
    pretty = capsys.readouterr().out
    assert "\n  " in pretty and "\n  " not in compact
    assert json.loads(pretty) == json.loads(compact)


def test_seed_and_t_samples_precedence(tmp_path, capsys, monkeypatch):
    """Flag beats problem file, problem file beats the environment."""
    monkeypatch.setenv("CURVEFROB_SEED", "11")
    monkeypatch.setenv("CURVEFROB_EXTRA_T_SAMPLES", "0")
    path = write_problem(tmp_path, A2)
    _, data = run(capsys, "analyze", path)
    assert data["seed"] == 11
    assert data["t_samples"] == ["1", "2", "-1"]
    path = write_problem(tmp_path, {**A2, "seed": 5, "t_samples": ["3"]})
    _, data = run(capsys, "analyze", path)
    assert data["seed"] == 5 and data["t_samples"] == ["3"]
    _, data = run(capsys, "analyze", path, "--seed", "2", "--t-samples", "1/2,4")
    assert data["seed"] == 2 and data["t_samples"] == ["1/2", "4"]


def test_zero_t_sample_is_invalid(tmp_path, capsys):
    """t-samples must avoid the singular fibre."""
    code, data = run(capsys, "analyze", write_problem(tmp_path, A2), "--t-samples", "1,0")
    assert code == EXIT_INVALID_INPUT
    assert data["error"]["code"] == "SchemaViolation"


def test_user_u_samples_are_probed(tmp_path, capsys):
    """Each u vector adds one probe at the first t-sample."""
    problem = {**A3, "t_samples": ["1"], "u_samples": [["1/3", "0", "0"]]}
    code, data = run(capsys, "analyze", write_problem(tmp_path, problem))
    assert code == EXIT_OK
    probes = data["probes"]
    assert probes[-1]["u"] == ["1/3", "0", "0"]
    assert probes[-1]["dim"] == 3
    bad = {**A3, "u_samples": [["1"]]}
    code, data = run(capsys, "analyze", write_problem(tmp_path, bad))
    assert code == EXIT_INVALID_INPUT


def test_u_samples_without_t_samples_are_invalid(tmp_path, capsys):
    """u vectors have no fibre to run on when the t-sample list is empty."""
    problem = {**A3, "t_samples": [], "u_samples": [["5", "0", "0"]]}
    code, data = run(capsys, "analyze", write_problem(tmp_path, problem))
    assert code == EXIT_INVALID_INPUT
    error = ErrorReport.model_validate(data).error
    assert error.code == "SchemaViolation"
    assert "u_samples" in error.message
    code, data = run(capsys, "analyze", write_problem(tmp_path, {**A3, "t_samples": []}))
    assert code == EXIT_OK
    assert data["t_samples"] == []


def test_analyze_pair_refuses_u_samples_without_a_nonzero_t(a3):
    """The library entry point refuses to drop u vectors silently."""
    with pytest.raises(ValueError, match="u_samples"):
        analyze_pair(a3, 0, [], [[Fraction(5), Fraction(0), Fraction(0)]])


def test_non_ascii_exponent_is_a_parse_error(tmp_path, capsys):
    """Superscript digits are not exponents; the offset points at them."""
    code, data = run(capsys, "analyze", write_problem(tmp_path, {**A3, "g": "x^² + y^2"}))
    assert code == EXIT_INVALID_INPUT
    error = data["error"]
    assert error["code"] == "ParseError"
    assert error["offset"] == 2
    assert error["which"] == "g"


def test_error_document_goes_to_output_file(tmp_path, capsys):
    """With --output, the error JSON lands in the file and stdout stays empty."""
    target = tmp_path / "error.json"
    code = main(["analyze", write_problem(tmp_path, SMOOTH), "--output", str(target)])
    assert code == EXIT_INVALID_INPUT
    assert capsys.readouterr().out == ""
    assert ErrorReport.model_validate_json(target.read_text()).error.code == "SmoothCurve"


def test_unwritable_output_is_a_usage_error(tmp_path, capsys):
    """Writing into a missing directory exits 2."""
    target = tmp_path / "no" / "such" / "dir" / "out.json"
    assert main(["spectrum", write_problem(tmp_path, A3), "--output", str(target)]) == EXIT_USAGE


def test_check_failure_exit_code_is_one():
    """The exit-code contract keeps check failures distinct from input errors."""
    assert (EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INVALID_INPUT) == (0, 1, 2, 3)


def test_shipped_schema_matches_model():
    """The published schema document describes the same report as the pydantic model."""
    shipped = json.loads(OUTPUT.read_text())
    generated = report_schema()
    assert shipped["title"] == generated["title"] == "Report"
    assert set(shipped["required"]) == set(generated["required"])
    assert set(shipped["properties"]) == set(generated["properties"])
    assert set(shipped["$defs"]) == set(generated["$defs"])
    for name, definition in generated["$defs"].items():
        assert set(shipped["$defs"][name]["properties"]) == set(definition["properties"]), name
        assert set(shipped["$defs"][name].get("required", [])) == set(definition.get("required", [])), name
