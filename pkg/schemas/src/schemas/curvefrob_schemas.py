"""
Wire models for curvefrob: the problem file the CLI reads and every JSON document it writes.

Rationals always cross the wire as strings "p/q" (or "n" for integers), never floats.
The published JSON schema (schemas/report.schema.json) is generated from ``Report``;
regenerate with: python -m curvefrob.regenerate_schema
"""

from __future__ import annotations

from typing import Annotated, Any, Literal

from pydantic import BaseModel, Field

RATIONAL_PATTERN = r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$"

RationalStr = Annotated[str, Field(pattern=RATIONAL_PATTERN, examples=["3/2", "-1", "0"])]


# ---- input ----
class WeightsSpec(BaseModel):
    x: RationalStr = Field(..., description="Weight of x, a positive rational")
    y: RationalStr = Field(..., description="Weight of y, a positive rational")

    model_config = {"extra": "forbid"}


class ProblemSpec(BaseModel):
    """A problem file: f restricted to the family g = t, with the quasi-homogeneous weights."""

    weights: WeightsSpec
    f: str = Field(..., examples=["x"], description="Polynomial f in x, y")
    g: str = Field(..., examples=["x^3 + y^2"], description="Polynomial g in x, y; the curve family is g = t")
    seed: int | None = Field(None, description="Seed for randomized probes")
    t_samples: list[RationalStr] | None = Field(None, description="Nonzero fibre parameters to probe")
    u_samples: list[list[RationalStr]] | None = Field(
        None, description="Unfolding parameter vectors, one entry per basis element, probed at the first t-sample"
    )

    model_config = {"extra": "forbid"}


# ---- checks ----
class CheckResult(BaseModel):
    """Outcome of one exact consistency check. A failing check never raises."""

    name: str
    passed: bool = Field(..., alias="pass")
    details: dict[str, Any] = Field(default_factory=dict)

    model_config = {"populate_by_name": True}


# ---- report sections ----
class InputEcho(BaseModel):
    f: str
    g: str
    raw_weights: WeightsSpec
    weights: WeightsSpec = Field(..., description="Weights rescaled so that deg f = 1")
    e: RationalStr = Field(..., description="Weighted degree of g")
    p_total: RationalStr = Field(..., description="Sum of the normalized weights")
    J: str = Field(..., description="Jacobian determinant of (f, g)")


class MilnorSection(BaseModel):
    mu: int = Field(..., description="dim O/(g, J)")
    mu1: int = Field(..., description="dim O/(g_x, g_y), the Milnor number of the curve")
    mu2: int = Field(..., description="dim O/(f, g) - 1")


class ChainVector(BaseModel):
    label: tuple[int, int] = Field(..., description="(chain index, step index)")
    polynomial: str = Field(..., description="Representative (-f)^step * head")
    coordinates: list[RationalStr] = Field(..., description="Class in the staircase basis of O/(g, J)")
    degree: RationalStr
    nu: RationalStr
    lambda_: RationalStr = Field(..., alias="lambda")

    model_config = {"populate_by_name": True}


class ChainsSection(BaseModel):
    staircase: list[str]
    chains: list[list[ChainVector]]


class SpectrumSection(BaseModel):
    entries: list[tuple[RationalStr, RationalStr]] = Field(
        ..., description="Sorted (lambda, multiplicity) pairs", examples=[[["0", "1"], ["1/2", "1"], ["1", "1"]]]
    )
    symmetry_defect: list[RationalStr] = Field(
        default_factory=list, description="Multiset difference of {lambda} and {1 - lambda}; diagnostic only"
    )
    annotation: str = Field("valid for all t, n = 1", description="The spectrum does not depend on t")


class BrieskornLevels(BaseModel):
    label: tuple[int, int]
    levels: dict[str, list[RationalStr]] = Field(
        ..., description="Power k of the inverse of tau -> coefficient vector over the chain basis"
    )


class ConnectionSection(BaseModel):
    basis_labels: list[tuple[int, int]]
    A0: list[list[RationalStr]]
    Ainf: list[list[RationalStr]]
    tilde_basis: list[BrieskornLevels] = Field(default_factory=list)


class FrobeniusBasisData(BaseModel):
    basis: list[str] = Field(..., description="Polynomial representative of each basis element")
    metric_raw: list[list[RationalStr]]
    metric_normalized: list[list[RationalStr]]
    structure_constants: list[list[list[RationalStr]]] = Field(..., description="C[a][b][c]: h_a * h_b = sum_c C[a][b][c] h_c")
    unit_index: int
    nilpotency_index: list[int | None] = Field(
        default_factory=list, description="Nilpotency index of multiplication by each basis element; null for the unit"
    )


class FrobeniusSection(BaseModel):
    basis_monomials: list[str] = Field(..., description="Staircase of O/(g, J)")
    residue: list[RationalStr] = Field(..., description="Bezoutian residue of each staircase monomial")
    socle_degree: RationalStr
    socle_monomial: str
    chain_basis: FrobeniusBasisData
    monomial_basis: FrobeniusBasisData


class Certificate(BaseModel):
    element: str = Field(..., description="Element z of the fibre algebra")
    minimal_polynomial: list[RationalStr] = Field(..., description="Monic coefficients, constant term first")


class FibreProbeSection(BaseModel):
    t0: RationalStr
    u: list[RationalStr]
    dim: int | None = Field(..., description="dim O/(g - t0, J_F); null when infinite")
    status: Literal["semisimple", "dimension_mismatch", "inconclusive"]
    semisimple: bool
    certificate: Certificate | None = None
    note: str | None = None


class Report(BaseModel):
    """Full analysis of one (f, g) pair."""

    input: InputEcho
    seed: int
    t_samples: list[RationalStr]
    milnor: MilnorSection
    chains: ChainsSection
    spectrum: SpectrumSection
    connection: ConnectionSection
    frobenius: FrobeniusSection
    probes: list[FibreProbeSection] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)


class VerifySummary(BaseModel):
    total: int
    passed: int
    failed: int
    failed_names: list[str] = Field(default_factory=list)
    all_passed: bool


class VerifyReport(BaseModel):
    summary: VerifySummary
    checks: list[CheckResult]


class AkComparison(BaseModel):
    """Closed-form A_k spectrum against the full pipeline on f = x, g = x^k + y^2."""

    k: int
    mu: int
    basis_monomials: list[str]
    oracle: list[tuple[RationalStr, RationalStr]]
    pipeline: list[tuple[RationalStr, RationalStr]]
    diff: list[tuple[RationalStr, RationalStr, RationalStr]] = Field(
        default_factory=list, description="(lambda, oracle multiplicity, pipeline multiplicity) where they differ"
    )
    match: bool


class ErrorDetail(BaseModel):
    code: str = Field(..., examples=["SmoothCurve", "ParseError", "NonIsolated"])
    message: str
    offset: int | None = Field(None, description="Byte offset for ParseError")
    which: str | None = None
    check: str | None = None


class ErrorReport(BaseModel):
    error: ErrorDetail
