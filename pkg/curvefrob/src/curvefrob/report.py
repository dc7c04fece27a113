"""
Runs the full pipeline on a validated pair and assembles the wire models from schemas.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from schemas import (
    AkComparison,
    BrieskornLevels,
    Certificate,
    ChainsSection,
    ChainVector,
    CheckResult,
    ConnectionSection,
    FibreProbeSection,
    FrobeniusBasisData,
    FrobeniusSection,
    InputEcho,
    MilnorSection,
    Report,
    SpectrumSection,
    VerifyReport,
    VerifySummary,
    WeightsSpec,
)

from curvefrob import curvesing, frobstruct, gaussmanin
from curvefrob.curvesing import CurveFunctionPair, MilnorReport
from curvefrob.frobstruct import FibreProbeReport, FrobeniusData, ResidueFunctional
from curvefrob.gaussmanin import BrieskornElement, ConnectionPair, JordanChainSet, SpectrumTable
from curvefrob.idealkit import QMatrix
from curvefrob.logging_config import get_logger
from curvefrob.polycore import WeightSystem

logger = get_logger(__name__)


@dataclass
class Analysis:
    """Everything computed for one pair; each stage is computed once and shared by the checks."""

    pair: CurveFunctionPair
    seed: int
    t_samples: list[Fraction]
    milnor: MilnorReport
    operator: QMatrix
    chains: JordanChainSet
    table: SpectrumTable
    connection: ConnectionPair
    tilde: list[BrieskornElement]
    residue: ResidueFunctional
    chain_data: FrobeniusData
    monomial_data: FrobeniusData
    generated_probes: list[FibreProbeReport] = field(default_factory=list)
    user_probes: list[FibreProbeReport] = field(default_factory=list)

    @property
    def probes(self) -> list[FibreProbeReport]:
        return self.generated_probes + self.user_probes


def analyze_pair(
    pair: CurveFunctionPair,
    seed: int,
    t_samples: Sequence[Fraction],
    u_samples: Sequence[Sequence[Fraction]] = (),
) -> Analysis:
    if u_samples and not any(t != 0 for t in t_samples):
        raise ValueError("u_samples need at least one nonzero t-sample to be probed at")
    milnor = curvesing.milnor_numbers(pair)
    operator = gaussmanin.minus_f_operator(pair)
    chains = gaussmanin.homogeneous_jordan_chains(pair, operator)
    table = gaussmanin.spectrum(pair, chains)
    connection = gaussmanin.connection_matrices(pair, chains)
    tilde = gaussmanin.tilde_basis(chains, pair)
    residue = frobstruct.bezoutian_dual_basis(pair)
    chain_data = frobstruct.multiplication_table(pair, "chain", chains, residue)
    monomial_data = frobstruct.multiplication_table(pair, "monomial", chains, residue)

    samples = [t for t in t_samples if t != 0]
    generated = [
        frobstruct.fibre_semisimplicity_probe(pair, t0, None, seed + i, chains) for i, t0 in enumerate(samples)
    ]
    user = []
    if samples:
        u_random = frobstruct.random_lower_order_u(chains, seed)
        generated.append(frobstruct.fibre_semisimplicity_probe(pair, samples[0], u_random, seed, chains))
        user = [frobstruct.fibre_semisimplicity_probe(pair, samples[0], u, seed, chains) for u in u_samples]

    return Analysis(
        pair=pair,
        seed=seed,
        t_samples=samples,
        milnor=milnor,
        operator=operator,
        chains=chains,
        table=table,
        connection=connection,
        tilde=tilde,
        residue=residue,
        chain_data=chain_data,
        monomial_data=monomial_data,
        generated_probes=generated,
        user_probes=user,
    )


def run_checks(a: Analysis) -> list[CheckResult]:
    """Every consistency check, in a fixed order."""
    pair = a.pair
    return [
        curvesing.euler_identity_check(pair),
        curvesing.kernel_identity_check(pair, a.milnor),
        curvesing.nu_positivity_check(pair),
        curvesing.mu_constancy_probe(pair, a.t_samples, a.seed),
        gaussmanin.minus_f_check(pair, a.operator),
        gaussmanin.jordan_chain_check(a.chains, pair, a.milnor),
        gaussmanin.head_nu_bound_check(a.chains, pair),
        gaussmanin.spectrum_check(a.table, pair),
        gaussmanin.connection_shape_check(a.connection, a.chains, a.milnor),
        gaussmanin.brieskorn_representatives_check(pair, a.chains),
        gaussmanin.connection_consistency_check(pair, a.chains, a.connection),
        gaussmanin.euler_field_check(pair, a.chains),
        frobstruct.bezoutian_duality_check(pair, a.residue),
        frobstruct.euler_jacobi_check(pair, a.residue),
        frobstruct.residue_grading_check(pair, a.residue),
        frobstruct.frobenius_axiom_check(a.chain_data),
        frobstruct.frobenius_axiom_check(a.monomial_data),
        frobstruct.primitivity_check(pair, a.chains, a.connection),
        frobstruct.nilpotency_probe(a.chain_data),
        frobstruct.nilpotency_probe(a.monomial_data),
        frobstruct.fibre_probe_check(a.generated_probes, pair),
    ]


def summarize(checks: Sequence[CheckResult]) -> VerifySummary:
    failed = [c.name for c in checks if not c.passed]
    return VerifySummary(
        total=len(checks),
        passed=len(checks) - len(failed),
        failed=len(failed),
        failed_names=failed,
        all_passed=not failed,
    )


# ---- sections ----
def _weights(w: WeightSystem) -> WeightsSpec:
    return WeightsSpec(x=str(w.p_x), y=str(w.p_y))


def _strings(values: Sequence[Fraction]) -> list[str]:
    return [str(v) for v in values]


def input_echo(pair: CurveFunctionPair) -> InputEcho:
    w = pair.weights
    return InputEcho(
        f=pair.f.to_text(w),
        g=pair.g.to_text(w),
        raw_weights=_weights(pair.raw_weights),
        weights=_weights(w),
        e=str(pair.e),
        p_total=str(pair.p_total),
        J=pair.J.to_text(w),
    )


def milnor_section(m: MilnorReport) -> MilnorSection:
    return MilnorSection(mu=m.mu, mu1=m.mu1, mu2=m.mu2)


def chains_section(pair: CurveFunctionPair, chains: JordanChainSet) -> ChainsSection:
    w = pair.weights
    return ChainsSection(
        staircase=[m.to_text() for m in pair.milnor_ring.staircase],
        chains=[
            [
                ChainVector(
                    label=v.label,
                    polynomial=v.polynomial.to_text(w),
                    coordinates=_strings(v.coordinates),
                    degree=str(v.degree),
                    nu=str(v.nu),
                    lambda_=str(v.lam),
                )
                for v in chain
            ]
            for chain in chains.chains
        ],
    )


def spectrum_section(table: SpectrumTable) -> SpectrumSection:
    return SpectrumSection(
        entries=table.to_wire(),
        symmetry_defect=_strings(gaussmanin.spectrum_symmetry_defect(table)),
    )


def connection_section(connection: ConnectionPair, tilde: Sequence[BrieskornElement]) -> ConnectionSection:
    return ConnectionSection(
        basis_labels=list(connection.basis_labels),
        A0=connection.A0.to_strings(),
        Ainf=connection.Ainf.to_strings(),
        tilde_basis=[
            BrieskornLevels(label=label, levels=element.to_wire())
            for label, element in zip(connection.basis_labels, tilde)
        ],
    )


def _frobenius_basis(pair: CurveFunctionPair, data: FrobeniusData) -> FrobeniusBasisData:
    return FrobeniusBasisData(
        basis=[p.to_text(pair.weights) for p in data.basis],
        metric_raw=data.metric_raw.to_strings(),
        metric_normalized=data.metric_normalized.to_strings(),
        structure_constants=[[_strings(c) for c in row] for row in data.structure_constants],
        unit_index=data.unit_index,
        nilpotency_index=frobstruct.nilpotency_indices(data),
    )


def frobenius_section(
    pair: CurveFunctionPair, residue: ResidueFunctional, chain_data: FrobeniusData, monomial_data: FrobeniusData
) -> FrobeniusSection:
    return FrobeniusSection(
        basis_monomials=[m.to_text() for m in pair.milnor_ring.staircase],
        residue=_strings(residue.values),
        socle_degree=str(frobstruct.socle_degree(pair)),
        socle_monomial=frobstruct.socle_monomial(pair).to_text(),
        chain_basis=_frobenius_basis(pair, chain_data),
        monomial_basis=_frobenius_basis(pair, monomial_data),
    )


def probe_section(pair: CurveFunctionPair, r: FibreProbeReport) -> FibreProbeSection:
    certificate = None
    if r.element is not None and r.minimal_polynomial is not None:
        certificate = Certificate(element=r.element.to_text(pair.weights), minimal_polynomial=_strings(r.minimal_polynomial))
    return FibreProbeSection(
        t0=str(r.t0),
        u=_strings(r.u),
        dim=r.dim,
        status=r.status,
        semisimple=r.semisimple,
        certificate=certificate,
        note=r.note,
    )


def build_report(a: Analysis, checks: Sequence[CheckResult] = ()) -> Report:
    logger.info("assembling report (%d checks)", len(checks))
    return Report(
        input=input_echo(a.pair),
        seed=a.seed,
        t_samples=_strings(a.t_samples),
        milnor=milnor_section(a.milnor),
        chains=chains_section(a.pair, a.chains),
        spectrum=spectrum_section(a.table),
        connection=connection_section(a.connection, a.tilde),
        frobenius=frobenius_section(a.pair, a.residue, a.chain_data, a.monomial_data),
        probes=[probe_section(a.pair, r) for r in a.probes],
        checks=list(checks),
    )


def verify_report(checks: Sequence[CheckResult]) -> VerifyReport:
    return VerifyReport(summary=summarize(checks), checks=list(checks))


def ak_comparison(k: int) -> AkComparison:
    """Closed-form spectrum against the pipeline on f = x, g = x^k + y^2."""
    pair = gaussmanin.ak_pair(k)
    oracle = gaussmanin.ak_spectrum_oracle(k)
    pipeline = gaussmanin.spectrum(pair)
    expected, found = dict(oracle.entries), dict(pipeline.entries)
    diff = [
        (str(lam), str(expected.get(lam, 0)), str(found.get(lam, 0)))
        for lam in sorted(set(expected) | set(found))
        if expected.get(lam, 0) != found.get(lam, 0)
    ]
    return AkComparison(
        k=k,
        mu=pair.mu,
        basis_monomials=[m.to_text() for m in pair.milnor_ring.staircase],
        oracle=oracle.to_wire(),
        pipeline=pipeline.to_wire(),
        diff=diff,
        match=not diff,
    )
