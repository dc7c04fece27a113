"""
Validation of (f, g) pairs and the singularity invariants of f restricted to the curve g = 0:
Milnor numbers, the kernel and Cramer-Euler identities, positivity of nu on (g_x, g_y),
and the mu-constancy probe along the family g = t.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

import numpy as np

from schemas import CheckResult

from curvefrob.config import get_settings
from curvefrob.errors import (
    DegenerateF,
    InconsistentResult,
    InfiniteDimensional,
    NonIsolated,
    NotQuasiHomogeneous,
    SmoothCurve,
    ZeroPolynomialError,
)
from curvefrob.idealkit import (
    GroebnerBasis,
    MonomialOrder,
    QuotientRing,
    buchberger,
    matrix_rank,
    mult_matrix,
    normal_form,
    quotient_dim,
    quotient_ring,
)
from curvefrob.logging_config import get_logger
from curvefrob.polycore import (
    NON_HOMOGENEOUS,
    Monomial,
    Poly,
    WeightSystem,
    jacobian_det,
    weighted_degree,
)

logger = get_logger(__name__)


def wire_value(value: Any) -> Any:
    """Make check details JSON-friendly: rationals and polynomials become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Poly):
        return value.to_text()
    if isinstance(value, dict):
        return {str(k): wire_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [wire_value(v) for v in value]
    return str(value)


def make_check(name: str, passed: bool, **details: Any) -> CheckResult:
    result = CheckResult(name=name, passed=bool(passed), details={k: wire_value(v) for k, v in details.items()})
    if passed:
        logger.debug("check %s passed", name)
    else:
        logger.warning("check %s FAILED: %s", name, result.details)
    return result


# ---- the validated pair ----
@dataclass(frozen=True)
class CurveFunctionPair:
    """f on the family g = t, with weights rescaled so that deg f = 1."""

    f: Poly
    g: Poly
    weights: WeightSystem
    raw_weights: WeightSystem
    e: Fraction
    J: Poly
    milnor_ring: QuotientRing

    @property
    def p_total(self) -> Fraction:
        return self.weights.p_total

    @property
    def order(self) -> MonomialOrder:
        return MonomialOrder(self.weights)

    @property
    def g_x(self) -> Poly:
        return self.g.diff("x")

    @property
    def g_y(self) -> Poly:
        return self.g.diff("y")

    @property
    def mu(self) -> int:
        return self.milnor_ring.dim

    @cached_property
    def curve_ideal(self) -> GroebnerBasis:
        """Groebner basis of the principal ideal (g)."""
        return buchberger([self.g], self.order)

    def degree(self, h: Poly) -> Fraction:
        d = weighted_degree(h, self.weights)
        if d is NON_HOMOGENEOUS:
            raise ValueError(f"{h.to_text(self.weights)} is not quasi-homogeneous")
        return d


@dataclass(frozen=True)
class MilnorReport:
    mu: int
    mu1: int
    mu2: int


def _finite_dim(generators: list[Poly], order: MonomialOrder, check: str, message: str) -> QuotientRing:
    nonzero = [p for p in generators if not p.is_zero]
    if not nonzero:
        raise NonIsolated(check, message)
    try:
        return quotient_ring(nonzero, order)
    except InfiniteDimensional:
        raise NonIsolated(check, message) from None


def validate_pair(f: Poly, g: Poly, raw_weights: WeightSystem) -> CurveFunctionPair:
    """Check the standing hypotheses on (f, g) and return the normalized pair.

    The curve must pass singularly through the origin, f and g must be quasi-homogeneous,
    f must be nonconstant on every branch, f and g must share no component and g must be
    reduced with an isolated singularity.
    """
    if f.is_zero:
        raise DegenerateF("f is the zero polynomial")
    if g.is_zero:
        raise ZeroPolynomialError("g is the zero polynomial; it defines no curve", which="g")

    # smoothness needs no weights, so it is reported before homogeneity
    if g.constant_term() != 0:
        raise SmoothCurve("g(0, 0) != 0: the curve g = 0 does not pass through the origin")
    if g.coefficient(Monomial(1, 0)) != 0 or g.coefficient(Monomial(0, 1)) != 0:
        raise SmoothCurve("g has a linear term: the curve g = 0 is smooth at the origin")

    deg_f = weighted_degree(f, raw_weights)
    if deg_f is NON_HOMOGENEOUS:
        raise NotQuasiHomogeneous("f")
    deg_g = weighted_degree(g, raw_weights)
    if deg_g is NON_HOMOGENEOUS:
        raise NotQuasiHomogeneous("g")
    if deg_f <= 0:
        raise DegenerateF("f is constant; its weighted degree must be positive")

    weights = raw_weights.scaled(1 / deg_f)
    e = deg_g / deg_f
    order = MonomialOrder(weights)
    J = jacobian_det(f, g)

    milnor_ring = _finite_dim(
        [g, J], order, "milnor", "dim O/(g, J) is infinite: f is constant on a branch of g = 0"
    )
    _finite_dim([f, g], order, "common_component", "dim O/(f, g) is infinite: f and g share a component")
    _finite_dim(
        [g.diff("x"), g.diff("y")],
        order,
        "curve_singularity",
        "dim O/(g_x, g_y) is infinite: g is not reduced or its singularity is not isolated",
    )

    pair = CurveFunctionPair(
        f=f, g=g, weights=weights, raw_weights=raw_weights, e=e, J=J, milnor_ring=milnor_ring
    )
    logger.info(
        "validated pair f=%s g=%s weights=(%s, %s) e=%s mu=%d",
        f.to_text(weights),
        g.to_text(weights),
        weights.p_x,
        weights.p_y,
        e,
        milnor_ring.dim,
    )
    return pair


def milnor_numbers(pair: CurveFunctionPair) -> MilnorReport:
    """mu = dim O/(g, J), mu1 = dim O/(g_x, g_y), mu2 = dim O/(f, g) - 1; mu = mu1 + mu2."""
    order = pair.order
    mu = pair.milnor_ring.dim
    mu1 = quotient_dim([p for p in (pair.g_x, pair.g_y) if not p.is_zero], order)
    mu2 = quotient_dim([pair.f, pair.g], order) - 1
    mu2_alt = quotient_dim([pair.f, pair.g, pair.J], order)
    if mu2 != mu2_alt:
        raise InconsistentResult(f"dim O/(f, g) - 1 = {mu2} but dim O/(f, g, J) = {mu2_alt}")
    if mu != mu1 + mu2:
        raise InconsistentResult(f"mu = {mu} but mu1 + mu2 = {mu1} + {mu2}")
    logger.info("Milnor numbers: mu=%d mu1=%d mu2=%d", mu, mu1, mu2)
    return MilnorReport(mu=mu, mu1=mu1, mu2=mu2)


# ---- checks ----
def kernel_identity_check(pair: CurveFunctionPair, milnor: MilnorReport | None = None) -> CheckResult:
    """ker(f on O/(g,J)), the image of (g_x, g_y) in O/(g,J) and O/(f,g,J) all have dimension mu2."""
    milnor = milnor or milnor_numbers(pair)
    q = pair.milnor_ring
    kernel_dim = q.dim - mult_matrix(pair.f, q).rank()
    image = []
    for m in q.staircase:
        for partial in (pair.g_x, pair.g_y):
            if not partial.is_zero:
                image.append(q.coordinates(partial.mul_term(m, Fraction(1))))
    image_dim = matrix_rank(image, q.dim)
    quotient = quotient_dim([pair.f, pair.g, pair.J], pair.order)
    return make_check(
        "kernel_identity",
        kernel_dim == image_dim == quotient == milnor.mu2,
        kernel_of_f=kernel_dim,
        jacobian_image=image_dim,
        dim_f_g_J=quotient,
        mu2=milnor.mu2,
    )


def euler_identity_check(pair: CurveFunctionPair) -> CheckResult:
    """p_x x J = f g_y and p_y y J = -f g_x modulo (g)."""
    w = pair.weights
    x, y = Poly.var("x"), Poly.var("y")
    gb = pair.curve_ideal
    first = normal_form(x.scale(w.p_x) * pair.J - pair.f * pair.g_y, gb)
    second = normal_form(y.scale(w.p_y) * pair.J + pair.f * pair.g_x, gb)
    return make_check(
        "euler_identity",
        first.is_zero and second.is_zero,
        x_residual=first,
        y_residual=second,
    )


def nu_value_of_degree(degree: Fraction, pair: CurveFunctionPair) -> Fraction:
    return degree + pair.p_total - pair.e


def nu_positivity_check(pair: CurveFunctionPair) -> CheckResult:
    """nu(h) > 0 for the generators g_x, g_y of the curve's Jacobian ideal."""
    values = {}
    for name, h in (("g_x", pair.g_x), ("g_y", pair.g_y)):
        if not h.is_zero:
            values[name] = nu_value_of_degree(pair.degree(h), pair)
    return make_check("nu_positivity", all(v > 0 for v in values.values()), nu=values)


def default_t_samples(
    seed: int,
    base: Sequence[Fraction] | None = None,
    extra: int | None = None,
) -> list[Fraction]:
    """Base samples (default 1, 2, -1) plus ``extra`` seeded positive rationals with parts in [1, 7]."""
    settings = get_settings()
    samples = list(base if base is not None else settings.t_samples)
    extra = settings.extra_t_samples if extra is None else extra
    rng = np.random.default_rng(seed)
    added = 0
    for _ in range(100 * max(extra, 1)):
        if added >= extra:
            break
        num, den = (int(v) for v in rng.integers(1, 8, size=2))
        t = Fraction(num, den)
        if t not in samples:
            samples.append(t)
            added += 1
    out: list[Fraction] = []
    for t in samples:
        if t != 0 and t not in out:
            out.append(t)
    return out


def fibre_ring(pair: CurveFunctionPair, t0: Fraction, J: Poly | None = None) -> QuotientRing:
    """O/(g - t0, J) for the given (default: the pair's) Jacobian determinant."""
    return quotient_ring([pair.g - Poly.constant(t0), pair.J if J is None else J], pair.order, track_cofactors=False)


def mu_constancy_probe(
    pair: CurveFunctionPair,
    t_samples: Sequence[Fraction] | None = None,
    seed: int = 0,
) -> CheckResult:
    """dim O/(g - t0, J) = mu at every sampled t0 (t0 = 0 included)."""
    samples = list(t_samples) if t_samples is not None else default_t_samples(seed)
    dims: dict[str, int | str] = {"0": pair.mu}
    passed = True
    for t0 in samples:
        if t0 == 0:
            continue
        try:
            d = fibre_ring(pair, t0).dim
        except InfiniteDimensional:
            dims[str(t0)] = "infinite"
            passed = False
            continue
        dims[str(t0)] = d
        passed &= d == pair.mu
    logger.info("mu-constancy probe over %d samples: %s", len(dims), "ok" if passed else "FAILED")
    return make_check("mu_constancy", passed, mu=pair.mu, dims=dims)
