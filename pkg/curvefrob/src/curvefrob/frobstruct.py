"""
Frobenius structure at the origin and probes on smooth fibres.

The Grothendieck residue of O/(g, J) comes from the Bezoutian of (g, J): reducing
Delta(x, y; u, v) in both variable sets gives sum C[i][j] e_i(x, y) e_j(u, v), the
rows of C are the dual basis, and the Gram matrix of the residue pairing is (C^T)^-1.
The residue, the metric and the multiplication of the Jacobian algebra together form
a Frobenius algebra, checked here axiom by axiom in exact arithmetic.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np
import sympy

from schemas import CheckResult

from curvefrob.config import get_settings
from curvefrob.curvesing import CurveFunctionPair, fibre_ring, make_check
from curvefrob.errors import InconsistentResult, InfiniteDimensional
from curvefrob.gaussmanin import ConnectionPair, JordanChainSet, homogeneous_jordan_chains, nu_value
from curvefrob.idealkit import EchelonBasis, QMatrix, QuotientRing, mult_matrix
from curvefrob.logging_config import get_logger
from curvefrob.polycore import Monomial, Poly, jacobian_det

logger = get_logger(__name__)

BasisKind = Literal["chain", "monomial"]

# 4-variable polynomial: (monomial in x, y) x (monomial in u, v) -> coefficient
BiPoly = dict[tuple[Monomial, Monomial], Fraction]


# ---- Bezoutian ----
def _add_term(acc: BiPoly, key: tuple[Monomial, Monomial], c: Fraction) -> None:
    s = acc.get(key, 0) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def _difference_x(p: Poly) -> BiPoly:
    """(p(x, y) - p(u, y)) / (x - u)."""
    out: BiPoly = {}
    for m, c in p:
        for i in range(m.exp_x):
            _add_term(out, (Monomial(i, m.exp_y), Monomial(m.exp_x - 1 - i, 0)), c)
    return out


def _difference_y(p: Poly) -> BiPoly:
    """(p(u, y) - p(u, v)) / (y - v)."""
    out: BiPoly = {}
    for m, c in p:
        for j in range(m.exp_y):
            _add_term(out, (Monomial(0, j), Monomial(m.exp_x, m.exp_y - 1 - j)), c)
    return out


def _bi_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (m1, n1), c1 in a.items():
        for (m2, n2), c2 in b.items():
            _add_term(out, (m1 * m2, n1 * n2), c1 * c2)
    return out


def _bi_sub(a: BiPoly, b: BiPoly) -> BiPoly:
    out = dict(a)
    for key, c in b.items():
        _add_term(out, key, -c)
    return out


def bezoutian(g: Poly, J: Poly) -> BiPoly:
    """det [[Dx g, Dy g], [Dx J, Dy J]], rows (g, J), differencing x first then y."""
    return _bi_sub(
        _bi_mul(_difference_x(g), _difference_y(J)),
        _bi_mul(_difference_y(g), _difference_x(J)),
    )


@dataclass(frozen=True)
class ResidueFunctional:
    """Res on O/(g, J): values[m] = Res(staircase[m])."""

    ring: QuotientRing
    values: tuple[Fraction, ...]
    bezoutian_matrix: QMatrix
    gram: QMatrix
    convention: str = "bezoutian rows (g, J), difference x then y"

    def __call__(self, p: Poly) -> Fraction:
        return sum((r * c for r, c in zip(self.values, self.ring.coordinates(p))), Fraction(0))

    def dual_basis(self) -> list[Poly]:
        """f_k = sum_j C[k][j] e_j, so that Res(e_i f_k) = delta_ik."""
        C = self.bezoutian_matrix
        return [self.ring.element(C.row(k)) for k in range(C.rows)]


def bezoutian_dual_basis(pair: CurveFunctionPair) -> ResidueFunctional:
    q = pair.milnor_ring
    delta = bezoutian(pair.g, pair.J)
    coords: dict[Monomial, list[Fraction]] = {}

    def coords_of(m: Monomial) -> list[Fraction]:
        if m not in coords:
            coords[m] = q.coordinates(Poly({m: 1}))
        return coords[m]

    mu = q.dim
    C = [[Fraction(0)] * mu for _ in range(mu)]
    for (m_xy, m_uv), c in delta.items():
        left, right = coords_of(m_xy), coords_of(m_uv)
        for i, a in enumerate(left):
            if not a:
                continue
            for j, b in enumerate(right):
                if b:
                    C[i][j] += c * a * b
    bez = QMatrix.from_rows(C)
    if bez.rank() != mu:
        raise InconsistentResult("the reduced Bezoutian is degenerate; (g, J) is not a complete intersection")
    gram = bez.transpose().inverse()
    values = tuple(gram[0, m] for m in range(mu))
    logger.info("residue on staircase: %s", [str(v) for v in values])
    return ResidueFunctional(ring=q, values=values, bezoutian_matrix=bez, gram=gram)


def socle_degree(pair: CurveFunctionPair) -> Fraction:
    return 1 + 2 * (pair.e - pair.p_total)


def socle_monomial(pair: CurveFunctionPair) -> Monomial:
    d = socle_degree(pair)
    found = [m for m in pair.milnor_ring.staircase if pair.weights.degree(m) == d]
    if len(found) != 1:
        raise InconsistentResult(f"expected one staircase monomial of socle degree {d}, found {len(found)}")
    return found[0]


def metric_matrix(
    pair: CurveFunctionPair, residue: ResidueFunctional, basis: Sequence[Poly]
) -> tuple[QMatrix, QMatrix]:
    """(raw, normalized): raw[a][b] = Res(h_a h_b); normalized divides by Res(socle monomial)."""
    raw = QMatrix.from_rows([[residue(a * b) for b in basis] for a in basis])
    scale = residue(Poly({socle_monomial(pair): 1}))
    if scale == 0:
        raise InconsistentResult("the residue vanishes on the socle")
    return raw, raw.scale(1 / scale)


# ---- multiplication ----
@dataclass(frozen=True)
class FrobeniusData:
    """Jacobian algebra O/(g, J) in a chosen basis, with its residue metric.

    structure_constants[a][b][c] is the coefficient of h_c in h_a * h_b.
    """

    basis_kind: BasisKind
    basis: tuple[Poly, ...]
    nu: tuple[Fraction, ...]
    metric_raw: QMatrix
    metric_normalized: QMatrix
    structure_constants: tuple[tuple[tuple[Fraction, ...], ...], ...]
    unit_index: int

    @property
    def size(self) -> int:
        return len(self.basis)

    def left_multiplication(self, a: int) -> QMatrix:
        """Matrix of h_a * (.) in this basis; column b is the image of h_b."""
        C = self.structure_constants
        n = self.size
        return QMatrix.from_rows([[C[a][b][c] for b in range(n)] for c in range(n)])

    def product(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
        n = self.size
        C = self.structure_constants
        out = [Fraction(0)] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j]:
                    continue
                for k in range(n):
                    if C[i][j][k]:
                        out[k] += a[i] * b[j] * C[i][j][k]
        return out


def multiplication_table(
    pair: CurveFunctionPair,
    basis: BasisKind = "chain",
    chains: JordanChainSet | None = None,
    residue: ResidueFunctional | None = None,
) -> FrobeniusData:
    q = pair.milnor_ring
    residue = residue or bezoutian_dual_basis(pair)
    if basis == "chain":
        chains = chains or homogeneous_jordan_chains(pair)
        polys = [v.polynomial for v in chains.vectors()]
        nus = [v.nu for v in chains.vectors()]
        unit = chains.unit_index
    else:
        polys = [Poly({m: 1}) for m in q.staircase]
        nus = [nu_value(pair.weights.degree(m), pair) for m in q.staircase]
        unit = q.index_of(Monomial(0, 0))
    to_basis = QMatrix.from_columns([q.coordinates(p) for p in polys], rows=q.dim).inverse()
    n = len(polys)
    constants = tuple(
        tuple(tuple(to_basis.apply(q.coordinates(polys[a] * polys[b]))) for b in range(n)) for a in range(n)
    )
    raw, normalized = metric_matrix(pair, residue, polys)
    logger.info("Frobenius data in the %s basis: %d elements, unit index %d", basis, n, unit)
    return FrobeniusData(
        basis_kind=basis,
        basis=tuple(polys),
        nu=tuple(nus),
        metric_raw=raw,
        metric_normalized=normalized,
        structure_constants=constants,
        unit_index=unit,
    )


# ---- checks ----
def frobenius_axiom_check(data: FrobeniusData) -> CheckResult:
    """Commutativity, associativity, unit, invariance, symmetric nondegenerate metric, nu grading."""
    n = data.size
    C = data.structure_constants
    eta = data.metric_raw
    commutative = all(C[a][b] == C[b][a] for a in range(n) for b in range(a))
    associative = True
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    left = sum((C[a][b][e] * C[e][c][d] for e in range(n)), Fraction(0))
                    right = sum((C[b][c][e] * C[a][e][d] for e in range(n)), Fraction(0))
                    if left != right:
                        associative = False
                        break
                if not associative:
                    break
            if not associative:
                break
        if not associative:
            break
    u = data.unit_index
    unit = all(C[u][b][c] == (1 if b == c else 0) for b in range(n) for c in range(n))
    invariant = all(
        sum((C[a][b][e] * eta[e, c] for e in range(n)), Fraction(0))
        == sum((C[b][c][e] * eta[a, e] for e in range(n)), Fraction(0))
        for a in range(n)
        for b in range(n)
        for c in range(n)
    )
    symmetric = eta.is_symmetric()
    nondegenerate = eta.rank() == n
    graded = all(data.nu[a] + data.nu[b] == 1 for a, b, _ in eta.nonzero_entries())
    return make_check(
        f"frobenius_axioms_{data.basis_kind}",
        commutative and associative and unit and invariant and symmetric and nondegenerate and graded,
        commutative=commutative,
        associative=associative,
        unit=unit,
        invariant=invariant,
        symmetric=symmetric,
        nondegenerate=nondegenerate,
        nu_grading=graded,
    )


def bezoutian_duality_check(pair: CurveFunctionPair, residue: ResidueFunctional) -> CheckResult:
    """Res(e_i f_j) = delta_ij for the staircase e and the Bezoutian dual basis f."""
    q = pair.milnor_ring
    duals = residue.dual_basis()
    pairing = [[residue(Poly({m: 1}) * f) for f in duals] for m in q.staircase]
    ok = QMatrix.from_rows(pairing) == QMatrix.identity(q.dim)
    return make_check("bezoutian_duality", ok, pairing=pairing if not ok else [])


def euler_jacobi_check(pair: CurveFunctionPair, residue: ResidueFunctional) -> CheckResult:
    """Res(Jac(g, J)) = mu."""
    value = residue(jacobian_det(pair.g, pair.J))
    return make_check("euler_jacobi", value == pair.mu, residue=value, mu=pair.mu)


def residue_grading_check(pair: CurveFunctionPair, residue: ResidueFunctional) -> CheckResult:
    """Res vanishes on every staircase monomial outside the socle degree."""
    d = socle_degree(pair)
    q = pair.milnor_ring
    offenders = [m.to_text() for m, r in zip(q.staircase, residue.values) if r and pair.weights.degree(m) != d]
    try:
        socle = socle_monomial(pair).to_text()
    except InconsistentResult:
        socle = None
    return make_check(
        "residue_grading", not offenders and socle is not None, socle_degree=d, socle_monomial=socle, offenders=offenders
    )


def primitivity_check(pair: CurveFunctionPair, chains: JordanChainSet, connection: ConnectionPair) -> CheckResult:
    """The class of 1 is a chain vector with nu = p_total - e, the period matrix is the identity,
    and 1 is an eigenvector of Ainf with eigenvalue -lambda(1); A0 sends it along its chain."""
    q = pair.milnor_ring
    has_unit = bool(q.staircase) and q.staircase[0] == Monomial(0, 0)
    try:
        u = chains.unit_index
    except ValueError:
        return make_check("primitivity", False, unit_in_staircase=has_unit, unit_is_chain_vector=False)
    unit = chains.vectors()[u]
    nu_ok = unit.nu == pair.p_total - pair.e
    # d F / d u_beta = h_beta, whose class in chain coordinates is the beta-th unit vector
    period = QMatrix.from_columns(
        [chains.chain_coordinates(q.coordinates(v.polynomial)) for v in chains.vectors()], rows=chains.size
    )
    period_ok = period == QMatrix.identity(chains.size)
    column = connection.Ainf.column(u)
    eigen_ok = all(c == (-unit.lam if i == u else 0) for i, c in enumerate(column))
    i, j = unit.label
    shift = [Fraction(0)] * chains.size
    if j + 1 < len(chains.chains[i]):
        shift[chains.index_of((i, j + 1))] = Fraction(1)
    shift_ok = connection.A0.column(u) == shift
    return make_check(
        "primitivity",
        has_unit and nu_ok and period_ok and eigen_ok and shift_ok,
        unit_in_staircase=has_unit,
        unit_nu=unit.nu,
        expected_nu=pair.p_total - pair.e,
        eigenvalue=-unit.lam,
        period_identity=period_ok,
        residue_eigenvector=eigen_ok,
        a0_unit_column=shift_ok,
    )


def nilpotency_indices(data: FrobeniusData) -> list[int | None]:
    """Nilpotency index of h * (.) for every non-unit basis element; None for the unit
    and for elements that are not nilpotent within size steps."""
    out: list[int | None] = []
    for a in range(data.size):
        if a == data.unit_index:
            out.append(None)
            continue
        L = data.left_multiplication(a)
        power = L
        index = None
        for m in range(1, data.size + 1):
            if power.is_zero():
                index = m
                break
            power = power @ L
        out.append(index)
    return out


def nilpotency_probe(data: FrobeniusData) -> CheckResult:
    """Every non-unit basis element acts nilpotently, with index at most the algebra dimension."""
    indices = nilpotency_indices(data)
    failing = [a for a, idx in enumerate(indices) if a != data.unit_index and idx is None]
    return make_check(f"nilpotency_{data.basis_kind}", not failing, indices=indices, not_nilpotent=failing)


# ---- fibre probes ----
@dataclass(frozen=True)
class FibreProbeReport:
    t0: Fraction
    u: tuple[Fraction, ...]
    dim: int | None
    status: Literal["semisimple", "dimension_mismatch", "inconclusive"]
    element: Poly | None = None
    minimal_polynomial: tuple[Fraction, ...] | None = None
    note: str | None = None

    @property
    def semisimple(self) -> bool:
        return self.status == "semisimple"


def minimal_polynomial(z: Poly, ring: QuotientRing) -> list[Fraction]:
    """Monic minimal polynomial of z in ring, constant term first (Krylov sequence of 1)."""
    M = mult_matrix(z, ring)
    echelon = EchelonBasis(ring.dim)
    vector = ring.coordinates(Poly.one())
    while (coeffs := echelon.add(vector)) is None:
        vector = M.apply(vector)
    return [-coeffs.get(k, Fraction(0)) for k in range(echelon.size)] + [Fraction(1)]


def is_squarefree(coeffs: Sequence[Fraction]) -> bool:
    X = sympy.Symbol("X")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], X)
    return poly.degree() <= 1 or poly.is_sqf


def random_lower_order_u(chains: JordanChainSet, seed: int) -> list[Fraction]:
    """Seeded small rationals on basis elements of degree < 1, zero elsewhere."""
    rng = np.random.default_rng(seed)
    out = []
    for v in chains.vectors():
        num, den = (int(x) for x in rng.integers(1, 8, size=2))
        sign = 1 if rng.integers(0, 2) else -1
        out.append(Fraction(sign * num, den) if v.degree < 1 else Fraction(0))
    return out


def fibre_semisimplicity_probe(
    pair: CurveFunctionPair,
    t0: Fraction,
    u: Sequence[Fraction] | None = None,
    seed: int = 0,
    chains: JordanChainSet | None = None,
    retries: int | None = None,
) -> FibreProbeReport:
    """On O/(g - t0, J_F) with F = f + sum u_beta h_beta: dim = mu, and a random element with
    squarefree minimal polynomial of degree mu certifies semisimplicity. The element is a
    seeded linear form a*x + b*y, which separates the points of a reduced fibre for all
    but finitely many (a : b)."""
    if t0 == 0:
        raise ValueError("the fibre probe needs t0 != 0; the algebra at the origin is local")
    chains = chains or homogeneous_jordan_chains(pair)
    retries = get_settings().probe_retries if retries is None else retries
    u = tuple(Fraction(c) for c in (u if u is not None else [0] * chains.size))
    if len(u) != chains.size:
        raise ValueError(f"u has {len(u)} entries but the unfolding basis has {chains.size}")
    F = pair.f
    for c, v in zip(u, chains.vectors()):
        if c:
            F = F + v.polynomial.scale(c)
    J_F = jacobian_det(F, pair.g)
    try:
        ring = fibre_ring(pair, t0, J_F)
    except InfiniteDimensional:
        logger.warning("fibre probe t0=%s: quotient is infinite-dimensional", t0)
        return FibreProbeReport(t0, u, None, "dimension_mismatch", note="O/(g - t0, J_F) is infinite-dimensional")
    if ring.dim != pair.mu:
        logger.warning("fibre probe t0=%s: dim %d != mu %d", t0, ring.dim, pair.mu)
        return FibreProbeReport(
            t0, u, ring.dim, "dimension_mismatch", note=f"dim {ring.dim} differs from mu {pair.mu}; u is not generic"
        )

    rng = np.random.default_rng(seed)
    for attempt in range(retries):
        a, b = (int(v) for v in (rng.integers(1, 8), rng.integers(-7, 8)))
        z = Poly({Monomial(1, 0): Fraction(a), Monomial(0, 1): Fraction(b)})
        mp = minimal_polynomial(z, ring)
        if len(mp) - 1 == ring.dim and is_squarefree(mp):
            logger.info("fibre probe t0=%s: semisimple after %d attempt(s)", t0, attempt + 1)
            return FibreProbeReport(t0, u, ring.dim, "semisimple", element=z, minimal_polynomial=tuple(mp))
    logger.warning("fibre probe t0=%s: no separable generator found in %d attempts", t0, retries)
    return FibreProbeReport(t0, u, ring.dim, "inconclusive", note=f"no separable generator in {retries} attempts")


def fibre_probe_check(reports: Sequence[FibreProbeReport], pair: CurveFunctionPair) -> CheckResult:
    """Every given probe has dimension mu. Callers pass only probes with generated u."""
    dims = {f"{r.t0}|{','.join(str(c) for c in r.u)}": r.status for r in reports}
    passed = all(r.dim == pair.mu for r in reports)
    return make_check("fibre_probes", passed, mu=pair.mu, statuses=dims)
