"""
Brieskorn-lattice computations at t = 0.

Multiplication by -f on O/(g, J) is nilpotent and raises weighted degree by exactly 1.
A Jordan basis made of homogeneous vectors gives a basis of the lattice over
C[t][tau^-1]; its nu-values, clamped to [0, 1], are the spectrum, and in the corrected
("tilde") basis the connection d/dtau is A0 + Ainf / tau with constant A0 and diagonal Ainf.

``brieskorn_reduce`` writes any class [h alpha] in the chain basis by repeatedly
splitting h = (chain part) + a*g + b*J and using g ~ t and b*J*alpha ~ tau^-1 * Jac(b, g)*alpha.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from schemas import CheckResult

from curvefrob.curvesing import (
    CurveFunctionPair,
    MilnorReport,
    make_check,
    milnor_numbers,
    nu_value_of_degree,
    validate_pair,
)
from curvefrob.errors import InconsistentResult
from curvefrob.idealkit import QMatrix, divide, matrix_rank, mult_matrix
from curvefrob.logging_config import get_logger
from curvefrob.polycore import Poly, WeightSystem, homogeneous_components, jacobian_det, parse_polynomial

logger = get_logger(__name__)

Label = tuple[int, int]
Vector = tuple[Fraction, ...]


# ---- nu and lambda ----
def nu_value(degree: Fraction, pair: CurveFunctionPair) -> Fraction:
    """nu(h) = deg h + p_total - e."""
    return nu_value_of_degree(degree, pair)


def lambda_clamp(nu: Fraction) -> Fraction:
    if nu > 1:
        return Fraction(1)
    if nu < 0:
        return Fraction(0)
    return nu


# ---- -f and its Jordan chains ----
def minus_f_operator(pair: CurveFunctionPair) -> QMatrix:
    return mult_matrix(-pair.f, pair.milnor_ring)


@dataclass(frozen=True)
class ChainVector:
    label: Label
    coordinates: Vector
    polynomial: Poly
    degree: Fraction
    nu: Fraction

    @property
    def lam(self) -> Fraction:
        return lambda_clamp(self.nu)


@dataclass(frozen=True)
class JordanChainSet:
    """Homogeneous Jordan chains of -f; chain c is (h, -f*h, (-f)^2*h, ...)."""

    chains: tuple[tuple[ChainVector, ...], ...]

    def vectors(self) -> list[ChainVector]:
        return [v for chain in self.chains for v in chain]

    def labels(self) -> list[Label]:
        return [v.label for v in self.vectors()]

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.chains)

    @property
    def heads(self) -> list[ChainVector]:
        return [c[0] for c in self.chains]

    @property
    def tails(self) -> list[ChainVector]:
        return [c[-1] for c in self.chains]

    @cached_property
    def _positions(self) -> dict[Label, int]:
        return {label: i for i, label in enumerate(self.labels())}

    def index_of(self, label: Label) -> int:
        return self._positions[label]

    def basis_matrix(self) -> QMatrix:
        """Columns are the staircase coordinates of the chain vectors, in label order."""
        return QMatrix.from_columns([v.coordinates for v in self.vectors()], rows=self.size)

    @cached_property
    def basis_inverse(self) -> QMatrix:
        matrix = self.basis_matrix()
        rank = matrix.rank()
        if rank < self.size:
            raise InconsistentResult(f"chain vectors span only {rank} of {self.size} dimensions")
        return matrix.inverse()

    @property
    def unit_index(self) -> int:
        """Position of the chain vector equal to the class of 1 (the first staircase monomial)."""
        unit = tuple(Fraction(int(i == 0)) for i in range(self.size))
        for i, v in enumerate(self.vectors()):
            if v.coordinates == unit:
                return i
        raise ValueError("the class of 1 is not a chain vector")

    def chain_coordinates(self, staircase_vector: Sequence[Fraction]) -> list[Fraction]:
        return self.basis_inverse.apply(staircase_vector)


def _normalize(vec: Sequence[Fraction]) -> Vector:
    lead = next(c for c in vec if c != 0)
    return tuple(c / lead for c in vec)


def homogeneous_jordan_chains(pair: CurveFunctionPair, operator: QMatrix | None = None) -> JordanChainSet:
    """Jordan chains of -f made of homogeneous vectors, computed degree by degree.

    Heads of length m span a complement of ker N^(m-1) + N(ker N^(m+1)) inside ker N^m,
    one weighted degree at a time, chosen greedily from the exact null space basis.
    """
    q = pair.milnor_ring
    N = operator if operator is not None else minus_f_operator(pair)
    mu = q.dim
    blocks: dict[Fraction, list[int]] = {}
    for i, d in enumerate(q.degrees()):
        blocks.setdefault(d, []).append(i)

    powers = [QMatrix.identity(mu)]
    while not powers[-1].is_zero():
        powers.append(powers[-1] @ N)
    nilpotency = len(powers) - 1

    kernels: dict[tuple[int, Fraction], list[Vector]] = {}

    def kernel(m: int, d: Fraction) -> list[Vector]:
        if d not in blocks or m <= 0:
            return []
        key = (m, d)
        if key not in kernels:
            cols = blocks[d]
            if m >= nilpotency:
                found = [[Fraction(int(k == j)) for k in range(len(cols))] for j in range(len(cols))]
            else:
                sub = QMatrix.from_columns([powers[m].column(c) for c in cols], rows=mu)
                found = sub.nullspace()
            vecs = []
            for local in found:
                full = [Fraction(0)] * mu
                for c, v in zip(cols, local):
                    full[c] = v
                vecs.append(tuple(full))
            kernels[key] = vecs
        return kernels[key]

    heads: list[tuple[int, Vector, Fraction]] = []
    for m in range(nilpotency, 0, -1):
        for d in blocks:
            span: list[Sequence[Fraction]] = list(kernel(m - 1, d))
            span += [N.apply(v) for v in kernel(m + 1, d - 1)]
            rank = matrix_rank(span, mu)
            for cand in kernel(m, d):
                if matrix_rank(span + [cand], mu) > rank:
                    span.append(cand)
                    rank += 1
                    heads.append((m, _normalize(cand), d))

    raw_chains = []
    for length, head, d in heads:
        coords = [head]
        for _ in range(length - 1):
            coords.append(tuple(N.apply(coords[-1])))
        raw_chains.append((length, nu_value(d, pair), head, coords, d))
    raw_chains.sort(key=lambda c: (-c[0], c[1], c[2]))

    minus_f = -pair.f
    chains = []
    for i, (_, head_nu, _, coords, d) in enumerate(raw_chains):
        poly = q.element(coords[0])
        chain = []
        for j, vec in enumerate(coords):
            chain.append(ChainVector(label=(i, j), coordinates=vec, polynomial=poly, degree=d + j, nu=head_nu + j))
            poly = poly * minus_f
        chains.append(tuple(chain))

    result = JordanChainSet(chains=tuple(chains))
    logger.info(
        "Jordan chains: %d chains, lengths %s, nilpotency index %d",
        len(chains),
        [len(c) for c in chains],
        nilpotency,
    )
    return result


# ---- spectrum ----
@dataclass(frozen=True)
class SpectrumTable:
    """Sorted (lambda, multiplicity) pairs."""

    entries: tuple[tuple[Fraction, int], ...]

    @classmethod
    def from_values(cls, values: Iterable[Fraction]) -> SpectrumTable:
        counts = Counter(Fraction(v) for v in values)
        return cls(entries=tuple(sorted(counts.items())))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def values(self) -> list[Fraction]:
        return [lam for lam, m in self.entries for _ in range(m)]

    def to_wire(self) -> list[tuple[str, str]]:
        return [(str(lam), str(m)) for lam, m in self.entries]


def spectrum(pair: CurveFunctionPair, chains: JordanChainSet | None = None) -> SpectrumTable:
    chains = chains or homogeneous_jordan_chains(pair)
    table = SpectrumTable.from_values(v.lam for v in chains.vectors())
    logger.info("spectrum: %s", [(str(lam), m) for lam, m in table.entries])
    return table


def spectrum_symmetry_defect(table: SpectrumTable) -> list[Fraction]:
    """Spectral numbers without a partner 1 - lambda; empty when the spectrum is symmetric about 1/2."""
    values = Counter(table.values())
    mirrored = Counter(1 - lam for lam in table.values())
    return sorted((values - mirrored).elements())


def ak_spectrum_oracle(k: int) -> SpectrumTable:
    """Closed form for f = x on g = x^k + y^2."""
    if k < 2:
        raise ValueError(f"the A_k family needs k >= 2, got {k}")
    if k % 2 == 0:
        return SpectrumTable(entries=((Fraction(0), k // 2), (Fraction(1), k // 2)))
    return SpectrumTable(
        entries=((Fraction(0), (k - 1) // 2), (Fraction(1, 2), 1), (Fraction(1), (k - 1) // 2))
    )


def ak_pair(k: int) -> CurveFunctionPair:
    """The validated pair f = x, g = x^k + y^2 with weights (1, k/2)."""
    if k < 2:
        raise ValueError(f"the A_k family needs k >= 2, got {k}")
    return validate_pair(
        parse_polynomial("x"), parse_polynomial(f"x^{k} + y^2"), WeightSystem(Fraction(1), Fraction(k, 2))
    )


# ---- connection ----
@dataclass(frozen=True)
class ConnectionPair:
    """d/dtau = A0 + Ainf / tau in the tilde basis; columns are images of basis elements."""

    basis_labels: tuple[Label, ...]
    A0: QMatrix
    Ainf: QMatrix


def connection_matrices(pair: CurveFunctionPair, chains: JordanChainSet | None = None) -> ConnectionPair:
    chains = chains or homogeneous_jordan_chains(pair)
    labels = chains.labels()
    mu = len(labels)
    a0 = [[Fraction(0)] * mu for _ in range(mu)]
    ainf = [[Fraction(0)] * mu for _ in range(mu)]
    for col, v in enumerate(chains.vectors()):
        i, j = v.label
        if j + 1 < len(chains.chains[i]):
            a0[chains.index_of((i, j + 1))][col] = Fraction(1)
        ainf[col][col] = -v.lam
    return ConnectionPair(basis_labels=tuple(labels), A0=QMatrix.from_rows(a0), Ainf=QMatrix.from_rows(ainf))


# ---- Brieskorn lattice elements ----
@dataclass(frozen=True)
class BrieskornElement:
    """sum over (k, s) of tau^-k * t^s * (coefficient vector over the chain basis)."""

    size: int
    terms: Mapping[tuple[int, int], Vector] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {ks: tuple(Fraction(c) for c in vec) for ks, vec in self.terms.items() if any(vec)}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def basis_element(cls, size: int, index: int, k: int = 0, coeff: Fraction | int = 1) -> BrieskornElement:
        vec = [Fraction(0)] * size
        vec[index] = Fraction(coeff)
        return cls(size, {(k, 0): tuple(vec)})

    def __add__(self, other: BrieskornElement) -> BrieskornElement:
        out = dict(self.terms)
        for ks, vec in other.terms.items():
            old = out.get(ks, (Fraction(0),) * self.size)
            out[ks] = tuple(a + b for a, b in zip(old, vec))
        return BrieskornElement(self.size, out)

    def __sub__(self, other: BrieskornElement) -> BrieskornElement:
        return self + other.scale(-1)

    def scale(self, c: Fraction | int) -> BrieskornElement:
        return BrieskornElement(self.size, {ks: tuple(v * c for v in vec) for ks, vec in self.terms.items()})

    def shift(self, dk: int) -> BrieskornElement:
        """Multiply by tau^-dk."""
        return BrieskornElement(self.size, {(k + dk, s): vec for (k, s), vec in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def at(self, t0: Fraction | int) -> dict[int, Vector]:
        """Specialize t = t0; level k -> coefficient vector, zero levels dropped."""
        levels: dict[int, list[Fraction]] = {}
        for (k, s), vec in self.terms.items():
            factor = Fraction(t0) ** s if s else Fraction(1)
            acc = levels.setdefault(k, [Fraction(0)] * self.size)
            for i, c in enumerate(vec):
                acc[i] += factor * c
        return {k: tuple(v) for k, v in sorted(levels.items()) if any(v)}

    def at_origin(self) -> dict[int, Vector]:
        return self.at(0)

    def to_wire(self) -> dict[str, list[str]]:
        return {str(k): [str(c) for c in vec] for k, vec in self.at_origin().items()}


def brieskorn_reduce(h: Poly, pair: CurveFunctionPair, chains: JordanChainSet | None = None) -> BrieskornElement:
    """Coordinates of [h alpha] in the chain basis, over C[t] and powers of tau^-1."""
    chains = chains or homogeneous_jordan_chains(pair)
    q = pair.milnor_ring
    gb = q.gb
    reps = [v.polynomial for v in chains.vectors()]
    mu = chains.size
    acc: dict[tuple[int, int], list[Fraction]] = {}
    work: list[tuple[Poly, int, int]] = [(h, 0, 0)]
    steps = 0
    while work:
        p, k, s = work.pop()
        if p.is_zero:
            continue
        parts = homogeneous_components(p, pair.weights)
        if len(parts) > 1:
            work.extend((part, k, s) for part in parts.values())
            continue
        steps += 1
        coeffs = chains.chain_coordinates(q.coordinates(p))
        rest = p
        for c, rep in zip(coeffs, reps):
            if c:
                rest = rest - rep.scale(c)
        remainder, (a, b) = divide(rest, gb)
        if not remainder.is_zero:
            raise ValueError(f"chain representatives do not span the class of {p.to_text(pair.weights)}")
        if any(coeffs):
            slot = acc.setdefault((k, s), [Fraction(0)] * mu)
            for i, c in enumerate(coeffs):
                slot[i] += c
        work.append((a, k, s + 1))
        work.append((jacobian_det(b, pair.g), k + 1, s))
    logger.debug("brieskorn_reduce: %d homogeneous steps for %s", steps, h.to_text(pair.weights))
    return BrieskornElement(mu, {ks: tuple(v) for ks, v in acc.items()})


def tilde_basis(chains: JordanChainSet, pair: CurveFunctionPair) -> list[BrieskornElement]:
    """omega~ = omega + (nu - 1) tau^-1 * previous chain vector when nu > 1, else omega."""
    mu = chains.size
    out = []
    for idx, v in enumerate(chains.vectors()):
        element = BrieskornElement.basis_element(mu, idx)
        if v.nu > 1:
            i, j = v.label
            element = element + BrieskornElement.basis_element(mu, chains.index_of((i, j - 1)), k=1, coeff=v.nu - 1)
        out.append(element)
    return out


def _tau_derivative(element: BrieskornElement, pair: CurveFunctionPair, chains: JordanChainSet) -> dict[int, Vector]:
    """d/dtau of a t-free element, specialized at t = 0."""
    reps = [v.polynomial for v in chains.vectors()]
    total = BrieskornElement(element.size)
    minus_f = -pair.f
    for (k, s), vec in element.terms.items():
        if s:
            raise ValueError("only t-free elements are differentiated here")
        h = Poly.zero()
        for c, rep in zip(vec, reps):
            if c:
                h = h + rep.scale(c)
        if k:
            total = total + BrieskornElement(element.size, {(k + 1, 0): tuple(-k * c for c in vec)})
        total = total + brieskorn_reduce(h * minus_f, pair, chains).shift(k)
    return total.at_origin()


def _in_tilde_basis(levels: Mapping[int, Vector], tilde: list[BrieskornElement]) -> dict[int, Vector]:
    """Rewrite a t-free element, given by levels, in the tilde basis (triangular in tau^-1)."""
    if not levels:
        return {}
    mu = len(tilde)
    remaining = {k: list(v) for k, v in levels.items()}
    out: dict[int, Vector] = {}
    k = min(remaining)
    top = max(remaining) + mu + 1
    while remaining and k <= top:
        vec = remaining.pop(k, None)
        if vec and any(vec):
            out[k] = tuple(vec)
            for idx, c in enumerate(vec):
                if not c:
                    continue
                for (tk, _), tvec in tilde[idx].terms.items():
                    if tk == 0:
                        continue
                    slot = remaining.setdefault(k + tk, [Fraction(0)] * mu)
                    for j, tc in enumerate(tvec):
                        slot[j] -= c * tc
        k += 1
    return out


# ---- checks ----
def head_nu_bound_check(chains: JordanChainSet, pair: CurveFunctionPair) -> CheckResult:
    """Every chain head has nu <= 1; every tail lying in the image of (g_x, g_y) has nu > 0."""
    q = pair.milnor_ring
    bad_heads = [v.label for v in chains.heads if v.nu > 1]
    jac_image = []
    for m in q.staircase:
        for partial in (pair.g_x, pair.g_y):
            if not partial.is_zero:
                jac_image.append(q.coordinates(partial.mul_term(m, Fraction(1))))
    image_rank = matrix_rank(jac_image, q.dim)
    tails_in_image = 0
    bad_tails = []
    for v in chains.tails:
        if matrix_rank(jac_image + [v.coordinates], q.dim) == image_rank:
            tails_in_image += 1
            if v.nu <= 0:
                bad_tails.append(v.label)
    return make_check(
        "head_nu_bound",
        not bad_heads and not bad_tails,
        head_nu=[v.nu for v in chains.heads],
        heads_above_one=bad_heads,
        tails_in_jacobian_image=tails_in_image,
        tails_with_nonpositive_nu=bad_tails,
    )


def jordan_chain_check(
    chains: JordanChainSet, pair: CurveFunctionPair, milnor: MilnorReport | None = None
) -> CheckResult:
    """Chain vectors form a homogeneous basis, chain count is mu2, nu steps by 1, tails are killed by f."""
    milnor = milnor or milnor_numbers(pair)
    q = pair.milnor_ring
    basis_rank = chains.basis_matrix().rank()
    homogeneous = all(pair.degree(v.polynomial) == v.degree for v in chains.vectors())
    coords_match = all(tuple(q.coordinates(v.polynomial)) == v.coordinates for v in chains.vectors())
    nu_steps = all(b.nu - a.nu == 1 for chain in chains.chains for a, b in zip(chain, chain[1:]))
    tails_killed = all(q.reduce(v.polynomial * pair.f).is_zero for v in chains.tails)
    return make_check(
        "jordan_chains",
        basis_rank == q.dim
        and len(chains.chains) == milnor.mu2
        and chains.size == q.dim
        and homogeneous
        and coords_match
        and nu_steps
        and tails_killed,
        rank=basis_rank,
        mu=q.dim,
        chain_count=len(chains.chains),
        mu2=milnor.mu2,
        homogeneous=homogeneous,
        representatives_match=coords_match,
        nu_steps_by_one=nu_steps,
        tails_killed=tails_killed,
    )


def minus_f_check(pair: CurveFunctionPair, operator: QMatrix | None = None) -> CheckResult:
    """-f is nilpotent on O/(g, J) and raises weighted degree by exactly 1."""
    N = operator if operator is not None else minus_f_operator(pair)
    q = pair.milnor_ring
    degrees = q.degrees()
    nilpotent = N.power(q.dim).is_zero()
    graded = all(degrees[i] == degrees[j] + 1 for i, j, _ in N.nonzero_entries())
    return make_check("minus_f_operator", nilpotent and graded, nilpotent=nilpotent, degree_shift_one=graded)


def spectrum_check(table: SpectrumTable, pair: CurveFunctionPair) -> CheckResult:
    in_range = all(0 <= lam <= 1 for lam, _ in table.entries)
    return make_check(
        "spectrum_total",
        table.total == pair.mu and in_range,
        total=table.total,
        mu=pair.mu,
        all_in_unit_interval=in_range,
        symmetry_defect=spectrum_symmetry_defect(table),
    )


def connection_shape_check(connection: ConnectionPair, chains: JordanChainSet, milnor: MilnorReport) -> CheckResult:
    """Ainf = diag(-lambda); A0 is a 0/1 chain shift with mu - mu2 ones and is nilpotent."""
    mu = len(connection.basis_labels)
    expected_diag = [-v.lam for v in chains.vectors()]
    diag_ok = connection.Ainf.is_diagonal() and connection.Ainf.diagonal() == expected_diag
    ones = connection.A0.nonzero_entries()
    zero_one = all(v == 1 for _, _, v in ones)
    labels = connection.basis_labels
    shift_ok = all(labels[i] == (labels[j][0], labels[j][1] + 1) for i, j, _ in ones)
    max_length = max(len(c) for c in chains.chains)
    nilpotent = connection.A0.power(max_length).is_zero()
    return make_check(
        "connection_shape",
        diag_ok and zero_one and shift_ok and len(ones) == mu - milnor.mu2 and nilpotent,
        ainf_diagonal_minus_lambda=diag_ok,
        a0_zero_one=zero_one,
        a0_chain_shift=shift_ok,
        a0_ones=len(ones),
        expected_ones=mu - milnor.mu2,
        a0_nilpotent=nilpotent,
    )


def connection_consistency_check(
    pair: CurveFunctionPair,
    chains: JordanChainSet | None = None,
    connection: ConnectionPair | None = None,
) -> CheckResult:
    """d/dtau of every tilde element, computed in the lattice, equals its A0 and Ainf columns."""
    chains = chains or homogeneous_jordan_chains(pair)
    connection = connection or connection_matrices(pair, chains)
    tilde = tilde_basis(chains, pair)
    mismatches = []
    for col, element in enumerate(tilde):
        derived = _in_tilde_basis(_tau_derivative(element, pair, chains), tilde)
        expected: dict[int, Vector] = {}
        level0 = tuple(connection.A0.column(col))
        level1 = tuple(connection.Ainf.column(col))
        if any(level0):
            expected[0] = level0
        if any(level1):
            expected[1] = level1
        if derived != expected:
            mismatches.append({"label": connection.basis_labels[col], "derived": derived, "expected": expected})
    return make_check("connection_consistency", not mismatches, checked=len(tilde), mismatches=mismatches)


def euler_field_check(pair: CurveFunctionPair, chains: JordanChainSet | None = None) -> CheckResult:
    """tau d/dtau [omega] = -nu(omega) [omega] for every chain tail."""
    chains = chains or homogeneous_jordan_chains(pair)
    mu = chains.size
    failures = []
    for v in chains.tails:
        idx = chains.index_of(v.label)
        reduced = brieskorn_reduce(v.polynomial * -pair.f, pair, chains).at_origin()
        expected = BrieskornElement.basis_element(mu, idx, k=1, coeff=-v.nu).at_origin()
        if reduced != expected:
            failures.append({"label": v.label, "nu": v.nu, "reduced": reduced})
    return make_check("euler_field", not failures, tails=len(chains.tails), failures=failures)


def brieskorn_representatives_check(pair: CurveFunctionPair, chains: JordanChainSet) -> CheckResult:
    """Reducing a chain representative returns its own basis vector and nothing else."""
    mu = chains.size
    wrong = []
    for idx, v in enumerate(chains.vectors()):
        if brieskorn_reduce(v.polynomial, pair, chains) != BrieskornElement.basis_element(mu, idx):
            wrong.append(v.label)
    return make_check("brieskorn_representatives", not wrong, checked=mu, wrong=wrong)
