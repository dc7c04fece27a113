"""
Groebner bases, normal forms and zero-dimensional quotient rings in Q[x, y].

The monomial order is weighted degree first (exact rational comparison), then
lex with x > y. Buchberger uses the normal pair-selection strategy (smallest lcm
first), skips pairs by the coprime and chain criteria, and finishes with full
inter-reduction, so the output is the reduced basis and depends only on the ideal.
Unless told otherwise, every basis element also remembers how it was
built from the input generators; ``divide`` uses that to return cofactors.

Exact linear algebra on QMatrix is delegated to sympy.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import sympy

from curvefrob.errors import EmptyIdealError, InfiniteDimensional
from curvefrob.logging_config import get_logger
from curvefrob.polycore import Monomial, Poly, WeightSystem

logger = get_logger(__name__)


# ---- monomial order ----
@dataclass(frozen=True)
class MonomialOrder:
    """Weighted degree, ties broken lexicographically with x > y."""

    weights: WeightSystem

    def key(self, m: Monomial) -> tuple[Fraction, int, int]:
        return (self.weights.degree(m), m.exp_x, m.exp_y)

    def leading_monomial(self, p: Poly) -> Monomial:
        if p.is_zero:
            raise ValueError("the zero polynomial has no leading monomial")
        return max(p.monomials(), key=self.key)

    def leading_term(self, p: Poly) -> tuple[Monomial, Fraction]:
        m = self.leading_monomial(p)
        return m, p.coefficient(m)

    def monic(self, p: Poly) -> Poly:
        _, c = self.leading_term(p)
        return p.scale(1 / c)


# ---- exact matrices ----
def _to_sympy_rational(c: Fraction) -> sympy.Rational:
    return sympy.Rational(c.numerator, c.denominator)


def _from_sympy(e: sympy.Expr) -> Fraction:
    r = sympy.Rational(e)
    return Fraction(int(r.p), int(r.q))


@dataclass(frozen=True)
class QMatrix:
    """Dense rectangular matrix of Fractions; entries[i][j] is row i, column j."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match a {self.rows}x{self.cols} shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction | int]]) -> QMatrix:
        data = tuple(tuple(Fraction(v) for v in r) for r in rows)
        return cls(len(data), len(data[0]) if data else 0, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Fraction | int]], rows: int | None = None) -> QMatrix:
        n_rows = rows if rows is not None else (len(columns[0]) if columns else 0)
        data = tuple(tuple(Fraction(columns[j][i]) for j in range(len(columns))) for i in range(n_rows))
        return cls(n_rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls(rows, cols, tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_sympy(cls, m: sympy.Matrix) -> QMatrix:
        return cls(m.rows, m.cols, tuple(tuple(_from_sympy(m[i, j]) for j in range(m.cols)) for i in range(m.rows)))

    def to_sympy(self) -> sympy.Matrix:
        if self.rows == 0 or self.cols == 0:
            return sympy.zeros(self.rows, self.cols)
        return sympy.Matrix([[_to_sympy_rational(v) for v in r] for r in self.entries])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[Fraction]:
        return [self.entries[i][j] for i in range(self.rows)]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i])

    def transpose(self) -> QMatrix:
        return QMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_cols = [other.column(j) for j in range(other.cols)]
        return QMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in other_cols) for r in self.entries),
        )

    def apply(self, vector: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * b for a, b in zip(r, vector)), Fraction(0)) for r in self.entries]

    def __add__(self, other: QMatrix) -> QMatrix:
        return QMatrix(self.rows, self.cols, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: QMatrix) -> QMatrix:
        return self + other.scale(-1)

    def scale(self, c: Fraction | int) -> QMatrix:
        return QMatrix(self.rows, self.cols, tuple(tuple(v * c for v in r) for r in self.entries))

    def power(self, n: int) -> QMatrix:
        result = QMatrix.identity(self.rows)
        for _ in range(n):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self.entries) for j, v in enumerate(r) if i != j)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i))

    def diagonal(self) -> list[Fraction]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def nonzero_entries(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, v) for i, r in enumerate(self.entries) for j, v in enumerate(r) if v != 0]

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self.to_sympy().rank()

    def inverse(self) -> QMatrix:
        return QMatrix.from_sympy(self.to_sympy().inv())

    def nullspace(self) -> list[list[Fraction]]:
        if self.cols == 0:
            return []
        if self.rows == 0:
            return [[Fraction(int(i == j)) for i in range(self.cols)] for j in range(self.cols)]
        return [[_from_sympy(v) for v in vec] for vec in self.to_sympy().nullspace()]

    def solve(self, rhs: Sequence[Fraction]) -> list[Fraction]:
        """Solution of self * v = rhs; self must have full column rank and rhs lie in its image."""
        b = sympy.Matrix([_to_sympy_rational(Fraction(v)) for v in rhs])
        solution, params = self.to_sympy().gauss_jordan_solve(b)
        if params.shape[0]:
            raise ValueError("the system has more than one solution")
        return [_from_sympy(v) for v in solution]

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.entries]


def matrix_rank(vectors: Sequence[Sequence[Fraction]], dim: int) -> int:
    """Rank of a family of coordinate vectors of length ``dim``."""
    if not vectors:
        return 0
    return QMatrix.from_columns(vectors, rows=dim).rank()


class EchelonBasis:
    """Running row echelon form of the vectors added so far, for one-pass dependency tests.

    Every stored row remembers its expression in the added vectors, so a dependent
    vector comes back with its coefficients.
    """

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.size = 0
        self._rows: list[tuple[int, list[Fraction], dict[int, Fraction]]] = []

    def express(self, vector: Sequence[Fraction]) -> tuple[list[Fraction], dict[int, Fraction]]:
        """(residual, coeffs) with vector = residual + sum(coeffs[k] * added[k])."""
        residual = [Fraction(v) for v in vector]
        coeffs: dict[int, Fraction] = {}
        for pivot, row, combo in self._rows:
            c = residual[pivot]
            if not c:
                continue
            for i, r in enumerate(row):
                if r:
                    residual[i] -= c * r
            for k, a in combo.items():
                coeffs[k] = coeffs.get(k, Fraction(0)) + c * a
        return residual, coeffs

    def add(self, vector: Sequence[Fraction]) -> dict[int, Fraction] | None:
        """Add vector; when it already lies in the span, add nothing and return its coefficients."""
        residual, coeffs = self.express(vector)
        pivot = next((i for i, v in enumerate(residual) if v), None)
        if pivot is None:
            return coeffs
        s = residual[pivot]
        combo = {k: -a / s for k, a in coeffs.items() if a}
        combo[self.size] = 1 / s
        self._rows.append((pivot, [v / s for v in residual], combo))
        self.size += 1
        return None


# ---- Groebner bases ----
@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis, sorted by ascending leading monomial.

    cofactors[i][k] is the coefficient of inputs[k] in generators[i].
    """

    generators: tuple[Poly, ...]
    order: MonomialOrder
    inputs: tuple[Poly, ...] = ()
    cofactors: tuple[tuple[Poly, ...], ...] = ()

    @cached_property
    def leading_monomials(self) -> tuple[Monomial, ...]:
        return tuple(self.order.leading_monomial(g) for g in self.generators)

    def __len__(self) -> int:
        return len(self.generators)


def _reduce(
    p: Poly,
    generators: Sequence[Poly],
    leading: Sequence[Monomial],
    order: MonomialOrder,
    track: bool = False,
) -> tuple[Poly, list[dict[Monomial, Fraction]]]:
    """Full division of p by monic generators: p = sum(q_i * g_i) + r, r fully reduced.

    Returns r and, when track is set, the quotients q_i as term maps.
    """
    work: dict[Monomial, Fraction] = dict(p.terms)
    remainder: dict[Monomial, Fraction] = {}
    quotients: list[dict[Monomial, Fraction]] = [{} for _ in generators] if track else []
    while work:
        m = max(work, key=order.key)
        c = work[m]
        for idx, lm in enumerate(leading):
            if lm.divides(m):
                break
        else:
            remainder[m] = work.pop(m)
            continue
        q = m.quotient(lm)
        for gm, gc in generators[idx]:
            t = gm * q
            s = work.get(t, 0) - c * gc
            if s:
                work[t] = s
            else:
                work.pop(t, None)
        if track:
            qs = quotients[idx]
            s = qs.get(q, 0) + c
            if s:
                qs[q] = s
            else:
                qs.pop(q, None)
    return Poly(remainder), quotients


def _combine(quotients: Sequence[dict[Monomial, Fraction]], cofactors: Sequence[Sequence[Poly]], width: int) -> list[Poly]:
    out = [Poly.zero() for _ in range(width)]
    for q_terms, cof in zip(quotients, cofactors):
        if not q_terms:
            continue
        q = Poly(q_terms)
        for k in range(width):
            if not cof[k].is_zero:
                out[k] = out[k] + q * cof[k]
    return out


def _chain_criterion(i: int, j: int, lcm: Monomial, leading: Sequence[Monomial], pairs: set[tuple[int, int]]) -> bool:
    """Some third leading monomial divides lcm and both of its pairs with i and j are done."""
    for k, lm in enumerate(leading):
        if k in (i, j) or not lm.divides(lcm):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def buchberger(generators: Iterable[Poly], order: MonomialOrder, track_cofactors: bool = True) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal spanned by ``generators``.

    With ``track_cofactors`` every element keeps its expression in the inputs, which
    ``divide`` needs; dimension counts switch it off.
    """
    inputs = tuple(generators)
    width = len(inputs) if track_cofactors else 0
    basis: list[Poly] = []
    cofs: list[list[Poly]] = []
    for k, g in enumerate(inputs):
        if g.is_zero:
            continue
        _, lc = order.leading_term(g)
        unit = [Poly.zero()] * width
        if track_cofactors:
            unit[k] = Poly.constant(1 / lc)
        basis.append(g.scale(1 / lc))
        cofs.append(unit)
    if not basis:
        raise EmptyIdealError("cannot build a Groebner basis from zero generators only")

    leading = [order.leading_monomial(g) for g in basis]
    pairs: set[tuple[int, int]] = {(i, j) for j in range(len(basis)) for i in range(j)}
    reductions = skipped = 0
    while pairs:
        i, j = min(pairs, key=lambda ij: (order.key(leading[ij[0]].lcm(leading[ij[1]])), ij))
        pairs.discard((i, j))
        lm_i, lm_j = leading[i], leading[j]
        lcm = lm_i.lcm(lm_j)
        if lm_i.coprime(lm_j) or _chain_criterion(i, j, lcm, leading, pairs):
            skipped += 1
            continue
        mi, mj = lcm.quotient(lm_i), lcm.quotient(lm_j)
        s_poly = basis[i].mul_term(mi, Fraction(1)) - basis[j].mul_term(mj, Fraction(1))
        r, quotients = _reduce(s_poly, basis, leading, order, track=track_cofactors)
        reductions += 1
        if r.is_zero:
            continue
        _, lc = order.leading_term(r)
        basis.append(r.scale(1 / lc))
        if track_cofactors:
            s_cof = [
                cofs[i][k].mul_term(mi, Fraction(1)) - cofs[j][k].mul_term(mj, Fraction(1)) for k in range(width)
            ]
            r_cof = [a - b for a, b in zip(s_cof, _combine(quotients, cofs, width))]
            cofs.append([c.scale(1 / lc) for c in r_cof])
        else:
            cofs.append([])
        leading.append(order.leading_monomial(basis[-1]))
        new = len(basis) - 1
        pairs.update((old, new) for old in range(new))

    # drop elements whose leading monomial is divisible by another's
    keep: list[int] = []
    for i, lm in enumerate(leading):
        dominated = any(
            leading[j].divides(lm) and (leading[j] != lm or j < i) for j in range(len(basis)) if j != i
        )
        if not dominated:
            keep.append(i)

    # inter-reduce the tails
    final: list[tuple[Poly, list[Poly]]] = []
    for i in keep:
        others = [k for k in keep if k != i]
        head_m, head_c = order.leading_term(basis[i])
        tail = basis[i] - Poly({head_m: head_c})
        r, quotients = _reduce(
            tail, [basis[k] for k in others], [leading[k] for k in others], order, track=track_cofactors
        )
        poly = Poly({head_m: head_c}) + r
        cof = [a - b for a, b in zip(cofs[i], _combine(quotients, [cofs[k] for k in others], width))]
        final.append((poly, cof))
    final.sort(key=lambda pc: order.key(order.leading_monomial(pc[0])))

    logger.debug(
        "buchberger: %d inputs -> %d generators after %d S-reductions (%d pairs skipped)",
        len(inputs), len(final), reductions, skipped,
    )
    return GroebnerBasis(
        generators=tuple(p for p, _ in final),
        order=order,
        inputs=inputs,
        cofactors=tuple(tuple(c) for _, c in final) if track_cofactors else (),
    )


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    """Remainder of full division; no term is divisible by a leading monomial of gb."""
    if p.is_zero:
        return p
    r, _ = _reduce(p, gb.generators, gb.leading_monomials, gb.order)
    return r


def divide(p: Poly, gb: GroebnerBasis) -> tuple[Poly, list[Poly]]:
    """(r, a) with p - r = sum(a[k] * gb.inputs[k]) and r = normal_form(p, gb)."""
    width = len(gb.inputs)
    if not gb.cofactors and gb.generators:
        raise ValueError("divide needs a Groebner basis built with track_cofactors=True")
    if p.is_zero:
        return p, [Poly.zero() for _ in range(width)]
    r, quotients = _reduce(p, gb.generators, gb.leading_monomials, gb.order, track=True)
    return r, _combine(quotients, gb.cofactors, width)


# ---- quotient rings ----
@dataclass(frozen=True)
class QuotientRing:
    """Q[x, y] / ideal(gb) with its staircase of standard monomials."""

    gb: GroebnerBasis
    staircase: tuple[Monomial, ...]
    _index: dict[Monomial, int] = field(default_factory=dict, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._index.update({m: i for i, m in enumerate(self.staircase)})

    @property
    def dim(self) -> int:
        return len(self.staircase)

    @property
    def weights(self) -> WeightSystem:
        return self.gb.order.weights

    def reduce(self, p: Poly) -> Poly:
        return normal_form(p, self.gb)

    def coordinates(self, p: Poly) -> list[Fraction]:
        """Coordinates of the class of p in the staircase basis."""
        vec = [Fraction(0)] * self.dim
        for m, c in self.reduce(p):
            vec[self._index[m]] = c
        return vec

    def element(self, vector: Sequence[Fraction]) -> Poly:
        """Staircase polynomial with the given coordinates."""
        return Poly({m: c for m, c in zip(self.staircase, vector)})

    def index_of(self, m: Monomial) -> int:
        return self._index[m]

    def degrees(self) -> list[Fraction]:
        return [self.weights.degree(m) for m in self.staircase]


def staircase_basis(gb: GroebnerBasis) -> QuotientRing:
    """Standard monomials of gb, ascending weighted degree then descending exp_x."""
    leading = gb.leading_monomials
    pure_x = [m.exp_x for m in leading if m.exp_y == 0]
    pure_y = [m.exp_y for m in leading if m.exp_x == 0]
    if not pure_x or not pure_y:
        raise InfiniteDimensional(
            "quotient is infinite-dimensional: no pure power of "
            + ("x" if not pure_x else "y")
            + " among the leading monomials"
        )
    a, b = min(pure_x), min(pure_y)
    stairs = [
        Monomial(i, j)
        for i in range(a)
        for j in range(b)
        if not any(lm.divides(Monomial(i, j)) for lm in leading)
    ]
    w = gb.order.weights
    stairs.sort(key=lambda m: (w.degree(m), -m.exp_x))
    return QuotientRing(gb=gb, staircase=tuple(stairs))


def quotient_ring(generators: Iterable[Poly], order: MonomialOrder, track_cofactors: bool = True) -> QuotientRing:
    return staircase_basis(buchberger(generators, order, track_cofactors))


def quotient_dim(generators: Iterable[Poly], order: MonomialOrder) -> int:
    return quotient_ring(generators, order, track_cofactors=False).dim


def mult_matrix(h: Poly, q: QuotientRing) -> QMatrix:
    """Multiplication by h in the staircase basis; column j is the image of staircase[j]."""
    columns = [q.coordinates(h.mul_term(m, Fraction(1))) for m in q.staircase]
    return QMatrix.from_columns(columns, rows=q.dim)
