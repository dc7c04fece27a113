"""Tests for Groebner bases, normal forms, staircases and exact matrices."""
from __future__ import annotations

import logging
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from curvefrob.errors import EmptyIdealError, InfiniteDimensional
from curvefrob.idealkit import (
    EchelonBasis,
    MonomialOrder,
    QMatrix,
    buchberger,
    divide,
    mult_matrix,
    normal_form,
    quotient_dim,
    quotient_ring,
    staircase_basis,
)
from curvefrob.polycore import NON_HOMOGENEOUS, Monomial, Poly, WeightSystem, parse_polynomial, weighted_degree

from .conftest import X, Y, to_sympy

STANDARD = MonomialOrder(WeightSystem(1, 1))


def polys(*texts: str) -> list[Poly]:
    return [parse_polynomial(t) for t in texts]


def test_buchberger_examples():
    """Reduced bases of small ideals, sorted by leading monomial."""
    assert buchberger(polys("x^2 + y^2", "2*y"), STANDARD).generators == tuple(polys("y", "x^2"))
    assert buchberger(polys("x"), STANDARD).generators == tuple(polys("x"))
    assert buchberger(polys("x*y", "x - y"), STANDARD).generators == tuple(polys("x - y", "y^2"))


def test_buchberger_rejects_zero_generators():
    """An ideal given by zeros only has no basis."""
    with pytest.raises(EmptyIdealError):
        buchberger([Poly.zero(), Poly.zero()], STANDARD)


@pytest.mark.parametrize(
    "gens",
    [
        ("x^2 + y^2", "2*y"),
        ("x*y", "x - y"),
        ("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"),
        ("x^2 + x*y + y^3", "x*y^2 - 1"),
        ("x^4 + y^4 - 1", "x^2*y - y"),
        ("x^2*y - x", "x*y^2 - y", "x*y - x - y"),
    ],
)
def test_buchberger_matches_sympy_grlex(gens):
    """With unit weights the order is grlex, so sympy's reduced basis must agree."""
    ours = {sympy.expand(to_sympy(g)) for g in buchberger(polys(*gens), STANDARD).generators}
    exprs = [sympy.sympify(g.replace("^", "**"), locals={"x": X, "y": Y}) for g in gens]
    expected = sympy.groebner(exprs, X, Y, order="grlex", domain="QQ")
    assert ours == {sympy.expand(e) for e in expected.exprs}


def test_cofactors_rebuild_every_generator():
    """generators[i] = sum cofactors[i][k] * inputs[k]."""
    gb = buchberger(polys("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"), STANDARD)
    for g, cof in zip(gb.generators, gb.cofactors):
        total = Poly.zero()
        for c, inp in zip(cof, gb.inputs):
            total = total + c * inp
        assert total == g


def test_normal_form_examples():
    """NF(x^2, {y, x^2}) = 0, NF(x + y, {x - y, y^2}) = 2y, NF(0) = 0."""
    gb1 = buchberger(polys("y", "x^2"), STANDARD)
    gb2 = buchberger(polys("x - y", "y^2"), STANDARD)
    assert normal_form(parse_polynomial("x^2"), gb1).is_zero
    assert normal_form(parse_polynomial("x + y"), gb2) == parse_polynomial("2*y")
    assert normal_form(Poly.zero(), gb2).is_zero


def test_normal_form_properties():
    """Ideal members reduce to zero, remainders are fully reduced, NF is linear."""
    gb = buchberger(polys("x^3 + y^2", "2*y"), MonomialOrder(WeightSystem(1, Fraction(3, 2))))
    rng = random.Random(3)
    for _ in range(15):
        p = Poly({Monomial(rng.randint(0, 4), rng.randint(0, 3)): rng.randint(-4, 4) for _ in range(3)})
        q = Poly({Monomial(rng.randint(0, 4), rng.randint(0, 3)): rng.randint(-4, 4) for _ in range(3)})
        for gen in gb.inputs:
            assert normal_form(p * gen, gb).is_zero
        r = normal_form(p, gb)
        assert not any(lm.divides(m) for m in r.monomials() for lm in gb.leading_monomials)
        assert normal_form(p + q.scale(3), gb) == r + normal_form(q, gb).scale(3)


def test_divide_returns_input_cofactors():
    """p - r = sum a_k * inputs[k] for the division result."""
    gb = buchberger(polys("x^2 + y^2", "2*y"), STANDARD)
    p = parse_polynomial("x^3 + x^2 + 5*x*y + 1")
    r, a = divide(p, gb)
    assert r == normal_form(p, gb)
    assert p - r == a[0] * gb.inputs[0] + a[1] * gb.inputs[1]


def test_staircase_examples():
    """Staircases of the model ideals, and the infinite case."""
    for k in range(2, 7):
        q = staircase_basis(buchberger(polys("y", f"x^{k}"), STANDARD))
        assert q.staircase == tuple(Monomial(i, 0) for i in range(k))
        assert q.dim == k
    node = staircase_basis(buchberger(polys("x - y", "y^2"), STANDARD))
    assert node.staircase == (Monomial(0, 0), Monomial(0, 1))
    with pytest.raises(InfiniteDimensional):
        staircase_basis(buchberger(polys("x"), STANDARD))


def test_staircase_is_sorted_by_degree_then_descending_x():
    """Ties in weighted degree put the larger x exponent first."""
    q = quotient_ring(polys("x^2", "y^2"), STANDARD)
    assert q.staircase == (Monomial(0, 0), Monomial(1, 0), Monomial(0, 1), Monomial(1, 1))


def test_quotient_dim_examples():
    """dim O/(x^k + y^2, 2y) = k, dim O/(x, y) = 1, dim O/(x + y, xy) = 2."""
    for k in range(2, 7):
        assert quotient_dim(polys(f"x^{k} + y^2", "2*y"), MonomialOrder(WeightSystem(1, Fraction(k, 2)))) == k
    assert quotient_dim(polys("x", "y"), STANDARD) == 1
    assert quotient_dim(polys("x + y", "x*y"), STANDARD) == 2


def test_mult_matrix_examples():
    """Columns are the images of the staircase monomials."""
    q = quotient_ring(polys("x^2 + y^2", "2*y"), STANDARD)
    m = mult_matrix(parse_polynomial("-x"), q)
    assert m == QMatrix.from_rows([[0, 0], [-1, 0]])
    assert mult_matrix(Poly.one(), q) == QMatrix.identity(2)
    node = quotient_ring(polys("x*y", "x - y"), STANDARD)
    assert node.staircase == (Monomial(0, 0), Monomial(0, 1))
    assert mult_matrix(parse_polynomial("-(x + y)"), node) == QMatrix.from_rows([[0, 0], [-2, 0]])


def test_mult_matrix_is_a_ring_homomorphism():
    """M(ab) = M(a) M(b) and M(a + b) = M(a) + M(b)."""
    q = quotient_ring(polys("x^3 + y^2", "2*y"), MonomialOrder(WeightSystem(1, Fraction(3, 2))))
    a, b = parse_polynomial("x + 2"), parse_polynomial("x^2 - 3*x")
    assert mult_matrix(a * b, q) == mult_matrix(a, q) @ mult_matrix(b, q)
    assert mult_matrix(a + b, q) == mult_matrix(a, q) + mult_matrix(b, q)


def test_qmatrix_linear_algebra():
    """rank, inverse, nullspace and solve are exact."""
    m = QMatrix.from_rows([[1, 2], [3, 4]])
    assert m.rank() == 2
    assert m @ m.inverse() == QMatrix.identity(2)
    assert m.solve([Fraction(5), Fraction(6)]) == [Fraction(-4), Fraction(9, 2)]
    singular = QMatrix.from_rows([[1, 2], [2, 4]])
    assert singular.rank() == 1
    (kernel,) = singular.nullspace()
    assert singular.apply(kernel) == [0, 0]
    assert QMatrix.from_columns([[1, 0, 0], [0, 1, 0]]).transpose() == QMatrix.from_rows([[1, 0, 0], [0, 1, 0]])


def test_untracked_basis_matches_tracked():
    """Dropping the cofactor bookkeeping leaves the reduced basis unchanged; divide then refuses it."""
    for gens in [("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"), ("x^4 + y^4 - 1", "x^2*y - y"), ("x^2", "x*y", "y^3")]:
        tracked = buchberger(polys(*gens), STANDARD)
        plain = buchberger(polys(*gens), STANDARD, track_cofactors=False)
        assert plain.generators == tracked.generators
        assert plain.cofactors == ()
    with pytest.raises(ValueError):
        divide(parse_polynomial("x + y"), plain)


def test_chain_criterion_skips_redundant_pairs(caplog):
    """(x^3, x^2*y, x*y^2, y^3): one coprime pair and two chain-covered pairs are never reduced."""
    caplog.set_level(logging.DEBUG, logger="curvefrob.idealkit")
    gb = buchberger(polys("y^3", "x*y^2", "x^2*y", "x^3"), STANDARD)
    assert set(gb.leading_monomials) == {Monomial(3, 0), Monomial(2, 1), Monomial(1, 2), Monomial(0, 3)}
    assert staircase_basis(gb).dim == 6
    assert any("(3 pairs skipped)" in r.getMessage() for r in caplog.records)


def test_groebner_basis_and_normal_forms_stay_homogeneous(corpus_pair):
    """Homogeneous inputs give homogeneous basis elements and normal forms of unchanged degree."""
    w = corpus_pair.weights
    gb = corpus_pair.milnor_ring.gb
    for g in gb.generators:
        assert weighted_degree(g, w) is not NON_HOMOGENEOUS
    f, J = corpus_pair.f, corpus_pair.J
    for p in (f * f, f * J, f.power(3), Poly.monomial(3, 1), Poly.monomial(1, 3), Poly.monomial(4, 4)):
        r = normal_form(p, gb)
        assert r.is_zero or weighted_degree(r, w) == weighted_degree(p, w)


def test_reduced_basis_ignores_the_presentation(corpus_pair):
    """Permuted, rescaled or S-polynomial-augmented generators of (g, J) give the same staircase."""
    g, J, order = corpus_pair.g, corpus_pair.J, corpus_pair.order
    reference = quotient_ring([g, J], order)
    lm_g, c_g = order.leading_term(g)
    lm_j, c_j = order.leading_term(J)
    lcm = lm_g.lcm(lm_j)
    s_poly = g.mul_term(lcm.quotient(lm_g), 1 / c_g) - J.mul_term(lcm.quotient(lm_j), 1 / c_j)
    presentations = [
        [J, g],
        [g.scale(3), J.scale(Fraction(-1, 2))],
        [g, J, s_poly],
        [s_poly, J, g, g + J.mul_term(Monomial(1, 0), Fraction(2))],
    ]
    for gens in presentations:
        q = quotient_ring(gens, order)
        assert q.staircase == reference.staircase
        assert q.gb.generators == reference.gb.generators


def test_normal_form_is_idempotent(corpus_pair):
    """NF(NF(p)) = NF(p), and p - NF(p) lies in the ideal."""
    gb = corpus_pair.milnor_ring.gb
    rng = np.random.default_rng(11)
    for _ in range(6):
        exps = rng.integers(0, 6, size=(4, 2))
        coeffs = rng.integers(-5, 6, size=4)
        p = Poly({Monomial(int(i), int(j)): int(c) for (i, j), c in zip(exps, coeffs)})
        r = normal_form(p, gb)
        assert normal_form(r, gb) == r
        assert normal_form(p - r, gb).is_zero


def test_echelon_basis_reports_dependencies():
    """A vector in the span comes back with its coefficients and is not stored."""
    echelon = EchelonBasis(3)
    assert echelon.add([Fraction(1), Fraction(2), Fraction(0)]) is None
    assert echelon.add([Fraction(0), Fraction(1), Fraction(1)]) is None
    coeffs = echelon.add([Fraction(2), Fraction(5), Fraction(1)])
    assert {k: v for k, v in coeffs.items() if v} == {0: 2, 1: 1}
    assert echelon.size == 2
    assert echelon.add([Fraction(0), Fraction(0), Fraction(1)]) is None
    assert echelon.size == 3
