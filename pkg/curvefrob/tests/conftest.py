"""Shared pairs for the curvefrob tests: the A_k family, the node, P(a, b) and a generated corpus."""
from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from curvefrob.curvesing import CurveFunctionPair, validate_pair
from curvefrob.errors import CurveFrobError
from curvefrob.gaussmanin import ak_pair
from curvefrob.polycore import Poly, WeightSystem, parse_polynomial

X, Y = sympy.symbols("x y")

CORPUS_MAX_MU = 12


def make_pair(f: str, g: str, wx: int | str | Fraction, wy: int | str | Fraction) -> CurveFunctionPair:
    return validate_pair(parse_polynomial(f), parse_polynomial(g), WeightSystem(Fraction(wx), Fraction(wy)))


def to_sympy(p: Poly) -> sympy.Expr:
    """Independent view of a Poly for oracle comparisons."""
    return sympy.Add(
        *[sympy.Rational(c.numerator, c.denominator) * X**m.exp_x * Y**m.exp_y for m, c in p],
        evaluate=True,
    )


def node_pair() -> CurveFunctionPair:
    return make_pair("x + y", "x*y", 1, 1)


def pab_pair(a: int, b: int) -> CurveFunctionPair:
    """f = x^a + y^b on g = xy with weights (1/a, 1/b)."""
    return make_pair(f"x^{a} + y^{b}", "x*y", Fraction(1, a), Fraction(1, b))


def _f_candidates(wx: int, wy: int) -> list[str]:
    out = ["x", "y", "x*y", "x^2", "y^2"]
    for i in range(1, 4):
        for j in range(1, 4):
            if i * wx == j * wy:
                out.append(f"x^{i} + 2*y^{j}")
    return out


def generate_corpus() -> list[tuple[str, str, int, int]]:
    """Valid (f, g, wx, wy) with g in {x^a + y^b, x^a*y + y^b} and f a monomial or binomial of matching weight."""
    families = []
    for a, b in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (2, 5), (3, 4)]:
        families.append((f"x^{a} + y^{b}", b, a))
    for a, b in [(1, 2), (1, 3), (2, 2), (2, 3), (1, 4), (3, 2), (3, 3)]:
        families.append((f"x^{a}*y + y^{b}", b - 1, a))
    corpus = []
    for g, wx, wy in families:
        for f in _f_candidates(wx, wy):
            try:
                pair = make_pair(f, g, wx, wy)
            except CurveFrobError:
                continue
            if pair.mu <= CORPUS_MAX_MU:
                corpus.append((f, g, wx, wy))
    return corpus


CORPUS = generate_corpus()
CORPUS_IDS = [f"f={f};g={g}" for f, g, _, _ in CORPUS]


@pytest.fixture(params=CORPUS, ids=CORPUS_IDS)
def corpus_pair(request) -> CurveFunctionPair:
    f, g, wx, wy = request.param
    return make_pair(f, g, wx, wy)


@pytest.fixture
def node() -> CurveFunctionPair:
    return node_pair()


@pytest.fixture
def a2() -> CurveFunctionPair:
    return ak_pair(2)


@pytest.fixture
def a3() -> CurveFunctionPair:
    return ak_pair(3)


@pytest.fixture
def a4() -> CurveFunctionPair:
    return ak_pair(4)


@pytest.fixture
def large_pair() -> CurveFunctionPair:
    """x^2*y against x^4 + y^4: mu = 20, past the enumerated corpus."""
    return make_pair("x^2*y", "x^4 + y^4", 1, 1)
