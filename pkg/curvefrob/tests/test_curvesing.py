"""Tests for pair validation, Milnor numbers and the curve-level checks."""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from curvefrob.curvesing import (
    default_t_samples,
    euler_identity_check,
    fibre_ring,
    kernel_identity_check,
    milnor_numbers,
    mu_constancy_probe,
    nu_positivity_check,
    validate_pair,
)
from curvefrob.errors import (
    DegenerateF,
    NonIsolated,
    NotQuasiHomogeneous,
    SmoothCurve,
    ZeroPolynomialError,
)
from curvefrob.gaussmanin import ak_pair
from curvefrob.polycore import Poly, WeightSystem, parse_polynomial

from .conftest import CORPUS, make_pair, pab_pair


def test_validate_a3():
    """f = x on x^3 + y^2 keeps weights (1, 3/2), e = 3, p_total = 5/2, J = 2y."""
    pair = make_pair("x", "x^3 + y^2", 1, "3/2")
    assert (pair.weights.p_x, pair.weights.p_y) == (1, Fraction(3, 2))
    assert pair.e == 3
    assert pair.p_total == Fraction(5, 2)
    assert pair.J == parse_polynomial("2*y")


def test_validate_rescales_weights_so_deg_f_is_one():
    """Raw weights are divided by deg f; the raw ones are kept for the echo."""
    pair = make_pair("x^2 + y^3", "x*y", 3, 2)
    assert (pair.weights.p_x, pair.weights.p_y) == (Fraction(1, 2), Fraction(1, 3))
    assert (pair.raw_weights.p_x, pair.raw_weights.p_y) == (3, 2)
    assert pair.e == Fraction(5, 6)


def test_linear_term_means_smooth_curve():
    """g = x + y^2 is smooth at the origin; this is reported before homogeneity."""
    with pytest.raises(SmoothCurve):
        make_pair("x", "x + y^2", 1, 1)
    with pytest.raises(SmoothCurve):
        make_pair("x", "x^2 + y^2 + 1", 1, 1)


def test_branch_where_f_is_constant_is_rejected():
    """f = x on g = x(x + y): J = x vanishes on the branch x = 0."""
    with pytest.raises(NonIsolated) as info:
        make_pair("x", "x*(x + y)", 1, 1)
    assert info.value.check == "milnor"


def test_common_component_is_rejected():
    """f = x*y vanishes on two branches of g = xy(x + y)."""
    with pytest.raises(NonIsolated):
        make_pair("x*y", "x^2*y + x*y^2", 1, 1)


def test_non_reduced_curve_is_rejected():
    """g = x^2*y has a double line, so its singular locus is not isolated."""
    with pytest.raises(NonIsolated) as info:
        make_pair("x + y", "x^2*y", 1, 1)
    assert info.value.check in {"milnor", "curve_singularity"}


def test_not_quasi_homogeneous():
    """f and g must be homogeneous for the given weights."""
    with pytest.raises(NotQuasiHomogeneous) as info:
        make_pair("x + y^2", "x*y", 1, 1)
    assert info.value.which == "f"
    with pytest.raises(NotQuasiHomogeneous) as info:
        make_pair("x", "x^3 + y^2", 1, 1)
    assert info.value.which == "g"


def test_degenerate_and_zero_inputs():
    """Zero or constant f and zero g are refused with their own codes."""
    w = WeightSystem(1, 1)
    with pytest.raises(DegenerateF):
        validate_pair(Poly.zero(), parse_polynomial("x*y"), w)
    with pytest.raises(DegenerateF):
        validate_pair(Poly.constant(3), parse_polynomial("x*y"), w)
    with pytest.raises(ZeroPolynomialError):
        validate_pair(parse_polynomial("x"), Poly.zero(), w)


@pytest.mark.parametrize("k", range(2, 9))
def test_milnor_numbers_ak(k):
    """A_k: (mu, mu1, mu2) = (k, k - 1, 1)."""
    m = milnor_numbers(ak_pair(k))
    assert (m.mu, m.mu1, m.mu2) == (k, k - 1, 1)


def test_milnor_numbers_node(node):
    """Node: (2, 1, 1)."""
    m = milnor_numbers(node)
    assert (m.mu, m.mu1, m.mu2) == (2, 1, 1)


@pytest.mark.parametrize("a, b", [(1, 2), (2, 3), (3, 4), (2, 2), (4, 3)])
def test_milnor_numbers_pab(a, b):
    """P(a, b): (a + b, 1, a + b - 1)."""
    m = milnor_numbers(pab_pair(a, b))
    assert (m.mu, m.mu1, m.mu2) == (a + b, 1, a + b - 1)


def test_corpus_is_large_enough():
    """The generated corpus has at least 25 valid pairs over both g families."""
    assert len(CORPUS) >= 25
    assert any("*y + y^" in g for _, g, _, _ in CORPUS)
    assert any("*y + y^" not in g for _, g, _, _ in CORPUS)


def test_corpus_invariants(corpus_pair):
    """mu = mu1 + mu2 and the kernel and Euler identities hold on every corpus pair."""
    m = milnor_numbers(corpus_pair)
    assert m.mu == m.mu1 + m.mu2
    assert kernel_identity_check(corpus_pair, m).passed
    assert euler_identity_check(corpus_pair).passed
    assert nu_positivity_check(corpus_pair).passed


def test_kernel_identity_examples(a3, node):
    """All three dimensions equal mu2 on the model pairs."""
    for pair, mu2 in ((a3, 1), (node, 1), (make_pair("x^2 + y^3", "x*y", 3, 2), 4)):
        check = kernel_identity_check(pair)
        assert check.passed
        assert check.details["kernel_of_f"] == check.details["dim_f_g_J"] == mu2


def test_euler_identity_examples(a2, node):
    """The residuals vanish for the node and for A_2."""
    for pair in (a2, node):
        check = euler_identity_check(pair)
        assert check.passed
        assert check.details["x_residual"] == "0" and check.details["y_residual"] == "0"


def test_euler_identity_negative_control(node):
    """Perturbing J breaks the identity."""
    broken = replace(node, J=node.J + parse_polynomial("x"))
    assert not euler_identity_check(broken).passed


def test_mu_constancy_examples(a2, node):
    """dim O/(g - 1, J) = mu for A_2 and the node."""
    assert fibre_ring(a2, Fraction(1)).dim == 2
    assert fibre_ring(node, Fraction(1)).dim == 2
    check = mu_constancy_probe(node, [Fraction(1), Fraction(-3, 2)])
    assert check.passed
    assert check.details["dims"] == {"0": 2, "1": 2, "-3/2": 2}


def test_mu_constancy_on_corpus(corpus_pair):
    """Every default t-sample gives a fibre algebra of dimension mu."""
    assert mu_constancy_probe(corpus_pair, seed=1).passed


def test_default_t_samples_are_seeded():
    """Base samples first, then seeded extras; same seed, same list."""
    first = default_t_samples(4)
    assert first[:3] == [1, 2, -1]
    assert len(first) == 5
    assert first == default_t_samples(4)
    assert all(t != 0 for t in first)
    assert all(1 <= t.numerator <= 7 and 1 <= t.denominator <= 7 for t in first[3:])


def test_default_t_samples_follow_environment(monkeypatch):
    """CURVEFROB_T_SAMPLES and CURVEFROB_EXTRA_T_SAMPLES change the defaults."""
    monkeypatch.setenv("CURVEFROB_T_SAMPLES", "3, -1/2")
    monkeypatch.setenv("CURVEFROB_EXTRA_T_SAMPLES", "0")
    assert default_t_samples(0) == [3, Fraction(-1, 2)]
