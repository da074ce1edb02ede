from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bargmann_pullback.poly import (Poly, compose_affine, composition_matrix, evaluate,
                                    monomials_up_to, n_monomials)

from conftest import seeds


def random_poly(rng, n, D) -> Poly:
    basis = monomials_up_to(n, D)
    coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    return Poly.from_coefficients(basis, coeffs)


def test_monomial_order():
    assert monomials_up_to(1, 2) == [(0,), (1,), (2,)]
    assert monomials_up_to(2, 1) == [(0, 0), (1, 0), (0, 1)]
    assert len(monomials_up_to(2, 3)) == 10


@given(st.integers(1, 3), st.integers(0, 8))
def test_monomial_count(n, D):
    basis = monomials_up_to(n, D)
    assert len(basis) == comb(n + D, n) == n_monomials(n, D)
    assert len(set(basis)) == len(basis)
    degrees = [sum(a) for a in basis]
    assert degrees == sorted(degrees)


def test_evaluate():
    assert evaluate(Poly.monomial((2,)), np.array([3.0])) == 9
    assert evaluate(Poly.monomial((1, 1)), np.array([2.0, 1j])) == 2j


def test_arithmetic():
    x = Poly.variable(1, 0)
    p = (x + Poly.constant(1, 1.0)) * (x - Poly.constant(1, 1.0))
    assert p.terms == {(2,): 1, (0,): -1}
    assert (p - p).terms == {}
    assert (2 * x).terms == {(1,): 2}
    assert p.degree == 2


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        Poly.variable(1, 0) + Poly.variable(2, 0)


def test_compose_examples():
    y = Poly.variable(1, 0)
    p = compose_affine(y, np.array([[2 - 1j]]), np.array([0.5]))
    assert p.terms == {(1,): 2 - 1j, (0,): 0.5}
    q = compose_affine(y * y, np.array([[0.5]]), np.zeros(1))
    assert q.terms == {(2,): 0.25}


@given(seeds, st.integers(1, 2), st.integers(1, 2), st.integers(0, 5))
def test_compose_commutes_with_evaluation(seed, n1, n2, D):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, n1, D)
    A = rng.standard_normal((n1, n2)) + 1j * rng.standard_normal((n1, n2))
    b = rng.standard_normal(n1) + 1j * rng.standard_normal(n1)
    q = compose_affine(p, A, b)
    assert q.degree <= D
    for x in rng.standard_normal((3, n2)) + 1j * rng.standard_normal((3, n2)):
        ref = evaluate(p, A @ x + b)
        assert abs(evaluate(q, x) - ref) <= 1e-9 * max(1.0, abs(ref))


@given(seeds)
def test_composition_matrix_columns(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((2, 1)) + 0j
    b = rng.standard_normal(2) + 0j
    src, tgt = monomials_up_to(2, 3), monomials_up_to(1, 3)
    P = composition_matrix(A, b, src, tgt)
    for j, alpha in enumerate(src):
        expect = compose_affine(Poly.monomial(alpha), A, b).coefficients(tgt)
        assert np.allclose(P[j], expect)


@given(seeds)
def test_coefficient_roundtrip(seed):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, 2, 4)
    basis = monomials_up_to(2, 4)
    assert Poly.from_coefficients(basis, p.coefficients(basis)).terms == p.terms
