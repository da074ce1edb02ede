import numpy as np
import pytest
from hypothesis import given

from bargmann_pullback.decision import AffineMap, is_bounded
from bargmann_pullback.fio import (graph_mapping_report, kappa_inverse, kappa_map, lambda_graph,
                                   phase_rank, pullback_weight, verify_graph_mapping)
from bargmann_pullback.qform import QuadraticWeight
from bargmann_pullback.suites import random_affine
from bargmann_pullback.verdict import Decision

from conftest import seeds, weights


def test_lambda_phi0(phi0):
    g = lambda_graph(phi0)
    x = np.array([[1 + 2j]])
    assert np.allclose(g(x), np.conj(x) / 2j)
    assert np.allclose(g.P, 0)


def test_kappa_identity(phi0):
    kappa = kappa_map(AffineMap.identity(2))
    y = np.array([[1 + 1j, 2.0]])
    eta = np.array([[0.5j, -1.0]])
    x, xi = kappa(y, eta)
    assert np.allclose(x, y) and np.allclose(xi, eta)


def test_identity_residual_zero():
    phi = QuadraticWeight.from_1d(0.7, 0.2j)
    assert verify_graph_mapping(phi, AffineMap.identity(1)) == 0


@given(seeds)
def test_kappa_roundtrip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 3))
    phi = random_affine(rng, n, n, invertible=True)
    y = rng.standard_normal((4, n)) + 1j * rng.standard_normal((4, n))
    eta = rng.standard_normal((4, n)) + 1j * rng.standard_normal((4, n))
    back = kappa_inverse(phi)(*kappa_map(phi)(y, eta))
    assert np.allclose(back[0], y) and np.allclose(back[1], eta)


@given(weights(), seeds)
def test_mapping_identity(phi1, seed):
    rng = np.random.default_rng(seed)
    phi = random_affine(rng, phi1.n, phi1.n, invertible=True)
    rep = graph_mapping_report(phi1, phi, seed=seed)
    assert rep.passed, rep.to_json()
    assert rep.phase_rank == phi1.n


def test_requires_square_invertible(phi0):
    with pytest.raises(ValueError):
        kappa_map(AffineMap(np.ones((1, 2)), np.zeros(1)))
    with pytest.raises(ValueError):
        kappa_map(AffineMap.from_1d(0.0))


@given(weights(), seeds)
def test_pullback_weight_expansion(phi1, seed):
    """Phi1(phi(x)) = Q(x) + 2 Re(c . x) + Phi1(b)."""
    rng = np.random.default_rng(seed)
    phi = random_affine(rng, phi1.n, phi1.n)
    quad, c, const = pullback_weight(phi1, phi)
    x = rng.standard_normal((10, phi1.n)) + 1j * rng.standard_normal((10, phi1.n))
    lhs = phi1(phi(x))
    rhs = quad(x) + 2 * np.real(x @ c) + const
    assert np.allclose(lhs, rhs, atol=1e-10 * phi1.scale() * (1 + np.abs(x).max()) ** 2)


@given(weights(), seeds)
def test_pullback_space_coherence(phi1, seed):
    """C_phi is bounded from H_Phi1 into H_{Q} for the quadratic part Q of Phi1 o phi (b = 0)."""
    rng = np.random.default_rng(seed)
    A = random_affine(rng, phi1.n, phi1.n, invertible=True).A
    phi = AffineMap.linear(A)
    quad, c, _ = pullback_weight(phi1, phi)
    assert np.allclose(c, 0)
    assert is_bounded(phi1, quad, phi).decision in (Decision.YES, Decision.BOUNDARY)


def test_phase_rank_square(phi0):
    assert phase_rank(phi0, AffineMap.from_1d(0.5)) == 1
