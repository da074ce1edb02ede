import numpy as np
import pytest
from hypothesis import given, settings

from bargmann_pullback.decision import AffineMap
from bargmann_pullback.moments import gauss_hermite_integral, gaussian_mass
from bargmann_pullback.poly import Poly, compose_affine
from bargmann_pullback.qform import QuadraticWeight
from bargmann_pullback.spectra import (IllConditionedGram, NoDecay, decay_fit, inclusion_matrix,
                                       inclusion_spectrum, max_safe_degree, operator_matrix,
                                       orthonormal_basis, singular_value_csv, singular_values)
from bargmann_pullback.suites import random_affine, random_weight

from conftest import radial_problem, seeds, weights


def onb_polys(onb):
    return [Poly.from_coefficients(onb.monomials, row) for row in onb.coeffs]


def vals(x, p):
    """Vectorized evaluation of ``p`` at the rows of ``x``."""
    out = np.zeros(len(x), dtype=complex)
    for alpha, c in p.terms.items():
        out += c * np.prod(x ** np.asarray(alpha), axis=-1)
    return out


def test_degree_zero(phi0):
    onb = orthonormal_basis(phi0, 0)
    assert onb.coeffs.shape == (1, 1)
    assert abs(onb.coeffs[0, 0]) == pytest.approx(1 / np.sqrt(gaussian_mass(phi0)))


@given(weights(positive_definite=True))
def test_onb_residual(phi):
    onb = orthonormal_basis(phi, 6)
    assert onb.residual() <= 1e-8


def test_onb_against_quadrature():
    phi = QuadraticWeight(np.array([[0.7, 0.1j], [-0.1j, 0.4]]), np.array([[0.1, 0.05], [0.05, 0.0]]))
    polys = onb_polys(orthonormal_basis(phi, 3))
    for i in (0, 3, 7):
        for j in (0, 3, 9):
            ip = gauss_hermite_integral(phi, lambda x: vals(x, polys[i]) * np.conj(vals(x, polys[j])), 12)
            assert ip == pytest.approx(float(i == j), abs=1e-9)


def test_ill_conditioned_names_safe_degree():
    phi = QuadraticWeight.from_1d(1.0, 0.9)
    safe = max_safe_degree(phi, 40)
    assert 0 < safe < 40
    with pytest.raises(IllConditionedGram) as info:
        orthonormal_basis(phi, 40)
    assert info.value.max_safe_degree == safe
    assert str(safe) in str(info.value)
    orthonormal_basis(phi, safe)


class TestOperatorMatrix:
    def test_radial_contraction(self):
        s = singular_values(operator_matrix(*radial_problem(0.5), 30, 30))
        assert np.allclose(s[:21], 2.0 ** -np.arange(21), rtol=1e-8, atol=0)

    def test_identity(self):
        s = singular_values(operator_matrix(*radial_problem(1.0), 20, 20))
        assert np.allclose(s, 1, atol=1e-8)
        with pytest.raises(NoDecay):
            decay_fit(s, 1)

    def test_rotation_diagonal(self):
        a = 0.6 * np.exp(0.7j)
        T = operator_matrix(*radial_problem(a), 10, 10)
        assert np.allclose(np.abs(np.diag(T.entries)), 0.6 ** np.arange(11))
        assert np.allclose(singular_values(T), 0.6 ** np.arange(11))

    def test_tensor_product(self):
        phi = QuadraticWeight.radial(2)
        s = singular_values(operator_matrix(phi, phi, AffineMap.linear(np.diag([0.5, 1 / 3])), 12, 12))
        exact = np.sort([2.0 ** -p * 3.0 ** -q for p in range(13) for q in range(13)])[::-1]
        assert np.allclose(s[:30], exact[:30], rtol=1e-6, atol=0)

    def test_unbounded_warns(self, caplog):
        operator_matrix(*radial_problem(1.0, 1.0), 4, 4)
        assert "unbounded" in caplog.text

    def test_entries_against_quadrature(self):
        rng = np.random.default_rng(5)
        phi1 = random_weight(rng, 1)
        phi2 = random_weight(rng, 2)
        phi = random_affine(rng, 1, 2, scale=0.4)
        T = operator_matrix(phi1, phi2, phi, 3, 3, check=False)
        src = onb_polys(T.source)
        tgt = onb_polys(T.target)
        for alpha in (0, 2):
            pulled = compose_affine(src[alpha], phi.A, phi.b)
            for beta in (0, 1, 4):
                ip = gauss_hermite_integral(phi2, lambda x: vals(x, pulled) * np.conj(vals(x, tgt[beta])), 12)
                assert T.entries[beta, alpha] == pytest.approx(ip, abs=1e-8)


class TestInclusion:
    @given(seeds)
    @settings(max_examples=15)
    def test_matches_direct_for_integrable_weights(self, seed):
        rng = np.random.default_rng(seed)
        phi2 = random_weight(rng, 1, skew=0.3)
        phi3 = phi2.shifted(0.2 * np.linalg.eigvalsh(phi2.H)[0])
        # the direct truncation is not block diagonal and converges in D
        direct = singular_values(operator_matrix(phi3, phi2, AffineMap.identity(1), 30, 30))
        reduced = singular_values(inclusion_matrix(phi3, phi2, 30, 30))
        assert np.allclose(direct[:5], reduced[:5], rtol=1e-6, atol=0)

    def test_requires_shared_pluriharmonic_part(self):
        with pytest.raises(ValueError):
            inclusion_matrix(QuadraticWeight.from_1d(0.5, 0.1), QuadraticWeight.from_1d(1.0, 0.2))

    def test_complete_prefix_is_exact(self):
        H2 = np.array([[1.0, 0.3], [0.3, 0.8]])
        H3 = H2 - 0.2 * np.eye(2)
        s, prefix, D = inclusion_spectrum(QuadraticWeight(H3, np.zeros((2, 2))),
                                          QuadraticWeight(H2, np.zeros((2, 2))))
        mu = np.linalg.eigvals(np.linalg.solve(H2, H3)).real
        # ||x^alpha|| ratios in the joint eigenbasis: prod mu_i^{(alpha_i + 1)/2}
        exact = np.sort([mu[0] ** ((p + 1) / 2) * mu[1] ** ((q + 1) / 2)
                         for p in range(60) for q in range(60)])[::-1]
        assert len(prefix) >= 5
        assert np.allclose(prefix, exact[:len(prefix)], rtol=1e-8)


class TestDecayFit:
    def test_exponential(self):
        fit = decay_fit(np.exp(-np.arange(1, 20.0)), 1)
        assert fit.slope == pytest.approx(-1)
        assert fit.r2 == pytest.approx(1)

    def test_floor_and_minimum(self):
        with pytest.raises(ValueError):
            decay_fit([1, 0.5, 1e-20, 1e-21, 1e-22, 1e-23], 1)

    def test_two_dimensional_axis(self):
        j = np.arange(1, 50.0)
        fit = decay_fit(np.exp(-2 * np.sqrt(j)), 2)
        assert fit.slope == pytest.approx(-2)

    def test_csv(self):
        text = singular_value_csv([1.0, 0.5], 2)
        lines = text.strip().splitlines()
        assert lines[0] == "j,s_j,j_pow,log_s"
        j, s, jp, ls = lines[2].split(",")
        assert (int(j), float(s), float(jp)) == (2, 0.5, pytest.approx(np.sqrt(2)))
        assert float(ls) == pytest.approx(np.log(0.5))
