import numpy as np
import pytest
from hypothesis import assume, given, settings

from bargmann_pullback.decision import AffineMap, is_bounded
from bargmann_pullback.kernels import (coherent_norm_ratio, project_polynomial, ray_directions,
                                       schur_row_col_bounds)
from bargmann_pullback.poly import Poly, monomials_up_to
from bargmann_pullback.qform import QuadraticWeight, normalization_constant
from bargmann_pullback.spectra import orthonormal_basis
from bargmann_pullback.suites import random_affine, random_weight
from bargmann_pullback.verdict import Decision

from conftest import problems, radial_problem, seeds, weights


class TestProjection:
    def test_constant(self):
        phi = QuadraticWeight.from_1d(0.8, 0.3j)
        assert project_polynomial(phi, Poly.constant(1), np.array([1.3 - 2j])) == pytest.approx(1)

    def test_linear_phi0(self, phi0):
        assert project_polynomial(phi0, Poly.variable(1, 0), np.array([2.0])) == pytest.approx(2)

    @given(weights(positive_definite=True), seeds)
    @settings(max_examples=30)
    def test_reproduces(self, phi, seed):
        rng = np.random.default_rng(seed)
        basis = monomials_up_to(phi.n, 5)
        p = Poly.from_coefficients(basis, rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis)))
        for w in rng.standard_normal((3, phi.n)) + 1j * rng.standard_normal((3, phi.n)):
            ref = p(w)
            assert abs(project_polynomial(phi, p, w) - ref) <= 1e-8 * max(1.0, abs(ref))

    def test_dimension_mismatch(self, phi0):
        with pytest.raises(ValueError):
            project_polynomial(phi0, Poly.variable(2, 0), np.zeros(1))


class TestCoherentRatio:
    def test_identity(self):
        phi = QuadraticWeight.from_1d(0.6, 0.2 + 0.1j)
        for w in (0, 1 + 1j, -30j):
            assert coherent_norm_ratio(phi, phi, AffineMap.identity(1), np.array([w])) == pytest.approx(1)

    @pytest.mark.parametrize("m", [0, 1, 4, 10])
    def test_translation(self, m):
        assert coherent_norm_ratio(*radial_problem(1.0, 1.0), np.array([m])) == pytest.approx(np.exp((2 * m + 1) / 4))

    def test_compact_decays(self):
        for u in ray_directions(1):
            assert coherent_norm_ratio(*radial_problem(0.5, 3.0), 50 * u) < 1e-6

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_truncated_kernel(self, seed):
        """||C* k_w||^2 = sum_alpha |e_alpha(phi(w))|^2 / (b2^2 e^{2 Phi2(w)}) over an ONB of H_Phi1."""
        rng = np.random.default_rng(seed)
        phi1 = random_weight(rng, 1, skew=0.2)
        phi2 = random_weight(rng, 1, skew=0.2)
        phi = random_affine(rng, 1, 1, scale=0.5)
        w = 0.3 * (rng.standard_normal(1) + 1j * rng.standard_normal(1))
        onb = orthonormal_basis(phi1, 25)
        z = phi(w)
        vals = onb.coeffs @ np.array([np.prod(z ** np.asarray(a)) for a in onb.monomials])
        b2 = normalization_constant(phi2)
        trunc = np.linalg.norm(vals) / (b2 * np.exp(phi2(w)))
        assert coherent_norm_ratio(phi1, phi2, phi, w) == pytest.approx(trunc, rel=1e-7)


def riemann_column(phi1, phi2, phi, C, y, half_width=12.0, points=401):
    """int C exp(-|phi(x) - y|^2 / C + Phi1(phi(x)) - Phi2(x)) dx on a square grid, n2 = 1."""
    t = np.linspace(-half_width, half_width, points)
    X, Y = np.meshgrid(t, t, indexing="ij")
    x = (X + 1j * Y).ravel()[:, None]
    px = x @ phi.A.T + phi.b
    expo = -np.abs(px[:, 0] - y) ** 2 / C + phi1(px) - phi2(x)
    return C * np.exp(expo).sum() * (t[1] - t[0]) ** 2


class TestSchur:
    def test_identity_radial(self):
        sb = schur_row_col_bounds(*radial_problem(1.0))
        assert sb.row_sup == pytest.approx(sb.col_sup)
        assert sb.row_sup == pytest.approx(4 * 4 * np.pi)

    def test_radial_contraction_row(self):
        sb = schur_row_col_bounds(*radial_problem(0.5))
        assert sb.C == 4 and sb.sup_exponent == pytest.approx(0, abs=1e-12)
        assert sb.row_sup == pytest.approx(16 * np.pi)

    def test_refuses_unbounded(self):
        with pytest.raises(ValueError):
            schur_row_col_bounds(*radial_problem(1.0, 1.0))

    def test_refuses_small_constant(self):
        with pytest.raises(ValueError):
            schur_row_col_bounds(*radial_problem(0.5), C_const=1.0)

    @pytest.mark.parametrize("seed", range(3))
    def test_column_against_riemann_sum(self, seed):
        rng = np.random.default_rng(seed)
        phi1 = random_weight(rng, 1)
        phi2 = random_weight(rng, 1)
        phi = AffineMap.from_1d(0.4 * complex(rng.standard_normal(), rng.standard_normal()),
                                complex(rng.standard_normal(), rng.standard_normal()))
        assert is_bounded(phi1, phi2, phi).decision is Decision.YES
        sb = schur_row_col_bounds(phi1, phi2, phi)
        ys = [phi(np.array([0.0]))[0] + r for r in np.linspace(-3, 3, 13)[:, None] + 1j * np.linspace(-3, 3, 13)]
        best = max(riemann_column(phi1, phi2, phi, sb.C, y) for y in np.ravel(ys))
        assert best <= sb.col_sup * (1 + 1e-6)
        assert best >= 0.5 * sb.col_sup

    def test_kernel_direction(self):
        # phi(x1, x2) = x1: nontrivial Ker A, Phi2 positive in the kernel direction
        phi1 = QuadraticWeight.from_1d(0.25)
        phi2 = QuadraticWeight(np.diag([0.5, 0.5]), np.diag([0.0, 0.2]))
        phi = AffineMap(np.array([[1.0, 0.0]]), np.array([0.5]))
        sb = schur_row_col_bounds(phi1, phi2, phi)
        assert sb.finite and sb.details["kernel_dim"] == 2
        assert sb.col_grid_max <= sb.col_sup * (1 + 1e-9) <= sb.col_bound * (1 + 1e-9)

    @given(problems())
    @settings(max_examples=40)
    def test_bounded_instances_have_finite_bounds(self, prob):
        assume(is_bounded(*prob).decision is Decision.YES)
        sb = schur_row_col_bounds(*prob)
        assert sb.finite
        assert sb.row_grid_max <= sb.row_sup * (1 + 1e-9)
        assert sb.col_grid_max <= sb.col_sup * (1 + 1e-9)
        assert sb.col_sup <= sb.col_bound * (1 + 1e-9)
