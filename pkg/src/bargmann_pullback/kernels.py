"""Reproducing kernel, coherent states and Schur-test integrals in closed form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decision import (AffineMap, complete_square, difference_form, is_bounded,
                       linear_functional, log_ratio)
from .moments import exp_quadratic_series, factorial_grid
from .poly import Poly
from .qform import (QuadraticWeight, RealForm, normalization_constant, realify,
                    realify_matrix)
from .verdict import Decision


def _gaussian_with_source(K: np.ndarray, J: np.ndarray):
    """For int exp(-X^T K X + J^T X) dX with Re K > 0: (log mass, mean, covariance)."""
    m = K.shape[0]
    if np.linalg.eigvalsh(0.5 * (K + K.conj().T).real)[0] <= 0:
        raise ValueError("Gaussian integral diverges: real part of the exponent is not negative definite")
    lam = np.linalg.eigvals(K)
    Kinv = np.linalg.inv(K)
    # principal branches stay valid: eigenvalues of K lie in the right half plane
    log_mass = 0.5 * m * math.log(math.pi) - 0.5 * np.sum(np.log(lam)) + 0.25 * J @ Kinv @ J
    return log_mass, 0.5 * Kinv @ J, 0.5 * Kinv


def project_polynomial(phi: QuadraticWeight, p: Poly, w) -> complex:
    """b^2 int e^{2 Psi(w, conj x)} p(x) e^{-2 Phi(x)} L(dx), evaluated in closed form."""
    n = phi.n
    if p.n != n:
        raise ValueError(f"polynomial in {p.n} variables, weight on C^{n}")
    w = np.asarray(w, dtype=complex).reshape(n)
    I = np.eye(n)
    T = np.hstack([I, 1j * I])  # x = T X
    H, S = phi.H, phi.S
    # exponent: -2 x^T H conj(x) - x^T S x + 2 w^T H conj(x) + w^T S w
    K = 2.0 * T.T @ H @ T.conj() + T.T @ S @ T
    K = 0.5 * (K + K.T)
    J = 2.0 * (w @ H @ T.conj())
    const = w @ S @ w
    log_mass, mean, cov = _gaussian_with_source(K, J)

    deg = max((max(a) for a in p.terms), default=0)
    caps = (deg,) * n
    series = exp_quadratic_series(T @ cov @ T.T, T @ mean, caps)
    moments = factorial_grid(caps) * series
    expect = sum(c * moments[a] for a, c in p.terms.items())
    b2 = normalization_constant(phi) ** 2
    return complex(b2 * np.exp(const + log_mass) * expect)


def coherent_norm_ratio(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap, w) -> float:
    """||C_phi^* k_{2,w}|| = (b1 / b2) e^{Phi1(phi(w)) - Phi2(w)}."""
    b1 = normalization_constant(phi1)
    b2 = normalization_constant(phi2)
    with np.errstate(over="ignore"):
        return float(b1 / b2 * np.exp(log_ratio(phi1, phi2, phi, w)))


def ray_directions(n: int, count: int = 8, seed: int = 0) -> np.ndarray:
    """Unit directions in C^n; for n = 1 the count-th roots of unity."""
    if n == 1:
        return np.exp(2j * np.pi * np.arange(count) / count)[:, None]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Schur test

@dataclass
class SchurBounds:
    """Row (integral in y) and column (integral in x) suprema of the dominating kernel.

    ``row_sup``/``col_sup`` are analytic suprema of the closed-form
    integrals; ``col_bound`` is the cruder bound obtained by completing the
    square along Ker A; the ``*_grid_max`` fields are sampled maxima.
    """

    C: float
    row_sup: float
    col_sup: float
    col_bound: float
    row_grid_max: float
    col_grid_max: float
    sup_exponent: float
    details: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return all(np.isfinite(v) for v in (self.row_sup, self.col_sup, self.col_bound))

    def to_json(self) -> dict:
        return {"C": self.C, "row_sup": self.row_sup, "col_sup": self.col_sup,
                "col_bound": self.col_bound, "row_grid_max": self.row_grid_max,
                "col_grid_max": self.col_grid_max, "sup_exponent": self.sup_exponent}


def default_schur_constant(phi1: QuadraticWeight) -> float:
    lam = np.linalg.eigvalsh(phi1.H)[0]
    return float(max(1.0, 1.0 / lam, normalization_constant(phi1) ** 2))


def _quadratic_sup(M: np.ndarray, g: np.ndarray, c: float, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """sup of X^T M X + g^T X + c for M negative semidefinite, else +inf."""
    scale = max(np.abs(M).max(initial=0.0), 1e-300)
    w = np.linalg.eigvalsh(M)
    if w[-1] > tol * scale:
        return math.inf, None
    X, *_ = np.linalg.lstsq(-2.0 * M, g, rcond=tol)
    if np.linalg.norm(2.0 * M @ X + g) > 1e-7 * max(1.0, np.linalg.norm(g)):
        return math.inf, None
    return float(X @ M @ X + g @ X + c), X


def schur_row_col_bounds(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
                         C_const: float | None = None, *, samples: int = 64,
                         seed: int = 0, tol: float = 1e-9) -> SchurBounds:
    """Suprema of the Schur integrals for K(x,y) = C exp(-|phi(x)-y|^2/C + Phi1(phi(x)) - Phi2(x))."""
    if is_bounded(phi1, phi2, phi, tol).decision is not Decision.YES:
        raise ValueError("Schur bounds require a bounded instance")
    C = default_schur_constant(phi1) if C_const is None else float(C_const)
    if C < default_schur_constant(phi1):
        raise ValueError(f"C = {C} does not dominate the kernel; need C >= {default_schur_constant(phi1)}")
    n1, n2 = phi.n1, phi.n2
    m1, m2 = 2 * n1, 2 * n2
    Ar = realify_matrix(phi.A)
    br = np.concatenate([phi.b.real, phi.b.imag])
    M = difference_form(phi1, phi2, phi.A).M
    g = 2.0 * linear_functional(phi1, phi)
    c = float(phi1(phi.b))

    def F(X):
        return np.einsum("...i,ij,...j->...", X, M, X) + X @ g + c

    supF, _ = _quadratic_sup(M, g, c, tol)

    # y-integral: int exp(-|phi(x) - y|^2 / C) L(dy) = (pi C)^{n1}
    log_row = math.log(C) + n1 * math.log(math.pi * C)
    row_sup = math.exp(log_row + supF)

    # x-integral for fixed y: Gaussian with precision P = Ar^T Ar / C - M
    P = Ar.T @ Ar / C - M
    Pinv = np.linalg.inv(P)
    log_det_P = float(np.sum(np.log(np.linalg.eigvalsh(P))))

    def log_col(Y):
        Y = np.atleast_2d(Y)
        J = 2.0 * (Y - br) @ Ar / C + g
        quad = 0.25 * np.einsum("ki,ij,kj->k", J, Pinv, J)
        return (math.log(C) + 0.5 * m2 * math.log(math.pi) - 0.5 * log_det_P
                - np.sum((Y - br) ** 2, axis=1) / C + c + quad)

    # the exponent of log_col is quadratic in y: recover it exactly and maximize
    Gy = Ar @ Pinv @ Ar.T / C ** 2 - np.eye(m1) / C
    hy = -2.0 * Ar @ Pinv @ Ar.T @ br / C ** 2 + 2.0 * br / C + Ar @ Pinv @ g / C
    c0 = float(log_col(np.zeros(m1))[0])
    col_log_sup, _ = _quadratic_sup(Gy, hy, c0, tol)
    col_sup = math.exp(col_log_sup) if np.isfinite(col_log_sup) else math.inf

    # completing the square along Ker A (real coordinates, orthonormal split)
    _, sv, vh = np.linalg.svd(Ar)
    smax = sv.max(initial=0.0)
    rank = int(np.sum(sv > tol * smax)) if smax > 0 else 0
    ker = vh[rank:].T
    comp = vh[:rank].T
    k = ker.shape[1]
    basis = np.hstack([ker, comp])
    q2 = RealForm(basis.T @ realify(phi2).M @ basis)
    split = complete_square(q2, rank, tol)
    mu = float(split.residual.eigvals[0]) if k else math.inf
    sigma = float(sv[rank - 1]) if rank else math.inf
    log_bound = math.log(C) + supF
    if k:
        log_bound += 0.5 * k * math.log(math.pi / mu)
    if rank:
        log_bound += 0.5 * rank * math.log(math.pi * C / sigma ** 2)
    col_bound = math.exp(log_bound) if mu > 0 else math.inf

    rng = np.random.default_rng(seed)
    R = 3.0 * math.sqrt(C)
    Xs = R * rng.standard_normal((samples, m2))
    Ys = np.vstack([Xs @ Ar.T + br, R * rng.standard_normal((samples, m1))])
    row_grid = math.exp(log_row + float(np.max(F(Xs))))
    col_grid = float(np.exp(np.max(log_col(Ys))))

    return SchurBounds(C=C, row_sup=row_sup, col_sup=col_sup, col_bound=col_bound,
                       row_grid_max=row_grid, col_grid_max=col_grid, sup_exponent=supF,
                       details={"kernel_dim": k, "mu": mu, "sigma_min": sigma})
