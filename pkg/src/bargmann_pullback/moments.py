"""Gaussian moments of the measure e^{-2 Phi(x)} L(dx).

The engine expands the moment generating function exp(s.mu + s^T C s / 2)
as a dense truncated power series; its coefficients are the Wick pairing
counts, so moments are exact up to rounding.  Tensor Gauss-Hermite
quadrature is kept alongside as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qform import QuadraticWeight, realify


def _shift_add(out: np.ndarray, arr: np.ndarray, shift: tuple[int, ...], coef: complex):
    src = tuple(slice(0, n - s) for n, s in zip(arr.shape, shift))
    dst = tuple(slice(s, n) for n, s in zip(arr.shape, shift))
    if any(n - s <= 0 for n, s in zip(arr.shape, shift)):
        return
    out[dst] += coef * arr[src]


def exp_quadratic_series(C, mu, caps) -> np.ndarray:
    """Coefficients of exp(sum mu_i s_i + 1/2 s^T C s), each s_i truncated at caps[i]."""
    C = np.asarray(C, dtype=complex)
    nv = C.shape[0]
    mu = np.zeros(nv, dtype=complex) if mu is None else np.asarray(mu, dtype=complex)
    caps = tuple(int(c) for c in caps)
    shape = tuple(c + 1 for c in caps)

    gens = []
    for i in range(nv):
        if mu[i] != 0:
            e = [0] * nv
            e[i] = 1
            gens.append((tuple(e), mu[i]))
        for j in range(i, nv):
            coef = 0.5 * C[i, i] if i == j else 0.5 * (C[i, j] + C[j, i])
            if coef != 0:
                e = [0] * nv
                e[i] += 1
                e[j] += 1
                gens.append((tuple(e), coef))

    result = np.zeros(shape, dtype=complex)
    term = np.zeros(shape, dtype=complex)
    term[(0,) * nv] = 1.0
    result += term
    for k in range(1, sum(caps) + 1):
        nxt = np.zeros(shape, dtype=complex)
        for shift, coef in gens:
            _shift_add(nxt, term, shift, coef)
        term = nxt / k
        if not term.any():
            break
        result += term
    return result


def factorial_grid(caps) -> np.ndarray:
    grid = np.ones(tuple(c + 1 for c in caps))
    for axis, c in enumerate(caps):
        f = np.array([math.factorial(k) for k in range(c + 1)], dtype=float)
        shape = [1] * len(caps)
        shape[axis] = c + 1
        grid = grid * f.reshape(shape)
    return grid


def _holo_antiholo(n: int) -> np.ndarray:
    # rows: x_1..x_n, conj(x_1)..conj(x_n) as combinations of X = (Re x, Im x)
    I = np.eye(n)
    return np.block([[I, 1j * I], [I, -1j * I]])


def _require_integrable(phi: QuadraticWeight):
    form = realify(phi)
    if form.eigvals[0] <= 0:
        raise ValueError("e^{-2 Phi} is not integrable: the weight is not positive definite "
                         f"(smallest real eigenvalue {form.eigvals[0]:.3e})")
    return form


def gaussian_mass(phi: QuadraticWeight) -> float:
    """Total mass pi^n 2^{-n} det(M)^{-1/2} of e^{-2 Phi}."""
    form = _require_integrable(phi)
    n = phi.n
    return math.exp(n * math.log(math.pi) - n * math.log(2.0)
                    - 0.5 * float(np.sum(np.log(form.eigvals))))


def second_moments(phi: QuadraticWeight) -> np.ndarray:
    """E[z z^T] for z = (x, conj x) under the normalized measure."""
    form = _require_integrable(phi)
    sigma = 0.25 * np.linalg.inv(form.M)
    T = _holo_antiholo(phi.n)
    return T @ sigma @ T.T


@dataclass(frozen=True, eq=False)
class MomentTable:
    """Integrals of x^alpha conj(x)^beta e^{-2 Phi} for |alpha|, |beta| per-variable <= max_degree."""

    phi: QuadraticWeight
    max_degree: int
    values: np.ndarray  # indexed by concatenated (alpha, beta)
    mass: float

    def __call__(self, alpha, beta) -> complex:
        return complex(self.values[tuple(alpha) + tuple(beta)])


def _moment_array(phi: QuadraticWeight, caps) -> tuple[np.ndarray, float]:
    mass = gaussian_mass(phi)
    series = exp_quadratic_series(second_moments(phi), None, caps)
    vals = mass * factorial_grid(caps) * series
    return vals, mass


def moment_table(phi: QuadraticWeight, max_degree: int) -> MomentTable:
    n = phi.n
    caps = (max_degree,) * (2 * n)
    vals, mass = _moment_array(phi, caps)
    # enforce values(alpha, beta) = conj(values(beta, alpha)) exactly
    perm = tuple(range(n, 2 * n)) + tuple(range(n))
    vals = 0.5 * (vals + np.transpose(vals, perm).conj())
    vals.setflags(write=False)
    return MomentTable(phi, max_degree, vals, mass)


def gaussian_moment(phi: QuadraticWeight, alpha, beta) -> complex:
    """Integral of x^alpha conj(x)^beta e^{-2 Phi(x)} over C^n."""
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != phi.n or len(beta) != phi.n:
        raise ValueError("multi-index length does not match the weight dimension")
    if (sum(alpha) + sum(beta)) % 2:
        return 0j
    caps = alpha + beta
    vals, _ = _moment_array(phi, caps)
    return complex(vals[caps])


def gauss_hermite_integral(phi: QuadraticWeight, func, points_per_axis: int = 20):
    """Integral of func(x) e^{-2 Phi(x)} over C^n, n <= 2, by whitened tensor Gauss-Hermite.

    ``func`` maps points of shape (N, n) to values of shape (N, ...); a
    scalar integrand gives a complex number, otherwise an array.
    """
    if phi.n > 2:
        raise ValueError("tensor quadrature is limited to n <= 2")
    form = _require_integrable(phi)
    m = form.m
    nodes, weights = np.polynomial.hermite.hermgauss(points_per_axis)
    grids = np.meshgrid(*([nodes] * m), indexing="ij")
    Y = np.stack([g.ravel() for g in grids], axis=-1)
    W = np.ones(Y.shape[0])
    for wg in np.meshgrid(*([weights] * m), indexing="ij"):
        W = W * wg.ravel()
    # 2 X^T M X = Y^T Y for X = V (2 Lambda)^{-1/2} Y
    L = form.eigvecs / np.sqrt(2.0 * form.eigvals)
    X = Y @ L.T
    jac = float(np.prod(1.0 / np.sqrt(2.0 * form.eigvals)))
    n = phi.n
    x = X[:, :n] + 1j * X[:, n:]
    vals = jac * np.tensordot(W, func(x), axes=1)
    return complex(vals) if np.ndim(vals) == 0 else vals


def quadrature_oracle(phi: QuadraticWeight, alpha, beta, points_per_axis: int = 20) -> complex:
    alpha = np.asarray(alpha)
    beta = np.asarray(beta)

    def f(x):
        return np.prod(x ** alpha, axis=-1) * np.prod(x.conj() ** beta, axis=-1)

    return gauss_hermite_integral(phi, f, points_per_axis)

