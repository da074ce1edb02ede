"""Linear graph geometry behind C_phi viewed as a complex FIO.

Lambda_Phi = {(x, (2/i) dPhi/dx(x))} is a real-linear subspace of C^{2n};
for invertible A the canonical map (y, eta) -> (A^{-1}(y - b), A^T eta)
carries Lambda_{Phi1} onto Lambda_{Phi1 o phi}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .decision import AffineMap
from .qform import QuadraticWeight, holomorphic_gradient, is_strictly_psh
from .verdict import Decision

COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class GraphMap:
    """xi = P x + Q conj(x) + offset."""

    P: np.ndarray
    Q: np.ndarray
    offset: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        xi = x @ self.P.T + x.conj() @ self.Q.T
        if self.offset is not None:
            xi = xi + self.offset
        return xi


def lambda_graph(phi: QuadraticWeight) -> GraphMap:
    return GraphMap(P=(2 / 1j) * phi.S, Q=(2 / 1j) * phi.H)


def _require_invertible(phi: AffineMap):
    if phi.n1 != phi.n2:
        raise ValueError(f"canonical graph needs a square map, got {phi.n1}x{phi.n2}")
    if np.linalg.cond(phi.A) > COND_LIMIT:
        raise ValueError("A is singular (condition number above limit)")


def kappa_map(phi: AffineMap) -> Callable:
    """(y, eta) -> (A^{-1}(y - b), A^T eta); transpose, not adjoint."""
    _require_invertible(phi)
    A, b = phi.A, phi.b

    def kappa(y, eta):
        y = np.asarray(y, dtype=complex)
        eta = np.asarray(eta, dtype=complex)
        x = np.linalg.solve(A, (y - b).T).T
        return x, eta @ A
    return kappa


def kappa_inverse(phi: AffineMap) -> Callable:
    _require_invertible(phi)
    A, b = phi.A, phi.b

    def inverse(x, xi):
        x = np.asarray(x, dtype=complex)
        xi = np.asarray(xi, dtype=complex)
        return x @ A.T + b, np.linalg.solve(A.T, xi.T).T
    return inverse


def pullback_weight(phi1: QuadraticWeight, phi: AffineMap) -> tuple[QuadraticWeight, np.ndarray, float]:
    """Phi1(A x + b) = Q(x) + 2 Re(c . x) + Phi1(b); returns (Q, c, Phi1(b))."""
    A, b = phi.A, phi.b
    quad = QuadraticWeight(A.T @ phi1.H @ A.conj(), A.T @ phi1.S @ A)
    c = A.T @ (phi1.H @ b.conj() + phi1.S @ b)
    return quad, c, float(phi1(b))


def pullback_graph(phi1: QuadraticWeight, phi: AffineMap) -> GraphMap:
    """Lambda of the quadratic polynomial Phi1 o phi; the linear part gives a constant offset."""
    quad, c, _ = pullback_weight(phi1, phi)
    g = lambda_graph(quad)
    return GraphMap(g.P, g.Q, offset=(2 / 1j) * c)


def verify_graph_mapping(phi1: QuadraticWeight, phi: AffineMap, samples: int = 100,
                         seed: int = 0) -> float:
    """Largest |eta' - xi_{Phi1 o phi}(x')| over kappa-images of sampled points of Lambda_{Phi1}."""
    kappa = kappa_map(phi)
    target = pullback_graph(phi1, phi)
    rng = np.random.default_rng(seed)
    n = phi1.n
    y = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    eta = (2 / 1j) * holomorphic_gradient(phi1, y)
    x, eta_new = kappa(y, eta)
    return float(np.abs(eta_new - target(x)).max())


@dataclass
class GraphReport:
    residual: float
    scale: float
    composed_psh: bool
    phase_rank: int
    canonical_graph: bool

    @property
    def passed(self) -> bool:
        return self.residual <= 1e-10 * self.scale and self.composed_psh and self.canonical_graph

    def to_json(self) -> dict:
        return {"residual": self.residual, "scale": self.scale, "composed_psh": self.composed_psh,
                "phase_rank": self.phase_rank, "canonical_graph": self.canonical_graph,
                "passed": self.passed}


def phase_hessians(phi1: QuadraticWeight, phi: AffineMap) -> dict[str, np.ndarray]:
    """Mixed Hessian blocks of F(x, y, theta) = (2/i)(Psi1(phi(x), theta) - Psi1(y, theta))."""
    c = 2 / 1j
    n1 = phi1.n
    return {"theta_x": c * phi1.H.T @ phi.A,
            "theta_y": -c * phi1.H.T,
            "theta_theta": np.zeros((n1, n1), dtype=complex),
            "x_theta": c * phi.A.T @ phi1.H}


def phase_rank(phi1: QuadraticWeight, phi: AffineMap) -> int:
    h = phase_hessians(phi1, phi)
    block = np.hstack([h["theta_x"], h["theta_y"], h["theta_theta"]])
    return int(np.linalg.matrix_rank(block))


def graph_mapping_report(phi1: QuadraticWeight, phi: AffineMap, samples: int = 100,
                         seed: int = 0) -> GraphReport:
    residual = verify_graph_mapping(phi1, phi, samples, seed)
    quad, c, _ = pullback_weight(phi1, phi)
    kappa = kappa_map(phi)
    rng = np.random.default_rng(seed)
    y = rng.standard_normal((samples, phi1.n)) + 1j * rng.standard_normal((samples, phi1.n))
    _, eta = kappa(y, (2 / 1j) * holomorphic_gradient(phi1, y))
    scale = float(max(1.0, np.abs(eta).max()))
    h = phase_hessians(phi1, phi)
    canonical = phi.n1 == phi.n2 and np.linalg.matrix_rank(h["x_theta"]) == phi.n1
    return GraphReport(residual=residual, scale=scale,
                       composed_psh=is_strictly_psh(quad).decision is Decision.YES,
                       phase_rank=phase_rank(phi1, phi), canonical_graph=bool(canonical))
