"""Seeded random weights, maps and the instance suites used by scripts and tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decision import AffineMap, difference_form
from .qform import QuadraticWeight, realify


def random_complex(rng: np.random.Generator, shape=(), scale: float = 1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_weight(rng: np.random.Generator, n: int, *, positive_definite: bool = True,
                  skew: float = 0.5) -> QuadraticWeight:
    """Random strictly psh weight; with ``positive_definite`` also e^{-2 Phi} is integrable."""
    G = random_complex(rng, (n, n))
    H = G @ G.conj().T + 0.5 * np.eye(n)
    S = random_complex(rng, (n, n))
    S = S + S.T
    # |Re x^T S x| <= ||S|| |x|^2 and Phi_herm >= lambda_min |x|^2
    lam = np.linalg.eigvalsh(H)[0]
    norm = np.linalg.norm(S, 2)
    if norm > 0:
        S = S * (skew * lam / norm if positive_definite else rng.uniform(0.5, 2.0) * lam / norm)
    return QuadraticWeight(H, S)


def random_affine(rng: np.random.Generator, n1: int, n2: int, scale: float = 1.0,
                  invertible: bool = False) -> AffineMap:
    while True:
        A = random_complex(rng, (n1, n2), scale)
        if not invertible or np.linalg.cond(A) < 1e3:
            break
    return AffineMap(A, random_complex(rng, n1))


@dataclass(frozen=True)
class Instance1D:
    r1: float
    s1: complex
    r2: float
    s2: complex
    a: complex
    b: complex

    @property
    def phi1(self) -> QuadraticWeight:
        return QuadraticWeight.from_1d(self.r1, self.s1)

    @property
    def phi2(self) -> QuadraticWeight:
        return QuadraticWeight.from_1d(self.r2, self.s2)

    @property
    def map(self) -> AffineMap:
        return AffineMap.from_1d(self.a, self.b)


def random_instances_1d(count: int, seed: int = 0) -> list[Instance1D]:
    """r_j in [0.1, 2], |s_j| <= 2.4 r_j, a and b standard complex normal."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        r1, r2 = rng.uniform(0.1, 2.0, 2)
        s1 = rng.uniform(0, 2.4 * r1) * np.exp(2j * np.pi * rng.uniform())
        s2 = rng.uniform(0, 2.4 * r2) * np.exp(2j * np.pi * rng.uniform())
        a = complex(random_complex(rng))
        b = complex(random_complex(rng))
        out.append(Instance1D(float(r1), complex(s1), float(r2), complex(s2), a, b))
    return out


def margin(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap) -> float:
    """-lambda_max of the difference form, relative to the target weight's scale."""
    lam = difference_form(phi1, phi2, phi.A).eigvals[-1]
    return float(-lam / np.linalg.norm(realify(phi2).M, 2))


def compact_suite(seed: int = 0, count: int = 12, min_margin: float = 0.05):
    """Named compact instances plus random ones with relative margin >= ``min_margin``."""
    named = [
        ("radial_half", QuadraticWeight.from_1d(0.25), QuadraticWeight.from_1d(0.25),
         AffineMap.from_1d(0.5, 3.0)),
        ("nonradial_half", QuadraticWeight.from_1d(0.25), QuadraticWeight.from_1d(1.0, 0.5),
         AffineMap.from_1d(0.5)),
        ("radial_2d_diag", QuadraticWeight.radial(2), QuadraticWeight.radial(2),
         AffineMap.linear(np.diag([0.5, 1 / 3]))),
        ("skew_target", QuadraticWeight.from_1d(1.0, 2.0), QuadraticWeight.from_1d(1.0, 1.5),
         AffineMap.from_1d(np.sqrt(0.75), 1 - 1j)),
    ]
    rng = np.random.default_rng(seed)
    out = list(named)
    while len(out) < len(named) + count:
        n1, n2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        phi1 = random_weight(rng, n1)
        phi2 = random_weight(rng, n2, positive_definite=bool(rng.integers(0, 2)))
        phi = random_affine(rng, n1, n2, scale=0.5)
        if margin(phi1, phi2, phi) >= min_margin:
            out.append((f"random_{len(out)}", phi1, phi2, phi))
    return out


def unbounded_suite(seed: int = 0, count: int = 20):
    """Random 1-D instances where the semidefiniteness or linear-term condition fails."""
    from .decision import Decision, is_bounded

    out = []
    for k, inst in enumerate(random_instances_1d(10 * count, seed)):
        v = is_bounded(inst.phi1, inst.phi2, inst.map)
        if v.decision is Decision.NO and v.certificate.violated in ("semidefinite", "linear_term"):
            out.append((f"unbounded_{k}", inst.phi1, inst.phi2, inst.map))
        if len(out) == count:
            break
    out.append(("translation", QuadraticWeight.from_1d(0.25), QuadraticWeight.from_1d(0.25),
                AffineMap.from_1d(1.0, 1.0)))
    return out
