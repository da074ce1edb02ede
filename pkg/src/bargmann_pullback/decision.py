"""Boundedness and compactness of C_phi u = u o phi for affine phi.

Every test here reduces to a sign question about a real quadratic form on
R^{2 n2}; the answer is three-valued so that the <= / < distinction is
never silently rounded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .qform import (DEFAULT_TOL, QuadraticWeight, RealForm, complex_coords,
                    holomorphic_gradient, is_strictly_psh, realify,
                    realify_matrix, real_coords)
from .verdict import Certificate, Decision, Verdict, combine, sign_decision


@dataclass(frozen=True, eq=False)
class AffineMap:
    """phi(x) = A x + b from C^{n2} to C^{n1}."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        b = np.asarray(self.b, dtype=complex).reshape(-1)
        if A.ndim != 2:
            raise ValueError("A must be a matrix")
        if b.shape[0] != A.shape[0]:
            raise ValueError(f"b has length {b.shape[0]}, A has {A.shape[0]} rows")
        if not (np.isfinite(A).all() and np.isfinite(b).all()):
            raise ValueError("map entries must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def linear(cls, A) -> "AffineMap":
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        return cls(A, np.zeros(A.shape[0]))

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls.linear(np.eye(n))

    @classmethod
    def from_1d(cls, a: complex, b: complex = 0.0) -> "AffineMap":
        return cls(np.array([[a]]), np.array([b]))

    @property
    def n1(self) -> int:
        return self.A.shape[0]

    @property
    def n2(self) -> int:
        return self.A.shape[1]

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return x @ self.A.T + self.b

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self o other."""
        return AffineMap(self.A @ other.A, self.A @ other.b + self.b)

    def to_json(self) -> dict:
        from .qform import complex_matrix_to_json
        return {"A": complex_matrix_to_json(self.A), "b": complex_matrix_to_json(self.b)}

    @classmethod
    def from_json(cls, data: dict) -> "AffineMap":
        from .qform import complex_matrix_from_json
        A = complex_matrix_from_json(data["A"])
        b = complex_matrix_from_json(data["b"])
        return cls(np.atleast_2d(A), b)


def _check_dims(phi1: QuadraticWeight, phi2: QuadraticWeight, A):
    A = np.atleast_2d(A)
    if A.shape != (phi1.n, phi2.n):
        raise ValueError(f"A has shape {A.shape}, expected ({phi1.n}, {phi2.n})")


def _require_psh(*weights: QuadraticWeight, tol: float):
    for phi in weights:
        v = is_strictly_psh(phi, tol)
        if v.decision is not Decision.YES:
            raise ValueError("weight is not strictly plurisubharmonic "
                             f"(lambda_min(H) = {v.certificate.extra['lambda_min']:.3e})")


def difference_form(phi1: QuadraticWeight, phi2: QuadraticWeight, A) -> RealForm:
    """Real matrix of x -> Phi1(A x) - Phi2(x) on R^{2 n2}."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    _check_dims(phi1, phi2, A)
    Ar = realify_matrix(A)
    return RealForm(Ar.T @ realify(phi1).M @ Ar - realify(phi2).M)


def _difference_scale(phi1, phi2, A) -> float:
    Ar = realify_matrix(A)
    pulled = Ar.T @ realify(phi1).M @ Ar
    return float(max(np.linalg.norm(pulled, 2), np.linalg.norm(realify(phi2).M, 2)))


def linear_functional(phi1: QuadraticWeight, phi: AffineMap) -> np.ndarray:
    """Vector g with Re((d_x Phi1)(A x) . b) = g . X for X = (Re x, Im x)."""
    n2 = phi.n2
    E = np.eye(2 * n2)
    g = np.empty(2 * n2)
    for i in range(2 * n2):
        x = complex_coords(E[i])
        g[i] = np.real(holomorphic_gradient(phi1, phi.A @ x) @ phi.b)
    return g


def complex_null_space(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of Ker A, singular values cut at tol * sigma_max."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    n2 = A.shape[1]
    if A.size == 0:
        return np.eye(n2, dtype=complex)
    _, s, vh = np.linalg.svd(A)
    smax = s.max(initial=0.0)
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


def check_kernel_condition(phi2: QuadraticWeight, A, tol: float = DEFAULT_TOL) -> Verdict:
    """No nonzero x in Ker A with Phi2(x) <= 0."""
    N = complex_null_space(A, tol)
    k = N.shape[1]
    if k == 0:
        cert = Certificate(extra={"kernel_dim": 0})
        return Verdict(Decision.YES, {"kernel": Decision.YES}, cert)
    restricted = QuadraticWeight(N.T @ phi2.H @ N.conj(), N.T @ phi2.S @ N)
    form = realify(restricted)
    lam = form.eigvals
    scale = float(np.linalg.norm(realify(phi2).M, 2))
    regime = sign_decision(lam[0], scale, tol)
    # Phi2 <= 0 on a nonzero kernel vector is a failure, equality included
    decision = Decision.YES if regime == "pos" else (
        Decision.BOUNDARY if regime == "band" and lam[0] > 0 else Decision.NO)
    null_real = form.eigvecs[:, lam <= tol * scale]
    # map real restricted coordinates back to C^{n2}
    basis = [N @ complex_coords(v) for v in null_real.T]
    cert = Certificate(
        eigenvalues=lam.tolist(),
        null_basis=basis,
        violated=None if decision is Decision.YES else "kernel",
        witness=(N @ complex_coords(form.eigvecs[:, 0])) if decision is not Decision.YES else None,
        extra={"kernel_dim": k},
    )
    return Verdict(decision, {"kernel": decision}, cert)


def check_sup_condition(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
                        tol: float = DEFAULT_TOL) -> Verdict:
    """Phi1(Ax) - Phi2(x) <= 0, and the linear term vanishes on its zero set."""
    form = difference_form(phi1, phi2, phi.A)
    scale = _difference_scale(phi1, phi2, phi.A)
    lam = form.eigvals
    regimes = [sign_decision(v, scale, tol) for v in lam]
    g = linear_functional(phi1, phi)
    gscale = tol * max(np.linalg.norm(phi.b), 1e-300) * max(scale, 1e-300)

    null_mask = np.array([r == "zero" for r in regimes])
    band_mask = np.array([r == "band" for r in regimes])
    null_vecs = form.eigvecs[:, null_mask]
    band_vecs = form.eigvecs[:, band_mask]

    cert = Certificate(eigenvalues=lam.tolist(),
                       null_basis=[complex_coords(v) for v in null_vecs.T],
                       extra={"scale": scale, "lambda_max": float(lam[-1])})

    if regimes[-1] == "pos":
        semidef = Decision.NO
        cert.violated = "semidefinite"
        cert.witness = complex_coords(form.eigvecs[:, -1])
    elif band_mask.any():
        semidef = Decision.BOUNDARY
    else:
        semidef = Decision.YES

    proj = null_vecs.T @ g
    if proj.size and np.abs(proj).max() > gscale:
        linear = Decision.NO
        if cert.violated is None:
            cert.violated = "linear_term"
            cert.witness = complex_coords(null_vecs @ proj)
    else:
        linear = Decision.YES
        band_proj = band_vecs.T @ g
        if band_proj.size and np.abs(band_proj).max() > gscale and semidef is Decision.YES:
            semidef = Decision.BOUNDARY
    cert.extra["linear_residual"] = float(np.abs(proj).max(initial=0.0))
    conditions = {"semidefinite": semidef, "linear_term": linear}
    return Verdict(combine(conditions.values()), conditions, cert)


def is_bounded(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
               tol: float = DEFAULT_TOL) -> Verdict:
    _check_dims(phi1, phi2, phi.A)
    _require_psh(phi1, phi2, tol=tol)
    kern = check_kernel_condition(phi2, phi.A, tol)
    sup = check_sup_condition(phi1, phi2, phi, tol)
    conditions = {**kern.conditions, **sup.conditions}
    decision = combine(conditions.values())
    cert = sup.certificate
    cert.extra["kernel_eigenvalues"] = kern.certificate.eigenvalues
    cert.extra["kernel_dim"] = kern.certificate.extra["kernel_dim"]
    if kern.decision is not Decision.YES and (cert.violated is None):
        cert.violated = "kernel"
        cert.witness = kern.certificate.witness
        cert.null_basis = kern.certificate.null_basis
    return Verdict(decision, conditions, cert)


def is_compact(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
               tol: float = DEFAULT_TOL) -> Verdict:
    """Negative definiteness of x -> Phi1(Ax) - Phi2(x)."""
    _check_dims(phi1, phi2, phi.A)
    _require_psh(phi1, phi2, tol=tol)
    form = difference_form(phi1, phi2, phi.A)
    scale = _difference_scale(phi1, phi2, phi.A)
    lam = form.eigvals
    regime = sign_decision(lam[-1], scale, tol)
    decision = {"neg": Decision.YES, "band": Decision.BOUNDARY}.get(regime, Decision.NO)
    cert = Certificate(eigenvalues=lam.tolist(),
                       null_basis=[complex_coords(v) for v in
                                   form.eigvecs[:, np.abs(lam) <= tol * scale].T],
                       extra={"scale": scale, "margin": float(-lam[-1])})
    if decision is Decision.NO:
        cert.violated = "negative_definite"
        cert.witness = complex_coords(form.eigvecs[:, -1])
    return Verdict(decision, {"negative_definite": decision}, cert)


def shrink_weight(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
                  tol: float = DEFAULT_TOL) -> tuple[QuadraticWeight, float]:
    """Phi3 = Phi2 - delta |x|^2 with C_phi still bounded into H_{Phi3}."""
    if is_compact(phi1, phi2, phi, tol).decision is not Decision.YES:
        raise ValueError("shrink_weight requires a compact instance")
    lam_max = difference_form(phi1, phi2, phi.A).eigvals[-1]
    lam_h = np.linalg.eigvalsh(phi2.H)[0]
    delta = 0.5 * min(lam_h, -lam_max)
    phi3 = phi2.shifted(delta)
    if is_strictly_psh(phi3, tol).decision is not Decision.YES:
        raise RuntimeError("shrunk weight lost strict plurisubharmonicity")
    if is_bounded(phi1, phi3, phi, tol).decision is not Decision.YES:
        raise RuntimeError("C_phi is not bounded into the shrunk space")
    return phi3, float(delta)


@dataclass(frozen=True)
class SquareCompletion:
    """q(x', x'') = core(x'') + residual(x' - critical @ x'')."""

    critical: np.ndarray
    residual: RealForm
    core: RealForm

    def critical_point(self, x2):
        return self.critical @ np.asarray(x2, dtype=float)


def complete_square(q: RealForm, d: int, tol: float = DEFAULT_TOL) -> SquareCompletion:
    """Eliminate the leading m - d coordinates of q by its critical point."""
    m = q.m
    if not 0 <= d <= m:
        raise ValueError(f"split size {d} outside [0, {m}]")
    k = m - d
    P = q.M[:k, :k]
    R = q.M[:k, k:]
    Q = q.M[k:, k:]
    if k:
        w = np.linalg.eigvalsh(P)
        scale = max(q.scale(), 1e-300)
        if np.abs(w).min() < tol * scale:
            raise ValueError("leading block is degenerate")
        crit = -np.linalg.solve(P, R)
        core = Q + R.T @ crit
    else:
        crit = np.zeros((0, d))
        core = Q
    return SquareCompletion(crit, RealForm(P), RealForm(core))


# ---------------------------------------------------------------------------
# one complex dimension

class Class1D(str, enum.Enum):
    UNBOUNDED = "unbounded"
    BOUNDED = "bounded"
    COMPACT = "compact"
    BOUNDARY = "boundary"


def classify_1d(r1: float, s1: complex, r2: float, s2: complex, a: complex, b: complex,
                tol: float = DEFAULT_TOL) -> Class1D:
    """Closed-form classification for Phi_j = r_j|x|^2 + Re(s_j x^2), phi = ax + b."""
    if r1 <= 0 or r2 <= 0:
        raise ValueError("r1 and r2 must be positive")
    s1, s2, a, b = complex(s1), complex(s2), complex(a), complex(b)
    abs_a2 = abs(a) ** 2

    if a == 0:
        kscale = r2 + abs(s2)
        regime = sign_decision(r2 - abs(s2), kscale, tol)
        if regime != "pos":
            return Class1D.BOUNDARY if regime == "band" and r2 > abs(s2) else Class1D.UNBOUNDED

    c = s1 * a * a - s2
    rho = r2 - r1 * abs_a2
    gap = rho - abs(c)
    scale = max(abs_a2 * (r1 + abs(s1)), r2 + abs(s2))
    regime = sign_decision(gap, scale, tol)
    if regime == "neg":
        return Class1D.UNBOUNDED
    if regime == "band":
        return Class1D.BOUNDARY
    if regime == "pos":
        return Class1D.COMPACT

    # equality in |s1 a^2 - s2| <= r2 - r1|a|^2: b must kill the linear term on Z
    btol = tol * max(abs(b), 1e-300) * scale

    def ell(x):
        return ((r1 * (a * x).conjugate() + s1 * a * x) * b).real

    if sign_decision(rho, scale, tol) == "zero":
        # Z is all of S^1: Re((P e^{-it} + Q e^{it})) = 0 for all t iff P + conj(Q) = 0
        P = r1 * a.conjugate() * b
        Q = s1 * a * b
        ok = abs(P + Q.conjugate()) <= btol
    else:
        x0 = np.sqrt(abs(c) / c) if c != 0 else 1.0
        ok = abs(ell(complex(x0))) <= btol
    return Class1D.BOUNDED if ok else Class1D.UNBOUNDED


def exists_bounded_1d(r1: float, s1: complex, r2: float, s2: complex) -> bool:
    t1, t2 = abs(s1) / r1, abs(s2) / r2
    return t2 < 1 or t2 <= t1


def exists_compact_1d(r1: float, s1: complex, r2: float, s2: complex) -> bool:
    t1, t2 = abs(s1) / r1, abs(s2) / r2
    return t2 < 1 or t2 < t1


def engine_class(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
                 tol: float = DEFAULT_TOL) -> Class1D:
    """Collapse the general engine's two verdicts onto the 1-D classes."""
    bounded = is_bounded(phi1, phi2, phi, tol).decision
    compact = is_compact(phi1, phi2, phi, tol).decision
    if compact is Decision.YES:
        return Class1D.COMPACT
    if bounded is Decision.NO:
        return Class1D.UNBOUNDED
    if Decision.BOUNDARY in (bounded, compact):
        return Class1D.BOUNDARY
    return Class1D.BOUNDED


# ---------------------------------------------------------------------------
# witnesses

def log_ratio(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap, w) -> float:
    """Phi1(phi(w)) - Phi2(w), the exponent of the coherent-state norm ratio."""
    w = np.asarray(w, dtype=complex)
    return float(phi1(phi(w)) - phi2(w))


def default_witness_steps(m_max: int = 10_000) -> np.ndarray:
    return np.unique(np.round(np.geomspace(1, m_max, 41)).astype(int))


def find_witness(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
                 mode: str = "unbounded", steps=None, tol: float = DEFAULT_TOL):
    """Points w_m = m v with ratios e^{Phi1(phi(w_m)) - Phi2(w_m)}.

    Returns a list of ``(w_m, ratio_m)``; ratios overflow to ``inf``.
    """
    if mode not in ("unbounded", "noncompact"):
        raise ValueError(f"unknown mode {mode!r}")
    verdict = (is_bounded if mode == "unbounded" else is_compact)(phi1, phi2, phi, tol)
    if verdict.decision is Decision.YES:
        raise ValueError(f"no witness: the operator is {'bounded' if mode == 'unbounded' else 'compact'}")

    form = difference_form(phi1, phi2, phi.A)
    g = linear_functional(phi1, phi)
    lam = form.eigvals
    scale = _difference_scale(phi1, phi2, phi.A)
    bounded = is_bounded(phi1, phi2, phi, tol)

    if bounded.certificate.violated == "kernel":
        v = real_coords(np.asarray(bounded.certificate.witness))
    elif sign_decision(lam[-1], scale, tol) == "pos":
        v = form.eigvecs[:, -1]
    else:
        zero = np.abs(lam) <= tol * scale
        null = form.eigvecs[:, zero] if zero.any() else form.eigvecs[:, -1:]
        proj = null.T @ g
        v = null @ proj if np.linalg.norm(proj) > 0 else null[:, -1]
    v = v / np.linalg.norm(v)
    if g @ v < 0:
        v = -v

    steps = default_witness_steps() if steps is None else steps
    out = []
    for m in steps:
        w = complex_coords(m * v)
        with np.errstate(over="ignore"):
            ratio = float(np.exp(log_ratio(phi1, phi2, phi, w)))
        out.append((w, ratio))
    return out


__all__ = [
    "AffineMap", "difference_form", "linear_functional", "complex_null_space",
    "check_kernel_condition", "check_sup_condition", "is_bounded", "is_compact",
    "shrink_weight", "SquareCompletion", "complete_square", "Class1D",
    "classify_1d", "exists_bounded_1d", "exists_compact_1d", "engine_class",
    "log_ratio", "find_witness", "default_witness_steps",
]
