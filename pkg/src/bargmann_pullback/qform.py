"""Quadratic weights on C^n and their calculus.

A weight is stored as a pair ``(H, S)`` with

    Phi(x) = sum_{k,l} H[k, l] x_k conj(x_l) + Re(x^T S x),

so ``H`` is the Levi matrix and ``S`` the pluriharmonic block.  Real
coordinates are always ``X = (Re x, Im x)`` stacked, and a real form is
evaluated as ``X^T M X`` with no factor 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .verdict import Certificate, Decision, Verdict, sign_decision

DEFAULT_TOL = 1e-9


def _as_matrix(a, n: int | None = None) -> np.ndarray:
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if n is not None and m.shape[0] != n:
        raise ValueError(f"expected a {n}x{n} matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True, eq=False)
class QuadraticWeight:
    """Real quadratic form on C^n given by a Hermitian ``H`` and symmetric ``S``."""

    H: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        H = _as_matrix(self.H)
        S = _as_matrix(self.S)
        if H.shape != S.shape:
            raise ValueError(f"H has shape {H.shape} but S has shape {S.shape}")
        scale = max(1.0, np.abs(H).max(initial=0.0), np.abs(S).max(initial=0.0))
        if np.abs(H - H.conj().T).max() > 1e-12 * scale:
            raise ValueError("H must be Hermitian")
        if np.abs(S - S.T).max() > 1e-12 * scale:
            raise ValueError("S must be symmetric")
        if not (np.isfinite(H).all() and np.isfinite(S).all()):
            raise ValueError("weight entries must be finite")
        # symmetrize exactly so downstream identities hold to rounding only
        H = 0.5 * (H + H.conj().T)
        S = 0.5 * (S + S.T)
        H.setflags(write=False)
        S.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "S", S)

    @classmethod
    def from_1d(cls, r: float, s: complex = 0.0) -> "QuadraticWeight":
        """``r|x|^2 + Re(s x^2)`` on C."""
        return cls(np.array([[r]]), np.array([[s]]))

    @classmethod
    def radial(cls, n: int, r: float = 0.25) -> "QuadraticWeight":
        return cls(r * np.eye(n), np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.H.shape[0]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=complex)
        herm = np.einsum("...k,kl,...l->...", x, self.H, x.conj())
        plh = np.einsum("...k,kl,...l->...", x, self.S, x)
        return np.real(herm) + np.real(plh)

    def herm(self, x) -> float:
        x = np.asarray(x, dtype=complex)
        return np.real(np.einsum("...k,kl,...l->...", x, self.H, x.conj()))

    def scale(self) -> float:
        return float(max(np.linalg.norm(self.H, 2), np.linalg.norm(self.S, 2)))

    def shifted(self, delta: float) -> "QuadraticWeight":
        """Return ``Phi - delta |x|^2``."""
        return QuadraticWeight(self.H - delta * np.eye(self.n), self.S)

    def to_json(self) -> dict:
        return {"n": self.n, "H": complex_matrix_to_json(self.H),
                "S": complex_matrix_to_json(self.S)}

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticWeight":
        H = complex_matrix_from_json(data["H"])
        S = complex_matrix_from_json(data["S"])
        n = data.get("n")
        if n is not None and H.shape != (n, n):
            raise ValueError(f"declared n={n} does not match H of shape {H.shape}")
        return cls(H, S)


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        return [complex_to_json(z) for z in m]
    return [complex_matrix_to_json(row) for row in m]


def complex_matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex scalars must be encoded as [re, im]")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True, eq=False)
class Polarization:
    """Holomorphic form Psi(x, y) = x^T H y + x^T S x / 2 + y^T conj(S) y / 2."""

    H: np.ndarray
    S: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[0]

    def __call__(self, x, y) -> complex:
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return (np.einsum("...k,kl,...l->...", x, self.H, y)
                + 0.5 * np.einsum("...k,kl,...l->...", x, self.S, x)
                + 0.5 * np.einsum("...k,kl,...l->...", y, self.S.conj(), y))


@dataclass(frozen=True, eq=False)
class RealForm:
    """Real symmetric form X^T M X on R^m with cached eigendecomposition."""

    M: np.ndarray
    eigvals: np.ndarray = field(init=False)
    eigvecs: np.ndarray = field(init=False)

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=float))
        if M.shape[0] != M.shape[1]:
            raise ValueError(f"real form must be square, got {M.shape}")
        M = 0.5 * (M + M.T)
        w, v = np.linalg.eigh(M)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "eigvals", w)
        object.__setattr__(self, "eigvecs", v)

    @property
    def m(self) -> int:
        return self.M.shape[0]

    def __call__(self, X) -> float:
        X = np.asarray(X, dtype=float)
        return np.einsum("...i,ij,...j->...", X, self.M, X)

    def scale(self) -> float:
        return float(np.abs(self.eigvals).max(initial=0.0))


def real_coords(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return np.concatenate([x.real, x.imag], axis=-1)


def complex_coords(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    n = X.shape[-1] // 2
    return X[..., :n] + 1j * X[..., n:]


def realify_matrix(A) -> np.ndarray:
    """Real 2n1 x 2n2 matrix of the complex-linear map x -> A x."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return np.block([[A.real, -A.imag], [A.imag, A.real]])


def realify(q, n: int | None = None, *, check_samples: int = 16,
            tol: float = 1e-10, seed: int = 0) -> RealForm:
    """Real matrix of a real-valued quadratic form on C^n.

    ``q`` is either a :class:`QuadraticWeight` (closed form) or a callable
    on C^n, in which case ``n`` is required and the matrix is recovered by
    polarization on the real basis, then checked on random samples.
    """
    if isinstance(q, QuadraticWeight):
        K = q.H.conj()
        Kr, Ki = K.real, K.imag
        Sr, Si = q.S.real, q.S.imag
        M = np.block([[Kr + Sr, -Ki - Si], [Ki - Si, Kr - Sr]])
        return RealForm(M)

    if n is None:
        raise ValueError("dimension n is required for callable forms")
    m = 2 * n
    E = np.eye(m)

    def qr(X):
        val = complex(q(complex_coords(X)))
        return val

    diag = [qr(E[i]) for i in range(m)]
    M = np.zeros((m, m))
    for i in range(m):
        M[i, i] = diag[i].real
        for j in range(i + 1, m):
            M[i, j] = M[j, i] = 0.5 * (qr(E[i] + E[j]).real - diag[i].real - diag[j].real)
    form = RealForm(M)

    rng = np.random.default_rng(seed)
    ref = max(1.0, form.scale())
    for X in rng.standard_normal((check_samples, m)):
        val = complex(q(complex_coords(X)))
        if abs(val.imag) > tol * ref * (X @ X):
            raise ValueError(f"form is not real-valued: imaginary part {val.imag:.3e}")
        if abs(val.real - form(X)) > 1e3 * tol * ref * (X @ X):
            raise ValueError("form is not quadratic: polarization check failed")
    return form


def is_strictly_psh(phi: QuadraticWeight, tol: float = DEFAULT_TOL) -> Verdict:
    """Positive definiteness of the Levi matrix, with a tolerance band."""
    w = np.linalg.eigvalsh(phi.H)
    lam_min = float(w[0])
    scale = float(np.abs(w).max(initial=0.0))
    if scale == 0.0:
        decision = Decision.NO
    elif lam_min > tol * scale:
        decision = Decision.YES
    elif lam_min < -tol * scale:
        decision = Decision.NO
    else:
        decision = Decision.BOUNDARY
    cert = Certificate(eigenvalues=w.tolist(),
                       violated=None if decision is Decision.YES else "strict_psh",
                       extra={"lambda_min": lam_min})
    return Verdict(decision, {"strict_psh": decision}, cert)


def split_herm_plh(phi: QuadraticWeight):
    """Split into the Hermitian part and the holomorphic quadratic f = x^T S x."""
    from .poly import Poly

    n = phi.n
    herm = QuadraticWeight(phi.H, np.zeros((n, n)))
    terms = {}
    for k in range(n):
        for l in range(n):
            alpha = [0] * n
            alpha[k] += 1
            alpha[l] += 1
            terms[tuple(alpha)] = terms.get(tuple(alpha), 0) + phi.S[k, l]
    return herm, Poly(n, terms)


def polarize(phi: QuadraticWeight) -> Polarization:
    return Polarization(phi.H, phi.S)


def holomorphic_gradient(phi: QuadraticWeight, x) -> np.ndarray:
    """Componentwise d/dx_k of Phi: H conj(x) + S x."""
    x = np.asarray(x, dtype=complex)
    return x.conj() @ phi.H.T + x @ phi.S.T


def fundamental_gap(phi: QuadraticWeight, z, y) -> float:
    """2 Re Psi(z, conj y) - Phi(z) - Phi(y); equals -Phi_herm(z - y)."""
    z = np.asarray(z, dtype=complex)
    y = np.asarray(y, dtype=complex)
    psi = polarize(phi)
    return 2.0 * np.real(psi(z, y.conj())) - phi(z) - phi(y)


def normalization_constant(phi: QuadraticWeight) -> float:
    """b_Phi with b^2 = 2^n det(H) / pi^n, so coherent states have unit norm."""
    w = np.linalg.eigvalsh(phi.H)
    if w[0] <= 0:
        raise ValueError("Levi matrix is not positive definite")
    n = phi.n
    log_b2 = n * math.log(2.0) + float(np.sum(np.log(w))) - n * math.log(math.pi)
    return math.exp(0.5 * log_b2)


def coherent_state(phi: QuadraticWeight, w) -> Callable:
    """Normalized reproducing kernel x -> b e^{2 Psi(x, conj w) - Phi(w)}."""
    w = np.asarray(w, dtype=complex)
    b = normalization_constant(phi)
    psi = polarize(phi)
    phi_w = phi(w)

    def k(x):
        return b * np.exp(2.0 * psi(np.asarray(x, dtype=complex), w.conj()) - phi_w)

    return k


def levi_margin(phi: QuadraticWeight) -> float:
    return float(np.linalg.eigvalsh(phi.H)[0])


__all__ = [
    "DEFAULT_TOL", "QuadraticWeight", "Polarization", "RealForm", "realify",
    "realify_matrix", "real_coords", "complex_coords", "is_strictly_psh",
    "split_herm_plh", "polarize", "holomorphic_gradient", "fundamental_gap",
    "normalization_constant", "coherent_state", "sign_decision",
]
