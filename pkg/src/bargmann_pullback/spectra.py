"""Truncated matrices of C_phi in orthonormal polynomial bases and their spectra."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np

from .decision import AffineMap, is_bounded
from .moments import MomentTable, moment_table
from .poly import composition_matrix, monomials_up_to
from .qform import QuadraticWeight
from .verdict import Decision

log = logging.getLogger(__name__)

DEFAULT_DEGREE = {1: 30, 2: 12}
EIG_CUTOFF = 1e-12
ONB_RESIDUAL = 1e-8


class IllConditionedGram(ValueError):
    """The monomial Gram matrix cannot be whitened reliably at the requested degree."""

    def __init__(self, degree: int, max_safe_degree: int, detail: str):
        super().__init__(f"Gram matrix ill-conditioned at degree {degree} ({detail}); "
                         f"largest safe degree is {max_safe_degree}")
        self.degree = degree
        self.max_safe_degree = max_safe_degree


def default_degree(n: int) -> int:
    return DEFAULT_DEGREE.get(n, 6)


def gram_matrix(phi: QuadraticWeight, D: int, table: MomentTable | None = None) -> np.ndarray:
    """G[i, j] = <x^alpha_i, x^alpha_j> in L^2(e^{-2 Phi}), graded-lex monomials."""
    basis = monomials_up_to(phi.n, D)
    table = moment_table(phi, D) if table is None else table
    return _cross_gram(table, basis, basis)


def _cross_gram(table: MomentTable, rows, cols) -> np.ndarray:
    R = np.array(rows, dtype=int)
    Cc = np.array(cols, dtype=int)
    shape = (len(R), len(Cc))
    key = tuple(np.broadcast_to(R[:, k:k + 1], shape) for k in range(R.shape[1])) + \
        tuple(np.broadcast_to(Cc[None, :, k], shape) for k in range(Cc.shape[1]))
    return np.array(table.values[key])


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Rows of ``coeffs`` are ONB elements expanded in ``monomials``."""

    phi: QuadraticWeight
    degree: int
    monomials: list
    coeffs: np.ndarray
    gram: np.ndarray

    def residual(self) -> float:
        B = self.coeffs
        return float(np.linalg.norm(B @ self.gram @ B.conj().T - np.eye(len(B)), 2))


def _whiten(G: np.ndarray):
    d = np.sqrt(np.real(np.diag(G)))
    Gs = G / np.outer(d, d)
    Gs = 0.5 * (Gs + Gs.conj().T)
    w, V = np.linalg.eigh(Gs)
    return d, w, V


def _whitening_ok(G: np.ndarray) -> tuple[bool, str, np.ndarray | None]:
    d, w, V = _whiten(G)
    if w[0] <= EIG_CUTOFF * w[-1]:
        return False, f"scaled condition number {w[-1] / max(w[0], 1e-300):.2e}", None
    B = (V / np.sqrt(w)) @ V.conj().T / d[None, :]
    res = np.linalg.norm(B @ G @ B.conj().T - np.eye(len(G)), 2)
    if res > ONB_RESIDUAL:
        return False, f"orthonormality residual {res:.2e}", None
    return True, "", B


def orthonormal_basis(phi: QuadraticWeight, D: int, table: MomentTable | None = None) -> OrthonormalBasis:
    """Symmetric (Loewdin) whitening of the diagonally scaled monomial Gram matrix."""
    table = moment_table(phi, D) if table is None else table
    basis = monomials_up_to(phi.n, D)
    G = _cross_gram(table, basis, basis)
    ok, detail, B = _whitening_ok(G)
    if not ok:
        safe = -1
        for d in range(D - 1, -1, -1):
            k = len(monomials_up_to(phi.n, d))
            if _whitening_ok(G[:k, :k])[0]:
                safe = d
                break
        raise IllConditionedGram(D, safe, detail)
    return OrthonormalBasis(phi, D, basis, B, G)


def max_safe_degree(phi: QuadraticWeight, D: int) -> int:
    try:
        orthonormal_basis(phi, D)
        return D
    except IllConditionedGram as exc:
        return exc.max_safe_degree


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """T[beta, alpha] = <C_phi e_alpha, f_beta> for ONBs e of H_Phi1 and f of H_Phi2."""

    source: OrthonormalBasis
    target: OrthonormalBasis
    entries: np.ndarray

    @property
    def shape(self):
        return self.entries.shape


def operator_matrix(phi1: QuadraticWeight, phi2: QuadraticWeight, phi: AffineMap,
                    D1: int | None = None, D2: int | None = None, *, check: bool = True) -> OperatorMatrix:
    D1 = default_degree(phi1.n) if D1 is None else D1
    D2 = default_degree(phi2.n) if D2 is None else D2
    if check:
        verdict = is_bounded(phi1, phi2, phi)
        if verdict.decision is Decision.NO:
            log.warning("C_phi is unbounded (%s fails); the truncation does not approximate an operator",
                        verdict.certificate.violated)
    src = orthonormal_basis(phi1, D1)
    table2 = moment_table(phi2, max(D1, D2))
    tgt = orthonormal_basis(phi2, D2, table2)
    pulled_basis = monomials_up_to(phi.n2, D1)
    P = composition_matrix(phi.A, phi.b, src.monomials, pulled_basis)
    cross = _cross_gram(table2, pulled_basis, tgt.monomials)
    T = tgt.coeffs.conj() @ cross.T @ (src.coeffs @ P).T
    if not np.isfinite(T).all():
        raise FloatingPointError("non-finite operator matrix entries")
    return OperatorMatrix(src, tgt, T)


def inclusion_matrix(phi_from: QuadraticWeight, phi_to: QuadraticWeight,
                     D1: int | None = None, D2: int | None = None) -> OperatorMatrix:
    """Truncation of the inclusion H_{phi_from} -> H_{phi_to} for weights sharing S.

    Multiplication by exp(-x^T S x) is unitary from H_Phi onto H_{Phi_herm} and
    commutes with the inclusion, so the Hermitian parts carry the same
    singular values; this also covers weights whose e^{-2 Phi} does not
    integrate polynomials.
    """
    if phi_from.n != phi_to.n:
        raise ValueError("inclusion needs weights on the same space")
    if not np.allclose(phi_from.S, phi_to.S, rtol=0, atol=1e-14 * max(phi_to.scale(), 1.0)):
        raise ValueError("inclusion reduction needs equal pluriharmonic parts")
    n = phi_to.n
    zero = np.zeros((n, n))
    return operator_matrix(QuadraticWeight(phi_from.H, zero), QuadraticWeight(phi_to.H, zero),
                           AffineMap.identity(n), D1, D2)


def inclusion_spectrum(phi_from: QuadraticWeight, phi_to: QuadraticWeight,
                       D: int | None = None) -> tuple[np.ndarray, np.ndarray, int]:
    """Singular values of the truncated inclusion and the prefix that is complete.

    For Hermitian weights homogeneous polynomials of different degrees are
    orthogonal, so the truncated matrix is block diagonal by degree and every
    block is exact. Values above the largest one in the degree-D block cannot
    be displaced by higher degrees. Falls back to the largest safe degree.
    Returns ``(all values, complete prefix, degree used)``.
    """
    n = phi_to.n
    D = default_degree(n) if D is None else D
    try:
        T = inclusion_matrix(phi_from, phi_to, D, D)
    except IllConditionedGram as exc:
        if exc.max_safe_degree < 1:
            raise
        D = exc.max_safe_degree
        T = inclusion_matrix(phi_from, phi_to, D, D)
    s = singular_values(T)
    k = len(monomials_up_to(n, D - 1))
    top = np.linalg.svd(T.entries[k:, k:], compute_uv=False).max()
    return s, s[s > top * (1 + 1e-9)], D


def singular_values(T) -> np.ndarray:
    entries = T.entries if isinstance(T, OperatorMatrix) else np.asarray(T)
    return np.linalg.svd(entries, compute_uv=False)


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r2: float
    count: int

    def to_json(self, degree: int | None = None) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2,
                "degree": degree, "count": self.count}


class NoDecay(ValueError):
    pass


def decay_fit(s, n2: int, floor: float = 1e-13) -> DecayFit:
    """Least squares of log s_j against j^{1/n2} over the prefix above ``floor``."""
    s = np.asarray(s, dtype=float)
    usable = 0
    while usable < len(s) and s[usable] > floor:
        usable += 1
    if usable < 5:
        raise ValueError(f"only {usable} singular values above {floor:g}; need at least 5")
    j = np.arange(1, usable + 1, dtype=float)
    x = j ** (1.0 / n2)
    y = np.log(s[:usable])
    slope, intercept = np.polyfit(x, y, 1)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot <= 1e-24 * max(1.0, float(np.sum(y ** 2))):
        raise NoDecay("singular values are constant; there is no decay to fit")
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    return DecayFit(float(slope), float(intercept), 1.0 - ss_res / ss_tot, usable)


def singular_value_csv(s, n2: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["j", "s_j", "j_pow", "log_s"])
    for j, v in enumerate(np.asarray(s, dtype=float), start=1):
        writer.writerow([j, repr(float(v)), repr(j ** (1.0 / n2)),
                         repr(float(np.log(v))) if v > 0 else "-inf"])
    return buf.getvalue()
