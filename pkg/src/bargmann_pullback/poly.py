"""Sparse multivariate polynomials over C and their affine pullbacks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np


def _graded(n: int, d: int) -> Iterator[tuple[int, ...]]:
    # exponents of total degree d, first variable descending
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _graded(n - 1, d - first):
            yield (first,) + rest


def monomials_up_to(n: int, D: int) -> list[tuple[int, ...]]:
    """All exponents with |alpha| <= D in graded lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    if D < 0:
        raise ValueError("degree must be nonnegative")
    return [alpha for d in range(D + 1) for alpha in _graded(n, d)]


@dataclass(frozen=True, eq=False)
class Poly:
    n: int
    terms: dict

    def __post_init__(self):
        clean = {}
        for alpha, c in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n:
                raise ValueError(f"exponent {alpha} does not have length {self.n}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent {alpha}")
            c = complex(c)
            if c != 0:
                clean[alpha] = clean.get(alpha, 0) + c
        object.__setattr__(self, "terms", {a: c for a, c in clean.items() if c != 0})

    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, alpha, c: complex = 1.0) -> "Poly":
        alpha = tuple(alpha)
        return cls(len(alpha), {alpha: c})

    @classmethod
    def variable(cls, n: int, k: int) -> "Poly":
        alpha = [0] * n
        alpha[k] = 1
        return cls(n, {tuple(alpha): 1.0})

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def __call__(self, x) -> complex:
        return evaluate(self, x)

    def __add__(self, other: "Poly") -> "Poly":
        if isinstance(other, (int, float, complex)):
            other = Poly.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.n, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, float, complex, np.number)):
            return Poly(self.n, {a: c * other for a, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                key = tuple(i + j for i, j in zip(a, b))
                out[key] = out.get(key, 0) + c * d
        return Poly(self.n, out)

    __rmul__ = __mul__

    def _check(self, other: "Poly"):
        if other.n != self.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def coefficients(self, basis) -> np.ndarray:
        """Coefficient vector against an ordered list of exponents."""
        index = {a: i for i, a in enumerate(basis)}
        vec = np.zeros(len(basis), dtype=complex)
        for a, c in self.terms.items():
            if a not in index:
                raise ValueError(f"monomial {a} is outside the basis")
            vec[index[a]] = c
        return vec

    @classmethod
    def from_coefficients(cls, basis, coeffs) -> "Poly":
        n = len(basis[0])
        return cls(n, {a: c for a, c in zip(basis, coeffs)})


def evaluate(p: Poly, x) -> complex:
    """Direct sum of c_alpha x^alpha."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.shape[0] != p.n:
        raise ValueError(f"point has dimension {x.shape[0]}, polynomial has {p.n} variables")
    total = 0j
    for alpha, c in p.terms.items():
        total += c * np.prod(x ** np.array(alpha))
    return complex(total)


def compose_affine(p: Poly, A, b) -> Poly:
    """The pullback x -> p(A x + b) as a polynomial in dim(x) variables."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    b = np.asarray(b, dtype=complex).reshape(-1)
    n1, n2 = A.shape
    if p.n != n1 or b.shape[0] != n1:
        raise ValueError(f"map C^{n2} -> C^{n1} (b of length {b.shape[0]}) "
                         f"cannot pull back a polynomial in {p.n} variables")
    forms = []
    for i in range(n1):
        terms = {(0,) * n2: b[i]}
        for j in range(n2):
            e = [0] * n2
            e[j] = 1
            terms[tuple(e)] = A[i, j]
        forms.append(Poly(n2, terms))

    powers: dict[tuple[int, int], Poly] = {}

    def power(i: int, k: int) -> Poly:
        if k == 0:
            return Poly.constant(n2)
        if (i, k) not in powers:
            powers[(i, k)] = power(i, k - 1) * forms[i]
        return powers[(i, k)]

    out = Poly(n2, {})
    for alpha, c in p.terms.items():
        term = Poly.constant(n2, c)
        for i, k in enumerate(alpha):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def composition_matrix(A, b, source_basis, target_basis) -> np.ndarray:
    """Matrix P with pullback(x^gamma) = sum_delta P[gamma, delta] x^delta."""
    P = np.zeros((len(source_basis), len(target_basis)), dtype=complex)
    n1 = len(source_basis[0])
    for i, gamma in enumerate(source_basis):
        P[i] = compose_affine(Poly(n1, {gamma: 1.0}), A, b).coefficients(target_basis)
    return P


def n_monomials(n: int, D: int) -> int:
    return math.comb(n + D, n)
