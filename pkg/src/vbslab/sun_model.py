"""SU(n) valence-bond chains: generalised Pauli algebra and transfer-matrix spectra.

The block spectrum reduces to the two dangling end spins, whose density
matrix is diagonal in the maximally-entangled basis ``|l, m>``.  Summing over
the adjoint label on each site acts on that diagonal as the all-ones-minus-
identity matrix ``T``, with basis position ``l*n + m``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .density_oracle import EntropyReport, entropy_from_weights
from .errors import DomainError


def _check_n(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    return n


def _check_L(L: int) -> int:
    if isinstance(L, bool) or not isinstance(L, int) or L < 1:
        raise DomainError(f"L must be an integer >= 1, got {L!r}")
    return L


@dataclass(frozen=True)
class GenPauli:
    n: int
    l: int
    m: int
    matrix: np.ndarray


def shift_clock(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``X|j> = |j+1 mod n>`` and ``Z|j> = w^j |j>`` with ``w = exp(2 pi i / n)``."""
    _check_n(n)
    X = np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)
    Z = np.diag([cmath.exp(2j * math.pi * j / n) for j in range(n)])
    return X, Z


def gen_pauli(n: int, l: int, m: int) -> GenPauli:
    """``U_{l,m} = X^l Z^m`` with ``l, m`` reduced mod ``n``."""
    X, Z = shift_clock(n)
    l, m = l % n, m % n
    U = np.linalg.matrix_power(X, l) @ np.linalg.matrix_power(Z, m)
    return GenPauli(n, l, m, U)


def singlet(n: int) -> np.ndarray:
    """``|0,0> = n^{-1/2} sum_j |j>|j>`` as a vector of length ``n^2``."""
    _check_n(n)
    return np.eye(n, dtype=np.complex128).reshape(-1) / math.sqrt(n)


def me_state(n: int, l: int, m: int) -> np.ndarray:
    """``|l,m> = (U_{l,m} (x) I)|0,0>``."""
    U = gen_pauli(n, l, m).matrix
    return np.kron(U, np.eye(n)) @ singlet(n)


def swap_identity_residual(n: int) -> float:
    """Max deviation between the two sides of the entanglement-swapping identity.

    Left side ``|0,0>_{0,1'} |0,0>_{1,2'}``; right side
    ``(1/n) sum_{l,m} |l,m>_{0,2'} |l,-m>_{1',1}``, with site order ``0, 1', 1, 2'``.
    """
    _check_n(n)
    lhs = np.kron(singlet(n), singlet(n))
    rhs = np.zeros(n ** 4, dtype=np.complex128)
    for l in range(n):
        for m in range(n):
            outer = me_state(n, l, m).reshape(n, n)
            inner = me_state(n, l, -m).reshape(n, n)
            rhs += np.einsum("ad,bc->abcd", outer, inner).reshape(-1) / n
    return float(np.max(np.abs(lhs - rhs)))


def transfer_matrix(n: int) -> np.ndarray:
    """Integer ``n^2 x n^2`` matrix with zero diagonal and ones elsewhere."""
    _check_n(n)
    d = n * n
    return np.ones((d, d), dtype=object) - np.eye(d, dtype=int).astype(object)


@dataclass(frozen=True)
class SunSpectrum:
    n: int
    L: int
    lambda_00: Fraction
    lambda_other: Fraction
    p: Fraction

    def trace(self) -> Fraction:
        return self.lambda_00 + (self.n ** 2 - 1) * self.lambda_other

    def lambda_at(self, l: int, m: int) -> Fraction:
        return self.lambda_00 if (l % self.n, m % self.n) == (0, 0) else self.lambda_other

    def norm_factor(self, p: int, q: int) -> float:
        """``C_{p,q} = 1 / sqrt((n^2-1)^L lambda_{-p,-q})`` for the degenerate block states."""
        lam = self.lambda_at(-p, -q)
        if lam <= 0:
            raise DomainError(f"C_{{{p},{q}}} undefined: lambda_{{-p,-q}} = {lam}")
        return 1.0 / math.sqrt((self.n ** 2 - 1) ** self.L * lam)

    def entries(self) -> list:
        """``((l, m), lambda)`` for every basis label in ``l*n + m`` order."""
        return [((l, m), self.lambda_at(l, m)) for l in range(self.n) for m in range(self.n)]


def _p(n: int, L: int) -> Fraction:
    return Fraction(-1, n * n - 1) ** L


def transfer_spectrum(n: int, L: int) -> SunSpectrum:
    """``(n^2-1)^{-L} T^L e_1`` in exact integers, read off at ``(0,0)`` and elsewhere."""
    _check_n(n)
    _check_L(L)
    T = transfer_matrix(n)
    v = np.zeros(n * n, dtype=object)
    v[:] = 0
    v[0] = 1
    for _ in range(L):
        v = T.dot(v)
    others = set(v[1:].tolist())
    if len(others) != 1:
        raise AssertionError("transfer iteration broke the (l,m) != (0,0) degeneracy")
    scale = (n * n - 1) ** L
    return SunSpectrum(n, L, Fraction(int(v[0]), scale), Fraction(int(others.pop()), scale), _p(n, L))


def sun_closed_form(n: int, L: int) -> SunSpectrum:
    """``lambda_00 = (1 + (n^2-1) p)/n^2`` and ``lambda_other = (1 - p)/n^2``."""
    _check_n(n)
    _check_L(L)
    p = _p(n, L)
    return SunSpectrum(n, L, (1 + (n * n - 1) * p) / (n * n), (1 - p) / (n * n), p)


def sun_entropies(n: int, L: int, alphas: Sequence[float] = ()) -> EntropyReport:
    """Entropies (nats) of the ``n^2`` block eigenvalues; zero eigenvalues are skipped."""
    spec = sun_closed_form(n, L)
    return entropy_from_weights([float(spec.lambda_00), float(spec.lambda_other)], [1, n * n - 1], alphas)
