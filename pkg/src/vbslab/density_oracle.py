"""Brute-force reduced density matrices, spectra and entropies.

These routines know nothing about closed forms; they work from dense state
vectors and serve as the reference every analytic formula is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ResourceError, require_dim
from .spin_operators import HamiltonianSpec
from .vbs_constructor import StateVector, build_vbs, homogeneous_chain

CORRELATOR_BLOCK_CAP = 4096


@dataclass
class DensityMatrix:
    local_dims: tuple
    matrix: np.ndarray
    sites: tuple = ()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, tol: float = 1e-10) -> None:
        """Raise :class:`DomainError` unless the matrix is a unit-trace PSD Hermitian matrix."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-12 * max(1, self.dim):
            raise DomainError(f"density matrix trace {np.trace(m).real} != 1")
        if np.linalg.eigvalsh(m)[0] < -tol:
            raise DomainError("density matrix has a negative eigenvalue")


@dataclass
class Spectrum:
    """Distinct non-zero eigenvalues (descending) with their multiplicities."""

    eigenvalues: list
    degeneracies: list
    support_dim: int
    zero_count: int = 0

    def flat(self) -> np.ndarray:
        return np.repeat(np.asarray(self.eigenvalues, dtype=float), self.degeneracies)


@dataclass
class EntropyReport:
    von_neumann: float
    renyi: dict = field(default_factory=dict)


def _site_list(keep: Iterable[int], n: int) -> list[int]:
    sites = sorted(set(int(s) for s in keep))
    if not sites:
        raise DomainError("keep set must be non-empty")
    if len(sites) >= n:
        raise DomainError("keep set must be a proper subset of the sites")
    if sites[0] < 0 or sites[-1] >= n:
        raise DomainError(f"site indices must lie in 0..{n - 1}")
    return sites


def _bipartite(state: StateVector, sites: Sequence[int]) -> np.ndarray:
    dims = state.local_dims
    rest = [i for i in range(len(dims)) if i not in sites]
    t = state.amplitudes.reshape(dims).transpose(list(sites) + rest)
    dk = int(np.prod([dims[s] for s in sites], dtype=np.int64))
    return t.reshape(dk, -1)


def partial_trace(state: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """``Tr_env |psi><psi|`` for the sites in ``keep``; the state is normalised first."""
    sites = _site_list(keep, len(state.local_dims))
    dk = int(np.prod([state.local_dims[s] for s in sites], dtype=np.int64))
    require_dim(dk, "reduced density matrix")
    norm2 = float(np.vdot(state.amplitudes, state.amplitudes).real)
    if norm2 == 0:
        raise DomainError("cannot trace the zero vector")
    m = _bipartite(state, sites)
    rho = (m @ m.conj().T) / norm2
    return DensityMatrix(tuple(state.local_dims[s] for s in sites), rho, tuple(sites))


def spectrum_from_values(values, zero_threshold: float = 1e-10, rel_tol: float = 1e-8) -> Spectrum:
    """Bucket a list of eigenvalues into distinct non-zero values with degeneracies."""
    vals = sorted((float(v) for v in values), reverse=True)
    nonzero = [v for v in vals if v > zero_threshold]
    buckets: list[list[float]] = []
    for v in nonzero:
        if buckets and abs(buckets[-1][0] - v) <= rel_tol * max(abs(buckets[-1][0]), abs(v)):
            buckets[-1].append(v)
        else:
            buckets.append([v])
    return Spectrum(
        eigenvalues=[float(np.mean(b)) for b in buckets],
        degeneracies=[len(b) for b in buckets],
        support_dim=len(nonzero),
        zero_count=len(vals) - len(nonzero),
    )


def diagonalize(rho: DensityMatrix, zero_threshold: float = 1e-10) -> Spectrum:
    """Hermitian eigensolve of a density matrix, bucketed into a :class:`Spectrum`."""
    return spectrum_from_values(np.linalg.eigvalsh(rho.matrix), zero_threshold)


def block_spectrum(state: StateVector, block: Iterable[int], zero_threshold: float = 1e-10) -> Spectrum:
    """Non-zero spectrum of the block density matrix.

    The Gram matrix of whichever side of the cut is smaller is diagonalised;
    both sides share the same non-zero eigenvalues, so large blocks with a
    small environment stay cheap.  ``zero_count`` refers to the block side.
    """
    sites = _site_list(block, len(state.local_dims))
    m = _bipartite(state, sites)
    norm2 = float(np.vdot(state.amplitudes, state.amplitudes).real)
    dk, de = m.shape
    if dk <= de:
        require_dim(dk, "reduced density matrix")
        gram = m @ m.conj().T
    else:
        require_dim(de, "environment density matrix")
        gram = m.T @ m.conj()
    spec = spectrum_from_values(np.linalg.eigvalsh(gram / norm2), zero_threshold)
    spec.zero_count = dk - spec.support_dim
    return spec


def entropy_from_weights(values: Sequence[float], degeneracies: Sequence[int], alphas=()) -> EntropyReport:
    """Von Neumann and Renyi entropies (nats) of a spectrum given by value and multiplicity."""
    pairs = [(float(v), int(g)) for v, g in zip(values, degeneracies) if float(v) > 0 and g > 0]
    svn = -sum(g * v * math.log(v) for v, g in pairs)
    renyi = {}
    for a in alphas:
        a = float(a)
        if not a > 0:
            raise DomainError(f"Renyi order must be positive, got {a}")
        if a == 1.0:
            renyi[a] = svn
        else:
            renyi[a] = math.log(sum(g * v ** a for v, g in pairs)) / (1.0 - a)
    return EntropyReport(svn, renyi)


def entropies(spec: Spectrum, alphas: Sequence[float] = ()) -> EntropyReport:
    """Entropies of a bucketed spectrum; ``alpha = 1`` returns the von Neumann value."""
    return entropy_from_weights(spec.eigenvalues, spec.degeneracies, alphas)


def _matrix_unit_string(a_digits, b_digits, dims) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for a, b, d in zip(a_digits, b_digits, dims):
        unit = np.zeros((d, d), dtype=np.complex128)
        unit[a, b] = 1.0
        out = np.kron(out, unit)
    return out


def density_from_correlators(state: StateVector, block: Iterable[int], explicit_limit: int = 81) -> DensityMatrix:
    """Rebuild the block density matrix from matrix-unit expectation values.

    Each ``<G| (x)_j |b_j><a_j| |G>`` is evaluated by the compiled kernel, then
    multiplied into ``(x)_j |a_j><b_j|``.  For block dimensions up to
    ``explicit_limit`` the operator strings are formed as explicit Kronecker
    products; beyond that the single non-zero entry of each string is placed
    directly.
    """
    sites = _site_list(block, len(state.local_dims))
    dims = [state.local_dims[s] for s in sites]
    dk = int(np.prod(dims, dtype=np.int64))
    if dk > CORRELATOR_BLOCK_CAP:
        raise ResourceError(f"block dimension {dk} exceeds correlator cap {CORRELATOR_BLOCK_CAP}")
    psi = state.amplitudes / state.norm
    table = kernels.matrix_unit_expectations(psi, state.local_dims, sites)
    rho = np.zeros((dk, dk), dtype=np.complex128)
    if dk <= explicit_limit:
        digits = [np.unravel_index(i, dims) for i in range(dk)]
        for a in range(dk):
            for b in range(dk):
                if table[a, b] != 0:
                    rho += table[a, b] * _matrix_unit_string(digits[a], digits[b], dims)
    else:
        rho += table
    return DensityMatrix(tuple(dims), rho, tuple(sites))


def chain_block_density(S, N: int, L: int, position: int = 1) -> DensityMatrix:
    """Block of ``L`` bulk sites starting at bulk site ``position`` (1-based) of a spin-``S`` chain."""
    if not 1 <= position <= N - L + 1:
        raise DomainError(f"block of length {L} at {position} does not fit in {N} bulk sites")
    state = build_vbs(homogeneous_chain(S, N), exact=False)
    return partial_trace(state, range(position, position + L))


def invariance_suite(S, N_list: Sequence[int], L: int, positions: Optional[Sequence[int]] = None,
                     tol: float = 1e-9, return_deviation: bool = False):
    """Check that the block density matrix is independent of chain length and block position."""
    reference = None
    worst = 0.0
    for N in N_list:
        state = build_vbs(homogeneous_chain(S, N), exact=False)
        starts = range(1, N - L + 2) if positions is None else [p for p in positions if 1 <= p <= N - L + 1]
        for p in starts:
            rho = partial_trace(state, range(p, p + L)).matrix
            if reference is None:
                reference = rho
            else:
                worst = max(worst, float(np.linalg.norm(rho - reference)))
    ok = reference is not None and worst < tol
    return (ok, worst) if return_deviation else ok


def support_residual(rho: DensityMatrix, vectors: Sequence[np.ndarray], zero_threshold: float = 1e-10) -> float:
    """Largest distance of a non-zero-eigenvalue eigenvector from ``span(vectors)``."""
    evals, evecs = np.linalg.eigh(rho.matrix)
    support = evecs[:, evals > zero_threshold]
    basis = np.column_stack([np.asarray(v, dtype=np.complex128) for v in vectors])
    q, r = np.linalg.qr(basis)
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-12 * max(1.0, np.max(np.abs(np.diag(r))))))
    q = q[:, :rank]
    resid = support - q @ (q.conj().T @ support)
    return float(np.max(np.linalg.norm(resid, axis=0), initial=0.0))


def hamiltonian_residual(H_block: np.ndarray, rho: DensityMatrix) -> float:
    """Frobenius norm of ``H_B rho``."""
    return float(np.linalg.norm(H_block @ rho.matrix))


def model_state(spec: HamiltonianSpec) -> StateVector:
    """Normalised VBS state of an arbitrary saturated model."""
    return build_vbs(spec, exact=False).normalized()
