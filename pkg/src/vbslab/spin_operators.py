"""Spin matrices, bond-spin projectors and AKLT-type Hamiltonians.

Every local basis is ordered by descending projection, ``m = S, S-1, ..., -S``,
so the basis index of ``|S, m>`` is ``S - m``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, require_dim
from .exact_algebra import HalfInt

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpinMatrixSet:
    S: HalfInt
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def dim(self) -> int:
        return self.S.twice_value + 1

    @property
    def splus(self) -> np.ndarray:
        return self.sx + 1j * self.sy

    @property
    def sminus(self) -> np.ndarray:
        return self.sx - 1j * self.sy

    def casimir(self) -> np.ndarray:
        return self.sx @ self.sx + self.sy @ self.sy + self.sz @ self.sz


@lru_cache(maxsize=64)
def _spin_matrices(twice: int) -> SpinMatrixSet:
    s = twice / 2
    ms = s - np.arange(twice + 1)
    # <m+1| S+ |m> = sqrt(s(s+1) - m(m+1)); row index of m+1 is one less than m's.
    raise_amp = np.sqrt(s * (s + 1) - ms[1:] * (ms[1:] + 1))
    splus = np.diag(raise_amp, k=1).astype(np.complex128)
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    sz = np.diag(ms).astype(np.complex128)
    for a in (sx, sy, sz):
        a.setflags(write=False)
    return SpinMatrixSet(HalfInt(twice), sx, sy, sz)


def spin_matrices(S) -> SpinMatrixSet:
    """Dense ``Sx, Sy, Sz`` for spin ``S >= 1/2`` in the m-descending basis."""
    S = HalfInt.coerce(S)
    if S.twice_value < 1:
        raise DomainError(f"spin_matrices needs S >= 1/2, got {S}")
    return _spin_matrices(S.twice_value)


def spin_dot(Sk, Sl) -> np.ndarray:
    """``S_k . S_l`` on the two-site space ``(2Sk+1)(2Sl+1)``."""
    Sk, Sl = HalfInt.coerce(Sk), HalfInt.coerce(Sl)
    dk, dl = Sk.twice_value + 1, Sl.twice_value + 1
    if Sk.twice_value == 0 or Sl.twice_value == 0:
        return np.zeros((dk * dl, dk * dl), dtype=np.complex128)
    a, b = spin_matrices(Sk), spin_matrices(Sl)
    return np.kron(a.sx, b.sx) + np.kron(a.sy, b.sy) + np.kron(a.sz, b.sz)


def total_spin_squared(Sk, Sl) -> np.ndarray:
    """``(S_k + S_l)^2`` on the two-site space."""
    Sk, Sl = HalfInt.coerce(Sk), HalfInt.coerce(Sl)
    dk, dl = Sk.twice_value + 1, Sl.twice_value + 1
    ck = float(Sk.value * (Sk.value + 1))
    cl = float(Sl.value * (Sl.value + 1))
    return (ck + cl) * np.eye(dk * dl) + 2 * spin_dot(Sk, Sl)


@dataclass(frozen=True)
class BondProjector:
    Sk: HalfInt
    Sl: HalfInt
    J: HalfInt
    matrix: np.ndarray


def bond_spin_values(Sk, Sl) -> list[HalfInt]:
    """Allowed bond spins ``|Sk-Sl|, ..., Sk+Sl``."""
    Sk, Sl = HalfInt.coerce(Sk), HalfInt.coerce(Sl)
    lo = abs(Sk.twice_value - Sl.twice_value)
    hi = Sk.twice_value + Sl.twice_value
    return [HalfInt(t) for t in range(lo, hi + 1, 2)]


@lru_cache(maxsize=256)
def _projector(tk: int, tl: int, tJ: int) -> np.ndarray:
    T2 = total_spin_squared(HalfInt(tk), HalfInt(tl))
    J = Fraction(tJ, 2)
    out = np.eye(T2.shape[0], dtype=np.complex128)
    for j in bond_spin_values(HalfInt(tk), HalfInt(tl)):
        if j.twice_value == tJ:
            continue
        jj = j.value * (j.value + 1)
        out = out @ (T2 - float(jj) * np.eye(T2.shape[0])) / float(J * (J + 1) - jj)
    out.setflags(write=False)
    return out


def bond_projector(Sk, Sl, J) -> BondProjector:
    """Projector onto total bond spin ``J`` built from the polynomial product formula."""
    Sk, Sl, J = (HalfInt.coerce(x) for x in (Sk, Sl, J))
    if J.twice_value not in [j.twice_value for j in bond_spin_values(Sk, Sl)]:
        raise DomainError(f"bond spin {J} not reachable from {Sk} x {Sl}")
    return BondProjector(Sk, Sl, J, _projector(Sk.twice_value, Sl.twice_value, J.twice_value))


@dataclass(frozen=True)
class Bond:
    """An edge ``(k, l)`` with multiplicity ``M`` and optional per-``J`` weights.

    ``coefficients`` maps twice-J to a positive weight ``C_J``; missing entries
    default to 1.
    """

    k: int
    l: int
    multiplicity: int
    coefficients: Mapping[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class HamiltonianSpec:
    sites: tuple
    bonds: tuple

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(HalfInt.coerce(s) for s in self.sites))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        n = len(self.sites)
        if n == 0:
            raise DomainError("a model needs at least one site")
        for s in self.sites:
            if s.twice_value < 0:
                raise DomainError("spins must be non-negative")
        for b in self.bonds:
            if not (0 <= b.k < n and 0 <= b.l < n) or b.k == b.l:
                raise DomainError(f"bond ({b.k}, {b.l}) has invalid endpoints")
            if b.multiplicity < 1:
                raise DomainError(f"bond ({b.k}, {b.l}) needs multiplicity >= 1")
            limit = min(self.sites[b.k].twice_value, self.sites[b.l].twice_value)
            if b.multiplicity > limit:
                raise DomainError(
                    f"bond ({b.k}, {b.l}) multiplicity {b.multiplicity} exceeds 2*min spin = {limit}")
            allowed = set(forbidden_twice_j(self.sites[b.k], self.sites[b.l], b.multiplicity))
            for tJ, c in b.coefficients.items():
                if tJ not in allowed:
                    raise DomainError(f"coefficient given for bond spin {tJ}/2 outside the forbidden set")
                if not c > 0:
                    raise DomainError("all C_J must be positive")

    @classmethod
    def chain(cls, spins: Sequence, multiplicities: Optional[Sequence[int]] = None) -> "HamiltonianSpec":
        """Open chain with bonds ``(j, j+1)``; multiplicities default to 1."""
        spins = [HalfInt.coerce(s) for s in spins]
        if multiplicities is None:
            multiplicities = [1] * (len(spins) - 1)
        if len(multiplicities) != len(spins) - 1:
            raise DomainError("a chain of n sites needs n-1 multiplicities")
        bonds = tuple(Bond(j, j + 1, int(m)) for j, m in enumerate(multiplicities))
        return cls(tuple(spins), bonds)

    @property
    def dims(self) -> list[int]:
        return [s.twice_value + 1 for s in self.sites]

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=object))

    @property
    def is_chain(self) -> bool:
        return all(abs(b.k - b.l) == 1 for b in self.bonds)


def forbidden_twice_j(Sk, Sl, multiplicity: int) -> list[int]:
    """Twice-values of ``J = Sk+Sl-M+1, ..., Sk+Sl`` penalised on a bond."""
    Sk, Sl = HalfInt.coerce(Sk), HalfInt.coerce(Sl)
    top = Sk.twice_value + Sl.twice_value
    return [top - 2 * i for i in range(multiplicity - 1, -1, -1)]


def bond_term(spec: HamiltonianSpec, bond: Bond) -> np.ndarray:
    """Local two-site operator ``sum_J C_J pi_J`` for one bond."""
    Sk, Sl = spec.sites[bond.k], spec.sites[bond.l]
    dd = (Sk.twice_value + 1) * (Sl.twice_value + 1)
    out = np.zeros((dd, dd), dtype=np.complex128)
    for tJ in forbidden_twice_j(Sk, Sl, bond.multiplicity):
        c = bond.coefficients.get(tJ, 1.0)
        out += c * bond_projector(Sk, Sl, HalfInt(tJ)).matrix
    return out


def embed_two_site(op: np.ndarray, dims: Sequence[int], k: int, l: int) -> np.ndarray:
    """Dense matrix of ``op`` on sites ``(k, l)`` tensored with identity elsewhere."""
    dims = list(dims)
    n = len(dims)
    rest = [i for i in range(n) if i not in (k, l)]
    drest = int(np.prod([dims[i] for i in rest], dtype=np.int64))
    big = np.kron(op, np.eye(drest, dtype=np.complex128))
    order = [k, l] + rest
    shape = [dims[i] for i in order]
    big = big.reshape(shape + shape)
    inverse = [order.index(i) for i in range(n)]
    big = big.transpose(inverse + [n + i for i in inverse])
    total = int(np.prod(dims, dtype=np.int64))
    return big.reshape(total, total)


def assemble_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """Dense ``H = sum_bonds sum_J C_J pi_J`` over the whole model."""
    require_dim(spec.dim)
    H = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
    for bond in spec.bonds:
        H += embed_two_site(bond_term(spec, bond), spec.dims, bond.k, bond.l)
    return H


def apply_hamiltonian(spec: HamiltonianSpec, psi: np.ndarray) -> np.ndarray:
    """Matrix-free ``H |psi>``; avoids building the dense Hamiltonian."""
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (spec.dim,):
        raise DomainError(f"state of length {psi.shape} does not match model dimension {spec.dim}")
    out = np.zeros_like(psi)
    for bond in spec.bonds:
        out += kernels.apply_two_site(psi, spec.dims, bond.k, bond.l, bond_term(spec, bond))
    return out


def block_spec(spec: HamiltonianSpec, block_sites: Iterable[int]) -> HamiltonianSpec:
    """Sub-model on ``block_sites`` keeping only bonds with both ends inside."""
    block = list(block_sites)
    if not block:
        raise DomainError("block must be non-empty")
    if len(set(block)) != len(block) or any(not 0 <= s < len(spec.sites) for s in block):
        raise DomainError(f"invalid block {block}")
    block = sorted(block)
    if spec.is_chain and block != list(range(block[0], block[-1] + 1)):
        raise DomainError("blocks of a chain must be contiguous")
    index = {s: i for i, s in enumerate(block)}
    bonds = tuple(
        Bond(index[b.k], index[b.l], b.multiplicity, dict(b.coefficients))
        for b in spec.bonds if b.k in index and b.l in index
    )
    return HamiltonianSpec(tuple(spec.sites[s] for s in block), bonds)


def block_hamiltonian(spec: HamiltonianSpec, block_sites: Iterable[int]) -> np.ndarray:
    """Hamiltonian of the bonds inside the block, acting on the block space only."""
    sub = block_spec(spec, block_sites)
    if len(sub.sites) == 1:
        log.info("single-site block: block Hamiltonian is the zero matrix")
    return assemble_hamiltonian(sub)


def kernel_dimension(H: np.ndarray, tol: float = 1e-8) -> int:
    """Number of eigenvalues with ``|lambda| < tol * ||H||_2`` of a Hermitian matrix."""
    H = np.asarray(H)
    if H.size == 0:
        return 0
    evals = np.linalg.eigvalsh(H)
    scale = float(np.max(np.abs(evals)))
    if scale == 0.0:
        return H.shape[0]
    return int(np.sum(np.abs(evals) < tol * scale))
