"""Valence-bond-solid states as dense vectors.

The main route expands the product of bond singlets
``prod_edges (a_k^+ b_l^+ - b_k^+ a_l^+)^M`` in Schwinger bosons and reads
off amplitudes exactly.  A second, independent route for the spin-1 chain
contracts the maximally-entangled two-qubit basis site by site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, ModelConditionError, ResourceError, require_state, state_cap
from .exact_algebra import HalfInt, SurdSum, clebsch_gordan
from .spin_operators import HamiltonianSpec


@dataclass
class StateVector:
    """Dense amplitudes over a product basis, optionally with exact amplitudes.

    ``exact`` maps a flat basis index to its exact (real) amplitude; indices
    not present are exactly zero.
    """

    local_dims: tuple
    amplitudes: np.ndarray
    exact: Optional[dict] = None

    def __post_init__(self):
        self.local_dims = tuple(int(d) for d in self.local_dims)
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (int(np.prod(self.local_dims, dtype=np.int64)),):
            raise DomainError("amplitude length does not match the local dimensions")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def norm_squared_exact(self) -> Fraction:
        if self.exact is None:
            raise DomainError("state carries no exact amplitudes")
        total = SurdSum()
        for amp in self.exact.values():
            total = total + amp * amp
        return total.to_fraction()

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0:
            raise DomainError("cannot normalise the zero vector")
        return StateVector(self.local_dims, self.amplitudes / n)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.local_dims)


class BosonMonomialMap:
    """Expansion of a bond-singlet product over per-site ``a^+`` occupations.

    ``terms`` maps a tuple ``(p_0, p_1, ...)`` of ``a``-boson counts to an
    integer coefficient.  Site ``l`` always holds ``totals[l]`` bosons in
    total, so the ``b`` count is ``q_l = totals[l] - p_l``.
    """

    def __init__(self, totals: Sequence[int], terms: dict):
        self.totals = tuple(int(t) for t in totals)
        self.terms = {k: v for k, v in terms.items() if v}
        for key in self.terms:
            if len(key) != len(self.totals) or any(not 0 <= p <= t for p, t in zip(key, self.totals)):
                raise DomainError(f"occupation {key} inconsistent with totals {self.totals}")

    def __len__(self):
        return len(self.terms)

    def occupations(self, key):
        return [(p, t - p) for p, t in zip(key, self.totals)]


def expand_valence_bonds(spec: HamiltonianSpec, max_terms: Optional[int] = None) -> BosonMonomialMap:
    """Multinomial expansion of ``prod (a_k^+ b_l^+ - b_k^+ a_l^+)^{M_kl}`` on the vacuum."""
    limit = state_cap() if max_terms is None else max_terms
    n = len(spec.sites)
    totals = [0] * n
    terms = {(0,) * n: 1}
    for bond in spec.bonds:
        M = bond.multiplicity
        totals[bond.k] += M
        totals[bond.l] += M
        weights = [math.comb(M, t) * (-1) ** t for t in range(M + 1)]
        new: dict = {}
        for key, c in terms.items():
            for t, w in enumerate(weights):
                nk = list(key)
                nk[bond.k] += M - t
                nk[bond.l] += t
                nk = tuple(nk)
                new[nk] = new.get(nk, 0) + c * w
        terms = {k: v for k, v in new.items() if v}
        if len(terms) > limit:
            raise ResourceError(f"monomial expansion exceeds {limit} terms")
    return BosonMonomialMap(totals, terms)


def _sqrt_factorial_surd(k: int) -> SurdSum:
    return SurdSum.sqrt_of(math.factorial(k))


def monomials_to_state(mono: BosonMonomialMap, spins: Sequence, exact: bool = True) -> StateVector:
    """Dense state with amplitude ``c * prod_l sqrt(p_l! q_l!)`` on ``|S_l, m_l = p_l - S_l>``."""
    spins = [HalfInt.coerce(s) for s in spins]
    twice = [s.twice_value for s in spins]
    if list(mono.totals) != twice:
        raise DomainError(f"boson totals {mono.totals} do not match spins {[str(s) for s in spins]}")
    dims = [t + 1 for t in twice]
    length = int(np.prod(dims, dtype=np.int64))
    require_state(length)
    amps = np.zeros(length, dtype=np.complex128)
    exact_amps = {} if exact else None
    if mono.terms:
        keys = np.array(list(mono.terms.keys()), dtype=np.int64).reshape(len(mono.terms), len(dims))
        qs = np.asarray(twice, dtype=np.int64)[None, :] - keys
        flat = np.ravel_multi_index(qs.T, dims)
        log_fact = [math.lgamma(k + 1) for k in range(max(twice) + 1)]
        for row, (key, c) in enumerate(mono.terms.items()):
            logw = sum(log_fact[p] + log_fact[t - p] for p, t in zip(key, twice))
            amps[flat[row]] += c * math.exp(0.5 * logw)
            if exact:
                surd = SurdSum.from_rational(c)
                for p, t in zip(key, twice):
                    surd = surd * _sqrt_factorial_surd(p) * _sqrt_factorial_surd(t - p)
                idx = int(flat[row])
                exact_amps[idx] = exact_amps[idx] + surd if idx in exact_amps else surd
    return StateVector(tuple(dims), amps, exact_amps)


def build_vbs(spec: HamiltonianSpec, exact: bool = True) -> StateVector:
    """Unnormalised VBS state of a model whose multiplicities saturate every spin."""
    return monomials_to_state(expand_valence_bonds(spec), spec.sites, exact=exact)


def homogeneous_chain(S, N: int) -> HamiltonianSpec:
    """``N`` bulk spin-``S`` sites with spin-``S/2`` ends and all multiplicities ``S``."""
    S = HalfInt.coerce(S)
    if not S.is_integer or S.twice_value < 2:
        raise DomainError(f"bulk spin must be a positive integer, got {S}")
    if N < 1:
        raise DomainError("chain needs at least one bulk site")
    s = int(S)
    spins = [HalfInt(s)] + [S] * N + [HalfInt(s)]
    return HamiltonianSpec.chain(spins, [s] * (N + 1))


def inhomogeneous_chain(spins: Sequence) -> HamiltonianSpec:
    """Chain whose multiplicities are solved from the spins (ends included)."""
    return HamiltonianSpec.chain(spins, solve_multiplicities(spins))


def solve_multiplicities(spins: Sequence) -> list[int]:
    """Bond multiplicities ``M_{j,j+1} = 2 sum_{l<=j} (-1)^{j-l} S_l`` for a chain."""
    twice = [HalfInt.coerce(s).twice_value for s in spins]
    if len(twice) < 2:
        raise DomainError("need at least the two boundary spins")
    if any(t < 0 for t in twice):
        raise DomainError("spins must be non-negative")
    alternating = sum((-1) ** j * t for j, t in enumerate(twice))
    if alternating != 0:
        raise ModelConditionError(
            f"alternating spin sum is {Fraction(alternating, 2)}, multiplicities cannot be solved")
    ms = []
    for j in range(len(twice) - 1):
        ms.append(sum((-1) ** (j - l) * twice[l] for l in range(j + 1)))
    if any(m < 1 for m in ms):
        raise ModelConditionError(f"solution {ms} has a multiplicity below 1")
    if ms[0] != twice[0] or ms[-1] != twice[-1]:
        raise ModelConditionError("boundary spins not saturated by their bonds")
    for j in range(1, len(twice) - 1):
        if twice[j] != ms[j - 1] + ms[j]:
            raise ModelConditionError(f"site {j} not saturated by its bonds")
    return ms


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
_R2 = 1 / math.sqrt(2)
# Symmetric two-qubit states expressed in the spin-1 basis (m = 1, 0, -1).
_SPIN1_ALPHA = (
    np.array([_R2, 0, -_R2], dtype=np.complex128),
    np.array([-1j * _R2, 0, -1j * _R2], dtype=np.complex128),
    np.array([0, -1, 0], dtype=np.complex128),
)


def build_vbs_spin1_mes(N: int) -> StateVector:
    """Normalised spin-1 VBS chain from the maximally-entangled two-qubit basis.

    Site order is: left spin-1/2, ``N`` spin-1's, right spin-1/2.
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    require_state(4 * 3 ** N)
    singlet = np.array([[0, -_R2], [_R2, 0]], dtype=np.complex128)
    site = sum(np.einsum("m,xy->mxy", _SPIN1_ALPHA[a], _PAULI[a].T) for a in range(3)) / math.sqrt(3)
    acc = singlet.reshape(2, 1, 2)
    for _ in range(N):
        acc = np.einsum("spx,mxy->spmy", acc, site).reshape(2, -1, 2)
    return StateVector((2,) + (3,) * N + (2,), acc.reshape(-1))


def _end_multiplicities(block: HamiltonianSpec, totals: Sequence[int]) -> tuple[int, int]:
    first, last = 0, len(block.sites) - 1
    left = block.sites[first].twice_value - totals[first]
    right = block.sites[last].twice_value - totals[last]
    for idx in range(1, last):
        if totals[idx] != block.sites[idx].twice_value:
            raise ModelConditionError(f"interior block site {idx} is not saturated by internal bonds")
    if left < 0 or right < 0:
        raise ModelConditionError("block bonds exceed the end spins")
    return left, right


def build_degenerate_vbs(block: HamiltonianSpec, J, M) -> StateVector:
    """``Psi_{JM}^+ |VBS_L>``: couple the free end bosons of a block to total spin ``(J, M)``.

    ``block`` is the chain of block sites with only its internal bonds.  The
    free boson counts left at the two ends fix the end spins ``M_left/2`` and
    ``M_right/2``, and ``J`` must lie in ``|J_-|..J_+``.
    """
    J, M = HalfInt.coerce(J), HalfInt.coerce(M)
    if len(block.sites) < 2:
        raise DomainError("degenerate VBS states need a block of at least two sites")
    if not block.is_chain:
        raise DomainError("degenerate VBS states are defined for chain blocks")
    mono = expand_valence_bonds(block)
    ml, mr = _end_multiplicities(block, mono.totals)
    lo, hi = abs(ml - mr), ml + mr
    if not (lo <= J.twice_value <= hi) or (J.twice_value - hi) % 2:
        raise DomainError(f"J={J} outside {HalfInt(lo)}..{HalfInt(hi)}")
    if abs(M.twice_value) > J.twice_value or (J.twice_value - M.twice_value) % 2:
        raise DomainError(f"M={M} not allowed for J={J}")

    spins = block.sites
    twice = [s.twice_value for s in spins]
    dims = [t + 1 for t in twice]
    length = int(np.prod(dims, dtype=np.int64))
    require_state(length)
    last = len(spins) - 1
    couplings = []
    for t1 in range(-ml, ml + 1, 2):
        t2 = M.twice_value - t1
        if abs(t2) > mr or (mr - t2) % 2:
            continue
        cg = clebsch_gordan(HalfInt(ml), HalfInt(t1), HalfInt(mr), HalfInt(t2), J, M)
        if cg.is_zero:
            continue
        a1, b1 = (ml + t1) // 2, (ml - t1) // 2
        a2, b2 = (mr + t2) // 2, (mr - t2) // 2
        norm = math.factorial(a1) * math.factorial(b1) * math.factorial(a2) * math.factorial(b2)
        couplings.append((cg, a1, a2, norm))

    exact_amps: dict = {}
    for key, c in mono.terms.items():
        for cg, a1, a2, norm in couplings:
            ps = list(key)
            ps[0] += a1
            ps[last] += a2
            weight = 1
            for p, t in zip(ps, twice):
                weight *= math.factorial(p) * math.factorial(t - p)
            amp = c * cg.to_surd() * SurdSum.sqrt_of(Fraction(weight, norm))
            idx = int(np.ravel_multi_index([t - p for p, t in zip(ps, twice)], dims))
            exact_amps[idx] = exact_amps[idx] + amp if idx in exact_amps else amp
    exact_amps = {k: v for k, v in exact_amps.items() if not v.is_zero}
    amps = np.zeros(length, dtype=np.complex128)
    for idx, v in exact_amps.items():
        amps[idx] = float(v)
    return StateVector(tuple(dims), amps, exact_amps)


def block_end_multiplicities(block: HamiltonianSpec) -> tuple[int, int]:
    """Free boson counts ``(M_left, M_right)`` at the two ends of a chain block."""
    mono_totals = [0] * len(block.sites)
    for b in block.bonds:
        mono_totals[b.k] += b.multiplicity
        mono_totals[b.l] += b.multiplicity
    return _end_multiplicities(block, mono_totals)
