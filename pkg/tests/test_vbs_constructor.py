"""Schwinger-boson expansion, VBS state vectors and degenerate block states."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from vbslab import vbs_constructor as vc
from vbslab.errors import DomainError, ModelConditionError, ResourceError
from vbslab.exact_algebra import HalfInt
from vbslab.spin_operators import Bond, HamiltonianSpec, apply_hamiltonian


def sympy_expansion(spec: HamiltonianSpec) -> dict:
    """Independent oracle: expand the bond polynomial symbolically, keyed by ``a`` exponents."""
    n = len(spec.sites)
    a = sympy.symbols(f"a0:{n}")
    b = sympy.symbols(f"b0:{n}")
    poly = sympy.Integer(1)
    for bond in spec.bonds:
        poly *= (a[bond.k] * b[bond.l] - b[bond.k] * a[bond.l]) ** bond.multiplicity
    p = sympy.Poly(sympy.expand(poly), *a, *b)
    return {tuple(int(e) for e in mon[:n]): int(c) for mon, c in p.terms()}


def test_singlet_monomials():
    spec = HamiltonianSpec(("1/2", "1/2"), (Bond(0, 1, 1),))
    assert vc.expand_valence_bonds(spec).terms == {(1, 0): 1, (0, 1): -1}


def test_double_bond_binomial():
    spec = HamiltonianSpec((1, 1), (Bond(0, 1, 2),))
    assert vc.expand_valence_bonds(spec).terms == {(2, 0): 1, (1, 1): -2, (0, 2): 1}


def test_spin1_single_site_key_count():
    spec = vc.homogeneous_chain(1, 1)
    mono = vc.expand_valence_bonds(spec)
    oracle = sympy_expansion(spec)
    assert len(mono) == len(oracle) == 4
    assert mono.terms == oracle


@pytest.mark.parametrize("spins", [["1/2", 1, 1, "1/2"], ["1/2", "3/2", 2, "3/2", "1/2"], [1, 2, 2, 1]])
def test_expansion_matches_sympy(spins):
    spec = vc.inhomogeneous_chain(spins)
    assert vc.expand_valence_bonds(spec).terms == sympy_expansion(spec)


def test_triangle_expansion_matches_sympy():
    spec = HamiltonianSpec((1, 1, 1), (Bond(0, 1, 1), Bond(1, 2, 1), Bond(0, 2, 1)))
    assert vc.expand_valence_bonds(spec).terms == sympy_expansion(spec)


def test_singlet_state():
    spec = HamiltonianSpec(("1/2", "1/2"), (Bond(0, 1, 1),))
    st_ = vc.build_vbs(spec)
    v = st_.amplitudes / st_.norm
    assert np.allclose(v, [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0])


def test_norm_spin1_single_site():
    assert vc.build_vbs(vc.homogeneous_chain(1, 1)).norm_squared_exact() == 6


def test_norm_inhomogeneous_chain():
    spec = vc.inhomogeneous_chain(["1/2", "3/2", 2, "3/2", "1/2"])
    f = math.factorial
    want = Fraction(f(2) * f(4) * f(5) * f(4) * f(2), 2 * 3 * 3 * 2)
    assert vc.build_vbs(spec).norm_squared_exact() == want == 7680


@pytest.mark.parametrize("S,N", [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (2, 4)])
def test_norm_identity_homogeneous(S, N):
    f = math.factorial
    want = Fraction(f(2 * S + 1), S + 1) ** N * f(S) * f(S + 1)
    st_ = vc.build_vbs(vc.homogeneous_chain(S, N))
    assert st_.norm_squared_exact() == want
    assert abs(st_.norm ** 2 - float(want)) < 1e-9 * float(want)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_mes_route_matches_schwinger(N):
    a = vc.build_vbs_spin1_mes(N)
    b = vc.build_vbs(vc.homogeneous_chain(1, N), exact=False).normalized()
    assert abs(a.norm - 1) < 1e-12
    assert abs(abs(np.vdot(a.amplitudes, b.amplitudes)) - 1) < 1e-12


def test_vbs_is_ground_state():
    spec = vc.homogeneous_chain(1, 3)
    psi = vc.build_vbs(spec, exact=False).normalized().amplitudes
    assert np.linalg.norm(apply_hamiltonian(spec, psi)) < 1e-10
    psi = vc.build_vbs_spin1_mes(3).amplitudes
    assert np.linalg.norm(apply_hamiltonian(spec, psi)) < 1e-10


def test_solve_multiplicities_frozen():
    assert vc.solve_multiplicities(["1/2", 1, 1, "1/2"]) == [1, 1, 1]
    assert vc.solve_multiplicities(["1/2", "3/2", 2, "3/2", "1/2"]) == [1, 2, 2, 1]
    assert vc.solve_multiplicities(["1/2", 1, "1/2"]) == [1, 1]


def test_solve_multiplicities_errors():
    with pytest.raises(ModelConditionError):
        vc.solve_multiplicities(["1/2", 1, 1])
    with pytest.raises(ModelConditionError):
        vc.solve_multiplicities(["1/2", "1/2", 1, 1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=6))
def test_solver_inverts_chain_construction(ms):
    twice = [ms[0]] + [ms[j] + ms[j + 1] for j in range(len(ms) - 1)] + [ms[-1]]
    assert vc.solve_multiplicities([HalfInt(t) for t in twice]) == ms


def test_totals_mismatch_rejected():
    mono = vc.expand_valence_bonds(vc.homogeneous_chain(1, 1))
    with pytest.raises(DomainError):
        vc.monomials_to_state(mono, [1, 1, 1])


def test_state_cap(monkeypatch):
    monkeypatch.setenv("VBSLAB_STATE_CAP", "10")
    with pytest.raises(ResourceError):
        vc.build_vbs(vc.homogeneous_chain(1, 3))


def _spin1_block(L):
    return HamiltonianSpec.chain([1] * L, [1] * (L - 1))


def test_degenerate_norms_l2():
    blk = _spin1_block(2)
    assert vc.build_degenerate_vbs(blk, 0, 0).norm_squared_exact() == 6
    for M in (-1, 0, 1):
        assert vc.build_degenerate_vbs(blk, 1, M).norm_squared_exact() == 4


def test_degenerate_states_orthogonal_l3():
    blk = _spin1_block(3)
    states = [vc.build_degenerate_vbs(blk, 0, 0)] + [vc.build_degenerate_vbs(blk, 1, M) for M in (-1, 0, 1)]
    G = np.array([[np.vdot(a.amplitudes, b.amplitudes) / (a.norm * b.norm) for b in states] for a in states])
    assert np.max(np.abs(G - np.eye(4))) < 1e-10


def test_degenerate_states_are_block_ground_states():
    blk = _spin1_block(3)
    for J, M in [(0, 0), (1, 1), (1, -1)]:
        psi = vc.build_degenerate_vbs(blk, J, M).amplitudes
        assert np.linalg.norm(apply_hamiltonian(blk, psi)) < 1e-10


def test_degenerate_spin2_norms_independent_of_m():
    blk = HamiltonianSpec.chain([2, 2], [2])
    for J in range(3):
        norms = {vc.build_degenerate_vbs(blk, J, M).norm_squared_exact() for M in range(-J, J + 1)}
        assert len(norms) == 1


def test_degenerate_invalid_labels():
    blk = _spin1_block(2)
    with pytest.raises(DomainError):
        vc.build_degenerate_vbs(blk, 2, 0)
    with pytest.raises(DomainError):
        vc.build_degenerate_vbs(blk, 1, 2)
    with pytest.raises(DomainError):
        vc.build_degenerate_vbs(_spin1_block(1), 0, 0)


def test_block_end_multiplicities():
    assert vc.block_end_multiplicities(_spin1_block(3)) == (1, 1)
    assert vc.block_end_multiplicities(HamiltonianSpec.chain(["3/2", 2, "3/2"], [2, 2])) == (1, 1)
