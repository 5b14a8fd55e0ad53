"""Exact half-integer, surd and angular-momentum coupling arithmetic."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.physics.wigner import clebsch_gordan as sympy_cg
from sympy.physics.wigner import wigner_3j as sympy_3j

from vbslab.errors import DomainError
from vbslab.exact_algebra import (
    HalfInt,
    SignedSqrtRational,
    SurdSum,
    clebsch_gordan,
    factorial,
    lambda_coeff,
    squarefree_split,
    threej,
    threej_000,
    threej_orthogonality_check,
)


def _sympy_value(x: SignedSqrtRational):
    return x.sign * sympy.sqrt(sympy.Rational(x.square.numerator, x.square.denominator))


# ---------------------------------------------------------------- frozen values

def test_factorial_values():
    assert factorial(0) == 1
    assert factorial(5) == 120
    assert factorial(20) == reduce(lambda a, b: a * b, range(1, 21)) == 2432902008176640000


def test_factorial_rejects_negative():
    with pytest.raises(DomainError):
        factorial(-1)


def test_threej_000_frozen():
    assert threej_000(0, 0, 0) == SignedSqrtRational(1, Fraction(1))
    assert threej_000(1, 1, 1).is_zero
    val = threej_000(1, 1, 0)
    assert (val.sign, val.square) == (-1, Fraction(1, 3))


def test_threej_000_matches_sympy():
    for l1 in range(5):
        for l2 in range(5):
            for l3 in range(abs(l1 - l2), l1 + l2 + 1):
                assert sympy.simplify(_sympy_value(threej_000(l1, l2, l3)) - sympy_3j(l1, l2, l3, 0, 0, 0)) == 0


def test_cg_frozen():
    half = HalfInt(1)
    c = clebsch_gordan(half, half, half, -half, 1, 0)
    assert (c.sign, c.square) == (1, Fraction(1, 2))
    assert clebsch_gordan(half, half, half, half, 0, 0).is_zero
    c = clebsch_gordan(half, half, half, half, 1, 1)
    assert (c.sign, c.square) == (1, Fraction(1))


def test_cg_matches_sympy_oracle():
    mismatches = []
    for tj1 in range(0, 5):
        for tj2 in range(0, 5):
            for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
                for tm1 in range(-tj1, tj1 + 1, 2):
                    for tm2 in range(-tj2, tj2 + 1, 2):
                        tM = tm1 + tm2
                        if abs(tM) > tJ:
                            continue
                        ours = clebsch_gordan(HalfInt(tj1), HalfInt(tm1), HalfInt(tj2), HalfInt(tm2), HalfInt(tJ), HalfInt(tM))
                        r = [sympy.Rational(t, 2) for t in (tj1, tm1, tj2, tm2, tJ, tM)]
                        ref = sympy_cg(r[0], r[2], r[4], r[1], r[3], r[5])
                        if sympy.simplify(_sympy_value(ours) - ref) != 0:
                            mismatches.append((tj1, tm1, tj2, tm2, tJ, tM))
    assert mismatches == []


def test_threej_matches_sympy_sample():
    for args in [(1, 1, 1, 1, -1, 0), (2, 1, 1, 0, 1, -1), (2, 2, 2, 1, -2, 1), (3, 2, 1, -1, 1, 0)]:
        assert sympy.simplify(_sympy_value(threej(*args)) - sympy_3j(*args)) == 0


def test_cg_invalid_projection_raises():
    with pytest.raises(DomainError):
        clebsch_gordan(1, 2, 1, 0, 1, 0)
    with pytest.raises(DomainError):
        clebsch_gordan(HalfInt(1), HalfInt(0), HalfInt(1), HalfInt(1), 1, 0)


def test_threej_orthogonality_frozen():
    assert threej_orthogonality_check(1, 1, 2)
    assert threej_orthogonality_check(0, 0, 0)
    assert threej_orthogonality_check(2, 2, 4)


def test_threej_orthogonality_lmax_cap():
    with pytest.raises(DomainError):
        threej_orthogonality_check(1, 1, 9)


def test_lambda_coeff_frozen():
    for S in range(6):
        assert lambda_coeff(0, S) == 1
    assert lambda_coeff(1, 1) == Fraction(-1, 3)
    assert lambda_coeff(2, 3) == Fraction(1, 5)
    with pytest.raises(DomainError):
        lambda_coeff(3, 2)


# ---------------------------------------------------------------- structural helpers

def test_halfint_coercion():
    assert HalfInt.coerce("3/2") == HalfInt(3)
    assert HalfInt.coerce(1) == HalfInt(2)
    assert HalfInt.coerce(Fraction(1, 2)) == HalfInt(1)
    assert HalfInt.coerce(2.5) == HalfInt(5)
    assert str(HalfInt(3)) == "3/2"
    for bad in ("1/3", 0.25, True, "x"):
        with pytest.raises(DomainError):
            HalfInt.coerce(bad)


def test_squarefree_split():
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(49) == (7, 1)


def test_surd_arithmetic():
    r2 = SurdSum.sqrt_of(2)
    assert r2 * r2 == 2
    assert (SurdSum.sqrt_of(8) - 2 * r2).is_zero
    assert SurdSum.sqrt_of(Fraction(1, 2)) * r2 == 1
    assert abs(float(r2 + SurdSum.sqrt_of(3)) - (2 ** 0.5 + 3 ** 0.5)) < 1e-15


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.data())
def test_cg_columns_are_orthonormal(tj1, tj2, data):
    """Columns of the CG matrix at fixed ``M`` form an orthonormal set (exactly)."""
    tM = data.draw(st.sampled_from(range(-(tj1 + tj2), tj1 + tj2 + 1, 2)))
    Js = [tJ for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2) if abs(tM) <= tJ]
    for tJ in Js:
        for tJp in Js:
            acc = SurdSum()
            for tm1 in range(-tj1, tj1 + 1, 2):
                tm2 = tM - tm1
                if abs(tm2) > tj2:
                    continue
                a = clebsch_gordan(HalfInt(tj1), HalfInt(tm1), HalfInt(tj2), HalfInt(tm2), HalfInt(tJ), HalfInt(tM))
                b = clebsch_gordan(HalfInt(tj1), HalfInt(tm1), HalfInt(tj2), HalfInt(tm2), HalfInt(tJp), HalfInt(tM))
                acc = acc + a.to_surd() * b.to_surd()
            assert acc == (1 if tJ == tJp else 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_threej_000_permutation_symmetry(a, b, c):
    v = threej_000(a, b, c)
    for perm in [(b, a, c), (c, b, a), (a, c, b)]:
        w = threej_000(*perm)
        assert (w.is_zero and v.is_zero) or (w.square == v.square and w.sign == v.sign * (-1) ** (a + b + c))
