"""Closed-form block spectra for SU(2) valence-bond chains.

All eigenvalues are exact rationals; floats appear only in entropies.
Blocks are ``L`` contiguous bulk sites.  Each distinct eigenvalue is labelled
by the total spin ``J`` of the two block ends and is ``(2J+1)``-fold
degenerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .density_oracle import EntropyReport, entropy_from_weights
from .errors import DomainError
from .exact_algebra import HalfInt, lambda_coeff, threej_000


@dataclass
class ClosedFormSpectrum:
    """Eigenvalues ``Lambda(J)`` with degeneracy ``2J+1``; ``method`` names the route."""

    entries: list
    method: str

    def trace(self):
        return sum(g * lam for _, lam, g in self.entries)

    def values(self) -> list:
        return [lam for _, lam, _ in self.entries]

    def as_dict(self) -> dict:
        return {J.twice_value: lam for J, lam, _ in self.entries}

    def flat(self) -> list:
        out = []
        for _, lam, g in self.entries:
            out.extend([lam] * g)
        return sorted(out, reverse=True)

    def entropies(self, alphas: Sequence[float] = ()) -> EntropyReport:
        return entropy_from_weights([float(lam) for _, lam, _ in self.entries],
                                    [g for _, _, g in self.entries], alphas)


def _positive_int(x, name: str, minimum: int = 1) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {x!r}")
    return x


def _bulk_spin(S) -> int:
    S = HalfInt.coerce(S)
    if not S.is_integer or S.twice_value < 2:
        raise DomainError(f"homogeneous routes need a positive integer bulk spin, got {S}")
    return int(S)


def spin1_spectrum(L: int) -> ClosedFormSpectrum:
    """``Lambda_0 = (1 + 3p)/4`` and ``Lambda_{1,2,3} = (1 - p)/4`` with ``p = (-1/3)^L``."""
    _positive_int(L, "L")
    p = Fraction(-1, 3) ** L
    return ClosedFormSpectrum(
        [(HalfInt(0), (1 + 3 * p) / 4, 1), (HalfInt(2), (1 - p) / 4, 3)], "spin1")


def spin1_entropies_closed(L: int, alphas: Sequence[float] = ()) -> EntropyReport:
    """Entropies written directly in terms of ``p = (-1/3)^L``, without a spectrum object."""
    _positive_int(L, "L")
    p = (-1.0 / 3.0) ** L
    a, b = 1 + 3 * p, 1 - p

    def xlogx(x):
        return x * math.log(x) if x > 0 else 0.0

    svn = math.log(4) - 0.25 * xlogx(a) - 0.75 * xlogx(b)
    renyi = {}
    for alpha in alphas:
        alpha = float(alpha)
        if not alpha > 0:
            raise DomainError(f"Renyi order must be positive, got {alpha}")
        if alpha == 1.0:
            renyi[alpha] = svn
        else:
            renyi[alpha] = math.log((a / 4) ** alpha + 3 * (b / 4) ** alpha) / (1 - alpha)
    return EntropyReport(svn, renyi)


@lru_cache(maxsize=None)
def _threej_sq(l1: int, l2: int, l3: int) -> Fraction:
    return threej_000(l1, l2, l3).square


@lru_cache(maxsize=None)
def _lam(l: int, M: int) -> Fraction:
    return lambda_coeff(l, M)


def spinS_spectrum_sum(S, L: int) -> ClosedFormSpectrum:
    """Triple sum over Legendre weights and squared zero-projection 3j symbols."""
    s = _bulk_spin(S)
    _positive_int(L, "L", 2)
    f = math.factorial
    entries = []
    for J in range(s + 1):
        pref = Fraction(f(2 * J + 1) * f(s) * f(s), f(s + J + 1) * f(s - J + 1) * f(J + 1) * f(J + 1))
        total = Fraction(0)
        for l1 in range(s + 1):
            w1 = (2 * l1 + 1) * _lam(l1, s) ** (L - 1)
            for lL in range(s - J + 1):
                w2 = w1 * (2 * lL + 1) * _lam(lL, s - J)
                for l in range(J + 1):
                    t = _threej_sq(l1, lL, l)
                    if t:
                        total += w2 * (2 * l + 1) * _lam(l, J) ** 2 * t
        entries.append((HalfInt(2 * J), pref * total, 2 * J + 1))
    return ClosedFormSpectrum(entries, "threej_sum")


def recurrence_polynomials(S, x: Fraction) -> list[Fraction]:
    """``I_0 .. I_S`` at the point ``x`` from the three-term recurrence."""
    s = _bulk_spin(S)
    x = Fraction(x)
    half = Fraction(s, 2)
    out = [Fraction(1)]
    if s >= 1:
        out.append(x / (half + 1) ** 2)
    for l in range(1, s):
        a = Fraction(2 * l + 1, (s + l + 2) ** 2) * (4 * x / (l + 1) + l)
        b = Fraction(l, l + 1) * Fraction(s - l + 1, s + l + 2) ** 2
        out.append(a * out[l] - b * out[l - 1])
    return out


def recurrence_point(S, J: int) -> Fraction:
    """``x_J = J(J+1)/2 - (S/2)(S/2 + 1)``."""
    s = _bulk_spin(S)
    half = Fraction(s, 2)
    return Fraction(J * (J + 1), 2) - half * (half + 1)


def spinS_spectrum_recurrence(S, L: int) -> ClosedFormSpectrum:
    """``Lambda(J) = (S+1)^-2 sum_l (2l+1) lambda(l,S)^(L-1) I_l(x_J)``."""
    s = _bulk_spin(S)
    _positive_int(L, "L", 2)
    entries = []
    for J in range(s + 1):
        I = recurrence_polynomials(s, recurrence_point(s, J))
        total = sum((2 * l + 1) * _lam(l, s) ** (L - 1) * I[l] for l in range(s + 1))
        entries.append((HalfInt(2 * J), Fraction(total, (s + 1) ** 2), 2 * J + 1))
    return ClosedFormSpectrum(entries, "recurrence")


def inhom_spectrum(block_multiplicities: Sequence[int]) -> ClosedFormSpectrum:
    """Spectrum of an inhomogeneous block from its bond multiplicities.

    ``block_multiplicities`` is ``(M_01, M_12, ..., M_{L,L+1})``: the two cut
    bonds at the ends and the ``L-1`` bonds inside the block.
    """
    ms = [int(m) for m in block_multiplicities]
    if len(ms) < 3:
        raise DomainError("need the two end bonds and at least one interior bond (L >= 2)")
    if any(m < 1 for m in ms):
        raise DomainError("multiplicities must be >= 1")
    m_left, m_right, interior = ms[0], ms[-1], ms[1:-1]
    m_less = min(interior)
    tjp, tjm = m_left + m_right, m_left - m_right
    f = math.factorial
    entries = []
    for tj in range(abs(tjm), tjp + 1, 2):
        jp_plus = (tjp + tj) // 2       # J_+ + J
        jm_plus = (tjm + tj) // 2       # J_- + J
        jp_minus = (tjp - tj) // 2      # J_+ - J
        mjm_plus = (tj - tjm) // 2      # -J_- + J
        j_less = min(jm_plus, mjm_plus)
        pref = Fraction(f(tj + 1) * f(m_left) * f(m_right),
                        f(jp_plus + 1) * f(jm_plus + 1) * f(jp_minus + 1) * f(mjm_plus + 1))
        total = Fraction(0)
        for l in range(m_less + 1):
            w = Fraction(2 * l + 1)
            for m in interior:
                w *= _lam(l, m)
            for la in range(jp_minus + 1):
                wa = w * (2 * la + 1) * _lam(la, jp_minus)
                for lb in range(j_less + 1):
                    t = _threej_sq(l, la, lb)
                    if t:
                        total += wa * (2 * lb + 1) * _lam(lb, jm_plus) * _lam(lb, mjm_plus) * t
        entries.append((HalfInt(tj), pref * total, tj + 1))
    return ClosedFormSpectrum(entries, "inhom")


def large_block_limit(kind: str, param=None) -> tuple[ClosedFormSpectrum, EntropyReport]:
    """Saturated spectrum: every non-zero eigenvalue equals ``1/D``.

    ``kind`` is ``"spin1"``, ``"spinS"`` with ``param = S``, or ``"inhom"``
    with ``param = (M_left, M_right)``, the multiplicities of the two cut bonds.
    """
    if kind == "spin1":
        m_left = m_right = 1
    elif kind == "spinS":
        m_left = m_right = _bulk_spin(param)
    elif kind == "inhom":
        try:
            m_left, m_right = (int(x) for x in param)
        except (TypeError, ValueError) as exc:
            raise DomainError("inhom limit needs (M_left, M_right)") from exc
        if m_left < 1 or m_right < 1:
            raise DomainError("end multiplicities must be positive")
    else:
        raise DomainError(f"unknown limit kind {kind!r}")
    D = (m_left + 1) * (m_right + 1)
    value = Fraction(1, D)
    entries = [(HalfInt(tj), value, tj + 1)
               for tj in range(abs(m_left - m_right), m_left + m_right + 1, 2)]
    spectrum = ClosedFormSpectrum(entries, "limit")
    return spectrum, EntropyReport(math.log(D), {})
