"""Exact arithmetic: half-integers, surds, Clebsch-Gordan and 3j symbols.

Nothing in this module touches floating point except the explicit
``__float__`` conversions.  Quantities that carry a square root are stored as
a sign together with an exact rational square, so squared couplings stay in
``fractions.Fraction`` all the way through.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import DomainError

RationalLike = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored as twice its value (spin 3/2 -> ``twice_value=3``)."""

    twice_value: int

    def __post_init__(self):
        if not isinstance(self.twice_value, int) or isinstance(self.twice_value, bool):
            raise DomainError(f"twice_value must be an int, got {self.twice_value!r}")

    @classmethod
    def coerce(cls, x) -> "HalfInt":
        """Build from a HalfInt, an int/Fraction/float spin value or a string like ``"3/2"``."""
        if isinstance(x, HalfInt):
            return x
        if isinstance(x, bool):
            raise DomainError(f"cannot interpret {x!r} as a half-integer")
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError(f"cannot parse half-integer from {x!r}") from exc
        if isinstance(x, float):
            if not math.isfinite(x):
                raise DomainError(f"cannot interpret {x!r} as a half-integer")
            x = Fraction(x)
        if isinstance(x, int):
            return cls(2 * x)
        if isinstance(x, Fraction):
            twice = 2 * x
            if twice.denominator != 1:
                raise DomainError(f"{x} is not a half-integer")
            return cls(int(twice))
        raise DomainError(f"cannot interpret {x!r} as a half-integer")

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __add__(self, other):
        other = HalfInt.coerce(other)
        return HalfInt(self.twice_value + other.twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        other = HalfInt.coerce(other)
        return HalfInt(self.twice_value - other.twice_value)

    def __rsub__(self, other):
        return HalfInt.coerce(other) - self

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __abs__(self):
        return HalfInt(abs(self.twice_value))

    def __float__(self):
        return self.twice_value / 2

    def __int__(self):
        if not self.is_integer:
            raise DomainError(f"{self} is not an integer")
        return self.twice_value // 2

    def __str__(self):
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise DomainError(f"expected an exact rational, got {type(x).__name__}")


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree (``n > 0``)."""
    if n <= 0:
        raise DomainError("squarefree_split needs a positive integer")
    s, d = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return s, d * n


@dataclass(frozen=True)
class SignedSqrtRational:
    """The real number ``sign * sqrt(square)`` with ``square`` an exact rational."""

    sign: int
    square: Fraction

    def __post_init__(self):
        object.__setattr__(self, "square", _as_fraction(self.square))
        if self.sign not in (-1, 0, 1):
            raise DomainError("sign must be -1, 0 or +1")
        if self.square < 0:
            raise DomainError("square must be non-negative")
        if (self.sign == 0) != (self.square == 0):
            raise DomainError("sign is zero exactly when square is zero")

    @classmethod
    def zero(cls) -> "SignedSqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def from_rational(cls, r: RationalLike) -> "SignedSqrtRational":
        r = _as_fraction(r)
        return cls((r > 0) - (r < 0), r * r)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __neg__(self):
        return SignedSqrtRational(-self.sign, self.square)

    def __mul__(self, other):
        if isinstance(other, SignedSqrtRational):
            return SignedSqrtRational(self.sign * other.sign, self.square * other.square)
        return self * SignedSqrtRational.from_rational(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SignedSqrtRational):
            if other.is_zero:
                raise ZeroDivisionError("division by a zero surd")
            return SignedSqrtRational(self.sign * other.sign, self.square / other.square)
        return self / SignedSqrtRational.from_rational(other)

    def __float__(self):
        return self.sign * math.sqrt(self.square)

    def to_surd(self) -> "SurdSum":
        return SurdSum.from_signed_sqrt(self)

    def __str__(self):
        if self.sign == 0:
            return "0"
        return f"{'-' if self.sign < 0 else ''}sqrt({self.square})"


class SurdSum:
    """Exact element of Q(sqrt 2, sqrt 3, ...): a finite sum ``sum_d c_d sqrt(d)``.

    Keys are squarefree positive integers and values nonzero rationals.  Surds
    with distinct squarefree radicands are linearly independent over the
    rationals, so equality of two instances is decided term by term.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for d, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                clean[int(d)] = clean.get(int(d), Fraction(0)) + c
        self._terms = {d: c for d, c in clean.items() if c}

    @classmethod
    def from_rational(cls, r: RationalLike) -> "SurdSum":
        return cls({1: r})

    @classmethod
    def sqrt_of(cls, r: RationalLike) -> "SurdSum":
        """Exact square root of a non-negative rational."""
        r = _as_fraction(r)
        if r < 0:
            raise DomainError("square root of a negative rational")
        if r == 0:
            return cls()
        s, d = squarefree_split(r.numerator * r.denominator)
        return cls({d: Fraction(s, r.denominator)})

    @classmethod
    def from_signed_sqrt(cls, x: SignedSqrtRational) -> "SurdSum":
        root = cls.sqrt_of(x.square)
        return root if x.sign >= 0 else -root

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self} is not rational")
        return self._terms.get(1, Fraction(0))

    def __add__(self, other):
        if not isinstance(other, SurdSum):
            other = SurdSum.from_rational(other)
        out = dict(self._terms)
        for d, c in other._terms.items():
            out[d] = out.get(d, Fraction(0)) + c
        return SurdSum(out)

    __radd__ = __add__

    def __neg__(self):
        return SurdSum({d: -c for d, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, SurdSum) else SurdSum.from_rational(-_as_fraction(other)))

    def __mul__(self, other):
        if not isinstance(other, SurdSum):
            other = SurdSum.from_rational(other)
        out: dict[int, Fraction] = {}
        for d1, c1 in self._terms.items():
            for d2, c2 in other._terms.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, Fraction(0)) + c1 * c2 * g
        return SurdSum(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SurdSum):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == SurdSum.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "SurdSum(0)"
        parts = [f"{c}" if d == 1 else f"{c}*sqrt({d})" for d, c in sorted(self._terms.items())]
        return "SurdSum(" + " + ".join(parts) + ")"


def factorial(k: int) -> int:
    """Exact ``k!`` for a non-negative integer."""
    if isinstance(k, bool) or not isinstance(k, int):
        raise DomainError(f"factorial needs an int, got {k!r}")
    if k < 0:
        raise DomainError(f"factorial of negative number {k}")
    return math.factorial(k)


def _half(twice: int) -> int:
    """Integer value of a twice-encoded quantity known to be even."""
    if twice % 2:
        raise DomainError("expected an integer combination of half-integers")
    return twice // 2


def _check_projection(j: HalfInt, m: HalfInt, label: str):
    if j.twice_value < 0:
        raise DomainError(f"{label}: spin must be non-negative, got {j}")
    if abs(m.twice_value) > j.twice_value or (j.twice_value - m.twice_value) % 2:
        raise DomainError(f"{label}: projection {m} not allowed for spin {j}")


def _triangle(t1: int, t2: int, t3: int) -> bool:
    return abs(t1 - t2) <= t3 <= t1 + t2 and (t1 + t2 + t3) % 2 == 0


def clebsch_gordan(j1, m1, j2, m2, J, M) -> SignedSqrtRational:
    """Exact Clebsch-Gordan coefficient ``<j1 m1; j2 m2 | J M>`` (Condon-Shortley phases).

    Arguments may be anything :meth:`HalfInt.coerce` accepts.  Selection-rule
    violations (``M != m1 + m2`` or ``J`` outside the triangle) give zero;
    projections that are invalid for their own spin raise :class:`DomainError`.
    """
    j1, m1, j2, m2, J, M = (HalfInt.coerce(x) for x in (j1, m1, j2, m2, J, M))
    _check_projection(j1, m1, "j1")
    _check_projection(j2, m2, "j2")
    _check_projection(J, M, "J")
    t1, t2, tJ = j1.twice_value, j2.twice_value, J.twice_value
    if M.twice_value != m1.twice_value + m2.twice_value or not _triangle(t1, t2, tJ):
        return SignedSqrtRational.zero()
    a = _half(tJ + t1 - t2)
    b = _half(tJ - t1 + t2)
    c = _half(t1 + t2 - tJ)
    d = _half(t1 + t2 + tJ)
    j1m, j1p = _half(t1 - m1.twice_value), _half(t1 + m1.twice_value)
    j2m, j2p = _half(t2 - m2.twice_value), _half(t2 + m2.twice_value)
    Jm, Jp = _half(tJ - M.twice_value), _half(tJ + M.twice_value)
    e = _half(tJ - t2 + m1.twice_value)
    f = _half(tJ - t1 - m2.twice_value)
    kmin = max(0, -e, -f)
    kmax = min(c, j1m, j2p)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (math.factorial(k) * math.factorial(c - k) * math.factorial(j1m - k)
               * math.factorial(j2p - k) * math.factorial(e + k) * math.factorial(f + k))
        total += Fraction((-1) ** k, den)
    if total == 0:
        return SignedSqrtRational.zero()
    prefactor = Fraction(
        (tJ + 1) * math.factorial(a) * math.factorial(b) * math.factorial(c)
        * math.factorial(Jp) * math.factorial(Jm)
        * math.factorial(j1m) * math.factorial(j1p) * math.factorial(j2m) * math.factorial(j2p),
        math.factorial(d + 1),
    )
    return SignedSqrtRational(1 if total > 0 else -1, prefactor * total * total)


def threej(j1, j2, j3, m1, m2, m3) -> SignedSqrtRational:
    """General Wigner 3j symbol, obtained from the Clebsch-Gordan coefficient."""
    j1, j2, j3, m1, m2, m3 = (HalfInt.coerce(x) for x in (j1, j2, j3, m1, m2, m3))
    _check_projection(j3, m3, "j3")
    if m1.twice_value + m2.twice_value + m3.twice_value != 0:
        _check_projection(j1, m1, "j1")
        _check_projection(j2, m2, "j2")
        return SignedSqrtRational.zero()
    cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)
    if cg.is_zero:
        return cg
    phase = _half(j1.twice_value - j2.twice_value - m3.twice_value)
    sign = cg.sign * (-1) ** phase
    return SignedSqrtRational(sign, cg.square / (j3.twice_value + 1))


def threej_000(l1: int, l2: int, l3: int) -> SignedSqrtRational:
    """Closed-form 3j symbol with all projections zero, for integer ``l``'s."""
    for l in (l1, l2, l3):
        if isinstance(l, bool) or not isinstance(l, int) or l < 0:
            raise DomainError(f"threej_000 needs non-negative ints, got {l!r}")
    total = l1 + l2 + l3
    if total % 2 or not (abs(l1 - l2) <= l3 <= l1 + l2):
        return SignedSqrtRational.zero()
    g = total // 2
    f = math.factorial
    root = Fraction(f(2 * g - 2 * l1) * f(2 * g - 2 * l2) * f(2 * g - 2 * l3), f(2 * g + 1))
    ratio = Fraction(f(g), f(g - l1) * f(g - l2) * f(g - l3))
    return SignedSqrtRational((-1) ** g, root * ratio * ratio)


def threej_orthogonality_check(l1: int, l2: int, lmax: int) -> bool:
    """Verify 3j orthogonality exactly for every allowed ``l, l' <= lmax``.

    Checks ``sum_{m1,m2} (2l+1) (l1 l2 l; m1 m2 m)(l1 l2 l'; m1 m2 m') = delta``
    in exact surd arithmetic over all ``m, m'``.
    """
    for x in (l1, l2, lmax):
        if isinstance(x, bool) or not isinstance(x, int) or x < 0:
            raise DomainError("threej_orthogonality_check needs non-negative ints")
    if lmax > 8:
        raise DomainError("lmax is limited to 8")
    ls = [l for l in range(abs(l1 - l2), min(l1 + l2, lmax) + 1)]
    for l in ls:
        for lp in ls:
            for m in range(-l, l + 1):
                for mp in range(-lp, lp + 1):
                    acc = SurdSum()
                    for m1 in range(-l1, l1 + 1):
                        m2 = -m - m1
                        if abs(m2) > l2 or -mp - m1 != m2:
                            continue
                        a = threej(l1, l2, l, m1, m2, m)
                        b = threej(l1, l2, lp, m1, m2, mp)
                        if a.is_zero or b.is_zero:
                            continue
                        acc = acc + (2 * l + 1) * (a.to_surd() * b.to_surd())
                    expected = 1 if (l == lp and m == mp) else 0
                    if acc != expected:
                        return False
    return True


def lambda_coeff(l: int, M: int) -> Fraction:
    """Legendre-expansion weight ``(-1)^l M!(M+1)! / ((M-l)!(M+l+1)!)``."""
    for x in (l, M):
        if isinstance(x, bool) or not isinstance(x, int):
            raise DomainError("lambda_coeff needs integer arguments")
    if l < 0 or l > M:
        raise DomainError(f"lambda_coeff needs 0 <= l <= M, got l={l}, M={M}")
    f = math.factorial
    return Fraction((-1) ** l * f(M) * f(M + 1), f(M - l) * f(M + l + 1))
