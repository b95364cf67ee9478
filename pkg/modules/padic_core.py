"""Exact arithmetic in the additive group Λ = ℤ[1/p].

Λ is the computable dense stand-in for ℚ_p: every element is num / p^k
with arbitrary-precision num, and pⁿℤ = pⁿℤ_p ∩ Λ plays the role of pⁿℤ_p.
Also holds the 2×2 matrices used for the unipotent embedding z ↦ (1 z / 0 1).
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from modules.errors import InvalidParams, LiteralError

# v_p(0)
VALUATION_INF = math.inf

_LITERAL_PATTERN = re.compile(r"^\s*([-+]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def is_prime(p: int) -> bool:
    """Trial division; primes here are small."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Prime:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidParams(f"{self.p!r} is not a prime")

    def __int__(self) -> int:
        return self.p


def int_valuation(n: int, p: int) -> int:
    """Exponent of p in a non-zero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicRational:
    """num / p^den_exp, kept normalized (den_exp == 0 or p ∤ num)."""

    num: int
    den_exp: int
    p: int

    def __post_init__(self):
        if self.den_exp < 0:
            raise ValueError("den_exp must be non-negative")
        if self.den_exp > 0 and self.num % self.p == 0:
            raise ValueError(
                f"{self.num}/{self.p}^{self.den_exp} is not normalized"
            )

    @classmethod
    def make(cls, num: int, den_exp: int, p: int) -> "PAdicRational":
        """Build and normalize num / p^den_exp (den_exp may be negative)."""
        if den_exp < 0:
            return cls(num * p ** (-den_exp), 0, p)
        if num == 0:
            return cls(0, 0, p)
        while den_exp > 0 and num % p == 0:
            num //= p
            den_exp -= 1
        return cls(num, den_exp, p)

    @classmethod
    def zero(cls, p: int) -> "PAdicRational":
        return cls(0, 0, p)

    @classmethod
    def integer(cls, n: int, p: int) -> "PAdicRational":
        return cls(n, 0, p)

    def _check(self, other: "PAdicRational"):
        if self.p != other.p:
            raise ValueError(f"Prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "PAdicRational") -> "PAdicRational":
        self._check(other)
        k = max(self.den_exp, other.den_exp)
        num = (
            self.num * self.p ** (k - self.den_exp)
            + other.num * self.p ** (k - other.den_exp)
        )
        return PAdicRational.make(num, k, self.p)

    def __neg__(self) -> "PAdicRational":
        return PAdicRational(-self.num, self.den_exp, self.p)

    def __sub__(self, other: "PAdicRational") -> "PAdicRational":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.num == 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.p ** self.den_exp)

    def __str__(self) -> str:
        if self.den_exp == 0:
            return str(self.num)
        return f"{self.num}/{self.p ** self.den_exp}"


def add(x: PAdicRational, y: PAdicRational) -> PAdicRational:
    return x + y


def neg(x: PAdicRational) -> PAdicRational:
    return -x


def valuation(x: PAdicRational) -> int | float:
    """v_p(x); VALUATION_INF for zero."""
    if x.is_zero():
        return VALUATION_INF
    return int_valuation(x.num, x.p) - x.den_exp


def in_power_lattice(x: PAdicRational, n: int) -> bool:
    """x ∈ pⁿℤ."""
    return valuation(x) >= n


def coset_rep(x: PAdicRational, n: int) -> tuple[PAdicRational, PAdicRational]:
    """Split x = rep + b with b ∈ pⁿℤ and rep ∈ [0, pⁿ) ∩ Λ.

    The representative is computed on the numerator: with x = num/p^k,
    rep = (num mod p^(n+k)) / p^k.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    k = x.den_exp
    rep = PAdicRational.make(x.num % x.p ** (n + k), k, x.p)
    return rep, x - rep


def parse_padic(text: str, p: int) -> PAdicRational:
    """Parse `m` or `m/d` where d is a power of p."""
    match = _LITERAL_PATTERN.match(text)
    if not match:
        raise LiteralError(f"not a rational literal: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise LiteralError(f"zero denominator in {text!r}")
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if den != 1:
        raise LiteralError(
            f"denominator of {text!r} is not a power of {p}"
        )
    return PAdicRational.make(num, k, p)


# ─── 2×2 matrices ────────────────────────────────────────────────


@dataclass(frozen=True)
class Mat2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def is_unipotent(self) -> bool:
        return self.a == 1 and self.d == 1 and self.c == 0

    def rows(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]


IDENTITY = Mat2(Fraction(1), Fraction(0), Fraction(0), Fraction(1))


def mat_mul(A: Mat2, B: Mat2) -> Mat2:
    return Mat2(
        A.a * B.a + A.b * B.c,
        A.a * B.b + A.b * B.d,
        A.c * B.a + A.d * B.c,
        A.c * B.b + A.d * B.d,
    )


def unipotent(z: PAdicRational) -> Mat2:
    return Mat2(Fraction(1), z.to_fraction(), Fraction(0), Fraction(1))
