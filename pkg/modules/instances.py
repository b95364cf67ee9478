"""Concrete factor systems.

    dense       Hₙ = (ℤ[1/p], +), Bₙ = pⁿℤ
    heisenberg  Hₙ = discrete Heisenberg group, Bₙ = {(0,0,pⁿt)}
    cyclic      Hₙ = ℤ/p^L, Bₙ = ⟨p^min(n+shift, L)⟩

All three keep equality and base membership decidable. make_instance is
the factory the CLI and tests go through.
"""

import random
import re
from typing import Any

from modules.amalgam_core import FactorSystem
from modules.errors import InvalidParams, LiteralError
from modules.padic_core import (
    PAdicRational,
    Prime,
    coset_rep,
    in_power_lattice,
    int_valuation,
    parse_padic,
    valuation,
)

INSTANCE_KINDS = ("dense", "heisenberg", "cyclic")

# Levels probed by the construction-time axiom check
_AXIOM_PROBE_LEVELS = 8

_TRIPLE_PATTERN = re.compile(
    r"^\s*\(?\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*\)?\s*$"
)
_INT_PATTERN = re.compile(r"^\s*([-+]?\d+)\s*$")


class _ValidatedSystem(FactorSystem):
    """Runs the axiom check once construction is complete."""

    def _validate_axioms(self):
        rng = random.Random(0)
        for n in range(_AXIOM_PROBE_LEVELS):
            if self.in_base(n, self.nonbase_elem(n)):
                raise InvalidParams(f"{self.kind}: B_{n} = H_{n} (nonbase element lies in B_{n})")
            if self.in_base(n, self.escape_elem(n)):
                raise InvalidParams(f"{self.kind}: B_{n} = H_{n + 1} (escape element lies in B_{n})")
            for _ in range(4):
                b = self.sample_base(n + 1, rng)
                if not self.in_base(n, b):
                    raise InvalidParams(f"{self.kind}: B_{n + 1} is not contained in B_{n}")


class DensePadicInstance(_ValidatedSystem):
    kind = "dense"

    def __init__(self, p: int):
        self.p = Prime(p).p
        self._zero = PAdicRational.zero(self.p)
        self._validate_axioms()

    def factor_id(self, n: int) -> PAdicRational:
        return self._zero

    def factor_mul(self, n: int, x: PAdicRational, y: PAdicRational) -> PAdicRational:
        return x + y

    def factor_inv(self, n: int, x: PAdicRational) -> PAdicRational:
        return -x

    def in_base(self, n: int, x: PAdicRational) -> bool:
        return in_power_lattice(x, n)

    def split(self, n: int, h: PAdicRational) -> tuple[PAdicRational, PAdicRational]:
        return coset_rep(h, n - 1)

    def split_own(self, n: int, h: PAdicRational) -> tuple[PAdicRational, PAdicRational]:
        return coset_rep(h, n)

    def split_chain(self, m: int, n: int, b: PAdicRational) -> tuple[PAdicRational, PAdicRational]:
        if m == n:
            return self._zero, b
        return coset_rep(b, n)

    def nonbase_elem(self, n: int) -> PAdicRational:
        return PAdicRational.make(1, 1, self.p)

    def escape_elem(self, n: int) -> PAdicRational:
        if n == 0:
            return PAdicRational.make(1, 1, self.p)
        return PAdicRational.integer(1, self.p)

    def base_escape_level(self, x: PAdicRational) -> int:
        if x.is_zero():
            raise InvalidParams("base_escape_level of the identity is undefined")
        return max(0, valuation(x) + 1)

    def sample(self, n: int, rng: random.Random) -> PAdicRational:
        if rng.random() < 0.25:
            return self.sample_base(n, rng)
        return PAdicRational.make(rng.randint(-60, 60), rng.randint(0, 2), self.p)

    def sample_base(self, n: int, rng: random.Random) -> PAdicRational:
        return PAdicRational.make(rng.randint(-6, 6) * self.p ** n, 0, self.p)

    def parse_literal(self, text: str) -> PAdicRational:
        return parse_padic(text, self.p)

    def format_literal(self, x: PAdicRational) -> str:
        return str(x)

    def describe(self) -> dict:
        return {"kind": self.kind, "prime": self.p}


class HeisenbergInstance(_ValidatedSystem):
    """(x,y,z)(x′,y′,z′) = (x+x′, y+y′, z+z′+x·y′); centre {(0,0,z)}."""

    kind = "heisenberg"
    _id = (0, 0, 0)

    def __init__(self, p: int):
        self.p = Prime(p).p
        self._validate_axioms()

    def factor_id(self, n: int) -> tuple[int, int, int]:
        return self._id

    def factor_mul(self, n: int, a: tuple, b: tuple) -> tuple[int, int, int]:
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def factor_inv(self, n: int, a: tuple) -> tuple[int, int, int]:
        return (-a[0], -a[1], -a[2] + a[0] * a[1])

    def in_base(self, n: int, a: tuple) -> bool:
        return a[0] == 0 and a[1] == 0 and a[2] % self.p ** n == 0

    def _split_mod(self, a: tuple, e: int) -> tuple[tuple, tuple]:
        r = a[2] % self.p ** e
        return (a[0], a[1], r), (0, 0, a[2] - r)

    def split(self, n: int, h: tuple) -> tuple[tuple, tuple]:
        return self._split_mod(h, n - 1)

    def split_own(self, n: int, h: tuple) -> tuple[tuple, tuple]:
        return self._split_mod(h, n)

    def split_chain(self, m: int, n: int, b: tuple) -> tuple[tuple, tuple]:
        if m == n:
            return self._id, b
        return self._split_mod(b, n)

    def nonbase_elem(self, n: int) -> tuple[int, int, int]:
        return (1, 0, 0)

    def escape_elem(self, n: int) -> tuple[int, int, int]:
        return (1, 0, 0)

    def base_escape_level(self, a: tuple) -> int:
        if a == self._id:
            raise InvalidParams("base_escape_level of the identity is undefined")
        if a[0] != 0 or a[1] != 0:
            return 0
        return int_valuation(a[2], self.p) + 1

    def sample(self, n: int, rng: random.Random) -> tuple[int, int, int]:
        if rng.random() < 0.25:
            return self.sample_base(n, rng)
        return (rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-30, 30))

    def sample_base(self, n: int, rng: random.Random) -> tuple[int, int, int]:
        return (0, 0, rng.randint(-6, 6) * self.p ** n)

    def parse_literal(self, text: str) -> tuple[int, int, int]:
        match = _TRIPLE_PATTERN.match(text)
        if not match:
            raise LiteralError(f"expected an integer triple (x,y,z), got {text!r}")
        return tuple(int(g) for g in match.groups())

    def format_literal(self, a: tuple) -> str:
        return f"({a[0]},{a[1]},{a[2]})"

    def describe(self) -> dict:
        return {"kind": self.kind, "prime": self.p}


class FiniteCyclicInstance(_ValidatedSystem):
    """Finite data with the same axioms; Bₙ is trivial from n = L − shift on."""

    kind = "cyclic"

    def __init__(self, p: int, exponent: int, shift: int = 1):
        self.p = Prime(p).p
        if exponent < 2:
            raise InvalidParams(f"cyclic instance needs L >= 2, got {exponent}")
        if shift < 0:
            raise InvalidParams(f"shift must be non-negative, got {shift}")
        self.exponent = exponent
        self.shift = shift
        self.modulus = self.p ** exponent
        self._validate_axioms()

    def _base_exp(self, n: int) -> int:
        return min(n + self.shift, self.exponent)

    def factor_id(self, n: int) -> int:
        return 0

    def factor_mul(self, n: int, x: int, y: int) -> int:
        return (x + y) % self.modulus

    def factor_inv(self, n: int, x: int) -> int:
        return (-x) % self.modulus

    def in_base(self, n: int, x: int) -> bool:
        return x % self.p ** self._base_exp(n) == 0

    def _split_mod(self, x: int, n: int) -> tuple[int, int]:
        r = x % self.p ** self._base_exp(n)
        return r, (x - r) % self.modulus

    def split(self, n: int, h: int) -> tuple[int, int]:
        return self._split_mod(h, n - 1)

    def split_own(self, n: int, h: int) -> tuple[int, int]:
        return self._split_mod(h, n)

    def split_chain(self, m: int, n: int, b: int) -> tuple[int, int]:
        if m == n:
            return 0, b
        return self._split_mod(b, n)

    def nonbase_elem(self, n: int) -> int:
        return 1

    def escape_elem(self, n: int) -> int:
        return 1

    def base_escape_level(self, x: int) -> int:
        x %= self.modulus
        if x == 0:
            raise InvalidParams("base_escape_level of the identity is undefined")
        return max(0, int_valuation(x, self.p) - self.shift + 1)

    def sample(self, n: int, rng: random.Random) -> int:
        return rng.randrange(self.modulus)

    def sample_base(self, n: int, rng: random.Random) -> int:
        step = self.p ** self._base_exp(n)
        return (rng.randrange(self.modulus // step) * step) % self.modulus

    def parse_literal(self, text: str) -> int:
        match = _INT_PATTERN.match(text)
        if not match:
            raise LiteralError(f"expected an integer residue, got {text!r}")
        return int(match.group(1)) % self.modulus

    def format_literal(self, x: int) -> str:
        return str(x)

    def describe(self) -> dict:
        return {"kind": self.kind, "prime": self.p, "exponent": self.exponent}


def make_instance(kind: str, p: int, exponent: int = 3, shift: int = 1) -> FactorSystem:
    """Build a factor system by name; raises InvalidParams on bad input."""
    if kind == "dense":
        return DensePadicInstance(p)
    if kind == "heisenberg":
        return HeisenbergInstance(p)
    if kind == "cyclic":
        return FiniteCyclicInstance(p, exponent, shift)
    raise InvalidParams(
        f"unknown instance {kind!r}; choose one of {', '.join(INSTANCE_KINDS)}"
    )


# ─── Contract conformance ────────────────────────────────────────


def _factor_commutes(sys: FactorSystem, n: int, x: Any, y: Any) -> bool:
    return sys.factor_eq(n, sys.factor_mul(n, x, y), sys.factor_mul(n, y, x))


def check_contract(
    sys: FactorSystem, samples: int = 200, seed: int = 0, levels: int = 6
) -> dict:
    """Sampled check of every factor-system axiom the normal form relies on.

    Returns a report dict: {"suite", "instance", "samples", "failures", "examples"}.
    """
    rng = random.Random(seed)
    failures: list[str] = []

    def fail(msg: str):
        failures.append(msg)

    for n in range(levels):
        if sys.in_base(n, sys.nonbase_elem(n)):
            fail(f"nonbase_elem({n}) lies in B_{n}")
        if sys.in_base(n, sys.escape_elem(n)):
            fail(f"escape_elem({n}) lies in B_{n}")

        for _ in range(samples):
            b = sys.sample_base(n, rng)
            if not sys.in_base(n, b):
                fail(f"sample_base({n}) produced a non-member")
            if n > 0 and not sys.in_base(n - 1, b):
                fail(f"B_{n} not contained in B_{n - 1}")
            for host in (n, n + 1):
                x = sys.sample(host, rng)
                if not _factor_commutes(sys, host, b, x):
                    fail(f"B_{n} not central in H_{host}")
                if not sys.is_identity(host, sys.factor_mul(host, x, sys.factor_inv(host, x))):
                    fail(f"inverse law fails in H_{host}")

            h = sys.sample(n, rng)
            rep, rest = sys.split_own(n, h)
            if not sys.in_base(n, rest) or sys.factor_mul(n, rep, rest) != h:
                fail(f"split_own({n}) is not an exact factorization")
            if sys.split_own(n, sys.factor_mul(n, h, b))[0] != rep:
                fail(f"split_own({n}) representative depends on the coset member")
            if n >= 1:
                rep, rest = sys.split(n, h)
                if not sys.in_base(n - 1, rest) or sys.factor_mul(n, rep, rest) != h:
                    fail(f"split({n}) is not an exact factorization")
                if sys.split(n, sys.factor_mul(n, h, b))[0] != rep:
                    fail(f"split({n}) representative depends on the coset member")
                if sys.kind == "dense" and not (0 <= rep.to_fraction() < sys.p ** (n - 1)):
                    fail(f"dense split({n}) representative outside [0, p^{n - 1})")

            m = rng.randint(0, n)
            c = sys.sample_base(m, rng)
            rep, rest = sys.split_chain(m, n, c)
            if not sys.in_base(n, rest) or not sys.in_base(m, rep):
                fail(f"split_chain({m},{n}) leaves the chain")
            if sys.factor_mul(0, rep, rest) != c:
                fail(f"split_chain({m},{n}) is not an exact factorization")
            if sys.split_chain(m, n, sys.factor_mul(0, c, b))[0] != rep:
                fail(f"split_chain({m},{n}) representative depends on the coset member")

            if not sys.is_identity(0, c):
                k = sys.base_escape_level(c)
                if sys.in_base(k, c) or (k > 0 and not sys.in_base(k - 1, c)):
                    fail(f"base_escape_level inconsistent at {sys.format_literal(c)}")

    if sys.kind == "heisenberg":
        for _ in range(samples):
            a = sys.sample(0, rng)
            if sys.factor_mul(0, a, (-a[0], -a[1], -a[2] + a[0] * a[1])) != (0, 0, 0):
                fail("Heisenberg inverse formula fails")

    return {
        "suite": "instance",
        "instance": sys.describe(),
        "samples": samples * levels,
        "failures": len(failures),
        "examples": failures[:5],
    }
