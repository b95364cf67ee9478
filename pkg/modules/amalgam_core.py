"""Words and canonical normal forms for the iterated amalgam.

G₀ = H₀ and Gₙ = G_{n−1} *_{B_{n−1}} Hₙ, with every B_k central in the
factors on both sides. G is the ascending union of the Gₙ. Elements are
kept in a recursive normal form:

    Base(h)                  h ∈ H₀, level 0
    Alt(n; letters; tail)    alternating Left/Right letters, tail ∈ B_{n−1}

Left letters are canonical forms of elements of G_{n−1} \\ B_{n−1}, reduced
to coset representatives modulo B_{n−1}. Right letters are transversal
representatives of Hₙ / B_{n−1}. Every tail is central in Gₙ, so residues
from normalizing a letter are pushed into the single outer tail.

Multiplication merges letters at the junction of two forms, left to right,
back-merging whenever a product falls into B_{n−1}.
"""

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Literal

from modules.errors import PreconditionViolated, UnsupportedLevel

LEFT = "L"
RIGHT = "R"


class FactorSystem(ABC):
    """The data (Hₙ, Bₙ, transversals) an iterated amalgam is built from.

    Elements of every Hₙ share one value representation. Each Bₙ is a
    subgroup of B₀ ⊆ H₀, so base elements can always be multiplied with
    ``factor_mul(0, ...)``.
    """

    kind: str = "abstract"
    max_level: int | None = None

    @abstractmethod
    def factor_id(self, n: int) -> Any: ...

    @abstractmethod
    def factor_mul(self, n: int, x: Any, y: Any) -> Any: ...

    @abstractmethod
    def factor_inv(self, n: int, x: Any) -> Any: ...

    def factor_eq(self, n: int, x: Any, y: Any) -> bool:
        return x == y

    @abstractmethod
    def in_base(self, n: int, x: Any) -> bool:
        """x ∈ Bₙ, for x presented in Hₙ or H_{n+1}."""

    @abstractmethod
    def split(self, n: int, h: Any) -> tuple[Any, Any]:
        """h ∈ Hₙ (n ≥ 1) as rep·b with b ∈ B_{n−1}."""

    @abstractmethod
    def split_own(self, n: int, h: Any) -> tuple[Any, Any]:
        """h ∈ Hₙ as rep·b with b ∈ Bₙ."""

    @abstractmethod
    def split_chain(self, m: int, n: int, b: Any) -> tuple[Any, Any]:
        """b ∈ B_m (m ≤ n) as rep·b′ with b′ ∈ Bₙ."""

    @abstractmethod
    def nonbase_elem(self, n: int) -> Any: ...

    @abstractmethod
    def escape_elem(self, n: int) -> Any: ...

    @abstractmethod
    def base_escape_level(self, x: Any) -> int:
        """Minimal n with x ∉ Bₙ, for x ≠ id in B₀ ∪ H₀."""

    @abstractmethod
    def sample(self, n: int, rng: random.Random) -> Any: ...

    @abstractmethod
    def sample_base(self, n: int, rng: random.Random) -> Any: ...

    @abstractmethod
    def parse_literal(self, text: str) -> Any: ...

    @abstractmethod
    def format_literal(self, x: Any) -> str: ...

    @abstractmethod
    def describe(self) -> dict: ...

    @property
    def prime(self) -> int:
        return self.describe()["prime"]

    def is_identity(self, n: int, x: Any) -> bool:
        return self.factor_eq(n, x, self.factor_id(n))


# ─── Words and canonical forms ───────────────────────────────────


@dataclass(frozen=True)
class Syllable:
    level: int
    elem: Any


Word = tuple[Syllable, ...]


@dataclass(frozen=True)
class Base:
    value: Any


@dataclass(frozen=True)
class Letter:
    side: Literal["L", "R"]
    value: Any  # CanonicalForm for LEFT, factor element for RIGHT


@dataclass(frozen=True)
class Alt:
    level: int
    letters: tuple[Letter, ...]
    tail: Any


CanonicalForm = Base | Alt


@dataclass(frozen=True)
class GroupElement:
    cf: CanonicalForm
    level: int


def form_level(cf: CanonicalForm) -> int:
    return 0 if isinstance(cf, Base) else cf.level


def identity(sys: FactorSystem) -> GroupElement:
    return GroupElement(Base(sys.factor_id(0)), 0)


def is_identity(g: GroupElement, sys: FactorSystem) -> bool:
    return g.level == 0 and sys.is_identity(0, g.cf.value)


def in_base_element(g: GroupElement, n: int, sys: FactorSystem) -> bool:
    """g ∈ Bₙ. Every Bₙ lies in G₀, so only level-0 elements qualify."""
    return g.level == 0 and sys.in_base(n, g.cf.value)


# ─── Reduction engine ────────────────────────────────────────────


def _base_mul(sys: FactorSystem, x: Any, y: Any) -> Any:
    return sys.factor_mul(0, x, y)


def _lower_coset(cf: CanonicalForm, n: int, sys: FactorSystem) -> tuple[CanonicalForm, Any]:
    """Reduce cf ∈ G_{n−1} \\ B_{n−1} to its coset representative mod B_{n−1}.

    Returns (rep, b) with cf = rep·b and b ∈ B_{n−1}.
    """
    if isinstance(cf, Base):
        r0, b0 = sys.split_own(0, cf.value)
        r1, b1 = sys.split_chain(0, n - 1, b0)
        return Base(_base_mul(sys, r0, r1)), b1
    rep, b = sys.split_chain(cf.level - 1, n - 1, cf.tail)
    return Alt(cf.level, cf.letters, rep), b


def _expand(g: GroupElement, n: int, sys: FactorSystem) -> tuple[list[Letter], Any]:
    """Letters and tail of g seen as an element of Gₙ (n ≥ max(1, level))."""
    if g.level == n:
        return list(g.cf.letters), g.cf.tail
    if in_base_element(g, n - 1, sys):
        return [], g.cf.value
    rep, b = _lower_coset(g.cf, n, sys)
    return [Letter(LEFT, rep)], b


def _combine(top: Letter, incoming: Letter, n: int, sys: FactorSystem):
    """Product of two same-side letters at level n.

    Returns ("base", b) when the product lies in B_{n−1}, otherwise
    ("letter", Letter, residue).
    """
    if top.side == RIGHT:
        v = sys.factor_mul(n, top.value, incoming.value)
        if sys.in_base(n - 1, v):
            return ("base", v)
        rep, b = sys.split(n, v)
        return ("letter", Letter(RIGHT, rep), b)

    prod = mul(
        GroupElement(top.value, form_level(top.value)),
        GroupElement(incoming.value, form_level(incoming.value)),
        sys,
    )
    if in_base_element(prod, n - 1, sys):
        return ("base", prod.cf.value)
    rep, b = _lower_coset(prod.cf, n, sys)
    return ("letter", Letter(LEFT, rep), b)


def _push(stack: list[Letter], incoming: Letter, tail: Any, n: int, sys: FactorSystem) -> Any:
    if not stack or stack[-1].side != incoming.side:
        stack.append(incoming)
        return tail
    top = stack.pop()
    outcome = _combine(top, incoming, n, sys)
    if outcome[0] == "base":
        # the new stack top now faces the next incoming letter
        return _base_mul(sys, tail, outcome[1])
    _, letter, residue = outcome
    stack.append(letter)
    return _base_mul(sys, tail, residue)


def _finalize(letters: list[Letter], tail: Any, n: int, sys: FactorSystem) -> GroupElement:
    if not letters:
        return GroupElement(Base(tail), 0)
    if len(letters) == 1 and letters[0].side == LEFT:
        inner = letters[0].value
        if isinstance(inner, Base):
            return GroupElement(Base(_base_mul(sys, inner.value, tail)), 0)
        return GroupElement(
            Alt(inner.level, inner.letters, _base_mul(sys, inner.tail, tail)),
            inner.level,
        )
    return GroupElement(Alt(n, tuple(letters), tail), n)


def mul(g: GroupElement, h: GroupElement, sys: FactorSystem) -> GroupElement:
    n = max(g.level, h.level)
    if n == 0:
        return GroupElement(Base(sys.factor_mul(0, g.cf.value, h.cf.value)), 0)
    stack, g_tail = _expand(g, n, sys)
    incoming, h_tail = _expand(h, n, sys)
    tail = _base_mul(sys, g_tail, h_tail)
    for letter in incoming:
        tail = _push(stack, letter, tail, n, sys)
    return _finalize(stack, tail, n, sys)


def _check_level(level: int, sys: FactorSystem):
    if level < 0:
        raise UnsupportedLevel(f"negative level {level}")
    if sys.max_level is not None and level > sys.max_level:
        raise UnsupportedLevel(
            f"level {level} exceeds the instance cap {sys.max_level}"
        )


def syllable_element(level: int, x: Any, sys: FactorSystem) -> GroupElement:
    """Canonical form of the single letter x ∈ H_level."""
    _check_level(level, sys)
    while level >= 1 and sys.in_base(level - 1, x):
        level -= 1
    if level == 0:
        return GroupElement(Base(x), 0)
    rep, b = sys.split(level, x)
    return GroupElement(Alt(level, (Letter(RIGHT, rep),), b), level)


def reduce(word: Word, sys: FactorSystem) -> GroupElement:
    for s in word:
        _check_level(s.level, sys)
    acc = identity(sys)
    for s in word:
        acc = mul(acc, syllable_element(s.level, s.elem, sys), sys)
    return acc


def to_word(g: GroupElement) -> Word:
    """Syllables whose product is g: letters in order, then the tail."""
    return tuple(_form_syllables(g.cf))


def _form_syllables(cf: CanonicalForm) -> list[Syllable]:
    if isinstance(cf, Base):
        return [Syllable(0, cf.value)]
    out: list[Syllable] = []
    for letter in cf.letters:
        if letter.side == LEFT:
            out.extend(_form_syllables(letter.value))
        else:
            out.append(Syllable(cf.level, letter.value))
    out.append(Syllable(0, cf.tail))
    return out


def invert_word(word: Word, sys: FactorSystem) -> Word:
    return tuple(Syllable(s.level, sys.factor_inv(s.level, s.elem)) for s in reversed(word))


def inv(g: GroupElement, sys: FactorSystem) -> GroupElement:
    return reduce(invert_word(to_word(g), sys), sys)


def eq(g: GroupElement, h: GroupElement) -> bool:
    return g.cf == h.cf


def level(g: GroupElement) -> int:
    return g.level


def conjugate(g: GroupElement, h: GroupElement, sys: FactorSystem) -> GroupElement:
    """g·h·g⁻¹."""
    return mul(mul(g, h, sys), inv(g, sys), sys)


def commutator(g: GroupElement, h: GroupElement, sys: FactorSystem) -> GroupElement:
    """g·h·g⁻¹·h⁻¹."""
    return mul(conjugate(g, h, sys), inv(h, sys), sys)


def centrality_check(g: GroupElement, n: int, z: Any, sys: FactorSystem) -> bool:
    """[g, z] = id for z ∈ Bₙ and level(g) ≤ n+1."""
    if g.level > n + 1:
        raise PreconditionViolated(
            f"level(g) = {g.level} exceeds n+1 = {n + 1}", hypothesis="level(g) <= n+1"
        )
    if not sys.in_base(n, z):
        raise PreconditionViolated(
            f"{sys.format_literal(z)} is not in B_{n}", hypothesis="z in B_n"
        )
    return is_identity(commutator(g, syllable_element(0, z, sys), sys), sys)


# ─── Samplers ────────────────────────────────────────────────────


def random_word(
    sys: FactorSystem,
    rng: random.Random,
    max_level: int,
    max_length: int,
    min_length: int = 0,
) -> Word:
    length = rng.randint(min_length, max_length)
    syllables = []
    for _ in range(length):
        lvl = rng.randint(0, max_level)
        syllables.append(Syllable(lvl, sys.sample(lvl, rng)))
    return tuple(syllables)


def random_element(
    sys: FactorSystem, rng: random.Random, max_level: int, max_length: int
) -> GroupElement:
    return reduce(random_word(sys, rng, max_level, max_length), sys)


def element_of_level(
    sys: FactorSystem,
    rng: random.Random,
    target: int,
    max_length: int,
    attempts: int = 64,
) -> GroupElement:
    """Random element with level exactly ``target``.

    Forces one syllable at the target level carrying a non-base value, so
    most draws already land at the right level.
    """
    for _ in range(attempts):
        word = list(random_word(sys, rng, target, max(0, max_length - 1)))
        x = sys.escape_elem(target - 1) if target >= 1 else sys.sample(0, rng)
        word.insert(rng.randint(0, len(word)), Syllable(target, x))
        g = reduce(tuple(word), sys)
        if g.level == target:
            return g
    raise PreconditionViolated(
        f"could not sample an element of level {target}", hypothesis="sampler"
    )
