"""Randomized and exhaustive check suites behind ``amalgam.py check``.

Every suite returns the same report shape so the CLI can render them
uniformly::

    {"suite": str, "instance": dict, "samples": int, "failures": int, "examples": [str]}

A suite passes when ``failures == 0``. Only the first few failure
descriptions are kept.
"""

import itertools
import random
from dataclasses import asdict
from typing import Any

from modules.amalgam_core import (
    FactorSystem,
    GroupElement,
    Syllable,
    Word,
    centrality_check,
    eq,
    identity,
    inv,
    invert_word,
    is_identity,
    mul,
    random_element,
    random_word,
    reduce,
    syllable_element,
    to_word,
)
from modules.homomorphisms import LevelwiseHom, in_kernel, make_hom, phi_eval, psi_eval
from modules.instances import check_contract
from modules.oracle import naive_reduce
from modules.padic_core import mat_mul
from modules.parsers import format_element, format_word
from modules.witnesses import derived_escape, lemma21_batch

MAX_EXAMPLES = 5

SUITES = (
    "lemma21",
    "axioms",
    "oracle",
    "exhaustive",
    "instance",
    "centrality",
    "homomorphism",
)


class _Tally:
    def __init__(self, name: str, sys: FactorSystem):
        self.name = name
        self.sys = sys
        self.samples = 0
        self.failures = 0
        self.examples: list[str] = []

    def record(self, ok: bool, describe):
        self.samples += 1
        if ok:
            return
        self.failures += 1
        if len(self.examples) < MAX_EXAMPLES:
            self.examples.append(describe())

    def report(self) -> dict:
        return {
            "suite": self.name,
            "instance": self.sys.describe(),
            "samples": self.samples,
            "failures": self.failures,
            "examples": self.examples,
        }


def axiom_suite(
    sys: FactorSystem, samples: int, seed: int, max_level: int = 6, max_length: int = 16
) -> dict:
    """Associativity, identity and inverse laws on random triples."""
    rng = random.Random(seed)
    tally = _Tally("axioms", sys)
    e = identity(sys)
    for _ in range(samples):
        a, b, c = (random_element(sys, rng, max_level, max_length) for _ in range(3))
        show = lambda: " | ".join(format_element(x, sys) for x in (a, b, c))  # noqa: E731
        a_inv = inv(a, sys)
        ok = (
            eq(mul(mul(a, b, sys), c, sys), mul(a, mul(b, c, sys), sys))
            and eq(mul(a, e, sys), a)
            and eq(mul(e, a, sys), a)
            and is_identity(mul(a, a_inv, sys), sys)
            and is_identity(mul(a_inv, a, sys), sys)
        )
        tally.record(ok, show)
    return tally.report()


def _agrees_with_oracle(u: Word, v: Word, sys: FactorSystem) -> bool:
    gu, gv = reduce(u, sys), reduce(v, sys)
    if not eq(gu, naive_reduce(u, sys)):
        return False
    # eq(u, v) ⟺ u·v⁻¹ reduces to the identity
    return eq(gu, gv) == is_identity(reduce(u + invert_word(v, sys), sys), sys)


def oracle_suite(
    sys: FactorSystem, samples: int, seed: int, max_level: int = 6, max_length: int = 16
) -> dict:
    """reduce against the rewriting oracle on random words."""
    rng = random.Random(seed)
    tally = _Tally("oracle", sys)
    for _ in range(samples):
        u = random_word(sys, rng, max_level, max_length)
        # half the time v is a rewrite of u, so the eq ⟺ identity check sees both outcomes
        if rng.random() < 0.5:
            v = padded_word(reduce(u, sys), sys, rng, max_level)
        else:
            v = random_word(sys, rng, max_level, max_length)
        tally.record(_agrees_with_oracle(u, v, sys), lambda: format_word(u, sys))
    return tally.report()


def padded_word(g: GroupElement, sys: FactorSystem, rng: random.Random, max_level: int) -> Word:
    """Canonical word of g with a cancelling pair x·x⁻¹ spliced in at random."""
    word = list(to_word(g))
    lvl = rng.randint(0, max_level)
    x = sys.sample(lvl, rng)
    at = rng.randint(0, len(word))
    word[at:at] = [Syllable(lvl, x), Syllable(lvl, sys.factor_inv(lvl, x))]
    return tuple(word)


def default_alphabet(sys: FactorSystem) -> tuple[Syllable, ...]:
    """Six fixed letters spanning levels 0..2."""
    if sys.kind == "cyclic":
        return tuple(
            Syllable(lvl, x % sys.modulus)
            for lvl, x in ((0, 1), (0, 2), (1, 1), (1, 3), (2, 1), (2, 4))
        )
    letters = []
    for lvl, x in ((0, sys.nonbase_elem(0)), (1, sys.escape_elem(0)), (2, sys.escape_elem(1))):
        letters += [Syllable(lvl, x), Syllable(lvl, sys.factor_inv(lvl, x))]
    return tuple(letters)


def exhaustive_suite(sys: FactorSystem, max_length: int = 4) -> dict:
    """Every word of length ≤ max_length over the fixed alphabet."""
    alphabet = default_alphabet(sys)
    tally = _Tally("exhaustive", sys)
    previous: Word = ()
    for length in range(max_length + 1):
        for letters in itertools.product(alphabet, repeat=length):
            u = tuple(letters)
            tally.record(_agrees_with_oracle(u, previous, sys), lambda: format_word(u, sys))
            previous = u
    return tally.report()


def centrality_suite(sys: FactorSystem, samples: int, seed: int, max_level: int = 6) -> dict:
    """[g, z] = id for z ∈ Bₙ and level(g) ≤ n+1."""
    rng = random.Random(seed)
    tally = _Tally("centrality", sys)
    for _ in range(samples):
        n = rng.randint(0, max_level)
        g = random_element(sys, rng, n + 1, 8)
        z = sys.sample_base(n, rng)
        tally.record(
            centrality_check(g, n, z, sys),
            lambda: f"n={n} g={format_element(g, sys)} z={sys.format_literal(z)}",
        )
    return tally.report()


def homomorphism_suite(
    sys: FactorSystem,
    samples: int,
    seed: int,
    hom: LevelwiseHom | None = None,
    max_level: int = 6,
    max_length: int = 16,
) -> dict:
    """φ (and ψ where defined) against products, factor inclusions and derived witnesses."""
    rng = random.Random(seed)
    hom = hom or make_hom(sys, seed)
    add = hom.target.add
    tally = _Tally("homomorphism", sys)

    for _ in range(samples):
        g = random_element(sys, rng, max_level, max_length)
        h = random_element(sys, rng, max_level, max_length)
        gh = mul(g, h, sys)
        ok = phi_eval(gh, hom) == add(phi_eval(g, hom), phi_eval(h, hom))
        if ok and hom.embed is not None:
            ok = psi_eval(gh, hom) == mat_mul(psi_eval(g, hom), psi_eval(h, hom))
        tally.record(ok, lambda: f"g={format_element(g, sys)} h={format_element(h, sys)}")

    per_level = max(1, samples // (max_level + 1))
    for n in range(max_level + 1):
        for _ in range(per_level):
            x = sys.sample(n, rng)
            tally.record(
                phi_eval(syllable_element(n, x, sys), hom) == hom.maps(n, x),
                lambda: f"inclusion of {sys.format_literal(x)} at level {n}",
            )

    for d in range(1, 4):
        cert = derived_escape(d, max_level, sys)
        tally.record(
            in_kernel(cert.result, hom),
            lambda: f"derived witness d={d} outside the kernel",
        )
    return tally.report()


def lemma21_suite(
    sys: FactorSystem, samples: int, seed: int, max_level: int = 6, max_length: int = 16
) -> dict:
    report = asdict(lemma21_batch(sys, samples, seed, max_level, max_length))
    return {
        "suite": "lemma21",
        "instance": report["instance"],
        "samples": report["samples"],
        "failures": report["failures"],
        "examples": report["examples"],
    }


def instance_suite(sys: FactorSystem, samples: int, seed: int, max_level: int = 6) -> dict:
    return check_contract(sys, samples=samples, seed=seed, levels=max_level)


def run_suite(name: str, sys: FactorSystem, samples: int, seed: int, **options: Any) -> dict:
    """Dispatch by suite name; unknown names raise ValueError."""
    max_level = options.get("max_level", 6)
    max_length = options.get("max_length", 16)
    if name == "lemma21":
        return lemma21_suite(sys, samples, seed, max_level, max_length)
    if name == "axioms":
        return axiom_suite(sys, samples, seed, max_level, max_length)
    if name == "oracle":
        return oracle_suite(sys, samples, seed, max_level, max_length)
    if name == "exhaustive":
        return exhaustive_suite(sys, options.get("length", 4))
    if name == "instance":
        return instance_suite(sys, samples, seed, max_level)
    if name == "centrality":
        return centrality_suite(sys, samples, seed, max_level)
    if name == "homomorphism":
        return homomorphism_suite(sys, samples, seed, max_level=max_level, max_length=max_length)
    raise ValueError(f"unknown suite {name!r}; choose one of {', '.join(SUITES)}")
