"""The homomorphism φ: G → T given by compatible maps φₙ: Hₙ → T.

φ is evaluated letterwise on canonical forms; the universal property of
each amalgam makes that well defined once the φₙ agree on every Bₙ.
ψ = unipotent ∘ φ lands in upper unitriangular 2×2 matrices.
"""

import random
from dataclasses import dataclass
from typing import Any, Callable

from modules.amalgam_core import (
    RIGHT,
    Base,
    CanonicalForm,
    FactorSystem,
    GroupElement,
)
from modules.errors import IncompatibleHom, PreconditionViolated
from modules.padic_core import Mat2, PAdicRational, unipotent


@dataclass(frozen=True)
class AbelianTarget:
    name: str
    zero: Any
    add: Callable[[Any, Any], Any]
    format: Callable[[Any], str] = str


@dataclass(frozen=True)
class LevelwiseHom:
    target: AbelianTarget
    maps: Callable[[int, Any], Any]
    # into Λ, for ψ; None when the target has no matrix embedding
    embed: Callable[[Any], PAdicRational] | None = None

    def check_compatible(
        self, sys: FactorSystem, rng: random.Random, levels: int = 6, samples: int = 32
    ):
        """φₙ and φ_{n+1} must agree on sampled elements of Bₙ."""
        for n in range(levels):
            for _ in range(samples):
                b = sys.sample_base(n, rng)
                if self.maps(n, b) != self.maps(n + 1, b):
                    raise IncompatibleHom(
                        f"phi_{n} and phi_{n + 1} disagree on {sys.format_literal(b)} in B_{n}"
                    )


def make_hom(sys: FactorSystem, seed: int = 0) -> LevelwiseHom:
    """Default compatible family for each shipped instance."""
    p = sys.prime
    if sys.kind == "dense":
        target = AbelianTarget("Lambda", PAdicRational.zero(p), lambda x, y: x + y)
        hom = LevelwiseHom(target, lambda n, x: x, embed=lambda t: t)
    elif sys.kind == "heisenberg":
        target = AbelianTarget("Lambda", PAdicRational.zero(p), lambda x, y: x + y)
        hom = LevelwiseHom(
            target,
            lambda n, a: PAdicRational.integer(a[0] + a[1], p),
            embed=lambda t: t,
        )
    elif sys.kind == "cyclic":
        modulus = sys.modulus
        target = AbelianTarget(f"Z/{modulus}", 0, lambda x, y: (x + y) % modulus)
        hom = LevelwiseHom(target, lambda n, x: x % modulus)
    else:
        raise IncompatibleHom(f"no default homomorphism for instance {sys.kind!r}")
    hom.check_compatible(sys, random.Random(seed))
    return hom


def _phi_form(cf: CanonicalForm, hom: LevelwiseHom) -> Any:
    if isinstance(cf, Base):
        return hom.maps(0, cf.value)
    total = hom.target.zero
    for letter in cf.letters:
        if letter.side == RIGHT:
            image = hom.maps(cf.level, letter.value)
        else:
            image = _phi_form(letter.value, hom)
        total = hom.target.add(total, image)
    return hom.target.add(total, hom.maps(0, cf.tail))


def phi_eval(g: GroupElement, hom: LevelwiseHom) -> Any:
    return _phi_form(g.cf, hom)


def in_kernel(g: GroupElement, hom: LevelwiseHom) -> bool:
    return phi_eval(g, hom) == hom.target.zero


def psi_eval(g: GroupElement, hom: LevelwiseHom) -> Mat2:
    if hom.embed is None:
        raise PreconditionViolated(
            f"target {hom.target.name} does not embed in the matrix entries",
            hypothesis="target embeds in Q",
        )
    return unipotent(hom.embed(phi_eval(g, hom)))
