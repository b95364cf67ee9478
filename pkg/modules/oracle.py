"""Independent rewriting oracle for the normal form.

Works on a flat syllable list and applies local rules until none fires:

    drop      (i, id)                       -> ε
    lower     (i, x), x ∈ B_{i−1}          -> (i−1, x)
    merge     (i, x)(i, y)                  -> (i, x·y)
    absorb    (0, b)(j, y), b ∈ B_{j−1}     -> (j, y)(0, b)

Base elements only ever travel rightward. The irreducible word is then
split into maximal blocks per level and assembled into the nested form
with its own coset bookkeeping. Nothing here calls the reduction engine
in amalgam_core; the two are meant to be cross-checked.
"""

from typing import Any

from modules.amalgam_core import (
    LEFT,
    RIGHT,
    Alt,
    Base,
    CanonicalForm,
    FactorSystem,
    GroupElement,
    Letter,
    Word,
)
from modules.errors import UnsupportedLevel


def _rewrite_once(syls: list[tuple[int, Any]], sys: FactorSystem) -> bool:
    for i, (lvl, x) in enumerate(syls):
        if sys.is_identity(lvl, x):
            del syls[i]
            return True
        if lvl >= 1 and sys.in_base(lvl - 1, x):
            syls[i] = (lvl - 1, x)
            return True
    for i in range(len(syls) - 1):
        (a, x), (b, y) = syls[i], syls[i + 1]
        if a == b:
            syls[i : i + 2] = [(a, sys.factor_mul(a, x, y))]
            return True
        if a == 0 and b >= 1 and sys.in_base(b - 1, x):
            syls[i], syls[i + 1] = syls[i + 1], syls[i]
            return True
    return False


def rewrite_to_fixpoint(word: Word, sys: FactorSystem) -> list[tuple[int, Any]]:
    syls = [(s.level, s.elem) for s in word]
    while _rewrite_once(syls, sys):
        pass
    return syls


def _modulo_base(cf: CanonicalForm, n: int, sys: FactorSystem) -> tuple[CanonicalForm, Any]:
    """Representative of cf·B_{n−1} plus the B_{n−1} part peeled off."""
    if isinstance(cf, Base):
        coarse, rest = sys.split_own(0, cf.value)
        fine, deep = sys.split_chain(0, n - 1, rest)
        return Base(sys.factor_mul(0, coarse, fine)), deep
    kept, peeled = sys.split_chain(cf.level - 1, n - 1, cf.tail)
    return Alt(cf.level, cf.letters, kept), peeled


def _assemble(syls: list[tuple[int, Any]], sys: FactorSystem) -> CanonicalForm:
    if not syls:
        return Base(sys.factor_id(0))
    top = max(lvl for lvl, _ in syls)
    if top == 0:
        value = sys.factor_id(0)
        for _, x in syls:
            value = sys.factor_mul(0, value, x)
        return Base(value)

    blocks: list[tuple[str, Any]] = []
    pending: list[tuple[int, Any]] = []
    for lvl, x in syls:
        if lvl == top:
            if pending:
                blocks.append((LEFT, pending))
                pending = []
            blocks.append((RIGHT, x))
        else:
            pending.append((lvl, x))
    if pending:
        blocks.append((LEFT, pending))

    letters: list[Letter] = []
    tail = sys.factor_id(0)
    for side, payload in blocks:
        if side == RIGHT:
            rep, b = sys.split(top, payload)
            letters.append(Letter(RIGHT, rep))
        else:
            inner = _assemble(payload, sys)
            if isinstance(inner, Base) and sys.in_base(top - 1, inner.value):
                tail = sys.factor_mul(0, tail, inner.value)
                continue
            rep, b = _modulo_base(inner, top, sys)
            letters.append(Letter(LEFT, rep))
        tail = sys.factor_mul(0, tail, b)
    return Alt(top, tuple(letters), tail)


def naive_reduce(word: Word, sys: FactorSystem) -> GroupElement:
    for s in word:
        if s.level < 0 or (sys.max_level is not None and s.level > sys.max_level):
            raise UnsupportedLevel(f"level {s.level} outside the instance range")
    cf = _assemble(rewrite_to_fixpoint(word, sys), sys)
    return GroupElement(cf, 0 if isinstance(cf, Base) else cf.level)
