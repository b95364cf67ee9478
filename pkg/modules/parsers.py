"""Word-expression grammar and text formatting of group elements.

Grammar (whitespace-insensitive):

    expr := term {term}
    term := atom ["^-1"] | "[" expr "," expr "]" | "(" expr ")" ["^-1"]
    atom := "h" NAT "(" literal ")"

Literals are parsed in a second pass by the instance, so a bad literal
reports its own position instead of a generic grammar failure.
"""

from dataclasses import dataclass
from typing import Any

import pyparsing as pp

from modules.amalgam_core import (
    LEFT,
    Base,
    CanonicalForm,
    FactorSystem,
    GroupElement,
    Syllable,
    Word,
    invert_word,
    to_word,
)
from modules.errors import LiteralError, WordSyntaxError

# ─── Abstract syntax ─────────────────────────────────────────────


@dataclass(frozen=True)
class Atom:
    level: int
    literal: str
    position: int


@dataclass(frozen=True)
class Inverse:
    body: Any


@dataclass(frozen=True)
class Commutator:
    left: Any
    right: Any


@dataclass(frozen=True)
class Product:
    terms: tuple


WordExpr = Atom | Inverse | Commutator | Product

_LITERAL_RE = (
    r"\(\s*[-+]?\d+\s*,\s*[-+]?\d+\s*,\s*[-+]?\d+\s*\)"
    r"|[-+]?\d+\s*,\s*[-+]?\d+\s*,\s*[-+]?\d+"
    r"|[-+]?\d+(?:\s*/\s*\d+)?"
)


def _make_grammar() -> pp.ParserElement:
    lpar, rpar = pp.Suppress("("), pp.Suppress(")")
    lbrack, rbrack, comma = pp.Suppress("["), pp.Suppress("]"), pp.Suppress(",")
    inverse = pp.Regex(r"\^\s*-\s*1")

    def make_atom(s, loc, toks):
        return Atom(int(toks[0]), toks[1], loc)

    def maybe_inverse(toks):
        return Inverse(toks[0]) if len(toks) > 1 else toks[0]

    expr = pp.Forward()
    atom = (pp.Suppress("h") + pp.Word(pp.nums) + lpar + pp.Regex(_LITERAL_RE) + rpar)
    atom.set_parse_action(make_atom)

    atom_term = (atom + pp.Opt(inverse)).set_parse_action(maybe_inverse)
    group_term = (lpar + expr + rpar + pp.Opt(inverse)).set_parse_action(maybe_inverse)
    comm_term = (lbrack + expr + comma + expr + rbrack).set_parse_action(
        lambda toks: Commutator(toks[0], toks[1])
    )
    term = atom_term | comm_term | group_term
    expr <<= pp.OneOrMore(term).set_parse_action(lambda toks: Product(tuple(toks)))
    return expr


_GRAMMAR = _make_grammar()


def parse(src: str) -> WordExpr:
    """Parse src into a WordExpr; literals are left as text."""
    try:
        return _GRAMMAR.parse_string(src, parse_all=True)[0]
    except pp.ParseBaseException as e:
        raise WordSyntaxError(f"cannot parse {src!r}: {e.msg}", position=e.loc) from e


def expand(expr: WordExpr, sys: FactorSystem) -> Word:
    """Flatten a WordExpr into syllables, converting literals."""
    if isinstance(expr, Atom):
        try:
            value = sys.parse_literal(expr.literal)
        except LiteralError as e:
            raise LiteralError(f"{e} (at position {expr.position})") from e
        return (Syllable(expr.level, value),)
    if isinstance(expr, Inverse):
        return invert_word(expand(expr.body, sys), sys)
    if isinstance(expr, Commutator):
        a, b = expand(expr.left, sys), expand(expr.right, sys)
        return a + b + invert_word(a, sys) + invert_word(b, sys)
    out: Word = ()
    for term in expr.terms:
        out += expand(term, sys)
    return out


def parse_word(src: str, sys: FactorSystem) -> Word:
    return expand(parse(src), sys)


# ─── Formatting ──────────────────────────────────────────────────


def format_atom(level: int, value: Any, sys: FactorSystem) -> str:
    return f"h{level}({sys.format_literal(value)})"


def format_word(word: Word, sys: FactorSystem) -> str:
    """Word expression for a syllable sequence; the empty word prints as h0(id)."""
    parts = [
        format_atom(s.level, s.elem, sys)
        for s in word
        if not sys.is_identity(s.level, s.elem)
    ]
    if not parts:
        return format_atom(0, sys.factor_id(0), sys)
    return " ".join(parts)


def format_element(g: GroupElement, sys: FactorSystem) -> str:
    """Word expression that re-parses to g."""
    return format_word(to_word(g), sys)


def format_form(cf: CanonicalForm, sys: FactorSystem) -> str:
    """Pretty canonical form, e.g. ``Alt(1; R:2/5; tail 1)``."""
    if isinstance(cf, Base):
        return f"Base({sys.format_literal(cf.value)})"
    letters = ", ".join(
        f"L:{_format_left(letter.value, sys)}"
        if letter.side == LEFT
        else f"R:{sys.format_literal(letter.value)}"
        for letter in cf.letters
    )
    return f"Alt({cf.level}; {letters}; tail {sys.format_literal(cf.tail)})"


def _format_left(cf: CanonicalForm, sys: FactorSystem) -> str:
    if isinstance(cf, Base):
        return sys.format_literal(cf.value)
    return format_form(cf, sys)
