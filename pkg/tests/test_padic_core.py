from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.errors import InvalidParams, LiteralError
from modules.padic_core import (
    IDENTITY,
    VALUATION_INF,
    PAdicRational,
    Prime,
    add,
    coset_rep,
    in_power_lattice,
    mat_mul,
    neg,
    parse_padic,
    unipotent,
    valuation,
)


def q(text, p=5):
    return parse_padic(text, p)


def test_prime_rejects_composites():
    assert Prime(5).p == 5
    for bad in (0, 1, 4, 9, -3):
        with pytest.raises(InvalidParams):
            Prime(bad)


def test_addition_clears_denominators():
    assert q("2/5") + q("3/5") == q("1")
    assert q("7/25") + q("3/5") == q("22/25")
    assert q("7/25") + PAdicRational.zero(5) == q("7/25")
    assert str(q("7/25") + q("3/5")) == "22/25"


def test_normalization_is_unique():
    assert PAdicRational.make(10, 1, 5) == PAdicRational.integer(2, 5)
    assert PAdicRational.make(3, -2, 5) == PAdicRational.integer(75, 5)
    with pytest.raises(ValueError):
        PAdicRational(10, 1, 5)


def test_prime_mismatch():
    with pytest.raises(ValueError, match="Prime mismatch"):
        PAdicRational.integer(1, 5) + PAdicRational.integer(1, 3)


@pytest.mark.parametrize(
    "text, expected",
    [("25", 2), ("1/5", -1), ("3", 0), ("-50", 2), ("7/125", -3)],
)
def test_valuation(text, expected):
    assert valuation(q(text)) == expected


def test_valuation_of_zero_is_infinite():
    assert valuation(q("0")) == VALUATION_INF
    assert in_power_lattice(q("0"), 40)


@pytest.mark.parametrize(
    "x, n, rep, b",
    [
        ("7/5", 0, "2/5", "1"),
        ("7/5", 1, "7/5", "0"),
        ("-1", 1, "4", "-5"),
        ("-1/5", 0, "4/5", "-1"),
        ("26", 2, "1", "25"),
    ],
)
def test_coset_rep(x, n, rep, b):
    assert coset_rep(q(x), n) == (q(rep), q(b))


def test_coset_rep_lands_in_lattice():
    for num in range(-40, 41):
        for k in range(3):
            x = PAdicRational.make(num, k, 5)
            for n in range(3):
                rep, b = coset_rep(x, n)
                assert rep + b == x
                assert in_power_lattice(b, n)
                assert 0 <= rep.to_fraction() < 5**n


def test_parse_rejects_foreign_denominators():
    with pytest.raises(LiteralError):
        q("1/3")
    with pytest.raises(LiteralError):
        q("1/0")
    with pytest.raises(LiteralError):
        q("abc")
    with pytest.raises(LiteralError):
        q("-12/10")
    assert q("-10/25") == PAdicRational.make(-2, 1, 5)


def test_unipotent_matrices():
    assert unipotent(q("0")) == IDENTITY
    assert mat_mul(unipotent(q("1/5")), unipotent(q("2/5"))) == unipotent(q("3/5"))
    a = unipotent(q("7/25"))
    assert mat_mul(IDENTITY, a) == a
    assert a.is_unipotent() and a.det() == 1
    assert a.b == Fraction(7, 25)
    assert a.rows() == [["1", "7/25"], ["0", "1"]]


# ─── Randomized laws ─────────────────────────────────────────────

PRIMES = [2, 5]


def padics(p):
    return st.builds(
        PAdicRational.make, st.integers(-10**6, 10**6), st.integers(0, 4), st.just(p)
    )


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_additive_group_laws(p, data):
    x, y, z = (data.draw(padics(p)) for _ in range(3))
    zero = PAdicRational.zero(p)
    assert add(add(x, y), z) == add(x, add(y, z))
    assert add(x, y) == add(y, x)
    assert add(x, zero) == x
    assert add(x, neg(x)) == zero
    assert neg(neg(x)) == x


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_valuation_is_ultrametric(p, data):
    x, y = data.draw(padics(p)), data.draw(padics(p))
    vx, vy = valuation(x), valuation(y)
    assert valuation(add(x, y)) >= min(vx, vy)
    if vx != vy:
        assert valuation(add(x, y)) == min(vx, vy)


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_coset_rep_is_idempotent(p, data):
    x = data.draw(padics(p))
    n = data.draw(st.integers(0, 3))
    rep, b = coset_rep(x, n)
    assert add(rep, b) == x
    assert coset_rep(rep, n) == (rep, PAdicRational.zero(p))


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_unipotent_is_additive(p, data):
    z, w = data.draw(padics(p)), data.draw(padics(p))
    assert mat_mul(unipotent(z), unipotent(w)) == unipotent(add(z, w))
    assert mat_mul(unipotent(z), unipotent(neg(z))) == IDENTITY
