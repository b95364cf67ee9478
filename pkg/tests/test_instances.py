import random

import pytest

from modules.errors import InvalidParams, LiteralError
from modules.instances import (
    DensePadicInstance,
    FiniteCyclicInstance,
    HeisenbergInstance,
    check_contract,
    make_instance,
)
from modules.padic_core import parse_padic


def test_factory_builds_each_kind():
    assert isinstance(make_instance("dense", 5), DensePadicInstance)
    assert isinstance(make_instance("heisenberg", 3), HeisenbergInstance)
    assert isinstance(make_instance("cyclic", 2, exponent=3), FiniteCyclicInstance)


@pytest.mark.parametrize(
    "kind, p, exponent",
    [("dense", 4, 3), ("heisenberg", 1, 3), ("cyclic", 2, 1), ("klein", 5, 3)],
)
def test_factory_rejects_bad_parameters(kind, p, exponent):
    with pytest.raises(InvalidParams):
        make_instance(kind, p, exponent=exponent)


def test_unshifted_cyclic_chain_is_rejected():
    # B_0 = H_0 breaks the amalgam axioms
    with pytest.raises(InvalidParams, match="B_0"):
        FiniteCyclicInstance(2, 3, shift=0)


def test_dense_split(dense):
    q = lambda s: parse_padic(s, 5)  # noqa: E731
    assert dense.split(1, q("7/5")) == (q("2/5"), q("1"))
    assert dense.split_own(0, q("7/5")) == (q("2/5"), q("1"))
    assert dense.split_chain(0, 2, q("-1")) == (q("24"), q("-25"))
    assert dense.split_chain(1, 1, q("5")) == (q("0"), q("5"))


def test_cyclic_chain(cyclic):
    assert [x for x in range(8) if cyclic.in_base(0, x)] == [0, 2, 4, 6]
    assert [x for x in range(8) if cyclic.in_base(1, x)] == [0, 4]
    for n in range(2, 6):
        assert [x for x in range(8) if cyclic.in_base(n, x)] == [0]


@pytest.mark.parametrize(
    "kind, p, x, expected",
    [
        ("dense", 5, "25", 3),
        ("dense", 5, "1/5", 0),
        ("dense", 5, "3", 1),
        ("heisenberg", 3, "(0,0,9)", 3),
        ("heisenberg", 3, "(1,0,0)", 0),
        ("cyclic", 2, "4", 2),
        ("cyclic", 2, "2", 1),
    ],
)
def test_base_escape_level(kind, p, x, expected):
    sys = make_instance(kind, p, exponent=3)
    value = sys.parse_literal(x)
    n = sys.base_escape_level(value)
    assert n == expected
    assert not sys.in_base(n, value)
    assert n == 0 or sys.in_base(n - 1, value)


def test_heisenberg_group_law(heisenberg):
    a, b = (1, 2, 3), (4, 5, 6)
    assert heisenberg.factor_mul(0, a, b) == (5, 7, 14)
    assert heisenberg.factor_mul(0, a, heisenberg.factor_inv(0, a)) == (0, 0, 0)
    assert heisenberg.factor_mul(0, a, b) != heisenberg.factor_mul(0, b, a)
    rep, b = heisenberg.split(2, (1, 1, 7))
    assert rep == (1, 1, 1) and b == (0, 0, 6)


@pytest.mark.parametrize(
    "kind, p, text, expected",
    [
        ("heisenberg", 3, "(1,2,3)", (1, 2, 3)),
        ("heisenberg", 3, " -1 , 0 , 4 ", (-1, 0, 4)),
        ("cyclic", 2, "9", 1),
        ("cyclic", 2, "-1", 7),
    ],
)
def test_literals(kind, p, text, expected):
    sys = make_instance(kind, p, exponent=3)
    assert sys.parse_literal(text) == expected
    assert sys.parse_literal(sys.format_literal(expected)) == expected


@pytest.mark.parametrize("kind, text", [("heisenberg", "1/5"), ("cyclic", "(1,0,0)"), ("dense", "1/3")])
def test_bad_literals(kind, text):
    sys = make_instance(kind, 5, exponent=3)
    with pytest.raises(LiteralError):
        sys.parse_literal(text)


@pytest.mark.parametrize(
    "kind, p", [("dense", 2), ("dense", 3), ("dense", 5), ("heisenberg", 3), ("cyclic", 2)]
)
def test_contract_holds(kind, p):
    report = check_contract(make_instance(kind, p, exponent=3), samples=50, seed=2)
    assert report["failures"] == 0, report["examples"]
    assert report["suite"] == "instance"


def test_samplers_stay_in_range(cyclic, dense):
    rng = random.Random(0)
    for n in range(5):
        assert all(0 <= cyclic.sample(n, rng) < 8 for _ in range(50))
        assert all(dense.in_base(n, dense.sample_base(n, rng)) for _ in range(50))
