import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.amalgam_core import (
    LEFT,
    RIGHT,
    Alt,
    Base,
    Letter,
    Syllable,
    centrality_check,
    commutator,
    element_of_level,
    eq,
    identity,
    inv,
    is_identity,
    mul,
    reduce,
    syllable_element,
    to_word,
)
from modules.errors import PreconditionViolated, UnsupportedLevel
from modules.instances import make_instance
from modules.padic_core import parse_padic

INSTANCES = [
    make_instance("dense", 5),
    make_instance("dense", 2),
    make_instance("dense", 3),
    make_instance("heisenberg", 3),
    make_instance("cyclic", 2, exponent=3),
]
IDS = ["dense5", "dense2", "dense3", "heisenberg3", "cyclic2^3"]


def words(sys, max_level=4, max_size=8):
    syllable = st.tuples(
        st.integers(0, max_level), st.randoms(use_true_random=False)
    ).map(lambda t: Syllable(t[0], sys.sample(t[0], t[1])))
    return st.lists(syllable, max_size=max_size).map(tuple)


def q(text):
    return parse_padic(text, 5)


# ─── Worked examples (dense, p = 5) ──────────────────────────────


def test_single_factor_sum(dense, el):
    g = el("h0(2/5) h0(3/5)", dense)
    assert g.cf == Base(q("1")) and g.level == 0


def test_right_letter_uses_fixed_transversal(dense, el):
    g = el("h1(7/5)", dense)
    assert g.cf == Alt(1, (Letter(RIGHT, q("2/5")),), q("1"))
    assert g.level == 1


def test_base_member_is_identified_across_levels(dense, el):
    g = el("h1(2) h0(3)", dense)
    assert g.cf == Base(q("5")) and g.level == 0


def test_alternating_word_is_irreducible(dense, el):
    g = el("h1(1/5) h0(1/5) h1(-1/5) h0(-1/5)", dense)
    # -1/5 = 4/5 - 1 under the [0, 1) transversal, twice
    assert g.cf == Alt(
        1,
        (
            Letter(RIGHT, q("1/5")),
            Letter(LEFT, Base(q("1/5"))),
            Letter(RIGHT, q("4/5")),
            Letter(LEFT, Base(q("4/5"))),
        ),
        q("-2"),
    )
    assert not is_identity(g, dense)


def test_inverse_reverses_syllables(dense, el):
    assert eq(inv(el("h1(1/5) h0(2)", dense), dense), el("h0(-2) h1(-1/5)", dense))


@pytest.mark.parametrize(
    "src, expected",
    [("h0(7/25)", 0), ("h2(25)", 0), ("h3(1/5)", 3), ("h4(125) h1(1/5)", 1), ("h4(5)", 4), ("h2(1) h2(-1)", 0)],
)
def test_levels(dense, el, src, expected):
    assert el(src, dense).level == expected


def test_empty_word_is_identity(dense):
    assert reduce((), dense) == identity(dense)


def test_negative_level_is_rejected(dense):
    with pytest.raises(UnsupportedLevel):
        reduce((Syllable(-1, q("1")),), dense)


def test_nested_left_letter(dense, el):
    # level-1 element embedded as a single Left letter of a level-2 form
    g = el("h2(1) h1(1/5) h2(-1)", dense)
    assert g.level == 2
    assert [letter.side for letter in g.cf.letters] == [RIGHT, LEFT, RIGHT]
    assert g.cf.letters[1].value.level == 1


# ─── Centrality ──────────────────────────────────────────────────


def test_centrality_examples(dense, el):
    assert centrality_check(identity(dense), 0, q("3"), dense)
    assert centrality_check(el("h1(1/5)", dense), 0, q("1"), dense)


def test_centrality_preconditions(dense, el):
    with pytest.raises(PreconditionViolated) as info:
        centrality_check(el("h2(1)", dense), 0, q("1"), dense)
    assert info.value.hypothesis == "level(g) <= n+1"
    with pytest.raises(PreconditionViolated) as info:
        centrality_check(identity(dense), 1, q("1"), dense)
    assert info.value.hypothesis == "z in B_n"


# ─── Group laws on random words ──────────────────────────────────


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_group_axioms(sys, data):
    a, b, c = (reduce(data.draw(words(sys)), sys) for _ in range(3))
    e = identity(sys)
    assert eq(mul(mul(a, b, sys), c, sys), mul(a, mul(b, c, sys), sys))
    assert eq(mul(a, e, sys), a) and eq(mul(e, a, sys), a)
    assert is_identity(mul(a, inv(a, sys), sys), sys)
    assert is_identity(mul(inv(a, sys), a, sys), sys)


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_reduce_is_a_homomorphism_from_words(sys, data):
    u, v = data.draw(words(sys)), data.draw(words(sys))
    assert eq(reduce(u + v, sys), mul(reduce(u, sys), reduce(v, sys), sys))


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_filtration_monotonicity(sys, data):
    g, h = reduce(data.draw(words(sys)), sys), reduce(data.draw(words(sys)), sys)
    assert mul(g, h, sys).level <= max(g.level, h.level)
    assert inv(g, sys).level == g.level


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_canonical_word_round_trip(sys, data):
    g = reduce(data.draw(words(sys)), sys)
    assert reduce(to_word(g), sys) == g


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_eq_matches_quotient_test(sys, data):
    g = reduce(data.draw(words(sys, max_size=4)), sys)
    h = reduce(data.draw(words(sys, max_size=4)), sys)
    assert eq(g, h) == is_identity(mul(g, inv(h, sys), sys), sys)


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
def test_base_identification(sys):
    rng = random.Random(11)
    for n in range(1, 6):
        for _ in range(20):
            b = sys.sample_base(n - 1, rng)
            assert syllable_element(n, b, sys) == syllable_element(n - 1, b, sys)


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
def test_base_is_central_in_the_next_level(sys):
    rng = random.Random(5)
    for n in range(4):
        for _ in range(20):
            levels = [rng.randint(0, n + 1) for _ in range(5)]
            g = reduce(tuple(Syllable(lvl, sys.sample(lvl, rng)) for lvl in levels), sys)
            z = syllable_element(0, sys.sample_base(n, rng), sys)
            assert is_identity(commutator(g, z, sys), sys)


@pytest.mark.parametrize("sys", INSTANCES, ids=IDS)
def test_element_of_level_hits_target(sys):
    rng = random.Random(3)
    for target in range(5):
        g = element_of_level(sys, rng, target, 8)
        assert g.level == target
