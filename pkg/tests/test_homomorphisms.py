import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.amalgam_core import Syllable, identity, mul, reduce, syllable_element
from modules.errors import IncompatibleHom, PreconditionViolated
from modules.homomorphisms import (
    AbelianTarget,
    LevelwiseHom,
    in_kernel,
    make_hom,
    phi_eval,
    psi_eval,
)
from modules.instances import make_instance
from modules.padic_core import mat_mul, parse_padic, unipotent
from modules.witnesses import derived_escape

DENSE = make_instance("dense", 5)
HEISENBERG = make_instance("heisenberg", 3)
CYCLIC = make_instance("cyclic", 2, exponent=3)


def words(sys, max_level=4, max_size=10):
    syllable = st.tuples(
        st.integers(0, max_level), st.randoms(use_true_random=False)
    ).map(lambda t: Syllable(t[0], sys.sample(t[0], t[1])))
    return st.lists(syllable, max_size=max_size).map(tuple)


def test_kernel_examples(dense, el):
    hom = make_hom(dense)
    assert in_kernel(identity(dense), hom)
    assert not in_kernel(el("h0(1/5)", dense), hom)
    assert phi_eval(el("[h1(1/5), h0(1/5)]", dense), hom) == parse_padic("0", 5)


def test_phi_is_identity_on_each_factor(dense):
    hom = make_hom(dense)
    for n in range(5):
        x = parse_padic("7/25", 5)
        assert phi_eval(syllable_element(n, x, dense), hom) == x


def test_psi_is_unipotent(dense, el):
    hom = make_hom(dense)
    m = psi_eval(el("h1(7/5) h0(1/5)", dense), hom)
    assert m == unipotent(parse_padic("8/5", 5))
    assert m.is_unipotent()


def test_heisenberg_phi_kills_the_centre(heisenberg, el):
    hom = make_hom(heisenberg)
    assert in_kernel(el("h3((0,0,5)) h1((0,0,-2))", heisenberg), hom)
    assert phi_eval(el("h2((1,2,0))", heisenberg), hom) == parse_padic("3", 3)


def test_cyclic_has_no_matrix_embedding(cyclic, el):
    hom = make_hom(cyclic)
    assert phi_eval(el("h1(3) h2(7)", cyclic), hom) == 2
    with pytest.raises(PreconditionViolated):
        psi_eval(el("h1(3)", cyclic), hom)


def test_incompatible_family_is_rejected(dense):
    target = AbelianTarget("Lambda", parse_padic("0", 5), lambda x, y: x + y)
    # doubles on odd levels only, so phi_0 and phi_1 disagree on B_0
    bad = LevelwiseHom(target, lambda n, x: x + x if n % 2 else x)
    with pytest.raises(IncompatibleHom):
        bad.check_compatible(dense, random.Random(0))


@pytest.mark.parametrize("sys", [DENSE, HEISENBERG, CYCLIC], ids=["dense", "heisenberg", "cyclic"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_phi_is_a_homomorphism(sys, data):
    hom = make_hom(sys)
    g, h = reduce(data.draw(words(sys)), sys), reduce(data.draw(words(sys)), sys)
    assert phi_eval(mul(g, h, sys), hom) == hom.target.add(phi_eval(g, hom), phi_eval(h, hom))


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_psi_is_multiplicative(data):
    hom = make_hom(DENSE)
    g, h = reduce(data.draw(words(DENSE)), DENSE), reduce(data.draw(words(DENSE)), DENSE)
    assert psi_eval(mul(g, h, DENSE), hom) == mat_mul(psi_eval(g, hom), psi_eval(h, hom))


@pytest.mark.parametrize("sys", [DENSE, HEISENBERG, CYCLIC], ids=["dense", "heisenberg", "cyclic"])
def test_derived_witnesses_lie_in_the_kernel(sys):
    hom = make_hom(sys)
    for d in range(1, 4):
        assert in_kernel(derived_escape(d, 2, sys).result, hom)
