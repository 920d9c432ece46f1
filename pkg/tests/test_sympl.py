import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hforge.cohom import extension_from_cocycle
from hforge.corpus import d4_form, freenil3, perturbed
from hforge.errors import InputError
from hforge.finab import AbSubgroup, FinAbGroup, enumerate_subgroups, subgroup_generated
from hforge.forms import product_form
from hforge.heis import HeisGroup
from hforge.sympl import (AlternatingForm, all_alternating_forms, classify, closed_lattice, closure,
                          correspondence_check, galois_report, lagrangian_bisections,
                          lagrangian_extremality, minimal_coisotropic_search, orthogonal, phase_form,
                          random_alternating_form)

K4 = FinAbGroup((2, 2))


def sub(p, *elems):
    return subgroup_generated(p, elems)


def brute_perp(w, s):
    return AbSubgroup(w.p, [z for z in range(w.p.size) if all(w.table[a, z] == 0 for a in s.ids)])


@pytest.fixture(scope="module")
def w_d4():
    return phase_form(d4_form())


def test_phase_form_of_d4(w_d4):
    # omega((x, xi), (y, eta)) = xi y - eta x over Z2
    p = w_d4.p
    for (a, b) in itertools.product(p.elements(), repeat=2):
        assert w_d4.eval(a, b) == (((a[1] * b[0]) - (b[1] * a[0])) % 2,)


def test_orthogonal_examples(w_d4):
    p = w_d4.p
    assert orthogonal(w_d4, AbSubgroup.trivial(p)).order == 4
    g_axis = sub(p, (1, 0))
    assert orthogonal(w_d4, g_axis) == g_axis


def test_closure_examples(w_d4):
    p = w_d4.p
    for s in enumerate_subgroups(p):
        assert closure(w_d4, s) == s
    zero = AlternatingForm(K4, FinAbGroup((2,)), np.zeros((4, 4)))
    assert closure(zero, AbSubgroup.trivial(K4)).order == 4


def test_classify_examples(w_d4):
    p = w_d4.p
    assert classify(w_d4, sub(p, (1, 0))).lagrangian
    assert classify(w_d4, sub(p, (1, 1))).lagrangian
    whole = classify(w_d4, AbSubgroup.whole(p))
    assert whole.symplectic and whole.coisotropic and not whole.isotropic


def test_closed_lattice_examples(w_d4):
    lat = closed_lattice(w_d4)
    assert len(lat.nodes) == 5 and len(lat.covers) == 6
    zero = AlternatingForm(K4, FinAbGroup((2,)), np.zeros((4, 4)))
    assert [s.order for s in closed_lattice(zero).nodes] == [4]
    w4 = phase_form(product_form(4))
    twos = sub(w4.p, (2, 0), (0, 2))
    assert twos in closed_lattice(w4).nodes
    dot = lat.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 6


def test_lagrangian_bisections_examples(w_d4):
    p = w_d4.p
    pairs = {(a.ids, b.ids) for a, b in lagrangian_bisections(w_d4)}
    assert (sub(p, (1, 0)).ids, sub(p, (0, 1)).ids) in pairs
    assert (sub(p, (1, 1)).ids, sub(p, (1, 0)).ids) in pairs
    assert len(pairs) == 6
    zero = AlternatingForm(K4, FinAbGroup((2,)), np.zeros((4, 4)))
    assert lagrangian_bisections(zero) == []


def test_freenil3_has_no_bisections():
    omega, _ = freenil3()
    assert lagrangian_bisections(omega) == []
    # maximal isotropic subgroups have order 2
    iso = [s for s in enumerate_subgroups(omega.p) if classify(omega, s).isotropic]
    assert max(s.order for s in iso) == 2


def test_alternating_form_validation():
    with pytest.raises(InputError):
        AlternatingForm(FinAbGroup((2,)), FinAbGroup((2,)), [[1, 0], [0, 0]])
    with pytest.raises(InputError):
        AlternatingForm.from_json({"p": {"orders": [2]}, "torus": {"orders": [2]}, "table": [[[0]]]})


def test_alternating_form_counts():
    # alternating forms on Z2^2 -> Z2: one free value; on Z2^3 -> Z2: three
    assert len(list(all_alternating_forms(K4, FinAbGroup((2,))))) == 2
    assert len(list(all_alternating_forms(FinAbGroup((2, 2, 2)), FinAbGroup((2,))))) == 8
    assert len(list(all_alternating_forms(FinAbGroup((4, 4)), FinAbGroup((2,))))) == 2


alt_cases = st.sampled_from([((2, 2), (2,)), ((4,), (4,)), ((2, 4), (2,)), ((4, 4), (4,)),
                             ((3, 3), (3,)), ((2, 2, 2), (2,)), ((2, 2, 2, 2), (2,))])


@st.composite
def alternating_forms(draw):
    po, to = draw(alt_cases)
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_alternating_form(FinAbGroup(po), FinAbGroup(to), np.random.default_rng(seed))


@given(alternating_forms(), st.data())
def test_orthogonal_vs_brute_force(w, data):
    s = data.draw(st.sampled_from(enumerate_subgroups(w.p)))
    assert orthogonal(w, s) == brute_perp(w, s)


@given(alternating_forms())
def test_galois_laws(w):
    rep = galois_report(w)
    assert all(ok for k, (ok, _) in ((k, v) for k, v in rep.items() if k != "strict_meet_inclusions"))


@given(alternating_forms())
def test_lagrangian_extremality(w):
    assert lagrangian_extremality(w)["ok"]


@given(alternating_forms())
def test_closed_lattice_is_antiautomorphic(w):
    lat = closed_lattice(w)
    nodes = set(lat.nodes)
    for a in lat.nodes:
        assert lat.perp(a) in nodes and lat.perp(lat.perp(a)) == a
        for b in lat.nodes:
            assert lat.perp(lat.join(a, b)) == lat.meet(lat.perp(a), lat.perp(b))


def test_strict_meet_inclusion_witness():
    # the degenerate form on Z2^3 with radical <e3> gives a strict inclusion
    p = FinAbGroup((2, 2, 2))
    counts = [galois_report(w)["strict_meet_inclusions"] for w in all_alternating_forms(p, FinAbGroup((2,)))]
    assert max(counts) > 0


def test_minimal_coisotropic_search_runs(w_d4):
    assert minimal_coisotropic_search(w_d4) == []


def test_correspondence_d4():
    ext = HeisGroup(d4_form()).extension()
    rep = correspondence_check(ext)
    assert rep.ok, rep.counterexamples
    assert rep.n_subgroups_h == 10 and rep.n_subgroups_p == 5


def test_correspondence_trivial_extension():
    from hforge.cohom import Cocycle
    p, t = K4, FinAbGroup((2,))
    ext = extension_from_cocycle(Cocycle(p, t, np.zeros((4, 4))))
    rep = correspondence_check(ext)
    assert rep.ok and ext.commutator_form().is_trivial()


def test_correspondence_perturbed():
    ext = extension_from_cocycle(perturbed(2)["perturbed"])
    rep = correspondence_check(ext)
    assert rep.ok
    assert ext.commutator_form() == extension_from_cocycle(perturbed(2)["gamma0"]).commutator_form()
