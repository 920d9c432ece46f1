import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hforge.corpus import d4_form, heis_form, nonabelian_forms
from hforge.errors import InputError, ResourceError
from hforge.finab import AbHom, AbSubgroup, FinAbGroup
from hforge.forms import BilinearForm, product_form
from hforge.grp import (GrpHom, center, dihedral4, find_isomorphism, find_splittings, generate,
                        is_maximal_abelian)
from hforge.heis import (HeisElement, HeisGroup, bisection_structure_check, embedding_check,
                         formula_check, heis_comm_center, heis_from_form_expanded, heis_inv, heis_mul,
                         heis_object, oracle_table, pushforward, reconstruct, render_torus, twist,
                         unique_factorization, universal_property_check)

from conftest import bilinear_forms

Z2, Z4 = FinAbGroup((2,)), FinAbGroup((4,))

# (c, x, xi) of each D4 element, in the order 1, t, t2, t3, r, tr, t2r, t3r
D4_TABLE = {"1": (0, 0, 0), "t": (1, 1, 1), "t2": (1, 0, 0), "t3": (0, 1, 1),
            "r": (0, 1, 0), "tr": (0, 0, 1), "t2r": (1, 1, 0), "t3r": (1, 0, 1)}


@pytest.fixture(scope="module")
def h():
    return HeisGroup(d4_form())


def el(c, x, xi):
    return HeisElement((c,), (x,), (xi,))


def test_d4_mul_examples(h):
    assert heis_mul(h, el(1, 1, 1), el(1, 1, 1)) == el(1, 0, 0)
    assert heis_mul(h, el(0, 1, 0), el(0, 0, 1)) == el(0, 1, 1)
    assert heis_mul(h, el(0, 0, 1), el(0, 1, 0)) == el(1, 1, 1)
    for a in h.elements():
        assert heis_mul(h, a, h.identity) == a


def test_d4_inv_examples(h):
    assert heis_inv(h, el(1, 1, 1)) == el(0, 1, 1)
    assert heis_inv(h, h.identity) == h.identity
    h4 = HeisGroup(product_form(4))
    a = HeisElement((3,), (1,), (0,))
    assert heis_inv(h4, a) == HeisElement((1,), (3,), (0,))


def test_d4_commutator(h):
    t, r = el(*D4_TABLE["t"]), el(*D4_TABLE["r"])
    assert h.comm(t, r) == el(1, 0, 0)
    _, z = heis_comm_center(h)
    assert z == h.torus_subgroup()


def test_labels_render_torus_multiplicatively(h):
    assert h.label(h.index(el(1, 1, 1))) == "-(1,1)"
    assert render_torus(Z4, (0,)) == "1"
    assert render_torus(Z4, (3,)) == "z4^3"


def test_d4_table_matches_dihedral_group(h):
    """Brute-force isomorphism search finds the labelled correspondence."""
    d4 = dihedral4()
    iso = find_isomorphism(d4, h.group)
    assert iso is not None
    # the recorded correspondence itself is a homomorphism
    img = [h.index(el(*D4_TABLE[d4.label(i)])) for i in range(8)]
    assert GrpHom(d4, h.group, img).is_isomorphism()


def test_zero_form_center_is_everything():
    h0 = HeisGroup(BilinearForm(Z2, Z2, Z2, [[(0,)]]))
    assert h0.group.is_abelian
    assert center(h0.group).order == h0.order


def test_table_cap():
    big = BilinearForm(FinAbGroup((4, 4)), FinAbGroup((4, 4)), FinAbGroup((4,)), [[(1,), (0,)], [(0,), (1,)]])
    with pytest.raises(ResourceError):
        HeisGroup(big).group


@given(bilinear_forms())
def test_closed_formulas_vs_oracle(b):
    h = HeisGroup(b)
    assert all(formula_check(h).values())
    assert (oracle_table(b) == h.group.table).all()


@given(bilinear_forms())
def test_center_formula(b):
    h = HeisGroup(b)
    assert center(h.group) == h.center_formula()
    if b.is_duality():
        assert center(h.group) == h.torus_subgroup()


@pytest.mark.parametrize("name,form", nonabelian_forms())
def test_nonabelian_forms(name, form):
    h = HeisGroup(form)
    assert all(formula_check(h).values())
    assert all(bisection_structure_check(h).values())


@given(bilinear_forms())
def test_bisection_identities(b):
    assert all(bisection_structure_check(HeisGroup(b)).values())


def test_unique_factorization_examples(h):
    c, xt, xit = unique_factorization(h, el(1, 1, 0))
    assert c == (1,) and xt == el(0, 1, 0) and xit == h.identity
    assert unique_factorization(h, h.identity) == ((0,), h.identity, h.identity)


@given(bilinear_forms(), st.data())
def test_unique_factorization_standard_section(b, data):
    h = HeisGroup(b)
    u = h.element_at(data.draw(st.integers(0, h.order - 1)))
    c, xt, xit = unique_factorization(h, u)
    assert c == u.c and xt == HeisElement(b.torus.zero, u.x, b.gamma.zero)
    assert xit == HeisElement(b.torus.zero, b.g.zero, u.xi)


def test_unique_factorization_other_section(h):
    # shift the section by the central element on (1,1)
    s = h.standard_section().copy()
    s[3] = h.index(el(1, 1, 1))
    c, xt, xit = unique_factorization(h, el(1, 1, 0), section=s)
    assert h.mul(h.mul(h.element((c[0],), (0,), (0,)), xt), xit) == el(1, 1, 0)
    with pytest.raises(InputError):
        unique_factorization(h, h.identity, section=[0] * 3)


def test_embedding_examples(h):
    whole, zero = AbSubgroup.whole(Z2), AbSubgroup.trivial(Z2)
    assert embedding_check(h, whole, zero)
    assert not embedding_check(h, whole, whole)
    hz = HeisGroup(BilinearForm(Z2, Z2, Z2, [[(0,)]]))
    assert embedding_check(hz, whole, whole)


@given(bilinear_forms(), st.data())
def test_embedding_criterion_agrees_with_tables(b, data):
    from hforge.finab import enumerate_subgroups
    h = HeisGroup(b)
    hs = data.draw(st.sampled_from(enumerate_subgroups(b.g)))
    ds = data.draw(st.sampled_from(enumerate_subgroups(b.gamma)))
    embedding_check(h, hs, ds)


def test_twist_examples(h):
    j = twist(h)
    assert j(el(0, 1, 1)) == el(1, 1, 1)
    for x in range(2):
        assert j(el(1, x, 0)) == el(1, 0, x)
    assert not j.inverse_differs


def test_twist_square_on_z4():
    h4 = HeisGroup(product_form(4))
    j = twist(h4)
    for u in range(h4.order):
        c, x, xi = h4.element_at(u)
        assert h4.element_at(int(j.square.images[u])) == HeisElement(c, Z4.neg(x), Z4.neg(xi))
    # for Z4 the inverse of J is not the twist of the transpose
    assert j.inverse_differs


def test_twist_rejects_degenerate():
    with pytest.raises(InputError):
        twist(HeisGroup(product_form(4, 2)))


def test_reconstruct_d4():
    d4 = dihedral4()
    k = generate(d4, [d4.id_of("r"), d4.id_of("t2")])
    n = generate(d4, [d4.id_of("tr"), d4.id_of("t2")])
    form, iso, hh = reconstruct(d4, k, n)
    assert form.is_duality() and form.table.tolist() == [[0, 0], [0, 1]]
    got = {d4.label(i): hh.label(int(iso.images[i])) for i in range(8)}
    assert got == {"1": "+(0,0)", "t": "-(1,1)", "t2": "-(0,0)", "t3": "+(1,1)",
                   "r": "+(1,0)", "tr": "+(0,1)", "t2r": "-(1,0)", "t3r": "-(0,1)"}


@given(bilinear_forms())
def test_reconstruct_round_trip(b):
    h = HeisGroup(b)
    form, iso, hh = reconstruct(h.group, h.g_tilde(), h.gamma_tilde())
    assert iso.is_isomorphism()
    assert sorted(np.unique(form.table, return_counts=True)[1].tolist()) == \
        sorted(np.unique(b.table, return_counts=True)[1].tolist())


def test_reconstruct_abelian_direct_product():
    from hforge.grp import cyclic, direct_product
    g = direct_product(cyclic(2), cyclic(3))
    k = generate(g, [3])      # A x 1
    n = generate(g, [1])      # 1 x B
    form, iso, hh = reconstruct(g, k, n)
    assert not form.table.any() and form.torus.size == 1


def test_pushforward_identity_and_zero(h):
    obj = heis_object(h)
    same = pushforward(obj, AbHom.identity(Z2))
    assert same.obj.ext.total.size == 8 and same.can.is_isomorphism()
    assert same.flags["maximal_abelian"] and same.flags["universal"]
    zero = pushforward(obj, AbHom.zero(Z2, Z4))
    assert zero.obj.ext.total.size == 16 and zero.obj.ext.total.is_abelian
    # the naive centre formula fails when t kills the form values
    assert not zero.flags["t_injective_on_form_values"]
    assert not zero.flags["maximal_abelian"]


def test_pushforward_into_z4(h):
    obj = heis_object(h)
    push = pushforward(obj, AbHom(Z2, Z4, ((2,),)))
    q = push.obj.ext.total
    assert q.size == 16 and push.obj.ext.phase.orders == (2, 2)
    assert center(q).order == 4 and not q.is_abelian
    assert push.flags["maximal_abelian"] and push.flags["center_is_torus_times_center"]


def test_universal_property_against_other_target(h):
    obj = heis_object(h)
    push = pushforward(obj, AbHom.identity(Z2))
    # H itself, with f = identity, is reached by exactly one mediating map
    assert universal_property_check(push, obj.ext, GrpHom(h.group, h.group, np.arange(8)))
    # the twist fixes the torus, so it is mediated too
    j = twist(h).hom
    assert universal_property_check(push, obj.ext, GrpHom(h.group, h.group, j.images))
    # the trivial map does not lie over the identity of the torus: no mediating map
    assert not universal_property_check(push, obj.ext, GrpHom(h.group, h.group, np.zeros(8, dtype=np.int64)))


def test_expanded_examples():
    dual = heis_from_form_expanded(d4_form())
    assert dual.ext.torus.orders == (2,) and dual.ext.phase.orders == (2, 2)
    zero = heis_from_form_expanded(BilinearForm(Z2, Z2, Z2, [[(0,)]]))
    assert zero.ext.torus.size == 8 and zero.ext.phase.size == 1 and zero.ext.total.is_abelian
    mod2 = heis_from_form_expanded(product_form(4, 2))
    assert mod2.ext.torus.orders == (2, 2, 2) and mod2.ext.phase.orders == (2, 2)
    assert mod2.ext.is_strictly_central()


def test_maximal_abelian_bisection_of_dualities():
    h3 = HeisGroup(heis_form(3))
    assert is_maximal_abelian(h3.group, h3.g_tilde())
    assert h3.order == 27


def test_d4_splittings_are_heisenberg():
    d4 = dihedral4()
    for s in find_splittings(d4):
        if s.kind == "abelian":
            form, iso, _ = reconstruct(d4, s.k, s.n)
            assert form.is_duality() and iso.is_isomorphism()
