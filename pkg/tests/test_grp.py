import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hforge.errors import InputError
from hforge.finab import FinAbGroup
from hforge.grp import (FiniteGroup, GrpHom, GrpSubgroup, abelian_structure, center, centralizer,
                        commutator_subgroup, cyclic, dihedral4, direct_product, enumerate_homs,
                        find_isomorphism, find_splittings, generate, group_table_of, is_maximal_abelian,
                        is_nilquadratic, is_normal_splitting, normal_subgroups, quaternion8, quotient,
                        subgroups, symmetric3)


def ids(g, *labels):
    return sorted(g.id_of(s) for s in labels)


def brute_center(g):
    return [a for a in range(g.size) if all(g.mul(a, b) == g.mul(b, a) for b in range(g.size))]


def brute_subgroup_count(g):
    """Closures of all pairs of elements; enough for groups of order <= 8 (all 2-generated)."""
    seen = set()
    for a, b in itertools.combinations_with_replacement(range(g.size), 2):
        seen.add(generate(g, [a, b]).ids)
    return len(seen)


@pytest.fixture(scope="module")
def d4():
    return dihedral4()


def test_d4_presentation(d4):
    t, r = d4.id_of("t"), d4.id_of("r")
    assert d4.order_of(t) == 4 and d4.order_of(r) == 2
    assert d4.mul(r, t) == d4.mul(d4.power(t, 3), r)
    assert d4.label(d4.mul(t, r)) == "tr"


def test_table_validation():
    with pytest.raises(InputError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(InputError):
        FiniteGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(InputError):
        FiniteGroup.from_json({"size": 3, "table": [[0, 1], [1, 0]]})
    # a Latin square that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InputError):
        FiniteGroup(bad)


def test_json_roundtrip(d4):
    again = FiniteGroup.from_json(d4.to_json())
    assert (again.table == d4.table).all() and again.labels == d4.labels


def test_center_examples(d4):
    assert center(d4).ids == tuple(ids(d4, "1", "t2"))
    z6 = cyclic(6)
    assert center(z6).order == 6
    s3 = symmetric3()
    assert center(s3).order == 1


@pytest.mark.parametrize("make", [dihedral4, quaternion8, symmetric3, lambda: cyclic(5)])
def test_center_vs_brute_force(make):
    g = make()
    assert list(center(g).ids) == brute_center(g)


def test_commutator_subgroup(d4):
    assert commutator_subgroup(d4).ids == tuple(ids(d4, "1", "t2"))
    assert commutator_subgroup(cyclic(4)).order == 1
    s3 = symmetric3()
    a3 = commutator_subgroup(s3)
    assert a3.order == 3 and all(_even(s3.label(i)) for i in a3.ids)


def _even(label):
    p = [int(c) for c in label]
    return sum(p[i] > p[j] for i in range(3) for j in range(i + 1, 3)) % 2 == 0


def test_is_nilquadratic(d4):
    assert is_nilquadratic(d4) == (True, None)
    flag, witness = is_nilquadratic(symmetric3())
    assert not flag and witness is not None
    assert is_nilquadratic(quaternion8())[0]
    assert is_nilquadratic(cyclic(7))[0]


def test_centralizer_examples(d4):
    rt2 = generate(d4, ids(d4, "r", "t2"))
    assert centralizer(d4, rt2).ids == rt2.ids
    assert is_maximal_abelian(d4, rt2)
    assert centralizer(d4, center(d4)).order == 8
    tt = generate(d4, [d4.id_of("t")])
    assert centralizer(d4, tt).ids == tt.ids


def test_subgroup_counts():
    # D4 has 10 subgroups, Q8 has 6, S3 has 6; checked against pairwise closures
    for make, n in ((dihedral4, 10), (quaternion8, 6), (symmetric3, 6)):
        g = make()
        assert len(subgroups(g)) == n == brute_subgroup_count(g)
    assert len(normal_subgroups(dihedral4())) == 6


def test_quotient_examples(d4):
    q, proj = quotient(d4, center(d4))
    assert q.size == 4 and q.is_abelian
    assert all(q.order_of(a) <= 2 for a in range(4))
    same, _ = quotient(d4, d4.trivial())
    assert find_isomorphism(same, d4) is not None
    one, _ = quotient(d4, d4.whole())
    assert one.size == 1
    with pytest.raises(InputError):
        quotient(symmetric3(), generate(symmetric3(), [symmetric3().id_of("102")]))


def test_d4_splittings(d4):
    sp = find_splittings(d4)
    k = generate(d4, ids(d4, "r", "t2"))
    n = generate(d4, ids(d4, "tr", "t2"))
    hit = [s for s in sp if s.k.ids == k.ids and s.n.ids == n.ids]
    assert len(hit) == 1 and hit[0].kind == "abelian"
    x, y = is_normal_splitting(d4, k, n)
    assert x.ids == tuple(ids(d4, "1", "r")) and y.ids == tuple(ids(d4, "1", "tr"))


def test_abelian_group_has_degenerate_splittings():
    g = direct_product(cyclic(2), cyclic(3))
    sp = find_splittings(g)
    assert any(s.torus.order == 1 and s.k.order * s.n.order == g.size for s in sp)


def test_q8_has_no_abelian_splitting():
    sp = find_splittings(quaternion8())
    assert all(s.kind != "abelian" for s in sp)


def test_enumerate_homs_counts():
    # |Hom(Z4, Z2)| = 2, |Hom(S3, Z2)| = 2, |Hom(D4, Z2)| = 4 (abelianization Z2^2)
    assert len(enumerate_homs(cyclic(4), cyclic(2))) == 2
    assert len(enumerate_homs(symmetric3(), cyclic(2))) == 2
    assert len(enumerate_homs(dihedral4(), cyclic(2))) == 4


def test_enumerate_homs_fixed(d4):
    z4 = cyclic(4)
    t = d4.id_of("t")
    every = enumerate_homs(d4, d4)
    fixed = enumerate_homs(d4, d4, fixed={t: t})
    assert {tuple(h.images) for h in fixed} == {tuple(h.images) for h in every if h.images[t] == t}
    assert len(enumerate_homs(z4, z4, fixed={1: 3})) == 1


def test_find_isomorphism(d4):
    assert find_isomorphism(d4, quaternion8()) is None
    perm = np.random.default_rng(3).permutation(8)
    inv = np.argsort(perm)
    shuffled = FiniteGroup(perm[d4.table[np.ix_(inv, inv)]])
    iso = find_isomorphism(d4, shuffled)
    assert iso is not None and iso.is_isomorphism()


@given(st.sampled_from([(2, 2), (4,), (2, 4), (3, 3), (2, 2, 2), (6,)]))
def test_abelian_structure_recovers_group(orders):
    a = FinAbGroup(orders)
    g = group_table_of(a)
    s, to = abelian_structure(g.table, range(g.size))
    assert s.size == a.size
    assert sorted(a.order_of(x) for x in a.elements()) == sorted(s.order_of(x) for x in s.elements())
    GrpHom(g, group_table_of(s), to)


@given(st.sampled_from([dihedral4, quaternion8, symmetric3]), st.data())
def test_subgroup_lattice_laws(make, data):
    g = make()
    subs = subgroups(g)
    a = data.draw(st.sampled_from(subs))
    b = data.draw(st.sampled_from(subs))
    m = a.meet(b)
    assert m.is_subgroup() and m.issubset(a) and m.issubset(b)
    j = a.join(b)
    assert a.issubset(j) and b.issubset(j)
    assert GrpSubgroup(g, centralizer(g, a).ids).is_subgroup()
