import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hforge.errors import InputError
from hforge.finab import (AbHom, AbSubgroup, FinAbGroup, ab_add, all_homs, count_solutions,
                          direct_sum, enumerate_subgroups, hom_solve, max_order, quotient_map,
                          solve_congruences, solve_lift, subgroup_generated)

from conftest import elements, groups


def brute_subgroups(g: FinAbGroup) -> set:
    """Closures of all subsets of size <= rank + 1 (enough generators for these groups)."""
    out = set()
    for k in range(g.rank + 2):
        for gens in itertools.combinations(range(g.size), k):
            out.add(subgroup_generated(g, [g.element(i) for i in gens]).ids)
    return out


def brute_homs(g: FinAbGroup, t: FinAbGroup) -> list:
    """All maps g -> t preserving addition, by testing every function on generators."""
    out = []
    for imgs in itertools.product(range(t.size), repeat=g.rank):
        table = np.empty(g.size, dtype=np.int64)
        for i, a in enumerate(g.elements()):
            v = t.zero
            for k, ak in enumerate(a):
                v = t.add(v, t.scale(ak, t.element(imgs[k])))
            table[i] = t.index(v)
        if all(table[g.table[a, b]] == t.table[table[a], table[b]] for a in range(g.size) for b in range(g.size)):
            out.append(tuple(table))
    return out


# --- ab_add -----------------------------------------------------------------

def test_ab_add_examples():
    assert ab_add(FinAbGroup((2, 4)), (1, 3), (1, 2)) == (0, 1)
    assert ab_add(FinAbGroup((5,)), (2,), (4,)) == (1,)


@given(groups(), st.data())
def test_ab_add_identity_and_inverse(g, data):
    a = data.draw(elements(g))
    assert ab_add(g, a, g.zero) == g.normalize(a)
    assert ab_add(g, a, g.neg(a)) == g.zero


@given(groups(), st.data())
def test_group_axioms(g, data):
    a, b, c = (data.draw(elements(g)) for _ in range(3))
    assert g.add(a, b) == g.add(b, a)
    assert g.add(g.add(a, b), c) == g.add(a, g.add(b, c))


def test_malformed_groups_rejected():
    with pytest.raises(InputError):
        FinAbGroup((0,))
    with pytest.raises(InputError):
        FinAbGroup.from_json({"orders": "abc"})
    with pytest.raises(InputError):
        FinAbGroup((2,)).index((1, 1))


def test_max_order_env(monkeypatch):
    monkeypatch.setenv("HFORGE_MAX_ORDER", "64")
    assert max_order() == 64
    monkeypatch.setenv("HFORGE_MAX_ORDER", "lots")
    with pytest.raises(InputError):
        max_order()


def test_json_roundtrip():
    g = FinAbGroup((2, 4, 3))
    assert FinAbGroup.from_json(g.to_json()) == g
    assert direct_sum(FinAbGroup((2,)), FinAbGroup((3, 3))).orders == (2, 3, 3)


# --- hom_solve ----------------------------------------------------------------

def test_hom_solve_examples():
    z2, z3, z4 = FinAbGroup((2,)), FinAbGroup((3,)), FinAbGroup((4,))
    h = hom_solve(z2, z2, [((1,), (1,))])
    assert h == AbHom.identity(z2)
    assert hom_solve(z2, z3, [((1,), (1,))]) is None
    assert hom_solve(z4, z2, [((2,), (1,))]) is None


@pytest.mark.parametrize("go,to", [((4,), (2,)), ((2, 2), (4,)), ((6,), (4,)), ((2, 4), (2, 2)), ((3,), (3, 3))])
def test_all_homs_matches_brute_force(go, to):
    g, t = FinAbGroup(go), FinAbGroup(to)
    ours = sorted(tuple(h.table) for h in all_homs(g, t))
    assert ours == sorted(brute_homs(g, t))


@pytest.mark.parametrize("go,to", [((4,), (2,)), ((2, 4), (4,)), ((6,), (4,)), ((3, 3), (9,))])
def test_hom_solve_finds_every_hom_from_its_values(go, to):
    g, t = FinAbGroup(go), FinAbGroup(to)
    homs = all_homs(g, t)
    for h in homs:
        a = g.element(g.size - 1)
        sol = hom_solve(g, t, [(a, h(a))])
        assert sol is not None and sol(a) == h(a)
    # values never taken by any hom are infeasible
    a = g.element(1)
    taken = {h(a) for h in homs}
    for v in t.elements():
        assert (hom_solve(g, t, [(a, v)]) is not None) == (v in taken)


@given(st.lists(st.lists(st.integers(0, 11), min_size=3, max_size=3), min_size=1, max_size=4),
       st.sampled_from([2, 4, 6, 8, 9, 12]), st.data())
def test_congruence_solver_vs_enumeration(rows, m, data):
    A = np.array(rows, dtype=np.int64)
    x0 = np.array(data.draw(st.lists(st.integers(0, m - 1), min_size=3, max_size=3)))
    b = A @ x0 % m
    x = solve_congruences(A, b, m)
    assert x is not None and ((A @ x - b) % m == 0).all()
    sols = sum(1 for v in itertools.product(range(m), repeat=3) if ((A @ np.array(v)) % m == 0).all())
    assert count_solutions(A, m) == sols


def test_congruence_infeasible():
    assert solve_congruences([[2]], [1], 4) is None


def test_solve_lift():
    chi = AbHom(FinAbGroup((9,)), FinAbGroup((3,)), ((1,),))
    a = solve_lift(chi, (2,))
    assert chi(a) == (2,)
    # the 3-torsion {0, 3, 6} of Z9 reduces to 0 mod 3
    assert solve_lift(chi, (1,), killed_by=3) is None
    assert solve_lift(chi, (0,), killed_by=3) in {(0,), (3,), (6,)}
    assert solve_lift(AbHom.zero(FinAbGroup((3,)), FinAbGroup((2,))), (1,)) is None


# --- subgroups ------------------------------------------------------------------

def test_enumerate_subgroups_examples():
    assert len(enumerate_subgroups(FinAbGroup((2, 2)))) == 5
    for p in (2, 3, 5, 7):
        assert len(enumerate_subgroups(FinAbGroup((p,)))) == 2
    z4 = enumerate_subgroups(FinAbGroup((4,)))
    assert sorted(s.ids for s in z4) == [(0,), (0, 1, 2, 3), (0, 2)]


@pytest.mark.parametrize("orders", [(2, 2), (4,), (2, 4), (3, 3), (2, 2, 2), (4, 4), (6,)])
def test_enumerate_subgroups_vs_brute_force(orders):
    g = FinAbGroup(orders)
    ours = enumerate_subgroups(g)
    assert all(s.is_subgroup() for s in ours)
    assert {s.ids for s in ours} == brute_subgroups(g)
    for i in range(g.size):
        assert subgroup_generated(g, [g.element(i)]) in ours


def test_subgroup_counts_frozen():
    # subgroup counts computed by the brute-force closure above
    assert len(enumerate_subgroups(FinAbGroup((2, 2, 2)))) == 16
    assert len(enumerate_subgroups(FinAbGroup((4, 4)))) == 15
    assert len(enumerate_subgroups(FinAbGroup((2, 4)))) == 8


@given(groups(), st.data())
def test_meet_join_are_subgroups(g, data):
    subs = enumerate_subgroups(g)
    a = data.draw(st.sampled_from(subs))
    b = data.draw(st.sampled_from(subs))
    assert a.meet(b).is_subgroup() and a.join(b).is_subgroup()
    assert a.meet(b).order * a.join(b).order == a.order * b.order


@given(groups(), st.data())
def test_quotient_map_is_hom_with_kernel(g, data):
    s = data.draw(st.sampled_from(enumerate_subgroups(g)))
    q, qid = quotient_map(g, s)
    assert q.size * s.order == g.size
    assert (qid[g.table] == q.table[qid[:, None], qid[None, :]]).all()
    assert tuple(np.flatnonzero(qid == 0)) == s.ids


def test_abhom_rejects_bad_generator_image():
    with pytest.raises(InputError):
        AbHom(FinAbGroup((2,)), FinAbGroup((3,)), ((1,),))
    h = AbHom(FinAbGroup((4,)), FinAbGroup((2,)), ((1,),))
    assert h.kernel() == AbSubgroup(h.domain, [0, 2])
    assert math.prod(h.domain.orders) == h.kernel().order * h.image().order
