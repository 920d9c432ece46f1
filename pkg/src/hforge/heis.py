"""Heisenberg groups H(beta) of a bilinear form beta: Gamma x G -> T.

Elements are triples (c, x, xi) with product

    (c, x, xi)(d, y, eta) = (c + d + beta(xi, y), x y, xi eta),

the torus written additively.  Element ids are ``(c * |G| + x) * |Gamma| + xi``,
so ``id % (|G| |Gamma|)`` is the phase id ``x * |Gamma| + xi`` and
``id // (|G| |Gamma|)`` the torus id.  G and Gamma may be FinAbGroups or
FiniteGroups (through TableForm); the extension machinery needs abelian ones.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .cohom import CentralExtension
from .errors import ConsistencyError, InputError, ResourceError
from .finab import AbHom, AbSubgroup, FinAbGroup, direct_sum, quotient_map
from .forms import BilinearForm, TableForm
from .grp import (FiniteGroup, GrpHom, GrpSubgroup, abelian_structure, center, centralizer,
                  direct_product, enumerate_homs, find_complement, group_table_of,
                  is_maximal_abelian, is_normal_splitting, quotient)
from .sympl import phase_form

HEIS_TABLE_MAX = 512
PUSHFORWARD_MAX = 1024
UNIVERSAL_CHECK_MAX = 16


class HeisElement(NamedTuple):
    c: tuple
    x: object
    xi: object


def _render_group_elt(grp, i: int) -> str:
    if isinstance(grp, FiniteGroup):
        return grp.label(i)
    e = grp.element(i)
    if len(e) == 1:
        return str(e[0])
    return "(" + ",".join(map(str, e)) + ")"


def render_torus(t: FinAbGroup, c) -> str:
    """Multiplicative rendering: +/- for Z2, otherwise products of z<n>^k."""
    c = t.normalize(c)
    if t.orders == (2,):
        return "-" if c[0] else "+"
    if not any(c):
        return "1"
    dup = len(set(t.orders)) != len(t.orders)
    parts = []
    for i, (n, k) in enumerate(zip(t.orders, c)):
        if k:
            base = f"z{n}.{i}" if dup else f"z{n}"
            parts.append(base if k == 1 else f"{base}^{k}")
    return "*".join(parts)


def _center_mask_of(grp) -> np.ndarray:
    if isinstance(grp, FinAbGroup):
        return np.ones(grp.size, dtype=np.bool_)
    return K.center_mask(grp.table)


class HeisGroup:
    """H(beta) with closed-formula arithmetic and a lazily built Cayley table."""

    def __init__(self, form):
        if not isinstance(form, (BilinearForm, TableForm)):
            raise InputError("HeisGroup needs a BilinearForm or TableForm")
        self.form = form
        self.torus, self.g, self.gamma = form.torus, form.g, form.gamma
        self.nt, self.ng, self.nh = self.torus.size, self.g.size, self.gamma.size
        self.n_phase = self.ng * self.nh
        self.order = self.nt * self.n_phase
        self._lock = threading.Lock()
        self._group = None

    def __repr__(self):
        return f"HeisGroup(order={self.order}, {self.form!r})"

    # ---- ids and elements ------------------------------------------------

    def _id(self, c: int, x: int, xi: int) -> int:
        return (c * self.ng + x) * self.nh + xi

    def _split(self, u: int):
        c, rest = divmod(int(u), self.n_phase)
        x, xi = divmod(rest, self.nh)
        return c, x, xi

    def element(self, c, x, xi) -> HeisElement:
        """Validated element; components are normalised."""
        try:
            ci, xid, xii = self.torus.index(c), self.g.index(x), self.gamma.index(xi)
        except (TypeError, ValueError, IndexError, KeyError) as exc:
            raise InputError(f"invalid Heisenberg element ({c}, {x}, {xi})") from exc
        return self.element_at(self._id(ci, xid, xii))

    def index(self, a: HeisElement) -> int:
        a = HeisElement(*a)
        return self._id(self.torus.index(a.c), self.g.index(a.x), self.gamma.index(a.xi))

    def element_at(self, u: int) -> HeisElement:
        if not 0 <= int(u) < self.order:
            raise InputError(f"element id {u} out of range")
        c, x, xi = self._split(u)
        return HeisElement(self.torus.element(c), self.g.element(x), self.gamma.element(xi))

    @property
    def identity(self) -> HeisElement:
        return self.element_at(self._id(0, self.g.identity_id, self.gamma.identity_id))

    def elements(self) -> list:
        return [self.element_at(u) for u in range(self.order)]

    def label(self, u: int) -> str:
        c, x, xi = self._split(u)
        return (f"{render_torus(self.torus, self.torus.element(c))}"
                f"({_render_group_elt(self.g, x)},{_render_group_elt(self.gamma, xi)})")

    # ---- closed formulas ---------------------------------------------------

    def mul_ids(self, a: int, b: int) -> int:
        c, x, xi = self._split(a)
        d, y, eta = self._split(b)
        tt = self.torus.table
        cc = tt[tt[c, d], self.form.table[xi, y]]
        return self._id(int(cc), int(self.g.table[x, y]), int(self.gamma.table[xi, eta]))

    def inv_ids(self, a: int) -> int:
        c, x, xi = self._split(a)
        tt, ti = self.torus.table, self.torus.inverse
        cc = tt[self.form.table[xi, x], ti[c]]
        return self._id(int(cc), int(self.g.inverse[x]), int(self.gamma.inverse[xi]))

    def comm_ids(self, a: int, b: int) -> int:
        """(beta(xi, y) - beta(eta, x), [x, y], [xi, eta])."""
        _, x, xi = self._split(a)
        _, y, eta = self._split(b)
        tt, ti, f = self.torus.table, self.torus.inverse, self.form.table
        cc = tt[f[xi, y], ti[f[eta, x]]]
        gt, gi = self.g.table, self.g.inverse
        ht, hi = self.gamma.table, self.gamma.inverse
        xc = gt[gt[x, y], gt[gi[x], gi[y]]]
        hc = ht[ht[xi, eta], ht[hi[xi], hi[eta]]]
        return self._id(int(cc), int(xc), int(hc))

    def mul(self, a: HeisElement, b: HeisElement) -> HeisElement:
        return self.element_at(self.mul_ids(self.index(a), self.index(b)))

    def inv(self, a: HeisElement) -> HeisElement:
        return self.element_at(self.inv_ids(self.index(a)))

    def comm(self, a: HeisElement, b: HeisElement) -> HeisElement:
        return self.element_at(self.comm_ids(self.index(a), self.index(b)))

    # ---- the Cayley table --------------------------------------------------

    @property
    def group(self) -> FiniteGroup:
        if self._group is None:
            if self.order > HEIS_TABLE_MAX:
                raise ResourceError(f"|H| = {self.order} exceeds the table bound {HEIS_TABLE_MAX}")
            with self._lock:
                if self._group is None:
                    table = K.heis_table(self.torus.table, self.g.table, self.gamma.table, self.form.table)
                    labels = [self.label(u) for u in range(self.order)]
                    self._group = FiniteGroup(table, labels, check=False)
        return self._group

    def check_table(self):
        """Compare closed-formula product and inverse against the table everywhere."""
        g = self.group
        for a in range(self.order):
            for b in range(self.order):
                if self.mul_ids(a, b) != g.table[a, b]:
                    raise ConsistencyError(f"product formula disagrees with the table at ({a}, {b})")
            if self.inv_ids(a) != g.inverse[a]:
                raise ConsistencyError(f"inverse formula disagrees with the table at {a}")

    # ---- distinguished subgroups -------------------------------------------

    def _ids_where(self, c=None, x=None, xi=None) -> np.ndarray:
        cs = np.arange(self.nt) if c is None else np.asarray(c, dtype=np.int64)
        xs = np.arange(self.ng) if x is None else np.asarray(x, dtype=np.int64)
        hs = np.arange(self.nh) if xi is None else np.asarray(xi, dtype=np.int64)
        return ((cs[:, None, None] * self.ng + xs[None, :, None]) * self.nh + hs[None, None, :]).ravel()

    def torus_subgroup(self) -> GrpSubgroup:
        return GrpSubgroup(self.group, self._ids_where(x=[self.g.identity_id], xi=[self.gamma.identity_id]))

    def g_tilde(self) -> GrpSubgroup:
        return GrpSubgroup(self.group, self._ids_where(xi=[self.gamma.identity_id]))

    def gamma_tilde(self) -> GrpSubgroup:
        return GrpSubgroup(self.group, self._ids_where(x=[self.g.identity_id]))

    def kernel_ids(self):
        """``(G0, Gamma0)`` as id arrays: right and left kernels of beta."""
        f = self.form.table
        return np.flatnonzero((f == 0).all(axis=0)), np.flatnonzero((f == 0).all(axis=1))

    def center_formula_ids(self) -> np.ndarray:
        """Sorted ids of T x (G0 n Z(G)) x (Gamma0 n Z(Gamma))."""
        g0, h0 = self.kernel_ids()
        gz = g0[_center_mask_of(self.g)[g0]]
        hz = h0[_center_mask_of(self.gamma)[h0]]
        return np.sort(self._ids_where(x=gz, xi=hz))

    def center_formula(self) -> GrpSubgroup:
        return GrpSubgroup(self.group, self.center_formula_ids())

    def standard_section(self) -> np.ndarray:
        """s0(x, xi) = (0, x, xi) as phase id -> group id (the identity map on ids)."""
        return np.arange(self.n_phase, dtype=np.int64)

    def extension(self) -> CentralExtension:
        """T -> H(beta) -> G + Gamma with the standard section (abelian G, Gamma only)."""
        if not self.form.is_abelian:
            raise InputError("the extension view needs abelian G and Gamma")
        p = FinAbGroup(self.g.orders + self.gamma.orders)
        ids = np.arange(self.order)
        return CentralExtension(self.group, self.torus, p, np.arange(self.nt) * self.n_phase,
                                ids % self.n_phase, self.standard_section())


# --------------------------------------------------------------------------
# independent construction and element-level API
# --------------------------------------------------------------------------

def oracle_table(form) -> np.ndarray:
    """Cayley table of (T x G) semidirect Gamma, Gamma acting by (c, x) -> (c + beta(xi, x), x).

    Built from explicit action permutations on T x G, independently of the
    closed product formula; ids use the same layout as HeisGroup.
    """
    t, g, gm = form.torus, form.g, form.gamma
    nt, ng, nh = t.size, g.size, gm.size
    nb = nt * ng
    bc, bx = np.divmod(np.arange(nb), ng)
    base_mul = t.table[bc[:, None], bc[None, :]] * ng + g.table[bx[:, None], bx[None, :]]
    act = np.empty((nh, nb), dtype=np.int64)
    for xi in range(nh):
        act[xi] = t.table[bc, form.table[xi, bx]] * ng + bx
        if len(np.unique(act[xi])) != nb:
            raise ConsistencyError("action of Gamma is not a permutation")
    a, xi = np.divmod(np.arange(nb * nh), nh)
    moved = act[xi[:, None], a[None, :]]                 # phi_xi(b) for row xi, column b
    return base_mul[a[:, None], moved] * nh + gm.table[xi[:, None], xi[None, :]]


def formula_check(h: HeisGroup) -> dict:
    """Closed formulas for product, inverse, commutator and centre against an oracle table.

    The oracle is the semidirect-product table; its inverses, commutators and
    centre are found by brute force on that table.
    """
    oracle = FiniteGroup(oracle_table(h.form), check=False)
    n = h.order
    ids = np.arange(n)
    c, rest = np.divmod(ids, h.n_phase)
    x, xi = np.divmod(rest, h.nh)
    tt, ti, f = h.torus.table, h.torus.inverse, h.form.table
    gt, gi, ht, hi = h.g.table, h.g.inverse, h.gamma.table, h.gamma.inverse
    mul = K.heis_table(tt, gt, ht, f)
    inv = (tt[f[xi, x], ti[c]] * h.ng + gi[x]) * h.nh + hi[xi]
    X, Y = x[:, None], x[None, :]
    XI, ETA = xi[:, None], xi[None, :]
    cc = tt[f[XI, Y], ti[f[ETA, X]]]
    xc = gt[gt[X, Y], gt[gi[X], gi[Y]]]
    hc = ht[ht[XI, ETA], ht[hi[XI], hi[ETA]]]
    comm = (cc * h.ng + xc) * h.nh + hc
    brute_inv = np.argmax(oracle.table == oracle.identity, axis=1)
    out = {
        "product": bool((mul == oracle.table).all()),
        "inverse": bool((inv == brute_inv).all()),
        "commutator": bool((comm == oracle.commutators).all()),
        "center": np.array_equal(np.flatnonzero(K.center_mask(oracle.table)), h.center_formula_ids()),
    }
    return out


def heis_mul(h: HeisGroup, a: HeisElement, b: HeisElement) -> HeisElement:
    return h.mul(a, b)


def heis_inv(h: HeisGroup, a: HeisElement) -> HeisElement:
    return h.inv(a)


def heis_comm_center(h: HeisGroup):
    """Assert the commutator formula on all pairs; return (commutator table, centre)."""
    g = h.group
    n = h.order
    formula = np.array([[h.comm_ids(a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    brute = g.commutators
    if not (formula == brute).all():
        a, b = np.argwhere(formula != brute)[0]
        raise ConsistencyError(f"commutator formula fails at ({g.label(a)}, {g.label(b)})")
    z = center(g)
    if z != h.center_formula():
        raise ConsistencyError("centre differs from T x (G0 n Z(G)) x (Gamma0 n Z(Gamma))")
    return formula, z


def bisection_structure_check(h: HeisGroup) -> dict:
    """Brute-force the orthogonality and bisection identities of (G~, Gamma~).

    Works for nonabelian G, Gamma given as tables.  Orthogonals are taken in
    the phase set: G-perp = {(y, eta) : (0, y, eta) commutes with G~}.
    """
    grp = h.group
    gt, gmt, tt = h.g_tilde(), h.gamma_tilde(), h.torus_subgroup()
    g0, h0 = h.kernel_ids()
    zg = np.flatnonzero(_center_mask_of(h.g))
    zh = np.flatnonzero(_center_mask_of(h.gamma))
    phase0 = np.arange(h.n_phase)   # ids of (0, x, xi)

    def perp(sub):
        cm = K.centralizer_mask(grp.table, sub.array)
        return set(np.flatnonzero(cm[phase0]).tolist())

    def pairs(xs, hs):
        return {int(x) * h.nh + int(y) for x in xs for y in hs}

    out = {
        "G_perp": perp(gt) == pairs(zg, h0),
        "Gamma_perp": perp(gmt) == pairs(g0, zh),
        "meet_is_torus": gt.meet(gmt) == tt,
        "product_is_whole": gt.product_set(gmt).order == h.order,
        "centralizer_G": centralizer(grp, gt) == GrpSubgroup(grp, h._ids_where(x=zg, xi=h0)),
        # [H, H] <= T is only claimed when the bisection is abelian
        "commutators_in_torus": (not (gt.is_abelian() and gmt.is_abelian())
                                 or set(np.unique(grp.commutators).tolist()) <= set(tt.ids)),
    }
    bad = [k for k, v in out.items() if not v]
    if bad:
        raise ConsistencyError(f"bisection identities fail: {bad}")
    return out


def _as_section(h: HeisGroup, section) -> np.ndarray:
    if section is None:
        return h.standard_section()
    if isinstance(section, dict):
        section = [section[z] for z in range(h.n_phase)]
    s = np.array([h.index(v) if isinstance(v, tuple) else int(v) for v in section], dtype=np.int64)
    if s.shape != (h.n_phase,) or (s < 0).any() or (s >= h.order).any():
        raise InputError("a section needs one group element per phase element")
    if ((s % h.n_phase) != np.arange(h.n_phase)).any():
        raise InputError("map is not a section of the projection")
    return s


def unique_factorization(h: HeisGroup, u: HeisElement, section=None):
    """``(c, x~, xi~)`` with u = c x~ xi~, x~ = s(x, 1), xi~ = s(1, xi).

    The decomposition is found by scanning all candidates, and asserted unique.
    """
    s = _as_section(h, section)
    uid = h.index(u)
    e_g, e_h = h.g.identity_id, h.gamma.identity_id
    hits = []
    for c in range(h.nt):
        tc = h._id(c, e_g, e_h)
        for x in range(h.ng):
            left = h.mul_ids(tc, int(s[x * h.nh + e_h]))
            for xi in range(h.nh):
                if h.mul_ids(left, int(s[e_g * h.nh + xi])) == uid:
                    hits.append((c, x, xi))
    if len(hits) != 1:
        raise ConsistencyError(f"factorization is not unique: {len(hits)} decompositions")
    c, x, xi = hits[0]
    return (h.torus.element(c), h.element_at(int(s[x * h.nh + e_h])), h.element_at(int(s[e_g * h.nh + xi])))


def embedding_check(h: HeisGroup, hs, ds) -> bool:
    """Is (c, x, xi) -> c x xi a homomorphism T x H x Delta -> H(beta)?

    Decided by the pairing condition beta(Delta, H) = 0 and independently by
    checking the map on the product table; the two answers must agree.
    """
    hs_ids = np.asarray(hs.ids if hasattr(hs, "ids") else hs, dtype=np.int64)
    ds_ids = np.asarray(ds.ids if hasattr(ds, "ids") else ds, dtype=np.int64)
    by_pairing = bool((h.form.table[np.ix_(ds_ids, hs_ids)] == 0).all())
    tg = group_table_of(h.torus)
    hg, hemb = GrpSubgroup(group_table_of(h.g), hs_ids).as_group()
    dg, demb = GrpSubgroup(group_table_of(h.gamma), ds_ids).as_group()
    dom = direct_product(direct_product(tg, hg), dg)
    e_g, e_h = h.g.identity_id, h.gamma.identity_id
    img = np.empty(dom.size, dtype=np.int64)
    for v in range(dom.size):
        ab, k = divmod(v, dg.size)
        a, j = divmod(ab, hg.size)
        u = h.mul_ids(h._id(a, e_g, e_h), h._id(0, int(hemb[j]), e_h))
        img[v] = h.mul_ids(u, h._id(0, e_g, int(demb[k])))
    by_table = K.hom_violation(dom.table, h.group.table, img)[0] < 0
    if by_pairing != by_table:
        raise ConsistencyError("pairing criterion and table check disagree on the embedding")
    return by_pairing


# --------------------------------------------------------------------------
# the twist
# --------------------------------------------------------------------------

@dataclass
class Twist:
    source: HeisGroup
    target: HeisGroup
    hom: GrpHom                 # J: H(beta) -> H(beta^T)
    back: GrpHom                # J for beta^T: H(beta^T) -> H(beta)
    square: GrpHom              # J o J on H(beta)
    inverse_differs: bool       # J_beta^-1 != J_{beta^T}

    def __call__(self, a: HeisElement) -> HeisElement:
        return self.target.element_at(self.hom(self.source.index(a)))


def _twist_images(src: HeisGroup, dst: HeisGroup) -> np.ndarray:
    tt, ti = src.torus.table, src.torus.inverse
    img = np.empty(src.order, dtype=np.int64)
    for u in range(src.order):
        c, x, xi = src._split(u)
        cc = int(tt[c, ti[src.form.table[xi, x]]])
        img[u] = dst._id(cc, int(src.gamma.inverse[xi]), x)
    return img


def twist(h: HeisGroup) -> Twist:
    """J(c, x, xi) = (c - beta(xi, x), -xi, x) into H(beta^T), with J^2 = 1 x j^2."""
    b = h.form
    if not isinstance(b, BilinearForm):
        raise InputError("the twist needs abelian G and Gamma")
    if not b.is_duality():
        raise InputError("the twist needs a duality (nondegenerate form)")
    dst = HeisGroup(b.transpose())
    j = GrpHom(h.group, dst.group, _twist_images(h, dst))
    if not j.is_isomorphism():
        raise ConsistencyError("twist is not bijective")
    back = GrpHom(dst.group, h.group, _twist_images(dst, h))
    sq = GrpHom(h.group, h.group, back.images[j.images], check=False)
    expect = np.array([h._id(c, int(h.g.inverse[x]), int(h.gamma.inverse[xi]))
                       for c, x, xi in map(h._split, range(h.order))])
    if (sq.images != expect).any():
        raise ConsistencyError("J^2 is not 1 x j^2")
    jinv = j.inverse()
    if (jinv.images != sq.images[back.images]).any():
        raise ConsistencyError("J^-1 differs from J_{beta^T} o J^2")
    return Twist(h, dst, j, back, sq, bool((jinv.images != back.images).any()))


# --------------------------------------------------------------------------
# Heisenberg objects: extensions with a bisection
# --------------------------------------------------------------------------

@dataclass
class HeisObject:
    """A central extension with a bisection (G~, Gamma~) over the torus.

    ``split`` optionally fixes identifications G~/T = A and Gamma~/T = B as
    ``(A, a_of, B, b_of)`` with ``a_of[u]`` the A-id of u in G~ (-1 elsewhere).
    """
    ext: CentralExtension
    g_tilde: GrpSubgroup
    gamma_tilde: GrpSubgroup
    split: tuple | None = None

    def check(self) -> dict:
        h = self.ext.total
        t = self.ext.torus_subgroup()
        g, gm = self.g_tilde, self.gamma_tilde
        flags = {
            "subgroups": g.is_subgroup() and gm.is_subgroup(),
            "contain_torus": t.issubset(g) and t.issubset(gm),
            "meet_is_torus": g.meet(gm) == t,
            "product_is_whole": g.product_set(gm).order == h.size,
            "abelian": g.is_abelian() and gm.is_abelian(),
        }
        flags["maximal_abelian"] = is_maximal_abelian(h, g) and is_maximal_abelian(h, gm)
        flags["strictly_central"] = self.ext.is_strictly_central()
        return flags

    def validate(self, require=("subgroups", "contain_torus", "meet_is_torus", "product_is_whole")):
        flags = self.check()
        bad = [k for k in require if not flags[k]]
        if bad:
            raise InputError(f"not a valid bisection: {bad}")
        return flags


def heis_object(h: HeisGroup) -> HeisObject:
    """H(beta) with its standard bisection and the identifications G~/T = G, Gamma~/T = Gamma."""
    ext = h.extension()
    a_of = np.full(h.order, -1, dtype=np.int64)
    b_of = np.full(h.order, -1, dtype=np.int64)
    gt, gmt = h.g_tilde(), h.gamma_tilde()
    a_of[gt.array] = [h._split(u)[1] for u in gt.array]
    b_of[gmt.array] = [h._split(u)[2] for u in gmt.array]
    return HeisObject(ext, gt, gmt, (h.g, a_of, h.gamma, b_of))


def epsilon_of_form(b: BilinearForm) -> CentralExtension:
    return HeisGroup(b).extension()


def beta_of_extension(ext: CentralExtension, g_rank: int) -> BilinearForm:
    """beta(xi, x) = omega((0, xi), (x, 0)) for a phase group split as G + Gamma by rank."""
    p = ext.phase
    g, gm = FinAbGroup(p.orders[:g_rank]), FinAbGroup(p.orders[g_rank:])
    w = ext.commutator_form()
    vals = [[w.torus.element(w.table[p.index(p.generator(g_rank + i)), p.index(p.generator(j))])
             for j in range(g.rank)] for i in range(gm.rank)]
    return BilinearForm(gm, g, ext.torus, vals)


# --------------------------------------------------------------------------
# reconstruction from a normal splitting
# --------------------------------------------------------------------------

def _factor(e: FiniteGroup, sub: GrpSubgroup):
    """A group for a complement: ``(grp, emb)`` with ``emb[i]`` the e-id of element i."""
    if sub.is_abelian():
        a, to_a = abelian_structure(e.table, sub.ids, e.identity)
        emb = np.empty(a.size, dtype=np.int64)
        emb[to_a[sub.array]] = sub.array
        return a, emb
    return sub.as_group()


def reconstruct(e: FiniteGroup, k: GrpSubgroup, n: GrpSubgroup):
    """``(beta, iso, h)``: a form with e = H(beta) via the normal splitting (K, N).

    With complements X of T = K n N in K and Y in N, beta(xi, x) = [y_xi, x_x]
    and phi(c, x, xi) = c x y is inverted to give iso: e -> H(beta).
    """
    comps = is_normal_splitting(e, k, n)
    if comps is None:
        raise InputError("(K, N) is not a normal splitting")
    xs, ys = comps
    tsub = k.meet(n)
    t, to_t = abelian_structure(e.table, tsub.ids, e.identity)
    t_emb = np.empty(t.size, dtype=np.int64)
    t_emb[to_t[tsub.array]] = tsub.array
    g, g_emb = _factor(e, xs)
    gm, gm_emb = _factor(e, ys)
    vals = to_t[e.commutators[np.ix_(gm_emb, g_emb)]]
    if (vals < 0).any():
        raise ConsistencyError("commutators of the complements leave the torus")
    if isinstance(g, FinAbGroup) and isinstance(gm, FinAbGroup):
        form = BilinearForm(gm, g, t, [[t.element(vals[gm.index(gm.generator(i)), g.index(g.generator(j))])
                                        for j in range(g.rank)] for i in range(gm.rank)])
        if not (form.table == vals).all():
            raise ConsistencyError("commutator pairing is not bilinear")
    else:
        form = TableForm(gm, g, t, vals)
    h = HeisGroup(form)
    phi = np.empty(h.order, dtype=np.int64)
    for u in range(h.order):
        c, x, xi = h._split(u)
        phi[u] = e.table[e.table[t_emb[c], g_emb[x]], gm_emb[xi]]
    fwd = GrpHom(h.group, e, phi)
    if not fwd.is_isomorphism():
        raise ConsistencyError("c x y is not a bijection onto the group")
    iso = fwd.inverse()
    if (GrpSubgroup(h.group, iso.images[tsub.array]) != h.torus_subgroup()
            or GrpSubgroup(h.group, iso.images[k.array]) != h.g_tilde()
            or GrpSubgroup(h.group, iso.images[n.array]) != h.gamma_tilde()):
        raise ConsistencyError("isomorphism does not carry (T, K, N) to (T~, G~, Gamma~)")
    if is_maximal_abelian(e, k) and is_maximal_abelian(e, n) and not form.is_duality():
        raise ConsistencyError("abelian splitting gave a degenerate form")
    return form, iso, h


# --------------------------------------------------------------------------
# from Heisenberg objects back to forms
# --------------------------------------------------------------------------

def _quotient_ident(obj: HeisObject, sub: GrpSubgroup):
    """``(A, a_of)``: a FinAbGroup for sub/T and the A-id of each member of sub."""
    h = obj.ext.total
    q, qh = quotient(h, obj.ext.torus_subgroup())
    ids = np.unique(qh.images[sub.array])
    a, to_a = abelian_structure(q.table, ids, q.identity)
    a_of = np.full(h.size, -1, dtype=np.int64)
    a_of[sub.array] = to_a[qh.images[sub.array]]
    return a, a_of


def _form_and_maps(obj: HeisObject):
    ext = obj.ext
    h = ext.total
    if not (obj.g_tilde.is_abelian() and obj.gamma_tilde.is_abelian()):
        raise InputError("bisection is not abelian")
    if obj.split is not None:
        a, a_of, b, b_of = obj.split
    else:
        a, a_of = _quotient_ident(obj, obj.g_tilde)
        b, b_of = _quotient_ident(obj, obj.gamma_tilde)
    a_lift = np.empty(a.size, dtype=np.int64)
    b_lift = np.empty(b.size, dtype=np.int64)
    for u in obj.g_tilde.array[::-1]:
        a_lift[a_of[u]] = u
    for u in obj.gamma_tilde.array[::-1]:
        b_lift[b_of[u]] = u
    tor = np.full(h.size, -1, dtype=np.int64)
    tor[ext.inj] = np.arange(ext.torus.size)
    vals = tor[h.commutators[np.ix_(b_lift, a_lift)]]
    if (vals < 0).any():
        raise InputError("commutators of the bisection leave the torus")
    full = tor[h.commutators[np.ix_(obj.gamma_tilde.array, obj.g_tilde.array)]]
    if (full != vals[np.ix_(b_of[obj.gamma_tilde.array], a_of[obj.g_tilde.array])]).any():
        raise ConsistencyError("commutator pairing is not constant on torus cosets")
    t = ext.torus
    form = BilinearForm(b, a, t, [[t.element(vals[b.index(b.generator(i)), a.index(a.generator(j))])
                                   for j in range(a.rank)] for i in range(b.rank)])
    if not (form.table == vals).all():
        raise ConsistencyError("commutator pairing is not bilinear")
    return form, a_of, b_of


def form_from_heis(obj: HeisObject) -> BilinearForm:
    """beta(xi~ T, x~ T) = [xi~, x~] on Gamma~/T x G~/T; asserted nondegenerate."""
    obj.validate()
    if not obj.ext.is_strictly_central():
        raise InputError("extension is not strictly central")
    form, _, _ = _form_and_maps(obj)
    if not form.is_duality():
        raise ConsistencyError("commutator form of a strictly central extension is degenerate")
    return form


def adjunction_unit(obj: HeisObject):
    """``(beta, alpha)`` with alpha(c x~ xi~) = c(x~ T, xi~ T): H -> H(beta).

    x~ and xi~ range over complements of the torus in G~ and Gamma~; alpha is
    verified to be an isomorphism carrying the bisection onto the standard one.
    """
    obj.validate()
    form, a_of, b_of = _form_and_maps(obj)
    ext = obj.ext
    h = ext.total
    ts = ext.torus_subgroup()
    xs = find_complement(h, obj.g_tilde, ts)
    ys = find_complement(h, obj.gamma_tilde, ts)
    if xs is None or ys is None:
        raise InputError("the bisection does not split over the torus")
    hb = HeisGroup(form)
    img = np.full(h.size, -1, dtype=np.int64)
    for c in range(ext.torus.size):
        for x in xs.array:
            cx = h.table[ext.inj[c], x]
            for y in ys.array:
                img[h.table[cx, y]] = hb._id(c, int(a_of[x]), int(b_of[y]))
    if (img < 0).any():
        raise ConsistencyError("c x y does not exhaust the group")
    alpha = GrpHom(h, hb.group, img)
    if not alpha.is_isomorphism():
        raise ConsistencyError("unit map is not bijective")
    if (GrpSubgroup(hb.group, img[obj.g_tilde.array]) != hb.g_tilde()
            or GrpSubgroup(hb.group, img[obj.gamma_tilde.array]) != hb.gamma_tilde()
            or (img[ext.inj] != hb.torus_subgroup().array).any()):
        raise ConsistencyError("unit map does not respect the bisections")
    return form, alpha


def heis_from_form_expanded(b: BilinearForm) -> HeisObject:
    """H(beta) over the expanded torus T + G0 + Gamma0; always strictly central."""
    h = HeisGroup(b)
    g0_ids, h0_ids = h.kernel_ids()
    g0, g0_to = abelian_structure(b.g.table, g0_ids)
    h0, h0_to = abelian_structure(b.gamma.table, h0_ids)
    g0_emb = np.empty(g0.size, dtype=np.int64)
    g0_emb[g0_to[g0_ids]] = g0_ids
    h0_emb = np.empty(h0.size, dtype=np.int64)
    h0_emb[h0_to[h0_ids]] = h0_ids
    torus = direct_sum(b.torus, g0, h0)
    inj = np.empty(torus.size, dtype=np.int64)
    for i in range(torus.size):
        c, r = divmod(i, g0.size * h0.size)
        gi, hi = divmod(r, h0.size)
        inj[i] = h._id(c, int(g0_emb[gi]), int(h0_emb[hi]))
    gq, g_q = quotient_map(b.g, AbSubgroup(b.g, g0_ids))
    hq, h_q = quotient_map(b.gamma, AbSubgroup(b.gamma, h0_ids))
    phase = direct_sum(gq, hq)
    proj = np.array([g_q[x] * hq.size + h_q[xi] for _, x, xi in map(h._split, range(h.order))], dtype=np.int64)
    ext = CentralExtension(h.group, torus, phase, inj, proj)
    if not ext.is_strictly_central():
        raise ConsistencyError("expanded extension is not strictly central")
    gt = GrpSubgroup(h.group, h._ids_where(xi=h0_ids))
    gmt = GrpSubgroup(h.group, h._ids_where(x=g0_ids))
    a_of = np.full(h.order, -1, dtype=np.int64)
    b_of = np.full(h.order, -1, dtype=np.int64)
    a_of[gt.array] = g_q[gt.array // h.nh % h.ng]
    b_of[gmt.array] = h_q[gmt.array % h.nh]
    obj = HeisObject(ext, gt, gmt, (gq, a_of, hq, b_of))
    bar = _induced_form(b, gq, g_q, hq, h_q)
    if not bar.is_duality():
        raise ConsistencyError("induced form on the quotients is degenerate")
    w = ext.commutator_form()
    expected = phase_form(bar)
    emb_t = AbHom(b.torus, torus, tuple(torus.normalize(tuple(b.torus.generator(i)) + (0,) * (g0.rank + h0.rank))
                                       for i in range(b.torus.rank)))
    if (w.table != emb_t.table[expected.table]).any():
        raise ConsistencyError("commutator form differs from beta(xi, y) - beta(eta, x)")
    obj.validate()
    return obj


def _induced_form(b: BilinearForm, gq: FinAbGroup, g_q, hq: FinAbGroup, h_q) -> BilinearForm:
    """beta on G/G0 x Gamma/Gamma0 through least-id lifts."""
    g_lift = np.empty(gq.size, dtype=np.int64)
    for x in range(b.g.size - 1, -1, -1):
        g_lift[g_q[x]] = x
    h_lift = np.empty(hq.size, dtype=np.int64)
    for xi in range(b.gamma.size - 1, -1, -1):
        h_lift[h_q[xi]] = xi
    vals = [[b.torus.element(b.table[h_lift[hq.index(hq.generator(i))], g_lift[gq.index(gq.generator(j))]])
             for j in range(gq.rank)] for i in range(hq.rank)]
    return BilinearForm(hq, gq, b.torus, vals)


# --------------------------------------------------------------------------
# pushforward along a torus map
# --------------------------------------------------------------------------

@dataclass
class Pushforward:
    obj: HeisObject
    can: GrpHom                       # H -> t_+ H, u -> (0, u) Z
    t: AbHom
    flags: dict = field(default_factory=dict)


def _product_ext(obj: HeisObject, t: AbHom):
    ext = obj.ext
    h = ext.total
    tp = t.codomain
    prod = direct_product(group_table_of(tp), h)
    nh = h.size
    zid = [int(t.table[c]) * nh + int(ext.inj[ext.torus.inverse[c]]) for c in range(ext.torus.size)]
    return prod, GrpSubgroup(prod, zid)


def pushforward(obj: HeisObject, t: AbHom) -> Pushforward:
    """t_+[H] = (T' x H)/Z with Z = {(t c, inj(c)^-1)}.

    Always asserted: exactness, centrality, G~' n Gamma~' = T', G~' Gamma~' = t_+H.
    Maximal abelianness of the new bisection and Z(t_+H) = (T' x Z(H))/Z hold only
    when t is injective on the values of the commutator form; they are asserted in
    that case and otherwise reported in ``flags``.  The general centre
    {(c', u)Z : t o omega(pi u, .) = 0} is always asserted.
    """
    ext = obj.ext
    if t.domain != ext.torus:
        raise InputError("t must start at the torus of the extension")
    h = ext.total
    tp = t.codomain
    if tp.size * h.size > PUSHFORWARD_MAX:
        raise ResourceError(f"|T'| |H| = {tp.size * h.size} exceeds {PUSHFORWARD_MAX}")
    prod, z = _product_ext(obj, t)
    q, qh = quotient(prod, z)
    nh = h.size
    inj = qh.images[np.arange(tp.size) * nh + h.identity]
    proj = np.empty(q.size, dtype=np.int64)
    proj[qh.images] = ext.proj[np.arange(prod.size) % nh]
    new_ext = CentralExtension(q, tp, ext.phase, inj, proj)
    can = GrpHom(h, q, qh.images[np.arange(nh)])

    def lift(sub):
        ids = [a * nh + int(u) for a in range(tp.size) for u in sub.array]
        return GrpSubgroup(q, np.unique(qh.images[ids]))

    res = HeisObject(new_ext, lift(obj.g_tilde), lift(obj.gamma_tilde))
    flags = res.validate(("subgroups", "contain_torus", "meet_is_torus", "product_is_whole"))
    if obj.g_tilde.is_abelian() and obj.gamma_tilde.is_abelian() and not flags["abelian"]:
        raise ConsistencyError("pushforward of an abelian bisection is not abelian")
    if (can.images[ext.inj] != inj[t.table]).any():
        raise ConsistencyError("canonical map does not lie over t")

    w = ext.commutator_form()
    tw = t.table[w.table]
    general = np.flatnonzero((tw[proj] == 0).all(axis=1))
    zq = center(q)
    if zq != GrpSubgroup(q, general):
        raise ConsistencyError("centre of the pushforward differs from {u : t omega(pi u, .) = 0}")
    zh = center(h)
    naive = GrpSubgroup(q, np.unique(qh.images[[a * nh + int(u) for a in range(tp.size) for u in zh.array]]))
    vals = np.unique(w.table)
    injective_on_values = len(np.unique(t.table[vals])) == len(vals)
    flags["center_is_torus_times_center"] = zq == naive
    flags["t_injective_on_form_values"] = injective_on_values
    if injective_on_values and not (flags["center_is_torus_times_center"] and (flags["maximal_abelian"] or not flags["abelian"])):
        raise ConsistencyError("pushforward along t injective on form values lost maximality or the centre formula")
    out = Pushforward(res, can, t, flags)
    if q.size <= UNIVERSAL_CHECK_MAX:
        flags["universal"] = universal_property_check(out, res.ext, can)
        if not flags["universal"]:
            raise ConsistencyError("canonical map is not universal")
    return out


def universal_property_check(push: Pushforward, target: CentralExtension, f: GrpHom) -> bool:
    """Exactly one g: t_+H -> target with g o inj' = inj_target and g o can = f?

    ``f`` must be a homomorphism H -> target lying over t.  Candidates are all
    homomorphisms t_+H -> target restricting to the torus
    identification, enumerated exhaustively.
    """
    q = push.obj.ext.total
    if q.size > UNIVERSAL_CHECK_MAX or target.total.size > UNIVERSAL_CHECK_MAX:
        raise ResourceError("universal property is only checked up to order 16")
    src = push.obj.ext
    if target.torus != src.torus:
        raise InputError("target must have the same torus as the pushforward")
    # a mediating morphism is one of extensions, so it is the identity on the torus
    count = 0
    for g in enumerate_homs(q, target.total, fixed=dict(zip(src.inj.tolist(), target.inj.tolist()))):
        if (g.images[push.can.images] == f.images).all():
            count += 1
    return count == 1


def splitting_equivalence(e: FiniteGroup, k: GrpSubgroup, n: GrpSubgroup):
    """Check that e, as an extension by T = K n N, is equivalent to the one of H(beta).

    Returns ``(form, iso)``, or None when e/T is not abelian (then e is not an
    extension with abelian phase group and there is nothing to compare).
    The iso must fix torus ids and induce a bijection of phase groups.
    """
    form, iso, h = reconstruct(e, k, n)
    t = k.meet(n)
    q, qh = quotient(e, t)
    if not q.is_abelian:
        return None
    t_ids = np.sort(h._ids_where(x=[h.g.identity_id], xi=[h.gamma.identity_id]))
    if sorted(iso.images[t.array].tolist()) != t_ids.tolist():
        raise ConsistencyError("isomorphism does not fix the torus")
    phase_of = iso.images % h.n_phase
    induced = np.full(q.size, -1, dtype=np.int64)
    for u in range(e.size):
        c = qh.images[u]
        if induced[c] < 0:
            induced[c] = phase_of[u]
        elif induced[c] != phase_of[u]:
            raise ConsistencyError("isomorphism does not induce a map of phase groups")
    if len(np.unique(induced)) != h.n_phase:
        raise ConsistencyError("induced map of phase groups is not bijective")
    return form, iso
