"""Alternating forms on finite abelian phase groups.

Orthogonals, the biorthogonal closure, isotropy classes, the lattice of
closed subgroups, Lagrangian bisections, and an exhaustive checker for the
correspondence between subgroups of a phase group P and subgroups of a
central extension H that contain the torus.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels as K
from .errors import ConsistencyError, InputError, ResourceError
from .finab import AbSubgroup, FinAbGroup, elements_killed_by, enumerate_subgroups, max_order
from .grp import GrpSubgroup, center, centralizer, cyclic_subgroup_masks

SUBGROUP_CAP = 10_000


class AlternatingForm:
    """omega: P x P -> T given by its full id table."""

    def __init__(self, p: FinAbGroup, torus: FinAbGroup, table, check: bool = True):
        if p.size > max_order():
            raise ResourceError(f"|P| = {p.size} exceeds the bound {max_order()}")
        table = np.array(table, dtype=np.int64)
        if table.shape != (p.size, p.size):
            raise InputError(f"table must be {p.size}x{p.size}")
        if table.size and (table.min() < 0 or table.max() >= torus.size):
            raise InputError("table entries must be torus ids")
        table.setflags(write=False)
        self.p, self.torus, self.table = p, torus, table
        if check:
            if (np.diag(table) != 0).any():
                z = int(np.flatnonzero(np.diag(table))[0])
                raise InputError(f"omega(z, z) != 0 for z = {p.element(z)}")
            bad = K.left_linearity_violation(table, p.table, torus.table)
            if bad[0] >= 0:
                raise InputError(f"omega is not bilinear at {bad}")

    def __repr__(self):
        return f"AlternatingForm({self.p} -> {self.torus})"

    def __eq__(self, other):
        return (isinstance(other, AlternatingForm) and self.p == other.p and self.torus == other.torus
                and bool((self.table == other.table).all()))

    def __hash__(self):
        return hash((self.p, self.torus, self.table.tobytes()))

    def __add__(self, other: "AlternatingForm") -> "AlternatingForm":
        return AlternatingForm(self.p, self.torus, self.torus.table[self.table, other.table], check=False)

    def eval(self, z, w):
        return self.torus.element(self.table[self.p.index(z), self.p.index(w)])

    @classmethod
    def from_matrix(cls, p: FinAbGroup, torus: FinAbGroup, matrix) -> "AlternatingForm":
        """From generator values ``matrix[i][j] = omega(e_i, e_j)``.

        Only the strict upper triangle is read; the rest is completed by
        antisymmetry and a zero diagonal.
        """
        r = p.rank
        m = np.zeros((r, r, torus.rank), dtype=np.int64)
        for i in range(r):
            for j in range(i + 1, r):
                v = torus.normalize(matrix[i][j])
                g = np.gcd(p.orders[i], p.orders[j])
                if any(torus.scale(g, v)):
                    raise InputError(f"omega(e_{i}, e_{j}) = {v} is not killed by gcd of the orders")
                m[i, j] = v
                m[j, i] = torus.normalize(torus.neg(v))
        raw = np.einsum("ai,bj,ijk->abk", p.coords, p.coords, m)
        return cls(p, torus, torus.ids_of(raw), check=False)

    @cached_property
    def radical(self) -> AbSubgroup:
        return AbSubgroup(self.p, np.flatnonzero((self.table == 0).all(axis=1)))

    def is_nondegenerate(self) -> bool:
        return self.radical.order == 1

    def is_trivial(self) -> bool:
        return not self.table.any()

    def to_json(self) -> dict:
        return {"p": self.p.to_json(), "torus": self.torus.to_json(),
                "table": [[list(self.torus.element(v)) for v in row] for row in self.table]}

    @classmethod
    def from_json(cls, data) -> "AlternatingForm":
        try:
            p, t = FinAbGroup.from_json(data["p"]), FinAbGroup.from_json(data["torus"])
            rows = data["table"]
            if len(rows) != p.size or any(len(r) != p.size for r in rows):
                raise InputError(f"table must be {p.size}x{p.size}")
            ids = [[t.index(v) for v in row] for row in rows]
        except (KeyError, TypeError) as exc:
            raise InputError(f"alternating-form JSON is malformed: {exc}") from exc
        return cls(p, t, ids)


def all_alternating_forms(p: FinAbGroup, torus: FinAbGroup):
    """Every alternating form P x P -> T, via generator values."""
    pairs = [(i, j) for i in range(p.rank) for j in range(i + 1, p.rank)]
    choices = [elements_killed_by(torus, int(np.gcd(p.orders[i], p.orders[j]))) for i, j in pairs]
    for pick in itertools.product(*choices):
        m = [[torus.zero] * p.rank for _ in range(p.rank)]
        for (i, j), v in zip(pairs, pick):
            m[i][j] = v
        yield AlternatingForm.from_matrix(p, torus, m)


def random_alternating_form(p: FinAbGroup, torus: FinAbGroup, rng) -> AlternatingForm:
    m = [[torus.zero] * p.rank for _ in range(p.rank)]
    for i in range(p.rank):
        for j in range(i + 1, p.rank):
            opts = elements_killed_by(torus, int(np.gcd(p.orders[i], p.orders[j])))
            m[i][j] = opts[int(rng.integers(len(opts)))]
    return AlternatingForm.from_matrix(p, torus, m)


def phase_form(b) -> AlternatingForm:
    """omega((x,xi),(y,eta)) = beta(xi,y) - beta(eta,x) on P = G + Gamma.

    P ids are ``x_id * |Gamma| + xi_id``, matching the concatenated orders.
    """
    p = FinAbGroup(b.g.orders + b.gamma.orders)
    ng = b.gamma.size
    x, xi = np.divmod(np.arange(p.size), ng)
    first = b.table[xi[:, None], x[None, :]]
    second = b.table[xi[None, :], x[:, None]]
    return AlternatingForm(p, b.torus, b.torus.table[first, b.torus.inverse[second]], check=False)


# --------------------------------------------------------------------------
# orthogonals and classification
# --------------------------------------------------------------------------

def orthogonal(w: AlternatingForm, s: AbSubgroup) -> AbSubgroup:
    return AbSubgroup(w.p, np.flatnonzero(K.perp_mask(w.table, np.asarray(s.ids, dtype=np.int64))))


def closure(w: AlternatingForm, s: AbSubgroup) -> AbSubgroup:
    return orthogonal(w, orthogonal(w, s))


@dataclass(frozen=True)
class SubgroupClass:
    subgroup: AbSubgroup
    symplectic: bool
    isotropic: bool
    coisotropic: bool
    lagrangian: bool
    closed: bool

    @property
    def flags(self) -> dict:
        return {k: getattr(self, k) for k in ("symplectic", "isotropic", "coisotropic", "lagrangian", "closed")}


def classify(w: AlternatingForm, s: AbSubgroup) -> SubgroupClass:
    perp = orthogonal(w, s)
    return SubgroupClass(
        subgroup=s,
        symplectic=s.meet(perp).order == 1,
        isotropic=s.issubset(perp),
        coisotropic=perp.issubset(s),
        lagrangian=perp == s,
        closed=orthogonal(w, perp) == s,
    )


def _subgroups(w: AlternatingForm):
    return enumerate_subgroups(w.p, cap=SUBGROUP_CAP)


# --------------------------------------------------------------------------
# closed-subgroup lattice
# --------------------------------------------------------------------------

@dataclass
class ClosedLattice:
    form: AlternatingForm
    nodes: list
    covers: list = field(default_factory=list)   # (lower index, upper index)

    def index(self, s: AbSubgroup) -> int:
        return self.nodes.index(s)

    def meet(self, a: AbSubgroup, b: AbSubgroup) -> AbSubgroup:
        return a.meet(b)

    def join(self, a: AbSubgroup, b: AbSubgroup) -> AbSubgroup:
        return closure(self.form, a.join(b))

    def perp(self, a: AbSubgroup) -> AbSubgroup:
        return orthogonal(self.form, a)

    def to_dot(self, name: str = "closed") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, s in enumerate(self.nodes):
            label = "[" + ",".join("(" + ",".join(map(str, g)) + ")" for g in s.generators) + "]"
            lines.append(f'  n{i} [label="{label}"];')
        for lo, hi in self.covers:
            lines.append(f"  n{lo} -> n{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class _SubgroupTables:
    """All subgroups of P with meet, join, perp and inclusion as index tables."""

    def __init__(self, w: AlternatingForm):
        self.subs = _subgroups(w)
        n, m = len(self.subs), w.p.size
        masks = np.zeros((n, m), dtype=np.bool_)
        for i, s in enumerate(self.subs):
            masks[i, list(s.ids)] = True
        self.masks = masks
        key = {masks[i].tobytes(): i for i in range(n)}
        self.perp = np.array([key[K.perp_mask(w.table, np.asarray(s.ids, dtype=np.int64)).tobytes()]
                              for s in self.subs], dtype=np.int64)
        self.meet = np.empty((n, n), dtype=np.int64)
        self.join = np.empty((n, n), dtype=np.int64)
        add = w.p.table
        for i, a in enumerate(self.subs):
            ia = np.asarray(a.ids)
            both = masks[i][None, :] & masks
            for j, b in enumerate(self.subs):
                self.meet[i, j] = key[both[j].tobytes()]
                sm = np.zeros(m, dtype=np.bool_)
                sm[add[np.ix_(ia, np.asarray(b.ids))].ravel()] = True
                self.join[i, j] = key[sm.tobytes()]
        mi = masks.astype(np.int32)
        self.sub = (mi @ (1 - mi).T) == 0          # sub[a, b]: a <= b
        self.cl = self.perp[self.perp]


def closed_lattice(w: AlternatingForm, tables: _SubgroupTables | None = None) -> ClosedLattice:
    st = tables or _SubgroupTables(w)
    n = len(st.subs)
    idx = np.flatnonzero(st.cl == np.arange(n))
    closed = np.zeros(n, dtype=np.bool_)
    closed[idx] = True
    perp, cl, meet, join, sub = st.perp, st.cl, st.meet, st.join, st.sub
    # perp is an involution of Cl(P), lattice operations stay inside Cl(P),
    # perp reverses order and swaps meet and join
    if not (closed[perp[idx]].all() and (perp[perp[idx]] == idx).all()):
        raise ConsistencyError("perp does not act as an involution on Cl(P)")
    A, B = np.ix_(idx, idx)
    m, j = meet[A, B], cl[join[A, B]]
    if not (closed[m].all() and closed[j].all()):
        raise ConsistencyError("Cl(P) not closed under meet/join")
    if (sub[A, B] & ~sub[perp[B], perp[A]]).any():
        raise ConsistencyError("perp is not order-reversing")
    pa, pb = perp[idx][:, None], perp[idx][None, :]
    if (perp[m] != cl[join[pa, pb]]).any() or (perp[j] != meet[pa, pb]).any():
        raise ConsistencyError("perp does not swap meet and join")
    nodes = [st.subs[i] for i in idx]
    s2 = sub[A, B] & ~np.eye(len(idx), dtype=np.bool_)
    covers = []
    for a in range(len(idx)):
        for b in np.flatnonzero(s2[a]):
            if not (s2[a] & s2[:, b]).any():
                covers.append((a, int(b)))
    return ClosedLattice(w, nodes, covers)


def lagrangian_bisections(w: AlternatingForm) -> list:
    """All ordered pairs (G, Gamma) of Lagrangians with G + Gamma = P direct."""
    subs = _subgroups(w)
    lag = [s for s in subs if orthogonal(w, s) == s]
    out = []
    for a in lag:
        for b in lag:
            total = a.join(b).order == w.p.size
            trivial = a.meet(b).order == 1
            if total and w.is_nondegenerate() and not trivial:
                raise ConsistencyError("Lagrangians with G + Gamma = P but nontrivial intersection")
            if total and trivial:
                out.append((a, b))
    return out


# --------------------------------------------------------------------------
# law checks
# --------------------------------------------------------------------------

def galois_report(w: AlternatingForm) -> dict:
    """Exhaustively check the Galois-connection and lattice laws.

    Returns ``{law: (ok, counterexample)}`` plus ``strict_meet_inclusions``,
    the number of pairs with (A cap B)^perp strictly larger than A^perp + B^perp.
    """
    st = _SubgroupTables(w)
    subs, perp, cl, meet, join, sub = st.subs, st.perp, st.cl, st.meet, st.join, st.sub
    n = len(subs)
    res = {}

    def law(name, bad, pair=True):
        hits = np.argwhere(bad)
        if not len(hits):
            res[name] = (True, None)
        elif pair:
            res[name] = (False, (subs[hits[0][0]], subs[hits[0][1]]))
        else:
            res[name] = (False, subs[hits[0][0]])

    ar = np.arange(n)
    law("extensive", ~sub[ar, cl], pair=False)
    law("idempotent", (cl[cl] != cl), pair=False)
    law("antitone", sub & ~sub[perp[None, :], perp[:, None]])
    pa, pb = perp[:, None], perp[None, :]
    law("sum_to_meet", perp[join] != meet[pa, pb])
    big, small = perp[meet], join[pa, pb]
    law("meet_contains_sum", ~sub[small, big])
    try:
        closed_lattice(w, st)
        res["closed_lattice"] = (True, None)
    except ConsistencyError as exc:
        res["closed_lattice"] = (False, str(exc))
    res["strict_meet_inclusions"] = int((sub[small, big] & (small != big)).sum())
    return res


def lagrangian_extremality(w: AlternatingForm) -> dict:
    """Lagrangian <=> maximal in Iso <=> maximal in Iso' <=> minimal in Co'.

    Iso' and Co' are the isotropic / coisotropic subgroups that are closed.
    Returns the four sets (as id tuples) and whether they coincide.
    """
    subs = _subgroups(w)
    cls = [classify(w, s) for s in subs]
    iso = [c.subgroup for c in cls if c.isotropic]
    iso_c = [c.subgroup for c in cls if c.isotropic and c.closed]
    co_c = [c.subgroup for c in cls if c.coisotropic and c.closed]
    lag = {c.subgroup.ids for c in cls if c.lagrangian}

    def maximal(family):
        return {a.ids for a in family if not any(a != b and a.issubset(b) for b in family)}

    def minimal(family):
        return {a.ids for a in family if not any(a != b and b.issubset(a) for b in family)}

    out = {"lagrangian": lag, "max_iso": maximal(iso), "max_iso_closed": maximal(iso_c),
           "min_co_closed": minimal(co_c)}
    out["ok"] = lag == out["max_iso"] == out["max_iso_closed"] == out["min_co_closed"]
    return out


def minimal_coisotropic_search(w: AlternatingForm) -> list:
    """Subgroups minimal among all coisotropic ones that are not Lagrangian.

    Reports what it finds; nothing is asserted.
    """
    cls = [classify(w, s) for s in _subgroups(w)]
    co = [c for c in cls if c.coisotropic]
    out = []
    for c in co:
        if any(d.subgroup != c.subgroup and d.subgroup.issubset(c.subgroup) for d in co):
            continue
        if not c.lagrangian:
            out.append(c.subgroup)
    return out


# --------------------------------------------------------------------------
# correspondence with subgroups of a central extension
# --------------------------------------------------------------------------

@dataclass
class CorrespondenceReport:
    items: dict
    n_subgroups_p: int
    n_subgroups_over_torus: int
    n_subgroups_h: int | None
    counterexamples: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.items.values())


def _subgroups_containing(h, base: GrpSubgroup, cap: int = SUBGROUP_CAP) -> list:
    """Subgroups of h containing base: joins of base with cyclic subgroups."""
    cyc = cyclic_subgroup_masks(h)
    start = base.mask.copy()
    found = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for c in cyc:
                if (c & ~m).any():
                    j = K.closure_mask(h.table, m | c)
                    if j.tobytes() not in found:
                        found[j.tobytes()] = j
                        nxt.append(j)
                        if len(found) > cap:
                            raise ResourceError("too many subgroups over the torus")
        frontier = nxt
    return [GrpSubgroup(h, np.flatnonzero(m)) for m in found.values()]


def correspondence_check(ext, count_all_h: bool = True) -> CorrespondenceReport:
    """Verify the eight-item subgroup correspondence for a central extension.

    ``ext`` needs ``total`` (FiniteGroup), ``inj`` (torus id -> total id),
    ``proj`` (total id -> phase id), ``phase`` (FinAbGroup) and
    ``commutator_form()``.
    """
    h, p = ext.total, ext.phase
    w = ext.commutator_form()
    that = GrpSubgroup(h, ext.inj)
    if not that.issubset(center(h)):
        raise InputError("extension is not central")
    proj = np.asarray(ext.proj)
    items, bad = {}, {}

    def record(name, ok, ex=None):
        if name not in items:
            items[name] = True
        if not ok and items[name]:
            items[name] = False
            bad[name] = ex

    subs_p = _subgroups(w)
    lifts = {}
    for s in subs_p:
        lifted = GrpSubgroup(h, np.flatnonzero(s.mask[proj]))
        lifts[s.ids] = lifted
        record("bijection", lifted.is_subgroup() and that.issubset(lifted)
               and AbSubgroup(p, proj[lifted.array]) == s, s)

    over = _subgroups_containing(h, that)
    record("bijection", len(over) == len(subs_p) and {o.ids for o in over} == {l.ids for l in lifts.values()})
    n_all = None
    if count_all_h and h.size <= 64:
        from .grp import subgroups as grp_subgroups
        try:
            n_all = len(grp_subgroups(h))
        except ResourceError:
            n_all = None

    record("1_abelian_iff_trivial_form", h.is_abelian == w.is_trivial())
    strict = center(h) == that
    record("2_strict_iff_nondegenerate", strict == w.is_nondegenerate())

    cls = {s.ids: classify(w, s) for s in subs_p}
    mabel = {}
    for s in subs_p:
        c, lift = cls[s.ids], lifts[s.ids]
        cent = centralizer(h, lift)
        perp_lift = GrpSubgroup(h, np.flatnonzero(orthogonal(w, s).mask[proj]))
        record("centralizer_is_lift_of_perp", cent == perp_lift, s)
        ab = lift.is_abelian()
        selfc = cent.issubset(lift)
        mabel[s.ids] = ab and selfc
        record("3_abelian_iff_isotropic", ab == c.isotropic, s)
        record("4_selfcentralizing_iff_coisotropic", selfc == c.coisotropic, s)
        record("5_maxabelian_iff_lagrangian", mabel[s.ids] == c.lagrangian, s)

    # pairwise items: H side from lifted masks and product sets, P side from orders
    n = len(subs_p)
    lmask = np.array([lifts[s.ids].mask for s in subs_p])
    lcount = lmask.sum(axis=1)
    meet_h = (lmask.astype(np.int32) @ lmask.T.astype(np.int32)) == len(that)
    pmask = np.zeros((n, p.size), dtype=np.int32)
    for i, s in enumerate(subs_p):
        pmask[i, list(s.ids)] = 1
    meet_p = (pmask @ pmask.T) == 1
    orders = pmask.sum(axis=1)
    total_p = orders[:, None] * orders[None, :] == p.size * (pmask @ pmask.T)
    lag = np.array([cls[s.ids].lagrangian for s in subs_p])
    mab = np.array([mabel[s.ids] for s in subs_p])
    for i, a in enumerate(subs_p):
        la = lifts[a.ids].array
        for j, b in enumerate(subs_p):
            if lcount[i] * lcount[j] < h.size:
                h_total = False
            else:
                prod = np.zeros(h.size, dtype=np.bool_)
                prod[h.table[np.ix_(la, lifts[b.ids].array)].ravel()] = True
                h_total = bool(prod.all())
            h_meet = bool(meet_h[i, j])
            p_total, p_meet = bool(total_p[i, j]), bool(meet_p[i, j])
            record("6_product_iff_sum", h_total == p_total, (a, b))
            record("7_intersection_iff_meet", h_meet == p_meet, (a, b))
            ab_bis = mab[i] and mab[j] and h_total and h_meet
            lag_bis = lag[i] and lag[j] and p_total and p_meet
            record("8_abelian_iff_lagrangian_bisection", ab_bis == lag_bis, (a, b))
    return CorrespondenceReport(items, len(subs_p), len(over), n_all, bad)
