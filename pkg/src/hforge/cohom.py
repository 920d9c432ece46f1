"""Low-degree cohomology of a finite abelian group P with trivial coefficients T.

Cochains are id tables of shape ``(|P|,) * degree``.  The differential uses
the trivial action, so

    (d1 h)(z, w)    = h(w) - h(z + w) + h(z)
    (d2 g)(a, b, c) = g(b, c) - g(a + b, c) + g(a, b + c) - g(a, b).

Coboundary questions are linear systems over T and are solved with the
congruence solver in :mod:`hforge.finab`, never by enumerating T^P.
Central extensions are kept as explicit group tables together with the
torus embedding, the projection and a section.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ConsistencyError, InputError, ResourceError
from .finab import (AbHom, FinAbGroup, enumerate_subgroups, hom_solve,
                    solve_lift, count_solutions)
from .forms import BilinearForm, all_forms
from .grp import FiniteGroup, GrpHom, GrpSubgroup, center
from .sympl import AlternatingForm

log = logging.getLogger(__name__)

COCYCLE_MAX_P = 81       # 9 x 9 phase groups are needed for the Z9 -> Z3 skewing example
H2_MAX_P = 8


class Cochain:
    def __init__(self, degree: int, p: FinAbGroup, torus: FinAbGroup, table):
        if degree < 0:
            raise InputError("degree must be non-negative")
        if p.size > COCYCLE_MAX_P:
            raise ResourceError(f"cochain tables are capped at |P| <= {COCYCLE_MAX_P}")
        table = np.array(table, dtype=np.int64)
        if table.shape != (p.size,) * degree:
            raise InputError(f"a degree-{degree} cochain needs a table of shape {(p.size,) * degree}")
        if table.size and (table.min() < 0 or table.max() >= torus.size):
            raise InputError("cochain values must be torus ids")
        table.setflags(write=False)
        self.degree, self.p, self.torus, self.table = degree, p, torus, table

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.degree}, {self.p} -> {self.torus})"

    def __eq__(self, other):
        return (isinstance(other, Cochain) and (self.degree, self.p, self.torus) == (other.degree, other.p, other.torus)
                and bool((self.table == other.table).all()))

    def __hash__(self):
        return hash((self.degree, self.p, self.torus, self.table.tobytes()))

    def _same_space(self, other):
        if (self.degree, self.p, self.torus) != (other.degree, other.p, other.torus):
            raise InputError("cochains live in different spaces")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same_space(other)
        return Cochain(self.degree, self.p, self.torus, self.torus.table[self.table, other.table])

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, self.p, self.torus, self.torus.inverse[self.table])

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.table.any()

    def map_values(self, t: AbHom) -> "Cochain":
        """Push values along t: T -> T'."""
        if t.domain != self.torus:
            raise InputError("value map has the wrong domain")
        return Cochain(self.degree, self.p, t.codomain, t.table[self.table])

    def pullback(self, f: AbHom) -> "Cochain":
        """Precompose every argument with f: P' -> P."""
        if f.codomain != self.p:
            raise InputError("argument map has the wrong codomain")
        idx = np.ix_(*([f.table] * self.degree)) if self.degree else ()
        return Cochain(self.degree, f.domain, self.torus, self.table[idx])

    def value(self, *args):
        idx = tuple(self.p.index(a) for a in args)
        return self.torus.element(self.table[idx])

    def to_json(self) -> dict:
        def enc(t):
            if t.ndim == 0:
                return list(self.torus.element(t))
            return [enc(s) for s in t]
        return {"degree": self.degree, "p": self.p.to_json(), "torus": self.torus.to_json(),
                "table": enc(self.table)}

    @classmethod
    def from_json(cls, data) -> "Cochain":
        try:
            p, t = FinAbGroup.from_json(data["p"]), FinAbGroup.from_json(data["torus"])
            degree = int(data.get("degree", 2))
            raw = np.array(data["table"], dtype=np.int64)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"cochain JSON is malformed: {exc}") from exc
        if raw.shape != (p.size,) * degree + (t.rank,):
            raise InputError(f"cochain table must have shape {(p.size,) * degree + (t.rank,)}")
        return cls(degree, p, t, t.ids_of(raw))


class Cocycle(Cochain):
    """A normalized 2-cocycle; non-normalized input is shifted by a constant."""

    def __init__(self, p: FinAbGroup, torus: FinAbGroup, table):
        super().__init__(2, p, torus, table)
        bad = K.cocycle_violation(p.table, torus.table, self.table)
        if bad[0] >= 0:
            a, b, c = (p.element(i) for i in bad)
            raise InputError(f"d2 != 0 at ({a}, {b}, {c})")
        c0 = int(self.table[0, 0])
        if c0:
            log.info("normalizing cocycle: subtracting the constant %s", torus.element(c0))
            shifted = torus.table[self.table, torus.inverse[c0]]
            shifted.setflags(write=False)
            self.table = shifted
        if self.table[0].any() or self.table[:, 0].any():
            raise ConsistencyError("cocycle not normalized after the constant shift")

    @classmethod
    def from_cochain(cls, c: Cochain) -> "Cocycle":
        if c.degree != 2:
            raise InputError("only degree-2 cochains can be cocycles")
        return cls(c.p, c.torus, c.table)

    @classmethod
    def from_json(cls, data) -> "Cocycle":
        return cls.from_cochain(Cochain.from_json(data))


def cocycle_defect(c: Cochain):
    """First triple where d2 c is nonzero, or None."""
    if c.degree != 2:
        raise InputError("d2 needs a degree-2 cochain")
    bad = K.cocycle_violation(c.p.table, c.torus.table, c.table)
    return None if bad[0] < 0 else tuple(c.p.element(i) for i in bad)


def differential(c: Cochain) -> Cochain:
    p, t, tab = c.p, c.torus, c.table
    add, neg = t.table, t.inverse
    if c.degree == 0:
        return Cochain(1, p, t, np.zeros(p.size, dtype=np.int64))
    if c.degree == 1:
        s = add[add[tab[None, :], neg[tab[p.table]]], tab[:, None]]
        return Cochain(2, p, t, s)
    if c.degree == 2:
        pa = p.table
        n = p.size
        a = np.arange(n)[:, None, None]
        b = np.arange(n)[None, :, None]
        cc = np.arange(n)[None, None, :]
        out = add[add[tab[b, cc], neg[tab[pa[a, b], cc]]], add[tab[a, pa[b, cc]], neg[tab[a, b]]]]
        return Cochain(3, p, t, out)
    raise InputError("the differential is only implemented up to degree 2")


def is_coboundary(c: Cochain) -> Cochain | None:
    """A 1-cochain h with d1 h = c, or None.

    Unknowns are the values h(z); any function P -> T is a homomorphism from
    the free module (Z_e)^|P| with e the exponent of T, so the search is a
    single hom_solve with one constraint per pair (z, w).
    """
    if c.degree != 2:
        raise InputError("is_coboundary expects a degree-2 cochain")
    p, t = c.p, c.torus
    n = p.size
    dom = FinAbGroup((t.exponent,) * n)
    cons = []
    for z in range(n):
        for w in range(n):
            v = [0] * n
            v[z] += 1
            v[w] += 1
            v[int(p.table[z, w])] -= 1
            cons.append((v, t.element(c.table[z, w])))
    h = hom_solve(dom, t, cons)
    if h is None:
        return None
    out = Cochain(1, p, t, [t.index(v) for v in h.gen_images])
    if differential(out) != c:
        raise ConsistencyError("coboundary solver returned a wrong preimage")
    return out


def standard_cocycle(b: BilinearForm) -> Cocycle:
    """gamma0((x,xi),(y,eta)) = beta(xi, y) on P = G + Gamma."""
    p = FinAbGroup(b.g.orders + b.gamma.orders)
    ng = b.gamma.size
    x, xi = np.divmod(np.arange(p.size), ng)
    return Cocycle(p, b.torus, b.table[xi[:, None], x[None, :]])


def q_map(g: Cochain, rng=None, trials: int = 3) -> AlternatingForm:
    """omega(z, w) = gamma(z, w) - gamma(w, z).

    Checks bilinearity of the result and, with an rng, invariance under
    adding random coboundaries.
    """
    t = g.torus
    tab = t.table[g.table, t.inverse[g.table.T]]
    try:
        w = AlternatingForm(g.p, t, tab)
    except InputError as exc:
        raise ConsistencyError(f"q(gamma) is not an alternating bilinear form: {exc}") from exc
    if rng is not None:
        for _ in range(trials):
            h = Cochain(1, g.p, t, rng.integers(0, t.size, size=g.p.size))
            moved = g + differential(h)
            if t.table[moved.table, t.inverse[moved.table.T]].tolist() != tab.tolist():
                raise ConsistencyError("q is not constant on a cohomology class")
    return w


# --------------------------------------------------------------------------
# central extensions
# --------------------------------------------------------------------------

class CentralExtension:
    """T --inj--> total --proj--> P, exact and central.

    ``inj`` maps torus ids to total ids, ``proj`` total ids to phase ids, and
    ``section`` phase ids to total ids with ``proj o section = id`` and
    ``section(0) = 1``.  Without a section the least id of each fibre is used
    (the identity on the zero fibre).
    """

    def __init__(self, total: FiniteGroup, torus: FinAbGroup, phase: FinAbGroup, inj, proj, section=None):
        self.total, self.torus, self.phase = total, torus, phase
        inj = np.asarray(inj, dtype=np.int64)
        proj = np.asarray(proj, dtype=np.int64)
        try:
            GrpHom(torus, total, inj)
            GrpHom(total, phase, proj)
        except ConsistencyError as exc:
            raise InputError(f"extension maps are not homomorphisms: {exc}") from exc
        if len(np.unique(inj)) != torus.size:
            raise InputError("torus embedding is not injective")
        if len(np.unique(proj)) != phase.size:
            raise InputError("projection is not surjective")
        ker = np.flatnonzero(proj == 0)
        if sorted(ker.tolist()) != sorted(inj.tolist()):
            raise InputError("sequence is not exact at the middle term")
        zmask = K.center_mask(total.table)
        if not zmask[inj].all():
            raise InputError("torus image is not central")
        if section is None:
            section = np.full(phase.size, -1, dtype=np.int64)
            for u in range(total.size):
                if section[proj[u]] < 0:
                    section[proj[u]] = u
            section[0] = total.identity
        section = np.asarray(section, dtype=np.int64)
        if section.shape != (phase.size,) or (proj[section] != np.arange(phase.size)).any():
            raise InputError("section is not a right inverse of the projection")
        if section[0] != total.identity:
            raise InputError("section must send 0 to the identity")
        for a in (inj, proj, section):
            a.setflags(write=False)
        self.inj, self.proj, self.section = inj, proj, section
        tor_of = np.full(total.size, -1, dtype=np.int64)
        tor_of[inj] = np.arange(torus.size)
        self._tor_of = tor_of

    def __repr__(self):
        return f"CentralExtension({self.torus} -> order {self.total.size} -> {self.phase})"

    def torus_subgroup(self) -> GrpSubgroup:
        return GrpSubgroup(self.total, self.inj)

    def torus_id(self, u: int) -> int:
        v = int(self._tor_of[u])
        if v < 0:
            raise InputError("element is not in the torus")
        return v

    def decompose(self, u: int):
        """``(c, z)`` with ``u = inj(c) * section(z)`` (ids)."""
        z = int(self.proj[u])
        rest = self.total.table[u, self.total.inverse[self.section[z]]]
        return self.torus_id(rest), z

    def compose(self, c: int, z: int) -> int:
        return int(self.total.table[self.inj[c], self.section[z]])

    def cocycle(self) -> Cocycle:
        """gamma(z, w) = inj^-1(s(z) s(w) s(z+w)^-1)."""
        tab, s = self.total.table, self.section
        prod = tab[s[:, None], s[None, :]]
        fix = self.total.inverse[s[self.phase.table]]
        vals = self._tor_of[tab[prod, fix]]
        if (vals < 0).any():
            raise ConsistencyError("section products leave the torus coset")
        return Cocycle(self.phase, self.torus, vals)

    def commutator_form(self) -> AlternatingForm:
        s = self.section
        comm = self.total.commutators[s[:, None], s[None, :]]
        vals = self._tor_of[comm]
        if (vals < 0).any():
            raise ConsistencyError("commutators leave the torus")
        return AlternatingForm(self.phase, self.torus, vals)

    def is_strictly_central(self) -> bool:
        return center(self.total) == self.torus_subgroup()


def extension_from_cocycle(g: Cocycle) -> CentralExtension:
    """T x_gamma P with (c,z)(c',z') = (c+c'+gamma(z,z'), z+z'); ids c*|P| + z."""
    t, p = g.torus, g.p
    table = K.twisted_table(t.table, p.table, g.table)
    n = p.size
    labels = [f"{t.element(u // n)};{p.element(u % n)}".replace(" ", "") for u in range(t.size * n)]
    total = FiniteGroup(table, labels, check=False)
    ext = CentralExtension(total, t, p, np.arange(t.size) * n, np.arange(t.size * n) % n, np.arange(n))
    by_center = ext.is_strictly_central()
    by_cocycle = strictly_central_by_cocycle(g)
    if by_center != by_cocycle:
        raise ConsistencyError("strict centrality: centre computation and cocycle criterion disagree")
    return ext


def strictly_central_by_cocycle(g: Cochain) -> bool:
    """True iff gamma(z, .) = gamma(., z) forces z = 0."""
    sym = (g.table == g.table.T).all(axis=1)
    return bool(sym.sum() == 1)


def are_equivalent(e1: CentralExtension, e2: CentralExtension) -> GrpHom | None:
    """An equivalence e1 -> e2 (identity on torus and phase), or None."""
    if e1.torus != e2.torus or e1.phase != e2.phase:
        raise InputError("extensions have different torus or phase group")
    h = is_coboundary(e1.cocycle() - e2.cocycle())
    if h is None:
        return None
    t = e1.torus
    img = np.empty(e1.total.size, dtype=np.int64)
    for u in range(e1.total.size):
        c, z = e1.decompose(u)
        img[u] = e2.compose(int(t.table[c, h.table[z]]), z)
    phi = GrpHom(e1.total, e2.total, img)
    if not phi.is_isomorphism():
        raise ConsistencyError("equivalence map is not bijective")
    if (img[e1.inj] != e2.inj).any() or (e2.proj[img] != e1.proj).any():
        raise ConsistencyError("equivalence map does not commute with the sequences")
    return phi


def _morphism_defect(e1, e2, t: AbHom, p: AbHom) -> Cochain:
    g1, g2 = e1.cocycle(), e2.cocycle()
    return g1.map_values(t) - g2.pullback(p)


def morphism_check(e1: CentralExtension, e2: CentralExtension, t: AbHom, p: AbHom, psi: Cochain):
    """``(ok, h)``: does (t, p, psi) define a morphism of extensions?

    The condition is d1 psi = t_* gamma - p^* gamma'; when it holds the middle
    map h(inj(c) s(z)) = inj'(psi(z) + t(c)) s'(p(z)) is built and verified.
    """
    if t.domain != e1.torus or t.codomain != e2.torus or p.domain != e1.phase or p.codomain != e2.phase:
        raise InputError("t and p do not match the extensions")
    if psi.degree != 1 or psi.p != e1.phase or psi.torus != e2.torus:
        raise InputError("psi must be a 1-cochain P -> T'")
    if differential(psi) != _morphism_defect(e1, e2, t, p):
        return False, None
    tt = e2.torus.table
    img = np.empty(e1.total.size, dtype=np.int64)
    for u in range(e1.total.size):
        c, z = e1.decompose(u)
        img[u] = e2.compose(int(tt[psi.table[z], t.table[c]]), int(p.table[z]))
    h = GrpHom(e1.total, e2.total, img)
    if (img[e1.inj] != e2.inj[t.table]).any() or (e2.proj[img] != p.table[e1.proj]).any():
        raise ConsistencyError("middle map does not commute with the sequences")
    return True, h


def solve_morphism(e1: CentralExtension, e2: CentralExtension, t: AbHom, p: AbHom) -> Cochain | None:
    """A psi completing (t, p) to a morphism of extensions, or None."""
    return is_coboundary(_morphism_defect(e1, e2, t, p))


# --------------------------------------------------------------------------
# bilinear classes in H2
# --------------------------------------------------------------------------

@dataclass
class H2Report:
    n_forms: int
    n_classes: int
    expected: int
    injective: bool
    meets_coboundaries_trivially: bool
    pairwise_inequivalent: bool | None

    @property
    def ok(self) -> bool:
        return (self.injective and self.meets_coboundaries_trivially and self.pairwise_inequivalent is not False
                and self.n_forms == self.expected == self.n_classes)


def hom_tensor_count(gamma: FinAbGroup, g: FinAbGroup, t: FinAbGroup) -> int:
    """|Hom(Gamma (x) G, T)| = prod gcd(n_i, m_j, t_k)."""
    return math.prod(math.gcd(n, m, k) for n in gamma.orders for m in g.orders for k in t.orders)


def bilinear_h2(gamma: FinAbGroup, g: FinAbGroup, t: FinAbGroup, pairwise_limit: int = 32,
                form_limit: int = 4096) -> H2Report:
    """Classes of standard cocycles of all bilinear forms Gamma x G -> T."""
    expected = hom_tensor_count(gamma, g, t)
    if expected > form_limit:
        raise ResourceError(f"{expected} forms exceed the limit {form_limit}")
    forms = list(all_forms(gamma, g, t))
    cocycles = [standard_cocycle(b) for b in forms]
    injective = len({c.table.tobytes() for c in cocycles}) == len(cocycles)
    in_b2 = [is_coboundary(c) is not None for c in cocycles]
    trivial_meet = all(hit == (not b.values.any()) for hit, b in zip(in_b2, forms))
    kernel = sum(in_b2)
    n_classes = len(forms) // kernel if kernel else 0
    pairwise = None
    if len(forms) <= pairwise_limit:
        pairwise = all(is_coboundary(cocycles[i] - cocycles[j]) is None
                       for i in range(len(forms)) for j in range(i + 1, len(forms)))
    return H2Report(len(forms), n_classes, expected, injective, trivial_meet, pairwise)


def h2_order(p: FinAbGroup, t: FinAbGroup) -> int:
    """|H^2(P, T)| by linear algebra: |Z^2_norm| * |Hom(P, T)| / |T|^(|P|-1)."""
    n = p.size
    if n > H2_MAX_P:
        raise ResourceError(f"H2 order is only computed for |P| <= {H2_MAX_P}")
    idx = {}
    for z in range(1, n):
        for w in range(1, n):
            idx[(z, w)] = len(idx)
    rows = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                row = [0] * len(idx)
                for sign, key in ((1, (b, c)), (-1, (int(p.table[a, b]), c)),
                                  (1, (a, int(p.table[b, c]))), (-1, (a, b))):
                    if key in idx:
                        row[idx[key]] += sign
                rows.append(row)
    A = np.array(rows, dtype=np.int64)
    z2 = math.prod(count_solutions(A, m) for m in t.orders)
    homs = math.prod(math.gcd(a, b) for a in p.orders for b in t.orders)
    num = z2 * homs
    den = t.size ** (n - 1)
    if num % den:
        raise ConsistencyError("|Z2| * |Z1| is not divisible by |C1|")
    return num // den


def h2_order_formula(p: FinAbGroup, t: FinAbGroup) -> int:
    """|Ext(P, T)| * |Hom(Lambda^2 P, T)| from generator orders."""
    ext = math.prod(math.gcd(a, b) for a in p.orders for b in t.orders)
    alt = math.prod(math.gcd(p.orders[i], p.orders[j], k)
                    for i in range(p.rank) for j in range(i + 1, p.rank) for k in t.orders)
    return ext * alt


# --------------------------------------------------------------------------
# square-root sections
# --------------------------------------------------------------------------

def _halving_ids(t: FinAbGroup) -> np.ndarray:
    inv2 = np.array([(n + 1) // 2 for n in t.orders], dtype=np.int64)
    return t.ids_of(t.coords * inv2)


def sqrt_section(w: AlternatingForm) -> Cocycle:
    """gamma = omega / 2, defined when |T| is odd; q(gamma) = omega."""
    if w.torus.size % 2 == 0:
        raise InputError("sqrt_section needs a torus of odd order")
    g = Cocycle(w.p, w.torus, _halving_ids(w.torus)[w.table])
    if q_map(g) != w:
        raise ConsistencyError("q(omega/2) != omega")
    return g


def squares_group(t: FinAbGroup):
    """``(S, emb)``: S = T^2 as a FinAbGroup with S-generator k sent to gcd(2, t_k) e_k."""
    s = FinAbGroup(tuple(n // math.gcd(2, n) for n in t.orders))
    imgs = tuple(tuple(math.gcd(2, n) if j == k else 0 for j in range(t.rank)) for k, n in enumerate(t.orders))
    return s, AbHom(s, t, imgs)


def square_root_hom(t: FinAbGroup) -> AbHom:
    """r: T^2 -> T with 2 r(c) = c, from a complement of ker(x -> 2x).

    Raises InputError when the kernel of squaring has no complement.
    """
    s, emb = squares_group(t)
    two = AbHom(t, t, tuple(t.scale(2, t.generator(i)) for i in range(t.rank)))
    ker = two.kernel()
    comp = None
    for c in enumerate_subgroups(t):
        if c.order * ker.order == t.size and c.meet(ker).order == 1:
            comp = c
            break
    if comp is None:
        raise InputError("squaring kernel has no complement, so no partial square root exists")
    root = {}
    for cid in comp.ids:
        root[int(two.table[cid])] = cid
    imgs = []
    for k in range(s.rank):
        target = int(emb.table[s.index(s.generator(k))])
        imgs.append(t.element(root[target]))
    return AbHom(s, t, tuple(imgs))


def partial_sqrt_section(w: AlternatingForm, r: AbHom) -> Cocycle:
    """gamma = r o omega for omega with values in T^2; q(gamma) = omega."""
    t = w.torus
    s, emb = squares_group(t)
    if r.domain != s or r.codomain != t:
        raise InputError("r must map the squares group of T into T")
    double = t.table[r.table, r.table]
    if (double != emb.table).any():
        raise InputError("r is not a square root: 2 r(c) != c")
    back = np.full(t.size, -1, dtype=np.int64)
    back[emb.table] = np.arange(s.size)
    pre = back[w.table]
    if (pre < 0).any():
        raise InputError("omega takes values outside T^2")
    g = Cocycle(w.p, t, r.table[pre])
    if q_map(g) != w:
        raise ConsistencyError("q(r o omega) != omega")
    return g


def skewing_section(chi: AbHom, w: AlternatingForm) -> Cocycle | None:
    """Lift omega through chi: A -> T (|A| odd) and halve in A.

    Each generator value omega(e_i, e_j) is lifted to some a in A killed by
    gcd(p_i, p_j); the lifted alternating form mu satisfies chi o mu = omega,
    and gamma = chi o (mu / 2).  Returns None when some value has no lift.
    """
    a_grp, t, p = chi.domain, chi.codomain, w.p
    if a_grp.size % 2 == 0:
        raise InputError("the skewing group A must have odd order")
    if t != w.torus:
        raise InputError("chi must land in the torus of omega")
    m = [[a_grp.zero] * p.rank for _ in range(p.rank)]
    for i in range(p.rank):
        for j in range(i + 1, p.rank):
            val = w.eval(p.generator(i), p.generator(j))
            lift = solve_lift(chi, val, math.gcd(p.orders[i], p.orders[j]))
            if lift is None:
                return None
            m[i][j] = lift
    mu = AlternatingForm.from_matrix(p, a_grp, m)
    if (chi.table[mu.table] != w.table).any():
        raise ConsistencyError("lifted form does not reduce to omega")
    g = Cocycle(p, t, chi.table[_halving_ids(a_grp)[mu.table]])
    if q_map(g) != w:
        raise ConsistencyError("q(chi o mu/2) != omega")
    return g


def extension_from_group(g: FiniteGroup, t: GrpSubgroup, section=None) -> CentralExtension:
    """View a group with a central subgroup t and abelian quotient as an extension."""
    from .grp import abelian_structure, quotient

    if not (t.is_subgroup() and t.issubset(center(g))):
        raise InputError("torus must be a central subgroup")
    torus, to_t = abelian_structure(g.table, t.ids, g.identity)
    q, qh = quotient(g, t)
    if not q.is_abelian:
        raise InputError("quotient by the torus is not abelian")
    phase, to_p = abelian_structure(q.table, range(q.size), q.identity)
    inj = np.empty(torus.size, dtype=np.int64)
    inj[to_t[t.array]] = t.array
    return CentralExtension(g, torus, phase, inj, to_p[qh.images], section)
