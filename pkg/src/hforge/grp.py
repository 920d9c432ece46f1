"""Finite groups given by full Cayley tables.

Elements are integer ids ``0..n-1``; ``table[a, b]`` is the id of ``a*b``.
Everything here is exhaustive: centres, commutators, normal subgroups and
splittings are found by scanning the table, never by structure theory.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import ConsistencyError, InputError, ResourceError
from .finab import FinAbGroup, max_order

EXHAUSTIVE_ASSOC_LIMIT = 64
SAMPLED_TRIPLES = 10_000


class FiniteGroup:
    """A group table with optional element labels."""

    def __init__(self, table, labels: Sequence[str] | None = None, check: bool = True, seed: int = 0):
        table = np.array(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InputError("a group table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise InputError("table entries must be element ids in range")
        rng = np.arange(n)
        ident = [e for e in range(n) if (table[e] == rng).all() and (table[:, e] == rng).all()]
        if not ident:
            raise InputError("table has no identity element")
        self.identity = ident[0]
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise InputError(f"{len(labels)} labels for {n} elements")
            if len(set(labels)) != n:
                raise InputError("labels must be distinct")
        self.labels = labels
        table.setflags(write=False)
        self.table = table
        if check:
            self._validate(seed)

    def _validate(self, seed):
        n = self.size
        full = np.arange(n)
        if not (np.sort(self.table, axis=1) == full).all() or not (np.sort(self.table, axis=0) == full[:, None]).all():
            raise InputError("table is not a Latin square")
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            bad = K.assoc_violation(self.table)
        else:
            triples = np.random.default_rng(seed).integers(0, n, size=(SAMPLED_TRIPLES, 3))
            bad = K.assoc_violation_sampled(self.table, triples)
        if bad[0] >= 0:
            a, b, c = bad
            raise InputError(f"table is not associative at ({self.label(a)}, {self.label(b)}, {self.label(c)})")

    def __repr__(self):
        return f"FiniteGroup(order={self.size})"

    @property
    def size(self) -> int:
        return self.table.shape[0]

    order = size

    @property
    def identity_id(self) -> int:
        return self.identity

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(int(i))

    def id_of(self, label: str) -> int:
        if not self.labels:
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise InputError(f"unknown element label {label!r}") from exc

    # the factor-group protocol shared with FinAbGroup
    def index(self, a) -> int:
        a = int(a)
        if not 0 <= a < self.size:
            raise InputError(f"element id {a} out of range")
        return a

    def element(self, i: int) -> int:
        return int(i)

    def elements(self) -> list:
        return list(range(self.size))

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse(self) -> np.ndarray:
        out = np.argmax(self.table == self.identity, axis=1)
        out.setflags(write=False)
        return out

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def order_of(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def commutators(self) -> np.ndarray:
        """``commutators[a, b] = a b a^-1 b^-1``."""
        out = K.commutator_table(self.table, self.inverse)
        out.setflags(write=False)
        return out

    def comm(self, a: int, b: int) -> int:
        return int(self.commutators[a, b])

    def whole(self) -> "GrpSubgroup":
        return GrpSubgroup(self, range(self.size))

    def trivial(self) -> "GrpSubgroup":
        return GrpSubgroup(self, [self.identity])

    def to_json(self) -> dict:
        out = {"size": self.size, "table": self.table.tolist()}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        if not isinstance(data, dict) or "table" not in data:
            raise InputError("group-table JSON needs a 'table'")
        table = data["table"]
        if "size" in data and int(data["size"]) != len(table):
            raise InputError("'size' does not match the table")
        return cls(table, data.get("labels"))


class GrpSubgroup:
    """A subset of a FiniteGroup, stored as sorted ids (closure not implied)."""

    def __init__(self, group: FiniteGroup, ids: Iterable[int]):
        self.group = group
        self.ids = tuple(sorted({int(i) for i in np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids).ravel()}))

    def __eq__(self, other):
        return isinstance(other, GrpSubgroup) and other.group is self.group and other.ids == self.ids

    def __hash__(self):
        return hash((id(self.group), self.ids))

    def __repr__(self):
        if self.group.labels and self.order <= 16:
            return "{" + ",".join(self.group.label(i) for i in self.ids) + "}"
        return f"GrpSubgroup(order={self.order})"

    def __len__(self):
        return len(self.ids)

    def __contains__(self, a):
        return bool(self.mask[int(a)])

    def __iter__(self):
        return iter(self.ids)

    @property
    def order(self) -> int:
        return len(self.ids)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.size, dtype=np.bool_)
        m[list(self.ids)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.ids, dtype=np.int64)

    def is_subgroup(self) -> bool:
        if self.group.identity not in self.ids:
            return False
        return bool(self.mask[self.group.table[np.ix_(self.array, self.array)]].all())

    def issubset(self, other: "GrpSubgroup") -> bool:
        return bool((~self.mask | other.mask).all())

    def meet(self, other: "GrpSubgroup") -> "GrpSubgroup":
        return GrpSubgroup(self.group, np.flatnonzero(self.mask & other.mask))

    def product_set(self, other: "GrpSubgroup") -> "GrpSubgroup":
        return GrpSubgroup(self.group, np.unique(self.group.table[np.ix_(self.array, other.array)]))

    def join(self, other: "GrpSubgroup") -> "GrpSubgroup":
        return generate(self.group, self.ids + other.ids)

    def is_abelian(self) -> bool:
        t = self.group.table[np.ix_(self.array, self.array)]
        return bool((t == t.T).all())

    def is_normal(self) -> bool:
        g = self.group
        conj = g.table[g.table[:, self.array], g.inverse[:, None]]  # x s x^-1
        return bool(self.mask[conj].all())

    def as_group(self):
        """``(FiniteGroup, emb)`` where ``emb[i]`` is the ambient id of element i."""
        emb = self.array
        pos = np.full(self.group.size, -1, dtype=np.int64)
        pos[emb] = np.arange(len(emb))
        labels = [self.group.label(i) for i in emb] if self.group.labels else None
        return FiniteGroup(pos[self.group.table[np.ix_(emb, emb)]], labels, check=False), emb


class GrpHom:
    """A map of groups given by the image id of every domain id; verified on construction."""

    def __init__(self, domain, codomain, images, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        images = np.asarray(images, dtype=np.int64)
        if images.shape != (domain.size,):
            raise InputError("a homomorphism needs one image per domain element")
        images.setflags(write=False)
        self.images = images
        if check:
            bad = K.hom_violation(domain.table, codomain.table, images)
            if bad[0] >= 0:
                raise ConsistencyError(f"map is not a homomorphism at {bad}")

    def __call__(self, a) -> int:
        return int(self.images[int(a)])

    def __eq__(self, other):
        return (isinstance(other, GrpHom) and other.domain is self.domain and other.codomain is self.codomain
                and bool((other.images == self.images).all()))

    def __hash__(self):
        return hash(self.images.tobytes())

    def is_injective(self) -> bool:
        return len(np.unique(self.images)) == self.domain.size

    def is_surjective(self) -> bool:
        return len(np.unique(self.images)) == self.codomain.size

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def kernel(self) -> GrpSubgroup:
        return GrpSubgroup(self.domain, np.flatnonzero(self.images == self.codomain.identity))

    def image(self) -> GrpSubgroup:
        return GrpSubgroup(self.codomain, np.unique(self.images))

    def compose(self, first: "GrpHom") -> "GrpHom":
        """``self o first``."""
        return GrpHom(first.domain, self.codomain, self.images[first.images], check=False)

    def inverse(self) -> "GrpHom":
        if not self.is_isomorphism():
            raise InputError("only isomorphisms can be inverted")
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.domain.size)
        return GrpHom(self.codomain, self.domain, inv, check=False)


def group_table_of(g) -> FiniteGroup:
    """A FiniteGroup view of a FinAbGroup (ids coincide)."""
    if isinstance(g, FiniteGroup):
        return g
    labels = ["(" + ",".join(map(str, e)) + ")" for e in g.elements()]
    return FiniteGroup(g.table, labels, check=False)


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, [str(i) for i in range(n)])


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Ids are ``a * |h| + b``."""
    ng, nh = g.size, h.size
    a, b = np.divmod(np.arange(ng * nh), nh)
    table = g.table[a[:, None], a[None, :]] * nh + h.table[b[:, None], b[None, :]]
    labels = None
    if g.labels or h.labels:
        labels = [f"({g.label(i)},{h.label(j)})" for i, j in zip(a, b)]
    return FiniteGroup(table, labels, check=False)


def from_permutations(perms: Sequence[Sequence[int]], labels=None) -> FiniteGroup:
    """Group of a closed list of permutations, composed as ``(p*q)(i) = p(q(i))``."""
    perms = [tuple(p) for p in perms]
    pos = {p: k for k, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            r = tuple(p[q[k]] for k in range(len(q)))
            if r not in pos:
                raise InputError("permutation list is not closed")
            table[i, j] = pos[r]
    return FiniteGroup(table, labels)


def dihedral4() -> FiniteGroup:
    """Symmetries of a square, listed as 1, t, t^2, t^3, r, tr, t^2r, t^3r.

    t is the quarter turn and r a reflection, so t^4 = r^2 = 1 and rt = t^3 r.
    """
    t = (1, 2, 3, 0)
    r = (0, 3, 2, 1)

    def comp(p, q):
        return tuple(p[q[k]] for k in range(4))

    e = (0, 1, 2, 3)
    rot = [e]
    for _ in range(3):
        rot.append(comp(t, rot[-1]))
    perms = rot + [comp(x, r) for x in rot]
    labels = ["1", "t", "t2", "t3", "r", "tr", "t2r", "t3r"]
    return from_permutations(perms, labels)


def quaternion8() -> FiniteGroup:
    """Q8 = {+-1, +-i, +-j, +-k} via unit-quaternion multiplication."""
    names = ["1", "i", "j", "k"]
    # basis products e_a * e_b = sign * e_c
    mult = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, b) for b in range(4) for s in (1, -1)]
    pos = {e: k for k, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for i, (s1, b1) in enumerate(elems):
        for j, (s2, b2) in enumerate(elems):
            s3, b3 = mult[(b1, b2)]
            table[i, j] = pos[(s1 * s2 * s3, b3)]
    labels = [("" if s > 0 else "-") + names[b] for s, b in elems]
    return FiniteGroup(table, labels)


def symmetric3() -> FiniteGroup:
    perms = sorted(itertools.permutations(range(3)))
    labels = ["".join(map(str, p)) for p in perms]
    return from_permutations(perms, labels)


# --------------------------------------------------------------------------
# subgroups, centre, commutators
# --------------------------------------------------------------------------

def generate(g: FiniteGroup, ids: Iterable[int]) -> GrpSubgroup:
    seed = np.zeros(g.size, dtype=np.bool_)
    seed[[int(i) for i in ids]] = True
    seed[g.identity] = True
    return GrpSubgroup(g, np.flatnonzero(K.closure_mask(g.table, seed)))


def center(g: FiniteGroup) -> GrpSubgroup:
    return GrpSubgroup(g, np.flatnonzero(K.center_mask(g.table)))


def centralizer(g: FiniteGroup, s: GrpSubgroup | Iterable[int]) -> GrpSubgroup:
    ids = s.array if isinstance(s, GrpSubgroup) else np.asarray(list(s), dtype=np.int64)
    return GrpSubgroup(g, np.flatnonzero(K.centralizer_mask(g.table, ids)))


def is_self_centralizing(g: FiniteGroup, s: GrpSubgroup) -> bool:
    """C_G(s) <= s."""
    return centralizer(g, s).issubset(s)


def is_maximal_abelian(g: FiniteGroup, s: GrpSubgroup) -> bool:
    """Maximal among abelian subgroups; equivalent to being self-centralising."""
    return s.is_abelian() and is_self_centralizing(g, s)


def commutator_subgroup(g: FiniteGroup) -> GrpSubgroup:
    return generate(g, np.unique(g.commutators))


def is_nilquadratic(g: FiniteGroup):
    """Return ``(flag, witness)``: is [G,G] central?  Witness is a pair (a, b)
    whose commutator is not central, else None.

    The answer is cross-checked against left- and right-linearity of the
    commutator map; a disagreement raises ConsistencyError.
    """
    zmask = K.center_mask(g.table)
    comm = g.commutators
    bad = np.argwhere(~zmask[comm])
    flag = bad.size == 0
    left = K.left_linearity_violation(comm, g.table, g.table)[0] < 0
    right = K.left_linearity_violation(np.ascontiguousarray(comm.T), g.table, g.table)[0] < 0
    if not (flag == left == right):
        raise ConsistencyError(f"nilquadratic={flag} but left-linear={left}, right-linear={right}")
    if flag:
        return True, None
    return False, (int(bad[0, 0]), int(bad[0, 1]))


def cyclic_subgroup_masks(g: FiniteGroup, within: GrpSubgroup | None = None) -> list:
    seen = {}
    for a in (within.ids if within is not None else range(g.size)):
        m = np.zeros(g.size, dtype=np.bool_)
        x = g.identity
        while True:
            m[x] = True
            x = g.mul(x, a)
            if x == g.identity:
                break
        seen.setdefault(m.tobytes(), m)
    return list(seen.values())


def subgroups(g: FiniteGroup, bound: int | None = None, cap: int = 10_000, within: GrpSubgroup | None = None) -> list:
    """All subgroups (of ``within`` if given), sorted by (order, ids)."""
    bound = max_order() if bound is None else bound
    if g.size > bound:
        raise ResourceError(f"|G| = {g.size} exceeds the enumeration bound {bound}")
    cyc = cyclic_subgroup_masks(g, within)
    found = {m.tobytes(): m for m in cyc}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for m in frontier:
            for c in cyc:
                if (c & ~m).any():
                    j = K.closure_mask(g.table, m | c)
                    key = j.tobytes()
                    if key not in found:
                        found[key] = j
                        nxt.append(j)
                        if len(found) > cap:
                            raise ResourceError(f"more than {cap} subgroups")
        frontier = nxt
    subs = [GrpSubgroup(g, np.flatnonzero(m)) for m in found.values()]
    subs.sort(key=lambda s: (s.order, s.ids))
    return subs


def normal_closure(g: FiniteGroup, ids: Iterable[int]) -> GrpSubgroup:
    ids = np.asarray(list(ids), dtype=np.int64)
    conj = g.table[g.table[:, ids], g.inverse[:, None]]
    return generate(g, np.unique(conj))


def normal_subgroups(g: FiniteGroup, bound: int | None = None, cap: int = 10_000) -> list:
    """All normal subgroups: joins (= product sets) of normal closures of elements."""
    bound = max_order() if bound is None else bound
    if g.size > bound:
        raise ResourceError(f"|G| = {g.size} exceeds the enumeration bound {bound}")
    base = {}
    for a in range(g.size):
        n = normal_closure(g, [a])
        base.setdefault(n.ids, n)
    found = dict(base)
    frontier = list(base.values())
    while frontier:
        nxt = []
        for n in frontier:
            for b in base.values():
                if not b.issubset(n):
                    j = n.product_set(b)
                    if j.ids not in found:
                        found[j.ids] = j
                        nxt.append(j)
                        if len(found) > cap:
                            raise ResourceError(f"more than {cap} normal subgroups")
        frontier = nxt
    subs = list(found.values())
    subs.sort(key=lambda s: (s.order, s.ids))
    return subs


def find_complement(g: FiniteGroup, k: GrpSubgroup, t: GrpSubgroup) -> GrpSubgroup | None:
    """The id-least subgroup X <= k with X meet t trivial and |X||t| = |k|."""
    if k.order % t.order:
        return None
    target = k.order // t.order
    tmask = t.mask.copy()
    tmask[g.identity] = False
    cyc = [m for m in cyclic_subgroup_masks(g, k) if not (m & tmask).any()]
    found = {m.tobytes(): m for m in cyc}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for m in frontier:
            if m.sum() >= target:
                continue
            for c in cyc:
                if (c & ~m).any():
                    j = K.closure_mask(g.table, m | c)
                    if (j & tmask).any() or j.sum() > target:
                        continue
                    key = j.tobytes()
                    if key not in found:
                        found[key] = j
                        nxt.append(j)
        frontier = nxt
    hits = [GrpSubgroup(g, np.flatnonzero(m)) for m in found.values() if m.sum() == target]
    if target == 1:
        return g.trivial()
    return min(hits, key=lambda s: s.ids) if hits else None


@dataclass(frozen=True)
class Splitting:
    k: GrpSubgroup
    n: GrpSubgroup
    x: GrpSubgroup
    y: GrpSubgroup
    kind: str           # "abelian" or "normal"

    @property
    def torus(self) -> GrpSubgroup:
        return self.k.meet(self.n)


def is_normal_splitting(g: FiniteGroup, k: GrpSubgroup, n: GrpSubgroup):
    """Return ``(X, Y)`` complements if (k, n) is a normal splitting, else None."""
    if not (k.is_subgroup() and n.is_subgroup() and k.is_normal() and n.is_normal()):
        return None
    t = k.meet(n)
    if k.order * n.order != g.size * t.order:
        return None
    if not t.issubset(center(g)):
        return None
    x = find_complement(g, k, t)
    y = find_complement(g, n, t) if x is not None else None
    if x is None or y is None:
        return None
    return x, y


def find_splittings(g: FiniteGroup, bound: int | None = None) -> list:
    """All normal splittings (K, N) in lexicographic (K ids, N ids) order."""
    bound = max_order() if bound is None else bound
    if g.size > bound:
        raise ResourceError(f"|G| = {g.size} exceeds the enumeration bound {bound}")
    z = center(g)
    normals = normal_subgroups(g, bound)
    out = []
    for k in normals:
        for n in normals:
            t = k.meet(n)
            if k.order * n.order != g.size * t.order or not t.issubset(z):
                continue
            x = find_complement(g, k, t)
            if x is None:
                continue
            y = find_complement(g, n, t)
            if y is None:
                continue
            kind = "abelian" if is_maximal_abelian(g, k) and is_maximal_abelian(g, n) else "normal"
            out.append(Splitting(k, n, x, y, kind))
    out.sort(key=lambda s: (s.k.ids, s.n.ids))
    return out


def quotient(g: FiniteGroup, n: GrpSubgroup):
    """``(G/N, q)``; each coset is represented by its least id, cosets ordered by that id."""
    if not (n.is_subgroup() and n.is_normal()):
        raise InputError("can only divide by a normal subgroup")
    rep = np.full(g.size, -1, dtype=np.int64)
    for a in range(g.size):
        if rep[a] < 0:
            rep[g.table[a, n.array]] = a
    reps = np.unique(rep)
    pos = np.full(g.size, -1, dtype=np.int64)
    pos[reps] = np.arange(len(reps))
    qid = pos[rep]
    table = qid[g.table[np.ix_(reps, reps)]]
    labels = [g.label(r) for r in reps] if g.labels else None
    q = FiniteGroup(table, labels, check=False)
    return q, GrpHom(g, q, qid)


def abelian_structure(table, ids: Iterable[int], identity: int = 0):
    """Decompose an abelian subgroup of a table into cyclic factors.

    Returns ``(A, to_a)`` with ``A`` a FinAbGroup and ``to_a`` an array over
    all table ids giving the A-id of each member (-1 elsewhere).  Basis
    elements are chosen greedily: at each step an element of largest order
    modulo the span so far, corrected inside its coset to have exactly that
    order, so the span grows as a direct sum.
    """
    table = np.asarray(table, dtype=np.int64)
    n = table.shape[0]
    ids = sorted({int(i) for i in ids})
    members = np.zeros(n, dtype=np.bool_)
    members[ids] = True
    span = np.zeros(n, dtype=np.bool_)
    span[identity] = True
    basis, orders = [], []

    def rel_order(y, mask):
        k, x = 1, y
        while not mask[x]:
            x = table[x, y]
            k += 1
        return k

    def power(y, k):
        x = identity
        for _ in range(k):
            x = table[x, y]
        return x

    total = len(ids)
    while span.sum() < total:
        cand = [(rel_order(y, span), -y) for y in ids if not span[y]]
        m, y = max(cand)
        y = -y
        fixed = None
        for s in np.flatnonzero(span):
            z = table[y, s]
            if power(z, m) == identity:
                fixed = int(z)
                break
        if fixed is None:
            raise ConsistencyError("subset is not an abelian subgroup")
        basis.append(fixed)
        orders.append(m)
        cyc = [identity]
        for _ in range(m - 1):
            cyc.append(int(table[cyc[-1], fixed]))
        new = np.zeros(n, dtype=np.bool_)
        new[table[np.ix_(np.flatnonzero(span), cyc)].ravel()] = True
        span = new
    a = FinAbGroup(tuple(orders))
    to_a = np.full(n, -1, dtype=np.int64)
    for aid, coeffs in enumerate(a.elements()):
        x = identity
        for b, c in zip(basis, coeffs):
            x = table[x, power(b, c)]
        to_a[x] = aid
    if (to_a[ids] < 0).any() or len(set(to_a[ids].tolist())) != total:
        raise ConsistencyError("abelian decomposition failed")
    return a, to_a


# --------------------------------------------------------------------------
# homomorphism search
# --------------------------------------------------------------------------

def small_generating_set(g: FiniteGroup, start=()) -> list:
    """Greedy generating set, beginning with the elements of ``start``."""
    gens = [int(a) for a in start]
    current = generate(g, gens) if gens else g.trivial()
    while current.order < g.size:
        best = None
        for a in range(g.size):
            if a in current:
                continue
            s = generate(g, current.ids + (a,))
            if best is None or s.order > best[1].order:
                best = (a, s)
        gens.append(best[0])
        current = best[1]
    return gens


def _extend_from_generators(g: FiniteGroup, h: FiniteGroup, gens, imgs):
    """Extend generator images to a map by breadth-first products, or None."""
    img = np.full(g.size, -1, dtype=np.int64)
    img[g.identity] = h.identity
    queue = [g.identity]
    while queue:
        nxt = []
        for a in queue:
            for s, t in zip(gens, imgs):
                b = g.table[a, s]
                v = h.table[img[a], t]
                if img[b] < 0:
                    img[b] = v
                    nxt.append(b)
                elif img[b] != v:
                    return None
        queue = nxt
    return img


def _greedy_within(g: FiniteGroup, pool: list, target: int) -> list:
    gens = []
    current = g.trivial()
    for a in sorted(pool, key=lambda a: -g.order_of(a)):
        if current.order == target:
            break
        if a not in current:
            gens.append(a)
            current = generate(g, gens)
    return gens


def enumerate_homs(g: FiniteGroup, h: FiniteGroup, limit: int = 1_000_000, fixed: dict | None = None):
    """Every homomorphism g -> h, found by trying all generator images.

    ``fixed`` maps some elements of g to prescribed images; only homomorphisms
    agreeing with it are returned.
    """
    fixed = {int(a): int(b) for a, b in (fixed or {}).items()}
    base = []
    if fixed:
        # generate the fixed part from fixed elements only, so its images are forced
        sub = generate(g, fixed)
        base = _greedy_within(g, list(fixed), sub.order)
    gens = small_generating_set(g, base)
    choices = [[fixed[s]] if s in fixed
               else [t for t in range(h.size) if g.order_of(s) % h.order_of(t) == 0] for s in gens]
    if float(np.prod([len(c) for c in choices], dtype=np.float64)) > limit:
        raise ResourceError("homomorphism search space too large")
    out = []
    for imgs in itertools.product(*choices):
        img = _extend_from_generators(g, h, gens, imgs)
        if img is None or K.hom_violation(g.table, h.table, img)[0] >= 0:
            continue
        if any(img[a] != b for a, b in fixed.items()):
            continue
        out.append(GrpHom(g, h, img, check=False))
    return out


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> GrpHom | None:
    if g.size != h.size:
        return None
    gens = small_generating_set(g)
    choices = [[t for t in range(h.size) if h.order_of(t) == g.order_of(s)] for s in gens]
    for imgs in itertools.product(*choices):
        img = _extend_from_generators(g, h, gens, imgs)
        if img is None or len(np.unique(img)) != g.size:
            continue
        if K.hom_violation(g.table, h.table, img)[0] < 0:
            return GrpHom(g, h, img, check=False)
    return None


def exponent(g: FiniteGroup) -> int:
    return math.lcm(*(g.order_of(a) for a in range(g.size)))
