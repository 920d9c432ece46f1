"""Finite abelian groups given as products of cyclic groups.

A group is ``FinAbGroup((n1, ..., nk))``, i.e. Z_n1 x ... x Z_nk.  Elements are
residue tuples; ids are the lexicographic (mixed radix, last coordinate
fastest) positions of those tuples, so id 0 is always the zero element.

Linear problems over such groups (solving for homomorphisms, coboundaries,
lifts) go through :func:`solve_congruences`, a modular Smith-style
diagonalisation done one prime power at a time and recombined by CRT.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, InputError, ResourceError

AbElement = tuple

DEFAULT_MAX_ORDER = 256


def max_order() -> int:
    """Global enumeration bound, overridable with ``HFORGE_MAX_ORDER``."""
    raw = os.environ.get("HFORGE_MAX_ORDER")
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise InputError(f"HFORGE_MAX_ORDER must be an integer, got {raw!r}") from exc
    return DEFAULT_MAX_ORDER


@dataclass(frozen=True)
class FinAbGroup:
    orders: tuple

    def __post_init__(self):
        try:
            orders = tuple(int(n) for n in self.orders)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cyclic orders must be integers, got {self.orders!r}") from exc
        if any(n < 1 for n in orders):
            raise InputError(f"cyclic orders must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    def __repr__(self):
        if not self.orders:
            return "FinAbGroup(())"
        return "FinAbGroup(" + "x".join(f"Z{n}" for n in self.orders) + ")"

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def identity_id(self) -> int:
        return 0

    @property
    def zero(self) -> AbElement:
        return (0,) * self.rank

    @cached_property
    def _weights(self) -> np.ndarray:
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        return w

    @cached_property
    def coords(self) -> np.ndarray:
        """(size, rank) array; row i is the residue tuple of id i."""
        if not self.rank:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.orders, dtype=np.int64).reshape(self.rank, -1)
        out = grids.T.copy()
        out.setflags(write=False)
        return out

    def elements(self) -> list:
        return [tuple(int(v) for v in row) for row in self.coords]

    def normalize(self, a: Iterable[int]) -> AbElement:
        a = tuple(int(v) for v in a)
        if len(a) != self.rank:
            raise InputError(f"element {a} has {len(a)} coordinates, group {self} needs {self.rank}")
        return tuple(v % n for v, n in zip(a, self.orders))

    def index(self, a: Sequence[int]) -> int:
        a = self.normalize(a)
        return int(np.dot(a, self._weights)) if self.rank else 0

    def element(self, i: int) -> AbElement:
        return tuple(int(v) for v in self.coords[int(i)])

    def ids_of(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised ids of an (..., rank) array of (unreduced) coordinates."""
        coords = np.asarray(coords, dtype=np.int64)
        if not self.rank:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return (coords % np.asarray(self.orders)) @ self._weights

    def add(self, a, b) -> AbElement:
        return ab_add(self, a, b)

    def neg(self, a) -> AbElement:
        return tuple((-v) % n for v, n in zip(self.normalize(a), self.orders))

    def sub(self, a, b) -> AbElement:
        return self.add(a, self.neg(b))

    def scale(self, k: int, a) -> AbElement:
        return tuple((k * v) % n for v, n in zip(self.normalize(a), self.orders))

    def order_of(self, a) -> int:
        a = self.normalize(a)
        return math.lcm(*(n // math.gcd(n, v) for v, n in zip(a, self.orders))) if a else 1

    @cached_property
    def table(self) -> np.ndarray:
        """Addition table on ids."""
        c = self.coords
        out = self.ids_of(c[:, None, :] + c[None, :, :])
        out.setflags(write=False)
        return out

    @cached_property
    def inverse(self) -> np.ndarray:
        out = self.ids_of(-self.coords)
        out.setflags(write=False)
        return out

    def generator(self, i: int) -> AbElement:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}

    @classmethod
    def from_json(cls, data) -> "FinAbGroup":
        if not isinstance(data, dict) or "orders" not in data:
            raise InputError("group JSON needs an 'orders' list")
        if not isinstance(data["orders"], list):
            raise InputError("'orders' must be a list of integers")
        return cls(tuple(data["orders"]))


def ab_add(g: FinAbGroup, a, b) -> AbElement:
    a, b = g.normalize(a), g.normalize(b)
    return tuple((x + y) % n for x, y, n in zip(a, b, g.orders))


def direct_sum(*groups: FinAbGroup) -> FinAbGroup:
    return FinAbGroup(tuple(itertools.chain.from_iterable(g.orders for g in groups)))


# --------------------------------------------------------------------------
# homomorphisms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AbHom:
    """Homomorphism given by the images of the standard generators."""

    domain: FinAbGroup
    codomain: FinAbGroup
    gen_images: tuple

    def __post_init__(self):
        if len(self.gen_images) != self.domain.rank:
            raise InputError(
                f"need {self.domain.rank} generator images, got {len(self.gen_images)}")
        imgs = tuple(self.codomain.normalize(v) for v in self.gen_images)
        for n, v in zip(self.domain.orders, imgs):
            if any(v2 != 0 for v2 in self.codomain.scale(n, v)):
                raise InputError(f"image {v} of a generator of order {n} is not killed by {n}")
        object.__setattr__(self, "gen_images", imgs)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.gen_images, dtype=np.int64).reshape(self.domain.rank, self.codomain.rank)

    def __call__(self, a) -> AbElement:
        a = np.asarray(self.domain.normalize(a), dtype=np.int64)
        v = a @ self.matrix if self.domain.rank else np.zeros(self.codomain.rank, dtype=np.int64)
        return self.codomain.normalize(v)

    @cached_property
    def table(self) -> np.ndarray:
        """Image id of every domain id."""
        out = self.codomain.ids_of(self.domain.coords @ self.matrix)
        out.setflags(write=False)
        return out

    def kernel(self) -> "AbSubgroup":
        return AbSubgroup(self.domain, np.flatnonzero(self.table == 0))

    def image(self) -> "AbSubgroup":
        return AbSubgroup(self.codomain, np.unique(self.table))

    def compose(self, first: "AbHom") -> "AbHom":
        """``self o first``."""
        return AbHom(first.domain, self.codomain, tuple(self(v) for v in first.gen_images))

    @classmethod
    def zero(cls, domain: FinAbGroup, codomain: FinAbGroup) -> "AbHom":
        return cls(domain, codomain, tuple(codomain.zero for _ in domain.orders))

    @classmethod
    def identity(cls, g: FinAbGroup) -> "AbHom":
        return cls(g, g, tuple(g.generator(i) for i in range(g.rank)))


# --------------------------------------------------------------------------
# subgroups
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AbSubgroup:
    ambient: FinAbGroup
    ids: tuple

    def __init__(self, ambient: FinAbGroup, ids):
        ids = tuple(sorted({int(i) for i in np.asarray(ids, dtype=np.int64).ravel()}))
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "ids", ids)

    def __eq__(self, other):
        return isinstance(other, AbSubgroup) and self.ambient == other.ambient and self.ids == other.ids

    def __hash__(self):
        return hash((self.ambient, self.ids))

    def __repr__(self):
        return f"AbSubgroup(order={self.order}, generators={self.generators})"

    def __len__(self):
        return len(self.ids)

    def __contains__(self, a) -> bool:
        i = a if isinstance(a, (int, np.integer)) else self.ambient.index(a)
        return bool(self.mask[int(i)])

    @property
    def order(self) -> int:
        return len(self.ids)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.ambient.size, dtype=np.bool_)
        m[list(self.ids)] = True
        m.setflags(write=False)
        return m

    @property
    def elements(self) -> list:
        return [self.ambient.element(i) for i in self.ids]

    def is_subgroup(self) -> bool:
        if not self.ids or self.ids[0] != 0:
            return False
        idx = np.asarray(self.ids)
        return bool(self.mask[self.ambient.table[np.ix_(idx, idx)]].all())

    @cached_property
    def generators(self) -> tuple:
        """An irredundant generating list, chosen greedily by largest growth."""
        gens = []
        current = np.zeros(self.ambient.size, dtype=np.bool_)
        current[0] = True
        while current.sum() < self.order:
            best, best_size, best_mask = None, -1, None
            for i in self.ids:
                if current[i]:
                    continue
                m = _sum_mask(self.ambient, current, _cyclic_mask(self.ambient, i))
                s = int(m.sum())
                if s > best_size:
                    best, best_size, best_mask = i, s, m
            gens.append(self.ambient.element(best))
            current = best_mask
        return tuple(gens)

    def issubset(self, other: "AbSubgroup") -> bool:
        return set(self.ids) <= set(other.ids)

    def meet(self, other: "AbSubgroup") -> "AbSubgroup":
        return AbSubgroup(self.ambient, sorted(set(self.ids) & set(other.ids)))

    def join(self, other: "AbSubgroup") -> "AbSubgroup":
        a, b = np.asarray(self.ids), np.asarray(other.ids)
        return AbSubgroup(self.ambient, np.unique(self.ambient.table[np.ix_(a, b)]))

    def __add__(self, other):
        return self.join(other)

    @classmethod
    def trivial(cls, g: FinAbGroup) -> "AbSubgroup":
        return cls(g, [0])

    @classmethod
    def whole(cls, g: FinAbGroup) -> "AbSubgroup":
        return cls(g, range(g.size))

    def to_json(self) -> dict:
        return {"generators": [list(v) for v in self.generators]}


def _cyclic_mask(g: FinAbGroup, i: int) -> np.ndarray:
    m = np.zeros(g.size, dtype=np.bool_)
    k = 0
    while True:
        m[k] = True
        k = int(g.table[k, i])
        if k == 0:
            return m


def _sum_mask(g: FinAbGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(g.size, dtype=np.bool_)
    out[g.table[np.ix_(np.flatnonzero(a), np.flatnonzero(b))].ravel()] = True
    return out


def subgroup_generated(g: FinAbGroup, elements: Iterable) -> AbSubgroup:
    m = np.zeros(g.size, dtype=np.bool_)
    m[0] = True
    for a in elements:
        m = _sum_mask(g, m, _cyclic_mask(g, g.index(a)))
    return AbSubgroup(g, np.flatnonzero(m))


def cyclic_subgroups(g: FinAbGroup) -> list:
    seen = {}
    for i in range(g.size):
        m = _cyclic_mask(g, i)
        key = m.tobytes()
        if key not in seen:
            seen[key] = AbSubgroup(g, np.flatnonzero(m))
    return list(seen.values())


def enumerate_subgroups(g: FinAbGroup, bound: int | None = None, cap: int = 10_000) -> list:
    """All subgroups of ``g``, sorted by (order, element ids).

    Subgroups are generated as joins of cyclic subgroups; in an abelian group
    the join of two subgroups is their sumset, so no closure loop is needed.
    """
    bound = max_order() if bound is None else bound
    if g.size > bound:
        raise ResourceError(f"|G| = {g.size} exceeds the enumeration bound {bound}")
    cyclic = cyclic_subgroups(g)
    masks = {c.mask.tobytes(): c.mask for c in cyclic}
    frontier = list(masks.values())
    cyc = [c.mask for c in cyclic]
    while frontier:
        nxt = []
        for m in frontier:
            for c in cyc:
                if (c & ~m).any():
                    j = _sum_mask(g, m, c)
                    key = j.tobytes()
                    if key not in masks:
                        masks[key] = j
                        nxt.append(j)
                        if len(masks) > cap:
                            raise ResourceError(f"more than {cap} subgroups in {g}")
        frontier = nxt
    subs = [AbSubgroup(g, np.flatnonzero(m)) for m in masks.values()]
    subs.sort(key=lambda s: (s.order, s.ids))
    return subs


def quotient_map(g: FinAbGroup, s: AbSubgroup):
    """Return ``(Q, q)`` with ``Q`` a FinAbGroup and ``q`` the id map G -> Q."""
    from .grp import abelian_structure  # local: grp depends on finab

    coset_rep = np.full(g.size, -1, dtype=np.int64)
    sid = np.asarray(s.ids)
    for i in range(g.size):
        if coset_rep[i] < 0:
            coset_rep[g.table[i, sid]] = i
    reps = np.unique(coset_rep)
    pos = {int(r): k for k, r in enumerate(reps)}
    qid = np.array([pos[int(r)] for r in coset_rep], dtype=np.int64)
    qtable = qid[g.table[np.ix_(reps, reps)]]
    q_group, to_q = abelian_structure(qtable, range(len(reps)))
    return q_group, to_q[qid]


# --------------------------------------------------------------------------
# linear congruences
# --------------------------------------------------------------------------

def _prime_powers(m: int) -> list:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append((p, q))
        p += 1
    if m > 1:
        out.append((m, m))
    return out


def _valuation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """p-adic valuation of entries of ``a`` (taken mod q); zero gets log_p q."""
    a = a % q
    out = np.full(a.shape, round(math.log(q, p)), dtype=np.int64)
    nz = a != 0
    work = a[nz]
    vv = np.zeros(work.shape, dtype=np.int64)
    while True:
        div = work % p == 0
        if not div.any():
            break
        work = np.where(div, work // p, work)
        vv += div
    out[nz] = vv
    return out


def _diagonalise(A: np.ndarray, b: np.ndarray, p: int, q: int):
    """Reduce A x = b (mod q=p^e) to diagonal form with unimodular operations.

    Returns ``(diag, rhs, V)`` where the system is equivalent to
    ``diag[k] * y[k] = rhs[k]`` for k < len(diag), ``0 = rhs[k]`` beyond, and
    ``x = V y``.
    """
    R = np.array(A, dtype=np.int64) % q
    rhs = np.array(b, dtype=np.int64) % q
    r, n = R.shape
    V = np.eye(n, dtype=np.int64)
    diag = []
    for k in range(min(r, n)):
        sub = R[k:, k:]
        if not sub.any():
            break
        val = _valuation(sub, p, q)
        i, j = np.unravel_index(int(np.argmin(val)), val.shape)
        i += k
        j += k
        if i != k:
            R[[k, i]] = R[[i, k]]
            rhs[[k, i]] = rhs[[i, k]]
        if j != k:
            R[:, [k, j]] = R[:, [j, k]]
            V[:, [k, j]] = V[:, [j, k]]
        a = int(R[k, k])
        d = p ** int(val.min())
        u_inv = pow(a // d, -1, q)
        R[k] = (R[k] * u_inv) % q
        rhs[k] = (rhs[k] * u_inv) % q
        col = R[:, k] // d
        col[k] = 0
        R -= np.outer(col, R[k])
        R %= q
        rhs = (rhs - col * rhs[k]) % q
        row = R[k] // d
        row[k] = 0
        R -= np.outer(R[:, k], row)
        R %= q
        V = (V - np.outer(V[:, k], row)) % q
        diag.append(d)
    return diag, rhs, V


def _solve_prime_power(A, b, p, q):
    diag, rhs, V = _diagonalise(A, b, p, q)
    n = V.shape[0]
    if (rhs[len(diag):] % q).any():
        return None
    y = np.zeros(n, dtype=np.int64)
    for k, d in enumerate(diag):
        if rhs[k] % d:
            return None
        y[k] = rhs[k] // d
    return (V @ y) % q


def solve_congruences(A, b, m: int):
    """One solution ``x`` of ``A x = b (mod m)`` as an int64 array, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if A.ndim != 2:
        A = A.reshape(len(b), -1)
    n = A.shape[1]
    if m == 1:
        return np.zeros(n, dtype=np.int64)
    x = np.zeros(n, dtype=np.int64)
    modulus = 1
    for p, q in _prime_powers(m):
        xq = _solve_prime_power(A, b, p, q)
        if xq is None:
            return None
        # CRT combine x (mod modulus) with xq (mod q)
        inv = pow(modulus, -1, q)
        t = ((xq - x) % q) * inv % q
        x = x + modulus * t
        modulus *= q
    return x % m


def count_solutions(A, m: int) -> int:
    """Number of solutions of the homogeneous system ``A x = 0 (mod m)``."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    total = 1
    for p, q in _prime_powers(m):
        diag, _, _ = _diagonalise(A, np.zeros(A.shape[0], dtype=np.int64), p, q)
        total *= math.prod(diag) * q ** (n - len(diag))
    return total


def hom_solve(g: FinAbGroup, t: FinAbGroup, constraints) -> AbHom | None:
    """Find a homomorphism h: g -> t with h(a) = b for every (a, b) given.

    Each target coordinate Z_{t_l} is an independent system: unknowns are the
    l-th coordinates of the generator images, rows are the constraints plus
    the well-definedness rows ``n_i h_i = 0``.
    """
    constraints = [(g.normalize(a), t.normalize(b)) for a, b in constraints]
    k = g.rank
    rows = np.array([a for a, _ in constraints], dtype=np.int64).reshape(len(constraints), k)
    wd = np.diag(np.asarray(g.orders, dtype=np.int64)).reshape(k, k)
    A = np.vstack([rows, wd])
    images = np.zeros((k, t.rank), dtype=np.int64)
    for l, m in enumerate(t.orders):
        rhs = np.array([bb[l] for _, bb in constraints] + [0] * k, dtype=np.int64)
        x = solve_congruences(A, rhs, m)
        if x is None:
            return None
        images[:, l] = x
    return AbHom(g, t, tuple(tuple(int(v) for v in row) for row in images))


def elements_killed_by(t: FinAbGroup, d: int) -> list:
    """Elements c of t with d*c = 0 (the d-torsion)."""
    return [c for c in t.elements() if all(v == 0 for v in t.scale(d, c))]


def all_homs(g: FinAbGroup, t: FinAbGroup) -> list:
    """Every homomorphism g -> t (enumeration; keep groups small)."""
    choices = [elements_killed_by(t, n) for n in g.orders]
    return [AbHom(g, t, imgs) for imgs in itertools.product(*choices)]


def solve_lift(chi: AbHom, target, killed_by: int = 0):
    """Some a in chi.domain with chi(a) = target and killed_by * a = 0, or None.

    The equations live modulo the various torus and domain orders; each is
    rescaled to the common modulus L = lcm of all of them before solving.
    """
    a_grp, t_grp = chi.domain, chi.codomain
    target = t_grp.normalize(target)
    rows, rhs, mods = [], [], []
    for l, m in enumerate(t_grp.orders):
        rows.append(chi.matrix[:, l].tolist())
        rhs.append(target[l])
        mods.append(m)
    if killed_by:
        for k, n in enumerate(a_grp.orders):
            row = [0] * a_grp.rank
            row[k] = killed_by
            rows.append(row)
            rhs.append(0)
            mods.append(n)
    if not rows or not a_grp.rank:
        return a_grp.zero if not any(target) else None
    big = math.lcm(*mods)
    A = np.array([[v * (big // m) for v in row] for row, m in zip(rows, mods)], dtype=np.int64)
    b = np.array([v * (big // m) for v, m in zip(rhs, mods)], dtype=np.int64)
    x = solve_congruences(A, b, big)
    if x is None:
        return None
    a = a_grp.normalize(x.tolist())
    if chi(a) != target:
        raise ConsistencyError("lift solver returned a non-solution")
    return a
